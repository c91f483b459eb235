//! Seeded random instances: algebras, derivations and DGAs.
//!
//! Random DGAs are built so that `d^2 = 0` holds over the integers: each
//! generator's differential only involves earlier generators that are cycles.
//! Their verbatim lifts to any `Z/p^m` are therefore again DGAs.

use rand::Rng;

use super::{Derivation, FreeAlgebra, FreeDga, GenId, GeneratorSpec, NCPoly};
use crate::ring_core::BaseRing;

/// Instance grammar bounds.
#[derive(Debug, Clone, Copy)]
pub struct InstanceShape {
    pub max_generators: usize,
    pub max_weight: u32,
    pub min_degree: i32,
    pub max_degree: i32,
}

impl Default for InstanceShape {
    fn default() -> Self {
        InstanceShape { max_generators: 3, max_weight: 3, min_degree: -2, max_degree: 1 }
    }
}

pub fn random_generators<R: Rng>(rng: &mut R, shape: &InstanceShape) -> Vec<GeneratorSpec> {
    let count = rng.random_range(1..=shape.max_generators);
    (0..count)
        .map(|i| {
            GeneratorSpec::new(
                format!("x{i}"),
                rng.random_range(shape.min_degree..=shape.max_degree),
                rng.random_range(1..=shape.max_weight),
            )
        })
        .collect()
}

fn random_coef<R: Rng>(rng: &mut R, ring: &BaseRing) -> u64 {
    rng.random_range(0..ring.modulus())
}

/// A random weight-preserving derivation of the given degree, with a random
/// coefficient on every admissible word.
pub fn random_derivation<R: Rng>(rng: &mut R, alg: &FreeAlgebra, degree: i32) -> Derivation {
    let ring = alg.ring();
    let values = (0..alg.num_generators())
        .map(|g| {
            let spec = &alg.generators()[g];
            let mut v = NCPoly::zero();
            for w in alg.words_of_weight(spec.weight) {
                if alg.word_degree(&w) == spec.degree as i64 + degree as i64 {
                    v.add_term(&ring, w, random_coef(rng, &ring));
                }
            }
            v
        })
        .collect();
    Derivation { degree, values }
}

/// A random DGA whose differential squares to zero over the integers.
///
/// Generators are drawn in order. A later generator is often made a primitive
/// of a short word in earlier cycles: its weight and degree are chosen so that
/// the word is an admissible value, and that word gets a nonzero coefficient.
/// Otherwise its weight and degree are uniform. Either way `d` of a generator
/// is a random combination of words in earlier cycles.
pub fn random_dga<R: Rng>(rng: &mut R, ring: BaseRing, shape: &InstanceShape) -> FreeDga {
    let count = rng.random_range(1..=shape.max_generators);
    let mut gens: Vec<GeneratorSpec> = Vec::new();
    let mut values: Vec<NCPoly> = Vec::new();
    let mut cycle: Vec<bool> = Vec::new();
    for i in 0..count {
        let name = format!("x{i}");
        let cycles: Vec<GenId> = (0..i).filter(|&j| cycle[j]).map(|j| j as GenId).collect();
        let mut target = None;
        if !cycles.is_empty() && rng.random_bool(0.7) {
            let len = rng.random_range(1..=2);
            let word: Vec<GenId> = (0..len).map(|_| cycles[rng.random_range(0..cycles.len())]).collect();
            let weight: u32 = word.iter().map(|&j| gens[j as usize].weight).sum();
            let degree = word.iter().map(|&j| gens[j as usize].degree).sum::<i32>() - 1;
            if weight <= shape.max_weight && (shape.min_degree..=shape.max_degree).contains(&degree) {
                target = Some((GeneratorSpec::new(name.clone(), degree, weight), word));
            }
        }
        let spec = match &target {
            Some((spec, _)) => spec.clone(),
            None => GeneratorSpec::new(
                name,
                rng.random_range(shape.min_degree..=shape.max_degree),
                rng.random_range(1..=shape.max_weight),
            ),
        };
        gens.push(spec.clone());
        let alg = FreeAlgebra::new(ring, gens.clone()).expect("fresh names");
        let mut v = NCPoly::zero();
        for w in alg.words_of_weight(spec.weight) {
            let admissible = alg.word_degree(&w) == spec.degree as i64 + 1
                && w.iter().all(|&x| cycle.get(x as usize) == Some(&true));
            if admissible {
                let c = match &target {
                    Some((_, t)) if *t == w => rng.random_range(1..ring.modulus()),
                    _ => random_coef(rng, &ring),
                };
                v.add_term(&ring, w, c);
            }
        }
        cycle.push(v.is_zero());
        values.push(v);
    }
    let alg = FreeAlgebra::new(ring, gens).expect("fresh names");
    FreeDga::new(alg, Derivation { degree: 1, values }).expect("closed construction squares to zero")
}
