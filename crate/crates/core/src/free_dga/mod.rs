//! Free graded associative algebras over `Z/p^n` with a weight grading, their
//! derivations, and the mod-`p` / `Z/p^2` lifting machinery.
//!
//! Degrees are cohomological: a differential raises degree by one. Every
//! generator has weight at least one and every derivation preserves weight, so
//! each weight piece of the algebra is a finite free module.

mod io;
mod poly;
pub mod random;

use std::collections::HashMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ring_core::{BaseRing, RingError};

pub use io::{parse_algebra, parse_lift, AlgebraDoc, ParseError};
pub use poly::{GenId, NCPoly, Word};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DgaError {
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("duplicate generator `{0}`")]
    DuplicateGenerator(String),
    #[error("generator `{0}` has weight 0; weights must be at least 1")]
    ZeroWeight(String),
    #[error("too many generators ({0})")]
    TooManyGenerators(usize),
    #[error("derivation value on `{generator}` contains `{word}` of weight {found}, expected {expected}")]
    WeightViolation { generator: String, word: String, found: u32, expected: u32 },
    #[error("derivation value on `{generator}` contains `{word}` of degree {found}, expected {expected}")]
    DegreeViolation { generator: String, word: String, found: i64, expected: i64 },
    #[error("differential must have degree +1, got {0}")]
    DifferentialDegree(i32),
    #[error("d^2({generator}) = {value} is not zero")]
    DifferentialNotSquareZero { generator: String, value: String },
    #[error("reduction mod p of the lifted differential has d^2({generator}) = {value} != 0")]
    ReducedDifferentialNotSquareZero { generator: String, value: String },
    #[error("d~^2({generator}) = {value} has a coefficient that is a unit; not a lift of a square-zero differential")]
    NotLiftOfSquareZero { generator: String, value: String },
    #[error("[d, D]({generator}) = {value} is not zero")]
    ObstructionNotClosed { generator: String, value: String },
    #[error("expected base ring {expected}, got {found}")]
    WrongBase { expected: String, found: String },
    #[error("derivation has {found} values but the algebra has {expected} generators")]
    Arity { expected: usize, found: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GeneratorSpec {
    pub name: String,
    pub degree: i32,
    pub weight: u32,
}

impl GeneratorSpec {
    pub fn new(name: impl Into<String>, degree: i32, weight: u32) -> Self {
        GeneratorSpec { name: name.into(), degree, weight }
    }
}

/// The free graded algebra on a list of generators, without a differential.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FreeAlgebra {
    ring: BaseRing,
    gens: Vec<GeneratorSpec>,
    index: HashMap<String, GenId>,
}

impl FreeAlgebra {
    pub fn new(ring: BaseRing, gens: Vec<GeneratorSpec>) -> Result<Self, DgaError> {
        if gens.len() > GenId::MAX as usize {
            return Err(DgaError::TooManyGenerators(gens.len()));
        }
        let mut index = HashMap::new();
        for (i, g) in gens.iter().enumerate() {
            if g.weight == 0 {
                return Err(DgaError::ZeroWeight(g.name.clone()));
            }
            if index.insert(g.name.clone(), i as GenId).is_some() {
                return Err(DgaError::DuplicateGenerator(g.name.clone()));
            }
        }
        Ok(FreeAlgebra { ring, gens, index })
    }

    pub fn ring(&self) -> BaseRing {
        self.ring
    }

    pub fn generators(&self) -> &[GeneratorSpec] {
        &self.gens
    }

    pub fn num_generators(&self) -> usize {
        self.gens.len()
    }

    pub fn generator(&self, name: &str) -> Result<GenId, DgaError> {
        self.index.get(name).copied().ok_or_else(|| DgaError::UnknownGenerator(name.to_string()))
    }

    pub fn name(&self, g: GenId) -> &str {
        &self.gens[g as usize].name
    }

    /// Same generators over another power of the same prime.
    pub fn with_ring(&self, ring: BaseRing) -> FreeAlgebra {
        FreeAlgebra { ring, gens: self.gens.clone(), index: self.index.clone() }
    }

    pub fn word_degree(&self, w: &[GenId]) -> i64 {
        w.iter().map(|&g| self.gens[g as usize].degree as i64).sum()
    }

    pub fn word_weight(&self, w: &[GenId]) -> u32 {
        w.iter().map(|&g| self.gens[g as usize].weight).sum()
    }

    /// Parses a word written as generator names separated by `*` or spaces;
    /// `1` and the empty string denote the unit.
    pub fn parse_word(&self, s: &str) -> Result<Word, DgaError> {
        let s = s.trim();
        if s.is_empty() || s == "1" {
            return Ok(Vec::new());
        }
        s.split(|c: char| c == '*' || c.is_whitespace()).filter(|t| !t.is_empty()).map(|t| self.generator(t)).collect()
    }

    pub fn format_word(&self, w: &[GenId]) -> String {
        if w.is_empty() {
            return "1".to_string();
        }
        w.iter().map(|&g| self.name(g)).collect::<Vec<_>>().join("*")
    }

    pub fn format_poly(&self, f: &NCPoly) -> String {
        if f.is_zero() {
            return "0".to_string();
        }
        f.terms().map(|(w, c)| format!("{c}*{}", self.format_word(w))).collect::<Vec<_>>().join(" + ")
    }

    /// All words of the given weight, ordered by length then lexicographically.
    pub fn words_of_weight(&self, weight: u32) -> Vec<Word> {
        let mut table: Vec<Vec<Word>> = vec![vec![Vec::new()]];
        for w in 1..=weight {
            let mut here = Vec::new();
            for (g, spec) in self.gens.iter().enumerate() {
                if spec.weight > w {
                    continue;
                }
                for rest in &table[(w - spec.weight) as usize] {
                    let mut word = Vec::with_capacity(rest.len() + 1);
                    word.push(g as GenId);
                    word.extend_from_slice(rest);
                    here.push(word);
                }
            }
            table.push(here);
        }
        let mut out = table.swap_remove(weight as usize);
        out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        out
    }

    /// Checks that every value of `der` is homogeneous of the right weight and degree.
    pub fn validate_derivation(&self, der: &Derivation) -> Result<(), DgaError> {
        if der.values.len() != self.gens.len() {
            return Err(DgaError::Arity { expected: self.gens.len(), found: der.values.len() });
        }
        for (g, spec) in self.gens.iter().enumerate() {
            for (w, _) in der.values[g].terms() {
                let wt = self.word_weight(w);
                if wt != spec.weight {
                    return Err(DgaError::WeightViolation {
                        generator: spec.name.clone(),
                        word: self.format_word(w),
                        found: wt,
                        expected: spec.weight,
                    });
                }
                let deg = self.word_degree(w);
                let expected = spec.degree as i64 + der.degree as i64;
                if deg != expected {
                    return Err(DgaError::DegreeViolation {
                        generator: spec.name.clone(),
                        word: self.format_word(w),
                        found: deg,
                        expected,
                    });
                }
            }
        }
        Ok(())
    }

    /// Graded Leibniz extension: `D(a_1 ... a_k) = sum (-1)^{r |a_1...a_{i-1}|} a_1 .. D(a_i) .. a_k`.
    pub fn apply_word(&self, der: &Derivation, word: &[GenId], coef: u64, out: &mut NCPoly) {
        let ring = self.ring;
        let r_odd = der.degree % 2 != 0;
        let mut prefix_odd = false;
        for (i, &g) in word.iter().enumerate() {
            let s = ring.mul(coef, ring.sign(r_odd && prefix_odd));
            for (v, c) in der.values[g as usize].terms() {
                let mut w = Vec::with_capacity(word.len() + v.len());
                w.extend_from_slice(&word[..i]);
                w.extend_from_slice(v);
                w.extend_from_slice(&word[i + 1..]);
                out.add_term(&ring, w, ring.mul(s, c));
            }
            prefix_odd ^= self.gens[g as usize].degree % 2 != 0;
        }
    }

    pub fn apply(&self, der: &Derivation, f: &NCPoly) -> NCPoly {
        let mut out = NCPoly::zero();
        for (w, c) in f.terms() {
            self.apply_word(der, w, c, &mut out);
        }
        out
    }

    /// Graded commutator `[D1, D2] = D1 D2 - (-1)^{|D1||D2|} D2 D1`, a derivation
    /// of degree `|D1| + |D2|`.
    pub fn bracket(&self, d1: &Derivation, d2: &Derivation) -> Derivation {
        let ring = self.ring;
        let sign = ring.neg(ring.sign(d1.degree % 2 != 0 && d2.degree % 2 != 0));
        let values = (0..self.gens.len())
            .map(|g| {
                let a = self.apply(d1, &d2.values[g]);
                let b = self.apply(d2, &d1.values[g]);
                a.add(&ring, &b.scale(&ring, sign))
            })
            .collect();
        Derivation { degree: d1.degree + d2.degree, values }
    }

    /// `D1 ∘ D2` on generators (not a derivation in general).
    pub fn compose_on_generators(&self, d1: &Derivation, d2: &Derivation) -> Vec<NCPoly> {
        d2.values.iter().map(|v| self.apply(d1, v)).collect()
    }
}

/// A derivation given by its values on generators, indexed by [`GenId`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Derivation {
    pub degree: i32,
    pub values: Vec<NCPoly>,
}

impl Derivation {
    pub fn zero(num_gens: usize, degree: i32) -> Self {
        Derivation { degree, values: vec![NCPoly::zero(); num_gens] }
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(NCPoly::is_zero)
    }

    pub fn value(&self, g: GenId) -> &NCPoly {
        &self.values[g as usize]
    }

    pub fn add(&self, ring: &BaseRing, other: &Derivation) -> Derivation {
        assert_eq!(self.degree, other.degree, "adding derivations of different degrees");
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a.add(ring, b)).collect();
        Derivation { degree: self.degree, values }
    }

    pub fn sub(&self, ring: &BaseRing, other: &Derivation) -> Derivation {
        assert_eq!(self.degree, other.degree, "subtracting derivations of different degrees");
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a.sub(ring, b)).collect();
        Derivation { degree: self.degree, values }
    }

    pub fn scale(&self, ring: &BaseRing, c: u64) -> Derivation {
        Derivation { degree: self.degree, values: self.values.iter().map(|v| v.scale(ring, c)).collect() }
    }

    pub fn reduce_to(&self, target: &BaseRing) -> Derivation {
        Derivation { degree: self.degree, values: self.values.iter().map(|v| v.reduce_to(target)).collect() }
    }
}

/// A validated free DG algebra: `d` has degree +1, preserves weight, and `d^2 = 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FreeDga {
    algebra: FreeAlgebra,
    d: Derivation,
}

pub fn make_algebra(base: BaseRing, gens: Vec<GeneratorSpec>, d: Derivation) -> Result<FreeDga, DgaError> {
    FreeDga::new(FreeAlgebra::new(base, gens)?, d)
}

impl FreeDga {
    pub fn new(algebra: FreeAlgebra, d: Derivation) -> Result<Self, DgaError> {
        if d.degree != 1 {
            return Err(DgaError::DifferentialDegree(d.degree));
        }
        algebra.validate_derivation(&d)?;
        for (g, dd) in algebra.compose_on_generators(&d, &d).iter().enumerate() {
            if !dd.is_zero() {
                return Err(DgaError::DifferentialNotSquareZero {
                    generator: algebra.name(g as GenId).to_string(),
                    value: algebra.format_poly(dd),
                });
            }
        }
        Ok(FreeDga { algebra, d })
    }

    /// The base ring with no generators.
    pub fn base(ring: BaseRing) -> Self {
        FreeDga { algebra: FreeAlgebra::new(ring, Vec::new()).unwrap(), d: Derivation::zero(0, 1) }
    }

    pub fn algebra(&self) -> &FreeAlgebra {
        &self.algebra
    }

    pub fn ring(&self) -> BaseRing {
        self.algebra.ring
    }

    pub fn differential(&self) -> &Derivation {
        &self.d
    }

    /// The same structure constants read over `Z/p^m` (representatives kept).
    /// The result is a valid DGA only if `d^2` still vanishes there.
    pub fn lift_verbatim(&self, m: u32) -> Result<(FreeAlgebra, Derivation), DgaError> {
        let ring = self.ring().with_exponent(m)?;
        Ok((self.algebra.with_ring(ring), self.d.reduce_to(&ring)))
    }
}

fn require_w2(alg: &FreeAlgebra) -> Result<BaseRing, DgaError> {
    let ring = alg.ring();
    if ring.n() != 2 {
        return Err(DgaError::WrongBase { expected: format!("Z/{}^2", ring.p()), found: ring.to_string() });
    }
    Ok(ring.with_exponent(1)?)
}

/// Coefficientwise reduction of a `Z/p^2` algebra with a lifted differential.
pub fn reduce_mod_p(alg: &FreeAlgebra, d_tilde: &Derivation) -> Result<FreeDga, DgaError> {
    let fp = require_w2(alg)?;
    alg.validate_derivation(d_tilde)?;
    let reduced = alg.with_ring(fp);
    let d = d_tilde.reduce_to(&fp);
    for (g, dd) in reduced.compose_on_generators(&d, &d).iter().enumerate() {
        if !dd.is_zero() {
            return Err(DgaError::ReducedDifferentialNotSquareZero {
                generator: reduced.name(g as GenId).to_string(),
                value: reduced.format_poly(dd),
            });
        }
    }
    Ok(FreeDga { algebra: reduced, d })
}

/// The degree +2 derivation `D` over `F_p` with `d~^2 = p D`. Also asserts
/// `[d, D] = 0` over `F_p`, which holds for every genuine lift.
pub fn extract_obstruction(alg: &FreeAlgebra, d_tilde: &Derivation) -> Result<Derivation, DgaError> {
    let fp = require_w2(alg)?;
    alg.validate_derivation(d_tilde)?;
    let ring = alg.ring();
    let sq = alg.compose_on_generators(d_tilde, d_tilde);
    let mut values = Vec::with_capacity(sq.len());
    for (g, v) in sq.iter().enumerate() {
        match v.div_p(&ring, &fp) {
            Some(q) => values.push(q),
            None => {
                return Err(DgaError::NotLiftOfSquareZero {
                    generator: alg.name(g as GenId).to_string(),
                    value: alg.format_poly(v),
                })
            }
        }
    }
    let big_d = Derivation { degree: 2, values };
    let reduced = alg.with_ring(fp);
    let d = d_tilde.reduce_to(&fp);
    let closed = reduced.bracket(&d, &big_d);
    for (g, v) in closed.values.iter().enumerate() {
        if !v.is_zero() {
            return Err(DgaError::ObstructionNotClosed {
                generator: reduced.name(g as GenId).to_string(),
                value: reduced.format_poly(v),
            });
        }
    }
    Ok(big_d)
}

#[cfg(test)]
mod tests;
