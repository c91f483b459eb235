use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::reference::{oracle_hh_profile, oracle_hp_profile};
use super::*;
use crate::cyclic_homology::MixedSlice;
use crate::free_dga::random::{random_derivation, random_dga, InstanceShape};
use crate::free_dga::{parse_algebra, Derivation, FreeAlgebra, GeneratorSpec};
use crate::ring_core::SparseMatrix;

fn ring(p: u64, n: u32) -> BaseRing {
    BaseRing::new(p, n).unwrap()
}

fn x_squared() -> FreeDga {
    parse_algebra(
        r#"{"base": {"p": 3, "n": 1},
            "generators": [{"name": "x", "degree": 0, "weight": 1},
                           {"name": "y", "degree": -1, "weight": 2}],
            "differential": {"y": [[1, ["x", "x"]]]}}"#,
    )
    .unwrap()
}

fn free_on(ring: BaseRing, gens: Vec<GeneratorSpec>) -> FreeDga {
    let k = gens.len();
    FreeDga::new(FreeAlgebra::new(ring, gens).unwrap(), Derivation::zero(k, 1)).unwrap()
}

fn oracle_hh(dga: &FreeDga, weight_max: u32) -> HomologyProfile {
    oracle_hh_profile(dga, weight_max).unwrap()
}

fn oracle_hp(folded: &[FoldedComplex]) -> HomologyProfile {
    oracle_hp_profile(folded)
}

#[test]
fn base_ring_anchors() {
    let hh = hh_profile(&FreeDga::base(ring(5, 1)), 3).unwrap();
    assert_eq!(hh.nonzero().into_iter().collect::<Vec<_>>(), vec![((0, 0), HomologyGroup::free(1))]);
    let hp = hp_profile(&FreeDga::base(ring(3, 2)), 3).unwrap();
    assert_eq!(hp.get(0, 0), HomologyGroup::free(1));
    assert!(hp.get(0, 1).is_zero());
    assert_eq!(hp.nonzero().len(), 1);
}

#[test]
fn free_algebra_hh_sits_in_simplicial_degrees_zero_and_one() {
    let dga = free_on(ring(5, 1), vec![GeneratorSpec::new("x", 0, 1)]);
    let hh = hh_profile(&dga, 3).unwrap();
    assert!(hh.same_groups(&oracle_hh(&dga, 3)));
    // with x in degree 0 the total degree is the simplicial degree
    for ((w, t), g) in hh.nonzero() {
        assert!(t == 0 || t == 1, "weight {w} degree {t}: {g}");
    }
    // x^w and x^{w-1}[x] survive in each positive weight
    for w in 1..=3 {
        assert_eq!(hh.get(w, 0), HomologyGroup::free(1));
        assert_eq!(hh.get(w, 1), HomologyGroup::free(1));
    }
}

#[test]
fn x_squared_hh_matches_oracle() {
    let dga = x_squared();
    let hh = hh_profile(&dga, 4).unwrap();
    assert_eq!(hh.first_difference(&oracle_hh(&dga, 4)), None);
}

#[test]
fn odd_generator_hp_matches_oracle() {
    let dga = free_on(ring(3, 1), vec![GeneratorSpec::new("y", -1, 1)]);
    let folded = hp_complexes(&dga, 3).unwrap();
    let hp = profile_of(dga.ring(), &folded).unwrap();
    assert_eq!(hp.first_difference(&oracle_hp(&folded)), None);
    assert_eq!(hp.get(0, 0), HomologyGroup::free(1));
}

#[test]
fn fold_requires_odd_operators_and_matching_coefficients() {
    let dga = x_squared();
    let alg = Arc::new(dga.algebra().clone());
    let mut s = MixedSlice::build(alg.clone(), 2).unwrap();
    assert!(fold(&s, &["b", "B"], &[1, 1]).is_ok());
    assert!(matches!(fold(&s, &["b"], &[1, 1]), Err(PeriodicError::Arity { .. })));
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    s.attach_lie("z", &random_derivation(&mut rng, &alg, 0)).unwrap();
    assert!(matches!(fold(&s, &["b", "L_z"], &[1, 1]), Err(PeriodicError::EvenOperator(_))));
}

#[test]
fn fold_detects_non_square_zero_sums() {
    let dga = x_squared();
    let alg = Arc::new(dga.algebra().clone());
    let mut s = MixedSlice::build(alg, 3).unwrap();
    assert!(fold(&s, &["b", "B"], &[1, 2]).is_ok());
    // a swap of the first two basis vectors squares to the identity there
    let n = s.len();
    let mut cols = vec![Vec::new(); n];
    cols[0].push((1, 1));
    cols[1].push((0, 1));
    let swap = SparseMatrix::from_columns(s.ring(), n, cols);
    s.attach_matrix("swap", swap, true, -1);
    match fold(&s, &["swap"], &[1]) {
        Err(PeriodicError::DifferentialNotSquareZero(f)) => assert_eq!((f.weight, f.column), (3, 0)),
        other => panic!("expected a square-zero failure, got {other:?}"),
    }
}

fn suite(seed: u64, count: usize, base: BaseRing) -> Vec<FreeDga> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| random_dga(&mut rng, base, &InstanceShape::default())).collect()
}

#[test]
fn random_profiles_match_oracles() {
    for base in [ring(3, 1), ring(5, 1), ring(3, 2)] {
        for dga in suite(11, 6, base) {
            let folded = hp_complexes(&dga, 3).unwrap();
            let hp = profile_of(base, &folded).unwrap();
            assert_eq!(hp.first_difference(&oracle_hp(&folded)), None, "{}", base);
            assert_eq!(hp.get(0, 0), HomologyGroup::free(1));
            assert!(hp.get(0, 1).is_zero());
            let hh = hh_profile(&dga, 3).unwrap();
            assert_eq!(hh.first_difference(&oracle_hh(&dga, 3)), None);
        }
    }
}

#[test]
fn euler_characteristic_over_a_field() {
    for dga in suite(12, 8, ring(5, 1)) {
        for f in hp_complexes(&dga, 4).unwrap() {
            let (even, odd) = f.homology().unwrap();
            assert_eq!(f.even.len() as i64 - f.odd.len() as i64, even.summands() as i64 - odd.summands() as i64);
        }
    }
}

#[test]
fn weights_are_independent() {
    for dga in suite(13, 6, ring(3, 2)) {
        let small = hp_profile(&dga, 2).unwrap();
        let large = hp_profile(&dga, 4).unwrap();
        for e in &small.entries {
            assert_eq!(large.get(e.weight, e.parity_or_degree), e.group());
        }
        let hh_small = hh_profile(&dga, 2).unwrap();
        let hh_large = hh_profile(&dga, 4).unwrap();
        for e in &hh_small.entries {
            assert_eq!(hh_large.get(e.weight, e.parity_or_degree), e.group());
        }
    }
}

#[test]
fn reduction_mod_p_bound() {
    let (z9, f3) = (ring(3, 2), ring(3, 1));
    for dga in suite(14, 8, z9) {
        let reduced = FreeDga::new(dga.algebra().with_ring(f3), dga.differential().reduce_to(&f3)).unwrap();
        let over_z9 = hp_profile(&dga, 3).unwrap();
        let over_f3 = hp_profile(&reduced, 3).unwrap();
        for w in 0..=3 {
            for parity in 0..2 {
                let h = over_z9.get(w, parity);
                let bound = h.summands() + h.divisor_exponents.len();
                assert!(over_f3.get(w, parity).summands() <= bound);
            }
            // C splits into pieces Z/p^2, Z/p^2 -p-> Z/p^2 and acyclic ones, so
            // over both parities dim H(C/p) is the number of summands of H(C)
            let total = |k: &HomologyProfile| -> usize { (0..2).map(|q| k.get(w, q).summands()).sum() };
            assert_eq!(total(&over_f3), total(&over_z9));
        }
    }
}
