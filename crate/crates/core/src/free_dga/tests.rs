use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::random::{random_derivation, random_dga, InstanceShape};
use super::*;

fn f3() -> BaseRing {
    BaseRing::new(3, 1).unwrap()
}

fn z9() -> BaseRing {
    BaseRing::new(3, 2).unwrap()
}

fn poly(alg: &FreeAlgebra, terms: &[(i64, &str)]) -> NCPoly {
    let ring = alg.ring();
    NCPoly::from_terms(&ring, terms.iter().map(|&(c, w)| (alg.parse_word(w).unwrap(), ring.reduce(c))))
}

fn der(alg: &FreeAlgebra, degree: i32, values: &[(&str, &[(i64, &str)])]) -> Derivation {
    let mut d = Derivation::zero(alg.num_generators(), degree);
    for (g, terms) in values {
        d.values[alg.generator(g).unwrap() as usize] = poly(alg, terms);
    }
    d
}

/// Generators w(0,1), u(-1,2), v(-2,2) with d v = u over the given ring.
fn wuv(ring: BaseRing) -> FreeAlgebra {
    FreeAlgebra::new(
        ring,
        vec![GeneratorSpec::new("w", 0, 1), GeneratorSpec::new("u", -1, 2), GeneratorSpec::new("v", -2, 2)],
    )
    .unwrap()
}

#[test]
fn base_ring_is_a_dga() {
    let a = make_algebra(f3(), Vec::new(), Derivation::zero(0, 1)).unwrap();
    assert_eq!(a.algebra().num_generators(), 0);
    assert_eq!(a.algebra().words_of_weight(0), vec![Vec::<GenId>::new()]);
    assert!(a.algebra().words_of_weight(1).is_empty());
}

#[test]
fn square_of_generator_is_valid() {
    let gens = vec![GeneratorSpec::new("x", 0, 1), GeneratorSpec::new("y", -1, 2)];
    let alg = FreeAlgebra::new(f3(), gens.clone()).unwrap();
    let d = der(&alg, 1, &[("y", &[(1, "x*x")])]);
    assert!(make_algebra(f3(), gens, d).is_ok());
}

#[test]
fn unit_value_violates_weight() {
    let gens = vec![GeneratorSpec::new("y", -1, 1)];
    let alg = FreeAlgebra::new(f3(), gens.clone()).unwrap();
    let d = der(&alg, 1, &[("y", &[(1, "1")])]);
    assert!(matches!(make_algebra(f3(), gens, d), Err(DgaError::WeightViolation { .. })));
}

#[test]
fn rejects_bad_generator_lists() {
    let dup = vec![GeneratorSpec::new("x", 0, 1), GeneratorSpec::new("x", 1, 1)];
    assert!(matches!(FreeAlgebra::new(f3(), dup), Err(DgaError::DuplicateGenerator(_))));
    let zero = vec![GeneratorSpec::new("x", 0, 0)];
    assert!(matches!(FreeAlgebra::new(f3(), zero), Err(DgaError::ZeroWeight(_))));
}

#[test]
fn rejects_non_square_zero() {
    // x(1,1), y(0,1), z(-1,1): d z = y, d y = x
    let gens = vec![GeneratorSpec::new("x", 1, 1), GeneratorSpec::new("y", 0, 1), GeneratorSpec::new("z", -1, 1)];
    let alg = FreeAlgebra::new(f3(), gens.clone()).unwrap();
    let d = der(&alg, 1, &[("z", &[(1, "y")]), ("y", &[(1, "x")])]);
    match make_algebra(f3(), gens, d) {
        Err(DgaError::DifferentialNotSquareZero { generator, .. }) => assert_eq!(generator, "z"),
        other => panic!("{other:?}"),
    }
}

#[test]
fn degree_violation_reported() {
    let gens = vec![GeneratorSpec::new("x", 0, 1), GeneratorSpec::new("y", 0, 1)];
    let alg = FreeAlgebra::new(f3(), gens.clone()).unwrap();
    let d = der(&alg, 1, &[("y", &[(1, "x")])]);
    assert!(matches!(make_algebra(f3(), gens, d), Err(DgaError::DegreeViolation { .. })));
}

#[test]
fn leibniz_signs_on_yy() {
    for ring in [f3(), z9(), BaseRing::new(5, 2).unwrap()] {
        let alg = FreeAlgebra::new(ring, vec![GeneratorSpec::new("x", 0, 1), GeneratorSpec::new("y", -1, 2)]).unwrap();
        let d = der(&alg, 1, &[("y", &[(1, "x*x")])]);
        let yy = poly(&alg, &[(1, "y*y")]);
        let expect = poly(&alg, &[(1, "x*x*y"), (-1, "y*x*x")]);
        assert_eq!(alg.apply(&d, &yy), expect);
        assert!(alg.apply(&d, &NCPoly::unit(&ring)).is_zero());
        assert!(alg.apply(&Derivation::zero(2, 1), &yy).is_zero());
    }
}

/// Expands `D(word)` by listing each Koszul factor explicitly.
fn koszul_oracle(alg: &FreeAlgebra, d: &Derivation, word: &[GenId]) -> NCPoly {
    let ring = alg.ring();
    let mut out = NCPoly::zero();
    for i in 0..word.len() {
        let prefix_degree: i64 = word[..i].iter().map(|&g| alg.generators()[g as usize].degree as i64).sum();
        let sign = if (d.degree as i64 * prefix_degree).rem_euclid(2) == 1 { -1 } else { 1 };
        let left = NCPoly::monomial(&ring, word[..i].to_vec(), 1);
        let right = NCPoly::monomial(&ring, word[i + 1..].to_vec(), 1);
        let mid = d.value(word[i]).scale(&ring, ring.reduce(sign));
        out = out.add(&ring, &left.mul(&ring, &mid).mul(&ring, &right));
    }
    out
}

#[test]
fn apply_matches_koszul_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let alg = wuv(z9());
    for r in -2..=2 {
        let d = random_derivation(&mut rng, &alg, r);
        for wt in 0..=4 {
            for w in alg.words_of_weight(wt) {
                let f = NCPoly::monomial(&z9(), w.clone(), 1);
                assert_eq!(alg.apply(&d, &f), koszul_oracle(&alg, &d, &w));
            }
        }
    }
}

fn all_words_up_to_length(alg: &FreeAlgebra, len: usize) -> Vec<Word> {
    let mut out = vec![Vec::new()];
    let mut layer = vec![Vec::new()];
    for _ in 0..len {
        let mut next = Vec::new();
        for w in &layer {
            for g in 0..alg.num_generators() as GenId {
                let mut x = w.clone();
                x.push(g);
                next.push(x);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

#[test]
fn bracket_agrees_with_commutator_on_words() {
    // w(0,1), u(-1,1), v(-2,1): d v = u, D u = w (degree 1)
    let alg = FreeAlgebra::new(
        f3(),
        vec![GeneratorSpec::new("w", 0, 1), GeneratorSpec::new("u", -1, 1), GeneratorSpec::new("v", -2, 1)],
    )
    .unwrap();
    let ring = alg.ring();
    let d = der(&alg, 1, &[("v", &[(1, "u")])]);
    let big_d = der(&alg, 1, &[("u", &[(1, "w")])]);
    let br = alg.bracket(&d, &big_d);
    assert_eq!(br.degree, 2);
    assert_eq!(br.value(alg.generator("v").unwrap()), &poly(&alg, &[(1, "w")]));
    for w in all_words_up_to_length(&alg, 3) {
        let f = NCPoly::monomial(&ring, w, 1);
        let lhs = alg.apply(&br, &f);
        let rhs = alg.apply(&d, &alg.apply(&big_d, &f)).add(&ring, &alg.apply(&big_d, &alg.apply(&d, &f)));
        assert_eq!(lhs, rhs);
    }
}

#[test]
fn self_brackets() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let alg = wuv(z9());
    let ring = alg.ring();
    let dga = random_dga(&mut rng, z9(), &InstanceShape::default());
    assert!(dga.algebra().bracket(dga.differential(), dga.differential()).is_zero());
    let odd = random_derivation(&mut rng, &alg, 1);
    let twice: Vec<NCPoly> = alg.compose_on_generators(&odd, &odd).iter().map(|v| v.scale(&ring, 2)).collect();
    assert_eq!(alg.bracket(&odd, &odd).values, twice);
}

#[test]
fn reduction_mod_p() {
    let alg = wuv(z9());
    let d_tilde = der(&alg, 1, &[("v", &[(1, "u")]), ("u", &[(3, "w*w")])]);
    let reduced = reduce_mod_p(&alg, &d_tilde).unwrap();
    assert_eq!(reduced.ring(), f3());
    let expect = der(&wuv(f3()), 1, &[("v", &[(1, "u")])]);
    assert_eq!(reduced.differential(), &expect);
    // verbatim lift then reduce is the identity on presentations
    let (lifted, d2) = reduced.lift_verbatim(2).unwrap();
    assert_eq!(reduce_mod_p(&lifted, &d2).unwrap(), reduced);
    assert!(matches!(reduce_mod_p(&wuv(f3()), &expect), Err(DgaError::WrongBase { .. })));
}

#[test]
fn obstruction_of_twisted_lift() {
    let alg = wuv(z9());
    let d_tilde = der(&alg, 1, &[("v", &[(1, "u")]), ("u", &[(3, "w*w")])]);
    let big_d = extract_obstruction(&alg, &d_tilde).unwrap();
    assert_eq!(big_d, der(&wuv(f3()), 2, &[("v", &[(1, "w*w")])]));
    // p D = d~^2 on generators, by direct expansion
    let sq = alg.compose_on_generators(&d_tilde, &d_tilde);
    for (g, v) in sq.iter().enumerate() {
        assert_eq!(*v, big_d.values[g].reduce_to(&z9()).scale(&z9(), 3));
    }
    let untwisted = der(&alg, 1, &[("v", &[(1, "u")])]);
    assert!(extract_obstruction(&alg, &untwisted).unwrap().is_zero());
}

#[test]
fn obstruction_rejects_unit_square() {
    let gens = vec![GeneratorSpec::new("x", 0, 1), GeneratorSpec::new("y", -1, 1), GeneratorSpec::new("z", 1, 1)];
    let alg = FreeAlgebra::new(z9(), gens).unwrap();
    let d_tilde = der(&alg, 1, &[("y", &[(1, "x")]), ("x", &[(1, "z")])]);
    match extract_obstruction(&alg, &d_tilde) {
        Err(DgaError::NotLiftOfSquareZero { generator, .. }) => assert_eq!(generator, "y"),
        other => panic!("{other:?}"),
    }
}

#[test]
fn json_round_trip_is_bit_exact() {
    let text = r#"{"base": {"p": 3, "n": 2},
        "generators": [{"name": "w", "degree": 0, "weight": 1},
                       {"name": "u", "degree": -1, "weight": 2},
                       {"name": "v", "degree": -2, "weight": 2}],
        "differential": {"v": [[-8, ["u"]]]}}"#;
    let dga = parse_algebra(text).unwrap();
    let canon = AlgebraDoc::from_dga(&dga).to_canonical_json();
    let again = AlgebraDoc::from_dga(&parse_algebra(&canon).unwrap()).to_canonical_json();
    assert_eq!(canon, again);
    assert!(canon.contains("\"w\": []"));
    assert_eq!(parse_algebra(&canon).unwrap(), dga);
}

#[test]
fn json_errors_carry_locations() {
    match parse_algebra("{\"base\": {\"p\": 3, \"n\": 1},\n \"generators\": [") {
        Err(ParseError::Json { line, .. }) => assert_eq!(line, 2),
        other => panic!("{other:?}"),
    }
    let unknown = r#"{"base": {"p": 3, "n": 1}, "generators": [], "differential": {"q": []}}"#;
    assert!(matches!(parse_algebra(unknown), Err(ParseError::Dga(DgaError::UnknownGenerator(_)))));
    let bad_ring = r#"{"base": {"p": 4, "n": 1}}"#;
    assert!(matches!(parse_algebra(bad_ring), Err(ParseError::Json { .. })));
}

#[test]
fn lift_files() {
    let alg = wuv(f3());
    let lift = r#"{"base": {"p": 3, "n": 2}, "differential": {"v": [[1, ["u"]]], "u": [[3, ["w", "w"]]]}}"#;
    let (lifted, d) = parse_lift(lift, &alg).unwrap();
    assert_eq!(lifted.ring(), z9());
    assert_eq!(d.value(1), &poly(&lifted, &[(3, "w*w")]));
    let wrong = r#"{"base": {"p": 5, "n": 2}}"#;
    assert!(matches!(parse_lift(wrong, &alg), Err(ParseError::LiftMismatch(_))));
}

fn small_ring() -> impl Strategy<Value = BaseRing> {
    (prop::sample::select(vec![2u64, 3, 5]), 1u32..=2).prop_map(|(p, n)| BaseRing::new(p, n).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn differential_squares_to_zero_on_words(seed in any::<u64>(), ring in small_ring()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let dga = random_dga(&mut rng, ring, &InstanceShape::default());
        let alg = dga.algebra();
        for wt in 0..=4 {
            for w in alg.words_of_weight(wt) {
                let f = NCPoly::monomial(&ring, w, 1);
                prop_assert!(alg.apply(dga.differential(), &alg.apply(dga.differential(), &f)).is_zero());
            }
        }
    }

    #[test]
    fn derivations_are_homogeneous(seed in any::<u64>(), ring in small_ring(), r in -2i32..=2) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let gens = super::random::random_generators(&mut rng, &InstanceShape::default());
        let alg = FreeAlgebra::new(ring, gens).unwrap();
        let d = random_derivation(&mut rng, &alg, r);
        alg.validate_derivation(&d).unwrap();
        for wt in 0..=4 {
            for w in alg.words_of_weight(wt) {
                let deg = alg.word_degree(&w);
                let image = alg.apply(&d, &NCPoly::monomial(&ring, w, 1));
                for (v, _) in image.terms() {
                    prop_assert_eq!(alg.word_weight(v), wt);
                    prop_assert_eq!(alg.word_degree(v), deg + r as i64);
                }
            }
        }
    }

    #[test]
    fn bracket_is_graded_lie(seed in any::<u64>(), ring in small_ring(),
                             r1 in -1i32..=2, r2 in -1i32..=2, r3 in -1i32..=2) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let gens = super::random::random_generators(&mut rng, &InstanceShape::default());
        let alg = FreeAlgebra::new(ring, gens).unwrap();
        let a = random_derivation(&mut rng, &alg, r1);
        let b = random_derivation(&mut rng, &alg, r2);
        let c = random_derivation(&mut rng, &alg, r3);
        let sgn = |odd: bool| ring.sign(odd);
        // [a, b] = -(-1)^{|a||b|} [b, a]
        let ab = alg.bracket(&a, &b);
        let ba = alg.bracket(&b, &a).scale(&ring, ring.neg(sgn(r1 % 2 != 0 && r2 % 2 != 0)));
        prop_assert_eq!(&ab, &ba);
        // [a, [b, c]] = [[a, b], c] + (-1)^{|a||b|} [b, [a, c]]
        let lhs = alg.bracket(&a, &alg.bracket(&b, &c));
        let rhs = alg.bracket(&ab, &c)
            .add(&ring, &alg.bracket(&b, &alg.bracket(&a, &c)).scale(&ring, sgn(r1 % 2 != 0 && r2 % 2 != 0)));
        prop_assert_eq!(lhs, rhs);
    }
}
