use proptest::prelude::*;

use super::lambda::lambda_hom;
use super::reference::{
    binomial_law, brute_force_feasible, check_against_brute_force, check_against_model, BruteForce,
};
use super::*;

fn ring(p: u64, n: u32) -> BaseRing {
    BaseRing::new(p, n).unwrap()
}

fn bases() -> Vec<BaseRing> {
    [2, 3, 5].iter().flat_map(|&p| [ring(p, 1), ring(p, 2)]).collect()
}

#[test]
fn q_has_rank_k_and_rotation_of_order_k() {
    let q = make_q(5, ring(3, 1));
    q.check_relations().unwrap();
    for k in 1..=5 {
        assert_eq!(q.rank(k), k);
        let t = q.matrix(&lambda::Generator::Rotation { k });
        let mut power = SparseMatrix::identity(q.ring, k);
        for i in 1..=k {
            power = t.mul(&power);
            assert_eq!(power.sub(&SparseMatrix::identity(q.ring, k)).is_zero(), i == k);
        }
    }
}

#[test]
fn structure_maps_are_functorial_on_all_morphisms() {
    let base = ring(5, 1);
    let (alg, _) = make_f(2, 3, base);
    let apply = |f: &lambda::LambdaMorphism| {
        let cols = (0..alg.rank(f.source())).map(|b| vec![(alg.push(f, b), 1)]).collect();
        SparseMatrix::from_columns(base, alg.rank(f.target()), cols)
    };
    for m in 1..=3 {
        for k in 1..=3 {
            for l in 1..=3 {
                for f in lambda_hom(m, k) {
                    for g in lambda_hom(k, l) {
                        assert!(apply(&g.after(&f)).sub(&apply(&g).mul(&apply(&f))).is_zero());
                    }
                }
            }
        }
    }
}

#[test]
fn divided_power_ring_laws() {
    for base in bases() {
        let r = DividedPowerRing::new(base, 5);
        let e = |a: usize| {
            let mut v = vec![0; 6];
            v[a] = 1;
            v
        };
        for a in 0..=5 {
            for b in 0..=5 {
                for c in 0..=5 {
                    assert_eq!(r.mul(&r.mul(&e(a), &e(b)), &e(c)), r.mul(&e(a), &r.mul(&e(b), &e(c))));
                }
                assert_eq!(r.mul(&e(a), &e(b)), r.mul(&e(b), &e(a)));
            }
        }
        // x^[1]^a = a! x^[a]
        let mut power = e(0);
        let mut fact = 1u64;
        for a in 1..=5 {
            power = r.mul(&power, &e(1));
            fact = base.mul(fact, a as u64);
            assert_eq!(power[a], fact);
        }
    }
}

#[test]
fn f_matches_the_brute_force_quotient() {
    for base in [ring(2, 1), ring(3, 2), ring(5, 1)] {
        for (n, k) in [(1, 1), (1, 2), (2, 2), (3, 2), (1, 3), (2, 3), (3, 3), (1, 4), (1, 5), (7, 2), (8, 1)] {
            assert!(brute_force_feasible(n, k));
            check_against_brute_force(&FnAlgebra::new(base, n), k).unwrap();
        }
    }
    assert!(!brute_force_feasible(2, 5));
}

#[test]
fn f_matches_the_square_zero_model() {
    for base in bases() {
        for n in 1..=5 {
            for k in 1..=5 {
                check_against_model(&FnAlgebra::new(base, n), k).unwrap();
            }
        }
    }
}

#[test]
fn binomial_law_and_its_symmetric_misprint() {
    for base in [ring(3, 2), ring(5, 2), ring(7, 1)] {
        let report = binomial_law(base, 8);
        assert_eq!(report.pairs, 28);
        assert!(report.law_holds && report.linear_case_holds);
        assert!(report.symmetric_form_failures.contains(&(1, 1)));
    }
    // over Z/9 the misprinted form is wrong exactly when C(l+r-1, r) != 0 mod 9
    let report = binomial_law(ring(3, 2), 8);
    for (l, r) in report.symmetric_form_failures {
        assert_ne!(ring(3, 2).binomial((l + r - 1) as u64, r as u64), 0);
    }
}

#[test]
fn filtration_on_f() {
    for base in [ring(2, 2), ring(3, 1)] {
        for n in 1..=3 {
            let w = verify_fil(n, 4, base).unwrap();
            assert_eq!(w.length, n);
            for ranks in &w.gr_ranks {
                assert_eq!(ranks, &vec![1, 2, 3, 4]);
            }
        }
    }
}

#[test]
fn filtration_on_the_tensor_kernel() {
    for base in [ring(2, 1), ring(5, 2)] {
        for n in 1..=3 {
            let tk = tensor_kernel(n, 3, base).unwrap();
            for k in 1..=3 {
                assert_eq!(tk.kernel.rank(k), k * n * (n + 1));
            }
            let w = verify_fil_tilde(n, 3, base).unwrap();
            assert_eq!(w.length, n * (n + 1));
            assert!(w.gr_ranks.iter().all(|r| r == &vec![1, 2, 3]));
        }
    }
}

#[test]
fn a_wrong_law_is_caught() {
    // the misprinted form breaks associativity or the map to R_n
    let base = ring(5, 1);
    let alg = FnAlgebra::new(base, 3);
    let bf = BruteForce::new(base, 3, 2);
    let wrong = |a: usize, b: usize| -> Vec<u64> {
        let (i, l) = alg.decode(a).unwrap();
        let (j, r) = alg.decode(b).unwrap();
        let mut v = vec![0; alg.rank(2)];
        v[alg.x(i, l + r)] = base.binomial((l + r) as u64, l as u64);
        v[alg.x(j, l + r)] = base.binomial((l + r - 1) as u64, l as u64);
        v
    };
    let (a, b) = (alg.x(0, 1), alg.x(1, 1));
    let mut ea = vec![0; alg.rank(2)];
    let mut eb = ea.clone();
    ea[a] = 1;
    eb[b] = 1;
    let prod = bf.mul(&bf.from_fn(&alg, &ea), &bf.from_fn(&alg, &eb));
    assert!(!bf.equal(&prod, &bf.from_fn(&alg, &wrong(a, b))));
}

#[test]
fn beta_gamma_for_small_algebras() {
    for base in [ring(3, 1), ring(2, 2)] {
        for n in 1..=2 {
            let rn = DividedPowerRing::new(base, n);
            let mut t = vec![0; n + 1];
            t[1] = 1;
            let algebras =
                [RnAlgebra::base_ring(rn), RnAlgebra::dual_numbers(rn), RnAlgebra::quadratic(rn, t).unwrap()];
            for a in &algebras {
                let bg = beta_gamma_maps(a, 3).unwrap();
                let r = a.rank();
                let s = bg.summary(r);
                for k in 1..=3 {
                    let rk = r.pow(k as u32);
                    assert_eq!(s.source_ranks[k - 1], rk * (1 + k * n));
                    assert_eq!(s.gamma_target_ranks[k - 1], rk * (n + 1));
                    assert_eq!(s.beta_target_ranks[k - 1], rk);
                    assert_eq!(s.kernel_ranks[k - 1], rk * k * n);
                }
                assert_eq!(s.kernel_filtration.length, n);
            }
        }
    }
}

#[test]
fn malformed_algebras_are_rejected() {
    let rn = DividedPowerRing::new(ring(3, 1), 1);
    let zero = vec![0, 0];
    let one = vec![1, 0];
    // y_1 y_0 = 0 breaks the unit
    let mult = vec![
        vec![vec![one.clone(), zero.clone()], vec![zero.clone(), one.clone()]],
        vec![vec![zero.clone(), zero.clone()], vec![zero.clone(), zero.clone()]],
    ];
    assert!(matches!(RnAlgebra::new(rn, mult), Err(PdError::NotAnAlgebra(_))));
    assert!(matches!(RnAlgebra::new(rn, vec![]), Err(PdError::NotAnAlgebra(_))));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn f_is_a_commutative_ring_compatible_with_structure_maps(p in prop::sample::select(vec![2u64, 3, 5]), e in 1u32..=2, n in 1usize..=4, k in 1usize..=4) {
        let base = ring(p, e);
        let (alg, data) = make_f(n, k, base);
        alg.check_laws(k).unwrap();
        for g in data.maps.keys() {
            alg.check_multiplicative(&g.morphism()).unwrap();
        }
        data.check_relations().unwrap();
    }

    #[test]
    fn x_raises_the_filtration(p in prop::sample::select(vec![2u64, 3, 5]), n in 1usize..=5, k in 1usize..=5, seed in any::<u64>()) {
        let alg = FnAlgebra::new(ring(p, 2), n);
        let a = (seed % k as u64) as usize;
        let r = 1 + (seed / 7 % n as u64) as usize;
        let act = alg.action(k, a, r);
        for c in 0..act.cols() {
            for &(row, _) in act.column(c) {
                prop_assert!(alg.degree(row) > alg.degree(c));
            }
        }
    }
}

#[test]
fn witness_rejects_a_wrong_graded_isomorphism() {
    let base = ring(3, 1);
    let (alg, f) = make_f(2, 3, base);
    let q = make_q(3, base);
    // the full F_2 with 1 placed in step 0 is not graded by Q there
    let index: Vec<Vec<usize>> = (1..=3).map(|k| (0..alg.rank(k)).map(|b| alg.degree(b)).collect()).collect();
    let gr_basis: Vec<Vec<usize>> =
        (1..=3).map(|k| (0..alg.rank(k)).map(|b| alg.decode(b).map_or(0, |x| x.0)).collect()).collect();
    let actions = vec![vec![]; 3];
    let filtered = Filtered { module: &f, index, gr_basis, actions };
    assert!(matches!(verify_graded(&filtered, &q, 3), Err(PdError::QuotientNotQ { .. })));
    // shifting the identification by one breaks the rotation
    let (alg, _) = make_f(1, 3, base);
    let tk = tensor_kernel(1, 3, base).unwrap();
    let index = tk.labels.iter().map(|lab| lab.iter().map(|&(_, m, l)| l + m - 1).collect()).collect();
    let gr_basis =
        tk.labels.iter().enumerate().map(|(i, lab)| lab.iter().map(|&(j, _, _)| (j + 1) % (i + 1)).collect()).collect();
    let filtered = Filtered { module: &tk.kernel, index, gr_basis, actions: vec![vec![]; 3] };
    assert!(matches!(verify_graded(&filtered, &q, 2), Err(PdError::QuotientNotQ { .. })));
    // reversing the steps is not stable under x_0, which raises l
    let idx: Vec<Vec<usize>> = tk.labels.iter().map(|lab| lab.iter().map(|&(_, _, l)| 1 - l).collect()).collect();
    let acts = (1..=3)
        .map(|k| {
            let x = alg.action(k, 0, 1);
            let cols = (0..alg.rank(k))
                .flat_map(|b| (0..=1).map(move |l| (b, l)))
                .map(|(b, l)| x.column(b).iter().map(|&(c, v)| (c * 2 + l, v)).collect())
                .collect();
            let big = SparseMatrix::from_columns(base, alg.rank(k) * 2, cols);
            let piv: Vec<usize> = tk.labels[k - 1].iter().map(|&(j, m, l)| alg.x(j, m) * 2 + l).collect();
            vec![("x0".to_string(), restrict(&big, &tk.inclusion[k - 1], &tk.inclusion[k - 1], &piv).unwrap())]
        })
        .collect();
    let gr_basis = tk.labels.iter().map(|lab| lab.iter().map(|&(j, _, _)| j).collect()).collect();
    let filtered = Filtered { module: &tk.kernel, index: idx, gr_basis, actions: acts };
    assert!(matches!(verify_graded(&filtered, &q, 2), Err(PdError::FiltrationNotStable { .. })));
}
