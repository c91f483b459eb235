//! `hpcris pd`: the divided-power cyclic modules on `[1] .. [k_max]`.

use serde_json::{json, Value};

use crate::pd_cyclic::reference::{binomial_law, brute_force_feasible, check_against_brute_force, check_against_model};
use crate::pd_cyclic::{beta_gamma_maps, make_f, verify_fil, verify_fil_tilde, DividedPowerRing, RnAlgebra};
use crate::ring_core::BaseRing;

/// Largest `k` for the `beta`/`gamma` checks.
pub const BETA_GAMMA_K_MAX: usize = 3;

fn outcome<T>(r: &Result<T, String>) -> Value {
    match r {
        Ok(_) => json!({"pass": true}),
        Err(e) => json!({"pass": false, "witness": e}),
    }
}

pub fn run_pd(n: usize, k_max: usize, base: BaseRing) -> (bool, Vec<String>, Value) {
    let mut failures = Vec::new();
    let note = |failures: &mut Vec<String>, label: String, r: &Result<(), String>| {
        if let Err(e) = r {
            failures.push(format!("FAIL {label}: {e}"));
        }
    };

    let (alg, module) = make_f(n, k_max, base);
    let relations = module.check_relations().map(|_| ()).map_err(|e| e.to_string());
    note(&mut failures, "F_n relations".into(), &relations);

    let mut objects = Vec::new();
    for k in 1..=k_max {
        let rank_ok = if module.rank(k) == 1 + k * n {
            Ok(())
        } else {
            Err(format!("rank {} instead of {}", module.rank(k), 1 + k * n))
        };
        let laws = alg.check_laws(k).map_err(|e| e.to_string());
        let model = check_against_model(&alg, k);
        let brute = brute_force_feasible(n, k).then(|| check_against_brute_force(&alg, k));
        note(&mut failures, format!("rank of F_n([{k}])"), &rank_ok);
        note(&mut failures, format!("algebra laws on [{k}]"), &laws);
        note(&mut failures, format!("square-zero model on [{k}]"), &model);
        if let Some(b) = &brute {
            note(&mut failures, format!("brute-force quotient on [{k}]"), b);
        }
        objects.push(json!({
            "k": k,
            "rank": module.rank(k),
            "basis": module.basis(k),
            "rank_is_1_plus_kn": outcome(&rank_ok),
            "algebra_laws": outcome(&laws),
            "square_zero_model": outcome(&model),
            "brute_force": brute.as_ref().map_or(json!("skipped"), outcome),
        }));
    }

    let fil = verify_fil(n, k_max, base).map_err(|e| e.to_string());
    note(&mut failures, "Fil on F_n with gr = Q".into(), &fil.as_ref().map(|_| ()).map_err(Clone::clone));
    let tilde = verify_fil_tilde(n, k_max, base).map_err(|e| e.to_string());
    note(
        &mut failures,
        "Fil on ker(F_n (x) R_n -> R_n) with gr = Q".into(),
        &tilde.as_ref().map(|_| ()).map_err(Clone::clone),
    );
    let witness = |r: &Result<crate::pd_cyclic::FiltrationWitness, String>| match r {
        Ok(w) => json!({"pass": true, "witness": w}),
        Err(e) => json!({"pass": false, "witness": e}),
    };

    let law = binomial_law(base, 8);
    let law_ok = if law.law_holds { Ok(()) } else { Err("x_i^[l] x_j^[r] law fails".to_string()) };
    note(&mut failures, "binomial law".into(), &law_ok);

    let rn = DividedPowerRing::new(base, n);
    let mut t = vec![0; n + 1];
    t[1] = 1;
    let mut algebras = vec![("R_n", RnAlgebra::base_ring(rn)), ("R_n[y]/(y^2)", RnAlgebra::dual_numbers(rn))];
    if let Ok(q) = RnAlgebra::quadratic(rn, t) {
        algebras.push(("R_n[y]/(y^2 - t)", q));
    }
    let bg_k = k_max.min(BETA_GAMMA_K_MAX);
    let beta_gamma: Vec<Value> = algebras
        .iter()
        .map(|(name, a)| {
            let r = beta_gamma_maps(a, bg_k).map(|bg| bg.summary(a.rank())).map_err(|e| e.to_string());
            note(&mut failures, format!("beta/gamma for {name}"), &r.as_ref().map(|_| ()).map_err(Clone::clone));
            match r {
                Ok(s) => json!({"algebra": name, "pass": true, "k_max": bg_k, "summary": s}),
                Err(e) => json!({"algebra": name, "pass": false, "witness": e}),
            }
        })
        .collect();

    let pass = failures.is_empty();
    let mut summary =
        vec![format!("F_{n} over {base}: ranks {:?}", (1..=k_max).map(|k| module.rank(k)).collect::<Vec<_>>())];
    summary.push(if pass { "all checks passed".into() } else { format!("{} checks failed", failures.len()) });
    summary.extend(failures);
    let results = json!({
        "relations": outcome(&relations),
        "objects": objects,
        "filtration": witness(&fil),
        "kernel_filtration": witness(&tilde),
        "binomial_law": law,
        "beta_gamma": beta_gamma,
    });
    (pass, summary, results)
}
