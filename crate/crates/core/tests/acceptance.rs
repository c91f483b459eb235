//! Acceptance suite: one PASS/FAIL line per criterion.

use std::path::PathBuf;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use hpcris::cli::check::{instance_checks, snf_suite, suite_instances, CheckItem, CheckOptions};
use hpcris::cli::{run, Command};
use hpcris::free_dga::random::InstanceShape;
use hpcris::free_dga::{parse_algebra, FreeDga};
use hpcris::hp_cris::{compare_lifts, crystalline_check, fold_lift, hp_cris_obj, random_twisted_lift, LiftSpec};
use hpcris::pd_cyclic::reference::{
    binomial_law, brute_force_feasible, check_against_brute_force, check_against_model,
};
use hpcris::pd_cyclic::{make_f, verify_fil, verify_fil_tilde};
use hpcris::periodic::{hh_profile, hp_profile};
use hpcris::ring_core::reference::ENUMERATION_LIMIT;
use hpcris::ring_core::{BaseRing, HomologyGroup};

const SEED: u64 = 20_240_601;
const WEIGHT_MAX: u32 = 4;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(failures: &[String], detail: String) -> Outcome {
    match failures.first() {
        None => Outcome { pass: true, detail },
        Some(f) => Outcome { pass: false, detail: format!("{} failures, first: {f}", failures.len()) },
    }
}

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn read(name: &str) -> String {
    std::fs::read_to_string(data(name)).unwrap()
}

struct Lift {
    label: String,
    dga: FreeDga,
    lift: LiftSpec,
    /// Square-zero lift to compare with; the verbatim one when `None`.
    reference: Option<LiftSpec>,
}

fn lifts() -> Vec<Lift> {
    let wuv = parse_algebra(&read("wuv.json")).unwrap();
    let xyz = parse_algebra(&read("xyz.json")).unwrap();
    let mut out = vec![
        Lift {
            label: "wuv".into(),
            lift: LiftSpec::parse(&read("wuv_lift.json"), &wuv).unwrap(),
            dga: wuv,
            reference: None,
        },
        Lift {
            label: "xyz".into(),
            lift: LiftSpec::parse(&read("xyz_lift.json"), &xyz).unwrap(),
            reference: Some(LiftSpec::parse(&read("xyz_reference.json"), &xyz).unwrap()),
            dga: xyz,
        },
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    for i in 0..10 {
        let base = BaseRing::new([3, 5][i % 2], 1).unwrap();
        let (dga, lift) =
            random_twisted_lift(&mut rng, base, &InstanceShape::default()).expect("a twisted lift exists");
        out.push(Lift { label: format!("random {i} over {base}"), dga, lift, reference: None });
    }
    out
}

fn suite_options() -> CheckOptions {
    // four base rings per size: 24 instances
    CheckOptions { seed: SEED, sizes: vec![1, 2, 3, 1, 2, 3], weight_max: WEIGHT_MAX, fault: None }
}

fn items_named<'a>(items: &'a [CheckItem], prefix: &str) -> Vec<&'a CheckItem> {
    items.iter().filter(|i| i.check.starts_with(prefix)).collect()
}

fn failures(items: &[&CheckItem]) -> Vec<String> {
    items
        .iter()
        .filter(|i| !i.pass)
        .map(|i| format!("{} on {}: {}", i.check, i.instance, i.witness.clone().unwrap_or_default()))
        .collect()
}

fn criterion_6() -> Outcome {
    let mut fails = Vec::new();
    let mut cases = 0;
    let mut brute = 0;
    for p in [2, 3, 5] {
        for e in [1, 2] {
            let base = BaseRing::new(p, e).unwrap();
            for n in 1..=5 {
                let (alg, module) = make_f(n, 5, base);
                if let Err(err) = module.check_relations() {
                    fails.push(format!("{base}, n = {n}: {err}"));
                }
                for k in 1..=5 {
                    cases += 1;
                    if module.rank(k) != 1 + k * n {
                        fails.push(format!("{base}, n = {n}, k = {k}: rank {}", module.rank(k)));
                    }
                    let mut checks = vec![alg.check_laws(k).map_err(|e| e.to_string()), check_against_model(&alg, k)];
                    if brute_force_feasible(n, k) {
                        brute += 1;
                        checks.push(check_against_brute_force(&alg, k));
                    }
                    fails.extend(
                        checks.into_iter().filter_map(Result::err).map(|e| format!("{base}, n = {n}, k = {k}: {e}")),
                    );
                }
                match verify_fil(n, 5, base) {
                    Ok(w) if w.length == n => {}
                    Ok(w) => fails.push(format!("{base}, n = {n}: Fil length {}", w.length)),
                    Err(err) => fails.push(format!("{base}, n = {n}: {err}")),
                }
                match verify_fil_tilde(n, 5, base) {
                    Ok(w) if w.length == n * (n + 1) => {}
                    Ok(w) => fails.push(format!("{base}, n = {n}: Fil~ length {}", w.length)),
                    Err(err) => fails.push(format!("{base}, n = {n}: {err}")),
                }
            }
            let law = binomial_law(base, 8);
            if !law.law_holds {
                fails.push(format!("{base}: binomial law"));
            }
            if law.symmetric_form_failures.is_empty() {
                fails.push(format!("{base}: the symmetric form C(l+r, l) was not refuted"));
            }
        }
    }
    outcome(
        &fails,
        format!(
            "{cases} (base, n, k) cases, {brute} against the brute-force quotient; products of distinct slots \
             follow x_i^[l] x_j^[r] = C(l+r-1, l-1) x_i^[l+r] + C(l+r-1, l) x_j^[l+r], the symmetric form with \
             C(l+r, l) is refuted at l = r = 1"
        ),
    )
}

fn criterion_9(items: &[CheckItem]) -> Outcome {
    let mut fails = failures(&items_named(items, "weight-0 HP"));
    for (p, e) in [(2, 1), (3, 1), (3, 2), (5, 1), (5, 2)] {
        let text = format!(r#"{{"base": {{"p": {p}, "n": {e}}}, "generators": [], "differential": {{}}}}"#);
        let dga = parse_algebra(&text).unwrap();
        let hh = hh_profile(&dga, WEIGHT_MAX).unwrap();
        let hp = hp_profile(&dga, WEIGHT_MAX).unwrap();
        // weight 0, degree 0 for HH and even parity for HP
        let expected = std::collections::BTreeMap::from([((0, 0), HomologyGroup::free(1))]);
        if hh.nonzero() != expected {
            fails.push(format!("HH of Z/{p}^{e}: {:?}", hh.nonzero()));
        }
        if hp.nonzero() != expected {
            fails.push(format!("HP of Z/{p}^{e}: {:?}", hp.nonzero()));
        }
    }
    let n = items_named(items, "weight-0 HP").len();
    outcome(&fails, format!("base rings F_2, F_3, Z/9, F_5, Z/25; weight-0 anchor on {n} algebras"))
}

fn criterion_10() -> Outcome {
    let commands = || {
        vec![
            Command::Check { seed: SEED, sizes: "1,2,3".into(), weight_max: 3, inject_fault: None },
            Command::Hp { algebra: data("wuv.json"), weight_max: WEIGHT_MAX, dump_slices: None },
            Command::Hpcris {
                algebra: data("xyz.json"),
                lift: data("xyz_lift.json"),
                weight_max: WEIGHT_MAX,
                reference: Some(data("xyz_reference.json")),
                allow_p2: false,
            },
            Command::Pd { n: 3, k_max: 3, p: 3, ring_exponent: 2 },
            Command::Snf { matrix: None, seed: SEED, count: 100 },
        ]
    };
    let mut fails = Vec::new();
    for (a, b) in commands().iter().zip(commands()) {
        let (ra, rb) = (run(a).map(|r| r.to_json()), run(&b).map(|r| r.to_json()));
        match (ra, rb) {
            (Ok(x), Ok(y)) if x == y => {}
            (Ok(_), Ok(_)) => fails.push(format!("{a:?}: reports differ")),
            (Err(e), _) | (_, Err(e)) => fails.push(format!("{a:?}: {e}")),
        }
    }
    let other =
        run(&Command::Check { seed: SEED + 1, sizes: "1,2,3".into(), weight_max: 3, inject_fault: None }).unwrap();
    let first = run(&commands()[0]).unwrap();
    if other.to_json() == first.to_json() {
        fails.push("a different seed reproduced the same report".into());
    }
    outcome(&fails, "check, hp, hpcris, pd and snf reports rerun byte for byte".into())
}

type Row = (usize, &'static str, Outcome, f64);

fn record(results: &mut Vec<Row>, n: usize, title: &'static str, start: Instant, o: Outcome) {
    results.push((n, title, o, start.elapsed().as_secs_f64()));
}

fn main() {
    let mut results: Vec<Row> = Vec::new();

    let start = Instant::now();
    let opts = suite_options();
    let plain = suite_instances(&opts).plain;
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 0x5eed);
    let items: Vec<CheckItem> =
        plain.iter().flat_map(|(label, dga)| instance_checks(&mut rng, label, dga, WEIGHT_MAX, None)).collect();
    let suite_time = start.elapsed().as_secs_f64();
    let mixed = items_named(&items, "mixed complex identities");
    results.push((
        1,
        "mixed complex identities",
        outcome(
            &failures(&mixed),
            format!("{} random algebras, weight_max {WEIGHT_MAX}, shared suite {suite_time:.1}s", mixed.len()),
        ),
        suite_time,
    ));
    let cartan = items_named(&items, "Cartan relation");
    results.push((
        2,
        "Cartan relation",
        outcome(
            &failures(&cartan),
            format!("{} derivations over {} algebras, every u-component", cartan.len(), mixed.len()),
        ),
        0.0,
    ));

    let start = Instant::now();
    let lifts = lifts();
    let mut fails = Vec::new();
    for l in &lifts {
        if let Err(e) = hp_cris_obj(&l.dga, &l.lift, WEIGHT_MAX) {
            fails.push(format!("{}: {e}", l.label));
        }
        if fold_lift(&l.lift, WEIGHT_MAX, false).is_ok() {
            fails.push(format!("{}: the fold without p iota_D squares to zero", l.label));
        }
    }
    record(
        &mut results,
        3,
        "square-zero of the corrected fold",
        start,
        outcome(&fails, format!("{} lifts including wuv and xyz", lifts.len())),
    );

    let start = Instant::now();
    let mut fails = Vec::new();
    for l in &lifts {
        let other = match &l.reference {
            Some(r) => r.clone(),
            None => LiftSpec::verbatim(&l.dga).unwrap(),
        };
        for (x, y) in [(&l.lift, &other), (&other, &l.lift)] {
            match compare_lifts(&l.dga, x, y, WEIGHT_MAX) {
                Ok(c) if c.profiles_equal => {}
                Ok(_) => fails.push(format!("{}: profiles differ", l.label)),
                Err(e) => fails.push(format!("{}: {e}", l.label)),
            }
        }
    }
    record(
        &mut results,
        4,
        "comparison map between lifts",
        start,
        outcome(&fails, format!("{} pairs in both orders", lifts.len())),
    );

    let start = Instant::now();
    let mut fails = Vec::new();
    for l in &lifts {
        match crystalline_check(&l.dga, &l.lift, l.reference.as_ref(), WEIGHT_MAX) {
            Ok(v) if v.equal => {}
            Ok(v) => fails.push(format!("{}: {:?}", l.label, v.cris.first_difference(&v.direct))),
            Err(e) => fails.push(format!("{}: {e}", l.label)),
        }
    }
    record(
        &mut results,
        5,
        "crystalline profile equals HP of a square-zero lift",
        start,
        outcome(
            &fails,
            format!(
                "{} twisted lifts; xyz compared with its sign-correct lift since its verbatim lift has d^2 != 0",
                lifts.len()
            ),
        ),
    );

    let start = Instant::now();
    record(&mut results, 6, "divided-power cyclic modules", start, criterion_6());

    let oracle = [items_named(&items, "HP agrees"), items_named(&items, "HH agrees")].concat();
    results.push((
        7,
        "dense oracle equivalence",
        outcome(
            &failures(&oracle),
            format!(
                "{} profiles; F_p by elimination, Z/p^2 by enumeration up to {ENUMERATION_LIMIT} elements and by \
                 submodule counting beyond (deviation: rank-40 Z/9 modules are not enumerable)",
                oracle.len()
            ),
        ),
        0.0,
    ));

    let start = Instant::now();
    let snf = snf_suite(SEED, 100);
    let snf_refs: Vec<&CheckItem> = snf.iter().collect();
    record(
        &mut results,
        8,
        "Smith normal form",
        start,
        outcome(&failures(&snf_refs), "100 matrices up to 8x8 over Z/9 and Z/25".into()),
    );

    let start = Instant::now();
    record(&mut results, 9, "trivial anchors", start, criterion_9(&items));

    let start = Instant::now();
    record(&mut results, 10, "determinism", start, criterion_10());

    let mut all = true;
    for (n, title, o, secs) in &results {
        all &= o.pass;
        println!("{} criterion {n}: {title} ({secs:.1}s): {}", if o.pass { "PASS" } else { "FAIL" }, o.detail);
    }
    if !all {
        std::process::exit(1);
    }
}
