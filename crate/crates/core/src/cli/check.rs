//! The seeded identity suite behind `hpcris check` and `hpcris snf`.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::cyclic_homology::{build_cyclic_bar, IdentityFailure, MixedSlice};
use crate::free_dga::random::{random_derivation, random_dga, InstanceShape};
use crate::free_dga::{AlgebraDoc, FreeDga};
use crate::hp_cris::{compare_lifts, crystalline_check, fold_lift, hp_cris_obj, random_twisted_lift, LiftSpec};
use crate::periodic::reference::{oracle_hh_profile, oracle_hp_profile};
use crate::periodic::{hh_profile, hp_complexes, profile_of};
use crate::ring_core::{BaseRing, HomologyGroup, Matrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Fault {
    /// Flip the sign of the contraction in the Cartan relation.
    CartanSign,
}

#[derive(Debug, Clone)]
pub struct CheckOptions {
    pub seed: u64,
    /// Maximal generator counts; one random instance per size and base ring.
    pub sizes: Vec<usize>,
    pub weight_max: u32,
    pub fault: Option<Fault>,
}

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct CheckItem {
    pub check: String,
    pub instance: String,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

impl CheckItem {
    fn new(check: &str, instance: &str, outcome: Result<(), String>) -> Self {
        CheckItem { check: check.into(), instance: instance.into(), pass: outcome.is_ok(), witness: outcome.err() }
    }
}

pub const CHECK_BASES: [(u64, u32); 4] = [(3, 1), (5, 1), (3, 2), (5, 2)];
pub const DERIVATIONS_PER_INSTANCE: usize = 3;

fn all_slices(slices: &[MixedSlice], f: impl Fn(&MixedSlice) -> Result<(), IdentityFailure>) -> Result<(), String> {
    slices.iter().try_for_each(|s| f(s).map_err(|e| e.to_string()))
}

fn same(label: &str, a: &crate::periodic::HomologyProfile, b: &crate::periodic::HomologyProfile) -> Result<(), String> {
    match a.first_difference(b) {
        None => Ok(()),
        Some((w, key, x, y)) => Err(format!("{label}: weight {w}, key {key}: engine {x}, oracle {y}")),
    }
}

/// Identity checks on one algebra: the mixed-complex identities, the Cartan
/// relation for random derivations, functoriality of `L`, the dense oracles
/// and the weight-0 anchor.
pub fn instance_checks<R: Rng>(
    rng: &mut R,
    label: &str,
    dga: &FreeDga,
    weight_max: u32,
    fault: Option<Fault>,
) -> Vec<CheckItem> {
    let alg = dga.algebra();
    let mut items = Vec::new();
    let slices = match build_cyclic_bar(alg, weight_max) {
        Ok(s) => s,
        Err(e) => return vec![CheckItem::new("cyclic bar construction", label, Err(e.to_string()))],
    };
    items.push(CheckItem::new(
        "mixed complex identities",
        label,
        all_slices(&slices, MixedSlice::check_mixed_identities),
    ));
    for i in 0..DERIVATIONS_PER_INSTANCE {
        let degree = rng.random_range(-1..=1);
        let der = random_derivation(rng, alg, degree);
        let outcome = slices.iter().try_for_each(|s| {
            let parts = s
                .check_cartan(dga.differential(), &der, fault == Some(Fault::CartanSign))
                .map_err(|e| e.to_string())?;
            parts.into_iter().try_for_each(|r| r.map_err(|e| e.to_string()))
        });
        items.push(CheckItem::new(
            &format!("Cartan relation, derivation {i} of degree {}", der.degree),
            label,
            outcome,
        ));
    }
    let (e1, e2) = (rng.random_range(-1..=1), rng.random_range(-1..=1));
    let d1 = random_derivation(rng, alg, e1);
    let d2 = random_derivation(rng, alg, e2);
    let outcome = slices.iter().try_for_each(|s| s.check_lie_functoriality(&d1, &d2).map_err(|e| e.to_string()));
    items.push(CheckItem::new("L functoriality", label, outcome));

    let hp = hp_complexes(dga, weight_max).map_err(|e| e.to_string()).and_then(|folded| {
        let engine = profile_of(dga.ring(), &folded).map_err(|e| e.to_string())?;
        same("HP", &engine, &oracle_hp_profile(&folded))?;
        Ok(engine)
    });
    let anchor = hp.as_ref().map_err(Clone::clone).and_then(|p| {
        if p.get(0, 0) == HomologyGroup::free(1) && p.get(0, 1).is_zero() {
            Ok(())
        } else {
            Err(format!("weight 0 is {} / {}", p.get(0, 0), p.get(0, 1)))
        }
    });
    items.push(CheckItem::new("HP agrees with the dense oracle", label, hp.map(|_| ())));
    items.push(CheckItem::new("weight-0 HP is the base ring in even parity", label, anchor));
    let hh = hh_profile(dga, weight_max)
        .map_err(|e| e.to_string())
        .and_then(|p| same("HH", &p, &oracle_hh_profile(dga, weight_max).map_err(|e| e.to_string())?));
    items.push(CheckItem::new("HH agrees with the dense oracle", label, hh));
    items
}

/// Checks on a twisted lift: the corrected fold squares to zero and the
/// uncorrected one does not, the comparison map against the verbatim lift
/// intertwines and reduces to the identity, and the profiles agree.
pub fn lift_checks(label: &str, dga: &FreeDga, lift: &LiftSpec, weight_max: u32) -> Vec<CheckItem> {
    let square_zero = hp_cris_obj(dga, lift, weight_max).map(|_| ()).map_err(|e| e.to_string());
    let needs_correction = match fold_lift(lift, weight_max, false) {
        Err(_) => Ok(()),
        Ok(_) => Err("the uncorrected fold squares to zero".to_string()),
    };
    let comparison = LiftSpec::verbatim(dga)
        .and_then(|plain| compare_lifts(dga, lift, &plain, weight_max))
        .map_err(|e| e.to_string())
        .and_then(|c| if c.profiles_equal { Ok(()) } else { Err("profiles differ".into()) });
    let crystalline = crystalline_check(dga, lift, None, weight_max).map_err(|e| e.to_string()).and_then(|v| {
        match v.cris.first_difference(&v.direct) {
            None => Ok(()),
            Some((w, key, x, y)) => Err(format!("weight {w}, parity {key}: cris {x}, direct {y}")),
        }
    });
    vec![
        CheckItem::new("corrected fold squares to zero", label, square_zero),
        CheckItem::new("omitting the correction breaks square-zero", label, needs_correction),
        CheckItem::new("comparison map intertwines and is the identity mod p", label, comparison),
        CheckItem::new("crystalline profile equals the profile of the lift", label, crystalline),
    ]
}

/// Random matrices up to 8 x 8 over `Z/9` and `Z/25`, each decomposed and
/// recomposed.
pub fn snf_suite(seed: u64, count: usize) -> Vec<CheckItem> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rings = [BaseRing::new(3, 2).unwrap(), BaseRing::new(5, 2).unwrap()];
    (0..count)
        .map(|i| {
            let ring = rings[i % 2];
            let (r, c) = (rng.random_range(1..=8), rng.random_range(1..=8));
            let p = ring.p() as i64;
            let rows: Vec<Vec<i64>> = (0..r)
                .map(|_| {
                    (0..c)
                        .map(|_| match rng.random_range(0..4) {
                            0 => 0,
                            1 => p * rng.random_range(1..p),
                            _ => rng.random_range(1..ring.modulus() as i64),
                        })
                        .collect()
                })
                .collect();
            let m = Matrix::from_rows(ring, &rows);
            let (ok, _) = super::snf_result(&m);
            let witness = (!ok).then(|| format!("{rows:?}"));
            CheckItem {
                check: "U D V = M, U and V invertible".into(),
                instance: format!("matrix {i} ({r}x{c} over {ring})"),
                pass: ok,
                witness,
            }
        })
        .collect()
}

/// Instances drawn in order from one seeded generator, so the seed fixes the
/// whole suite.
pub struct Suite {
    pub plain: Vec<(String, FreeDga)>,
    pub lifts: Vec<(String, FreeDga, LiftSpec)>,
}

pub fn suite_instances(opts: &CheckOptions) -> Suite {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut plain = Vec::new();
    let mut lifts = Vec::new();
    for &size in &opts.sizes {
        let shape = InstanceShape { max_generators: size.max(1), ..InstanceShape::default() };
        for (p, n) in CHECK_BASES {
            let base = BaseRing::new(p, n).unwrap();
            plain.push((format!("size {size} over {base}"), random_dga(&mut rng, base, &shape)));
            if n == 1 {
                if let Some((dga, lift)) = random_twisted_lift(&mut rng, base, &shape) {
                    lifts.push((format!("size {size} twisted lift over {base}"), dga, lift));
                }
            }
        }
    }
    Suite { plain, lifts }
}

pub fn run_check(opts: &CheckOptions) -> Vec<CheckItem> {
    let Suite { plain, lifts } = suite_instances(opts);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ 0x5eed);
    let mut items = Vec::new();
    for (label, dga) in &plain {
        items.extend(instance_checks(&mut rng, label, dga, opts.weight_max, opts.fault));
    }
    for (label, dga, lift) in &lifts {
        items.extend(lift_checks(label, dga, lift, opts.weight_max));
    }
    if !opts.sizes.is_empty() {
        items.extend(snf_suite(opts.seed, 20));
    }
    items
}

/// Canonical JSON of every suite instance, keyed by label.
pub fn instance_documents(opts: &CheckOptions) -> BTreeMap<String, String> {
    let Suite { plain, lifts } = suite_instances(opts);
    let mut docs: BTreeMap<String, String> =
        plain.iter().map(|(l, d)| (l.clone(), AlgebraDoc::from_dga(d).to_canonical_json())).collect();
    for (l, d, lift) in &lifts {
        docs.insert(l.clone(), AlgebraDoc::from_dga(d).to_canonical_json());
        docs.insert(
            format!("{l} (lift)"),
            AlgebraDoc::from_parts(lift.algebra(), lift.differential()).to_canonical_json(),
        );
    }
    docs
}
