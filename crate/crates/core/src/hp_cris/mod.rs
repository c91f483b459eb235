//! The crystalline periodic cyclic complex of a mod-`p` algebra: given a lift
//! `d~` of its differential to `Z/p^2` with `d~^2 = p D`, the complex
//! `b + B + L_{d~} + p (e_D + E_D)` on the cyclic bar complex of the lifted
//! algebra, folded at `u = 1`. Also the comparison map between two lifts and
//! the check against the periodic homology of a genuine lift.

use log::warn;
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::cyclic_homology::{build_cyclic_bar, CyclicError, IdentityFailure, MixedSlice};
use crate::free_dga::random::{random_derivation, random_dga, InstanceShape};
use crate::free_dga::{
    extract_obstruction, parse_lift, reduce_mod_p, Derivation, DgaError, FreeAlgebra, FreeDga, GenId, ParseError,
};
use crate::periodic::{fold, hp_profile, profile_of, FoldedComplex, HomologyProfile, PeriodicError};
use crate::ring_core::{BaseRing, SparseMatrix};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CrisError {
    #[error(transparent)]
    Dga(#[from] DgaError),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Cyclic(#[from] CyclicError),
    #[error(transparent)]
    Periodic(#[from] PeriodicError),
    #[error("lift reduces to {found} on `{generator}` but the algebra has {expected}")]
    LiftDoesNotReduce { generator: String, found: String, expected: String },
    #[error("lifts are not congruent mod p at `{generator}`: difference {value}")]
    LiftsNotCongruentModP { generator: String, value: String },
    #[error("the lift used for the direct side has d^2 = {value} != 0 on `{generator}`")]
    NotVerbatimLiftable { generator: String, value: String },
    #[error("comparison map is not a chain map: {0}")]
    NotIntertwining(IdentityFailure),
    #[error("comparison map is not the identity mod p: {0}")]
    NotIdentityModP(IdentityFailure),
    #[error("reduction mod p differs from the periodic complex of the algebra: {0}")]
    ReductionMismatch(IdentityFailure),
}

/// A lift `d~` over `Z/p^2` of a mod-`p` differential, with `d~^2 = 0 mod p`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LiftSpec {
    algebra: FreeAlgebra,
    d_tilde: Derivation,
    obstruction: Derivation,
}

impl LiftSpec {
    /// `algebra` must be over `Z/p^2`.
    pub fn new(algebra: FreeAlgebra, d_tilde: Derivation) -> Result<Self, CrisError> {
        if d_tilde.degree != 1 {
            return Err(DgaError::DifferentialDegree(d_tilde.degree).into());
        }
        let obstruction = extract_obstruction(&algebra, &d_tilde)?;
        Ok(LiftSpec { algebra, d_tilde, obstruction })
    }

    /// Residues `0..p` of `d` read over `Z/p^2`.
    pub fn verbatim(dga: &FreeDga) -> Result<Self, CrisError> {
        let (alg, d) = dga.lift_verbatim(2)?;
        LiftSpec::new(alg, d)
    }

    /// Lift file in the algebra schema with base `{p, n: 2}`.
    pub fn parse(text: &str, dga: &FreeDga) -> Result<Self, CrisError> {
        let (alg, d) = parse_lift(text, dga.algebra())?;
        LiftSpec::new(alg, d)
    }

    /// `d~ + p E` for a degree-1 derivation `E` over `F_p`.
    pub fn perturbed(&self, e: &Derivation) -> Result<Self, CrisError> {
        let ring = self.ring();
        let shift = e.reduce_to(&ring).scale(&ring, ring.p());
        LiftSpec::new(self.algebra.clone(), self.d_tilde.add(&ring, &shift))
    }

    pub fn ring(&self) -> BaseRing {
        self.algebra.ring()
    }

    pub fn algebra(&self) -> &FreeAlgebra {
        &self.algebra
    }

    pub fn differential(&self) -> &Derivation {
        &self.d_tilde
    }

    /// `D` over `F_p` with `d~^2 = p D`.
    pub fn obstruction(&self) -> &Derivation {
        &self.obstruction
    }

    pub fn is_square_zero(&self) -> bool {
        self.obstruction.is_zero()
    }

    /// Checks that `d~` reduces to the differential of `dga`.
    pub fn check_reduces_to(&self, dga: &FreeDga) -> Result<(), CrisError> {
        let reduced = reduce_mod_p(&self.algebra, &self.d_tilde)?;
        if reduced.algebra().generators() != dga.algebra().generators() {
            return Err(DgaError::WrongBase { expected: dga.ring().to_string(), found: self.ring().to_string() }.into());
        }
        let alg = dga.algebra();
        for g in 0..alg.num_generators() {
            let (found, expected) = (reduced.differential().value(g as GenId), dga.differential().value(g as GenId));
            if found != expected {
                return Err(CrisError::LiftDoesNotReduce {
                    generator: alg.name(g as GenId).to_string(),
                    found: alg.format_poly(found),
                    expected: alg.format_poly(expected),
                });
            }
        }
        Ok(())
    }
}

/// The folded crystalline complex, one block per weight.
#[derive(Debug, Clone)]
pub struct CrisComplex {
    pub lift: LiftSpec,
    pub folded: Vec<FoldedComplex>,
    pub warnings: Vec<String>,
}

impl CrisComplex {
    pub fn obstruction(&self) -> &Derivation {
        self.lift.obstruction()
    }

    pub fn profile(&self) -> Result<HomologyProfile, CrisError> {
        Ok(profile_of(self.lift.ring(), &self.folded)?)
    }

    /// Reduction mod `p` agrees matrix for matrix with the fold of
    /// `b + B + L_d` for `dga`.
    pub fn check_reduction(&self, dga: &FreeDga) -> Result<(), CrisError> {
        let fp = dga.ring();
        let direct = crate::periodic::hp_complexes(dga, self.folded.len() as u32 - 1)?;
        for (mine, theirs) in self.folded.iter().zip(&direct) {
            let diff = mine.differential.reduce_to(fp).sub(&theirs.differential);
            let slice = MixedSlice::build(std::sync::Arc::new(dga.algebra().clone()), mine.weight)?;
            slice.expect_zero("cris mod p = hp fold", &diff).map_err(CrisError::ReductionMismatch)?;
        }
        Ok(())
    }
}

const LIFT: &str = "dt";
const OBSTRUCTION: &str = "D";

/// Slices over `Z/p^2` with `L_{d~}` and `e_D`, `E_D` attached.
fn lift_slices(lift: &LiftSpec, weight_max: u32) -> Result<Vec<MixedSlice>, CrisError> {
    let ring = lift.ring();
    let big_d = lift.obstruction().reduce_to(&ring);
    let mut slices = build_cyclic_bar(lift.algebra(), weight_max)?;
    for s in &mut slices {
        s.attach_lie(LIFT, lift.differential())?;
        s.attach_iota(OBSTRUCTION, &big_d)?;
    }
    Ok(slices)
}

/// Folds `b + B + L_{d~}`, plus `p (e_D + E_D)` when `correction` is set.
/// Without the correction the fold fails whenever `D != 0`.
pub fn fold_lift(lift: &LiftSpec, weight_max: u32, correction: bool) -> Result<Vec<FoldedComplex>, CrisError> {
    let p = lift.ring().p();
    let slices = lift_slices(lift, weight_max)?;
    let (ops, coefs): (&[&str], &[u64]) = if correction {
        (&["b", "B", "L_dt", "e_D", "E_D"], &[1, 1, 1, p, p])
    } else {
        (&["b", "B", "L_dt"], &[1, 1, 1])
    };
    Ok(slices.par_iter().map(|s| fold(s, ops, coefs)).collect::<Result<_, _>>()?)
}

pub fn hp_cris_obj(dga: &FreeDga, lift: &LiftSpec, weight_max: u32) -> Result<CrisComplex, CrisError> {
    lift.check_reduces_to(dga)?;
    let mut warnings = Vec::new();
    if dga.ring().p() == 2 {
        let msg = "p = 2: the complex is built, but the comparison results it is used for need p odd".to_string();
        warn!("{msg}");
        warnings.push(msg);
    }
    let folded = fold_lift(lift, weight_max, true)?;
    Ok(CrisComplex { lift: lift.clone(), folded, warnings })
}

/// Outcome of comparing the complexes of two lifts.
#[derive(Debug, Clone, Serialize)]
pub struct LiftComparison {
    /// `D'` with `p D' = d~1 - d~2`, formatted per generator.
    pub difference: Vec<(String, String)>,
    /// `Phi = id` exactly (happens when `D' = 0`).
    pub phi_is_identity: bool,
    pub first: HomologyProfile,
    pub second: HomologyProfile,
    pub profiles_equal: bool,
}

/// `D'` over `F_p` with `p D' = d~1 - d~2`.
pub fn lift_difference(lift1: &LiftSpec, lift2: &LiftSpec) -> Result<Derivation, CrisError> {
    let ring = lift1.ring();
    if lift2.algebra() != lift1.algebra() {
        return Err(DgaError::WrongBase { expected: ring.to_string(), found: lift2.ring().to_string() }.into());
    }
    let fp = ring.with_exponent(1).map_err(DgaError::from)?;
    let diff = lift1.differential().sub(&ring, lift2.differential());
    let mut values = Vec::with_capacity(diff.values.len());
    for (g, v) in diff.values.iter().enumerate() {
        match v.div_p(&ring, &fp) {
            Some(q) => values.push(q),
            None => {
                return Err(CrisError::LiftsNotCongruentModP {
                    generator: lift1.algebra().name(g as GenId).to_string(),
                    value: lift1.algebra().format_poly(v),
                })
            }
        }
    }
    Ok(Derivation { degree: 1, values })
}

/// `Phi = id + p (e_{D'} + E_{D'})` on each weight, checked to satisfy
/// `Phi delta_1 = delta_2 Phi` and `Phi = id mod p`.
pub fn compare_lifts(
    dga: &FreeDga,
    lift1: &LiftSpec,
    lift2: &LiftSpec,
    weight_max: u32,
) -> Result<LiftComparison, CrisError> {
    let d_prime = lift_difference(lift1, lift2)?;
    let first = hp_cris_obj(dga, lift1, weight_max)?;
    let second = hp_cris_obj(dga, lift2, weight_max)?;
    let ring = lift1.ring();
    let fp = dga.ring();
    let lifted = d_prime.reduce_to(&ring);
    let slices = build_cyclic_bar(lift1.algebra(), weight_max)?;
    let checks: Vec<bool> = slices
        .par_iter()
        .zip(first.folded.par_iter().zip(&second.folded))
        .map(|(s, (c1, c2))| {
            let (e, big_e) = s.iota_matrices(&lifted, false)?;
            let correction = e.add(&big_e).scale(ring.p());
            let phi = SparseMatrix::identity(ring, s.len()).add(&correction);
            let defect = phi.mul(&c1.differential).sub(&c2.differential.mul(&phi));
            s.expect_zero("Phi d1 = d2 Phi", &defect).map_err(CrisError::NotIntertwining)?;
            s.expect_zero("Phi = id mod p", &correction.reduce_to(fp)).map_err(CrisError::NotIdentityModP)?;
            Ok(correction.is_zero())
        })
        .collect::<Result<_, CrisError>>()?;
    let alg = dga.algebra();
    let difference = (0..alg.num_generators())
        .map(|g| (alg.name(g as GenId).to_string(), alg.format_poly(d_prime.value(g as GenId))))
        .collect();
    let (first, second) = (first.profile()?, second.profile()?);
    let profiles_equal = first.same_groups(&second);
    Ok(LiftComparison { difference, phi_is_identity: checks.iter().all(|&c| c), first, second, profiles_equal })
}

/// Crystalline profile against the periodic homology of a genuine lift.
#[derive(Debug, Clone, Serialize)]
pub struct CrystallineVerdict {
    /// `"verbatim"` or `"reference"`: which square-zero lift gave the direct side.
    pub direct_source: String,
    pub direct: HomologyProfile,
    pub cris: HomologyProfile,
    pub equal: bool,
}

/// Compares `hp_cris_obj(dga, lift)` with `HP` of a lift of `dga` that is a
/// DGA over `Z/p^2`: `reference` if given, otherwise the verbatim lift.
pub fn crystalline_check(
    dga: &FreeDga,
    lift: &LiftSpec,
    reference: Option<&LiftSpec>,
    weight_max: u32,
) -> Result<CrystallineVerdict, CrisError> {
    let (source, genuine) = match reference {
        Some(r) => ("reference", r.clone()),
        None => ("verbatim", LiftSpec::verbatim(dga)?),
    };
    genuine.check_reduces_to(dga)?;
    if !genuine.is_square_zero() {
        let alg = genuine.algebra();
        let sq = alg.compose_on_generators(genuine.differential(), genuine.differential());
        let g = sq.iter().position(|v| !v.is_zero()).expect("nonzero obstruction");
        return Err(CrisError::NotVerbatimLiftable {
            generator: alg.name(g as GenId).to_string(),
            value: alg.format_poly(&sq[g]),
        });
    }
    let lifted = FreeDga::new(genuine.algebra().clone(), genuine.differential().clone())?;
    let direct = hp_profile(&lifted, weight_max)?;
    let cris = hp_cris_obj(dga, lift, weight_max)?.profile()?;
    let equal = direct.same_groups(&cris);
    Ok(CrystallineVerdict { direct_source: source.to_string(), direct, cris, equal })
}

/// Draws random DGAs and degree-1 perturbations `d + p E` of their verbatim
/// lifts until the obstruction `D = [d, E]` is nonzero. `None` after
/// `TWIST_ATTEMPTS` draws.
pub fn random_twisted_lift<R: Rng>(rng: &mut R, base: BaseRing, shape: &InstanceShape) -> Option<(FreeDga, LiftSpec)> {
    for _ in 0..TWIST_ATTEMPTS {
        let dga = random_dga(rng, base, shape);
        let e = random_derivation(rng, dga.algebra(), 1);
        let lift =
            LiftSpec::verbatim(&dga).and_then(|l| l.perturbed(&e)).expect("verbatim lifts of random DGAs are valid");
        if !lift.is_square_zero() {
            return Some((dga, lift));
        }
    }
    None
}

pub const TWIST_ATTEMPTS: usize = 10_000;
