//! Folding a mixed slice into a 2-periodic complex (`u = 1`) and the per-weight
//! HH and HP homology profiles.

pub mod reference;

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cyclic_homology::{build_cyclic_bar, CyclicError, IdentityFailure, MixedSlice};
use crate::free_dga::FreeDga;
use crate::ring_core::{complex_homology, graded_homology, BaseRing, HomologyGroup, Matrix, RingError, SparseMatrix};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PeriodicError {
    #[error(transparent)]
    Cyclic(#[from] CyclicError),
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error("folded differential does not square to zero: {0}")]
    DifferentialNotSquareZero(IdentityFailure),
    #[error("operator `{0}` does not change total degree by an odd amount")]
    EvenOperator(String),
    #[error("{ops} operators but {coefs} coefficients")]
    Arity { ops: usize, coefs: usize },
}

/// A `Z/2`-graded complex: one differential exchanging the even and odd parts
/// of a slice's basis.
#[derive(Debug, Clone)]
pub struct FoldedComplex {
    pub weight: u32,
    pub even: Vec<usize>,
    pub odd: Vec<usize>,
    pub differential: SparseMatrix,
}

impl FoldedComplex {
    pub fn ring(&self) -> BaseRing {
        self.differential.ring()
    }

    /// `d: even -> odd` and `d: odd -> even` as dense blocks.
    pub fn blocks(&self) -> (Matrix, Matrix) {
        (self.differential.block(&self.odd, &self.even), self.differential.block(&self.even, &self.odd))
    }

    /// `(H_even, H_odd)`.
    pub fn homology(&self) -> Result<(HomologyGroup, HomologyGroup), RingError> {
        let (to_odd, to_even) = self.blocks();
        Ok((complex_homology(&to_even, &to_odd)?, complex_homology(&to_odd, &to_even)?))
    }
}

/// Sum of `coefs[i] * ops[i]` on the slice, where `ops` names `b`, `B` or
/// attached operators. Fails unless the sum squares to zero.
pub fn fold(slice: &MixedSlice, ops: &[&str], coefs: &[u64]) -> Result<FoldedComplex, PeriodicError> {
    if ops.len() != coefs.len() {
        return Err(PeriodicError::Arity { ops: ops.len(), coefs: coefs.len() });
    }
    let ring = slice.ring();
    let n = slice.len();
    let mut d = SparseMatrix::zeros(ring, n, n);
    for (&name, &c) in ops.iter().zip(coefs) {
        let shift = match name {
            "b" => -1,
            "B" => 1,
            _ => slice.operator(name)?.degree,
        };
        if shift % 2 == 0 {
            return Err(PeriodicError::EvenOperator(name.to_string()));
        }
        let (m, _) = slice.matrix(name)?;
        d = d.lincomb(1, m, c);
    }
    slice.expect_zero("folded d^2 = 0", &d.mul(&d)).map_err(PeriodicError::DifferentialNotSquareZero)?;
    let (even, odd): (Vec<usize>, Vec<usize>) = (0..n).partition(|&i| slice.degrees()[i].rem_euclid(2) == 0);
    Ok(FoldedComplex { weight: slice.weight(), even, odd, differential: d })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProfileKind {
    /// Keyed by total degree.
    Hh,
    /// Keyed by parity, 0 = even and 1 = odd.
    Hp,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProfileEntry {
    pub weight: u32,
    pub parity_or_degree: i64,
    pub divisors: Vec<u32>,
    pub free_rank: usize,
}

impl ProfileEntry {
    pub fn group(&self) -> HomologyGroup {
        HomologyGroup { divisor_exponents: self.divisors.clone(), free_rank: self.free_rank }
    }
}

/// Homology per (weight, degree) or (weight, parity), in weight order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomologyProfile {
    pub kind: ProfileKind,
    pub base: BaseRing,
    pub entries: Vec<ProfileEntry>,
}

impl HomologyProfile {
    pub fn new(kind: ProfileKind, base: BaseRing) -> Self {
        HomologyProfile { kind, base, entries: Vec::new() }
    }

    pub fn push(&mut self, weight: u32, key: i64, g: HomologyGroup) {
        self.entries.push(ProfileEntry {
            weight,
            parity_or_degree: key,
            divisors: g.divisor_exponents,
            free_rank: g.free_rank,
        });
    }

    pub fn get(&self, weight: u32, key: i64) -> HomologyGroup {
        self.entries
            .iter()
            .find(|e| e.weight == weight && e.parity_or_degree == key)
            .map_or_else(HomologyGroup::zero, ProfileEntry::group)
    }

    /// Entries with nonzero homology only, so that profiles built over
    /// different bases compare by content.
    pub fn nonzero(&self) -> BTreeMap<(u32, i64), HomologyGroup> {
        self.entries
            .iter()
            .filter(|e| e.free_rank > 0 || !e.divisors.is_empty())
            .map(|e| ((e.weight, e.parity_or_degree), e.group()))
            .collect()
    }

    pub fn same_groups(&self, other: &HomologyProfile) -> bool {
        self.kind == other.kind && self.nonzero() == other.nonzero()
    }

    /// First (weight, key) at which the two profiles differ.
    pub fn first_difference(&self, other: &HomologyProfile) -> Option<(u32, i64, HomologyGroup, HomologyGroup)> {
        let (a, b) = (self.nonzero(), other.nonzero());
        let keys: std::collections::BTreeSet<_> = a.keys().chain(b.keys()).copied().collect();
        keys.into_iter().find_map(|k| {
            let (x, y) = (a.get(&k).cloned().unwrap_or_default(), b.get(&k).cloned().unwrap_or_default());
            (x != y).then_some((k.0, k.1, x, y))
        })
    }
}

fn slices_with_d(dga: &FreeDga, weight_max: u32) -> Result<Vec<MixedSlice>, PeriodicError> {
    let mut slices = build_cyclic_bar(dga.algebra(), weight_max)?;
    for s in &mut slices {
        s.attach_lie("d", dga.differential())?;
    }
    Ok(slices)
}

/// Hochschild homology of `(C, b + L_d)` per weight and total degree.
pub fn hh_profile(dga: &FreeDga, weight_max: u32) -> Result<HomologyProfile, PeriodicError> {
    let slices = slices_with_d(dga, weight_max)?;
    let parts: Vec<BTreeMap<i64, HomologyGroup>> = slices
        .par_iter()
        .map(|s| {
            let d = s.b().add(&s.operator("L_d")?.matrix);
            Ok(graded_homology(&d, s.degrees(), -1)?)
        })
        .collect::<Result<_, PeriodicError>>()?;
    let mut profile = HomologyProfile::new(ProfileKind::Hh, dga.ring());
    for (s, groups) in slices.iter().zip(parts) {
        for (t, g) in groups {
            profile.push(s.weight(), t, g);
        }
    }
    Ok(profile)
}

/// Folded complexes of `b + B + L_d`, one per weight.
pub fn hp_complexes(dga: &FreeDga, weight_max: u32) -> Result<Vec<FoldedComplex>, PeriodicError> {
    let slices = slices_with_d(dga, weight_max)?;
    slices.par_iter().map(|s| fold(s, &["b", "B", "L_d"], &[1, 1, 1])).collect()
}

/// Periodic cyclic homology per weight and parity.
pub fn hp_profile(dga: &FreeDga, weight_max: u32) -> Result<HomologyProfile, PeriodicError> {
    profile_of(dga.ring(), &hp_complexes(dga, weight_max)?)
}

pub fn profile_of(base: BaseRing, folded: &[FoldedComplex]) -> Result<HomologyProfile, PeriodicError> {
    let groups: Vec<(HomologyGroup, HomologyGroup)> =
        folded.par_iter().map(FoldedComplex::homology).collect::<Result<_, _>>()?;
    let mut profile = HomologyProfile::new(ProfileKind::Hp, base);
    for (f, (even, odd)) in folded.iter().zip(groups) {
        profile.push(f.weight, 0, even);
        profile.push(f.weight, 1, odd);
    }
    Ok(profile)
}

#[cfg(test)]
mod tests;
