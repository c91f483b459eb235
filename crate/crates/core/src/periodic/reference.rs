//! Dense recomputation of HH and HP profiles that avoids the Smith-form path:
//! Gaussian elimination over `F_p`, otherwise explicit enumeration of the
//! finite modules, falling back to Howell-style counting when enumeration
//! would be too large.

use super::{FoldedComplex, HomologyProfile, PeriodicError, ProfileKind};
use crate::cyclic_homology::build_cyclic_bar;
use crate::free_dga::FreeDga;
use crate::ring_core::reference::{counted_homology, enumerated_homology, field_homology};
use crate::ring_core::{HomologyGroup, Matrix};

pub fn oracle_homology(d_in: &Matrix, d_out: &Matrix) -> HomologyGroup {
    if d_in.ring().n() == 1 {
        return field_homology(d_in, d_out);
    }
    enumerated_homology(d_in, d_out).unwrap_or_else(|| counted_homology(d_in, d_out))
}

/// HH per degree from the dense `b + L_d` of each slice.
pub fn oracle_hh_profile(dga: &FreeDga, weight_max: u32) -> Result<HomologyProfile, PeriodicError> {
    let mut profile = HomologyProfile::new(ProfileKind::Hh, dga.ring());
    for mut s in build_cyclic_bar(dga.algebra(), weight_max)? {
        s.attach_lie("d", dga.differential())?;
        let d = s.b().add(&s.operator("L_d")?.matrix).to_dense();
        let degs = s.degrees().to_vec();
        let mut keys = degs.clone();
        keys.sort_unstable();
        keys.dedup();
        let at = |t: i64| -> Vec<usize> { (0..degs.len()).filter(|&i| degs[i] == t).collect() };
        for t in keys {
            let g = oracle_homology(&d.select(&at(t), &at(t + 1)), &d.select(&at(t - 1), &at(t)));
            profile.push(s.weight(), t, g);
        }
    }
    Ok(profile)
}

/// HP per parity from the dense folded differentials.
pub fn oracle_hp_profile(folded: &[FoldedComplex]) -> HomologyProfile {
    let base = folded.first().map_or_else(|| crate::ring_core::BaseRing::new(2, 1).unwrap(), FoldedComplex::ring);
    let mut profile = HomologyProfile::new(ProfileKind::Hp, base);
    for f in folded {
        let d = f.differential.to_dense();
        let even_to_odd = d.select(&f.odd, &f.even);
        let odd_to_even = d.select(&f.even, &f.odd);
        profile.push(f.weight, 0, oracle_homology(&odd_to_even, &even_to_odd));
        profile.push(f.weight, 1, oracle_homology(&even_to_odd, &odd_to_even));
    }
    profile
}
