use serde::{Deserialize, Serialize};

use std::collections::BTreeMap;

use super::smith::smith_with_v;
use super::{smith_diagonal, BaseRing, Matrix, RingError, SparseMatrix};

/// A finite `Z/p^n`-module in canonical form `(Z/p^n)^free_rank ⊕ ⊕ Z/p^{e_i}`,
/// with every torsion exponent `1 <= e_i < n` listed in ascending order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct HomologyGroup {
    pub divisor_exponents: Vec<u32>,
    pub free_rank: usize,
}

impl HomologyGroup {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn free(rank: usize) -> Self {
        HomologyGroup { divisor_exponents: Vec::new(), free_rank: rank }
    }

    /// Canonical form from the exponents of a cyclic decomposition; exponents of
    /// zero are dropped and exponents `>= n` count as free summands.
    pub fn from_exponents(n: u32, exps: impl IntoIterator<Item = u32>) -> Self {
        let mut g = HomologyGroup::zero();
        for e in exps {
            if e >= n {
                g.free_rank += 1;
            } else if e > 0 {
                g.divisor_exponents.push(e);
            }
        }
        g.divisor_exponents.sort_unstable();
        g
    }

    pub fn is_zero(&self) -> bool {
        self.free_rank == 0 && self.divisor_exponents.is_empty()
    }

    /// Number of cyclic summands.
    pub fn summands(&self) -> usize {
        self.free_rank + self.divisor_exponents.len()
    }

    /// Length as a `Z`-module, i.e. `log_p` of the order.
    pub fn length(&self, n: u32) -> u64 {
        self.free_rank as u64 * n as u64 + self.divisor_exponents.iter().map(|&e| e as u64).sum::<u64>()
    }

    /// All exponents including the free summands at `n`, ascending.
    pub fn exponents(&self, n: u32) -> Vec<u32> {
        let mut v = self.divisor_exponents.clone();
        v.extend(std::iter::repeat_n(n, self.free_rank));
        v
    }
}

impl std::fmt::Display for HomologyGroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        if self.free_rank > 0 {
            parts.push(format!("free^{}", self.free_rank));
        }
        for e in &self.divisor_exponents {
            parts.push(format!("p^{e}"));
        }
        write!(f, "{}", parts.join(" + "))
    }
}

/// Homology `ker(d_out) / im(d_in)` at the middle spot of
/// `R^a --d_in--> R^r --d_out--> R^b`.
///
/// The kernel is read off from the Smith form of `d_out`: in the coordinates
/// `y = V x` it is `⊕ p^{n-e_i} R ≅ ⊕ R/p^{e_i}`. The image of `d_in` is then
/// rewritten in that presentation and the quotient is diagonalized once more.
pub fn complex_homology(d_in: &Matrix, d_out: &Matrix) -> Result<HomologyGroup, RingError> {
    let ring = d_out.ring();
    let r = d_out.cols();
    if d_in.rows() != r {
        return Err(RingError::Shape(format!("d_in has {} rows but d_out has {} columns", d_in.rows(), r)));
    }
    let comp = d_out.mul(d_in)?;
    if let Some((row, col, _)) = comp.first_nonzero() {
        return Err(RingError::CompositionNotZero { row, col });
    }
    Ok(homology_unchecked(&ring, d_in, d_out))
}

pub(crate) fn homology_unchecked(ring: &BaseRing, d_in: &Matrix, d_out: &Matrix) -> HomologyGroup {
    let n = ring.n();
    let r = d_out.cols();
    let (profile, v) = smith_with_v(d_out);
    // kernel exponents: e_i = valuation of the i-th diagonal entry, n past the diagonal
    let kernel_exps: Vec<u32> = (0..r).map(|i| profile.get(i).copied().unwrap_or(n)).collect();
    let live: Vec<usize> = (0..r).filter(|&i| kernel_exps[i] > 0).collect();
    if live.is_empty() {
        return HomologyGroup::zero();
    }
    let y = v.dot(d_in);
    let s = live.len();
    let a = d_in.cols();
    let mut pres = Matrix::zeros(*ring, s, a + s);
    for (row, &i) in live.iter().enumerate() {
        let e = kernel_exps[i];
        let shift = n - e;
        for c in 0..a {
            let val = y.get(i, c);
            let q = ring.div_p_pow(val, shift).expect("image lies in the kernel");
            pres.set(row, c, q);
        }
        pres.set(row, a + row, ring.p_pow(e));
    }
    HomologyGroup::from_exponents(n, smith_diagonal(&pres))
}

/// Homology of a graded complex given by one operator `d` that moves every
/// basis element from degree `t` to degree `t + step`. Returns a group for
/// every degree that occurs in `degrees` (zero groups included).
pub fn graded_homology(
    d: &SparseMatrix,
    degrees: &[i64],
    step: i64,
) -> Result<BTreeMap<i64, HomologyGroup>, RingError> {
    for j in 0..d.cols() {
        if let Some(&(i, _)) = d.column(j).iter().find(|&&(i, _)| degrees[i] != degrees[j] + step) {
            return Err(RingError::Shape(format!("entry ({i}, {j}) does not have degree {step}")));
        }
    }
    let mut by_degree: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
    for (i, &t) in degrees.iter().enumerate() {
        by_degree.entry(t).or_default().push(i);
    }
    let empty = Vec::new();
    let mut out = BTreeMap::new();
    for (&t, here) in &by_degree {
        let below = by_degree.get(&(t - step)).unwrap_or(&empty);
        let above = by_degree.get(&(t + step)).unwrap_or(&empty);
        let d_in = d.block(here, below);
        let d_out = d.block(above, here);
        out.insert(t, complex_homology(&d_in, &d_out)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z9() -> BaseRing {
        BaseRing::new(3, 2).unwrap()
    }

    #[test]
    fn zero_differentials_give_free_module() {
        let r = 4;
        let g = complex_homology(&Matrix::zeros(z9(), r, 0), &Matrix::zeros(z9(), 0, r)).unwrap();
        assert_eq!(g, HomologyGroup::free(r));
    }

    #[test]
    fn multiplication_by_p() {
        let three = Matrix::from_rows(z9(), &[vec![3]]);
        let g = complex_homology(&Matrix::zeros(z9(), 1, 0), &three).unwrap();
        assert_eq!(g, HomologyGroup { divisor_exponents: vec![1], free_rank: 0 });
        let g = complex_homology(&three, &Matrix::zeros(z9(), 0, 1)).unwrap();
        assert_eq!(g, HomologyGroup { divisor_exponents: vec![1], free_rank: 0 });
    }

    #[test]
    fn rejects_non_complex() {
        let one = Matrix::identity(z9(), 1);
        assert!(matches!(complex_homology(&one, &one), Err(RingError::CompositionNotZero { .. })));
    }

    #[test]
    fn exact_sequence_is_acyclic() {
        let ring = z9();
        let d_in = Matrix::from_rows(ring, &[vec![1], vec![2]]);
        let d_out = Matrix::from_rows(ring, &[vec![2, 8]]);
        assert!(complex_homology(&d_in, &d_out).unwrap().is_zero());
    }
}
