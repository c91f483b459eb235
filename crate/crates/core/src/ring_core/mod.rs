//! Exact arithmetic and dense linear algebra over the chain rings `Z/p^n`.

mod homology;
mod matrix;
pub mod reference;
mod smith;
mod sparse;

pub use homology::{complex_homology, graded_homology, HomologyGroup};
pub use matrix::Matrix;
pub use smith::{smith_decompose, smith_diagonal, SmithDecomposition};
pub use sparse::SparseMatrix;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest modulus we accept; keeps every product of two residues inside `u64`.
pub const MAX_MODULUS: u64 = 1 << 31;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RingError {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("exponent must be at least 1")]
    ZeroExponent,
    #[error("modulus {p}^{n} exceeds the supported range")]
    ModulusTooLarge { p: u64, n: u32 },
    #[error("composite d_out * d_in is nonzero at ({row}, {col})")]
    CompositionNotZero { row: usize, col: usize },
    #[error("matrix shapes do not compose: {0}")]
    Shape(String),
}

/// The ring `Z/p^n`. Elements are residues in `0..p^n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RingSpec", into = "RingSpec")]
pub struct BaseRing {
    p: u64,
    n: u32,
    modulus: u64,
}

#[derive(Serialize, Deserialize)]
struct RingSpec {
    p: u64,
    n: u32,
}

impl TryFrom<RingSpec> for BaseRing {
    type Error = RingError;
    fn try_from(s: RingSpec) -> Result<Self, RingError> {
        BaseRing::new(s.p, s.n)
    }
}

impl From<BaseRing> for RingSpec {
    fn from(r: BaseRing) -> Self {
        RingSpec { p: r.p, n: r.n }
    }
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut q = 2;
    while q * q <= p {
        if p.is_multiple_of(q) {
            return false;
        }
        q += 1;
    }
    true
}

impl BaseRing {
    pub fn new(p: u64, n: u32) -> Result<Self, RingError> {
        if !is_prime(p) {
            return Err(RingError::NotPrime(p));
        }
        if n == 0 {
            return Err(RingError::ZeroExponent);
        }
        let mut modulus: u64 = 1;
        for _ in 0..n {
            modulus =
                modulus.checked_mul(p).filter(|m| *m <= MAX_MODULUS).ok_or(RingError::ModulusTooLarge { p, n })?;
        }
        Ok(BaseRing { p, n, modulus })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// The same prime with a different exponent.
    pub fn with_exponent(&self, n: u32) -> Result<Self, RingError> {
        BaseRing::new(self.p, n)
    }

    pub fn reduce(&self, x: i64) -> u64 {
        x.rem_euclid(self.modulus as i64) as u64
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.modulus {
            s - self.modulus
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.modulus - b
        }
    }

    #[inline]
    pub fn neg(&self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.modulus - a
        }
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        (a * b) % self.modulus
    }

    /// `(-1)^e` as a ring element.
    #[inline]
    pub fn sign(&self, odd: bool) -> u64 {
        if odd {
            self.modulus - 1
        } else {
            1 % self.modulus
        }
    }

    pub fn one(&self) -> u64 {
        1 % self.modulus
    }

    /// `p^e`, which is zero once `e >= n`.
    pub fn p_pow(&self, e: u32) -> u64 {
        if e >= self.n {
            0
        } else {
            self.p.pow(e)
        }
    }

    /// Returns `v` with `x = unit * p^v`; `n` for zero.
    pub fn valuation(&self, x: u64) -> u32 {
        if x == 0 {
            return self.n;
        }
        let mut v = 0;
        let mut y = x;
        while y.is_multiple_of(self.p) {
            y /= self.p;
            v += 1;
        }
        v
    }

    pub fn is_unit(&self, x: u64) -> bool {
        !x.is_multiple_of(self.p)
    }

    /// Inverse of a unit via the extended Euclidean algorithm.
    pub fn inv(&self, x: u64) -> Option<u64> {
        if !self.is_unit(x) {
            return None;
        }
        let (mut r0, mut r1) = (self.modulus as i64, x as i64);
        let (mut t0, mut t1) = (0i64, 1i64);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        Some(self.reduce(t0))
    }

    /// Splits a nonzero `x` into `(u, v)` with `x = u * p^v` and `u` a unit.
    pub fn unit_part(&self, x: u64) -> (u64, u32) {
        let v = self.valuation(x);
        if v >= self.n {
            return (0, v);
        }
        (x / self.p.pow(v), v)
    }

    /// Exact division `x / p^e` as an integer representative, if `p^e` divides `x`.
    pub fn div_p_pow(&self, x: u64, e: u32) -> Option<u64> {
        if self.valuation(x) < e {
            return None;
        }
        Some(x / self.p.pow(e.min(self.n)))
    }

    /// Reduction `Z/p^n -> Z/p^m` for `m <= n`.
    pub fn reduce_to(&self, x: u64, target: &BaseRing) -> u64 {
        debug_assert_eq!(self.p, target.p);
        x % target.modulus
    }

    /// Binomial coefficient reduced into the ring, computed in exact integers.
    pub fn binomial(&self, n: u64, k: u64) -> u64 {
        if k > n {
            return 0;
        }
        let k = k.min(n - k);
        let mut acc: u128 = 1;
        for i in 0..k {
            acc = acc * (n - i) as u128 / (i + 1) as u128;
        }
        (acc % self.modulus as u128) as u64
    }
}

impl std::fmt::Display for BaseRing {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.n == 1 {
            write!(f, "F_{}", self.p)
        } else {
            write!(f, "Z/{}^{}", self.p, self.n)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn valuations() {
        let r = BaseRing::new(3, 2).unwrap();
        assert_eq!(r.valuation(6), 1);
        assert_eq!(r.valuation(0), 2);
        let r = BaseRing::new(5, 3).unwrap();
        assert_eq!(r.valuation(7), 0);
    }

    #[test]
    fn rejects_bad_rings() {
        assert_eq!(BaseRing::new(4, 1), Err(RingError::NotPrime(4)));
        assert_eq!(BaseRing::new(3, 0), Err(RingError::ZeroExponent));
        assert!(BaseRing::new(2, 40).is_err());
    }

    #[test]
    fn inverses() {
        let r = BaseRing::new(5, 2).unwrap();
        for x in 0..25 {
            match r.inv(x) {
                Some(y) => assert_eq!(r.mul(x, y), 1),
                None => assert_eq!(x % 5, 0),
            }
        }
    }

    #[test]
    fn binomials_reduce() {
        let r = BaseRing::new(3, 1).unwrap();
        assert_eq!(r.binomial(3, 1), 0);
        assert_eq!(r.binomial(4, 2), 0);
        assert_eq!(r.binomial(5, 2), 1);
        let r = BaseRing::new(2, 2).unwrap();
        assert_eq!(r.binomial(4, 2), 2);
    }
}
