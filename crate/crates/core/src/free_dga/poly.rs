use std::collections::btree_map::Entry;
use std::collections::BTreeMap;

use crate::ring_core::BaseRing;

/// Index of a generator inside its algebra.
pub type GenId = u16;

/// A word in the generators; the empty word is the unit.
pub type Word = Vec<GenId>;

/// Noncommutative polynomial: finite map from words to nonzero coefficients.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct NCPoly {
    terms: BTreeMap<Word, u64>,
}

impl NCPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn unit(ring: &BaseRing) -> Self {
        Self::monomial(ring, Vec::new(), 1)
    }

    pub fn monomial(ring: &BaseRing, word: Word, coef: u64) -> Self {
        let mut p = Self::zero();
        p.add_term(ring, word, coef);
        p
    }

    pub fn generator(ring: &BaseRing, g: GenId) -> Self {
        Self::monomial(ring, vec![g], 1)
    }

    pub fn from_terms(ring: &BaseRing, terms: impl IntoIterator<Item = (Word, u64)>) -> Self {
        let mut p = Self::zero();
        for (w, c) in terms {
            p.add_term(ring, w, c);
        }
        p
    }

    pub fn add_term(&mut self, ring: &BaseRing, word: Word, coef: u64) {
        let coef = coef % ring.modulus();
        if coef == 0 {
            return;
        }
        match self.terms.entry(word) {
            Entry::Vacant(e) => {
                e.insert(coef);
            }
            Entry::Occupied(mut e) => {
                let v = ring.add(*e.get(), coef);
                if v == 0 {
                    e.remove();
                } else {
                    *e.get_mut() = v;
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, u64)> {
        self.terms.iter().map(|(w, &c)| (w, c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, word: &[GenId]) -> u64 {
        self.terms.get(word).copied().unwrap_or(0)
    }

    pub fn add(&self, ring: &BaseRing, other: &NCPoly) -> NCPoly {
        let mut out = self.clone();
        for (w, c) in other.terms() {
            out.add_term(ring, w.clone(), c);
        }
        out
    }

    pub fn sub(&self, ring: &BaseRing, other: &NCPoly) -> NCPoly {
        self.add(ring, &other.scale(ring, ring.neg(1 % ring.modulus())))
    }

    pub fn scale(&self, ring: &BaseRing, c: u64) -> NCPoly {
        NCPoly::from_terms(ring, self.terms().map(|(w, a)| (w.clone(), ring.mul(a, c))))
    }

    /// Concatenation product.
    pub fn mul(&self, ring: &BaseRing, other: &NCPoly) -> NCPoly {
        let mut out = NCPoly::zero();
        for (a, ca) in self.terms() {
            for (b, cb) in other.terms() {
                let mut w = a.clone();
                w.extend_from_slice(b);
                out.add_term(ring, w, ring.mul(ca, cb));
            }
        }
        out
    }

    /// Coefficientwise reduction to `Z/p^m`, `m <= n`.
    pub fn reduce_to(&self, target: &BaseRing) -> NCPoly {
        NCPoly::from_terms(target, self.terms().map(|(w, c)| (w.clone(), c % target.modulus())))
    }

    /// Same residues read in another ring (representatives `0..p^m` kept).
    pub fn reinterpret(&self, target: &BaseRing) -> NCPoly {
        self.reduce_to(target)
    }

    /// Exact coefficientwise division by `p`, if every coefficient is divisible.
    pub fn div_p(&self, ring: &BaseRing, target: &BaseRing) -> Option<NCPoly> {
        let mut out = NCPoly::zero();
        for (w, c) in self.terms() {
            if c % ring.p() != 0 {
                return None;
            }
            out.add_term(target, w.clone(), c / ring.p());
        }
        Some(out)
    }
}
