//! Normalized cyclic bar complexes of free DG algebras, one weight at a time.
//!
//! A basis chain `a0[a1|...|am]` has `a0` any word (possibly the unit) and
//! `a1..am` nonempty words. It sits in total degree `m - q`, where `q` is the
//! internal cohomological degree, so `b` and `L_d` have degree -1 and `B` has
//! degree +1 (and `uB` degree -1 once `u` has degree -2).
//!
//! Signs use the shifted degrees `s_i = |a_i| - 1` of every slot:
//!
//! * `b`: merging slots `i, i+1` carries `(-1)^{s_0+..+s_{i-1} + s_i}`; the wrap
//!   term `a_m a_0 [a_1|..|a_{m-1}]` carries `(-1)^{s_m (s_0+..+s_{m-1}) + s_m}`.
//! * `B`: `sum_j (-1)^{S_{<j} S_{>=j}} 1[a_j|..|a_m|a_0|..|a_{j-1}]`, zero when `a0 = 1`.
//! * `L_D` (degree `r`): `D` applied to slot `i` with sign `(-1)^{r S_{<i} + r}`.
//! * `e_D`, `E_D`: the two components of the contraction `ι_D = e_D + u E_D`,
//!   normalized so that
//!   `[b + uB + L_d, ι_D] = (-1)^{r+1} u L_D + ι_{[d,D]}`
//!   holds for every derivation `D` of degree `r` and every odd `d`.

mod bar;

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::free_dga::{Derivation, DgaError, FreeAlgebra, NCPoly, Word};
use crate::ring_core::{BaseRing, SparseMatrix};

pub use bar::{two_sided_bar, BarComplex, BarError, DgModule};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CyclicError {
    #[error(transparent)]
    Dga(#[from] DgaError),
    #[error(transparent)]
    Identity(#[from] IdentityFailure),
    #[error("no operator named `{0}` is attached")]
    UnknownOperator(String),
}

/// A failed exact matrix identity with a reproducing witness: the basis chain
/// (column) whose image is wrong and one offending coefficient.
#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize)]
#[error("{identity} fails at weight {weight}: column {column} ({chain}) has entry {value} in row {row} ({row_chain})")]
pub struct IdentityFailure {
    pub identity: String,
    pub weight: u32,
    pub column: usize,
    pub chain: String,
    pub row: usize,
    pub row_chain: String,
    pub value: u64,
}

/// A basis chain `a0[a1|...|am]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CyclicWord {
    pub slots: Vec<Word>,
}

impl CyclicWord {
    pub fn unit() -> Self {
        CyclicWord { slots: vec![Vec::new()] }
    }

    pub fn simplicial_degree(&self) -> usize {
        self.slots.len() - 1
    }

    pub fn internal_degree(&self, alg: &FreeAlgebra) -> i64 {
        self.slots.iter().map(|w| alg.word_degree(w)).sum()
    }

    pub fn total_degree(&self, alg: &FreeAlgebra) -> i64 {
        self.simplicial_degree() as i64 - self.internal_degree(alg)
    }

    pub fn weight(&self, alg: &FreeAlgebra) -> u32 {
        self.slots.iter().map(|w| alg.word_weight(w)).sum()
    }

    pub fn format(&self, alg: &FreeAlgebra) -> String {
        let head = alg.format_word(&self.slots[0]);
        if self.slots.len() == 1 {
            return head;
        }
        let tail: Vec<String> = self.slots[1..].iter().map(|w| alg.format_word(w)).collect();
        format!("{head}[{}]", tail.join("|"))
    }
}

/// An operator attached to a slice, with its parity (for graded commutators)
/// and the shift it applies to total degree.
#[derive(Debug, Clone)]
pub struct Operator {
    pub name: String,
    pub matrix: SparseMatrix,
    pub odd: bool,
    pub degree: i64,
}

/// One weight piece of the normalized cyclic bar complex.
#[derive(Debug, Clone)]
pub struct MixedSlice {
    weight: u32,
    algebra: Arc<FreeAlgebra>,
    basis: Vec<CyclicWord>,
    degrees: Vec<i64>,
    index: HashMap<CyclicWord, usize>,
    b: SparseMatrix,
    big_b: SparseMatrix,
    ops: Vec<Operator>,
}

type Terms = Vec<(Vec<Word>, u64)>;

fn shifted_odd(alg: &FreeAlgebra, w: &[u16]) -> bool {
    alg.word_degree(w).rem_euclid(2) == 0
}

fn compositions(alg: &FreeAlgebra, weight: u32, prefix: &mut Vec<Word>, out: &mut Vec<Vec<Word>>) {
    if weight == 0 {
        out.push(prefix.clone());
        return;
    }
    for w1 in 1..=weight {
        for word in alg.words_of_weight(w1) {
            prefix.push(word);
            compositions(alg, weight - w1, prefix, out);
            prefix.pop();
        }
    }
}

/// Normalized chains of the given weight, sorted by (total degree, m, slots).
pub fn cyclic_basis(alg: &FreeAlgebra, weight: u32) -> Vec<CyclicWord> {
    let mut out = Vec::new();
    for w0 in 0..=weight {
        for a0 in alg.words_of_weight(w0) {
            let mut tails = Vec::new();
            compositions(alg, weight - w0, &mut Vec::new(), &mut tails);
            for tail in tails {
                let mut slots = Vec::with_capacity(tail.len() + 1);
                slots.push(a0.clone());
                slots.extend(tail);
                out.push(CyclicWord { slots });
            }
        }
    }
    out.sort_by_cached_key(|c| (c.total_degree(alg), c.simplicial_degree(), c.clone()));
    out
}

fn shifted_parities(alg: &FreeAlgebra, c: &CyclicWord) -> Vec<bool> {
    c.slots.iter().map(|w| shifted_odd(alg, w)).collect()
}

fn push(ring: &BaseRing, out: &mut Terms, slots: Vec<Word>, odd: bool, coef: u64) {
    let v = ring.mul(ring.sign(odd), coef);
    if v != 0 {
        out.push((slots, v));
    }
}

#[allow(clippy::needless_range_loop)]
fn hochschild_b(alg: &FreeAlgebra, c: &CyclicWord, out: &mut Terms) {
    let ring = alg.ring();
    let s = shifted_parities(alg, c);
    let m = c.simplicial_degree();
    let mut pre = false;
    for i in 0..m {
        let mut slots = Vec::with_capacity(m);
        slots.extend_from_slice(&c.slots[..i]);
        let mut merged = c.slots[i].clone();
        merged.extend_from_slice(&c.slots[i + 1]);
        slots.push(merged);
        slots.extend_from_slice(&c.slots[i + 2..]);
        push(&ring, out, slots, pre ^ s[i], 1);
        pre ^= s[i];
    }
    if m >= 1 {
        let mut head = c.slots[m].clone();
        head.extend_from_slice(&c.slots[0]);
        let mut slots = vec![head];
        slots.extend_from_slice(&c.slots[1..m]);
        push(&ring, out, slots, (s[m] && pre) ^ s[m], 1);
    }
}

#[allow(clippy::needless_range_loop)]
fn connes_b(alg: &FreeAlgebra, c: &CyclicWord, out: &mut Terms) {
    if c.slots[0].is_empty() {
        return;
    }
    let ring = alg.ring();
    let s = shifted_parities(alg, c);
    let total = s.iter().fold(false, |a, &x| a ^ x);
    let mut pre = false;
    for j in 0..c.slots.len() {
        let mut slots = Vec::with_capacity(c.slots.len() + 1);
        slots.push(Vec::new());
        slots.extend_from_slice(&c.slots[j..]);
        slots.extend_from_slice(&c.slots[..j]);
        push(&ring, out, slots, pre && (total ^ pre), 1);
        pre ^= s[j];
    }
}

/// Values of `D` on a single word, as terms.
fn derive(alg: &FreeAlgebra, der: &Derivation, w: &[u16]) -> NCPoly {
    let mut out = NCPoly::zero();
    alg.apply_word(der, w, 1, &mut out);
    out
}

fn lie_derivative(alg: &FreeAlgebra, der: &Derivation, c: &CyclicWord, out: &mut Terms) {
    let ring = alg.ring();
    let r_odd = der.degree % 2 != 0;
    let s = shifted_parities(alg, c);
    let mut pre = false;
    for (i, slot) in c.slots.iter().enumerate() {
        let odd = r_odd && !pre;
        for (w, coef) in derive(alg, der, slot).terms() {
            if i > 0 && w.is_empty() {
                continue;
            }
            let mut slots = c.slots.clone();
            slots[i] = w.clone();
            push(&ring, out, slots, odd, coef);
        }
        pre ^= s[i];
    }
}

fn contraction_e(alg: &FreeAlgebra, der: &Derivation, c: &CyclicWord, out: &mut Terms) {
    let m = c.simplicial_degree();
    if m == 0 {
        return;
    }
    let ring = alg.ring();
    let r_odd = der.degree % 2 != 0;
    let s = shifted_parities(alg, c);
    let before = s[..m].iter().fold(false, |a, &x| a ^ x);
    let odd = (s[m] && before) ^ s[m] ^ !r_odd;
    for (w, coef) in derive(alg, der, &c.slots[m]).terms() {
        let mut head = w.clone();
        head.extend_from_slice(&c.slots[0]);
        let mut slots = vec![head];
        slots.extend_from_slice(&c.slots[1..m]);
        push(&ring, out, slots, odd, coef);
    }
}

fn contraction_big_e(alg: &FreeAlgebra, der: &Derivation, c: &CyclicWord, fault: bool, out: &mut Terms) {
    if c.slots[0].is_empty() {
        return;
    }
    let ring = alg.ring();
    let m = c.simplicial_degree();
    let r_odd = der.degree % 2 != 0;
    let s = shifted_parities(alg, c);
    let total = s.iter().fold(false, |a, &x| a ^ x);
    let mut before_j = s[0];
    for j in 1..=m {
        let rot = before_j && (total ^ before_j);
        let flip = fault && j == 1;
        let mut seq: Vec<Word> = Vec::with_capacity(m + 1);
        seq.extend_from_slice(&c.slots[j..]);
        seq.extend_from_slice(&c.slots[..j]);
        let mut pre = false;
        for k in 0..(m + 1 - j) {
            let odd = rot ^ (r_odd && pre) ^ true ^ flip;
            for (w, coef) in derive(alg, der, &seq[k]).terms() {
                if w.is_empty() {
                    continue;
                }
                let mut slots = Vec::with_capacity(m + 2);
                slots.push(Vec::new());
                slots.extend_from_slice(&seq[..k]);
                slots.push(w.clone());
                slots.extend_from_slice(&seq[k + 1..]);
                push(&ring, out, slots, odd, coef);
            }
            pre ^= s[j + k];
        }
        before_j ^= s[j];
    }
}

impl MixedSlice {
    /// Builds the slice of the given weight and asserts `b^2 = B^2 = bB + Bb = 0`.
    pub fn build(algebra: Arc<FreeAlgebra>, weight: u32) -> Result<Self, CyclicError> {
        let basis = cyclic_basis(&algebra, weight);
        let degrees = basis.iter().map(|c| c.total_degree(&algebra)).collect();
        let index = basis.iter().cloned().enumerate().map(|(i, c)| (c, i)).collect();
        let ring = algebra.ring();
        let empty = SparseMatrix::zeros(ring, 0, 0);
        let mut slice =
            MixedSlice { weight, algebra, basis, degrees, index, b: empty.clone(), big_b: empty, ops: Vec::new() };
        let alg = slice.algebra.clone();
        slice.b = slice.assemble(|c, out| hochschild_b(&alg, c, out));
        slice.big_b = slice.assemble(|c, out| connes_b(&alg, c, out));
        slice.check_mixed_identities()?;
        Ok(slice)
    }

    fn assemble(&self, f: impl Fn(&CyclicWord, &mut Terms) + Sync) -> SparseMatrix {
        let n = self.basis.len();
        let columns: Vec<Vec<(usize, u64)>> = self
            .basis
            .iter()
            .map(|c| {
                let mut terms = Vec::new();
                f(c, &mut terms);
                terms
                    .into_iter()
                    .map(|(slots, v)| {
                        let key = CyclicWord { slots };
                        let row = *self.index.get(&key).unwrap_or_else(|| {
                            panic!("image {} left the weight-{} basis", key.format(&self.algebra), self.weight)
                        });
                        (row, v)
                    })
                    .collect()
            })
            .collect();
        SparseMatrix::from_columns(self.algebra.ring(), n, columns)
    }

    pub fn weight(&self) -> u32 {
        self.weight
    }

    pub fn algebra(&self) -> &Arc<FreeAlgebra> {
        &self.algebra
    }

    pub fn ring(&self) -> BaseRing {
        self.algebra.ring()
    }

    pub fn basis(&self) -> &[CyclicWord] {
        &self.basis
    }

    pub fn len(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    /// Total degree of each basis element.
    pub fn degrees(&self) -> &[i64] {
        &self.degrees
    }

    pub fn index_of(&self, c: &CyclicWord) -> Option<usize> {
        self.index.get(c).copied()
    }

    pub fn b(&self) -> &SparseMatrix {
        &self.b
    }

    pub fn big_b(&self) -> &SparseMatrix {
        &self.big_b
    }

    pub fn operators(&self) -> &[Operator] {
        &self.ops
    }

    pub fn operator(&self, name: &str) -> Result<&Operator, CyclicError> {
        self.ops.iter().find(|o| o.name == name).ok_or_else(|| CyclicError::UnknownOperator(name.into()))
    }

    /// The matrix of `b`, `B` or an attached operator, with its parity.
    pub fn matrix(&self, name: &str) -> Result<(&SparseMatrix, bool), CyclicError> {
        match name {
            "b" => Ok((&self.b, true)),
            "B" => Ok((&self.big_b, true)),
            _ => self.operator(name).map(|o| (&o.matrix, o.odd)),
        }
    }

    fn attach(&mut self, op: Operator) {
        self.ops.retain(|o| o.name != op.name);
        self.ops.push(op);
    }

    /// Matrix of `L_D`, without attaching it.
    pub fn lie_matrix(&self, der: &Derivation) -> Result<SparseMatrix, CyclicError> {
        self.algebra.validate_derivation(der)?;
        let alg = self.algebra.clone();
        Ok(self.assemble(|c, out| lie_derivative(&alg, der, c, out)))
    }

    /// Matrices of `(e_D, E_D)`, without attaching them. `fault` flips one sign
    /// of `E_D`; it exists so the identity suite can be shown to catch errors.
    pub fn iota_matrices(&self, der: &Derivation, fault: bool) -> Result<(SparseMatrix, SparseMatrix), CyclicError> {
        self.algebra.validate_derivation(der)?;
        let alg = self.algebra.clone();
        let e = self.assemble(|c, out| contraction_e(&alg, der, c, out));
        let big_e = self.assemble(|c, out| contraction_big_e(&alg, der, c, fault, out));
        Ok((e, big_e))
    }

    /// Attaches `L_D` under `L_<name>`.
    pub fn attach_lie(&mut self, name: &str, der: &Derivation) -> Result<String, CyclicError> {
        let matrix = self.lie_matrix(der)?;
        let id = format!("L_{name}");
        self.attach(Operator { name: id.clone(), matrix, odd: der.degree % 2 != 0, degree: -(der.degree as i64) });
        Ok(id)
    }

    /// Attaches `e_D`, `E_D` under `e_<name>`, `E_<name>`.
    pub fn attach_iota(&mut self, name: &str, der: &Derivation) -> Result<(String, String), CyclicError> {
        let (e, big_e) = self.iota_matrices(der, false)?;
        let odd = der.degree % 2 == 0;
        let r = der.degree as i64;
        let (ie, ib) = (format!("e_{name}"), format!("E_{name}"));
        self.attach(Operator { name: ie.clone(), matrix: e, odd, degree: -1 - r });
        self.attach(Operator { name: ib.clone(), matrix: big_e, odd, degree: 1 - r });
        Ok((ie, ib))
    }

    /// Attaches an arbitrary operator matrix (used for reductions and lifts).
    pub fn attach_matrix(&mut self, name: &str, matrix: SparseMatrix, odd: bool, degree: i64) {
        assert_eq!((matrix.rows(), matrix.cols()), (self.len(), self.len()), "operator shape");
        self.attach(Operator { name: name.to_string(), matrix, odd, degree });
    }

    /// Same basis and operators over another power of `p`: reduction when the
    /// exponent shrinks, verbatim reinterpretation of residues when it grows.
    pub fn change_ring(&self, ring: BaseRing) -> MixedSlice {
        let algebra = Arc::new(self.algebra.with_ring(ring));
        let conv = |m: &SparseMatrix| {
            if ring.n() <= self.ring().n() {
                m.reduce_to(ring)
            } else {
                m.lift_verbatim(ring)
            }
        };
        MixedSlice {
            weight: self.weight,
            algebra,
            basis: self.basis.clone(),
            degrees: self.degrees.clone(),
            index: self.index.clone(),
            b: conv(&self.b),
            big_b: conv(&self.big_b),
            ops: self.ops.iter().map(|o| Operator { matrix: conv(&o.matrix), ..o.clone() }).collect(),
        }
    }

    /// `Ok` if `m` is the zero matrix, otherwise a witness.
    pub fn expect_zero(&self, identity: &str, m: &SparseMatrix) -> Result<(), IdentityFailure> {
        match m.first_nonzero() {
            None => Ok(()),
            Some((row, column, value)) => Err(IdentityFailure {
                identity: identity.to_string(),
                weight: self.weight,
                column,
                chain: self.basis[column].format(&self.algebra),
                row,
                row_chain: self.basis[row].format(&self.algebra),
                value,
            }),
        }
    }

    pub fn check_mixed_identities(&self) -> Result<(), IdentityFailure> {
        self.expect_zero("b^2 = 0", &self.b.mul(&self.b))?;
        self.expect_zero("B^2 = 0", &self.big_b.mul(&self.big_b))?;
        self.expect_zero("bB + Bb = 0", &self.b.graded_commutator(true, &self.big_b, true))
    }

    /// The Cartan relation `[b + uB + L_d, e_D + u E_D] = (-1)^{|D|+1} u L_D + ι_{[d,D]}`,
    /// one result per power of `u`. `d` must have odd degree; it need not
    /// square to zero.
    pub fn check_cartan(
        &self,
        d: &Derivation,
        der: &Derivation,
        fault: bool,
    ) -> Result<Vec<Result<(), IdentityFailure>>, CyclicError> {
        let ring = self.ring();
        let alg = &self.algebra;
        let ld = self.lie_matrix(d)?;
        let l_der = self.lie_matrix(der)?;
        let (e, big_e) = self.iota_matrices(der, fault)?;
        let bracket = alg.bracket(d, der);
        let (eb, big_eb) = self.iota_matrices(&bracket, false)?;
        let iota_odd = der.degree % 2 == 0;
        let b_ld = self.b.add(&ld);
        let sign_l = ring.sign(der.degree % 2 == 0);

        let u0 = b_ld.graded_commutator(true, &e, iota_odd).sub(&eb);
        let u1 = self
            .big_b
            .graded_commutator(true, &e, iota_odd)
            .add(&b_ld.graded_commutator(true, &big_e, iota_odd))
            .sub(&l_der.scale(sign_l))
            .sub(&big_eb);
        let u2 = self.big_b.graded_commutator(true, &big_e, iota_odd);
        Ok(vec![
            self.expect_zero("Cartan relation, u^0 component", &u0),
            self.expect_zero("Cartan relation, u^1 component", &u1),
            self.expect_zero("Cartan relation, u^2 component", &u2),
        ])
    }

    /// `L_{[D1,D2]} = [L_{D1}, L_{D2}]`.
    pub fn check_lie_functoriality(&self, d1: &Derivation, d2: &Derivation) -> Result<(), CyclicError> {
        let l1 = self.lie_matrix(d1)?;
        let l2 = self.lie_matrix(d2)?;
        let l12 = self.lie_matrix(&self.algebra.bracket(d1, d2))?;
        let diff = l1.graded_commutator(d1.degree % 2 != 0, &l2, d2.degree % 2 != 0).sub(&l12);
        Ok(self.expect_zero("L_[D1,D2] = [L_D1, L_D2]", &diff)?)
    }
}

/// Slices of weights `0..=weight_max`, built in parallel.
pub fn build_cyclic_bar(alg: &FreeAlgebra, weight_max: u32) -> Result<Vec<MixedSlice>, CyclicError> {
    let alg = Arc::new(alg.clone());
    (0..=weight_max).into_par_iter().map(|w| MixedSlice::build(alg.clone(), w)).collect()
}

/// Serializable view of a slice: basis labels, total degrees and every
/// operator as `(row, col, value)` triples.
#[derive(Debug, Serialize)]
pub struct SliceDump {
    pub weight: u32,
    pub basis: Vec<String>,
    pub degrees: Vec<i64>,
    /// `(name, [(row, column, value)])`.
    #[allow(clippy::type_complexity)]
    pub operators: Vec<(String, Vec<(usize, usize, u64)>)>,
}

impl From<&MixedSlice> for SliceDump {
    fn from(s: &MixedSlice) -> Self {
        let triples = |m: &SparseMatrix| {
            (0..m.cols()).flat_map(|j| m.column(j).iter().map(move |&(i, v)| (i, j, v))).collect::<Vec<_>>()
        };
        let mut operators = vec![("b".to_string(), triples(&s.b)), ("B".to_string(), triples(&s.big_b))];
        operators.extend(s.ops.iter().map(|o| (o.name.clone(), triples(&o.matrix))));
        SliceDump {
            weight: s.weight,
            basis: s.basis.iter().map(|c| c.format(&s.algebra)).collect(),
            degrees: s.degrees.clone(),
            operators,
        }
    }
}

impl fmt::Display for Operator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (degree {}, {} nonzeros)", self.name, self.degree, self.matrix.nnz())
    }
}
