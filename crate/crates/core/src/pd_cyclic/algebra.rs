//! A finite free commutative `R_n`-algebra `A` given by structure constants,
//! and the maps `gamma: A^# (x) F_n -> A^# (x) R_n` and
//! `beta: A^# (x) F_n -> A_0^#` of cyclic `W`-modules.

use std::collections::BTreeMap;

use serde::Serialize;

use super::lambda::LambdaMorphism;
use super::{
    check_module_map, make_q, restrict, verify_graded, CyclicModuleData, DividedPowerRing, Filtered, FiltrationWitness,
    FnAlgebra, PdError,
};
use crate::ring_core::{BaseRing, SparseMatrix};

/// An element of `A`: one `R_n` coordinate vector per basis element `y_s`.
pub type Element = Vec<Vec<u64>>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RnAlgebra {
    pub base: DividedPowerRing,
    /// `y_s y_t = sum_u mult[s][t][u] y_u`, with `y_0 = 1`.
    mult: Vec<Vec<Element>>,
}

impl RnAlgebra {
    pub fn new(base: DividedPowerRing, mult: Vec<Vec<Element>>) -> Result<Self, PdError> {
        let r = mult.len();
        let bad = |m: String| Err(PdError::NotAnAlgebra(m));
        if r == 0 {
            return bad("rank zero".into());
        }
        if mult
            .iter()
            .any(|row| row.len() != r || row.iter().any(|e| e.len() != r || e.iter().any(|c| c.len() != base.rank())))
        {
            return bad(format!("structure constants must be {r} x {r} x {r} x {}", base.rank()));
        }
        let a = RnAlgebra { base, mult };
        for s in 0..r {
            if a.mul(&a.basis(0), &a.basis(s)) != a.basis(s) {
                return bad(format!("y_0 is not a unit on y_{s}"));
            }
            for t in 0..r {
                let st = a.mul(&a.basis(s), &a.basis(t));
                if st != a.mul(&a.basis(t), &a.basis(s)) {
                    return bad(format!("y_{s} y_{t} != y_{t} y_{s}"));
                }
                for u in 0..r {
                    if a.mul(&st, &a.basis(u)) != a.mul(&a.basis(s), &a.mul(&a.basis(t), &a.basis(u))) {
                        return bad(format!("associativity fails on y_{s} y_{t} y_{u}"));
                    }
                }
            }
        }
        Ok(a)
    }

    fn constant(base: &DividedPowerRing, c: u64) -> Vec<u64> {
        let mut v = vec![0; base.rank()];
        v[0] = c;
        v
    }

    /// `A = R_n`.
    pub fn base_ring(base: DividedPowerRing) -> Self {
        Self::new(base, vec![vec![vec![Self::constant(&base, 1)]]]).expect("R_n is an algebra")
    }

    /// `A = R_n[y]/(y^2 - c)` for `c` in `R_n`.
    pub fn quadratic(base: DividedPowerRing, c: Vec<u64>) -> Result<Self, PdError> {
        let zero = vec![0; base.rank()];
        let one = Self::constant(&base, 1);
        let e = |a: &Vec<u64>, b: &Vec<u64>| vec![a.clone(), b.clone()];
        let mult = vec![vec![e(&one, &zero), e(&zero, &one)], vec![e(&zero, &one), e(&c, &zero)]];
        Self::new(base, mult)
    }

    /// `R_n[y]/(y^2)`.
    pub fn dual_numbers(base: DividedPowerRing) -> Self {
        Self::quadratic(base, vec![0; base.rank()]).expect("dual numbers are an algebra")
    }

    pub fn rank(&self) -> usize {
        self.mult.len()
    }

    pub fn basis(&self, s: usize) -> Element {
        let mut e = vec![vec![0; self.base.rank()]; self.rank()];
        e[s][0] = 1;
        e
    }

    pub fn mul(&self, u: &Element, v: &Element) -> Element {
        let ring = self.base.ring;
        let mut out = vec![vec![0; self.base.rank()]; self.rank()];
        for (s, cs) in u.iter().enumerate() {
            for (t, ct) in v.iter().enumerate() {
                if cs.iter().all(|&x| x == 0) || ct.iter().all(|&x| x == 0) {
                    continue;
                }
                let coef = self.base.mul(cs, ct);
                for (w, cw) in self.mult[s][t].iter().enumerate() {
                    for (o, x) in out[w].iter_mut().zip(self.base.mul(&coef, cw)) {
                        *o = ring.add(*o, x);
                    }
                }
            }
        }
        out
    }

    /// `A_0 = A (x)_{R_n} W`.
    pub fn reduction(&self) -> RnAlgebra {
        let base = DividedPowerRing::new(self.base.ring, 0);
        let mult =
            self.mult.iter().map(|row| row.iter().map(|e| e.iter().map(|c| vec![c[0]]).collect()).collect()).collect();
        RnAlgebra { base, mult }
    }
}

/// The coefficient ring `C([k])` of `A^# (x)_{R^#} C`.
#[derive(Debug, Clone, Copy)]
enum Coeffs {
    F(FnAlgebra),
    R(DividedPowerRing),
}

impl Coeffs {
    fn rank(&self, k: usize) -> usize {
        match self {
            Coeffs::F(f) => f.rank(k),
            Coeffs::R(r) => r.rank(),
        }
    }

    fn slot(&self, k: usize, j: usize, c: &[u64]) -> Vec<u64> {
        let ring = self.ring();
        let mut out = vec![0; self.rank(k)];
        for (d, &x) in c.iter().enumerate().filter(|e| *e.1 != 0) {
            let basis = match self {
                Coeffs::F(f) => f.slot(k, j, d),
                Coeffs::R(r) => {
                    let mut v = vec![0; r.rank()];
                    v[d] = 1;
                    v
                }
            };
            for (o, b) in out.iter_mut().zip(basis) {
                *o = ring.add(*o, ring.mul(x, b));
            }
        }
        out
    }

    fn mul(&self, u: &[u64], v: &[u64]) -> Vec<u64> {
        match self {
            Coeffs::F(f) => f.mul(u, v),
            Coeffs::R(r) => r.mul(u, v),
        }
    }

    fn push(&self, f: &LambdaMorphism, b: usize) -> usize {
        match self {
            Coeffs::F(a) => a.push(f, b),
            Coeffs::R(_) => b,
        }
    }

    fn ring(&self) -> BaseRing {
        match self {
            Coeffs::F(f) => f.ring,
            Coeffs::R(r) => r.ring,
        }
    }

    fn label(&self, b: usize) -> String {
        match self {
            Coeffs::F(f) => f.label(b),
            Coeffs::R(_) => format!("t^[{b}]"),
        }
    }
}

fn digits(mut u: usize, r: usize, k: usize) -> Vec<usize> {
    (0..k)
        .map(|_| {
            let d = u % r;
            u /= r;
            d
        })
        .collect()
}

/// `A^{(x)k} (x)_{R_n^{(x)k}} C([k])` with basis `y_U (x) c_b` at `U * rank C + b`,
/// `U` read in base `rank A` with slot 0 least significant.
fn tensor_module(name: &str, a: &RnAlgebra, c: Coeffs, k_max: usize) -> CyclicModuleData {
    let r = a.rank();
    let ring = c.ring();
    let bases = (1..=k_max)
        .map(|k| {
            (0..r.pow(k as u32))
                .flat_map(|u| (0..c.rank(k)).map(move |b| (u, b)))
                .map(|(u, b)| {
                    let ys: Vec<String> = digits(u, r, k).iter().map(|s| format!("y{s}")).collect();
                    format!("{} (x) {}", ys.join("|"), c.label(b))
                })
                .collect()
        })
        .collect();
    CyclicModuleData::from_action(name, ring, k_max, bases, |f| {
        let (m, k) = (f.source(), f.target());
        let phi = f.set_map();
        let rank_c = c.rank(k);
        let cols = (0..r.pow(m as u32))
            .flat_map(|u| (0..c.rank(m)).map(move |b| (u, b)))
            .map(|(u, b)| {
                let s = digits(u, r, m);
                // fibre products in each target slot
                let slots: Vec<Element> = (0..k)
                    .map(|j| (0..m).filter(|&i| phi[i] == j).fold(a.basis(0), |acc, i| a.mul(&acc, &a.basis(s[i]))))
                    .collect();
                let mut terms: BTreeMap<usize, Vec<u64>> = BTreeMap::new();
                let mut start = vec![0; rank_c];
                start[c.push(f, b)] = 1;
                terms.insert(0, start);
                for (j, e) in slots.iter().enumerate() {
                    let mut next = BTreeMap::new();
                    for (w, coef) in &terms {
                        for (t, ct) in e.iter().enumerate().filter(|x| x.1.iter().any(|&v| v != 0)) {
                            let prod = c.mul(coef, &c.slot(k, j, ct));
                            let key = w + t * r.pow(j as u32);
                            let acc: &mut Vec<u64> = next.entry(key).or_insert_with(|| vec![0; rank_c]);
                            for (o, x) in acc.iter_mut().zip(prod) {
                                *o = ring.add(*o, x);
                            }
                        }
                    }
                    terms = next;
                }
                terms
                    .into_iter()
                    .flat_map(|(w, v)| {
                        v.into_iter().enumerate().filter(|e| e.1 != 0).map(move |(b, x)| (w * rank_c + b, x))
                    })
                    .collect()
            })
            .collect();
        SparseMatrix::from_columns(ring, r.pow(k as u32) * rank_c, cols)
    })
}

/// Kronecker product `a (x) b`, with `b` the fast index.
fn kron(a: &SparseMatrix, b: &SparseMatrix) -> SparseMatrix {
    let cols = (0..a.cols())
        .flat_map(|i| (0..b.cols()).map(move |j| (i, j)))
        .map(|(i, j)| {
            a.column(i)
                .iter()
                .flat_map(|&(r, x)| b.column(j).iter().map(move |&(s, y)| (r * b.rows() + s, a.ring().mul(x, y))))
                .collect()
        })
        .collect();
    SparseMatrix::from_columns(a.ring(), a.rows() * b.rows(), cols)
}

#[derive(Debug, Clone)]
pub struct BetaGamma {
    /// `A^# (x)_{R_n^#} F_n`.
    pub source: CyclicModuleData,
    /// `A^# (x)_{R_n^#} underline(R_n)`.
    pub gamma_target: CyclicModuleData,
    /// `A_0^#`.
    pub beta_target: CyclicModuleData,
    pub gamma: Vec<SparseMatrix>,
    pub beta: Vec<SparseMatrix>,
    /// `Fil^i` on `ker beta`, graded pieces `A_0^# (x) Q`.
    pub kernel_filtration: FiltrationWitness,
}

#[derive(Debug, Clone, Serialize)]
pub struct BetaGammaSummary {
    pub algebra_rank: usize,
    pub source_ranks: Vec<usize>,
    pub gamma_target_ranks: Vec<usize>,
    pub beta_target_ranks: Vec<usize>,
    pub kernel_ranks: Vec<usize>,
    pub kernel_filtration: FiltrationWitness,
}

impl BetaGamma {
    pub fn summary(&self, algebra_rank: usize) -> BetaGammaSummary {
        let ranks = |m: &CyclicModuleData| (1..=m.k_max).map(|k| m.rank(k)).collect::<Vec<_>>();
        let src = ranks(&self.source);
        let tgt = ranks(&self.beta_target);
        BetaGammaSummary {
            algebra_rank,
            kernel_ranks: src.iter().zip(&tgt).map(|(a, b)| a - b).collect(),
            source_ranks: src,
            gamma_target_ranks: ranks(&self.gamma_target),
            beta_target_ranks: tgt,
            kernel_filtration: self.kernel_filtration.clone(),
        }
    }
}

/// Builds `beta` and `gamma` and verifies: both are maps of cyclic modules,
/// `beta` is split surjective with kernel `A^# (x) Fil^1 F_n`, the induced
/// filtration has graded pieces `A_0^# (x) Q`, and on `[1]` the maps are the
/// identity of `A` and the reduction `A -> A_0`.
pub fn beta_gamma_maps(a: &RnAlgebra, k_max: usize) -> Result<BetaGamma, PdError> {
    let n = a.base.n;
    let ring = a.base.ring;
    let fa = FnAlgebra::new(ring, n);
    let r = a.rank();
    let a0 = a.reduction();
    let source = tensor_module("A^# (x) F_n", a, Coeffs::F(fa), k_max);
    let gamma_target = tensor_module("A^# (x) R_n", a, Coeffs::R(a.base), k_max);
    let beta_target = tensor_module("A_0^#", &a0, Coeffs::R(a0.base), k_max);
    for m in [&source, &gamma_target, &beta_target] {
        m.check_relations()?;
    }
    let blocks = |k: usize, to: &SparseMatrix| {
        let id = SparseMatrix::identity(ring, r.pow(k as u32));
        kron(&id, to)
    };
    let gamma: Vec<SparseMatrix> = (1..=k_max).map(|k| blocks(k, &fa.augmentation(k))).collect();
    let beta: Vec<SparseMatrix> = (1..=k_max)
        .map(|k| {
            let cols = (0..fa.rank(k)).map(|b| if b == 0 { vec![(0, 1)] } else { vec![] }).collect();
            blocks(k, &SparseMatrix::from_columns(ring, 1, cols))
        })
        .collect();
    check_module_map("gamma", &source, &gamma_target, &gamma)?;
    check_module_map("beta", &source, &beta_target, &beta)?;

    // beta is split by y_U -> y_U (x) 1 and kills exactly the y_U (x) x_j^[m]
    let mut kernel_cols = Vec::new();
    for k in 1..=k_max {
        let rank_f = fa.rank(k);
        let split = SparseMatrix::from_columns(
            ring,
            source.rank(k),
            (0..r.pow(k as u32)).map(|u| vec![(u * rank_f, 1)]).collect(),
        );
        if !beta[k - 1].mul(&split).sub(&SparseMatrix::identity(ring, r.pow(k as u32))).is_zero() {
            return Err(PdError::KernelMismatch { map: "beta".into(), k, reason: "not split surjective".into() });
        }
        let killed: Vec<usize> = (0..source.rank(k)).filter(|&c| beta[k - 1].column(c).is_empty()).collect();
        let expected: Vec<usize> = (0..source.rank(k)).filter(|c| c % rank_f != 0).collect();
        if killed != expected {
            return Err(PdError::KernelMismatch {
                map: "beta".into(),
                k,
                reason: "kernel is not A^# (x) Fil^1".into(),
            });
        }
        kernel_cols.push(expected);
    }
    let incl: Vec<SparseMatrix> = (1..=k_max)
        .map(|k| {
            SparseMatrix::from_columns(ring, source.rank(k), kernel_cols[k - 1].iter().map(|&c| vec![(c, 1)]).collect())
        })
        .collect();
    let mut maps = BTreeMap::new();
    for (g, m) in &source.maps {
        let (s, t) = (g.source(), g.target());
        let small = restrict(m, &incl[s - 1], &incl[t - 1], &kernel_cols[t - 1])
            .ok_or_else(|| PdError::FiltrationNotStable { module: "ker beta".into(), k: s, operator: g.label() })?;
        maps.insert(*g, small);
    }
    let kernel_bases =
        (1..=k_max).map(|k| kernel_cols[k - 1].iter().map(|&c| source.basis(k)[c].clone()).collect()).collect();
    let kernel = CyclicModuleData { name: "ker beta".into(), ring, k_max, bases: kernel_bases, maps };
    let mut actions = Vec::new();
    for k in 1..=k_max {
        let mut acts = Vec::new();
        for j in 0..k {
            for d in 1..=n {
                let big = blocks(k, &fa.action(k, j, d));
                let name = format!("x{j}^[{d}]");
                let small = restrict(&big, &incl[k - 1], &incl[k - 1], &kernel_cols[k - 1]).ok_or_else(|| {
                    PdError::FiltrationNotStable { module: "ker beta".into(), k, operator: name.clone() }
                })?;
                acts.push((name, small));
            }
        }
        actions.push(acts);
    }

    // A_0^# (x) Q from the constant-term structure constants and Q itself
    let q = make_q(k_max, ring);
    let mut graded_like = beta_target.clone();
    graded_like.name = "A_0^# (x) Q".into();
    graded_like.bases = (1..=k_max)
        .map(|k| {
            beta_target.basis(k).iter().flat_map(|y| q.basis(k).iter().map(move |f| format!("{y} (x) {f}"))).collect()
        })
        .collect();
    for (g, m) in graded_like.maps.iter_mut() {
        *m = kron(beta_target.matrix(g), q.matrix(g));
    }
    let rank_f = |k: usize| fa.rank(k);
    let index =
        (1..=k_max).map(|k| kernel_cols[k - 1].iter().map(|&c| fa.degree(c % rank_f(k)) - 1).collect()).collect();
    let gr_basis = (1..=k_max)
        .map(|k| {
            kernel_cols[k - 1].iter().map(|&c| (c / rank_f(k)) * k + fa.decode(c % rank_f(k)).unwrap().0).collect()
        })
        .collect();
    let kernel_filtration = verify_graded(&Filtered { module: &kernel, index, gr_basis, actions }, &graded_like, n)?;

    // on [1]: F_n([1]) = R_n, gamma is the identity of A and beta reduces mod t
    if !gamma[0].sub(&SparseMatrix::identity(ring, r * (n + 1))).is_zero() {
        return Err(PdError::NotAModuleMap { map: "gamma on [1] is not the identity".into(), generator: "id".into() });
    }
    let reduction = SparseMatrix::from_columns(
        ring,
        r,
        (0..r).flat_map(|s| (0..=n).map(move |d| if d == 0 { vec![(s, 1)] } else { vec![] })).collect(),
    );
    if !beta[0].sub(&reduction).is_zero() {
        return Err(PdError::NotAModuleMap { map: "beta on [1] is not the reduction".into(), generator: "id".into() });
    }
    Ok(BetaGamma { source, gamma_target, beta_target, gamma, beta, kernel_filtration })
}
