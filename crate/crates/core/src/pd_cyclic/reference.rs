//! Reference models of `F_n([k])` that share no code with [`FnAlgebra`].
//!
//! * [`BruteForce`]: `R_n^{(x)k}` on divided-power monomials modulo the span of
//!   `J^[2]`, where `J` is the divided-power ideal generated by
//!   `h_j = x_j - x_0` and `J^[2]` is generated by `gamma_a(h_j)`, `a >= 2`,
//!   and the products `gamma_a(h_i) gamma_b(h_j)`.
//! * [`SquareZeroModel`]: `R_n (+) (+)_j R_{n-1} h_j` with `h_i h_j = 0`,
//!   using `x_j^[m] = x_0^[m] + x_0^[m-1] h_j`.

use std::collections::HashMap;

use serde::Serialize;

use super::FnAlgebra;
use crate::ring_core::reference::Echelon;
use crate::ring_core::{BaseRing, Matrix};

pub struct BruteForce {
    ring: BaseRing,
    n: usize,
    k: usize,
    monomials: Vec<Vec<usize>>,
    position: HashMap<Vec<usize>, usize>,
    relations: Echelon,
}

impl BruteForce {
    pub fn new(ring: BaseRing, n: usize, k: usize) -> Self {
        let mut monomials = vec![vec![]];
        for _ in 0..k {
            monomials = monomials
                .into_iter()
                .flat_map(|m: Vec<usize>| {
                    (0..=n).map(move |e| {
                        let mut m = m.clone();
                        m.push(e);
                        m
                    })
                })
                .collect();
        }
        let position = monomials.iter().enumerate().map(|(i, m)| (m.clone(), i)).collect();
        let relations = Echelon::new(ring, monomials.len());
        let mut bf = BruteForce { ring, n, k, monomials, position, relations };
        let gammas: Vec<Vec<Vec<u64>>> = (1..k).map(|j| (0..=2 * n).map(|a| bf.gamma_h(j, a)).collect()).collect();
        let mut generators = Vec::new();
        for g in &gammas {
            generators.extend(g[2..].iter().cloned());
        }
        for (i, gi) in gammas.iter().enumerate() {
            for gj in &gammas[i..] {
                for a in &gi[1..] {
                    for b in &gj[1..] {
                        generators.push(bf.mul(a, b));
                    }
                }
            }
        }
        generators.retain(|g| g.iter().any(|&x| x != 0));
        for g in &generators {
            for m in 0..bf.monomials.len() {
                let v = bf.mul(&bf.unit_vector(m), g);
                if v.iter().any(|&x| x != 0) {
                    bf.relations.insert(v);
                }
            }
        }
        bf
    }

    pub fn dim(&self) -> usize {
        self.monomials.len()
    }

    fn unit_vector(&self, i: usize) -> Vec<u64> {
        let mut v = vec![0; self.dim()];
        v[i] = 1;
        v
    }

    /// `x_j^[m]` as a vector, zero for `m > n`.
    pub fn x(&self, j: usize, m: usize) -> Vec<u64> {
        let mut v = vec![0; self.dim()];
        if m <= self.n {
            let mut e = vec![0; self.k];
            e[j] = m;
            v[self.position[&e]] = 1;
        }
        v
    }

    pub fn mul(&self, u: &[u64], v: &[u64]) -> Vec<u64> {
        let ring = self.ring;
        let mut out = vec![0; self.dim()];
        for (a, &x) in u.iter().enumerate().filter(|e| *e.1 != 0) {
            for (b, &y) in v.iter().enumerate().filter(|e| *e.1 != 0) {
                let (ea, eb) = (&self.monomials[a], &self.monomials[b]);
                let e: Vec<usize> = ea.iter().zip(eb).map(|(p, q)| p + q).collect();
                if e.iter().any(|&d| d > self.n) {
                    continue;
                }
                let coef =
                    ea.iter().zip(eb).fold(1, |c, (&p, &q)| ring.mul(c, ring.binomial((p + q) as u64, p as u64)));
                let i = self.position[&e];
                out[i] = ring.add(out[i], ring.mul(coef, ring.mul(x, y)));
            }
        }
        out
    }

    /// `gamma_a(x_j - x_0) = sum_c (-1)^c x_j^[a-c] x_0^[c]`.
    fn gamma_h(&self, j: usize, a: usize) -> Vec<u64> {
        let ring = self.ring;
        let mut out = vec![0; self.dim()];
        for c in 0..=a {
            let term = self.mul(&self.x(j, a - c), &self.x(0, c));
            for (o, t) in out.iter_mut().zip(term) {
                *o = ring.add(*o, ring.mul(ring.sign(c % 2 == 1), t));
            }
        }
        out
    }

    /// `v` is zero in `F_n([k])`.
    pub fn vanishes(&self, v: &[u64]) -> bool {
        self.relations.contains(v)
    }

    pub fn equal(&self, u: &[u64], v: &[u64]) -> bool {
        let d: Vec<u64> = u.iter().zip(v).map(|(&a, &b)| self.ring.sub(a, b)).collect();
        self.vanishes(&d)
    }

    /// Image of an element given in the basis of [`FnAlgebra`].
    pub fn from_fn(&self, alg: &FnAlgebra, v: &[u64]) -> Vec<u64> {
        let ring = self.ring;
        let mut out = vec![0; self.dim()];
        for (b, &c) in v.iter().enumerate().filter(|e| *e.1 != 0) {
            let e = match alg.decode(b) {
                None => self.unit_vector(self.position[&vec![0; self.k]]),
                Some((j, m)) => self.x(j, m),
            };
            for (o, x) in out.iter_mut().zip(e) {
                *o = ring.add(*o, ring.mul(c, x));
            }
        }
        out
    }

    /// `1` and the `x_j^[m]` form a basis of the quotient: together with the
    /// relations they span everything, and the relations have exactly the
    /// complementary length.
    pub fn basis_is_free(&self) -> bool {
        let n_exp = self.ring.n() as u64;
        let total = self.dim() as u64 * n_exp;
        let rank = 1 + self.k * self.n;
        let mut span = self.relations.clone();
        span.insert(self.unit_vector(self.position[&vec![0; self.k]]));
        for j in 0..self.k {
            for m in 1..=self.n {
                span.insert(self.x(j, m));
            }
        }
        span.length() == total && self.relations.length() + rank as u64 * n_exp == total
    }
}

pub struct SquareZeroModel {
    ring: BaseRing,
    n: usize,
    k: usize,
}

impl SquareZeroModel {
    pub fn new(ring: BaseRing, n: usize, k: usize) -> Self {
        SquareZeroModel { ring, n, k }
    }

    pub fn dim(&self) -> usize {
        1 + self.k * self.n
    }

    /// `e_a` for `0 <= a <= n`.
    fn e(&self, a: usize) -> Option<usize> {
        (a <= self.n).then_some(a)
    }

    /// `x_0^[a] h_j` for `0 <= a < n`, `1 <= j < k`.
    fn f(&self, a: usize, j: usize) -> Option<usize> {
        (a < self.n).then(|| self.n + 1 + (j - 1) * self.n + a)
    }

    fn decode(&self, i: usize) -> (usize, usize) {
        if i <= self.n {
            (i, 0)
        } else {
            let r = i - self.n - 1;
            (r % self.n, r / self.n + 1)
        }
    }

    pub fn mul(&self, u: &[u64], v: &[u64]) -> Vec<u64> {
        let ring = self.ring;
        let mut out = vec![0; self.dim()];
        for (a, &x) in u.iter().enumerate().filter(|e| *e.1 != 0) {
            for (b, &y) in v.iter().enumerate().filter(|e| *e.1 != 0) {
                let ((da, ja), (db, jb)) = (self.decode(a), self.decode(b));
                let target = match (ja, jb) {
                    (0, 0) => self.e(da + db),
                    (0, j) | (j, 0) => self.f(da + db, j),
                    _ => None,
                };
                if let Some(t) = target {
                    let c = ring.binomial((da + db) as u64, da as u64);
                    out[t] = ring.add(out[t], ring.mul(c, ring.mul(x, y)));
                }
            }
        }
        out
    }

    /// Columns are the basis of [`FnAlgebra`] written in the model.
    pub fn change_of_basis(&self, alg: &FnAlgebra) -> Matrix {
        let mut m = Matrix::zeros(self.ring, self.dim(), alg.rank(self.k));
        m.set(0, 0, 1);
        for j in 0..self.k {
            for d in 1..=self.n {
                let c = alg.x(j, d);
                m.set(d, c, 1);
                if j > 0 {
                    m.set(self.f(d - 1, j).unwrap(), c, 1);
                }
            }
        }
        m
    }
}

/// Outcome of testing `x_i^[l] x_j^[r]` for `i != j` and `l + r <= max_total`
/// against the quotient `R_n^{(x)2} / J^[2]`.
#[derive(Debug, Clone, Serialize)]
pub struct BinomialLawReport {
    pub max_total: usize,
    pub pairs: usize,
    /// `C(l+r-1, l-1) x_i^[l+r] + C(l+r-1, l) x_j^[l+r]` holds for every pair.
    pub law_holds: bool,
    /// `(l, r)` where `C(l+r, l) x_i^[l+r] + C(l+r-1, l) x_j^[l+r]` fails.
    pub symmetric_form_failures: Vec<(usize, usize)>,
    /// `x_i^[m] x_j = m x_i^[m+1] + x_j^[m+1]` holds for every `m`.
    pub linear_case_holds: bool,
}

pub fn binomial_law(ring: BaseRing, max_total: usize) -> BinomialLawReport {
    let bf = BruteForce::new(ring, max_total, 2);
    let comb = |v: &[(u64, Vec<u64>)]| -> Vec<u64> {
        let mut out = vec![0; bf.dim()];
        for (c, x) in v {
            for (o, &y) in out.iter_mut().zip(x) {
                *o = ring.add(*o, ring.mul(*c, y));
            }
        }
        out
    };
    let c = |a: usize, b: usize| ring.binomial(a as u64, b as u64);
    let mut report = BinomialLawReport {
        max_total,
        pairs: 0,
        law_holds: true,
        symmetric_form_failures: Vec::new(),
        linear_case_holds: true,
    };
    for l in 1..max_total {
        for r in 1..=max_total - l {
            let s = l + r;
            let lhs = bf.mul(&bf.x(0, l), &bf.x(1, r));
            let law = comb(&[(c(s - 1, l - 1), bf.x(0, s)), (c(s - 1, l), bf.x(1, s))]);
            let printed = comb(&[(c(s, l), bf.x(0, s)), (c(s - 1, l), bf.x(1, s))]);
            report.pairs += 1;
            report.law_holds &= bf.equal(&lhs, &law);
            if !bf.equal(&lhs, &printed) {
                report.symmetric_form_failures.push((l, r));
            }
            if r == 1 {
                let linear = comb(&[(l as u64 % ring.modulus(), bf.x(0, s)), (1, bf.x(1, s))]);
                report.linear_case_holds &= bf.equal(&lhs, &linear);
            }
        }
    }
    report
}

fn unit(rank: usize, b: usize) -> Vec<u64> {
    let mut v = vec![0; rank];
    v[b] = 1;
    v
}

/// The change of basis to [`SquareZeroModel`] is invertible and carries the
/// product of every pair of basis elements of `F_n([k])` to the model product.
pub fn check_against_model(alg: &FnAlgebra, k: usize) -> Result<(), String> {
    let base = alg.ring;
    let model = SquareZeroModel::new(base, alg.n, k);
    let c = model.change_of_basis(alg);
    if !c.is_invertible() {
        return Err(format!("change of basis on [{k}] is not invertible"));
    }
    let image = |v: &[u64]| -> Vec<u64> {
        (0..model.dim())
            .map(|i| v.iter().enumerate().fold(0, |s, (j, &x)| base.add(s, base.mul(x, c.get(i, j)))))
            .collect()
    };
    let rank = alg.rank(k);
    for a in 0..rank {
        for b in 0..rank {
            let (ea, eb) = (unit(rank, a), unit(rank, b));
            if image(&alg.mul(&ea, &eb)) != model.mul(&image(&ea), &image(&eb)) {
                return Err(format!(
                    "{} * {} on [{k}] disagrees with the square-zero model",
                    alg.label(a),
                    alg.label(b)
                ));
            }
        }
    }
    Ok(())
}

/// `1` and the `x_j^[m]` form a basis of the brute-force quotient and every
/// product of basis elements agrees there.
pub fn check_against_brute_force(alg: &FnAlgebra, k: usize) -> Result<(), String> {
    let bf = BruteForce::new(alg.ring, alg.n, k);
    if !bf.basis_is_free() {
        return Err(format!("1, x_j^[m] do not form a basis of the quotient on [{k}]"));
    }
    let rank = alg.rank(k);
    for a in 0..rank {
        for b in 0..rank {
            let (ea, eb) = (unit(rank, a), unit(rank, b));
            let prod = bf.mul(&bf.from_fn(alg, &ea), &bf.from_fn(alg, &eb));
            if !bf.equal(&prod, &bf.from_fn(alg, &alg.mul(&ea, &eb))) {
                return Err(format!("{} * {} on [{k}] disagrees with the quotient", alg.label(a), alg.label(b)));
            }
        }
    }
    Ok(())
}

/// Brute force is used while `R_n^{(x)k}` has at most this many monomials.
pub const BRUTE_FORCE_LIMIT: usize = 81;

pub fn brute_force_feasible(n: usize, k: usize) -> bool {
    (n + 1).checked_pow(k as u32).is_some_and(|d| d <= BRUTE_FORCE_LIMIT)
}
