//! Reference homology computations that share no code with the Smith-form path.
//! They exist to cross-check [`complex_homology`](super::complex_homology) and the
//! profile pipelines built on it.
//!
//! * [`field_homology`]: Gaussian elimination over `F_p` (`n = 1` only).
//! * [`enumerated_homology`]: explicit enumeration of the finite modules.
//! * [`counted_homology`]: submodule orders from Howell-style echelon forms,
//!   recovering elementary divisors from `|H[p^j]|`.

use std::collections::HashSet;

use super::{BaseRing, HomologyGroup, Matrix};

fn field_rank(m: &Matrix) -> usize {
    let ring = m.ring();
    assert_eq!(ring.n(), 1, "field_rank needs a prime field");
    let mut rows = m.to_rows();
    let cols = m.cols();
    let mut rank = 0;
    for c in 0..cols {
        let Some(piv) = (rank..rows.len()).find(|&r| rows[r][c] != 0) else {
            continue;
        };
        rows.swap(rank, piv);
        let inv = ring.inv(rows[rank][c]).unwrap();
        let pivot_row: Vec<u64> = rows[rank].iter().map(|&x| ring.mul(x, inv)).collect();
        for (r, row) in rows.iter_mut().enumerate() {
            if r == rank || row[c] == 0 {
                continue;
            }
            let f = row[c];
            for (x, &y) in row.iter_mut().zip(&pivot_row) {
                *x = ring.sub(*x, ring.mul(f, y));
            }
        }
        rows[rank] = pivot_row;
        rank += 1;
    }
    rank
}

/// `dim ker(d_out) - rank(d_in)` over `F_p`, as a free module.
pub fn field_homology(d_in: &Matrix, d_out: &Matrix) -> HomologyGroup {
    let dim = d_out.cols();
    HomologyGroup::free(dim - field_rank(d_out) - field_rank(d_in))
}

fn vec_add(ring: &BaseRing, a: &[u64], b: &[u64]) -> Vec<u64> {
    a.iter().zip(b).map(|(&x, &y)| ring.add(x, y)).collect()
}

fn apply(m: &Matrix, x: &[u64]) -> Vec<u64> {
    let ring = m.ring();
    (0..m.rows()).map(|i| m.row(i).iter().zip(x).fold(0, |acc, (&a, &b)| ring.add(acc, ring.mul(a, b)))).collect()
}

/// Largest module order (as an element count) the enumerator will walk.
pub const ENUMERATION_LIMIT: u64 = 2_000_000;

/// Elementary divisors from explicit element sets. Returns `None` when the
/// middle module is too large to enumerate.
pub fn enumerated_homology(d_in: &Matrix, d_out: &Matrix) -> Option<HomologyGroup> {
    let ring = d_out.ring();
    let r = d_out.cols();
    let size = ring.modulus().checked_pow(r as u32)?;
    if size > ENUMERATION_LIMIT {
        return None;
    }
    let q = ring.modulus();
    let mut kernel = Vec::new();
    let mut x = vec![0u64; r];
    for mut code in 0..size {
        for slot in x.iter_mut() {
            *slot = code % q;
            code /= q;
        }
        if apply(d_out, &x).iter().all(|&v| v == 0) {
            kernel.push(x.clone());
        }
    }
    // image as the closure of the column span
    let mut image: HashSet<Vec<u64>> = HashSet::from([vec![0u64; r]]);
    for c in 0..d_in.cols() {
        let g: Vec<u64> = (0..r).map(|i| d_in.get(i, c)).collect();
        let mut next = image.clone();
        for base in &image {
            let mut cur = base.clone();
            for _ in 1..q {
                cur = vec_add(&ring, &cur, &g);
                next.insert(cur.clone());
            }
        }
        image = next;
    }
    // |H[p^j]| = #{x in ker : p^j x in im} / |im|
    let n = ring.n();
    let log_p = |count: usize| -> u32 {
        let mut c = count as u64;
        let mut l = 0;
        while c > 1 {
            c /= ring.p();
            l += 1;
        }
        l
    };
    let im_log = log_p(image.len());
    let torsion_logs: Vec<u32> = (0..=n)
        .map(|j| {
            let pj = ring.p_pow(j);
            let hits = kernel
                .iter()
                .filter(|x| image.contains(&x.iter().map(|&v| ring.mul(v, pj)).collect::<Vec<_>>()))
                .count();
            log_p(hits) - im_log
        })
        .collect();
    Some(divisors_from_torsion_logs(n, &torsion_logs))
}

/// Given `h_j = log_p |H[p^j]|` for `j = 0..=n`, the number of summands of
/// exponent at least `j` is `h_j - h_{j-1}`.
fn divisors_from_torsion_logs(n: u32, h: &[u32]) -> HomologyGroup {
    let at_least = |j: u32| -> u32 {
        if j == 0 || j > n {
            return 0;
        }
        h[j as usize] - h[j as usize - 1]
    };
    let mut exps = Vec::new();
    for e in 1..=n {
        let exact = at_least(e) - at_least(e + 1);
        exps.extend(std::iter::repeat_n(e, exact as usize));
    }
    HomologyGroup::from_exponents(n, exps)
}

/// Echelon form with the Howell property: after pivoting a row with pivot
/// `p^v`, the multiple `p^{n-v}` of that row is pushed back into the pool so
/// the output rows determine the span exactly.
fn howell_pivots(ring: &BaseRing, rows: Vec<Vec<u64>>, cols: usize) -> Vec<(usize, u32)> {
    let n = ring.n();
    let mut pool: Vec<Vec<u64>> = rows.into_iter().filter(|r| r.iter().any(|&x| x != 0)).collect();
    let mut pivots = Vec::new();
    for c in 0..cols {
        let best = pool
            .iter()
            .enumerate()
            .filter(|(_, r)| r[c] != 0)
            .min_by_key(|(i, r)| (ring.valuation(r[c]), *i))
            .map(|(i, _)| i);
        let Some(bi) = best else { continue };
        let mut prow = pool.swap_remove(bi);
        let (unit, v) = ring.unit_part(prow[c]);
        let inv = ring.inv(unit).unwrap();
        prow.iter_mut().for_each(|x| *x = ring.mul(*x, inv));
        let pv = ring.p_pow(v);
        for row in pool.iter_mut() {
            if row[c] == 0 {
                continue;
            }
            let q = row[c] / pv;
            for (x, &y) in row.iter_mut().zip(&prow) {
                *x = ring.sub(*x, ring.mul(q, y));
            }
        }
        let extra: Vec<u64> = prow.iter().map(|&x| ring.mul(x, ring.p_pow(n - v))).collect();
        if extra.iter().any(|&x| x != 0) {
            pool.push(extra);
        }
        pool.retain(|r| r.iter().any(|&x| x != 0));
        pivots.push((c, v));
    }
    pivots
}

/// `log_p` of the order of the row span of `rows`.
pub fn span_length(ring: &BaseRing, rows: Vec<Vec<u64>>, cols: usize) -> u64 {
    howell_pivots(ring, rows, cols).iter().map(|&(_, v)| (ring.n() - v) as u64).sum()
}

/// `log_p |ker M|` via the augmented rows `(M^T e_j | e_j)`.
pub fn kernel_length(m: &Matrix) -> u64 {
    let ring = m.ring();
    let (rows, cols) = (m.rows(), m.cols());
    let aug: Vec<Vec<u64>> = (0..cols)
        .map(|j| {
            let mut r: Vec<u64> = (0..rows).map(|i| m.get(i, j)).collect();
            r.extend((0..cols).map(|k| if k == j { 1 } else { 0 }));
            r
        })
        .collect();
    howell_pivots(&ring, aug, rows + cols)
        .iter()
        .filter(|&&(c, _)| c >= rows)
        .map(|&(_, v)| (ring.n() - v) as u64)
        .sum()
}

/// Elementary divisors from submodule orders only.
///
/// `{x in ker d_out : p^j x in im d_in}` is the projection of
/// `Z_j = ker [[p^j, -d_in], [d_out, 0]]`, whose fibre is `ker d_in`; hence
/// `log|H[p^j]| = log|Z_j| - n * rank(source of d_in)`.
pub fn counted_homology(d_in: &Matrix, d_out: &Matrix) -> HomologyGroup {
    let ring = d_out.ring();
    let n = ring.n();
    let r = d_out.cols();
    let a = d_in.cols();
    let b = d_out.rows();
    let h: Vec<u32> = (0..=n)
        .map(|j| {
            let pj = ring.p_pow(j);
            let z = Matrix::from_fn(ring, r + b, r + a, |i, c| {
                if i < r {
                    if c < r {
                        if i == c {
                            pj
                        } else {
                            0
                        }
                    } else {
                        ring.neg(d_in.get(i, c - r))
                    }
                } else if c < r {
                    d_out.get(i - r, c)
                } else {
                    0
                }
            });
            (kernel_length(&z) - n as u64 * a as u64) as u32
        })
        .collect();
    divisors_from_torsion_logs(n, &h)
}

/// Row span over `Z/p^n` built one vector at a time, kept in Howell form so
/// that membership can be decided by reduction.
#[derive(Debug, Clone)]
pub struct Echelon {
    ring: BaseRing,
    cols: usize,
    pivots: Vec<Option<Vec<u64>>>,
}

impl Echelon {
    pub fn new(ring: BaseRing, cols: usize) -> Self {
        Echelon { ring, cols, pivots: vec![None; cols] }
    }

    /// Reduces `v` against the pivots until its leading entry cannot be
    /// cleared. Returns the leading column, or `None` if `v` became zero.
    fn reduce(&self, v: &mut [u64]) -> Option<usize> {
        let ring = &self.ring;
        for c in 0..self.cols {
            if v[c] == 0 {
                continue;
            }
            let Some(row) = &self.pivots[c] else { return Some(c) };
            let pv = row[c];
            if ring.valuation(v[c]) < ring.valuation(pv) {
                return Some(c);
            }
            let q = v[c] / pv;
            for (x, &y) in v.iter_mut().zip(row) {
                *x = ring.sub(*x, ring.mul(q, y));
            }
        }
        None
    }

    pub fn insert(&mut self, v: Vec<u64>) {
        assert_eq!(v.len(), self.cols, "vector length");
        let ring = self.ring;
        let mut queue = vec![v];
        while let Some(mut v) = queue.pop() {
            let Some(c) = self.reduce(&mut v) else { continue };
            let (unit, val) = ring.unit_part(v[c]);
            let inv = ring.inv(unit).expect("unit");
            v.iter_mut().for_each(|x| *x = ring.mul(*x, inv));
            let closure: Vec<u64> = v.iter().map(|&x| ring.mul(x, ring.p_pow(ring.n() - val))).collect();
            if closure.iter().any(|&x| x != 0) {
                queue.push(closure);
            }
            if let Some(old) = self.pivots[c].replace(v) {
                queue.push(old);
            }
        }
    }

    pub fn contains(&self, v: &[u64]) -> bool {
        let mut v = v.to_vec();
        self.reduce(&mut v).is_none()
    }

    /// `log_p` of the order of the span.
    pub fn length(&self) -> u64 {
        let ring = &self.ring;
        self.pivots
            .iter()
            .enumerate()
            .filter_map(|(c, r)| r.as_ref().map(|r| (ring.n() - ring.valuation(r[c])) as u64))
            .sum()
    }
}
