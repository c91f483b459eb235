//! The two-sided bar construction `B(M, A, N)`: level `s` is
//! `M ⊗ A^{⊗s} ⊗ N` (unnormalized), with faces
//! `d_0 = (m a_1) ⊗ ..`, `d_i = .. ⊗ a_i a_{i+1} ⊗ ..`, `d_s = .. ⊗ (a_s n)`.
//! The total complex has cohomological degree `internal - s` and differential
//! `d_int + (-1)^q sum_i (-1)^i d_i` on elements of internal degree `q`.
//! Levels are truncated at `s_max` and everything splits by weight.

use std::collections::{BTreeMap, HashMap};

use thiserror::Error;

use crate::free_dga::{FreeAlgebra, FreeDga, NCPoly, Word};
use crate::ring_core::{graded_homology, BaseRing, HomologyGroup, Matrix, RingError, SparseMatrix};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BarError {
    #[error("not a module: {0}")]
    NotAModule(String),
    #[error("simplicial identity d_{i} d_{j} = d_{j_minus_1} d_{i} fails at level {level}")]
    Simplicial { i: usize, j: usize, j_minus_1: usize, level: usize },
    #[error(transparent)]
    Ring(#[from] RingError),
}

/// A finite free DG module over a free DGA, with one action matrix per
/// generator. For a left module column `j` of `action[g]` is `g · e_j`; for a
/// right module it is `e_j · g`.
#[derive(Debug, Clone)]
pub struct DgModule {
    pub degrees: Vec<i32>,
    pub weights: Vec<u32>,
    pub differential: Matrix,
    pub action: Vec<Matrix>,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Side {
    Left,
    Right,
}

impl DgModule {
    /// The base ring in degree 0, weight 0, with every generator acting by 0.
    pub fn trivial(ring: BaseRing, num_gens: usize) -> Self {
        DgModule {
            degrees: vec![0],
            weights: vec![0],
            differential: Matrix::zeros(ring, 1, 1),
            action: vec![Matrix::zeros(ring, 1, 1); num_gens],
        }
    }

    /// `A / A_{>weight_max}` as a right module over itself, on the word basis.
    pub fn truncated_regular(dga: &FreeDga, weight_max: u32) -> Self {
        let alg = dga.algebra();
        let ring = alg.ring();
        let words: Vec<Word> = (0..=weight_max).flat_map(|w| alg.words_of_weight(w)).collect();
        let index: HashMap<&Word, usize> = words.iter().enumerate().map(|(i, w)| (w, i)).collect();
        let n = words.len();
        let mut differential = Matrix::zeros(ring, n, n);
        for (j, w) in words.iter().enumerate() {
            for (v, c) in alg.apply(dga.differential(), &NCPoly::monomial(&ring, w.clone(), 1)).terms() {
                differential.add_at(index[v], j, c);
            }
        }
        let action = (0..alg.num_generators())
            .map(|g| {
                let mut m = Matrix::zeros(ring, n, n);
                for (j, w) in words.iter().enumerate() {
                    let mut v = w.clone();
                    v.push(g as u16);
                    if let Some(&i) = index.get(&v) {
                        m.set(i, j, 1);
                    }
                }
                m
            })
            .collect();
        DgModule {
            degrees: words.iter().map(|w| alg.word_degree(w) as i32).collect(),
            weights: words.iter().map(|w| alg.word_weight(w)).collect(),
            differential,
            action,
        }
    }

    pub fn rank(&self) -> usize {
        self.degrees.len()
    }

    fn act_word(&self, side: Side, w: &[u16]) -> Matrix {
        let ring = self.differential.ring();
        let mut m = Matrix::identity(ring, self.rank());
        for &g in w {
            m = match side {
                Side::Left => m.dot(&self.action[g as usize]),
                Side::Right => self.action[g as usize].dot(&m),
            };
        }
        m
    }

    fn act_poly(&self, side: Side, f: &NCPoly) -> Matrix {
        let ring = self.differential.ring();
        let mut m = Matrix::zeros(ring, self.rank(), self.rank());
        for (w, c) in f.terms() {
            m.axpy(c, &self.act_word(side, w));
        }
        m
    }

    fn validate(&self, dga: &FreeDga, side: Side) -> Result<(), BarError> {
        let alg = dga.algebra();
        let ring = alg.ring();
        let n = self.rank();
        let d = &self.differential;
        if self.weights.len() != n || d.rows() != n || d.cols() != n || self.action.len() != alg.num_generators() {
            return Err(BarError::NotAModule("shape mismatch".into()));
        }
        for i in 0..n {
            for j in 0..n {
                if d.get(i, j) != 0 && (self.degrees[i] != self.degrees[j] + 1 || self.weights[i] != self.weights[j]) {
                    return Err(BarError::NotAModule(format!("differential entry ({i}, {j}) is not homogeneous")));
                }
            }
        }
        if !d.dot(d).is_zero() {
            return Err(BarError::NotAModule("differential does not square to zero".into()));
        }
        let parity = Matrix::from_fn(ring, n, n, |i, j| if i == j { ring.sign(self.degrees[j] % 2 != 0) } else { 0 });
        for (g, spec) in alg.generators().iter().enumerate() {
            let a = &self.action[g];
            for i in 0..n {
                for j in 0..n {
                    if a.get(i, j) != 0
                        && (self.degrees[i] != self.degrees[j] + spec.degree
                            || self.weights[i] != self.weights[j] + spec.weight)
                    {
                        return Err(BarError::NotAModule(format!("action of `{}` is not homogeneous", spec.name)));
                    }
                }
            }
            let dg = self.act_poly(side, dga.differential().value(g as u16));
            // left: d(g n) = d(g) n + (-1)^{|g|} g dn;  right: d(m g) = dm g + (-1)^{|m|} m d(g)
            let lhs = d.dot(a);
            let rhs = match side {
                Side::Left => dg.add(&a.dot(d).scale(ring.sign(spec.degree % 2 != 0))),
                Side::Right => a.dot(d).add(&dg.dot(&parity)),
            };
            if lhs != rhs {
                return Err(BarError::NotAModule(format!("action of `{}` is not compatible with d", spec.name)));
            }
        }
        Ok(())
    }
}

/// A basis element `m_i ⊗ w_1 ⊗ .. ⊗ w_s ⊗ n_j`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BarElement {
    pub m: usize,
    pub words: Vec<Word>,
    pub n: usize,
}

/// One weight component of the truncated bar complex.
#[derive(Debug, Clone)]
pub struct BarWeight {
    pub weight: u32,
    pub basis: Vec<BarElement>,
    /// Total degree `internal - s` of each basis element.
    pub degrees: Vec<i64>,
    /// `level_start[s]..level_start[s+1]` indexes level `s`.
    pub level_start: Vec<usize>,
    /// `faces[s][i]` is `d_i` from level `s` to level `s - 1`, as a matrix on the full basis.
    pub faces: Vec<Vec<SparseMatrix>>,
    pub total: SparseMatrix,
}

#[derive(Debug, Clone)]
pub struct BarComplex {
    pub s_max: usize,
    pub weights: Vec<BarWeight>,
    /// For `A` the base ring, the projection of level 0 onto `M ⊗ N` together
    /// with the complex `M ⊗ N`, per weight.
    pub augmentation: Option<Vec<(SparseMatrix, SparseMatrix, Vec<i64>)>>,
}

fn sequences(alg: &FreeAlgebra, slots: usize, weight: u32, prefix: &mut Vec<Word>, out: &mut Vec<Vec<Word>>) {
    if slots == 0 {
        if weight == 0 {
            out.push(prefix.clone());
        }
        return;
    }
    for w1 in 0..=weight {
        for word in alg.words_of_weight(w1) {
            prefix.push(word);
            sequences(alg, slots - 1, weight - w1, prefix, out);
            prefix.pop();
        }
    }
}

/// Builds `B(M, A, N)` with `M` a right and `N` a left module, for weights
/// `0..=weight_max` and levels `0..=s_max`, and checks the simplicial identities.
pub fn two_sided_bar(
    m: &DgModule,
    dga: &FreeDga,
    n: &DgModule,
    s_max: usize,
    weight_max: u32,
) -> Result<BarComplex, BarError> {
    m.validate(dga, Side::Right)?;
    n.validate(dga, Side::Left)?;
    let weights = (0..=weight_max).map(|w| bar_weight(m, dga, n, s_max, w)).collect::<Result<Vec<_>, _>>()?;
    let augmentation =
        (dga.algebra().num_generators() == 0).then(|| weights.iter().map(|bw| augmentation(m, n, bw)).collect());
    Ok(BarComplex { s_max, weights, augmentation })
}

fn bar_weight(m: &DgModule, dga: &FreeDga, n: &DgModule, s_max: usize, weight: u32) -> Result<BarWeight, BarError> {
    let alg = dga.algebra();
    let ring = alg.ring();
    let mut basis = Vec::new();
    let mut level_start = vec![0];
    for s in 0..=s_max {
        for i in 0..m.rank() {
            for j in 0..n.rank() {
                let outer = m.weights[i] + n.weights[j];
                if outer > weight {
                    continue;
                }
                let mut seqs = Vec::new();
                sequences(alg, s, weight - outer, &mut Vec::new(), &mut seqs);
                basis.extend(seqs.into_iter().map(|words| BarElement { m: i, words, n: j }));
            }
        }
        level_start.push(basis.len());
    }
    let index: HashMap<BarElement, usize> = basis.iter().cloned().enumerate().map(|(i, e)| (e, i)).collect();
    let internal = |e: &BarElement| -> i64 {
        m.degrees[e.m] as i64 + e.words.iter().map(|w| alg.word_degree(w)).sum::<i64>() + n.degrees[e.n] as i64
    };
    let degrees: Vec<i64> = basis.iter().map(|e| internal(e) - e.words.len() as i64).collect();
    let size = basis.len();
    let lookup = |e: BarElement| index[&e];

    let face = |s: usize, i: usize| -> SparseMatrix {
        let cols = (0..size)
            .map(|c| {
                let e = &basis[c];
                if e.words.len() != s {
                    return Vec::new();
                }
                let mut out = Vec::new();
                if i == 0 {
                    let act = m.act_word(Side::Right, &e.words[0]);
                    for r in 0..m.rank() {
                        let v = act.get(r, e.m);
                        if v != 0 {
                            out.push((lookup(BarElement { m: r, words: e.words[1..].to_vec(), n: e.n }), v));
                        }
                    }
                } else if i == s {
                    let act = n.act_word(Side::Left, &e.words[s - 1]);
                    for r in 0..n.rank() {
                        let v = act.get(r, e.n);
                        if v != 0 {
                            out.push((lookup(BarElement { m: e.m, words: e.words[..s - 1].to_vec(), n: r }), v));
                        }
                    }
                } else {
                    let mut words = e.words[..i - 1].to_vec();
                    let mut merged = e.words[i - 1].clone();
                    merged.extend_from_slice(&e.words[i]);
                    words.push(merged);
                    words.extend_from_slice(&e.words[i + 1..]);
                    out.push((lookup(BarElement { m: e.m, words, n: e.n }), 1));
                }
                out
            })
            .collect();
        SparseMatrix::from_columns(ring, size, cols)
    };
    let faces: Vec<Vec<SparseMatrix>> =
        (0..=s_max).map(|s| if s == 0 { Vec::new() } else { (0..=s).map(|i| face(s, i)).collect() }).collect();

    for s in 2..=s_max {
        for j in 1..=s {
            for i in 0..j {
                if faces[s - 1][i].mul(&faces[s][j]) != faces[s - 1][j - 1].mul(&faces[s][i]) {
                    return Err(BarError::Simplicial { i, j, j_minus_1: j - 1, level: s });
                }
            }
        }
    }

    // internal differential with Koszul signs, then the signed face sum
    let cols = (0..size)
        .map(|c| {
            let e = &basis[c];
            let mut out = Vec::new();
            for r in 0..m.rank() {
                let v = m.differential.get(r, e.m);
                if v != 0 {
                    out.push((lookup(BarElement { m: r, ..e.clone() }), v));
                }
            }
            let mut pre = m.degrees[e.m] as i64;
            for t in 0..e.words.len() {
                let sign = ring.sign(pre % 2 != 0);
                let dw = alg.apply(dga.differential(), &NCPoly::monomial(&ring, e.words[t].clone(), 1));
                for (w, v) in dw.terms() {
                    let mut words = e.words.clone();
                    words[t] = w.clone();
                    out.push((lookup(BarElement { words, ..e.clone() }), ring.mul(sign, v)));
                }
                pre += alg.word_degree(&e.words[t]);
            }
            let sign = ring.sign(pre % 2 != 0);
            for r in 0..n.rank() {
                let v = n.differential.get(r, e.n);
                if v != 0 {
                    out.push((lookup(BarElement { n: r, ..e.clone() }), ring.mul(sign, v)));
                }
            }
            out
        })
        .collect();
    let mut total = SparseMatrix::from_columns(ring, size, cols);
    let parity: Vec<bool> = basis.iter().map(|e| internal(e) % 2 != 0).collect();
    for level in faces.iter().skip(1) {
        for (i, f) in level.iter().enumerate() {
            let cols = (0..size)
                .map(|c| {
                    let odd = parity[c] ^ (i % 2 == 1);
                    f.column(c).iter().map(|&(r, v)| (r, ring.mul(ring.sign(odd), v))).collect()
                })
                .collect();
            total = total.add(&SparseMatrix::from_columns(ring, size, cols));
        }
    }
    Ok(BarWeight { weight, basis, degrees, level_start, faces, total })
}

fn augmentation(m: &DgModule, n: &DgModule, bw: &BarWeight) -> (SparseMatrix, SparseMatrix, Vec<i64>) {
    let ring = m.differential.ring();
    let mut pairs = Vec::new();
    for i in 0..m.rank() {
        for j in 0..n.rank() {
            if m.weights[i] + n.weights[j] == bw.weight {
                pairs.push((i, j));
            }
        }
    }
    let pos: HashMap<(usize, usize), usize> = pairs.iter().enumerate().map(|(k, &p)| (p, k)).collect();
    let eps_cols =
        bw.basis.iter().map(|e| if e.words.is_empty() { vec![(pos[&(e.m, e.n)], 1)] } else { Vec::new() }).collect();
    let eps = SparseMatrix::from_columns(ring, pairs.len(), eps_cols);
    let d_cols = pairs
        .iter()
        .map(|&(i, j)| {
            let mut out = Vec::new();
            for r in 0..m.rank() {
                let v = m.differential.get(r, i);
                if v != 0 {
                    out.push((pos[&(r, j)], v));
                }
            }
            let sign = ring.sign(m.degrees[i] % 2 != 0);
            for r in 0..n.rank() {
                let v = n.differential.get(r, j);
                if v != 0 {
                    out.push((pos[&(i, r)], ring.mul(sign, v)));
                }
            }
            out
        })
        .collect();
    let d = SparseMatrix::from_columns(ring, pairs.len(), d_cols);
    let degrees = pairs.iter().map(|&(i, j)| (m.degrees[i] + n.degrees[j]) as i64).collect();
    (eps, d, degrees)
}

impl BarWeight {
    /// Cohomology of the total complex per total degree.
    pub fn homology(&self) -> Result<BTreeMap<i64, HomologyGroup>, BarError> {
        Ok(graded_homology(&self.total, &self.degrees, 1)?)
    }
}
