//! Divided-power cyclic modules over `W = Z/p^N`: the cyclic category, the
//! truncated divided-power rings `R_n = W<x>/(x^[>n])`, the cyclic modules
//! `Q`, `F_n = R^#/(J^[2] + Fil^{n+1})` and `underline(R_n)`, and the
//! filtrations whose graded pieces are `Q`.

pub mod algebra;
pub mod lambda;
pub mod reference;

use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

use crate::ring_core::{BaseRing, SparseMatrix};
use lambda::{lambda_hom, relations, Generator, LambdaMorphism, Path};

pub use algebra::{beta_gamma_maps, BetaGamma, RnAlgebra};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PdError {
    #[error("relation `{relation}` fails on {module}")]
    RelationFailed { module: String, relation: String },
    #[error("{map} does not commute with {generator}")]
    NotAModuleMap { map: String, generator: String },
    #[error("filtration on {module} is not stable at [{k}] under {operator}")]
    FiltrationNotStable { module: String, k: usize, operator: String },
    #[error("graded piece {step} of {module} at [{k}] is not the expected module: {reason}")]
    QuotientNotQ { module: String, step: usize, k: usize, reason: String },
    #[error("not an algebra: {0}")]
    NotAnAlgebra(String),
    #[error("kernel of {map} at [{k}]: {reason}")]
    KernelMismatch { map: String, k: usize, reason: String },
}

/// `R_n = W<t>/(t^[a], a > n)` with basis `t^[0..=n]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DividedPowerRing {
    pub ring: BaseRing,
    pub n: usize,
}

impl DividedPowerRing {
    pub fn new(ring: BaseRing, n: usize) -> Self {
        DividedPowerRing { ring, n }
    }

    pub fn rank(&self) -> usize {
        self.n + 1
    }

    /// `t^[a] t^[b] = C(a+b, a) t^[a+b]`, or `None` past the truncation.
    pub fn mul_basis(&self, a: usize, b: usize) -> Option<(usize, u64)> {
        (a + b <= self.n).then(|| (a + b, self.ring.binomial((a + b) as u64, a as u64)))
    }

    pub fn mul(&self, u: &[u64], v: &[u64]) -> Vec<u64> {
        let ring = self.ring;
        let mut out = vec![0; self.rank()];
        for (a, &x) in u.iter().enumerate().filter(|e| *e.1 != 0) {
            for (b, &y) in v.iter().enumerate().filter(|e| *e.1 != 0) {
                if let Some((c, k)) = self.mul_basis(a, b) {
                    out[c] = ring.add(out[c], ring.mul(k, ring.mul(x, y)));
                }
            }
        }
        out
    }
}

/// A functor from the cyclic category (objects `[1..=k_max]`) to free
/// `W`-modules, stored as the matrices of the generating morphisms. A matrix
/// for `[m] -> [k]` has `rank(k)` rows and `rank(m)` columns.
#[derive(Debug, Clone)]
pub struct CyclicModuleData {
    pub name: String,
    pub ring: BaseRing,
    pub k_max: usize,
    pub bases: Vec<Vec<String>>,
    pub maps: BTreeMap<Generator, SparseMatrix>,
}

impl CyclicModuleData {
    pub fn from_action(
        name: &str,
        ring: BaseRing,
        k_max: usize,
        bases: Vec<Vec<String>>,
        act: impl Fn(&LambdaMorphism) -> SparseMatrix,
    ) -> Self {
        assert_eq!(bases.len(), k_max, "one basis per object");
        let maps = lambda::generators(k_max).into_iter().map(|g| (g, act(&g.morphism()))).collect();
        CyclicModuleData { name: name.to_string(), ring, k_max, bases, maps }
    }

    pub fn rank(&self, k: usize) -> usize {
        self.bases[k - 1].len()
    }

    pub fn basis(&self, k: usize) -> &[String] {
        &self.bases[k - 1]
    }

    pub fn matrix(&self, g: &Generator) -> &SparseMatrix {
        &self.maps[g]
    }

    pub fn path_matrix(&self, source: usize, path: &Path) -> SparseMatrix {
        path.iter().fold(SparseMatrix::identity(self.ring, self.rank(source)), |acc, g| self.maps[g].mul(&acc))
    }

    /// Every defining relation of the cyclic category holds as a matrix identity.
    pub fn check_relations(&self) -> Result<usize, PdError> {
        let rels = relations(self.k_max);
        for r in &rels {
            if !self.path_matrix(r.source, &r.lhs).sub(&self.path_matrix(r.source, &r.rhs)).is_zero() {
                return Err(PdError::RelationFailed { module: self.name.clone(), relation: r.name.clone() });
            }
        }
        Ok(rels.len())
    }

    pub fn total_rank(&self) -> usize {
        self.bases.iter().map(Vec::len).sum()
    }
}

/// Checks `dst(g) h_m = h_k src(g)` for every generator `g: [m] -> [k]`;
/// `h[k - 1]` is the component at `[k]`.
pub fn check_module_map(
    name: &str,
    src: &CyclicModuleData,
    dst: &CyclicModuleData,
    h: &[SparseMatrix],
) -> Result<(), PdError> {
    for (g, m) in &src.maps {
        let lhs = dst.maps[g].mul(&h[g.source() - 1]);
        let rhs = h[g.target() - 1].mul(m);
        if !lhs.sub(&rhs).is_zero() {
            return Err(PdError::NotAModuleMap { map: name.to_string(), generator: g.label() });
        }
    }
    Ok(())
}

/// `Q([k]) = W . Hom([1], [k])`, basis in the order of [`lambda_hom`], with
/// structure maps by post-composition.
pub fn make_q(k_max: usize, ring: BaseRing) -> CyclicModuleData {
    let homs: Vec<Vec<LambdaMorphism>> = (1..=k_max).map(|k| lambda_hom(1, k)).collect();
    let bases = homs.iter().map(|h| h.iter().map(|f| format!("f{}", f.values()[0])).collect()).collect();
    CyclicModuleData::from_action("Q", ring, k_max, bases, |g| {
        let cols = homs[g.source() - 1]
            .iter()
            .map(|f| {
                let composite = g.after(f);
                let row = homs[g.target() - 1].iter().position(|h| *h == composite).expect("enumeration is complete");
                vec![(row, 1)]
            })
            .collect();
        SparseMatrix::from_columns(ring, g.target(), cols)
    })
}

/// The constant cyclic module with value `R_n` and identity structure maps;
/// `n = 0` gives `underline(W)`.
pub fn make_underline_r(n: usize, k_max: usize, ring: BaseRing) -> CyclicModuleData {
    let bases = vec![(0..=n).map(|l| format!("t^[{l}]")).collect(); k_max];
    CyclicModuleData::from_action(&format!("R_{n}"), ring, k_max, bases, |_| SparseMatrix::identity(ring, n + 1))
}

/// `F_n([k])` with basis `1` and `x_j^[m]`, `0 <= j < k`, `1 <= m <= n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FnAlgebra {
    pub ring: BaseRing,
    pub n: usize,
}

impl FnAlgebra {
    pub fn new(ring: BaseRing, n: usize) -> Self {
        assert!(n >= 1, "F_n needs n >= 1");
        FnAlgebra { ring, n }
    }

    pub fn rank(&self, k: usize) -> usize {
        1 + k * self.n
    }

    pub fn x(&self, j: usize, m: usize) -> usize {
        debug_assert!((1..=self.n).contains(&m));
        1 + j * self.n + (m - 1)
    }

    /// `(j, m)` for a basis index other than `1`.
    pub fn decode(&self, b: usize) -> Option<(usize, usize)> {
        (b > 0).then(|| ((b - 1) / self.n, (b - 1) % self.n + 1))
    }

    pub fn degree(&self, b: usize) -> usize {
        self.decode(b).map_or(0, |(_, m)| m)
    }

    pub fn label(&self, b: usize) -> String {
        match self.decode(b) {
            None => "1".to_string(),
            Some((j, m)) => format!("x{j}^[{m}]"),
        }
    }

    /// Product of two basis elements. For `i != j`,
    /// `x_i^[l] x_j^[r] = C(l+r-1, l-1) x_i^[l+r] + C(l+r-1, l) x_j^[l+r]`.
    pub fn mul_basis(&self, a: usize, b: usize) -> Vec<(usize, u64)> {
        let ring = self.ring;
        let (Some((i, l)), Some((j, r))) = (self.decode(a), self.decode(b)) else {
            return vec![(a.max(b), 1)];
        };
        let s = l + r;
        if s > self.n {
            return Vec::new();
        }
        let c = |top: usize, bot: usize| ring.binomial(top as u64, bot as u64);
        if i == j {
            return vec![(self.x(i, s), c(s, l))];
        }
        vec![(self.x(i, s), c(s - 1, l - 1)), (self.x(j, s), c(s - 1, l))]
    }

    pub fn mul(&self, u: &[u64], v: &[u64]) -> Vec<u64> {
        let ring = self.ring;
        let mut out = vec![0; u.len()];
        for (a, &x) in u.iter().enumerate().filter(|e| *e.1 != 0) {
            for (b, &y) in v.iter().enumerate().filter(|e| *e.1 != 0) {
                for (c, k) in self.mul_basis(a, b) {
                    out[c] = ring.add(out[c], ring.mul(k, ring.mul(x, y)));
                }
            }
        }
        out
    }

    pub fn unit(&self, k: usize) -> Vec<u64> {
        let mut v = vec![0; self.rank(k)];
        v[0] = 1;
        v
    }

    /// Image of `t^[d]` placed in tensor slot `j`.
    pub fn slot(&self, k: usize, j: usize, d: usize) -> Vec<u64> {
        let mut v = vec![0; self.rank(k)];
        if d == 0 {
            v[0] = 1;
        } else if d <= self.n {
            v[self.x(j, d)] = 1;
        }
        v
    }

    /// Structure map along `f`: `x_j^[m] -> x_{f(j)}^[m]`.
    pub fn push(&self, f: &LambdaMorphism, b: usize) -> usize {
        match self.decode(b) {
            None => 0,
            Some((j, m)) => self.x(f.set_map()[j], m),
        }
    }

    /// Multiplication by `x_a^[r]` on `F_n([k])`.
    pub fn action(&self, k: usize, a: usize, r: usize) -> SparseMatrix {
        let x = self.x(a, r);
        SparseMatrix::from_columns(self.ring, self.rank(k), (0..self.rank(k)).map(|b| self.mul_basis(x, b)).collect())
    }

    /// `F_n -> R_n`, `x_j^[m] -> t^[m]`.
    pub fn augmentation(&self, k: usize) -> SparseMatrix {
        SparseMatrix::from_columns(
            self.ring,
            self.n + 1,
            (0..self.rank(k)).map(|b| vec![(self.degree(b), 1)]).collect(),
        )
    }

    /// Associativity, commutativity and the unit on all basis triples of
    /// `F_n([k])`.
    pub fn check_laws(&self, k: usize) -> Result<(), PdError> {
        let rank = self.rank(k);
        let e = |b: usize| {
            let mut v = vec![0; rank];
            v[b] = 1;
            v
        };
        for a in 0..rank {
            if self.mul(&self.unit(k), &e(a)) != e(a) {
                return Err(PdError::NotAnAlgebra(format!("1 is not a unit for {}", self.label(a))));
            }
            for b in 0..rank {
                let ab = self.mul(&e(a), &e(b));
                if ab != self.mul(&e(b), &e(a)) {
                    return Err(PdError::NotAnAlgebra(format!("{} {} do not commute", self.label(a), self.label(b))));
                }
                for c in 0..rank {
                    if self.mul(&ab, &e(c)) != self.mul(&e(a), &self.mul(&e(b), &e(c))) {
                        return Err(PdError::NotAnAlgebra(format!(
                            "associativity fails on {} {} {} in [{k}]",
                            self.label(a),
                            self.label(b),
                            self.label(c)
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// The structure map along `f` is a ring map on basis pairs.
    pub fn check_multiplicative(&self, f: &LambdaMorphism) -> Result<(), PdError> {
        let (m, k) = (f.source(), f.target());
        let image = |v: &[u64]| {
            let mut out = vec![0; self.rank(k)];
            for (b, &x) in v.iter().enumerate() {
                let t = self.push(f, b);
                out[t] = self.ring.add(out[t], x);
            }
            out
        };
        for a in 0..self.rank(m) {
            for b in 0..self.rank(m) {
                let mut ea = vec![0; self.rank(m)];
                let mut eb = ea.clone();
                ea[a] = 1;
                eb[b] = 1;
                if image(&self.mul(&ea, &eb)) != self.mul(&image(&ea), &image(&eb)) {
                    return Err(PdError::NotAnAlgebra(format!(
                        "structure map {:?} is not multiplicative on {} {}",
                        f.values(),
                        self.label(a),
                        self.label(b)
                    )));
                }
            }
        }
        Ok(())
    }
}

pub fn make_f(n: usize, k_max: usize, ring: BaseRing) -> (FnAlgebra, CyclicModuleData) {
    let alg = FnAlgebra::new(ring, n);
    let bases = (1..=k_max).map(|k| (0..alg.rank(k)).map(|b| alg.label(b)).collect()).collect();
    let data = CyclicModuleData::from_action(&format!("F_{n}"), ring, k_max, bases, |f| {
        let cols = (0..alg.rank(f.source())).map(|b| vec![(alg.push(f, b), 1)]).collect();
        SparseMatrix::from_columns(ring, alg.rank(f.target()), cols)
    });
    (alg, data)
}

/// A module with a finite decreasing filtration by spans of basis vectors,
/// `index[k - 1][b]` being the last step containing `b`, together with
/// a bijection of each graded piece onto the basis of a target module.
pub struct Filtered<'a> {
    pub module: &'a CyclicModuleData,
    pub index: Vec<Vec<usize>>,
    pub gr_basis: Vec<Vec<usize>>,
    /// Operators per object that must raise the filtration strictly.
    pub actions: Vec<Vec<(String, SparseMatrix)>>,
}

#[derive(Debug, Clone, Serialize)]
pub struct FiltrationWitness {
    pub module: String,
    pub graded_like: String,
    pub length: usize,
    /// `gr_ranks[i][k - 1]`.
    pub gr_ranks: Vec<Vec<usize>>,
    pub generator_checks: usize,
    pub action_checks: usize,
    pub relation_checks: usize,
}

/// Verifies stability under the structure maps, that every graded piece maps
/// isomorphically onto `target` intertwining all generators, that the actions
/// vanish on the graded pieces and that step `length` is zero.
pub fn verify_graded(f: &Filtered, target: &CyclicModuleData, length: usize) -> Result<FiltrationWitness, PdError> {
    let module = &f.module.name;
    let quotient_err =
        |step: usize, k: usize, reason: String| PdError::QuotientNotQ { module: module.clone(), step, k, reason };
    for k in 1..=f.module.k_max {
        let idx = &f.index[k - 1];
        for step in 0..length {
            let mut hit: Vec<usize> =
                (0..idx.len()).filter(|&b| idx[b] == step).map(|b| f.gr_basis[k - 1][b]).collect();
            hit.sort_unstable();
            if hit != (0..target.rank(k)).collect::<Vec<_>>() {
                return Err(quotient_err(step, k, format!("basis maps to {hit:?}")));
            }
        }
        if let Some(b) = idx.iter().position(|&i| i >= length) {
            return Err(quotient_err(length, k, format!("{} survives past the last step", f.module.basis(k)[b])));
        }
    }
    let mut generator_checks = 0;
    for (g, m) in &f.module.maps {
        let (s, t) = (g.source(), g.target());
        let tm = target.matrix(g);
        for c in 0..m.cols() {
            let ic = f.index[s - 1][c];
            let mut gr: BTreeMap<usize, u64> = BTreeMap::new();
            for &(r, v) in m.column(c) {
                let ir = f.index[t - 1][r];
                if ir < ic {
                    return Err(PdError::FiltrationNotStable { module: module.clone(), k: s, operator: g.label() });
                }
                if ir == ic {
                    gr.insert(f.gr_basis[t - 1][r], v);
                }
            }
            let expected: BTreeMap<usize, u64> = tm.column(f.gr_basis[s - 1][c]).iter().copied().collect();
            if gr != expected {
                return Err(quotient_err(ic, s, format!("{} does not match on {}", g.label(), f.module.basis(s)[c])));
            }
        }
        generator_checks += 1;
    }
    let mut action_checks = 0;
    for k in 1..=f.module.k_max {
        let idx = &f.index[k - 1];
        for (name, a) in &f.actions[k - 1] {
            for c in 0..a.cols() {
                for &(r, _) in a.column(c) {
                    if idx[r] < idx[c] {
                        return Err(PdError::FiltrationNotStable { module: module.clone(), k, operator: name.clone() });
                    }
                    if idx[r] == idx[c] {
                        return Err(quotient_err(idx[c], k, format!("{name} acts nontrivially")));
                    }
                }
            }
            action_checks += 1;
        }
    }
    let gr_ranks = (0..length)
        .map(|i| (1..=f.module.k_max).map(|k| f.index[k - 1].iter().filter(|&&x| x == i).count()).collect())
        .collect();
    Ok(FiltrationWitness {
        module: module.clone(),
        graded_like: target.name.clone(),
        length,
        gr_ranks,
        generator_checks,
        action_checks,
        relation_checks: f.module.check_relations()? + target.check_relations()?,
    })
}

fn fn_actions(alg: &FnAlgebra, k_max: usize) -> Vec<Vec<(String, SparseMatrix)>> {
    (1..=k_max)
        .map(|k| {
            (0..k)
                .flat_map(|a| (1..=alg.n).map(move |r| (a, r)))
                .map(|(a, r)| (format!("x{a}^[{r}]"), alg.action(k, a, r)))
                .collect()
        })
        .collect()
}

/// Restricts `big` to the submodules spanned by the columns of `incl_src` and
/// `incl_dst`, where row `pivots[c]` of `incl_dst` is the unit vector `e_c`.
/// `None` if the image leaves the submodule.
fn restrict(
    big: &SparseMatrix,
    incl_src: &SparseMatrix,
    incl_dst: &SparseMatrix,
    pivots: &[usize],
) -> Option<SparseMatrix> {
    let image = big.mul(incl_src);
    let cols = (0..image.cols())
        .map(|c| {
            pivots.iter().enumerate().filter_map(|(i, &p)| Some((i, image.get(p, c))).filter(|e| e.1 != 0)).collect()
        })
        .collect();
    let small = SparseMatrix::from_columns(big.ring(), pivots.len(), cols);
    incl_dst.mul(&small).sub(&image).is_zero().then_some(small)
}

/// The filtration `Fil^i = <x_j^[m] : m >= i>` on `F_n`: `F_n -> R_n` is an
/// algebra map of cyclic modules, `Fil^1` is the kernel of `F_n -> W`, and
/// `Fil^i / Fil^{i+1}` is `Q` for `1 <= i <= n` with `Fil^{n+1} = 0`.
pub fn verify_fil(n: usize, k_max: usize, ring: BaseRing) -> Result<FiltrationWitness, PdError> {
    let (alg, f) = make_f(n, k_max, ring);
    let q = make_q(k_max, ring);
    f.check_relations()?;
    for k in 1..=k_max {
        alg.check_laws(k)?;
    }
    for g in f.maps.keys() {
        alg.check_multiplicative(&g.morphism())?;
    }
    let rn = make_underline_r(n, k_max, ring);
    let w = make_underline_r(0, k_max, ring);
    let aug: Vec<SparseMatrix> = (1..=k_max).map(|k| alg.augmentation(k)).collect();
    check_module_map("F_n -> R_n", &f, &rn, &aug)?;
    let ev0 =
        SparseMatrix::from_columns(ring, 1, (0..=n).map(|l| if l == 0 { vec![(0, 1)] } else { vec![] }).collect());
    let to_w: Vec<SparseMatrix> = aug.iter().map(|a| ev0.mul(a)).collect();
    check_module_map("F_n -> W", &f, &w, &to_w)?;
    let rn_ring = DividedPowerRing::new(ring, n);
    for k in 1..=k_max {
        for a in 0..alg.rank(k) {
            for b in 0..alg.rank(k) {
                let mut ea = vec![0; alg.rank(k)];
                let mut eb = ea.clone();
                ea[a] = 1;
                eb[b] = 1;
                let img = |v: &[u64]| -> Vec<u64> {
                    let mut out = vec![0; n + 1];
                    for (c, &x) in v.iter().enumerate() {
                        out[alg.degree(c)] = ring.add(out[alg.degree(c)], x);
                    }
                    out
                };
                if img(&alg.mul(&ea, &eb)) != rn_ring.mul(&img(&ea), &img(&eb)) {
                    return Err(PdError::NotAnAlgebra(format!(
                        "F_n -> R_n is not multiplicative on {} {}",
                        alg.label(a),
                        alg.label(b)
                    )));
                }
            }
        }
        // F_n -> W kills exactly the span of the x_j^[m]
        let kernel: Vec<usize> = (0..alg.rank(k)).filter(|&b| to_w[k - 1].column(b).is_empty()).collect();
        if kernel != (1..alg.rank(k)).collect::<Vec<_>>() {
            return Err(PdError::KernelMismatch { map: "F_n -> W".into(), k, reason: format!("kills {kernel:?}") });
        }
    }
    // Fil^1 as a submodule, with steps shifted down by one
    let bases = (1..=k_max).map(|k| (1..alg.rank(k)).map(|b| alg.label(b)).collect()).collect();
    let incl: Vec<SparseMatrix> = (1..=k_max)
        .map(|k| SparseMatrix::from_columns(ring, alg.rank(k), (1..alg.rank(k)).map(|b| vec![(b, 1)]).collect()))
        .collect();
    let pivots: Vec<Vec<usize>> = (1..=k_max).map(|k| (1..alg.rank(k)).collect()).collect();
    let mut maps = BTreeMap::new();
    for (g, m) in &f.maps {
        let small =
            restrict(m, &incl[g.source() - 1], &incl[g.target() - 1], &pivots[g.target() - 1]).ok_or_else(|| {
                PdError::FiltrationNotStable { module: "Fil^1 F_n".into(), k: g.source(), operator: g.label() }
            })?;
        maps.insert(*g, small);
    }
    let fil1 = CyclicModuleData { name: format!("Fil^1 F_{n}"), ring, k_max, bases, maps };
    let actions = fn_actions(&alg, k_max)
        .into_iter()
        .enumerate()
        .map(|(i, acts)| {
            let k = i + 1;
            acts.into_iter()
                .map(|(name, a)| {
                    let small = restrict(&a, &incl[i], &incl[i], &pivots[i]).ok_or_else(|| {
                        PdError::FiltrationNotStable { module: "Fil^1 F_n".into(), k, operator: name.clone() }
                    })?;
                    Ok((name, small))
                })
                .collect::<Result<Vec<_>, PdError>>()
        })
        .collect::<Result<Vec<_>, PdError>>()?;
    let index = (1..=k_max).map(|k| (1..alg.rank(k)).map(|b| alg.degree(b) - 1).collect()).collect();
    let gr_basis = (1..=k_max).map(|k| (1..alg.rank(k)).map(|b| alg.decode(b).unwrap().0).collect()).collect();
    verify_graded(&Filtered { module: &fil1, index, gr_basis, actions }, &q, n)
}

/// `F_n (x)_W underline(R_n)`, the multiplication map to `underline(R_n)` and
/// the kernel basis `K_{j,m,l} = x_j^[m] (x) t^[l] - 1 (x) t^[m] t^[l]`.
pub struct TensorKernel {
    pub alg: FnAlgebra,
    pub tensor: CyclicModuleData,
    pub kernel: CyclicModuleData,
    /// Per object: `tensor -> R_n`.
    pub multiplication: Vec<SparseMatrix>,
    /// Per object: `kernel -> tensor`.
    pub inclusion: Vec<SparseMatrix>,
    /// Per object: `(j, m, l)` of each kernel basis element.
    pub labels: Vec<Vec<(usize, usize, usize)>>,
}

pub fn tensor_kernel(n: usize, k_max: usize, ring: BaseRing) -> Result<TensorKernel, PdError> {
    let (alg, f) = make_f(n, k_max, ring);
    let rn = DividedPowerRing::new(ring, n);
    let at = |b: usize, l: usize| b * (n + 1) + l;
    let bases = (1..=k_max)
        .map(|k| (0..alg.rank(k)).flat_map(|b| (0..=n).map(move |l| format!("{} (x) t^[{l}]", alg.label(b)))).collect())
        .collect();
    let tensor = CyclicModuleData::from_action(&format!("F_{n} (x) R_{n}"), ring, k_max, bases, |g| {
        let cols = (0..alg.rank(g.source()))
            .flat_map(|b| (0..=n).map(move |l| (b, l)))
            .map(|(b, l)| vec![(at(alg.push(g, b), l), 1)])
            .collect();
        SparseMatrix::from_columns(ring, alg.rank(g.target()) * (n + 1), cols)
    });
    let multiplication: Vec<SparseMatrix> = (1..=k_max)
        .map(|k| {
            let cols = (0..alg.rank(k))
                .flat_map(|b| (0..=n).map(move |l| (b, l)))
                .map(|(b, l)| rn.mul_basis(alg.degree(b), l).into_iter().collect())
                .collect();
            SparseMatrix::from_columns(ring, n + 1, cols)
        })
        .collect();
    check_module_map("multiplication", &tensor, &make_underline_r(n, k_max, ring), &multiplication)?;

    let mut labels = Vec::new();
    let mut inclusion = Vec::new();
    let mut pivots = Vec::new();
    for k in 1..=k_max {
        let mut lab = Vec::new();
        let mut cols = Vec::new();
        let mut piv = Vec::new();
        for j in 0..k {
            for m in 1..=n {
                for l in 0..=n {
                    let mut col = vec![(at(alg.x(j, m), l), 1)];
                    if let Some((s, c)) = rn.mul_basis(m, l) {
                        col.push((at(0, s), ring.neg(c)));
                    }
                    lab.push((j, m, l));
                    piv.push(at(alg.x(j, m), l));
                    cols.push(col);
                }
            }
        }
        let incl = SparseMatrix::from_columns(ring, alg.rank(k) * (n + 1), cols);
        let reason = if !multiplication[k - 1].mul(&incl).is_zero() {
            Some("basis element not in the kernel".to_string())
        } else if lab.len() + n + 1 != alg.rank(k) * (n + 1) {
            Some(format!("rank {} of {}", lab.len(), alg.rank(k) * (n + 1)))
        } else {
            None
        };
        if let Some(reason) = reason {
            return Err(PdError::KernelMismatch { map: "multiplication".into(), k, reason });
        }
        labels.push(lab);
        inclusion.push(incl);
        pivots.push(piv);
    }
    // the multiplication is split by 1 (x) t^[l], so the kernel is free of the
    // complementary rank and the split injection above spans all of it
    let mut maps = BTreeMap::new();
    for (g, m) in &tensor.maps {
        let (s, t) = (g.source(), g.target());
        let small = restrict(m, &inclusion[s - 1], &inclusion[t - 1], &pivots[t - 1])
            .ok_or_else(|| PdError::FiltrationNotStable { module: "kernel".into(), k: s, operator: g.label() })?;
        maps.insert(*g, small);
    }
    let kernel_bases =
        labels.iter().map(|lab| lab.iter().map(|&(j, m, l)| format!("K(x{j}^[{m}], t^[{l}])")).collect()).collect();
    let kernel =
        CyclicModuleData { name: format!("ker(F_{n} (x) R_{n} -> R_{n})"), ring, k_max, bases: kernel_bases, maps };
    f.check_relations()?;
    Ok(TensorKernel { alg, tensor, kernel, multiplication, inclusion, labels })
}

/// The filtration on the kernel of `F_n (x) R_n -> R_n` with `K_{j,m,l}` in
/// step `l n + m - 1`: length `n(n+1)`, `R_n^#`-linear, graded pieces `Q`.
pub fn verify_fil_tilde(n: usize, k_max: usize, ring: BaseRing) -> Result<FiltrationWitness, PdError> {
    let tk = tensor_kernel(n, k_max, ring)?;
    let alg = tk.alg;
    let pivots: Vec<Vec<usize>> =
        tk.labels.iter().map(|lab| lab.iter().map(|&(j, m, l)| alg.x(j, m) * (n + 1) + l).collect()).collect();
    let mut actions = Vec::new();
    for k in 1..=k_max {
        let mut acts = Vec::new();
        for a in 0..k {
            for r in 1..=n {
                let small = alg.action(k, a, r);
                let cols = (0..alg.rank(k))
                    .flat_map(|b| (0..=n).map(move |l| (b, l)))
                    .map(|(b, l)| small.column(b).iter().map(|&(c, v)| (c * (n + 1) + l, v)).collect())
                    .collect();
                let big = SparseMatrix::from_columns(ring, alg.rank(k) * (n + 1), cols);
                let name = format!("x{a}^[{r}]");
                let on_kernel =
                    restrict(&big, &tk.inclusion[k - 1], &tk.inclusion[k - 1], &pivots[k - 1]).ok_or_else(|| {
                        PdError::FiltrationNotStable { module: tk.kernel.name.clone(), k, operator: name.clone() }
                    })?;
                acts.push((name, on_kernel));
            }
        }
        actions.push(acts);
    }
    // R_n^#-linearity of the structure maps on the kernel: g(x . v) = g(x) . g(v)
    for (g, m) in &tk.kernel.maps {
        let f = g.morphism();
        let (s, t) = (g.source(), g.target());
        for (i, (name, act)) in actions[s - 1].iter().enumerate() {
            let (a, r) = (i / n, i % n + 1);
            let pushed = &actions[t - 1][f.set_map()[a] * n + r - 1].1;
            if !m.mul(act).sub(&pushed.mul(m)).is_zero() {
                return Err(PdError::NotAModuleMap { map: format!("action of {name}"), generator: g.label() });
            }
        }
    }
    let index = tk.labels.iter().map(|lab| lab.iter().map(|&(_, m, l)| l * n + m - 1).collect()).collect();
    let gr_basis = tk.labels.iter().map(|lab| lab.iter().map(|&(j, _, _)| j).collect()).collect();
    let q = make_q(k_max, ring);
    verify_graded(&Filtered { module: &tk.kernel, index, gr_basis, actions }, &q, n * (n + 1))
}

#[cfg(test)]
mod tests;
