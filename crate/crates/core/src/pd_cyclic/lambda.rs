//! The cyclic category with `[k]` the cyclically ordered set of `k` points.
//!
//! A morphism `[m] -> [k]` is a non-decreasing `f: Z -> Z` with
//! `f(i + m) = f(i) + k`, up to `f ~ f + k`. It is stored by its values on
//! `0..m`, shifted so that `f(0)` lies in `0..k`.

use std::collections::{BTreeSet, VecDeque};

use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct LambdaMorphism {
    source: usize,
    target: usize,
    values: Vec<i64>,
}

impl LambdaMorphism {
    /// `None` unless `values` is non-decreasing with `values[m-1] <= values[0] + k`.
    pub fn new(source: usize, target: usize, values: Vec<i64>) -> Option<Self> {
        if source == 0 || target == 0 || values.len() != source {
            return None;
        }
        let monotone = values.windows(2).all(|w| w[0] <= w[1]);
        if !monotone || values[source - 1] > values[0] + target as i64 {
            return None;
        }
        let shift = values[0].div_euclid(target as i64) * target as i64;
        Some(LambdaMorphism { source, target, values: values.into_iter().map(|v| v - shift).collect() })
    }

    pub fn identity(k: usize) -> Self {
        LambdaMorphism { source: k, target: k, values: (0..k as i64).collect() }
    }

    /// `delta_i: [k] -> [k+1]` for `0 <= i <= k`: misses the point `i`.
    pub fn coface(k: usize, i: usize) -> Self {
        assert!(i <= k);
        let values = (0..k as i64).map(|j| if j < i as i64 { j } else { j + 1 }).collect();
        LambdaMorphism::new(k, k + 1, values).expect("coface")
    }

    /// `sigma_i: [k+1] -> [k]` for `0 <= i < k`: identifies `i` and `i + 1`.
    pub fn codegeneracy(k: usize, i: usize) -> Self {
        assert!(i < k);
        let values = (0..=k as i64).map(|j| if j <= i as i64 { j } else { j - 1 }).collect();
        LambdaMorphism::new(k + 1, k, values).expect("codegeneracy")
    }

    /// `tau: [k] -> [k]`, `j -> j + 1`.
    pub fn rotation(k: usize) -> Self {
        LambdaMorphism::new(k, k, (1..=k as i64).collect()).expect("rotation")
    }

    pub fn source(&self) -> usize {
        self.source
    }

    pub fn target(&self) -> usize {
        self.target
    }

    pub fn values(&self) -> &[i64] {
        &self.values
    }

    pub fn eval(&self, i: i64) -> i64 {
        let m = self.source as i64;
        self.values[i.rem_euclid(m) as usize] + i.div_euclid(m) * self.target as i64
    }

    /// `self` after `first`.
    pub fn after(&self, first: &LambdaMorphism) -> LambdaMorphism {
        assert_eq!(first.target, self.source, "composing non-composable morphisms");
        let values = (0..first.source as i64).map(|i| self.eval(first.eval(i))).collect();
        LambdaMorphism::new(first.source, self.target, values).expect("composite is a morphism")
    }

    /// The induced map of point sets `Z/m -> Z/k`.
    pub fn set_map(&self) -> Vec<usize> {
        self.values.iter().map(|&v| v.rem_euclid(self.target as i64) as usize).collect()
    }
}

/// All morphisms `[m] -> [k]`, sorted.
pub fn lambda_hom(m: usize, k: usize) -> Vec<LambdaMorphism> {
    let mut out = Vec::new();
    let mut values = vec![0i64; m];
    fn fill(i: usize, m: usize, k: i64, values: &mut Vec<i64>, out: &mut Vec<LambdaMorphism>) {
        if i == m {
            out.push(LambdaMorphism::new(m, k as usize, values.clone()).expect("enumerated"));
            return;
        }
        for v in values[i - 1]..=values[0] + k {
            values[i] = v;
            fill(i + 1, m, k, values, out);
        }
    }
    for f0 in 0..k as i64 {
        values[0] = f0;
        fill(1, m, k as i64, &mut values, &mut out);
    }
    out.sort();
    out
}

/// `|Hom([m], [k])| = k * C(m + k - 1, m - 1)`.
pub fn hom_count(m: usize, k: usize) -> u64 {
    let (n, r) = ((m + k - 1) as u64, (m - 1) as u64);
    let mut c: u64 = 1;
    for i in 0..r {
        c = c * (n - i) / (i + 1);
    }
    k as u64 * c
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Generator {
    /// `delta_i: [k] -> [k+1]`.
    Coface { k: usize, i: usize },
    /// `sigma_i: [k+1] -> [k]`.
    Codegeneracy { k: usize, i: usize },
    /// `tau: [k] -> [k]`.
    Rotation { k: usize },
}

impl Generator {
    pub fn morphism(&self) -> LambdaMorphism {
        match *self {
            Generator::Coface { k, i } => LambdaMorphism::coface(k, i),
            Generator::Codegeneracy { k, i } => LambdaMorphism::codegeneracy(k, i),
            Generator::Rotation { k } => LambdaMorphism::rotation(k),
        }
    }

    pub fn source(&self) -> usize {
        match *self {
            Generator::Coface { k, .. } | Generator::Rotation { k } => k,
            Generator::Codegeneracy { k, .. } => k + 1,
        }
    }

    pub fn target(&self) -> usize {
        match *self {
            Generator::Coface { k, .. } => k + 1,
            Generator::Codegeneracy { k, .. } | Generator::Rotation { k } => k,
        }
    }

    pub fn label(&self) -> String {
        match *self {
            Generator::Coface { k, i } => format!("delta_{i}:[{k}]->[{}]", k + 1),
            Generator::Codegeneracy { k, i } => format!("sigma_{i}:[{}]->[{k}]", k + 1),
            Generator::Rotation { k } => format!("tau:[{k}]"),
        }
    }
}

/// All generators whose source and target lie in `1..=k_max`.
pub fn generators(k_max: usize) -> Vec<Generator> {
    let mut out = Vec::new();
    for k in 1..=k_max {
        out.push(Generator::Rotation { k });
        if k < k_max {
            out.extend((0..=k).map(|i| Generator::Coface { k, i }));
            out.extend((0..k).map(|i| Generator::Codegeneracy { k, i }));
        }
    }
    out
}

/// A path of generators, applied left to right: `[g1, g2]` means `g2 . g1`.
pub type Path = Vec<Generator>;

pub fn compose_path(source: usize, path: &[Generator]) -> LambdaMorphism {
    path.iter().fold(LambdaMorphism::identity(source), |acc, g| g.morphism().after(&acc))
}

/// One defining relation `lhs = rhs` between paths from `[source]`.
#[derive(Debug, Clone, Serialize)]
pub struct Relation {
    pub name: String,
    pub source: usize,
    pub lhs: Path,
    pub rhs: Path,
}

/// The defining relations of the cyclic category among objects `1..=k_max`:
/// the cosimplicial identities, the rotation relations with cofaces and
/// codegeneracies, and `tau^k = id`.
pub fn relations(k_max: usize) -> Vec<Relation> {
    use Generator::*;
    let mut out = Vec::new();
    let mut push = |name: String, source: usize, lhs: Path, rhs: Path| out.push(Relation { name, source, lhs, rhs });
    for k in 1..=k_max {
        push(format!("tau^{k} = id on [{k}]"), k, vec![Rotation { k }; k], vec![]);
    }
    for k in 1..k_max.saturating_sub(1) {
        // [k] -> [k+2]
        for j in 0..=k + 1 {
            for i in 0..j {
                push(
                    format!("delta_{j} delta_{i} = delta_{i} delta_{} on [{k}]", j - 1),
                    k,
                    vec![Coface { k, i }, Coface { k: k + 1, i: j }],
                    vec![Coface { k, i: j - 1 }, Coface { k: k + 1, i }],
                );
            }
        }
    }
    for k in 1..k_max.saturating_sub(1) {
        // [k+2] -> [k]
        for j in 0..k {
            for i in 0..=j {
                push(
                    format!("sigma_{j} sigma_{i} = sigma_{i} sigma_{} on [{}]", j + 1, k + 2),
                    k + 2,
                    vec![Codegeneracy { k: k + 1, i }, Codegeneracy { k, i: j }],
                    vec![Codegeneracy { k: k + 1, i: j + 1 }, Codegeneracy { k, i }],
                );
            }
        }
    }
    for n in 1..k_max {
        // sigma_j delta_i on [n] -> [n+1] -> [n]
        for j in 0..n {
            for i in 0..=n {
                let lhs = vec![Coface { k: n, i }, Codegeneracy { k: n, i: j }];
                let rhs = if i < j {
                    vec![Codegeneracy { k: n - 1, i: j - 1 }, Coface { k: n - 1, i }]
                } else if i == j || i == j + 1 {
                    vec![]
                } else {
                    vec![Codegeneracy { k: n - 1, i: j }, Coface { k: n - 1, i: i - 1 }]
                };
                push(format!("sigma_{j} delta_{i} on [{n}]"), n, lhs, rhs);
            }
        }
    }
    for k in 1..k_max {
        // cofaces [k] -> [k+1] against rotations
        for i in 1..=k {
            push(
                format!("delta_{i} tau = tau delta_{} on [{k}]", i - 1),
                k,
                vec![Rotation { k }, Coface { k, i }],
                vec![Coface { k, i: i - 1 }, Rotation { k: k + 1 }],
            );
        }
        push(
            format!("delta_0 = tau delta_{k} on [{k}]"),
            k,
            vec![Coface { k, i: 0 }],
            vec![Coface { k, i: k }, Rotation { k: k + 1 }],
        );
        // codegeneracies [k+1] -> [k] against rotations
        for i in 1..k {
            push(
                format!("sigma_{i} tau = tau sigma_{} on [{}]", i - 1, k + 1),
                k + 1,
                vec![Rotation { k: k + 1 }, Codegeneracy { k, i }],
                vec![Codegeneracy { k, i: i - 1 }, Rotation { k }],
            );
        }
        push(
            format!("sigma_0 tau^2 = tau sigma_{} on [{}]", k - 1, k + 1),
            k + 1,
            vec![Rotation { k: k + 1 }, Rotation { k: k + 1 }, Codegeneracy { k, i: 0 }],
            vec![Codegeneracy { k, i: k - 1 }, Rotation { k }],
        );
    }
    out
}

/// Every morphism between objects `1..=k_max` is reached from identities by
/// post-composing generators. Returns the first unreachable morphism.
pub fn check_generation(k_max: usize) -> Result<(), LambdaMorphism> {
    let gens = generators(k_max);
    for m in 1..=k_max {
        let mut seen: BTreeSet<LambdaMorphism> = BTreeSet::new();
        let mut queue = VecDeque::from([LambdaMorphism::identity(m)]);
        while let Some(f) = queue.pop_front() {
            if !seen.insert(f.clone()) {
                continue;
            }
            for g in gens.iter().filter(|g| g.source() == f.target()) {
                let h = g.morphism().after(&f);
                if !seen.contains(&h) {
                    queue.push_back(h);
                }
            }
        }
        for k in 1..=k_max {
            if let Some(f) = lambda_hom(m, k).into_iter().find(|f| !seen.contains(f)) {
                return Err(f);
            }
        }
    }
    Ok(())
}
