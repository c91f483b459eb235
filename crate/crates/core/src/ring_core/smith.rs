use super::{BaseRing, Matrix};

/// `M = U * D * V` with `U`, `V` invertible and `D` diagonal with entries `p^e`
/// (or zero), non-decreasing in valuation.
#[derive(Debug, Clone)]
pub struct SmithDecomposition {
    pub u: Matrix,
    pub d: Matrix,
    pub v: Matrix,
    /// Valuations of the diagonal of `D`; `n` marks a zero entry.
    pub profile: Vec<u32>,
}

impl SmithDecomposition {
    pub fn recompose(&self) -> Matrix {
        self.u.dot(&self.d).dot(&self.v)
    }
}

/// Pivot search: minimal valuation in the trailing block, ties broken by
/// lowest (row, col).
fn find_pivot(ring: &BaseRing, w: &Matrix, t: usize) -> Option<(usize, usize, u32)> {
    let mut best: Option<(usize, usize, u32)> = None;
    for i in t..w.rows() {
        for (j, &x) in w.row(i).iter().enumerate().skip(t) {
            if x == 0 {
                continue;
            }
            let v = ring.valuation(x);
            if best.is_none_or(|(_, _, bv)| v < bv) {
                best = Some((i, j, v));
                if v == 0 {
                    return best;
                }
            }
        }
    }
    best
}

struct Transforms {
    u: Option<Matrix>,
    v: Option<Matrix>,
}

impl Transforms {
    // W <- swap rows a,b; U <- U * swap.
    fn swap_rows(&mut self, a: usize, b: usize) {
        if let Some(u) = &mut self.u {
            u.swap_cols(a, b);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if let Some(v) = &mut self.v {
            v.swap_rows(a, b);
        }
    }

    // W <- (row t scaled by s); U <- U * diag(s^{-1}) at t, i.e. column t times `unit`.
    fn scale_row(&mut self, ring: &BaseRing, t: usize, unit: u64) {
        if let Some(u) = &mut self.u {
            for i in 0..u.rows() {
                let x = u.get(i, t);
                if x != 0 {
                    u.set(i, t, ring.mul(x, unit));
                }
            }
        }
    }

    // W: row_i -= q row_t; U: col_t += q col_i.
    fn row_sub(&mut self, ring: &BaseRing, i: usize, t: usize, q: u64) {
        if let Some(u) = &mut self.u {
            for r in 0..u.rows() {
                let x = u.get(r, i);
                if x != 0 {
                    u.add_at(r, t, ring.mul(x, q));
                }
            }
        }
    }

    // W: col_j -= q col_t; V: row_t += q row_j.
    fn col_sub(&mut self, ring: &BaseRing, j: usize, t: usize, q: u64) {
        if let Some(v) = &mut self.v {
            let src: Vec<(usize, u64)> =
                v.row(j).iter().enumerate().filter(|(_, &x)| x != 0).map(|(c, &x)| (c, x)).collect();
            for (c, x) in src {
                v.add_at(t, c, ring.mul(x, q));
            }
        }
    }
}

fn reduce(m: &Matrix, mut tr: Transforms) -> (Matrix, Transforms, Vec<u32>) {
    let ring = m.ring();
    let mut w = m.clone();
    let steps = w.rows().min(w.cols());
    let mut profile = Vec::with_capacity(steps);
    let mut t = 0;
    while t < steps {
        let Some((pi, pj, v)) = find_pivot(&ring, &w, t) else {
            break;
        };
        w.swap_rows(t, pi);
        tr.swap_rows(t, pi);
        w.swap_cols(t, pj);
        tr.swap_cols(t, pj);

        let (unit, _) = ring.unit_part(w.get(t, t));
        let unit_inv = ring.inv(unit).expect("unit part is invertible");
        if unit != 1 {
            for x in w.row_mut(t).iter_mut().skip(t) {
                *x = ring.mul(*x, unit_inv);
            }
            tr.scale_row(&ring, t, unit);
        }
        let pivot_pow = ring.p_pow(v);

        let pivot_support: Vec<(usize, u64)> =
            w.row(t).iter().enumerate().skip(t).filter(|(_, &x)| x != 0).map(|(j, &x)| (j, x)).collect();

        for i in (t + 1)..w.rows() {
            let a = w.get(i, t);
            if a == 0 {
                continue;
            }
            let q = a / pivot_pow;
            let row = w.row_mut(i);
            for &(j, x) in &pivot_support {
                row[j] = ring.sub(row[j], ring.mul(q, x));
            }
            tr.row_sub(&ring, i, t, q);
        }

        // Column t is now zero off the pivot, so clearing row t only touches W[t][j].
        for &(j, x) in pivot_support.iter().skip(1) {
            let q = x / pivot_pow;
            w.set(t, j, 0);
            tr.col_sub(&ring, j, t, q);
        }
        profile.push(v);
        t += 1;
    }
    profile.resize(steps, ring.n());
    (w, tr, profile)
}

/// Full decomposition `M = U D V`.
pub fn smith_decompose(m: &Matrix) -> SmithDecomposition {
    let ring = m.ring();
    let tr = Transforms { u: Some(Matrix::identity(ring, m.rows())), v: Some(Matrix::identity(ring, m.cols())) };
    let (d, tr, profile) = reduce(m, tr);
    SmithDecomposition { u: tr.u.unwrap(), d, v: tr.v.unwrap(), profile }
}

/// Diagonal valuations only, without accumulating the transforms.
pub fn smith_diagonal(m: &Matrix) -> Vec<u32> {
    reduce(m, Transforms { u: None, v: None }).2
}

/// Decomposition keeping only `V`, which is all homology needs.
pub(crate) fn smith_with_v(m: &Matrix) -> (Vec<u32>, Matrix) {
    let tr = Transforms { u: None, v: Some(Matrix::identity(m.ring(), m.cols())) };
    let (_, tr, profile) = reduce(m, tr);
    (profile, tr.v.unwrap())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn z9() -> BaseRing {
        BaseRing::new(3, 2).unwrap()
    }

    #[test]
    fn identity_is_fixed() {
        let id = Matrix::identity(z9(), 3);
        let s = smith_decompose(&id);
        assert!(s.d.is_identity());
        assert_eq!(s.profile, vec![0, 0, 0]);
    }

    #[test]
    fn diagonal_three() {
        let m = Matrix::from_rows(z9(), &[vec![3]]);
        let s = smith_decompose(&m);
        assert_eq!(s.d, m);
        assert_eq!(s.profile, vec![1]);
    }

    #[test]
    fn zero_and_empty() {
        let s = smith_decompose(&Matrix::zeros(z9(), 2, 3));
        assert_eq!(s.profile, vec![2, 2]);
        let s = smith_decompose(&Matrix::zeros(z9(), 0, 3));
        assert!(s.profile.is_empty());
        assert_eq!(s.recompose(), Matrix::zeros(z9(), 0, 3));
    }

    fn check_diagonal_form(s: &SmithDecomposition) {
        let ring = s.d.ring();
        for i in 0..s.d.rows() {
            for j in 0..s.d.cols() {
                let x = s.d.get(i, j);
                if i != j {
                    assert_eq!(x, 0);
                } else {
                    assert_eq!(x, ring.p_pow(s.profile[i]));
                }
            }
        }
        assert!(s.profile.windows(2).all(|w| w[0] <= w[1]));
    }

    proptest! {
        #[test]
        fn recomposes(p in prop::sample::select(vec![2u64, 3, 5]), n in 1u32..=3,
                      rows in 0usize..7, cols in 0usize..7, seed in any::<u64>()) {
            let ring = BaseRing::new(p, n).unwrap();
            let mut state = seed;
            let m = Matrix::from_fn(ring, rows, cols, |_, _| {
                state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                // bias toward non-units so valuations vary
                let x = state >> 33;
                if x % 3 == 0 { (x % ring.modulus()) * p } else { x }
            });
            let s = smith_decompose(&m);
            prop_assert_eq!(s.recompose(), m.clone());
            prop_assert!(s.u.is_invertible());
            prop_assert!(s.v.is_invertible());
            check_diagonal_form(&s);
            prop_assert_eq!(smith_diagonal(&m), s.profile);
        }
    }
}
