use serde::{Serialize, Serializer};

use super::{BaseRing, RingError};

/// Dense row-major matrix over a [`BaseRing`]. Matrices act on column vectors:
/// column `j` holds the image of the `j`-th source basis vector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix {
    ring: BaseRing,
    rows: usize,
    cols: usize,
    data: Vec<u64>,
}

impl Matrix {
    pub fn zeros(ring: BaseRing, rows: usize, cols: usize) -> Self {
        Matrix { ring, rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(ring: BaseRing, size: usize) -> Self {
        let mut m = Self::zeros(ring, size, size);
        for i in 0..size {
            m.data[i * size + i] = ring.one();
        }
        m
    }

    /// Builds a matrix from signed integer rows, reducing every entry.
    pub fn from_rows(ring: BaseRing, rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut m = Self::zeros(ring, r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged rows");
            for (j, &x) in row.iter().enumerate() {
                m.data[i * c + j] = ring.reduce(x);
            }
        }
        m
    }

    pub fn from_fn(ring: BaseRing, rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> u64) -> Self {
        let mut m = Self::zeros(ring, rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.data[i * cols + j] = f(i, j) % ring.modulus();
            }
        }
        m
    }

    pub fn ring(&self) -> BaseRing {
        self.ring
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, x: u64) {
        self.data[i * self.cols + j] = x % self.ring.modulus();
    }

    #[inline]
    pub fn add_at(&mut self, i: usize, j: usize, x: u64) {
        let k = i * self.cols + j;
        self.data[k] = self.ring.add(self.data[k], x % self.ring.modulus());
    }

    pub fn row(&self, i: usize) -> &[u64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub(crate) fn row_mut(&mut self, i: usize) -> &mut [u64] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    /// First nonzero entry in column-major order, used as a failure witness.
    pub fn first_nonzero(&self) -> Option<(usize, usize, u64)> {
        for j in 0..self.cols {
            for i in 0..self.rows {
                let x = self.get(i, j);
                if x != 0 {
                    return Some((i, j, x));
                }
            }
        }
        None
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols && *self == Self::identity(self.ring, self.rows)
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.ring, self.cols, self.rows, |i, j| self.get(j, i))
    }

    /// Product `self * rhs`; skips zero entries of `self`, which keeps the
    /// mostly-sparse operator matrices cheap to compose.
    pub fn mul(&self, rhs: &Matrix) -> Result<Matrix, RingError> {
        if self.cols != rhs.rows {
            return Err(RingError::Shape(format!("{}x{} * {}x{}", self.rows, self.cols, rhs.rows, rhs.cols)));
        }
        let ring = self.ring;
        let m = ring.modulus();
        let mut out = vec![0u64; self.rows * rhs.cols];
        let mut acc = vec![0u64; rhs.cols];
        for i in 0..self.rows {
            acc.iter_mut().for_each(|x| *x = 0);
            let mut touched = false;
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                touched = true;
                for (slot, &b) in acc.iter_mut().zip(rhs.row(k)) {
                    if b != 0 {
                        *slot = (*slot + a * b) % m;
                    }
                }
            }
            if touched {
                out[i * rhs.cols..(i + 1) * rhs.cols].copy_from_slice(&acc);
            }
        }
        Ok(Matrix { ring, rows: self.rows, cols: rhs.cols, data: out })
    }

    /// Panicking product for internal use where shapes are known to agree.
    pub fn dot(&self, rhs: &Matrix) -> Matrix {
        self.mul(rhs).expect("matrix shapes")
    }

    pub fn add(&self, rhs: &Matrix) -> Matrix {
        self.combine(rhs, |a, b| self.ring.add(a, b))
    }

    pub fn sub(&self, rhs: &Matrix) -> Matrix {
        self.combine(rhs, |a, b| self.ring.sub(a, b))
    }

    fn combine(&self, rhs: &Matrix, f: impl Fn(u64, u64) -> u64) -> Matrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "shape mismatch");
        let data = self.data.iter().zip(&rhs.data).map(|(&a, &b)| f(a, b)).collect();
        Matrix { ring: self.ring, rows: self.rows, cols: self.cols, data }
    }

    pub fn scale(&self, c: u64) -> Matrix {
        let c = c % self.ring.modulus();
        let data = self.data.iter().map(|&a| self.ring.mul(a, c)).collect();
        Matrix { ring: self.ring, rows: self.rows, cols: self.cols, data }
    }

    /// `self += c * rhs` in place.
    pub fn axpy(&mut self, c: u64, rhs: &Matrix) {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "shape mismatch");
        let c = c % self.ring.modulus();
        if c == 0 {
            return;
        }
        for (a, &b) in self.data.iter_mut().zip(&rhs.data) {
            if b != 0 {
                *a = self.ring.add(*a, self.ring.mul(b, c));
            }
        }
    }

    /// Entrywise reduction to a smaller power of the same prime.
    pub fn reduce_to(&self, target: BaseRing) -> Matrix {
        let data = self.data.iter().map(|&a| a % target.modulus()).collect();
        Matrix { ring: target, rows: self.rows, cols: self.cols, data }
    }

    /// Reinterprets residues in a larger ring, keeping the representatives.
    pub fn lift_verbatim(&self, target: BaseRing) -> Matrix {
        let data = self.data.iter().map(|&a| a % target.modulus()).collect();
        Matrix { ring: target, rows: self.rows, cols: self.cols, data }
    }

    /// Submatrix on the given row and column index lists.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Matrix {
        Self::from_fn(self.ring, rows.len(), cols.len(), |i, j| self.get(rows[i], cols[j]))
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    pub fn to_rows(&self) -> Vec<Vec<u64>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    /// A square matrix over `Z/p^n` is invertible iff its reduction mod `p` is.
    pub fn is_invertible(&self) -> bool {
        if self.rows != self.cols {
            return false;
        }
        let field = BaseRing::new(self.ring.p(), 1).expect("prime");
        let mut m = self.reduce_to(field);
        let n = self.rows;
        for c in 0..n {
            let Some(piv) = (c..n).find(|&r| m.get(r, c) != 0) else {
                return false;
            };
            m.swap_rows(c, piv);
            let inv = field.inv(m.get(c, c)).expect("unit pivot");
            for r in (c + 1)..n {
                let f = field.mul(m.get(r, c), inv);
                if f == 0 {
                    continue;
                }
                for j in c..n {
                    let v = field.sub(m.get(r, j), field.mul(f, m.get(c, j)));
                    m.data[r * n + j] = v;
                }
            }
        }
        true
    }
}

impl Serialize for Matrix {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_rows().serialize(s)
    }
}
