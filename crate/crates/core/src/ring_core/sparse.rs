use super::{BaseRing, Matrix};

/// Column-sparse matrix: column `j` lists the nonzero entries `(row, value)` of
/// the image of basis vector `j`, sorted by row. Used for the operators on
/// cyclic bar slices, which have a handful of entries per column.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparseMatrix {
    ring: BaseRing,
    rows: usize,
    columns: Vec<Vec<(usize, u64)>>,
}

fn merge_into(ring: &BaseRing, acc: &mut Vec<(usize, u64)>, scratch: &mut [u64], touched: &mut Vec<usize>) {
    touched.sort_unstable();
    touched.dedup();
    acc.clear();
    for &r in touched.iter() {
        let v = scratch[r] % ring.modulus();
        if v != 0 {
            acc.push((r, v));
        }
        scratch[r] = 0;
    }
    touched.clear();
}

impl SparseMatrix {
    pub fn zeros(ring: BaseRing, rows: usize, cols: usize) -> Self {
        SparseMatrix { ring, rows, columns: vec![Vec::new(); cols] }
    }

    pub fn identity(ring: BaseRing, size: usize) -> Self {
        SparseMatrix { ring, rows: size, columns: (0..size).map(|i| vec![(i, ring.one())]).collect() }
    }

    /// Builds from unsorted column entries; duplicates are summed and zeros dropped.
    pub fn from_columns(ring: BaseRing, rows: usize, columns: Vec<Vec<(usize, u64)>>) -> Self {
        let mut scratch = vec![0u64; rows];
        let mut touched = Vec::new();
        let columns = columns
            .into_iter()
            .map(|col| {
                for (r, v) in col {
                    assert!(r < rows, "row index out of range");
                    scratch[r] = ring.add(scratch[r], v % ring.modulus());
                    touched.push(r);
                }
                let mut out = Vec::new();
                merge_into(&ring, &mut out, &mut scratch, &mut touched);
                out
            })
            .collect();
        SparseMatrix { ring, rows, columns }
    }

    pub fn from_dense(m: &Matrix) -> Self {
        let columns = (0..m.cols())
            .map(|j| (0..m.rows()).filter_map(|i| Some((i, m.get(i, j))).filter(|e| e.1 != 0)).collect())
            .collect();
        SparseMatrix { ring: m.ring(), rows: m.rows(), columns }
    }

    pub fn ring(&self) -> BaseRing {
        self.ring
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.columns.len()
    }

    pub fn column(&self, j: usize) -> &[(usize, u64)] {
        &self.columns[j]
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.columns[j].binary_search_by_key(&i, |e| e.0).map_or(0, |k| self.columns[j][k].1)
    }

    pub fn nnz(&self) -> usize {
        self.columns.iter().map(Vec::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.columns.iter().all(Vec::is_empty)
    }

    /// First nonzero entry `(row, col, value)` scanning columns in order.
    pub fn first_nonzero(&self) -> Option<(usize, usize, u64)> {
        self.columns.iter().enumerate().find_map(|(j, c)| c.first().map(|&(i, v)| (i, j, v)))
    }

    /// `self * rhs`.
    pub fn mul(&self, rhs: &SparseMatrix) -> SparseMatrix {
        assert_eq!(self.cols(), rhs.rows, "sparse shape mismatch");
        let ring = self.ring;
        let mut scratch = vec![0u64; self.rows];
        let mut touched = Vec::new();
        let columns = rhs
            .columns
            .iter()
            .map(|col| {
                for &(k, b) in col {
                    for &(i, a) in &self.columns[k] {
                        scratch[i] = ring.add(scratch[i], ring.mul(a, b));
                        touched.push(i);
                    }
                }
                let mut out = Vec::new();
                merge_into(&ring, &mut out, &mut scratch, &mut touched);
                out
            })
            .collect();
        SparseMatrix { ring, rows: self.rows, columns }
    }

    /// `a * self + c * rhs`, entrywise.
    pub fn lincomb(&self, a: u64, rhs: &SparseMatrix, c: u64) -> SparseMatrix {
        assert_eq!((self.rows, self.cols()), (rhs.rows, rhs.cols()), "sparse shape mismatch");
        let ring = self.ring;
        let mut scratch = vec![0u64; self.rows];
        let mut touched = Vec::new();
        let columns = self
            .columns
            .iter()
            .zip(&rhs.columns)
            .map(|(x, y)| {
                for &(i, v) in x {
                    scratch[i] = ring.add(scratch[i], ring.mul(v, a));
                    touched.push(i);
                }
                for &(i, v) in y {
                    scratch[i] = ring.add(scratch[i], ring.mul(v, c));
                    touched.push(i);
                }
                let mut out = Vec::new();
                merge_into(&ring, &mut out, &mut scratch, &mut touched);
                out
            })
            .collect();
        SparseMatrix { ring, rows: self.rows, columns }
    }

    pub fn add(&self, rhs: &SparseMatrix) -> SparseMatrix {
        self.lincomb(1, rhs, 1)
    }

    pub fn sub(&self, rhs: &SparseMatrix) -> SparseMatrix {
        self.lincomb(1, rhs, self.ring.neg(1 % self.ring.modulus()))
    }

    pub fn scale(&self, c: u64) -> SparseMatrix {
        let zero = SparseMatrix::zeros(self.ring, self.rows, self.cols());
        self.lincomb(c, &zero, 0)
    }

    /// Graded commutator `self * rhs - (-1)^{|self||rhs|} rhs * self` for
    /// operators of the given parities.
    pub fn graded_commutator(&self, odd: bool, rhs: &SparseMatrix, rhs_odd: bool) -> SparseMatrix {
        let s = self.ring.neg(self.ring.sign(odd && rhs_odd));
        self.mul(rhs).lincomb(1, &rhs.mul(self), s)
    }

    pub fn reduce_to(&self, target: BaseRing) -> SparseMatrix {
        let columns = self.columns.iter().map(|c| c.iter().map(|&(i, v)| (i, v)).collect()).collect();
        SparseMatrix::from_columns(target, self.rows, columns)
    }

    /// Same residues read over a larger power of `p`.
    pub fn lift_verbatim(&self, target: BaseRing) -> SparseMatrix {
        SparseMatrix { ring: target, rows: self.rows, columns: self.columns.clone() }
    }

    pub fn to_dense(&self) -> Matrix {
        let mut m = Matrix::zeros(self.ring, self.rows, self.cols());
        for (j, c) in self.columns.iter().enumerate() {
            for &(i, v) in c {
                m.set(i, j, v);
            }
        }
        m
    }

    /// Dense submatrix on the given rows and columns.
    pub fn block(&self, rows: &[usize], cols: &[usize]) -> Matrix {
        let mut pos = vec![usize::MAX; self.rows];
        for (k, &r) in rows.iter().enumerate() {
            pos[r] = k;
        }
        let mut m = Matrix::zeros(self.ring, rows.len(), cols.len());
        for (jj, &j) in cols.iter().enumerate() {
            for &(i, v) in &self.columns[j] {
                if pos[i] != usize::MAX {
                    m.set(pos[i], jj, v);
                }
            }
        }
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matches_dense_arithmetic() {
        let ring = BaseRing::new(5, 2).unwrap();
        let a = Matrix::from_rows(ring, &[vec![1, 0, 5], vec![0, 7, 0]]);
        let b = Matrix::from_rows(ring, &[vec![2, 0], vec![0, 0], vec![24, 3]]);
        let (sa, sb) = (SparseMatrix::from_dense(&a), SparseMatrix::from_dense(&b));
        assert_eq!(sa.mul(&sb).to_dense(), a.dot(&b));
        assert_eq!(sa.add(&sa).to_dense(), a.add(&a));
        assert!(sa.sub(&sa).is_zero());
        assert_eq!(sa.get(0, 2), 5);
        assert_eq!(sa.block(&[1], &[1, 2]), Matrix::from_rows(ring, &[vec![7, 0]]));
    }

    #[test]
    fn commutators() {
        let ring = BaseRing::new(3, 1).unwrap();
        let a = SparseMatrix::from_dense(&Matrix::from_rows(ring, &[vec![0, 1], vec![0, 0]]));
        assert!(a.graded_commutator(false, &a, false).is_zero());
        // [a, a] for odd a is 2 a^2 = 0 here since a^2 = 0
        assert!(a.graded_commutator(true, &a, true).is_zero());
        let id = SparseMatrix::identity(ring, 2);
        assert_eq!(a.graded_commutator(true, &id, true), a.scale(2));
    }
}
