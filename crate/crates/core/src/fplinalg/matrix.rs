use std::fmt;

use serde::{Deserialize, Serialize};

use crate::arith::{inv_mod, modp};

use super::LinalgError;

/// Dense matrix over the prime field F_p, row-major, entries in `[0, p)`.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FpMatrix {
    p: u64,
    rows: usize,
    cols: usize,
    data: Vec<u64>,
}

impl FpMatrix {
    pub fn zeros(p: u64, rows: usize, cols: usize) -> Self {
        Self { p, rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(p: u64, n: usize) -> Self {
        let mut m = Self::zeros(p, n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    /// Builds a matrix from rows of signed integers, reducing every entry mod p.
    pub fn from_rows<R: AsRef<[i64]>>(p: u64, cols: usize, rows: &[R]) -> Self {
        let mut m = Self::zeros(p, rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            let r = r.as_ref();
            assert_eq!(r.len(), cols, "ragged row");
            for (j, &x) in r.iter().enumerate() {
                m.set(i, j, modp(x as i128, p));
            }
        }
        m
    }

    pub fn from_vecs(p: u64, cols: usize, rows: &[Vec<u64>]) -> Self {
        let mut m = Self::zeros(p, rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), cols, "ragged row");
            for (j, &x) in r.iter().enumerate() {
                m.set(i, j, x % p);
            }
        }
        m
    }

    pub fn p(&self) -> u64 {
        self.p
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
        self.data[i * self.cols + j] = x % self.p;
    }

    pub fn row(&self, i: usize) -> &[u64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<u64>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.p, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.get(i, j);
            }
        }
        t
    }

    pub fn mul(&self, other: &FpMatrix) -> Result<FpMatrix, LinalgError> {
        if self.p != other.p {
            return Err(LinalgError::ModulusMismatch(self.p, other.p));
        }
        if self.cols != other.rows {
            return Err(LinalgError::DimensionMismatch { expected: self.cols, found: other.rows });
        }
        let p = self.p as u128;
        let mut out = Self::zeros(self.p, self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = 0u128;
                for k in 0..self.cols {
                    acc += self.get(i, k) as u128 * other.get(k, j) as u128;
                    if acc >= 1 << 120 {
                        acc %= p;
                    }
                }
                out.data[i * other.cols + j] = (acc % p) as u64;
            }
        }
        Ok(out)
    }

    /// Stacks the rows of `self` on top of the rows of `other`.
    pub fn vstack(&self, other: &FpMatrix) -> FpMatrix {
        assert_eq!(self.cols, other.cols);
        assert_eq!(self.p, other.p);
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        FpMatrix { p: self.p, rows: self.rows + other.rows, cols: self.cols, data }
    }

    pub fn hstack(&self, other: &FpMatrix) -> FpMatrix {
        assert_eq!(self.rows, other.rows);
        let mut out = Self::zeros(self.p, self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.get(i, j));
            }
            for j in 0..other.cols {
                out.set(i, self.cols + j, other.get(i, j));
            }
        }
        out
    }

    pub fn select_cols(&self, range: std::ops::Range<usize>) -> FpMatrix {
        let mut out = Self::zeros(self.p, self.rows, range.len());
        for i in 0..self.rows {
            for (jj, j) in range.clone().enumerate() {
                out.set(i, jj, self.get(i, j));
            }
        }
        out
    }

    pub fn select_rows(&self, idx: &[usize]) -> FpMatrix {
        let mut data = Vec::with_capacity(idx.len() * self.cols);
        for &i in idx {
            data.extend_from_slice(self.row(i));
        }
        FpMatrix { p: self.p, rows: idx.len(), cols: self.cols, data }
    }

    /// Reduced row-echelon form in place; returns pivot columns.
    fn rref_in_place(&mut self) -> Vec<usize> {
        let p = self.p;
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(piv) = (r..self.rows).find(|&i| self.get(i, c) != 0) else {
                continue;
            };
            if piv != r {
                for j in 0..self.cols {
                    self.data.swap(piv * self.cols + j, r * self.cols + j);
                }
            }
            let inv = inv_mod(self.get(r, c), p).expect("nonzero element of a prime field");
            for j in c..self.cols {
                let x = self.get(r, j);
                self.data[r * self.cols + j] = (x as u128 * inv as u128 % p as u128) as u64;
            }
            for i in 0..self.rows {
                let f = self.get(i, c);
                if i == r || f == 0 {
                    continue;
                }
                for j in c..self.cols {
                    let sub = f as u128 * self.get(r, j) as u128 % p as u128;
                    let x = self.get(i, j) as u128;
                    self.data[i * self.cols + j] = ((x + p as u128 - sub) % p as u128) as u64;
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    /// Canonical reduced row-echelon form (zero rows kept at the bottom) and rank.
    pub fn rref_rank(&self) -> (FpMatrix, usize) {
        let mut m = self.clone();
        let piv = m.rref_in_place();
        (m, piv.len())
    }

    pub fn rank(&self) -> usize {
        self.rref_rank().1
    }

    /// RREF with zero rows dropped, plus pivot columns.
    pub fn row_basis(&self) -> (FpMatrix, Vec<usize>) {
        let mut m = self.clone();
        let piv = m.rref_in_place();
        let keep: Vec<usize> = (0..piv.len()).collect();
        (m.select_rows(&keep), piv)
    }

    /// Basis (as rows) of the right null space `{x : self * x = 0}`.
    pub fn kernel(&self) -> FpMatrix {
        let (r, piv) = self.row_basis();
        let p = self.p;
        let free: Vec<usize> = (0..self.cols).filter(|c| !piv.contains(c)).collect();
        let mut out = Self::zeros(p, free.len(), self.cols);
        for (k, &f) in free.iter().enumerate() {
            out.set(k, f, 1);
            for (i, &pc) in piv.iter().enumerate() {
                let x = r.get(i, f);
                out.set(k, pc, (p - x) % p);
            }
        }
        out
    }

    /// Basis (as rows) of the left null space `{y : y * self = 0}`.
    pub fn left_kernel(&self) -> FpMatrix {
        self.transpose().kernel()
    }

    /// Solves `c * self = v` for a row vector `c`, if a solution exists.
    pub fn solve_left(&self, v: &[u64]) -> Option<Vec<u64>> {
        assert_eq!(v.len(), self.cols);
        // Transposed system self^T c^T = v^T via RREF of the augmented matrix.
        let p = self.p;
        let mut aug = Self::zeros(p, self.cols, self.rows + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug.set(j, i, self.get(i, j));
            }
        }
        for (j, &x) in v.iter().enumerate() {
            aug.set(j, self.rows, x);
        }
        let piv = aug.rref_in_place();
        if piv.last() == Some(&self.rows) {
            return None;
        }
        let mut c = vec![0u64; self.rows];
        for (i, &pc) in piv.iter().enumerate() {
            c[pc] = aug.get(i, self.rows);
        }
        Some(c)
    }

    /// Row vector times matrix.
    pub fn vec_mul(&self, v: &[u64]) -> Vec<u64> {
        assert_eq!(v.len(), self.rows);
        let p = self.p as u128;
        (0..self.cols)
            .map(|j| {
                let mut acc = 0u128;
                for (i, &x) in v.iter().enumerate() {
                    acc = (acc + x as u128 * self.get(i, j) as u128) % p;
                }
                acc as u64
            })
            .collect()
    }

    /// Bilinear evaluation `x^T self y`.
    pub fn bilinear(&self, x: &[u64], y: &[u64]) -> u64 {
        let xs = self.vec_mul(x);
        dot(&xs, y, self.p)
    }
}

pub(crate) fn dot(x: &[u64], y: &[u64], p: u64) -> u64 {
    let mut acc = 0u128;
    for (&a, &b) in x.iter().zip(y) {
        acc = (acc + a as u128 * b as u128) % p as u128;
    }
    acc as u64
}

impl fmt::Debug for FpMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "FpMatrix(p={}, {}x{})", self.p, self.rows, self.cols)?;
        for i in 0..self.rows {
            writeln!(f, "  {:?}", self.row(i))?;
        }
        Ok(())
    }
}

/// Free-standing form of [`FpMatrix::rref_rank`].
pub fn rref_rank(m: &FpMatrix) -> (FpMatrix, usize) {
    m.rref_rank()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_matrix_has_rank_zero() {
        assert_eq!(FpMatrix::zeros(3, 3, 3).rank(), 0);
    }

    #[test]
    fn identity_has_full_rank() {
        let (r, k) = FpMatrix::identity(5, 4).rref_rank();
        assert_eq!(k, 4);
        assert_eq!(r, FpMatrix::identity(5, 4));
    }

    #[test]
    fn dependent_rows_over_f5() {
        // Row 2 is twice row 1, so by hand the RREF is [[1,2],[0,0]].
        let m = FpMatrix::from_rows(5, 2, &[[1, 2], [2, 4]]);
        let (r, k) = m.rref_rank();
        assert_eq!(k, 1);
        assert_eq!(r, FpMatrix::from_rows(5, 2, &[[1, 2], [0, 0]]));
    }

    #[test]
    fn kernel_is_annihilated() {
        let m = FpMatrix::from_rows(7, 4, &[[1, 2, 3, 4], [2, 4, 6, 1], [0, 1, 0, 1]]);
        let k = m.kernel();
        assert_eq!(k.rows() + m.rank(), 4);
        assert!(m.mul(&k.transpose()).unwrap().is_zero());
    }

    #[test]
    fn solve_left_finds_combination() {
        let m = FpMatrix::from_rows(11, 3, &[[1, 0, 2], [0, 1, 5]]);
        let v = m.vec_mul(&[3, 7]);
        assert_eq!(m.solve_left(&v), Some(vec![3, 7]));
        assert_eq!(m.solve_left(&[0, 0, 1]), None);
    }
}
