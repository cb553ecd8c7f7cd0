use serde::{Deserialize, Serialize};

use super::matrix::FpMatrix;
use super::LinalgError;

/// A subspace of F_p^n stored as the RREF of a basis, so equal subspaces compare
/// equal bitwise.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Subspace {
    ambient_dim: usize,
    basis: FpMatrix,
}

impl Subspace {
    pub fn zero(p: u64, ambient_dim: usize) -> Self {
        Self { ambient_dim, basis: FpMatrix::zeros(p, 0, ambient_dim) }
    }

    pub fn full(p: u64, ambient_dim: usize) -> Self {
        Self { ambient_dim, basis: FpMatrix::identity(p, ambient_dim) }
    }

    /// Span of the rows of `m`.
    pub fn span(m: &FpMatrix) -> Self {
        let (basis, _) = m.row_basis();
        Self { ambient_dim: m.cols(), basis }
    }

    pub fn from_vectors(p: u64, ambient_dim: usize, vs: &[Vec<u64>]) -> Self {
        Self::span(&FpMatrix::from_vecs(p, ambient_dim, vs))
    }

    pub fn p(&self) -> u64 {
        self.basis.p()
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn basis(&self) -> &FpMatrix {
        &self.basis
    }

    pub fn basis_vectors(&self) -> Vec<Vec<u64>> {
        self.basis.row_vecs()
    }

    pub fn contains(&self, v: &[u64]) -> bool {
        self.basis.solve_left(v).is_some()
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        self.ambient_dim == other.ambient_dim
            && (0..self.dim()).all(|i| other.contains(self.basis.row(i)))
    }

    fn check_compatible(&self, other: &Subspace) -> Result<(), LinalgError> {
        if self.p() != other.p() {
            return Err(LinalgError::ModulusMismatch(self.p(), other.p()));
        }
        if self.ambient_dim != other.ambient_dim {
            return Err(LinalgError::DimensionMismatch {
                expected: self.ambient_dim,
                found: other.ambient_dim,
            });
        }
        Ok(())
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace, LinalgError> {
        self.check_compatible(other)?;
        Ok(Self::span(&self.basis.vstack(&other.basis)))
    }

    /// `u ∩ v` from the left kernel of the stacked bases: `a U = -b V` gives `a U` in both.
    pub fn intersect(&self, other: &Subspace) -> Result<Subspace, LinalgError> {
        self.check_compatible(other)?;
        if self.dim() == 0 || other.dim() == 0 {
            return Ok(Self::zero(self.p(), self.ambient_dim));
        }
        let stacked = self.basis.vstack(&other.basis);
        let lk = stacked.left_kernel();
        let coeffs = lk.select_cols(0..self.dim());
        let meet = coeffs.mul(&self.basis)?;
        Ok(Self::span(&meet))
    }

    /// Sum and intersection together.
    pub fn sum_intersect(&self, other: &Subspace) -> Result<(Subspace, Subspace), LinalgError> {
        Ok((self.sum(other)?, self.intersect(other)?))
    }

    /// Annihilator under the standard dot product.
    pub fn annihilator(&self) -> Subspace {
        if self.dim() == 0 {
            return Self::full(self.p(), self.ambient_dim);
        }
        Self::span(&self.basis.kernel())
    }

    /// Extends a basis of `self` (a subspace of `sup`) to a basis of `sup`,
    /// returning only the added vectors.
    pub fn complement_in(&self, sup: &Subspace) -> Vec<Vec<u64>> {
        let mut current = self.clone();
        let mut added = Vec::new();
        for v in sup.basis_vectors() {
            if !current.contains(&v) {
                current = Self::span(&current.basis.vstack(&FpMatrix::from_vecs(
                    self.p(),
                    self.ambient_dim,
                    std::slice::from_ref(&v),
                )));
                added.push(v);
            }
        }
        added
    }

    /// Image under a linear map given by a matrix acting on row vectors.
    pub fn image(&self, map: &FpMatrix) -> Result<Subspace, LinalgError> {
        if self.dim() == 0 {
            return Ok(Self::zero(self.p(), map.cols()));
        }
        Ok(Self::span(&self.basis.mul(map)?))
    }

    /// Preimage `{x : x * map ∈ self}` for `map : F_p^k -> F_p^ambient`.
    pub fn preimage(&self, map: &FpMatrix) -> Result<Subspace, LinalgError> {
        if map.cols() != self.ambient_dim {
            return Err(LinalgError::DimensionMismatch {
                expected: self.ambient_dim,
                found: map.cols(),
            });
        }
        let ann = self.annihilator();
        if ann.dim() == 0 {
            return Ok(Self::full(self.p(), map.rows()));
        }
        let cond = map.mul(&ann.basis.transpose())?;
        let k = cond.left_kernel();
        if k.rows() == 0 {
            return Ok(Self::zero(self.p(), map.rows()));
        }
        Ok(Self::span(&k))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn coord(p: u64, n: usize, idx: &[usize]) -> Subspace {
        let vs: Vec<Vec<u64>> = idx
            .iter()
            .map(|&i| {
                let mut v = vec![0; n];
                v[i] = 1;
                v
            })
            .collect();
        Subspace::from_vectors(p, n, &vs)
    }

    #[test]
    fn idempotent_sum_and_meet() {
        let u = Subspace::from_vectors(5, 4, &[vec![1, 2, 0, 3], vec![0, 1, 1, 1]]);
        let (s, m) = u.sum_intersect(&u).unwrap();
        assert_eq!(s, u);
        assert_eq!(m, u);
    }

    #[test]
    fn complementary_coordinate_planes() {
        let u = coord(3, 4, &[0, 1]);
        let v = coord(3, 4, &[2, 3]);
        let (s, m) = u.sum_intersect(&v).unwrap();
        assert_eq!(s, Subspace::full(3, 4));
        assert_eq!(m.dim(), 0);
    }

    #[test]
    fn ambient_mismatch_is_an_error() {
        let u = Subspace::full(3, 2);
        let v = Subspace::full(3, 3);
        assert!(matches!(u.sum(&v), Err(LinalgError::DimensionMismatch { .. })));
    }

    #[test]
    fn preimage_of_coordinate_plane() {
        // map: F_3^2 -> F_3^3, rows e1 -> (1,1,0), e2 -> (0,0,1)
        let map = FpMatrix::from_rows(3, 3, &[[1, 1, 0], [0, 0, 1]]);
        let target = coord(3, 3, &[0, 1]);
        let pre = target.preimage(&map).unwrap();
        assert_eq!(pre, coord(3, 2, &[0]));
    }

    #[test]
    fn rref_gives_canonical_equality() {
        let a = Subspace::from_vectors(7, 3, &[vec![1, 2, 3], vec![4, 5, 6]]);
        let b = Subspace::from_vectors(7, 3, &[vec![5, 7, 9], vec![4, 5, 6]]);
        assert_eq!(a, b);
    }
}
