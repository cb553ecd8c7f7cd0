use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::arith::{inv_mod, legendre, mul_mod, pow_mod, sqrt_mod};

use super::matrix::{dot, FpMatrix};
use super::subspace::Subspace;
use super::LinalgError;

/// A finite-dimensional F_p space with a bilinear form given by its Gram matrix.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BilinearSpace {
    gram: FpMatrix,
    symmetric: bool,
}

impl BilinearSpace {
    pub fn new(gram: FpMatrix) -> Result<Self, LinalgError> {
        if gram.rows() != gram.cols() {
            return Err(LinalgError::DimensionMismatch { expected: gram.rows(), found: gram.cols() });
        }
        let symmetric = gram == gram.transpose();
        Ok(Self { gram, symmetric })
    }

    /// Split (hyperbolic) space of dimension `2d` with Gram `[[0, I], [I, 0]]`.
    pub fn hyperbolic(p: u64, d: usize) -> Self {
        let mut g = FpMatrix::zeros(p, 2 * d, 2 * d);
        for i in 0..d {
            g.set(i, d + i, 1);
            g.set(d + i, i, 1);
        }
        Self { gram: g, symmetric: true }
    }

    /// Orthogonal direct sum, block-diagonal in the given order.
    pub fn orthogonal_sum(p: u64, parts: &[&BilinearSpace]) -> Self {
        let n: usize = parts.iter().map(|b| b.dim()).sum();
        let mut g = FpMatrix::zeros(p, n, n);
        let mut off = 0;
        for b in parts {
            for i in 0..b.dim() {
                for j in 0..b.dim() {
                    g.set(off + i, off + j, b.gram.get(i, j));
                }
            }
            off += b.dim();
        }
        let symmetric = parts.iter().all(|b| b.symmetric);
        Self { gram: g, symmetric }
    }

    pub fn p(&self) -> u64 {
        self.gram.p()
    }

    pub fn dim(&self) -> usize {
        self.gram.rows()
    }

    pub fn gram(&self) -> &FpMatrix {
        &self.gram
    }

    pub fn is_symmetric(&self) -> bool {
        self.symmetric
    }

    pub fn pair(&self, x: &[u64], y: &[u64]) -> u64 {
        self.gram.bilinear(x, y)
    }

    pub fn is_nondegenerate(&self) -> bool {
        self.gram.rank() == self.dim()
    }

    /// Split type: symmetric, nondegenerate, even dimension `2d`, and
    /// `(-1)^d det(gram)` a square in F_p (Witt index `d`).
    pub fn is_split(&self) -> bool {
        if !self.symmetric || self.dim() % 2 == 1 || !self.is_nondegenerate() {
            return false;
        }
        let d = self.dim() / 2;
        let det = determinant(&self.gram);
        let disc = if d % 2 == 0 { det } else { (self.p() - det) % self.p() };
        legendre(disc as i128, self.p()) == 1
    }

    /// Restriction of the form to `u`, as a Gram matrix on `u`'s basis.
    pub fn restrict(&self, u: &Subspace) -> FpMatrix {
        let b = u.basis();
        b.mul(&self.gram).and_then(|m| m.mul(&b.transpose())).expect("compatible shapes")
    }

    pub fn is_isotropic(&self, u: &Subspace) -> bool {
        u.dim() == 0 || self.restrict(u).is_zero()
    }

    /// `{x : <x, u> = 0}`.
    pub fn orth_complement(&self, u: &Subspace) -> Result<Subspace, LinalgError> {
        if u.ambient_dim() != self.dim() {
            return Err(LinalgError::DimensionMismatch { expected: self.dim(), found: u.ambient_dim() });
        }
        if u.dim() == 0 {
            return Ok(Subspace::full(self.p(), self.dim()));
        }
        // x with gram(x, u_i) = 0: (U G^T) x = 0.
        let cond = u.basis().mul(&self.gram.transpose())?;
        let k = cond.kernel();
        if k.rows() == 0 {
            return Ok(Subspace::zero(self.p(), self.dim()));
        }
        Ok(Subspace::span(&k))
    }

    /// Random maximal isotropic subspace of a split space, deterministic in `seed`.
    pub fn random_max_isotropic(&self, seed: u64) -> Result<Subspace, LinalgError> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        self.random_max_isotropic_with(&mut rng)
    }

    /// Greedy extension: repeatedly adjoin an isotropic vector of `U^perp` outside `U`.
    pub fn random_max_isotropic_with<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<Subspace, LinalgError> {
        self.extend_to_max_isotropic_with(&Subspace::zero(self.p(), self.dim()), rng)
    }

    /// Greedy extension of an isotropic `start` to a maximal isotropic subspace.
    pub fn extend_to_max_isotropic_with<R: Rng + ?Sized>(
        &self,
        start: &Subspace,
        rng: &mut R,
    ) -> Result<Subspace, LinalgError> {
        if !self.is_split() {
            return Err(LinalgError::NotSplit);
        }
        if start.ambient_dim() != self.dim() {
            return Err(LinalgError::DimensionMismatch { expected: self.dim(), found: start.ambient_dim() });
        }
        if !self.is_isotropic(start) {
            return Err(LinalgError::NotIsotropic);
        }
        let p = self.p();
        let n = self.dim();
        let target = n / 2;
        let mut u = start.clone();
        while u.dim() < target {
            let w = self.orth_complement(&u)?;
            let v = self
                .random_isotropic_outside(&w, &u, rng)
                .or_else(|| self.scan_isotropic_outside(&w, &u))
                .ok_or(LinalgError::IsotropicSearchFailed)?;
            u = Subspace::span(&u.basis().vstack(&FpMatrix::from_vecs(p, n, &[v])));
        }
        Ok(u)
    }

    fn random_isotropic_outside<R: Rng + ?Sized>(
        &self,
        w: &Subspace,
        u: &Subspace,
        rng: &mut R,
    ) -> Option<Vec<u64>> {
        let p = self.p();
        let wb = w.basis();
        for _ in 0..256 {
            let cx: Vec<u64> = (0..w.dim()).map(|_| rng.gen_range(0..p)).collect();
            let cy: Vec<u64> = (0..w.dim()).map(|_| rng.gen_range(0..p)).collect();
            let x = wb.vec_mul(&cx);
            let y = wb.vec_mul(&cy);
            if let Some(v) = self.isotropic_on_line(&x, &y, rng.gen()) {
                if !u.contains(&v) {
                    return Some(v);
                }
            }
        }
        None
    }

    fn scan_isotropic_outside(&self, w: &Subspace, u: &Subspace) -> Option<Vec<u64>> {
        let vs = w.basis_vectors();
        for i in 0..vs.len() {
            for j in 0..vs.len() {
                for flip in [false, true] {
                    if let Some(v) = self.isotropic_on_line(&vs[i], &vs[j], flip) {
                        if !u.contains(&v) {
                            return Some(v);
                        }
                    }
                }
            }
        }
        None
    }

    /// An isotropic vector of the form `x + t y` (or `y` itself), if one exists.
    fn isotropic_on_line(&self, x: &[u64], y: &[u64], flip: bool) -> Option<Vec<u64>> {
        let p = self.p();
        let qx = self.pair(x, x);
        if qx == 0 && x.iter().any(|&c| c != 0) {
            return Some(x.to_vec());
        }
        let qy = self.pair(y, y);
        let bxy = mul_mod(2, self.pair(x, y), p);
        let t = if qy == 0 {
            if bxy == 0 {
                return None;
            }
            // qx + t bxy = 0
            mul_mod((p - qx) % p, inv_mod(bxy, p)?, p)
        } else {
            let disc = (mul_mod(bxy, bxy, p) + p - mul_mod(4, mul_mod(qy, qx, p), p)) % p;
            let s = sqrt_mod(disc, p)?;
            let s = if flip { (p - s) % p } else { s };
            let num = ((p - bxy) % p + s) % p;
            mul_mod(num, inv_mod(mul_mod(2, qy, p), p)?, p)
        };
        let v: Vec<u64> = x.iter().zip(y).map(|(&a, &b)| (a + mul_mod(t, b, p)) % p).collect();
        if v.iter().all(|&c| c == 0) || self.pair(&v, &v) != 0 {
            return None;
        }
        Some(v)
    }

    pub fn pair_vectors(&self, x: &[u64], y: &[u64]) -> u64 {
        dot(&self.gram.vec_mul(x), y, self.p())
    }
}

/// Determinant over F_p by elimination.
pub fn determinant(m: &FpMatrix) -> u64 {
    assert_eq!(m.rows(), m.cols());
    let p = m.p();
    let n = m.rows();
    let mut a: Vec<Vec<u64>> = m.row_vecs();
    let mut det = 1u64;
    for c in 0..n {
        let Some(piv) = (c..n).find(|&i| a[i][c] != 0) else {
            return 0;
        };
        if piv != c {
            a.swap(piv, c);
            det = (p - det) % p;
        }
        det = mul_mod(det, a[c][c], p);
        let inv = inv_mod(a[c][c], p).expect("nonzero pivot");
        for i in c + 1..n {
            let f = mul_mod(a[i][c], inv, p);
            if f == 0 {
                continue;
            }
            for j in c..n {
                let sub = mul_mod(f, a[c][j], p);
                a[i][j] = (a[i][j] + p - sub) % p;
            }
        }
    }
    det
}

/// Free-standing form of [`BilinearSpace::orth_complement`].
pub fn orth_complement(b: &BilinearSpace, u: &Subspace) -> Result<Subspace, LinalgError> {
    b.orth_complement(u)
}

/// Free-standing form of [`BilinearSpace::random_max_isotropic`].
pub fn random_max_isotropic(b: &BilinearSpace, seed: u64) -> Result<Subspace, LinalgError> {
    b.random_max_isotropic(seed)
}

// Used by tests that count square classes.
#[allow(dead_code)]
pub(crate) fn is_square(a: u64, p: u64) -> bool {
    a % p == 0 || pow_mod(a, (p - 1) / 2, p) == 1
}

#[cfg(test)]
mod tests {
    use super::*;

    fn all_lines(p: u64) -> Vec<Subspace> {
        let mut out = vec![Subspace::from_vectors(p, 2, &[vec![0, 1]])];
        for a in 0..p {
            out.push(Subspace::from_vectors(p, 2, &[vec![1, a]]));
        }
        out
    }

    #[test]
    fn complement_of_zero_is_everything() {
        let b = BilinearSpace::hyperbolic(5, 2);
        let z = Subspace::zero(5, 4);
        assert_eq!(b.orth_complement(&z).unwrap(), Subspace::full(5, 4));
    }

    #[test]
    fn lagrangian_line_is_self_perpendicular() {
        let b = BilinearSpace::new(FpMatrix::from_rows(3, 2, &[[0, 1], [1, 0]])).unwrap();
        let e1 = Subspace::from_vectors(3, 2, &[vec![1, 0]]);
        assert_eq!(b.orth_complement(&e1).unwrap(), e1);
    }

    #[test]
    fn hyperbolic_plane_over_f3_has_two_isotropic_lines() {
        let b = BilinearSpace::hyperbolic(3, 1);
        let lines = all_lines(3);
        assert_eq!(lines.len(), 4);
        let iso: Vec<_> = lines.iter().filter(|l| b.is_isotropic(l)).cloned().collect();
        assert_eq!(iso.len(), 2);
        for seed in 0..20 {
            let u = b.random_max_isotropic(seed).unwrap();
            assert!(iso.contains(&u));
        }
    }

    #[test]
    fn max_isotropic_in_dim4() {
        let b = BilinearSpace::hyperbolic(3, 2);
        let u = b.random_max_isotropic(11).unwrap();
        assert_eq!(u.dim(), 2);
        assert!(b.restrict(&u).is_zero());
        assert_eq!(b.orth_complement(&u).unwrap(), u);
    }

    #[test]
    fn seeded_generation_is_deterministic() {
        let b = BilinearSpace::hyperbolic(7, 3);
        assert_eq!(b.random_max_isotropic(42).unwrap(), b.random_max_isotropic(42).unwrap());
    }

    #[test]
    fn non_split_space_is_rejected() {
        // x^2 + y^2 over F_3 is anisotropic: -1 is not a square mod 3.
        let b = BilinearSpace::new(FpMatrix::identity(3, 2)).unwrap();
        assert!(!b.is_split());
        assert!(matches!(b.random_max_isotropic(0), Err(LinalgError::NotSplit)));
        // Over F_5, -1 is a square so x^2 + y^2 is split.
        let b5 = BilinearSpace::new(FpMatrix::identity(5, 2)).unwrap();
        assert!(b5.is_split());
        let u = b5.random_max_isotropic(3).unwrap();
        assert!(b5.is_isotropic(&u));
    }

    #[test]
    fn determinant_small() {
        let m = FpMatrix::from_rows(7, 2, &[[1, 2], [3, 4]]);
        assert_eq!(determinant(&m), 5); // -2 mod 7
    }
}
