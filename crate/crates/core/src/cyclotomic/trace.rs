use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

use super::intmat::{det_bareiss, inverse_mod, IntMatrix};
use super::ring::{CycElement, CycRing};
use super::CycError;

/// Which power of π scales the trace form.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DifferentConvention {
    /// `Tr(d^{-1} r s^ι)` with `d = π^s`: the perfect pairing.
    InverseD,
    /// `Tr(d r s^ι)`; kept only to show that it is not perfect.
    D,
}

/// The trace pairing `t(r, s) = Tr(d^{-1} r s^ι)` on `Z[ζ]`, computed exactly as
/// `Tr(p^k d^{-1} · r s^ι) / p^k` with `p^k d^{-1}` an integral element.
#[derive(Clone, Debug)]
pub struct TracePairing {
    ring: CycRing,
    k: u32,
    scaled: CycElement,
    pk: BigInt,
    gram: IntMatrix,
}

impl TracePairing {
    pub fn new(ring: &CycRing) -> Self {
        Self::with_convention(ring, DifferentConvention::InverseD)
    }

    pub fn with_convention(ring: &CycRing, conv: DifferentConvention) -> Self {
        let ex = ring.exact();
        let s = ex.different_exponent() as i64;
        let (k, scaled) = match conv {
            DifferentConvention::InverseD => ex.scaled_pi_power(-s),
            DifferentConvention::D => ex.scaled_pi_power(s),
        };
        let pk = BigInt::from(ex.p()).pow(k);
        let mut tp = Self { ring: ring.clone(), k, scaled, pk, gram: Vec::new() };
        let phi = ex.degree();
        tp.gram = (0..phi)
            .map(|i| {
                (0..phi)
                    .map(|j| tp.exact_value(&ex.zeta_pow(i as i64), &ex.zeta_pow(j as i64)))
                    .collect()
            })
            .collect();
        tp
    }

    pub fn ring(&self) -> &CycRing {
        &self.ring
    }

    /// `k` with `p^k d^{-1}` integral.
    pub fn denominator_exponent(&self) -> u32 {
        self.k
    }

    /// Exact integer value (inputs read as exact lifts).
    pub fn exact_value(&self, r: &CycElement, s: &CycElement) -> BigInt {
        let ex = self.ring.exact();
        let prod = ex.mul(&ex.mul(&self.scaled, &ex.coerce(r)), &ex.iota(&ex.coerce(s)));
        let (q, rem) = ex.trace(&prod).div_rem(&self.pk);
        assert!(rem.is_zero(), "trace of the inverse different is integral");
        q
    }

    /// `t(r, s)`, reduced mod `p^m` when the ring is truncated.
    pub fn value(&self, r: &CycElement, s: &CycElement) -> BigInt {
        let v = self.exact_value(r, s);
        match self.ring.modulus() {
            Some(m) => v.mod_floor(m),
            None => v,
        }
    }

    /// `τ(r) = t(1, r)`.
    pub fn tau(&self, r: &CycElement) -> BigInt {
        self.value(&self.ring.one(), r)
    }

    /// `-Tr(d^{-1} r)`, computed without the involution.
    pub fn minus_trace_dinv(&self, r: &CycElement) -> BigInt {
        let ex = self.ring.exact();
        let prod = ex.mul(&self.scaled, &ex.coerce(r));
        let (q, rem) = ex.trace(&prod).div_rem(&self.pk);
        assert!(rem.is_zero());
        let v = -q;
        match self.ring.modulus() {
            Some(m) => v.mod_floor(m),
            None => v,
        }
    }

    /// Gram matrix `t(ζ^i, ζ^j)` on the power basis, exact.
    pub fn gram(&self) -> &IntMatrix {
        &self.gram
    }

    pub fn gram_det(&self) -> BigInt {
        det_bareiss(&self.gram)
    }

    pub fn is_perfect(&self) -> bool {
        let p = BigInt::from(self.ring.p());
        !self.gram_det().mod_floor(&p).is_zero()
    }

    /// Coefficients (power basis) of the dual basis `ν_j^*` with
    /// `t(ζ^i, ν_j^*) = δ_ij`, modulo `p^m`.
    pub fn dual_basis(&self) -> Result<Vec<CycElement>, CycError> {
        let m = self.ring.modulus().ok_or(CycError::PrecisionRequired)?;
        // ν_j^* = Σ_k X_kj ζ^k with G X = I.
        let x = inverse_mod(&self.gram, m).ok_or(CycError::NotPerfect)?;
        let phi = self.ring.degree();
        Ok((0..phi)
            .map(|j| self.ring.from_coeffs((0..phi).map(|k| x[k][j].clone()).collect()))
            .collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::{One, Signed};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn gram_p3_n1_by_hand() {
        // d = π, p d^{-1} = π u^{-1} with π^2 = -3, so d^{-1} = -π/3.
        // t(1,1) = Tr(-π/3) = 0, and π ζ^2 = 1 - ζ gives
        // t(1,ζ) = Tr(-π ζ^2/3) = Tr((ζ - 1)/3) = (-1 - 2)/3 = -1.
        let r = CycRing::new(3, 1).unwrap().with_precision(2);
        let t = TracePairing::new(&r);
        assert_eq!(t.gram()[0][0], BigInt::zero());
        assert_eq!(t.gram()[0][1], BigInt::from(-1));
        assert_eq!(t.gram()[1][0], BigInt::from(1));
        assert!(t.gram_det().abs().is_one());
    }

    #[test]
    fn perfect_and_skew_for_configured_rings() {
        for (p, n, m) in [(3, 1, 3), (3, 2, 2), (5, 1, 2), (7, 1, 2)] {
            let r = CycRing::new(p, n).unwrap().with_precision(m);
            let t = TracePairing::new(&r);
            assert!(t.gram_det().abs().is_one(), "({p},{n})");
            let g = t.gram();
            for i in 0..g.len() {
                for j in 0..g.len() {
                    assert_eq!(g[i][j], -&g[j][i]);
                }
            }
        }
    }

    #[test]
    fn the_other_normalization_is_not_perfect() {
        for (p, n) in [(3, 1), (3, 2), (5, 1)] {
            let r = CycRing::new(p, n).unwrap();
            let t = TracePairing::with_convention(&r, DifferentConvention::D);
            let s = r.different_exponent() as u32;
            assert_eq!(t.gram_det().abs(), BigInt::from(p).pow(2 * s));
            assert!(!t.is_perfect());
        }
    }

    #[test]
    fn tau_matches_minus_trace() {
        let r = CycRing::new(5, 1).unwrap().with_precision(2);
        let t = TracePairing::new(&r);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let x = r.random(&mut rng, 0);
            assert_eq!(t.tau(&x), t.minus_trace_dinv(&x));
            assert!(t.value(&x, &x).is_zero());
        }
    }

    #[test]
    fn dual_basis_is_dual() {
        let r = CycRing::new(3, 2).unwrap().with_precision(2);
        let t = TracePairing::new(&r);
        let dual = t.dual_basis().unwrap();
        for i in 0..r.degree() {
            for (j, nu) in dual.iter().enumerate() {
                let v = t.value(&r.zeta_pow(i as i64), nu);
                assert_eq!(v, BigInt::from(u8::from(i == j)));
            }
        }
    }
}
