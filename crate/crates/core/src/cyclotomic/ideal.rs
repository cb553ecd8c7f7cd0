use rand::Rng;

use super::module::{FiniteCycModule, Involution, SemilinearPairing};
use super::ring::{CycElement, CycRing};
use super::CycError;

/// `f(α, β) = π^{-2q} α β^ι` on the ideal `𝓘 = π^q R`, `q = p^{n-1}`.
#[derive(Clone, Debug)]
pub struct IdealPairing {
    ring: CycRing,
    q: usize,
}

pub fn ideal_pairing(ring: &CycRing) -> IdealPairing {
    IdealPairing { ring: ring.exact(), q: ring.ramification_step() }
}

impl IdealPairing {
    pub fn exponent(&self) -> usize {
        self.q
    }

    /// `π^q`, generating `𝓘`.
    pub fn generator(&self) -> CycElement {
        self.ring.pow(&self.ring.pi(), self.q as u64)
    }

    pub fn contains(&self, a: &CycElement) -> bool {
        self.ring.valuation(a).map_or(true, |v| v >= self.q)
    }

    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R, bound: i64) -> CycElement {
        self.ring.mul(&self.generator(), &self.ring.random(rng, bound))
    }

    /// Exact value in `R`; fails if an argument is outside `𝓘`.
    pub fn eval(&self, a: &CycElement, b: &CycElement) -> Result<CycElement, CycError> {
        if !self.contains(a) || !self.contains(b) {
            return Err(CycError::NotDivisible);
        }
        let mut x = self.ring.mul(&self.ring.coerce(a), &self.ring.iota(&self.ring.coerce(b)));
        for _ in 0..2 * self.q {
            x = self.ring.div_pi_exact(&x)?;
        }
        Ok(x)
    }

    /// `f` on `𝓘/p^m 𝓘`, a free rank-one module on `π^q`.
    pub fn truncated(&self, m: u32) -> Result<SemilinearPairing, CycError> {
        let rm = self.ring.with_precision(m);
        let w = FiniteCycModule::free(&rm, 1, m)?;
        let g = self.generator();
        let v = rm.coerce(&self.eval(&g, &g)?);
        SemilinearPairing::new(w, vec![vec![v]])
    }
}

/// `f ⊗ e` on `𝓘/p^m ⊗ T`, `T` free of rank two with the standard alternating
/// form `e`. Returns the pairing on generators `π^q ⊗ t_i` and the involution
/// `α ⊗ t ↦ α^ι ⊗ t`.
pub fn tensor_model(ring: &CycRing, m: u32) -> Result<(SemilinearPairing, Involution), CycError> {
    let f = ideal_pairing(ring);
    let rm = ring.with_precision(m);
    let g = f.generator();
    let fg = rm.coerce(&f.eval(&g, &g)?);
    let w = FiniteCycModule::free(&rm, 2, m)?;
    let gram = vec![vec![rm.zero(), fg.clone()], vec![rm.neg(&fg), rm.zero()]];
    let sp = SemilinearPairing::new(w.clone(), gram)?;
    // ι(π^q) = -π^q, so the involution negates each generator.
    let c = Involution { images: (0..2).map(|i| w.scalar(&rm.from_int(-1), &w.generator(i))).collect() };
    Ok((sp, c))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclotomic::module::is_equivariant_semilinear;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn value_on_generator_is_minus_one() {
        for (p, n) in [(3, 1), (3, 2), (5, 1), (7, 1)] {
            let r = CycRing::new(p, n).unwrap();
            let f = ideal_pairing(&r);
            let g = f.generator();
            assert_eq!(f.eval(&g, &g).unwrap(), r.from_int(-1));
        }
    }

    #[test]
    fn hermitian_and_linear() {
        let r = CycRing::new(3, 2).unwrap();
        let f = ideal_pairing(&r);
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..20 {
            let a = f.random(&mut rng, 2);
            let b = f.random(&mut rng, 2);
            let s = r.random(&mut rng, 2);
            assert_eq!(r.iota(&f.eval(&a, &b).unwrap()), f.eval(&b, &a).unwrap());
            let sa = r.mul(&s, &a);
            assert_eq!(f.eval(&sa, &b).unwrap(), r.mul(&s, &f.eval(&a, &b).unwrap()));
            let sb = r.mul(&s, &b);
            assert_eq!(f.eval(&a, &sb).unwrap(), r.mul(&r.iota(&s), &f.eval(&a, &b).unwrap()));
        }
        assert!(f.eval(&r.one(), &f.generator()).is_err());
    }

    #[test]
    fn truncation_is_perfect_hermitian() {
        let r = CycRing::new(5, 1).unwrap();
        let sp = ideal_pairing(&r).truncated(2).unwrap();
        assert!(sp.is_hermitian());
        assert!(sp.is_nondegenerate());
        assert_eq!(sp.gram_det_is_unit(), Some(true));
    }

    #[test]
    fn tensor_model_is_skew_hermitian_perfect_equivariant() {
        let r = CycRing::new(3, 1).unwrap();
        let (sp, c) = tensor_model(&r, 2).unwrap();
        assert!(sp.is_skew_hermitian());
        assert!(sp.is_nondegenerate());
        assert!(c.is_involution(&sp.module));
        assert!(is_equivariant_semilinear(&sp, &c));
        let ring = sp.module.ring().clone();
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..30 {
            let x = sp.module.random(&mut rng);
            let y = sp.module.random(&mut rng);
            assert_eq!(sp.eval(&y, &x), ring.neg(&ring.iota(&sp.eval(&x, &y))));
        }
    }
}
