use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;

use crate::arith::{gcd, inv_mod, is_odd_prime};

use super::CycError;

/// Element of `Z[ζ]` in the power basis `1, ζ, …, ζ^{φ-1}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CycElement {
    coeffs: Vec<BigInt>,
}

impl CycElement {
    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// The constant coefficient if every other coefficient vanishes.
    pub fn as_integer(&self) -> Option<BigInt> {
        if self.coeffs[1..].iter().all(Zero::is_zero) {
            Some(self.coeffs[0].clone())
        } else {
            None
        }
    }

    pub fn coeffs_i64(&self) -> Vec<i64> {
        self.coeffs.iter().map(|c| c.to_i64().expect("coefficient fits in i64")).collect()
    }
}

/// `Z[ζ_{p^n}]`, optionally truncated modulo `p^m`.
#[derive(Clone, Debug)]
pub struct CycRing {
    p: u64,
    n: u32,
    order: usize,
    phi: usize,
    precision: Option<u32>,
    modulus: Option<BigInt>,
    trace_vec: Vec<BigInt>,
    // Exact π^{φ-1} u^{-1}, so that x/π = x · helper / p.
    pi_div_helper: OnceLock<CycElement>,
}

impl CycRing {
    pub fn new(p: u64, n: u32) -> Result<Self, CycError> {
        if !is_odd_prime(p) {
            return Err(CycError::InvalidPrime(p));
        }
        if n == 0 {
            return Err(CycError::InvalidExponent);
        }
        let order = p.checked_pow(n).ok_or(CycError::InvalidExponent)? as usize;
        let q = order / p as usize;
        let phi = order - q;
        let trace_vec = (0..phi)
            .map(|i| {
                if i == 0 {
                    BigInt::from(phi)
                } else if i % q == 0 {
                    -BigInt::from(q)
                } else {
                    BigInt::zero()
                }
            })
            .collect();
        Ok(Self { p, n, order, phi, precision: None, modulus: None, trace_vec, pi_div_helper: OnceLock::new() })
    }

    /// Same ring with coefficients reduced mod `p^m`.
    pub fn with_precision(&self, m: u32) -> Self {
        let mut r = self.clone();
        r.precision = Some(m);
        r.modulus = Some(BigInt::from(self.p).pow(m));
        r
    }

    pub fn exact(&self) -> Self {
        let mut r = self.clone();
        r.precision = None;
        r.modulus = None;
        r
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// `p^n`, the order of ζ.
    pub fn order(&self) -> usize {
        self.order
    }

    /// `φ(p^n)`, the rank over Z.
    pub fn degree(&self) -> usize {
        self.phi
    }

    pub fn precision(&self) -> Option<u32> {
        self.precision
    }

    pub fn modulus(&self) -> Option<&BigInt> {
        self.modulus.as_ref()
    }

    /// `p^{n-1}`.
    pub fn ramification_step(&self) -> usize {
        self.order / self.p as usize
    }

    /// Exponent `s = p^{n-1}(pn - n - 1)` of the different: `(d) = (π^s)`.
    pub fn different_exponent(&self) -> usize {
        let (p, n) = (self.p as usize, self.n as usize);
        self.ramification_step() * (p * n - n - 1)
    }

    /// `Φ_{p^n}` as integer coefficients, constant term first.
    pub fn modulus_poly(&self) -> Vec<i64> {
        let q = self.ramification_step();
        let mut c = vec![0i64; self.phi + 1];
        for t in 0..self.p as usize {
            c[t * q] = 1;
        }
        c
    }

    fn reduce_mod(&self, mut c: Vec<BigInt>) -> CycElement {
        if let Some(m) = &self.modulus {
            for x in &mut c {
                *x = x.mod_floor(m);
            }
        }
        CycElement { coeffs: c }
    }

    /// Reduces a polynomial in ζ of any length.
    pub fn from_poly(&self, v: &[BigInt]) -> CycElement {
        let mut c = vec![BigInt::zero(); self.order];
        for (i, x) in v.iter().enumerate() {
            c[i % self.order] += x;
        }
        let q = self.ramification_step();
        for k in (self.phi..self.order).rev() {
            if c[k].is_zero() {
                continue;
            }
            let x = std::mem::take(&mut c[k]);
            for t in 0..self.p as usize - 1 {
                c[k - self.phi + t * q] -= &x;
            }
        }
        c.truncate(self.phi);
        self.reduce_mod(c)
    }

    pub fn from_i64s(&self, v: &[i64]) -> CycElement {
        let b: Vec<BigInt> = v.iter().map(|&x| BigInt::from(x)).collect();
        self.from_poly(&b)
    }

    pub fn from_coeffs(&self, c: Vec<BigInt>) -> CycElement {
        assert_eq!(c.len(), self.phi);
        self.reduce_mod(c)
    }

    /// Re-reduces an element (for moving between exact and truncated rings).
    pub fn coerce(&self, x: &CycElement) -> CycElement {
        self.reduce_mod(x.coeffs.clone())
    }

    pub fn zero(&self) -> CycElement {
        CycElement { coeffs: vec![BigInt::zero(); self.phi] }
    }

    pub fn one(&self) -> CycElement {
        self.from_int(1)
    }

    pub fn from_int(&self, a: i64) -> CycElement {
        self.from_bigint(&BigInt::from(a))
    }

    pub fn from_bigint(&self, a: &BigInt) -> CycElement {
        let mut c = vec![BigInt::zero(); self.phi];
        c[0] = a.clone();
        self.reduce_mod(c)
    }

    /// `ζ^k` for any integer `k`.
    pub fn zeta_pow(&self, k: i64) -> CycElement {
        let e = k.rem_euclid(self.order as i64) as usize;
        let mut v = vec![BigInt::zero(); e + 1];
        v[e] = BigInt::one();
        self.from_poly(&v)
    }

    pub fn zeta(&self) -> CycElement {
        self.zeta_pow(1)
    }

    /// `π = ζ - ζ^{-1}`.
    pub fn pi(&self) -> CycElement {
        self.sub(&self.zeta_pow(1), &self.zeta_pow(-1))
    }

    /// `d = π^s`.
    pub fn d(&self) -> CycElement {
        self.pow(&self.pi(), self.different_exponent() as u64)
    }

    pub fn add(&self, a: &CycElement, b: &CycElement) -> CycElement {
        self.reduce_mod(a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x + y).collect())
    }

    pub fn sub(&self, a: &CycElement, b: &CycElement) -> CycElement {
        self.reduce_mod(a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x - y).collect())
    }

    pub fn neg(&self, a: &CycElement) -> CycElement {
        self.reduce_mod(a.coeffs.iter().map(|x| -x).collect())
    }

    pub fn scale(&self, a: &CycElement, k: &BigInt) -> CycElement {
        self.reduce_mod(a.coeffs.iter().map(|x| x * k).collect())
    }

    pub fn mul(&self, a: &CycElement, b: &CycElement) -> CycElement {
        let mut v = vec![BigInt::zero(); 2 * self.phi - 1];
        for (i, x) in a.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate() {
                if !y.is_zero() {
                    v[i + j] += x * y;
                }
            }
        }
        self.from_poly(&v)
    }

    pub fn pow(&self, a: &CycElement, mut e: u64) -> CycElement {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    /// Galois automorphism `ζ ↦ ζ^a`, `gcd(a, p) = 1`.
    pub fn galois(&self, x: &CycElement, a: i64) -> CycElement {
        assert_eq!(gcd(a as i128, self.p as i128), 1, "galois exponent must be prime to p");
        let mut v = vec![BigInt::zero(); self.order];
        for (i, c) in x.coeffs.iter().enumerate() {
            let e = (i as i64 * a).rem_euclid(self.order as i64) as usize;
            v[e] += c;
        }
        self.from_poly(&v)
    }

    /// The involution `ι : ζ ↦ ζ^{-1}`.
    pub fn iota(&self, x: &CycElement) -> CycElement {
        self.galois(x, -1)
    }

    /// Trace to Z of the exact element (coefficients taken as integers).
    pub fn trace(&self, x: &CycElement) -> BigInt {
        x.coeffs.iter().zip(&self.trace_vec).map(|(c, t)| c * t).sum()
    }

    /// Norm to Z as the product of all Galois conjugates.
    pub fn norm(&self, x: &CycElement) -> BigInt {
        let ex = self.exact();
        let mut acc = ex.coerce(x);
        for a in 2..self.order as i64 {
            if a % self.p as i64 != 0 {
                acc = ex.mul(&acc, &ex.galois(x, a));
            }
        }
        acc.as_integer().expect("norm is rational")
    }

    /// Exact inverse of a unit of `Z[ζ]` as `(Π_{a≠1} σ_a(x)) / N(x)`.
    pub fn inverse_exact(&self, x: &CycElement) -> Result<CycElement, CycError> {
        let ex = self.exact();
        let nx = ex.norm(x);
        if !nx.abs().is_one() {
            return Err(CycError::NotAUnit);
        }
        let mut acc = ex.one();
        for a in 2..self.order as i64 {
            if a % self.p as i64 != 0 {
                acc = ex.mul(&acc, &ex.galois(x, a));
            }
        }
        Ok(self.coerce(&ex.scale(&acc, &nx)))
    }

    /// Image under `R → R/π = F_p`, i.e. evaluation at ζ = 1.
    pub fn residue(&self, x: &CycElement) -> u64 {
        let s: BigInt = x.coeffs.iter().sum();
        s.mod_floor(&BigInt::from(self.p)).to_u64().unwrap()
    }

    /// Divides every coefficient by `k`, failing unless all divisions are exact.
    pub fn div_exact_int(&self, x: &CycElement, k: &BigInt) -> Result<CycElement, CycError> {
        let mut c = Vec::with_capacity(self.phi);
        for a in &x.coeffs {
            let (q, r) = a.div_mod_floor(k);
            if !r.is_zero() {
                return Err(CycError::NotDivisible);
            }
            c.push(q);
        }
        Ok(self.reduce_mod(c))
    }

    /// The unit `u` with `π^φ = p·u`.
    pub fn pi_power_unit(&self) -> Result<CycElement, CycError> {
        let ex = self.exact();
        let pp = ex.pow(&ex.pi(), self.phi as u64);
        let u = ex.div_exact_int(&pp, &BigInt::from(self.p))?;
        Ok(self.coerce(&u))
    }

    /// Exact `π^e` for any integer `e`, scaled by `p^k` so the result is
    /// integral: returns `p^k π^e` with the least `k ≥ 0` making `kφ + e ≥ 0`.
    pub fn scaled_pi_power(&self, e: i64) -> (u32, CycElement) {
        let ex = self.exact();
        if e >= 0 {
            return (0, self.coerce(&ex.pow(&ex.pi(), e as u64)));
        }
        let phi = self.phi as i64;
        let k = ((-e) + phi - 1) / phi;
        let u = ex.pi_power_unit().expect("π^φ/p is integral");
        let uinv = ex.inverse_exact(&u).expect("u is a unit");
        // p^k π^e = π^{kφ+e} u^{-k}
        let a = ex.pow(&ex.pi(), (k * phi + e) as u64);
        let b = ex.pow(&uinv, k as u64);
        (k as u32, self.coerce(&ex.mul(&a, &b)))
    }

    /// Exact `x / π` of an exact element with zero residue.
    pub fn div_pi_exact(&self, x: &CycElement) -> Result<CycElement, CycError> {
        if self.residue(x) != 0 {
            return Err(CycError::NotDivisible);
        }
        let ex = self.exact();
        let helper = self.pi_div_helper.get_or_init(|| ex.scaled_pi_power(-1).1);
        let y = ex.mul(&ex.coerce(x), helper);
        ex.div_exact_int(&y, &BigInt::from(self.p))
    }

    /// π-adic valuation of a residue class in the truncated ring, `None` for 0.
    /// In the exact ring, the valuation of the element itself.
    pub fn valuation(&self, x: &CycElement) -> Option<usize> {
        self.unit_part(x).map(|(k, _)| k)
    }

    /// `(k, u)` with `x = π^k u` and `u` a unit; `u` is an exact lift.
    pub fn unit_part(&self, x: &CycElement) -> Option<(usize, CycElement)> {
        let cap = self.precision.map(|m| m as usize * self.phi);
        let mut y = self.coerce(x);
        if y.is_zero() {
            return None;
        }
        let mut k = 0;
        while self.residue(&y) == 0 {
            if cap.is_some_and(|c| k >= c) {
                return None;
            }
            y = self.div_pi_exact(&y).expect("residue is zero");
            k += 1;
        }
        Some((k, y))
    }

    /// Inverse of a unit modulo the truncation, by Newton iteration.
    pub fn inverse_unit(&self, x: &CycElement) -> Result<CycElement, CycError> {
        let r = self.residue(x);
        if r == 0 {
            return Err(CycError::NotAUnit);
        }
        if self.modulus.is_none() {
            return self.inverse_exact(x);
        }
        let x = self.coerce(x);
        let mut y = self.from_int(inv_mod(r, self.p).unwrap() as i64);
        let two = self.from_int(2);
        let target = self.precision.unwrap() as usize * self.phi;
        let mut prec = 1usize;
        while prec < target {
            y = self.mul(&y, &self.sub(&two, &self.mul(&x, &y)));
            prec *= 2;
        }
        debug_assert_eq!(self.mul(&x, &y), self.one());
        Ok(y)
    }

    /// Uniform random element (truncated rings) or coefficients in `[-bound, bound]`.
    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R, bound: i64) -> CycElement {
        let c = match &self.modulus {
            Some(m) => {
                let m = m.to_u64().expect("modulus fits in u64");
                (0..self.phi).map(|_| BigInt::from(rng.gen_range(0..m))).collect()
            }
            None => (0..self.phi).map(|_| BigInt::from(rng.gen_range(-bound..=bound))).collect(),
        };
        self.reduce_mod(c)
    }

    /// Random unit of the truncated ring.
    pub fn random_unit<R: Rng + ?Sized>(&self, rng: &mut R) -> CycElement {
        loop {
            let x = self.random(rng, 3);
            if self.residue(&x) != 0 {
                return x;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pi_squared_is_minus_three_for_p3() {
        // 1 + x + x^2 = 0: (x - x^2)^2 = x^2 - 2x^3 + x^4 = x^2 - 2 + x = -3.
        let r = CycRing::new(3, 1).unwrap();
        let pi = r.pi();
        assert_eq!(pi.coeffs_i64(), vec![1, 2]);
        assert_eq!(r.mul(&pi, &pi), r.from_int(-3));
    }

    #[test]
    fn different_exponent_p3_n1_is_one() {
        let r = CycRing::new(3, 1).unwrap();
        assert_eq!(r.different_exponent(), 1);
        assert_eq!(r.d(), r.pi());
    }

    #[test]
    fn involution_signs() {
        for (p, n) in [(3, 1), (3, 2), (5, 1), (7, 1), (5, 2)] {
            let r = CycRing::new(p, n).unwrap();
            assert_eq!(r.iota(&r.pi()), r.neg(&r.pi()));
            assert_eq!(r.different_exponent() % 2, 1);
            assert_eq!(r.iota(&r.d()), r.neg(&r.d()));
        }
    }

    #[test]
    fn pi_power_is_p_times_unit() {
        for (p, n) in [(3, 1), (3, 2), (5, 1), (7, 1)] {
            let r = CycRing::new(p, n).unwrap();
            let u = r.pi_power_unit().unwrap();
            assert!(r.norm(&u).abs().is_one());
            let ui = r.inverse_exact(&u).unwrap();
            assert_eq!(r.mul(&u, &ui), r.one());
            assert_eq!(r.norm(&r.pi()).abs(), BigInt::from(p));
        }
    }

    #[test]
    fn pi_divides_p_exactly_phi_times() {
        for (p, n) in [(3, 1), (3, 2), (5, 1)] {
            let r = CycRing::new(p, n).unwrap();
            assert_eq!(r.valuation(&r.from_int(p as i64)), Some(r.degree()));
            assert_eq!(r.valuation(&r.d()), Some(r.different_exponent()));
        }
    }

    #[test]
    fn trace_of_roots_of_unity() {
        let r = CycRing::new(3, 2).unwrap();
        assert_eq!(r.trace(&r.one()), BigInt::from(6));
        assert_eq!(r.trace(&r.zeta_pow(3)), BigInt::from(-3));
        assert_eq!(r.trace(&r.zeta_pow(1)), BigInt::zero());
        // Cross-check against the sum of conjugates.
        let x = r.from_i64s(&[2, -1, 0, 4, 5, -3]);
        let mut s = r.zero();
        for a in [1, 2, 4, 5, 7, 8] {
            s = r.add(&s, &r.galois(&x, a));
        }
        assert_eq!(s.as_integer().unwrap(), r.trace(&x));
    }

    #[test]
    fn newton_inverse_mod_prime_power() {
        let r = CycRing::new(5, 1).unwrap().with_precision(3);
        let mut rng = rand::thread_rng();
        for _ in 0..20 {
            let u = r.random_unit(&mut rng);
            let v = r.inverse_unit(&u).unwrap();
            assert_eq!(r.mul(&u, &v), r.one());
        }
    }
}
