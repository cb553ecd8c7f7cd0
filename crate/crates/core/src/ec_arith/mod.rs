//! Elliptic curves over Q: minimal models, Tate's algorithm, Frobenius traces
//! by point counting, and residue-field torsion.

mod field;
mod tate;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::{factorize, is_prime};

pub use field::{CurveFq, El, Fq, Point};
pub use tate::{count_roots_mod, normalize, tate, Kodaira, ReductionData, ReductionType};

/// Default bound on `ℓ` for counting over `F_ℓ`.
pub const COUNT_BOUND: u64 = 10_000_000;
/// Above this, residue-field torsion is decided by sampling instead of enumeration.
pub const ENUMERATION_BOUND: u64 = 1_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CurveError {
    #[error("singular curve (discriminant 0)")]
    Singular,
    #[error("discriminant too large to factor")]
    TooLarge,
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("bad reduction at {0}")]
    BadReduction(u64),
    #[error("{0} exceeds the counting bound")]
    BoundExceeded(u64),
    #[error("residue degree must be 1 or 2")]
    UnsupportedDegree,
    #[error("torsion prime must differ from the residue characteristic")]
    SameCharacteristic,
}

/// Weierstrass coefficients `[a1, a2, a3, a4, a6]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Model {
    pub a: [BigInt; 5],
}

impl Model {
    pub fn new(a: [i64; 5]) -> Self {
        Self { a: a.map(BigInt::from) }
    }

    pub fn b_invariants(&self) -> [BigInt; 4] {
        let [a1, a2, a3, a4, a6] = &self.a;
        let b2 = a1 * a1 + 4 * a2;
        let b4 = 2 * a4 + a1 * a3;
        let b6 = a3 * a3 + 4 * a6;
        let b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4;
        [b2, b4, b6, b8]
    }

    pub fn c_invariants(&self) -> (BigInt, BigInt) {
        let [b2, b4, b6, _] = self.b_invariants();
        let c4 = &b2 * &b2 - 24 * &b4;
        let c6 = -(&b2 * &b2 * &b2) + 36 * &b2 * &b4 - 216 * &b6;
        (c4, c6)
    }

    pub fn discriminant(&self) -> BigInt {
        let [b2, b4, b6, b8] = self.b_invariants();
        -(&b2 * &b2 * &b8) - 8 * &b4 * &b4 * &b4 - 27 * &b6 * &b6 + 9 * &b2 * &b4 * &b6
    }

    /// `x = x' + r`, `y = y' + s x' + t`.
    pub fn transform(&self, r: &BigInt, s: &BigInt, t: &BigInt) -> Self {
        let [a1, a2, a3, a4, a6] = &self.a;
        let n1 = a1 + 2 * s;
        let n2 = a2 - s * a1 + 3 * r - s * s;
        let n3 = a3 + r * a1 + 2 * t;
        let n4 = a4 - s * a3 + 2 * r * a2 - (t + r * s) * a1 + 3 * r * r - 2 * s * t;
        let n6 = a6 + r * a4 + r * r * a2 + r * r * r - t * a3 - t * t - r * t * a1;
        Self { a: [n1, n2, n3, n4, n6] }
    }

    /// `a_i ↦ a_i / p^i`; the caller guarantees divisibility.
    pub fn scale_down(&self, p: u64) -> Self {
        let pb = BigInt::from(p);
        let w = [1u32, 2, 3, 4, 6];
        let a = std::array::from_fn(|i| {
            let q = pb.pow(w[i]);
            debug_assert!(self.a[i].is_multiple_of(&q));
            &self.a[i] / q
        });
        Self { a }
    }

    /// `a_i ↦ u^i a_i`.
    pub fn scale_up(&self, u: i64) -> Self {
        let ub = BigInt::from(u);
        let w = [1u32, 2, 3, 4, 6];
        Self { a: std::array::from_fn(|i| &self.a[i] * ub.pow(w[i])) }
    }

    pub fn as_i128(&self) -> Option<[i128; 5]> {
        let mut out = [0i128; 5];
        for (o, a) in out.iter_mut().zip(&self.a) {
            *o = a.to_i128()?;
        }
        Some(out)
    }
}

/// A curve over Q with its global minimal model and local data.
#[derive(Clone, Debug)]
pub struct Curve {
    pub input: Model,
    pub minimal: Model,
    pub discriminant: BigInt,
    pub conductor: BigInt,
    /// Bad primes, in increasing order.
    pub bad: Vec<ReductionData>,
}

impl Curve {
    pub fn new(a: [i64; 5]) -> Result<Self, CurveError> {
        Self::from_model(Model::new(a))
    }

    pub fn from_model(input: Model) -> Result<Self, CurveError> {
        let disc = input.discriminant();
        if disc.is_zero() {
            return Err(CurveError::Singular);
        }
        let primes = prime_factors(&disc)?;
        let mut m = input.clone();
        for &p in &primes {
            let (_, local) = tate(&m, p);
            m = local;
        }
        let minimal = normalize(&m);
        let discriminant = minimal.discriminant();
        let mut conductor = BigInt::one();
        let mut bad = Vec::new();
        for p in prime_factors(&discriminant)? {
            let (rd, _) = tate(&minimal, p);
            conductor *= BigInt::from(p).pow(rd.conductor_exponent);
            bad.push(rd);
        }
        Ok(Self { input, minimal, discriminant, conductor, bad })
    }

    pub fn coeffs(&self) -> [i128; 5] {
        self.minimal.as_i128().expect("minimal coefficients fit in i128")
    }

    pub fn conductor_i128(&self) -> Option<i128> {
        self.conductor.to_i128()
    }

    pub fn reduction(&self, ell: u64) -> ReductionType {
        self.local(ell).map_or(ReductionType::Good, |r| r.kind)
    }

    pub fn local(&self, ell: u64) -> Option<&ReductionData> {
        self.bad.iter().find(|r| r.prime == ell)
    }

    pub fn has_good_reduction(&self, ell: u64) -> bool {
        self.local(ell).is_none()
    }

    fn check_good_prime(&self, ell: u64) -> Result<(), CurveError> {
        if !is_prime(ell as u128) {
            return Err(CurveError::NotPrime(ell));
        }
        if !self.has_good_reduction(ell) {
            return Err(CurveError::BadReduction(ell));
        }
        Ok(())
    }

    /// `#E(F_ℓ)` by counting.
    pub fn count_mod(&self, ell: u64) -> Result<u64, CurveError> {
        self.check_good_prime(ell)?;
        if ell > COUNT_BOUND {
            return Err(CurveError::BoundExceeded(ell));
        }
        Ok(CurveFq::new(self.coeffs(), ell, 1).count_points())
    }

    pub fn frobenius(&self, ell: u64) -> Result<FrobeniusData, CurveError> {
        let n = self.count_mod(ell)?;
        let a = ell as i64 + 1 - n as i64;
        assert!((a as i128).pow(2) <= 4 * ell as i128, "Hasse bound violated at {ell}");
        Ok(FrobeniusData { ell, a_ell: a })
    }

    /// `#E(F_{ℓ^f})` by exhaustive enumeration over `F_{ℓ^f}`, `f ≤ 2`.
    pub fn count_exhaustive(&self, ell: u64, f: u32) -> Result<u64, CurveError> {
        self.check_good_prime(ell)?;
        if f == 0 || f > 2 {
            return Err(CurveError::UnsupportedDegree);
        }
        Ok(CurveFq::new(self.coeffs(), ell, f).count_points())
    }

    /// `dim_{F_p} E(F_{ℓ^f})[p]`, for good `ℓ ≠ p`.
    pub fn torsion_dim_mod_p(&self, ell: u64, f: u32, p: u64) -> Result<u32, CurveError> {
        if ell == p {
            return Err(CurveError::SameCharacteristic);
        }
        if f == 0 || f > 2 {
            return Err(CurveError::UnsupportedDegree);
        }
        let fr = self.frobenius(ell)?;
        let q = ell.pow(f);
        let n = fr.count(f);
        let (n, qq, pp) = (n as u128, q as u128, p as u128);
        if n % pp != 0 {
            return Ok(0);
        }
        // Full p-torsion forces μ_p ⊂ F_q and p² | #E.
        if (qq - 1) % pp != 0 || n % (pp * pp) != 0 {
            return Ok(1);
        }
        let e = CurveFq::new(self.coeffs(), ell, f);
        if q <= ENUMERATION_BOUND {
            return Ok(torsion_dim_exhaustive(&e, p));
        }
        Ok(torsion_dim_sampling(&e, n as u64, p))
    }

    /// Ordinary/supersingular/anomalous classification at a good `p`.
    pub fn classify_at_p(&self, p: u64, f: u32) -> Result<PClass, CurveError> {
        if f == 0 || f > 2 {
            return Err(CurveError::UnsupportedDegree);
        }
        let fr = self.frobenius(p)?;
        let supersingular = fr.a_ell.rem_euclid(p as i64) == 0;
        let count = fr.count(f);
        let anomalous = count % p as u128 == 0;
        let par5_ok = supersingular && f % 2 == 0 && (p != 3 || fr.count(1) == 4);
        Ok(PClass {
            p,
            f,
            a_p: fr.a_ell,
            kind: if supersingular { PKind::Supersingular } else { PKind::Ordinary },
            anomalous,
            par5_ok,
            count: count as u64,
        })
    }
}

fn prime_factors(n: &BigInt) -> Result<Vec<u64>, CurveError> {
    let v = n.abs().to_i128().ok_or(CurveError::TooLarge)?;
    Ok(factorize(v).into_iter().map(|(p, _)| p).collect())
}

/// `log_p` of the number of points killed by `p`.
pub fn torsion_dim_exhaustive(e: &CurveFq, p: u64) -> u32 {
    let killed = e.points().into_iter().filter(|&pt| e.mul(p, pt) == Point::Infinity).count() as u64;
    let mut d = 0;
    let mut k = 1;
    while k < killed {
        k *= p;
        d += 1;
    }
    assert_eq!(k, killed, "p-torsion count is a power of p");
    d
}

/// Projects random points into the p-Sylow subgroup and looks for two
/// independent points of order `p`. Seeded, so repeatable.
pub fn torsion_dim_sampling(e: &CurveFq, n: u64, p: u64) -> u32 {
    let mut m = n;
    while m % p == 0 {
        m /= p;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(n ^ (p << 32) ^ e.k.ell);
    let mut first: Option<Point> = None;
    for _ in 0..256 {
        let mut q = e.mul(m, e.random_point(&mut rng));
        if q == Point::Infinity {
            continue;
        }
        loop {
            let next = e.mul(p, q);
            if next == Point::Infinity {
                break;
            }
            q = next;
        }
        match first {
            None => first = Some(q),
            Some(t) => {
                let mut multiple = Point::Infinity;
                let dependent = (0..p).any(|_| {
                    multiple = e.add(multiple, t);
                    multiple == q
                });
                if !dependent {
                    return 2;
                }
            }
        }
    }
    1
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrobeniusData {
    pub ell: u64,
    pub a_ell: i64,
}

impl FrobeniusData {
    /// `a_{ℓ^f}` from `a_{ℓ^f} = a_ℓ a_{ℓ^{f-1}} - ℓ a_{ℓ^{f-2}}`, `a_1 = 2`.
    pub fn trace(&self, f: u32) -> i128 {
        let (a, l) = (self.a_ell as i128, self.ell as i128);
        let (mut prev, mut cur) = (2i128, a);
        if f == 0 {
            return 2;
        }
        for _ in 1..f {
            (prev, cur) = (cur, a * cur - l * prev);
        }
        cur
    }

    /// `#E(F_{ℓ^f}) = ℓ^f + 1 - a_{ℓ^f}`.
    pub fn count(&self, f: u32) -> u128 {
        let q = (self.ell as i128).pow(f);
        let n = q + 1 - self.trace(f);
        assert!(n > 0);
        n as u128
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PKind {
    Ordinary,
    Supersingular,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PClass {
    pub p: u64,
    pub f: u32,
    pub a_p: i64,
    pub kind: PKind,
    pub anomalous: bool,
    /// Supersingular, residue degree even, and `#E(F_3) = 4` when `p = 3`.
    pub par5_ok: bool,
    /// `#E(F_{p^f})`.
    pub count: u64,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn curve_37a() {
        let e = Curve::new([0, 0, 1, -1, 0]).unwrap();
        assert_eq!(e.discriminant, BigInt::from(37));
        assert_eq!(e.conductor, BigInt::from(37));
        // Counting every point of the nodal cubic mod 37, node included, gives
        // p + 2 = 39, i.e. nonsplit (a split node gives p).
        let nodal = (0..37i64)
            .flat_map(|x| (0..37i64).map(move |y| (x, y)))
            .filter(|&(x, y)| (y * y + y - x * x * x + x).rem_euclid(37) == 0)
            .count();
        assert_eq!(nodal + 1, 39);
        assert_eq!(e.reduction(37), ReductionType::MultiplicativeNonsplit);
        assert_eq!(e.frobenius(2).unwrap().a_ell, -2);
        assert_eq!(e.count_mod(2).unwrap(), 5);
    }

    #[test]
    fn conductor_eleven() {
        let e = Curve::new([0, -1, 1, 0, 0]).unwrap();
        assert_eq!(e.conductor, BigInt::from(11));
        assert_eq!(e.discriminant, BigInt::from(-11));
    }

    #[test]
    fn scaled_model_is_minimised() {
        let e = Curve::new([0, 0, 0, 0, 1]).unwrap();
        let scaled = Curve::from_model(Model::new([0, 0, 0, 0, 1]).scale_up(2)).unwrap();
        assert_eq!(scaled.minimal, e.minimal);
        assert_eq!(scaled.conductor, e.conductor);
        // Δ_min | Δ with a twelfth-power quotient.
        let q = scaled.input.discriminant() / &scaled.discriminant;
        assert_eq!(q, BigInt::from(2).pow(12));
    }

    #[test]
    fn trace_recurrence() {
        let fr = FrobeniusData { ell: 5, a_ell: 3 };
        assert_eq!(fr.trace(0), 2);
        assert_eq!(fr.trace(2), 9 - 10);
    }
}
