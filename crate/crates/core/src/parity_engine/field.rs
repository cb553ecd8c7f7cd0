use std::fmt;

use serde::{Deserialize, Serialize};

use crate::arith::{is_prime, is_squarefree, kronecker};

use super::ParityError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Splitting {
    Split,
    Inert,
    Ramified,
}

impl Splitting {
    /// Residue degree of a place of `K` above `ℓ`.
    pub fn residue_degree(self) -> u32 {
        match self {
            Splitting::Inert => 2,
            _ => 1,
        }
    }

    /// Whether the places above `ℓ` are fixed by complex conjugation (`v = v^c`).
    pub fn is_self_conjugate(self) -> bool {
        self != Splitting::Split
    }
}

impl fmt::Display for Splitting {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Splitting::Split => "split",
            Splitting::Inert => "inert",
            Splitting::Ramified => "ramified",
        })
    }
}

/// `Q(√d)` for squarefree `d ≠ 0, 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuadField {
    pub d: i64,
    pub discriminant: i64,
}

impl QuadField {
    pub fn new(d: i64) -> Result<Self, ParityError> {
        if d == 0 || d == 1 {
            return Err(ParityError::TrivialField(d));
        }
        if !is_squarefree(d) {
            return Err(ParityError::NotSquarefree(d));
        }
        let discriminant = if d.rem_euclid(4) == 1 { d } else { 4 * d };
        Ok(Self { d, discriminant })
    }

    pub fn is_imaginary(&self) -> bool {
        self.d < 0
    }

    /// The quadratic character: the Kronecker symbol of the discriminant.
    /// It is a primitive character mod `|Δ|`, so any `i128` argument works.
    pub fn chi(&self, x: i128) -> i32 {
        if x == 0 {
            return 0;
        }
        let modulus = self.discriminant.unsigned_abs() as i128;
        let at_minus_one = if self.discriminant > 0 { 1 } else { -1 };
        let sign = if x < 0 { at_minus_one } else { 1 };
        let r = x.abs() % modulus;
        if r == 0 {
            return 0;
        }
        sign * kronecker(self.discriminant, r as i64)
    }

    pub fn split_behavior(&self, ell: u64) -> Result<Splitting, ParityError> {
        if !is_prime(ell as u128) {
            return Err(ParityError::NotPrime(ell));
        }
        Ok(match self.chi(ell as i128) {
            1 => Splitting::Split,
            -1 => Splitting::Inert,
            _ => Splitting::Ramified,
        })
    }

    pub fn ramified_primes(&self) -> Vec<u64> {
        crate::arith::factorize(self.discriminant as i128).into_iter().map(|(q, _)| q).collect()
    }
}

impl fmt::Display for QuadField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q(sqrt({}))", self.d)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::legendre;

    #[test]
    fn discriminants() {
        assert_eq!(QuadField::new(-7).unwrap().discriminant, -7);
        assert_eq!(QuadField::new(-1).unwrap().discriminant, -4);
        assert_eq!(QuadField::new(2).unwrap().discriminant, 8);
        assert_eq!(QuadField::new(5).unwrap().discriminant, 5);
        assert_eq!(QuadField::new(12), Err(ParityError::NotSquarefree(12)));
        assert_eq!(QuadField::new(1), Err(ParityError::TrivialField(1)));
    }

    #[test]
    fn splitting_examples() {
        let m = QuadField::new(-7).unwrap();
        assert_eq!(m.split_behavior(2).unwrap(), Splitting::Split);
        assert_eq!(m.split_behavior(7).unwrap(), Splitting::Ramified);
        assert_eq!(m.split_behavior(5).unwrap(), Splitting::Inert);
        let g = QuadField::new(-1).unwrap();
        assert_eq!(g.split_behavior(3).unwrap(), Splitting::Inert);
        assert_eq!(g.split_behavior(2).unwrap(), Splitting::Ramified);
        assert_eq!(g.split_behavior(5).unwrap(), Splitting::Split);
    }

    // For odd ℓ ∤ Δ, ℓ splits iff d is a square mod ℓ.
    #[test]
    fn chi_matches_residuosity_of_d() {
        for d in [-7i64, -1, -2, 2, 3, 5, -15, 13, -23] {
            let m = QuadField::new(d).unwrap();
            for ell in [3u64, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43] {
                let expect = legendre(d as i128, ell);
                assert_eq!(m.chi(ell as i128), expect, "d={d} ell={ell}");
            }
        }
    }

    #[test]
    fn chi_is_multiplicative_and_periodic() {
        let m = QuadField::new(-7).unwrap();
        assert_eq!(m.chi(-37), -1);
        for a in -40i128..40 {
            assert_eq!(m.chi(a + 7 * 1000), m.chi(a), "a={a}");
            for b in -10i128..10 {
                assert_eq!(m.chi(a * b), m.chi(a) * m.chi(b));
            }
        }
    }
}
