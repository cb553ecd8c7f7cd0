use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{inv_mod, legendre, mul_mod};

use super::Model;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Kodaira {
    I(u32),
    IStar(u32),
    II,
    III,
    IV,
    IIStar,
    IIIStar,
    IVStar,
}

impl fmt::Display for Kodaira {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Kodaira::I(n) => write!(f, "I{n}"),
            Kodaira::IStar(n) => write!(f, "I{n}*"),
            Kodaira::II => write!(f, "II"),
            Kodaira::III => write!(f, "III"),
            Kodaira::IV => write!(f, "IV"),
            Kodaira::IIStar => write!(f, "II*"),
            Kodaira::IIIStar => write!(f, "III*"),
            Kodaira::IVStar => write!(f, "IV*"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReductionType {
    Good,
    MultiplicativeSplit,
    MultiplicativeNonsplit,
    Additive,
}

impl ReductionType {
    pub fn is_good(self) -> bool {
        self == ReductionType::Good
    }

    pub fn is_multiplicative(self) -> bool {
        matches!(self, ReductionType::MultiplicativeSplit | ReductionType::MultiplicativeNonsplit)
    }
}

impl fmt::Display for ReductionType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ReductionType::Good => "good",
            ReductionType::MultiplicativeSplit => "multiplicative_split",
            ReductionType::MultiplicativeNonsplit => "multiplicative_nonsplit",
            ReductionType::Additive => "additive",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionData {
    pub prime: u64,
    #[serde(rename = "type")]
    pub kind: ReductionType,
    pub kodaira: Kodaira,
    pub conductor_exponent: u32,
    pub tamagawa: u32,
    /// `v_ℓ` of the minimal discriminant.
    pub disc_valuation: u32,
}

fn val(x: &BigInt, p: u64) -> u32 {
    if x.is_zero() {
        return u32::MAX;
    }
    let pb = BigInt::from(p);
    let mut x = x.clone();
    let mut v = 0;
    while x.is_multiple_of(&pb) {
        x /= &pb;
        v += 1;
    }
    v
}

fn rmod(x: &BigInt, p: u64) -> u64 {
    x.mod_floor(&BigInt::from(p)).to_u64().unwrap()
}

fn inv(a: u64, p: u64) -> u64 {
    inv_mod(a % p, p).expect("invertible mod p")
}

/// Polynomial over `F_p`, constant term first; trailing zeros stripped.
fn trim(mut f: Vec<u64>) -> Vec<u64> {
    while f.last() == Some(&0) {
        f.pop();
    }
    f
}

fn poly_rem(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut r = trim(a.to_vec());
    let b = trim(b.to_vec());
    let lead_inv = inv(*b.last().unwrap(), p);
    while r.len() >= b.len() {
        let c = mul_mod(*r.last().unwrap(), lead_inv, p);
        let shift = r.len() - b.len();
        for (i, &bi) in b.iter().enumerate() {
            r[shift + i] = (r[shift + i] + p - mul_mod(c, bi, p)) % p;
        }
        r = trim(r);
    }
    r
}

fn poly_mulmod(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + mul_mod(x, y, p)) % p;
        }
    }
    poly_rem(&out, m, p)
}

/// Number of distinct roots in `F_p` of `f` (nonzero mod p): `deg gcd(f, x^p - x)`.
pub fn count_roots_mod(f: &[i128], p: u64) -> usize {
    let f = trim(f.iter().map(|&c| c.rem_euclid(p as i128) as u64).collect());
    assert!(!f.is_empty(), "zero polynomial");
    if f.len() == 1 {
        return 0;
    }
    // x^p mod f by square-and-multiply.
    let mut acc = vec![1u64];
    let mut base = poly_rem(&[0, 1], &f, p);
    let mut e = p;
    while e > 0 {
        if e & 1 == 1 {
            acc = poly_mulmod(&acc, &base, &f, p);
        }
        base = poly_mulmod(&base, &base, &f, p);
        e >>= 1;
    }
    let mut g = acc;
    g.resize(g.len().max(2), 0);
    g[1] = (g[1] + p - 1) % p;
    let mut a = f;
    let mut b = trim(g);
    while !b.is_empty() {
        let r = poly_rem(&a, &b, p);
        a = b;
        b = r;
    }
    a.len() - 1
}

fn has_root(f: &[BigInt], p: u64) -> bool {
    let f: Vec<i128> = f.iter().map(|c| rmod(c, p) as i128).collect();
    count_roots_mod(&f, p) > 0
}

/// Tate's algorithm at `p`. Returns local data and a model minimal at `p`
/// (obtained from the input by integral changes of coordinates and scalings by `p`).
pub fn tate(model: &Model, p: u64) -> (ReductionData, Model) {
    let pb = BigInt::from(p);
    let pint = |k: u32| pb.pow(k);
    let mut e = model.clone();
    loop {
        let disc = e.discriminant();
        let vd = val(&disc, p);
        if vd == 0 {
            let rd = ReductionData {
                prime: p,
                kind: ReductionType::Good,
                kodaira: Kodaira::I(0),
                conductor_exponent: 0,
                tamagawa: 1,
                disc_valuation: 0,
            };
            return (rd, e);
        }
        let [b2, b4, b6, _b8] = e.b_invariants();
        let (c4, c6) = e.c_invariants();
        // Move the singular point to (0, 0).
        let (r, t) = if p == 2 {
            if rmod(&b2, 2) == 0 {
                let r = rmod(&e.a[3], 2);
                let t = rmod(&(BigInt::from(r) * (BigInt::one() + &e.a[1] + &e.a[3]) + &e.a[4]), 2);
                (r, t)
            } else {
                let r = rmod(&e.a[2], 2);
                let t = rmod(&(BigInt::from(r) + &e.a[3]), 2);
                (r, t)
            }
        } else if p == 3 {
            let r = if rmod(&b2, 3) == 0 { rmod(&(-&b6), 3) } else { rmod(&(-&b2 * &b4), 3) };
            let t = rmod(&(&e.a[0] * BigInt::from(r) + &e.a[2]), 3);
            (r, t)
        } else {
            let r = if rmod(&c4, p) == 0 {
                mul_mod(p - inv(12, p), rmod(&b2, p), p)
            } else {
                let num = rmod(&(&c6 + &b2 * &c4), p);
                mul_mod(p - inv(rmod(&(BigInt::from(12) * &c4), p), p), num, p)
            };
            let t = mul_mod(p - inv(2, p), rmod(&(&e.a[0] * BigInt::from(r) + &e.a[2]), p), p);
            (r, t)
        };
        e = e.transform(&BigInt::from(r), &BigInt::zero(), &BigInt::from(t));

        if rmod(&c4, p) != 0 {
            let split = if p >= 5 {
                legendre(-(rmod(&c6, p) as i128), p) == 1
            } else {
                has_root(&[-&e.a[1], e.a[0].clone(), BigInt::one()], p)
            };
            let c = if split { vd } else if vd % 2 == 1 { 1 } else { 2 };
            let rd = ReductionData {
                prime: p,
                kind: if split { ReductionType::MultiplicativeSplit } else { ReductionType::MultiplicativeNonsplit },
                kodaira: Kodaira::I(vd),
                conductor_exponent: 1,
                tamagawa: c,
                disc_valuation: vd,
            };
            return (rd, e);
        }
        let additive = |kod: Kodaira, f: u32, c: u32| ReductionData {
            prime: p,
            kind: ReductionType::Additive,
            kodaira: kod,
            conductor_exponent: f,
            tamagawa: c,
            disc_valuation: vd,
        };
        if val(&e.a[4], p) < 2 {
            return (additive(Kodaira::II, vd, 1), e);
        }
        let [_, _, b6, b8] = e.b_invariants();
        if val(&b8, p) < 3 {
            return (additive(Kodaira::III, vd - 1, 2), e);
        }
        if val(&b6, p) < 3 {
            let a3 = &e.a[2] / &pb;
            let a6 = &e.a[4] / pint(2);
            let c = if has_root(&[-a6, a3, BigInt::one()], p) { 3 } else { 1 };
            return (additive(Kodaira::IV, vd - 2, c), e);
        }
        // Arrange p | a1, a2; p² | a3, a4; p³ | a6.
        let (s, t) = if p == 2 {
            (rmod(&e.a[1], 2), 2 * rmod(&(&e.a[4] / 4), 2))
        } else {
            let s = mul_mod(p - inv(2, p), rmod(&e.a[0], p), p);
            let t = mul_mod(p - inv(2, p), rmod(&(&e.a[2] / &pb), p), p) * p;
            (s, t)
        };
        e = e.transform(&BigInt::zero(), &BigInt::from(s), &BigInt::from(t));
        let b = &e.a[1] / &pb;
        let c = &e.a[3] / pint(2);
        let d = &e.a[4] / pint(3);
        let w = BigInt::from(27) * &d * &d - &b * &b * &c * &c + BigInt::from(4) * &b * &b * &b * &d
            - BigInt::from(18) * &b * &c * &d
            + BigInt::from(4) * &c * &c * &c;
        let x = BigInt::from(3) * &c - &b * &b;
        if rmod(&w, p) != 0 {
            let roots = has_roots_count(&[d.clone(), c.clone(), b.clone(), BigInt::one()], p);
            return (additive(Kodaira::IStar(0), vd - 4, 1 + roots as u32), e);
        }
        if rmod(&x, p) != 0 {
            // Double root: move it to 0.
            let r0 = if p == 2 {
                rmod(&c, 2)
            } else if p == 3 {
                rmod(&(&b * &c), 3)
            } else {
                mul_mod(rmod(&(&b * &c - BigInt::from(9) * &d), p), inv(rmod(&(BigInt::from(2) * &x), p), p), p)
            };
            e = e.transform(&(BigInt::from(r0) * &pb), &BigInt::zero(), &BigInt::zero());
            let (mut ix, mut iy) = (3u32, 3u32);
            let (mut mx, mut my) = (pint(2), pint(2));
            let tam;
            loop {
                let xa3 = &e.a[2] / &my;
                let xa6 = &e.a[4] / (&mx * &my);
                if rmod(&(&xa3 * &xa3 + BigInt::from(4) * &xa6), p) != 0 {
                    tam = if has_root(&[-&xa6, xa3.clone(), BigInt::one()], p) { 4 } else { 2 };
                    break;
                }
                let t = if p == 2 {
                    rmod(&xa6, 2)
                } else {
                    mul_mod(p - inv(2, p), rmod(&xa3, p), p)
                };
                e = e.transform(&BigInt::zero(), &BigInt::zero(), &(BigInt::from(t) * &my));
                my *= &pb;
                iy += 1;
                let xa2b = &e.a[1] / &pb;
                let xa4 = &e.a[3] / (&pb * &mx);
                let xa6 = &e.a[4] / (&mx * &my);
                if rmod(&(&xa4 * &xa4 - BigInt::from(4) * &xa2b * &xa6), p) != 0 {
                    tam = if has_root(&[xa6.clone(), xa4.clone(), xa2b.clone()], p) { 4 } else { 2 };
                    break;
                }
                let r = if p == 2 {
                    rmod(&(&xa6 * &xa2b), 2)
                } else {
                    mul_mod(p - rmod(&xa4, p), inv(rmod(&(BigInt::from(2) * &xa2b), p), p), p)
                };
                e = e.transform(&(BigInt::from(r) * &mx), &BigInt::zero(), &BigInt::zero());
                mx *= &pb;
                ix += 1;
            }
            return (additive(Kodaira::IStar(ix + iy - 5), vd - ix - iy + 1, tam), e);
        }
        // Triple root: move it to 0.
        let rp = if p == 3 { rmod(&(-&d), 3) } else { mul_mod(p - inv(3, p), rmod(&b, p), p) };
        e = e.transform(&(BigInt::from(rp) * &pb), &BigInt::zero(), &BigInt::zero());
        let x3 = &e.a[2] / pint(2);
        let x6 = &e.a[4] / pint(4);
        if rmod(&(&x3 * &x3 + BigInt::from(4) * &x6), p) != 0 {
            let c = if has_root(&[-&x6, x3.clone(), BigInt::one()], p) { 3 } else { 1 };
            return (additive(Kodaira::IVStar, vd - 6, c), e);
        }
        let t = if p == 2 { rmod(&x6, 2) } else { mul_mod(p - inv(2, p), rmod(&x3, p), p) };
        e = e.transform(&BigInt::zero(), &BigInt::zero(), &(BigInt::from(t) * pint(2)));
        if val(&e.a[3], p) < 4 {
            return (additive(Kodaira::IIIStar, vd - 7, 2), e);
        }
        if val(&e.a[4], p) < 6 {
            return (additive(Kodaira::IIStar, vd - 8, 1), e);
        }
        // Not minimal at p.
        e = e.scale_down(p);
    }
}

fn has_roots_count(f: &[BigInt], p: u64) -> usize {
    let f: Vec<i128> = f.iter().map(|c| rmod(c, p) as i128).collect();
    count_roots_mod(&f, p)
}

/// Reduces `a1, a3 ∈ {0, 1}` and `a2 ∈ {-1, 0, 1}` by an integral change of coordinates.
pub fn normalize(m: &Model) -> Model {
    let two = BigInt::from(2);
    let three = BigInt::from(3);
    let s = -m.a[0].div_floor(&two);
    let a2s = &m.a[1] - &s * &m.a[0] - &s * &s;
    let r = -(a2s + BigInt::one()).div_floor(&three);
    let a3r = &m.a[2] + &r * &m.a[0];
    let t = -a3r.div_floor(&two);
    let out = m.transform(&r, &s, &t);
    debug_assert!(out.a[0] >= BigInt::zero() && out.a[0] <= BigInt::one());
    debug_assert!(out.a[1].abs() <= BigInt::one());
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn root_counts() {
        // x^3 - x over F_5 has three roots; x^2 + 1 over F_3 has none.
        assert_eq!(count_roots_mod(&[0, -1, 0, 1], 5), 3);
        assert_eq!(count_roots_mod(&[1, 0, 1], 3), 0);
        assert_eq!(count_roots_mod(&[1, 0, 1], 5), 2);
        assert_eq!(count_roots_mod(&[1, 1, 1], 2), 0);
        assert_eq!(count_roots_mod(&[0, 1, 1], 2), 2);
    }
}
