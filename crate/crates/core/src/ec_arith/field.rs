//! `F_ℓ` and `F_{ℓ²}` with elements `a + b w`, plus Weierstrass point
//! arithmetic and naive counting.

use rand::Rng;

use crate::arith::{inv_mod, mul_mod};

/// `F_{ℓ^f}`, `f ∈ {1, 2}`; for `f = 2`, `w² = c1 w + c0` is irreducible.
#[derive(Clone, Debug)]
pub struct Fq {
    pub ell: u64,
    pub f: u32,
    c0: u64,
    c1: u64,
    /// `squares[a]` iff `a` is a nonzero square in `F_ℓ` (odd `ℓ`).
    squares: Vec<bool>,
}

pub type El = (u64, u64);

impl Fq {
    pub fn new(ell: u64, f: u32) -> Self {
        assert!(f == 1 || f == 2, "only degrees 1 and 2");
        let mut squares = Vec::new();
        if ell > 2 {
            squares = vec![false; ell as usize];
            for x in 1..=(ell - 1) / 2 {
                squares[mul_mod(x, x, ell) as usize] = true;
            }
        }
        let (c0, c1) = if ell == 2 {
            (1, 1)
        } else {
            ((1..ell).find(|&a| !squares[a as usize]).unwrap(), 0)
        };
        Self { ell, f, c0, c1, squares }
    }

    pub fn order(&self) -> u64 {
        self.ell.pow(self.f)
    }

    pub fn elements(&self) -> impl Iterator<Item = El> + '_ {
        let l = self.ell;
        let top = if self.f == 1 { 1 } else { l };
        (0..top).flat_map(move |b| (0..l).map(move |a| (a, b)))
    }

    pub fn from_int(&self, a: i128) -> El {
        (a.rem_euclid(self.ell as i128) as u64, 0)
    }

    pub fn add(&self, x: El, y: El) -> El {
        ((x.0 + y.0) % self.ell, (x.1 + y.1) % self.ell)
    }

    pub fn neg(&self, x: El) -> El {
        ((self.ell - x.0) % self.ell, (self.ell - x.1) % self.ell)
    }

    pub fn sub(&self, x: El, y: El) -> El {
        self.add(x, self.neg(y))
    }

    pub fn mul(&self, x: El, y: El) -> El {
        let l = self.ell;
        let bd = mul_mod(x.1, y.1, l);
        let re = (mul_mod(x.0, y.0, l) + mul_mod(bd, self.c0, l)) % l;
        let im = (mul_mod(x.0, y.1, l) + mul_mod(x.1, y.0, l) + mul_mod(bd, self.c1, l)) % l;
        (re, im)
    }

    pub fn pow(&self, mut x: El, mut e: u64) -> El {
        let mut acc = (1, 0);
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, x);
            }
            x = self.mul(x, x);
            e >>= 1;
        }
        acc
    }

    /// `N(a + b w) = (a + b w)(a + b w̄) ∈ F_ℓ`.
    pub fn norm(&self, x: El) -> u64 {
        if self.f == 1 {
            return x.0;
        }
        // Conjugate root is c1 - w: (a + b c1) - b w.
        let l = self.ell;
        let conj = ((x.0 + mul_mod(x.1, self.c1, l)) % l, (l - x.1) % l);
        let n = self.mul(x, conj);
        debug_assert_eq!(n.1, 0);
        n.0
    }

    pub fn inv(&self, x: El) -> Option<El> {
        let n = inv_mod(self.norm(x), self.ell)?;
        if self.f == 1 {
            return Some((n, 0));
        }
        let l = self.ell;
        let conj = ((x.0 + mul_mod(x.1, self.c1, l)) % l, (l - x.1) % l);
        Some(self.mul(conj, (n, 0)))
    }

    /// Quadratic character (odd `ℓ`): `χ(z) = χ_ℓ(N z)`.
    pub fn chi(&self, x: El) -> i32 {
        let n = self.norm(x);
        if n == 0 {
            0
        } else if self.squares[n as usize] {
            1
        } else {
            -1
        }
    }

    pub fn is_zero(&self, x: El) -> bool {
        x == (0, 0)
    }

    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> El {
        let b = if self.f == 2 { rng.gen_range(0..self.ell) } else { 0 };
        (rng.gen_range(0..self.ell), b)
    }

    /// A square root, when one exists (odd `ℓ`).
    pub fn sqrt(&self, x: El) -> Option<El> {
        if self.is_zero(x) {
            return Some(x);
        }
        if self.chi(x) != 1 {
            return None;
        }
        // Cipolla: find t with t² - x a non-square, then (t + √(t²-x))^{(q+1)/2}.
        // Over F_{ℓ²} every element of F_ℓ is a square, so t must range over all of F_q.
        let q = self.order();
        self.elements()
            .map(|t| (t, self.sub(self.mul(t, t), x)))
            .find(|&(_, d)| self.chi(d) == -1)
            .map(|(t, d)| cipolla(self, t, d, (q + 1) / 2))
    }
}

/// `(t + s)^e` in `F_q[s]/(s² - d)`, returning the `F_q` part.
fn cipolla(k: &Fq, t: El, d: El, mut e: u64) -> El {
    let mul = |(a, b): (El, El), (c, dd): (El, El)| {
        (k.add(k.mul(a, c), k.mul(k.mul(b, dd), d)), k.add(k.mul(a, dd), k.mul(b, c)))
    };
    let mut acc = ((1, 0), (0, 0));
    let mut base = (t, (1, 0));
    while e > 0 {
        if e & 1 == 1 {
            acc = mul(acc, base);
        }
        base = mul(base, base);
        e >>= 1;
    }
    acc.0
}

/// `y² + a1 x y + a3 y = x³ + a2 x² + a4 x + a6` over `F_q`.
#[derive(Clone, Debug)]
pub struct CurveFq {
    pub k: Fq,
    pub a: [El; 5],
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Point {
    Infinity,
    Affine(El, El),
}

impl CurveFq {
    /// Reduces integer coefficients; the caller guarantees good reduction.
    pub fn new(coeffs: [i128; 5], ell: u64, f: u32) -> Self {
        let k = Fq::new(ell, f);
        let a = coeffs.map(|c| k.from_int(c));
        Self { k, a }
    }

    fn rhs(&self, x: El) -> El {
        let k = &self.k;
        let [_, a2, _, a4, a6] = self.a;
        let x2 = k.mul(x, x);
        k.add(k.add(k.mul(x2, k.add(x, a2)), k.mul(a4, x)), a6)
    }

    fn lin(&self, x: El) -> El {
        self.k.add(self.k.mul(self.a[0], x), self.a[2])
    }

    pub fn contains(&self, pt: Point) -> bool {
        match pt {
            Point::Infinity => true,
            Point::Affine(x, y) => {
                let k = &self.k;
                k.add(k.mul(y, y), k.mul(self.lin(x), y)) == self.rhs(x)
            }
        }
    }

    /// Number of `y` with `(x, y)` on the curve.
    fn fiber_size(&self, x: El) -> u64 {
        let k = &self.k;
        if k.ell == 2 {
            let lin = self.lin(x);
            let r = self.rhs(x);
            return k.elements().filter(|&y| k.add(k.mul(y, y), k.mul(lin, y)) == r).count() as u64;
        }
        let l = self.lin(x);
        let disc = k.add(k.mul(l, l), k.mul((4, 0), self.rhs(x)));
        (1 + k.chi(disc)) as u64
    }

    /// `#E(F_q)` by running over all `x`.
    pub fn count_points(&self) -> u64 {
        1 + self.k.elements().map(|x| self.fiber_size(x)).sum::<u64>()
    }

    pub fn points(&self) -> Vec<Point> {
        let k = &self.k;
        let mut out = vec![Point::Infinity];
        for x in k.elements() {
            if k.ell == 2 {
                for y in k.elements() {
                    if self.contains(Point::Affine(x, y)) {
                        out.push(Point::Affine(x, y));
                    }
                }
                continue;
            }
            // y = (-lin ± √disc) / 2
            let l = self.lin(x);
            let disc = k.add(k.mul(l, l), k.mul((4, 0), self.rhs(x)));
            if let Some(s) = k.sqrt(disc) {
                let half = k.inv((2, 0)).unwrap();
                let y1 = k.mul(k.sub(s, l), half);
                out.push(Point::Affine(x, y1));
                if !k.is_zero(s) {
                    let y2 = k.mul(k.sub(k.neg(s), l), half);
                    out.push(Point::Affine(x, y2));
                }
            }
        }
        out
    }

    pub fn neg(&self, p: Point) -> Point {
        match p {
            Point::Infinity => p,
            Point::Affine(x, y) => Point::Affine(x, self.k.sub(self.k.neg(y), self.lin(x))),
        }
    }

    pub fn add(&self, p: Point, q: Point) -> Point {
        let k = &self.k;
        let [a1, a2, a3, a4, a6] = self.a;
        let (x1, y1, x2, y2) = match (p, q) {
            (Point::Infinity, _) => return q,
            (_, Point::Infinity) => return p,
            (Point::Affine(x1, y1), Point::Affine(x2, y2)) => (x1, y1, x2, y2),
        };
        if x1 == x2 && k.add(k.add(y1, y2), self.lin(x2)) == (0, 0) {
            return Point::Infinity;
        }
        let (lam, nu) = if x1 == x2 {
            let x12 = k.mul(x1, x1);
            let num = k.sub(k.add(k.add(k.mul((3, 0), x12), k.mul(k.mul((2, 0), a2), x1)), a4), k.mul(a1, y1));
            let den = k.add(k.add(k.mul((2, 0), y1), k.mul(a1, x1)), a3);
            let di = k.inv(den).expect("nonzero denominator");
            let lam = k.mul(num, di);
            let x13 = k.mul(x12, x1);
            let nnum = k.sub(k.add(k.add(k.neg(x13), k.mul(a4, x1)), k.mul((2, 0), a6)), k.mul(a3, y1));
            (lam, k.mul(nnum, di))
        } else {
            let di = k.inv(k.sub(x2, x1)).unwrap();
            let lam = k.mul(k.sub(y2, y1), di);
            let nu = k.mul(k.sub(k.mul(y1, x2), k.mul(y2, x1)), di);
            (lam, nu)
        };
        let x3 = k.sub(k.sub(k.sub(k.add(k.mul(lam, lam), k.mul(a1, lam)), a2), x1), x2);
        let y3 = k.sub(k.sub(k.neg(k.mul(k.add(lam, a1), x3)), nu), a3);
        let r = Point::Affine(x3, y3);
        debug_assert!(self.contains(r));
        r
    }

    pub fn mul(&self, mut n: u64, mut p: Point) -> Point {
        let mut acc = Point::Infinity;
        while n > 0 {
            if n & 1 == 1 {
                acc = self.add(acc, p);
            }
            p = self.add(p, p);
            n >>= 1;
        }
        acc
    }

    pub fn random_point<R: Rng + ?Sized>(&self, rng: &mut R) -> Point {
        let k = &self.k;
        loop {
            let x = k.random(rng);
            if k.ell == 2 {
                let ys: Vec<El> = k.elements().filter(|&y| self.contains(Point::Affine(x, y))).collect();
                if !ys.is_empty() {
                    return Point::Affine(x, ys[rng.gen_range(0..ys.len())]);
                }
                continue;
            }
            let l = self.lin(x);
            let disc = k.add(k.mul(l, l), k.mul((4, 0), self.rhs(x)));
            if let Some(s) = k.sqrt(disc) {
                let s = if rng.gen::<bool>() { s } else { k.neg(s) };
                let half = k.inv((2, 0)).unwrap();
                return Point::Affine(x, k.mul(k.sub(s, l), half));
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_axioms_small() {
        for (l, f) in [(2, 2), (3, 2), (5, 2), (7, 1)] {
            let k = Fq::new(l, f);
            let els: Vec<El> = k.elements().collect();
            assert_eq!(els.len() as u64, k.order());
            for &x in &els {
                if x != (0, 0) {
                    assert_eq!(k.mul(x, k.inv(x).unwrap()), (1, 0));
                    assert_eq!(k.pow(x, k.order() - 1), (1, 0));
                }
            }
        }
    }

    #[test]
    fn sqrt_in_quadratic_extension() {
        let k = Fq::new(7, 2);
        for x in k.elements() {
            let s = k.sqrt(k.mul(x, x)).unwrap();
            assert_eq!(k.mul(s, s), k.mul(x, x));
        }
    }

    #[test]
    fn curve_37a_over_f2() {
        let e = CurveFq::new([0, 0, 1, -1, 0], 2, 1);
        assert_eq!(e.count_points(), 5);
        assert_eq!(e.points().len(), 5);
    }

    #[test]
    fn group_law_is_consistent() {
        let e = CurveFq::new([0, 0, 1, -1, 0], 5, 2);
        let pts = e.points();
        let n = pts.len() as u64;
        assert_eq!(n, e.count_points());
        for &p in pts.iter().take(12) {
            assert_eq!(e.mul(n, p), Point::Infinity);
            assert_eq!(e.add(p, e.neg(p)), Point::Infinity);
        }
    }
}
