//! Integer lattice utilities over `BigInt`: Hermite and Smith forms,
//! fraction-free determinants, saturated kernels.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

pub type IntMatrix = Vec<Vec<BigInt>>;

pub fn to_int_matrix(rows: &[Vec<i64>]) -> IntMatrix {
    rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
}

/// Row Hermite normal form of the lattice spanned by `rows`: nonzero rows only,
/// positive pivots, entries above each pivot reduced into `[0, pivot)`.
pub fn hnf(rows: &[Vec<BigInt>]) -> IntMatrix {
    let mut a: IntMatrix = rows.to_vec();
    if a.is_empty() {
        return a;
    }
    let ncols = a[0].len();
    let mut r = 0;
    for c in 0..ncols {
        if r == a.len() {
            break;
        }
        // Euclid down the column until one nonzero entry remains at row r.
        loop {
            let piv = (r..a.len())
                .filter(|&i| !a[i][c].is_zero())
                .min_by(|&i, &j| a[i][c].abs().cmp(&a[j][c].abs()));
            let Some(piv) = piv else { break };
            a.swap(r, piv);
            let mut done = true;
            for i in r + 1..a.len() {
                if a[i][c].is_zero() {
                    continue;
                }
                let q = a[i][c].div_floor(&a[r][c]);
                let pr = a[r].clone();
                for (x, y) in a[i].iter_mut().zip(&pr) {
                    *x -= &q * y;
                }
                if !a[i][c].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if a[r][c].is_zero() {
            continue;
        }
        if a[r][c].is_negative() {
            for x in &mut a[r] {
                *x = -&*x;
            }
        }
        for i in 0..r {
            let q = a[i][c].div_floor(&a[r][c]);
            if q.is_zero() {
                continue;
            }
            let pr = a[r].clone();
            for (x, y) in a[i].iter_mut().zip(&pr) {
                *x -= &q * y;
            }
        }
        r += 1;
    }
    a.truncate(r);
    a.retain(|row| row.iter().any(|x| !x.is_zero()));
    a
}

/// Basis of the saturated left kernel `{y ∈ Z^m : y A = 0}`.
pub fn left_kernel(a: &[Vec<BigInt>]) -> IntMatrix {
    let m = a.len();
    if m == 0 {
        return Vec::new();
    }
    let n = a[0].len();
    let aug: IntMatrix = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut v = row.clone();
            v.extend((0..m).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }));
            v
        })
        .collect();
    // The transform is unimodular, so rows with zero A-part span the kernel.
    hnf(&aug)
        .into_iter()
        .filter(|row| row[..n].iter().all(Zero::is_zero))
        .map(|row| row[n..].to_vec())
        .collect()
}

/// Fraction-free (Bareiss) determinant.
pub fn det_bareiss(a: &[Vec<BigInt>]) -> BigInt {
    let n = a.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut m: IntMatrix = a.to_vec();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            let Some(s) = (k + 1..n).find(|&i| !m[i][k].is_zero()) else {
                return BigInt::zero();
            };
            m.swap(k, s);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = v / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    sign * &m[n - 1][n - 1]
}

/// Smith elementary divisors (nonzero ones, nonnegative, each dividing the next).
pub fn smith_divisors(a: &[Vec<BigInt>]) -> Vec<BigInt> {
    let mut m: IntMatrix = a.to_vec();
    let rows = m.len();
    if rows == 0 {
        return Vec::new();
    }
    let cols = m[0].len();
    let mut diag = Vec::new();
    let mut t = 0;
    while t < rows.min(cols) {
        // Smallest nonzero entry of the trailing block as pivot.
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if !m[i][j].is_zero()
                    && best.map_or(true, |(bi, bj)| m[i][j].abs() < m[bi][bj].abs())
                {
                    best = Some((i, j));
                }
            }
        }
        let Some((bi, bj)) = best else { break };
        m.swap(t, bi);
        for row in m.iter_mut() {
            row.swap(t, bj);
        }
        let mut clean = true;
        for i in t + 1..rows {
            let q = m[i][t].div_floor(&m[t][t]);
            if !q.is_zero() {
                let pr = m[t].clone();
                for (x, y) in m[i].iter_mut().zip(&pr) {
                    *x -= &q * y;
                }
            }
            clean &= m[i][t].is_zero();
        }
        for j in t + 1..cols {
            let q = m[t][j].div_floor(&m[t][t]);
            if !q.is_zero() {
                for row in m.iter_mut() {
                    let y = row[t].clone();
                    row[j] -= &q * y;
                }
            }
            clean &= m[t][j].is_zero();
        }
        if !clean {
            continue;
        }
        // Divisibility: fold any entry not divisible by the pivot into row t.
        let piv = m[t][t].clone();
        let bad = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !m[i][j].is_multiple_of(&piv)));
        if let Some(i) = bad {
            let ri = m[i].clone();
            for (x, y) in m[t].iter_mut().zip(&ri) {
                *x += y;
            }
            continue;
        }
        diag.push(piv.abs());
        t += 1;
    }
    diag
}

/// Inverse of a square matrix modulo `q`, if its determinant is a unit mod `q`.
/// Works over `Z/q` for any `q` by choosing unit pivots.
pub fn inverse_mod(a: &[Vec<BigInt>], q: &BigInt) -> Option<IntMatrix> {
    let n = a.len();
    let mut m: IntMatrix = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut v: Vec<BigInt> = row.iter().map(|x| x.mod_floor(q)).collect();
            v.extend((0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }));
            v
        })
        .collect();
    for c in 0..n {
        let piv = (c..n).find(|&i| m[i][c].gcd(q).is_one())?;
        m.swap(c, piv);
        let inv = mod_inverse(&m[c][c], q)?;
        for x in m[c].iter_mut() {
            *x = (&*x * &inv).mod_floor(q);
        }
        for i in 0..n {
            if i == c || m[i][c].is_zero() {
                continue;
            }
            let f = m[i][c].clone();
            let pr = m[c].clone();
            for (x, y) in m[i].iter_mut().zip(&pr) {
                *x = (&*x - &f * y).mod_floor(q);
            }
        }
    }
    Some(m.into_iter().map(|row| row[n..].to_vec()).collect())
}

pub fn mod_inverse(a: &BigInt, q: &BigInt) -> Option<BigInt> {
    let e = a.mod_floor(q).extended_gcd(q);
    if e.gcd.is_one() {
        Some(e.x.mod_floor(q))
    } else {
        None
    }
}

pub fn mat_mul(a: &[Vec<BigInt>], b: &[Vec<BigInt>]) -> IntMatrix {
    let k = b.len();
    let n = if k == 0 { 0 } else { b[0].len() };
    a.iter()
        .map(|row| {
            (0..n)
                .map(|j| (0..k).map(|t| &row[t] * &b[t][j]).sum())
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> IntMatrix {
        to_int_matrix(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>())
    }

    #[test]
    fn determinant_and_smith_agree_on_group_ring_embedding() {
        // 1+g+g^2 together with the augmentation-zero lattice in Z[C_3].
        let a = m(&[&[1, 1, 1], &[1, -1, 0], &[0, 1, -1]]);
        assert_eq!(det_bareiss(&a), BigInt::from(3));
        let d = smith_divisors(&a);
        assert_eq!(d, vec![BigInt::from(1), BigInt::from(1), BigInt::from(3)]);
    }

    #[test]
    fn smith_of_diagonal_needs_gcd_step() {
        let a = m(&[&[2, 0], &[0, 3]]);
        assert_eq!(smith_divisors(&a), vec![BigInt::from(1), BigInt::from(6)]);
        let b = m(&[&[4, 0, 0], &[0, 6, 0], &[0, 0, 0]]);
        assert_eq!(smith_divisors(&b), vec![BigInt::from(2), BigInt::from(12)]);
    }

    #[test]
    fn hnf_is_canonical() {
        let a = m(&[&[2, 4], &[3, 5]]);
        let b = m(&[&[5, 9], &[2, 4]]);
        assert_eq!(hnf(&a), hnf(&b));
        assert_eq!(hnf(&a), m(&[&[1, 1], &[0, 2]]));
    }

    #[test]
    fn kernel_of_rank_one_map() {
        let a = m(&[&[1, 2], &[2, 4], &[3, 6]]);
        let k = left_kernel(&a);
        assert_eq!(k.len(), 2);
        for y in &k {
            for c in 0..2 {
                let s: BigInt = (0..3).map(|i| &y[i] * &a[i][c]).sum();
                assert!(s.is_zero());
            }
        }
    }

    #[test]
    fn inverse_modulo_prime_power() {
        let a = m(&[&[1, 3], &[2, 4]]); // det -2, a unit mod 9
        let q = BigInt::from(9);
        let inv = inverse_mod(&a, &q).unwrap();
        let prod = mat_mul(&a, &inv);
        for (i, row) in prod.iter().enumerate() {
            for (j, x) in row.iter().enumerate() {
                assert_eq!(x.mod_floor(&q), BigInt::from(u8::from(i == j)));
            }
        }
        assert!(inverse_mod(&m(&[&[3, 0], &[0, 1]]), &q).is_none());
    }
}
