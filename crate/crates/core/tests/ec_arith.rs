use num_bigint::BigInt;

use dihedral_parity::ec_arith::{torsion_dim_exhaustive, Curve, CurveFq, Model, ReductionType};

const CONDUCTORS: [([i64; 5], i128); 14] = [
    ([0, -1, 1, -10, -20], 11),
    ([1, 0, 1, 4, -6], 14),
    ([1, 1, 1, -10, -10], 15),
    ([0, 1, 0, 4, 4], 20),
    ([0, -1, 0, -4, 4], 24),
    ([0, 0, 1, 0, -7], 27),
    ([0, 0, 0, 4, 0], 32),
    ([0, 0, 0, 0, 1], 36),
    ([0, 0, 1, -1, 0], 37),
    ([1, -1, 0, -2, -1], 49),
    ([0, 0, 0, -4, 0], 64),
    ([0, 1, 1, -2, 0], 389),
    ([0, 0, 1, -7, 6], 5077),
    ([0, 0, 0, -1, 0], 32),
];

#[test]
fn known_conductors() {
    for (a, n) in CONDUCTORS {
        let c = Curve::new(a).unwrap();
        assert_eq!(c.conductor_i128(), Some(n), "{a:?}");
    }
}

#[test]
fn known_traces() {
    let cases: [([i64; 5], [(u64, i64); 4]); 2] = [
        ([0, -1, 1, -10, -20], [(2, -2), (3, -1), (5, 1), (7, -2)]),
        ([0, 0, 1, -1, 0], [(2, -2), (3, -3), (5, -2), (7, -1)]),
    ];
    for (a, traces) in cases {
        let c = Curve::new(a).unwrap();
        for (ell, t) in traces {
            assert_eq!(c.frobenius(ell).unwrap().a_ell, t, "{a:?} at {ell}");
        }
    }
}

#[test]
fn tamagawa_products() {
    for (a, prod) in [([0, -1, 1, -10, -20], 5), ([1, 0, 1, 4, -6], 6), ([1, 1, 1, -10, -10], 8)] {
        let c = Curve::new(a).unwrap();
        assert_eq!(c.bad.iter().map(|r| r.tamagawa).product::<u32>(), prod, "{a:?}");
    }
}

/// On a nodal cubic over F_ℓ the node plus the nonsingular points number
/// ℓ when the tangents are rational and ℓ + 2 otherwise; a cusp gives ℓ + 1.
#[test]
fn singular_fibre_counts() {
    let mut seen = [0usize; 3];
    for (a, _) in CONDUCTORS {
        let c = Curve::new(a).unwrap();
        for r in &c.bad {
            let ell = r.prime;
            let n = CurveFq::new(c.coeffs(), ell, 1).count_points();
            let expected = match r.kind {
                ReductionType::MultiplicativeSplit => ell,
                ReductionType::MultiplicativeNonsplit => ell + 2,
                _ => ell + 1,
            };
            assert_eq!(n, expected, "{a:?} at {ell}: {:?}", r.kind);
            seen[match r.kind {
                ReductionType::MultiplicativeSplit => 0,
                ReductionType::MultiplicativeNonsplit => 1,
                _ => 2,
            }] += 1;
        }
    }
    assert!(seen.iter().all(|&k| k > 0), "{seen:?}");
}

#[test]
fn non_minimal_models_reduce() {
    let base = Curve::new([0, 0, 1, -1, 0]).unwrap();
    let (r, s, t) = (BigInt::from(3), BigInt::from(-2), BigInt::from(5));
    for u in [2i64, 3, 6] {
        let m = Model::new([0, 0, 1, -1, 0]).transform(&r, &s, &t).scale_up(u);
        let c = Curve::from_model(m).unwrap();
        assert_eq!(c.conductor, base.conductor, "u = {u}");
        assert_eq!(c.coeffs(), base.coeffs(), "u = {u}");
        assert_eq!(c.discriminant, base.discriminant);
    }
}

#[test]
fn singular_input_rejected() {
    assert!(Curve::new([0, 0, 0, 0, 0]).is_err());
    assert!(Curve::new([0, 0, 0, -3, 2]).is_err());
}

#[test]
fn hasse_and_quadratic_counts() {
    let c = Curve::new([1, 0, 1, 4, -6]).unwrap();
    for ell in [3u64, 5, 11, 13, 17, 19, 23] {
        let fr = c.frobenius(ell).unwrap();
        assert!(fr.a_ell * fr.a_ell <= 4 * ell as i64);
        assert_eq!(c.count_exhaustive(ell, 2).unwrap() as u128, fr.count(2));
    }
}

#[test]
fn full_torsion_over_quadratic_extension() {
    // 14a1 has a rational point of order 3, so E(F_ℓ²)[3] is never trivial;
    // for some ℓ ≡ 2 mod 3 all of E[3] is defined over F_ℓ².
    let c = Curve::new([1, 0, 1, 4, -6]).unwrap();
    let mut found = false;
    for ell in [5u64, 11, 17, 23, 29, 41, 47] {
        let d = c.torsion_dim_mod_p(ell, 2, 3).unwrap();
        assert!(d >= 1, "rational 3-torsion survives at {ell}");
        let e = CurveFq::new(c.coeffs(), ell, 2);
        assert_eq!(d, torsion_dim_exhaustive(&e, 3));
        found |= d == 2;
    }
    assert!(found, "no ℓ with E(F_ℓ²)[3] of dimension 2");
}
