use proptest::prelude::*;

use dihedral_parity::fplinalg::{BilinearSpace, FpMatrix, Subspace};

const P: u64 = 5;
const N: usize = 6;

fn vectors(max: usize) -> impl Strategy<Value = Vec<Vec<u64>>> {
    prop::collection::vec(prop::collection::vec(0..P, N), 0..=max)
}

fn span(vs: &[Vec<u64>]) -> Subspace {
    Subspace::from_vectors(P, N, vs)
}

/// A symmetric or alternating Gram matrix; may be degenerate.
fn gram(entries: &[u64], alternating: bool) -> FpMatrix {
    let mut m = FpMatrix::zeros(P, N, N);
    let mut k = 0;
    for i in 0..N {
        for j in i..N {
            let x = entries[k];
            k += 1;
            if i == j {
                m.set(i, i, if alternating { 0 } else { x });
            } else {
                m.set(i, j, x);
                m.set(j, i, if alternating { (P - x) % P } else { x });
            }
        }
    }
    m
}

proptest! {
    #[test]
    fn dimension_formula(a in vectors(5), b in vectors(5)) {
        let (u, v) = (span(&a), span(&b));
        let (s, i) = u.sum_intersect(&v).unwrap();
        prop_assert_eq!(s.dim() + i.dim(), u.dim() + v.dim());
        prop_assert!(i.is_subspace_of(&u) && i.is_subspace_of(&v));
        prop_assert!(u.is_subspace_of(&s) && v.is_subspace_of(&s));
        prop_assert_eq!(s, u.sum(&v).unwrap());
    }

    #[test]
    fn modular_law(a in vectors(3), b in vectors(4), c in vectors(3)) {
        let v = span(&b);
        let w = span(&a).sum(&span(&c)).unwrap();
        let u = span(&a);
        let left = u.sum(&v.intersect(&w).unwrap()).unwrap();
        let right = u.sum(&v).unwrap().intersect(&w).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn annihilator_is_an_involution(a in vectors(6)) {
        let u = span(&a);
        let ann = u.annihilator();
        prop_assert_eq!(ann.dim() + u.dim(), N);
        prop_assert_eq!(ann.annihilator(), u);
    }

    #[test]
    fn double_complement(a in vectors(6), entries in prop::collection::vec(0..P, N * (N + 1) / 2), alt in any::<bool>()) {
        let Ok(b) = BilinearSpace::new(gram(&entries, alt)) else { return Ok(()); };
        prop_assume!(b.is_nondegenerate());
        let u = span(&a);
        let perp = b.orth_complement(&u).unwrap();
        prop_assert_eq!(perp.dim() + u.dim(), N);
        prop_assert_eq!(b.orth_complement(&perp).unwrap(), u);
    }

    #[test]
    fn random_lagrangians(d in 1usize..5, seed in any::<u64>()) {
        let b = BilinearSpace::hyperbolic(P, d);
        let l = b.random_max_isotropic(seed).unwrap();
        prop_assert_eq!(l.dim(), d);
        prop_assert!(b.is_isotropic(&l));
        prop_assert_eq!(b.orth_complement(&l).unwrap(), l);
    }

    #[test]
    fn preimage_and_image(a in vectors(4), rows in prop::collection::vec(prop::collection::vec(0..P, N), N)) {
        let map = FpMatrix::from_vecs(P, N, &rows);
        let u = span(&a);
        let back = u.preimage(&map).unwrap();
        prop_assert!(back.image(&map).unwrap().is_subspace_of(&u));
        for v in back.basis_vectors() {
            prop_assert!(u.contains(&map.vec_mul(&v)));
        }
    }
}

#[test]
fn hyperbolic_plane_is_split() {
    let b = BilinearSpace::hyperbolic(3, 2);
    assert!(b.is_split() && b.is_nondegenerate());
    assert_eq!(b.dim(), 4);
}
