use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::intmat::{det_bareiss, hnf, left_kernel, smith_divisors, IntMatrix};
use super::ring::CycRing;
use super::CycError;

/// Largest `p^n` handled by default.
pub fn default_bound(p: u64) -> u64 {
    match p {
        3 => 81,
        5 => 25,
        7 => 49,
        _ => p,
    }
}

/// The component of `Z[G]` on which `g` acts through `ζ_{p^j}`.
#[derive(Clone, Debug, Serialize)]
pub struct LevelComponent {
    pub level: u32,
    pub rank: usize,
    #[serde(skip)]
    pub basis: IntMatrix,
    /// Inside `Z[G/G^{p^j}]` the component maps onto `π^{p^{j-1}} R_j` (onto Z at level 0).
    pub image_matches_at_own_level: bool,
    /// Inside the full `Z[G]` the image is `p^{n-j}` times that.
    pub image_matches_in_full_group_ring: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct GroupRingLattice {
    pub p: u64,
    pub n: u32,
    pub components: Vec<LevelComponent>,
    /// `[Z[G] : ⊕ 𝓘_j]`, as a decimal string.
    pub index: String,
    pub index_is_p_power: bool,
    pub elementary_divisors: Vec<String>,
    pub total_rank: usize,
}

impl GroupRingLattice {
    pub fn passed(&self) -> bool {
        self.index_is_p_power
            && self.total_rank == self.components.iter().map(|c| c.rank).sum::<usize>()
            && self.components.iter().all(|c| c.image_matches_at_own_level && c.image_matches_in_full_group_ring)
    }
}

/// Row of `ev_k(g^t)` in the power basis of `Z[ζ_{p^k}]`, for all `t < N`.
fn evaluation_matrix(p: u64, k: u32, order: usize) -> IntMatrix {
    if k == 0 {
        return (0..order).map(|_| vec![BigInt::one()]).collect();
    }
    let r = CycRing::new(p, k).expect("valid level");
    (0..order).map(|t| r.zeta_pow(t as i64).coeffs().to_vec()).collect()
}

/// `{x ∈ Z[C_{p^m}] : x(ζ_{p^k}) = 0 for all k ≤ m, k ≠ j}`.
fn component_basis(p: u64, m: u32, j: u32) -> IntMatrix {
    let order = p.pow(m) as usize;
    let mut cols: IntMatrix = vec![Vec::new(); order];
    for k in (0..=m).filter(|&k| k != j) {
        for (row, ev) in cols.iter_mut().zip(evaluation_matrix(p, k, order)) {
            row.extend(ev);
        }
    }
    if cols[0].is_empty() {
        return (0..order)
            .map(|i| (0..order).map(|t| BigInt::from(u8::from(i == t))).collect())
            .collect();
    }
    left_kernel(&cols)
}

/// Image lattice (HNF) of `basis` under `ev_j`.
fn image_hnf(p: u64, j: u32, basis: &IntMatrix) -> IntMatrix {
    let order = basis.first().map_or(0, Vec::len);
    let ev = evaluation_matrix(p, j, order);
    let width = ev[0].len();
    let rows: IntMatrix = basis
        .iter()
        .map(|x| (0..width).map(|c| x.iter().zip(&ev).map(|(a, e)| a * &e[c]).sum()).collect())
        .collect();
    hnf(&rows)
}

/// HNF of `scale · π^{p^{j-1}} R_j` (or `scale · Z` at level 0).
fn expected_hnf(p: u64, j: u32, scale: &BigInt) -> IntMatrix {
    if j == 0 {
        return vec![vec![scale.clone()]];
    }
    let r = CycRing::new(p, j).unwrap();
    let g = r.pow(&r.pi(), r.ramification_step() as u64);
    let rows: IntMatrix = (0..r.degree())
        .map(|k| r.mul(&g, &r.zeta_pow(k as i64)).coeffs().iter().map(|c| c * scale).collect())
        .collect();
    hnf(&rows)
}

pub fn group_ring_split(p: u64, n: u32) -> Result<GroupRingLattice, CycError> {
    group_ring_split_bounded(p, n, default_bound(p))
}

pub fn group_ring_split_bounded(p: u64, n: u32, bound: u64) -> Result<GroupRingLattice, CycError> {
    CycRing::new(p, n)?;
    let order = p.checked_pow(n).ok_or(CycError::TooLarge(u64::MAX))?;
    if order > bound {
        return Err(CycError::TooLarge(order));
    }
    let pb = BigInt::from(p);
    let mut components = Vec::new();
    let mut stacked: IntMatrix = Vec::new();
    for j in 0..=n {
        let basis = component_basis(p, n, j);
        let own = component_basis(p, j, j);
        let own_ok = image_hnf(p, j, &own) == expected_hnf(p, j, &BigInt::one());
        let full_ok = image_hnf(p, j, &basis) == expected_hnf(p, j, &pb.pow(n - j));
        stacked.extend(basis.iter().cloned());
        components.push(LevelComponent {
            level: j,
            rank: basis.len(),
            basis,
            image_matches_at_own_level: own_ok,
            image_matches_in_full_group_ring: full_ok,
        });
    }
    let total_rank = stacked.len();
    let index = if total_rank == order as usize { det_bareiss(&stacked).abs() } else { BigInt::zero() };
    let mut rest = index.clone();
    while !rest.is_zero() && rest.is_multiple_of(&pb) {
        rest /= &pb;
    }
    Ok(GroupRingLattice {
        p,
        n,
        components,
        index_is_p_power: rest.is_one(),
        index: index.to_string(),
        elementary_divisors: smith_divisors(&stacked).iter().map(ToString::to_string).collect(),
        total_rank,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_three() {
        let g = group_ring_split(3, 1).unwrap();
        assert_eq!(g.index, "3");
        let k = &g.components[0];
        assert_eq!(k.basis.len(), 1);
        assert!(k.basis[0].iter().all(|x| x.abs().is_one()));
        let l = &g.components[1];
        assert_eq!(l.rank, 2);
        for v in &l.basis {
            assert!(v.iter().sum::<BigInt>().is_zero());
        }
        assert!(g.passed());
    }

    #[test]
    fn order_nine_top_level_is_pi_cubed() {
        let g = group_ring_split(3, 2).unwrap();
        assert!(g.components[2].image_matches_at_own_level);
        assert!(g.components[2].image_matches_in_full_group_ring);
        assert_eq!(g.total_rank, 9);
        assert!(g.passed());
    }

    #[test]
    fn other_small_orders() {
        for (p, n) in [(5, 1), (7, 1), (3, 3), (5, 2)] {
            let g = group_ring_split(p, n).unwrap();
            assert!(g.passed(), "({p},{n})");
        }
    }

    #[test]
    fn bound_is_enforced() {
        assert_eq!(group_ring_split(5, 3).unwrap_err(), CycError::TooLarge(125));
    }
}
