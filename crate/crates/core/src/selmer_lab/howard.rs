use serde::{Deserialize, Serialize};

use crate::fplinalg::{FpMatrix, Subspace};

use super::{Structure, ToySelmerSystem};

/// The skew pairing `[x, y] = <x_F, y_G>` on `H_{F+G}`, in the basis `basis`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct HowardPairing {
    pub basis: Vec<Vec<u64>>,
    pub matrix: FpMatrix,
    pub kernel: Subspace,
    pub rank: usize,
}

impl HowardPairing {
    pub fn is_skew(&self) -> bool {
        let p = self.matrix.p();
        let n = self.matrix.rows();
        (0..n).all(|i| (0..n).all(|j| (self.matrix.get(i, j) + self.matrix.get(j, i)) % p == 0))
    }
}

/// Per-place splitting of `F_v + G_v` as `I_v ⊕ A_v ⊕ B_v` with
/// `I_v = F_v ∩ G_v`, `I_v ⊕ A_v = F_v`, `I_v ⊕ B_v = G_v`.
struct PlaceSplit {
    frame: FpMatrix,
    meet: usize,
    a: usize,
}

impl PlaceSplit {
    fn new(sys: &ToySelmerSystem, v: usize) -> Self {
        let pl = &sys.places[v];
        let meet = pl.cond(Structure::Meet);
        let a = meet.complement_in(&pl.cond_f);
        let b = meet.complement_in(&pl.cond_g);
        let mut rows = meet.basis_vectors();
        let (m, na) = (rows.len(), a.len());
        rows.extend(a);
        rows.extend(b);
        Self { frame: FpMatrix::from_vecs(sys.p, pl.dim(), &rows), meet: m, a: na }
    }

    /// `(x_F, x_G)` components of a local vector lying in `F_v + G_v`.
    fn project(&self, x: &[u64]) -> (Vec<u64>, Vec<u64>) {
        let c = self.frame.solve_left(x).expect("localization lies in F_v + G_v");
        let mut cf = vec![0u64; c.len()];
        let mut cg = vec![0u64; c.len()];
        cf[self.meet..self.meet + self.a].copy_from_slice(&c[self.meet..self.meet + self.a]);
        cg[self.meet + self.a..].copy_from_slice(&c[self.meet + self.a..]);
        (self.frame.vec_mul(&cf), self.frame.vec_mul(&cg))
    }
}

pub fn howard_pairing(sys: &ToySelmerSystem) -> HowardPairing {
    let p = sys.p;
    let h = sys.selmer_group(Structure::Sum);
    let basis = h.basis_vectors();
    let loc = sys.localization();
    let offsets = sys.offsets();
    let splits: Vec<PlaceSplit> = (0..sys.places.len()).map(|v| PlaceSplit::new(sys, v)).collect();

    // comps[i][v] = (x_F, x_G) at place v for the i-th basis vector.
    let comps: Vec<Vec<(Vec<u64>, Vec<u64>)>> = basis
        .iter()
        .map(|x| {
            let xs = loc.vec_mul(x);
            splits
                .iter()
                .zip(&offsets)
                .zip(&sys.places)
                .map(|((sp, &off), pl)| sp.project(&xs[off..off + pl.dim()]))
                .collect()
        })
        .collect();

    let k = basis.len();
    let mut m = FpMatrix::zeros(p, k, k);
    for i in 0..k {
        for j in 0..k {
            let mut acc = 0u64;
            for (v, pl) in sys.places.iter().enumerate() {
                acc = (acc + pl.space.pair(&comps[i][v].0, &comps[j][v].1)) % p;
            }
            m.set(i, j, acc);
        }
    }

    let global = sys.global_dim();
    let kernel = if k == 0 {
        Subspace::zero(p, global)
    } else {
        let lk = m.left_kernel();
        if lk.rows() == 0 {
            Subspace::zero(p, global)
        } else {
            Subspace::span(&lk.mul(h.basis()).expect("shapes agree"))
        }
    };
    let rank = m.rank();
    HowardPairing { basis, matrix: m, kernel, rank }
}
