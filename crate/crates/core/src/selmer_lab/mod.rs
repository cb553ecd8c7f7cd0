//! Finite-dimensional models of self-dual Selmer structures.
//!
//! Each place carries a split symmetric space `V_v` with two Lagrangians `F_v`,
//! `G_v`. The global cohomology is modelled as `C ⊕ F_p^z` where `C` is a
//! Lagrangian of `B = ⊕ V_v` and the `z` extra classes localize to zero.

mod campaign;
mod howard;

pub use campaign::{run_campaign, CampaignConfig, CampaignFailure, CampaignSummary};
pub use howard::{howard_pairing, HowardPairing};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::fplinalg::{BilinearSpace, FpMatrix, LinalgError, Subspace};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Structure {
    F,
    G,
    Sum,
    Meet,
}

impl Structure {
    pub const ALL: [Structure; 4] = [Structure::F, Structure::G, Structure::Sum, Structure::Meet];
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalPlace {
    pub label: String,
    pub space: BilinearSpace,
    pub cond_f: Subspace,
    pub cond_g: Subspace,
}

impl LocalPlace {
    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn cond(&self, s: Structure) -> Subspace {
        match s {
            Structure::F => self.cond_f.clone(),
            Structure::G => self.cond_g.clone(),
            Structure::Sum => self.cond_f.sum(&self.cond_g).expect("same ambient"),
            Structure::Meet => self.cond_f.intersect(&self.cond_g).expect("same ambient"),
        }
    }

    /// `dim F_v / (F_v ∩ G_v)`.
    pub fn local_index(&self) -> usize {
        self.cond_f.dim() - self.cond(Structure::Meet).dim()
    }

    fn check(&self) -> Result<(), String> {
        if !self.space.is_split() {
            return Err(format!("{}: local space not split", self.label));
        }
        for (name, c) in [("F", &self.cond_f), ("G", &self.cond_g)] {
            let perp = self.space.orth_complement(c).map_err(|e| e.to_string())?;
            if perp != *c {
                return Err(format!("{}: cond_{name} is not its own orthogonal complement", self.label));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ToySelmerSystem {
    pub p: u64,
    pub places: Vec<LocalPlace>,
    pub global_image: Subspace,
    pub locally_trivial_dim: usize,
}

/// Dimensions and bases of `H_X` for the four structures, as subspaces of the
/// global space `F_p^{dim C + z}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SelmerComputation {
    pub f: Subspace,
    pub g: Subspace,
    pub sum: Subspace,
    pub meet: Subspace,
}

impl SelmerComputation {
    pub fn get(&self, s: Structure) -> &Subspace {
        match s {
            Structure::F => &self.f,
            Structure::G => &self.g,
            Structure::Sum => &self.sum,
            Structure::Meet => &self.meet,
        }
    }
}

impl ToySelmerSystem {
    pub fn ambient(&self) -> BilinearSpace {
        let parts: Vec<&BilinearSpace> = self.places.iter().map(|pl| &pl.space).collect();
        BilinearSpace::orthogonal_sum(self.p, &parts)
    }

    pub fn local_dim(&self) -> usize {
        self.places.iter().map(|pl| pl.dim()).sum()
    }

    pub fn global_dim(&self) -> usize {
        self.global_image.dim() + self.locally_trivial_dim
    }

    pub(crate) fn offsets(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.places.len());
        let mut off = 0;
        for pl in &self.places {
            out.push(off);
            off += pl.dim();
        }
        out
    }

    /// Localization as a matrix acting on row vectors of the global space:
    /// the basis of `C` followed by `z` zero rows.
    pub fn localization(&self) -> FpMatrix {
        let z = FpMatrix::zeros(self.p, self.locally_trivial_dim, self.local_dim());
        self.global_image.basis().vstack(&z)
    }

    /// `⊕_v X_v` inside `B`.
    pub fn local_condition(&self, s: Structure) -> Subspace {
        let n = self.local_dim();
        let mut vs = Vec::new();
        for (pl, off) in self.places.iter().zip(self.offsets()) {
            for b in pl.cond(s).basis_vectors() {
                let mut v = vec![0u64; n];
                v[off..off + b.len()].copy_from_slice(&b);
                vs.push(v);
            }
        }
        Subspace::from_vectors(self.p, n, &vs)
    }

    pub fn selmer_group(&self, s: Structure) -> Subspace {
        self.local_condition(s)
            .preimage(&self.localization())
            .expect("localization matches ambient")
    }

    pub fn selmer(&self) -> SelmerComputation {
        SelmerComputation {
            f: self.selmer_group(Structure::F),
            g: self.selmer_group(Structure::G),
            sum: self.selmer_group(Structure::Sum),
            meet: self.selmer_group(Structure::Meet),
        }
    }

    /// Checks every type invariant; `Err` names the first one that fails.
    pub fn validate(&self) -> Result<(), String> {
        for pl in &self.places {
            if pl.space.p() != self.p {
                return Err(format!("{}: modulus mismatch", pl.label));
            }
            pl.check()?;
        }
        let b = self.ambient();
        if self.global_image.ambient_dim() != b.dim() {
            return Err("global image has wrong ambient dimension".into());
        }
        let perp = b.orth_complement(&self.global_image).map_err(|e| e.to_string())?;
        if perp != self.global_image {
            return Err("global image is not Lagrangian".into());
        }
        Ok(())
    }
}

pub fn selmer_dim(sys: &ToySelmerSystem, s: Structure) -> usize {
    sys.selmer_group(s).dim()
}

/// Random `k`-dimensional subspace of `u`.
fn random_subspace_of<R: Rng + ?Sized>(u: &Subspace, k: usize, rng: &mut R) -> Subspace {
    let p = u.p();
    let mut cur = Subspace::zero(p, u.ambient_dim());
    while cur.dim() < k {
        let c: Vec<u64> = (0..u.dim()).map(|_| rng.gen_range(0..p)).collect();
        let v = u.basis().vec_mul(&c);
        if !cur.contains(&v) {
            cur = cur.sum(&Subspace::from_vectors(p, u.ambient_dim(), &[v])).expect("same ambient");
        }
    }
    cur
}

/// Random instance with `num_places` places, each of half-dimension in
/// `1..=max_d`, and `z` locally trivial classes. Deterministic in `seed`.
pub fn generate_system(
    p: u64,
    num_places: usize,
    max_d: usize,
    z: usize,
    seed: u64,
) -> Result<ToySelmerSystem, LinalgError> {
    assert!(num_places >= 1 && max_d >= 1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    generate_with(p, num_places, max_d, z, &mut rng)
}

/// [`generate_system`] drawing from a caller's generator.
pub fn generate_with<R: Rng + ?Sized>(
    p: u64,
    num_places: usize,
    max_d: usize,
    z: usize,
    rng: &mut R,
) -> Result<ToySelmerSystem, LinalgError> {
    let mut places = Vec::with_capacity(num_places);
    for i in 0..num_places {
        let d = rng.gen_range(1..=max_d);
        let space = BilinearSpace::hyperbolic(p, d);
        let cond_f = space.random_max_isotropic_with(rng)?;
        // Prescribe a lower bound on dim(F ∩ G) so that every overlap occurs.
        let k = rng.gen_range(0..=d);
        let shared = random_subspace_of(&cond_f, k, rng);
        let cond_g = space.extend_to_max_isotropic_with(&shared, rng)?;
        places.push(LocalPlace { label: format!("v{i}"), space, cond_f, cond_g });
    }
    let mut sys = ToySelmerSystem {
        p,
        places,
        global_image: Subspace::zero(p, 0),
        locally_trivial_dim: z,
    };
    let b = sys.ambient();
    // Bias C towards meeting ⊕F or ⊕G so Selmer groups are not always tiny.
    let seed_space = match rng.gen_range(0..3) {
        0 => Subspace::zero(p, b.dim()),
        1 => sys.local_condition(Structure::F),
        _ => sys.local_condition(Structure::G),
    };
    let j = rng.gen_range(0..=seed_space.dim());
    let start = random_subspace_of(&seed_space, j, rng);
    sys.global_image = b.extend_to_max_isotropic_with(&start, rng)?;
    Ok(sys)
}

/// Both sides of the exact global duality identity and of the two parity
/// congruences, with pass flags.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DualityReport {
    pub dim_f: usize,
    pub dim_g: usize,
    pub dim_sum: usize,
    pub dim_meet: usize,
    pub dim_f_plus_g: usize,
    /// `Σ_v dim F_v/(F_v ∩ G_v)`.
    pub local_sum: usize,
    pub exact_identity: bool,
    pub sum_parity: bool,
    pub difference_parity: bool,
}

impl DualityReport {
    pub fn passed(&self) -> bool {
        self.exact_identity && self.sum_parity && self.difference_parity
    }
}

pub fn check_global_duality(sys: &ToySelmerSystem) -> DualityReport {
    let h = sys.selmer();
    let f_plus_g = h.f.sum(&h.g).expect("same ambient");
    let local_sum: usize = sys.places.iter().map(LocalPlace::local_index).sum();
    let (dim_f, dim_g, dim_sum, dim_meet) = (h.f.dim(), h.g.dim(), h.sum.dim(), h.meet.dim());
    DualityReport {
        dim_f,
        dim_g,
        dim_sum,
        dim_meet,
        dim_f_plus_g: f_plus_g.dim(),
        local_sum,
        exact_identity: dim_sum - dim_meet == local_sum,
        sum_parity: (dim_sum + f_plus_g.dim()) % 2 == 0,
        difference_parity: (dim_f + dim_g + local_sum) % 2 == 0,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn plane_system(cond_f: Vec<u64>, cond_g: Vec<u64>, c: Vec<u64>) -> ToySelmerSystem {
        let space = BilinearSpace::hyperbolic(3, 1);
        ToySelmerSystem {
            p: 3,
            places: vec![LocalPlace {
                label: "v0".into(),
                space,
                cond_f: Subspace::from_vectors(3, 2, &[cond_f]),
                cond_g: Subspace::from_vectors(3, 2, &[cond_g]),
            }],
            global_image: Subspace::from_vectors(3, 2, &[c]),
            locally_trivial_dim: 0,
        }
    }

    #[test]
    fn smallest_instance() {
        let sys = generate_system(3, 1, 1, 0, 5).unwrap();
        assert_eq!(sys.local_dim(), 2);
        assert_eq!(sys.global_image.dim(), 1);
        sys.validate().unwrap();
    }

    #[test]
    fn generated_systems_are_valid_and_deterministic() {
        let a = generate_system(5, 3, 2, 2, 99).unwrap();
        a.validate().unwrap();
        assert_eq!(a, generate_system(5, 3, 2, 2, 99).unwrap());
        assert_eq!(a.global_dim(), a.local_dim() / 2 + 2);
    }

    #[test]
    fn selmer_dim_when_c_is_cond_f() {
        // Every vector of C = span(e) lies in cond_F, so H_F = C.
        let sys = plane_system(vec![1, 0], vec![0, 1], vec![1, 0]);
        assert_eq!(selmer_dim(&sys, Structure::F), 1);
        assert_eq!(selmer_dim(&sys, Structure::G), 0);
        assert_eq!(selmer_dim(&sys, Structure::Meet), 0);
        assert_eq!(selmer_dim(&sys, Structure::Sum), 1);
        let r = check_global_duality(&sys);
        assert_eq!(r.dim_sum - r.dim_meet, 1);
        assert_eq!(r.local_sum, 1);
        assert!(r.passed());
    }

    #[test]
    fn equal_structures_collapse() {
        let mut sys = generate_system(7, 3, 3, 1, 4).unwrap();
        for pl in &mut sys.places {
            pl.cond_g = pl.cond_f.clone();
        }
        let f = selmer_dim(&sys, Structure::F);
        assert_eq!(selmer_dim(&sys, Structure::Sum), f);
        assert_eq!(selmer_dim(&sys, Structure::Meet), f);
        let r = check_global_duality(&sys);
        assert_eq!(r.local_sum, 0);
        assert_eq!(r.dim_sum - r.dim_meet, 0);
    }

    #[test]
    fn selmer_groups_are_nested() {
        for seed in 0..30 {
            let sys = generate_system(3, 3, 3, 2, seed).unwrap();
            let h = sys.selmer();
            assert!(h.meet.is_subspace_of(&h.f) && h.meet.is_subspace_of(&h.g));
            assert!(h.f.is_subspace_of(&h.sum) && h.g.is_subspace_of(&h.sum));
            assert_eq!(h.f.intersect(&h.g).unwrap(), h.meet);
        }
    }
}
