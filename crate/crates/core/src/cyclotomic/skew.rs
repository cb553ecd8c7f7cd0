use rand::Rng;

use super::module::{is_equivariant_semilinear, FiniteCycModule, Involution, ModElem, SemilinearPairing};
use super::ring::{CycElement, CycRing};
use super::intmat::hnf;
use super::CycError;

use num_bigint::BigInt;
use num_traits::One;

/// A finite module with a skew-Hermitian pairing and a compatible involution.
#[derive(Clone, Debug)]
pub struct SkewSystem {
    pub pairing: SemilinearPairing,
    pub involution: Involution,
}

/// `W = M ⊕ M'` with `M = ⊕ R x_i`, `M' = ⊕ R y_i`, `R x_i ≅ R y_i ≅ R/π^{a_i}`.
#[derive(Clone, Debug)]
pub struct Decomposition {
    pub m: Vec<ModElem>,
    pub m_prime: Vec<ModElem>,
    /// `a_i`, the π-adic orders of the paired generators.
    pub orders: Vec<usize>,
    /// `dim_{F_p} W[p]`.
    pub socle_dim: usize,
    /// `dim_{F_p} W[π]`.
    pub pi_torsion_dim: usize,
}

impl Decomposition {
    /// `dim (R/π^a)[p] = min(a, φ)`, summed over `M`.
    pub fn half_socle_dim(&self, phi: usize) -> usize {
        self.orders.iter().map(|&a| a.min(phi)).sum()
    }
}

/// `B'(v, w) = ⟨v, c w⟩`: R-bilinear and alternating.
fn twisted(sys: &SkewSystem, v: &[CycElement], w: &[CycElement]) -> CycElement {
    let m = &sys.pairing.module;
    sys.pairing.eval(v, &sys.involution.apply(m, w))
}

/// `v / π^c` in the truncated ring, for `v` divisible by `π^c`.
fn div_pi_power(ring: &CycRing, v: &CycElement, c: usize) -> CycElement {
    match ring.unit_part(v) {
        None => ring.zero(),
        Some((k, u)) => {
            debug_assert!(k >= c);
            ring.mul(&ring.pow(&ring.pi(), (k - c) as u64), &ring.coerce(&u))
        }
    }
}

pub fn decompose_skew_hermitian(sys: &SkewSystem) -> Result<Decomposition, CycError> {
    let sp = &sys.pairing;
    let w = &sp.module;
    let ring = w.ring().clone();
    let phi = ring.degree();
    let top = w.max_exp() as usize * phi;
    if !sp.is_skew_hermitian() {
        return Err(CycError::KindMismatch("skew-Hermitian"));
    }
    if !sys.involution.is_involution(w) || !is_equivariant_semilinear(sp, &sys.involution) {
        return Err(CycError::KindMismatch("equivariant for the involution"));
    }
    if !sp.is_nondegenerate() {
        return Err(CycError::Degenerate);
    }

    let mut gens: Vec<ModElem> = (0..w.rank()).map(|i| w.generator(i)).collect();
    let (mut ms, mut mps, mut orders) = (Vec::new(), Vec::new(), Vec::new());
    loop {
        gens.retain(|h| !w.is_zero(h));
        let Some(ix) = (0..gens.len()).rev().max_by_key(|&i| w.order_exponent(&gens[i])) else { break };
        let x = gens.remove(ix);
        let a = w.order_exponent(&x);
        // The image of B'(x, -) is generated by a value of least valuation.
        let (iy, val) = gens
            .iter()
            .enumerate()
            .filter_map(|(j, h)| ring.valuation(&twisted(sys, &x, h)).map(|v| (j, v)))
            .min_by_key(|&(_, v)| v)
            .ok_or(CycError::Degenerate)?;
        if top - val != a {
            return Err(CycError::DecompositionFailed(format!("no partner of order {a}")));
        }
        let y = gens.remove(iy);
        let c = top - a;
        let eps = twisted(sys, &x, &y);
        let (_, u) = ring.unit_part(&eps).unwrap();
        let uinv = ring.inverse_unit(&ring.coerce(&u))?;
        // Project the remaining generators onto the orthogonal of R x + R y.
        gens = gens
            .iter()
            .map(|h| {
                let hx = twisted(sys, h, &x);
                let hy = twisted(sys, h, &y);
                let alpha = ring.mul(&div_pi_power(&ring, &hy, c), &uinv);
                let beta = ring.neg(&ring.mul(&div_pi_power(&ring, &hx, c), &uinv));
                w.sub(&w.sub(h, &w.scalar(&alpha, &x)), &w.scalar(&beta, &y))
            })
            .collect();
        ms.push(x);
        mps.push(y);
        orders.push(a);
    }

    let dec = Decomposition {
        m: ms,
        m_prime: mps,
        orders,
        socle_dim: w.socle_dim(),
        pi_torsion_dim: w.pi_torsion_dim(),
    };
    verify(sys, &dec)?;
    Ok(dec)
}

/// Both summands isotropic for `B'`, they generate `W`, and their orders add up.
pub fn verify(sys: &SkewSystem, dec: &Decomposition) -> Result<(), CycError> {
    let w = &sys.pairing.module;
    let phi = w.ring().degree();
    for part in [&dec.m, &dec.m_prime] {
        for a in part.iter() {
            for b in part.iter() {
                if !twisted(sys, a, b).is_zero() {
                    return Err(CycError::DecompositionFailed("summand is not isotropic".into()));
                }
            }
        }
    }
    // Each generated piece has order at most p^{a_i}; equality of sizes plus
    // spanning forces the sum to be direct with M ≅ M'.
    let total: usize = dec.orders.iter().sum::<usize>() * 2;
    if total != w.log_order() {
        return Err(CycError::DecompositionFailed("orders do not add up".into()));
    }
    let mut rows: Vec<Vec<BigInt>> = Vec::new();
    for x in dec.m.iter().chain(&dec.m_prime) {
        for k in 0..phi {
            rows.push(w.z_coords(&w.scalar(&w.ring().zeta_pow(k as i64), x)));
        }
    }
    let p = BigInt::from(w.ring().p());
    for (i, &e) in w.exps().iter().enumerate() {
        for k in 0..phi {
            let mut v = vec![BigInt::from(0); w.rank() * phi];
            v[i * phi + k] = p.pow(e);
            rows.push(v);
        }
    }
    let h = hnf(&rows);
    let spans = h.len() == w.rank() * phi && h.iter().enumerate().all(|(i, r)| r[i].is_one());
    if !spans {
        return Err(CycError::DecompositionFailed("summands do not span".into()));
    }
    if dec.socle_dim != 2 * dec.half_socle_dim(phi) || dec.pi_torsion_dim != 2 * dec.orders.len() {
        return Err(CycError::DecompositionFailed("torsion dimensions are not even".into()));
    }
    Ok(())
}

/// An elementary automorphism of `⊕ R/p^{e_i}`.
enum Elementary {
    /// `g_i ↦ g_i + r g_j`, with `r ∈ p^{max(0, e_j - e_i)} R`.
    Transvection(usize, usize, CycElement),
    Scale(usize, CycElement, CycElement),
}

fn apply_ops(w: &FiniteCycModule, ops: &[Elementary], x: &[CycElement], inverse: bool) -> ModElem {
    let ring = w.ring();
    let mut y: ModElem = x.to_vec();
    let seq: Box<dyn Iterator<Item = &Elementary>> =
        if inverse { Box::new(ops.iter().rev()) } else { Box::new(ops.iter()) };
    for op in seq {
        match op {
            Elementary::Transvection(i, j, r) => {
                let t = ring.mul(&y[*i], r);
                y[*j] = if inverse { ring.sub(&y[*j], &t) } else { ring.add(&y[*j], &t) };
            }
            Elementary::Scale(i, u, uinv) => {
                y[*i] = ring.mul(&y[*i], if inverse { uinv } else { u });
            }
        }
    }
    w.reduce(&y)
}

/// A random nondegenerate skew-Hermitian system: hyperbolic planes
/// `(R/p^{e})^2` with ι-invariant unit entries, pulled back along a random
/// automorphism (which conjugates the involution).
pub fn random_skew_system<R: Rng + ?Sized>(
    base: &CycRing,
    plane_exps: &[u32],
    rng: &mut R,
) -> Result<SkewSystem, CycError> {
    let exps: Vec<u32> = plane_exps.iter().flat_map(|&e| [e, e]).collect();
    if exps.is_empty() {
        let w = FiniteCycModule::new(base, &[])?;
        return Ok(SkewSystem { pairing: SemilinearPairing::zero(w), involution: Involution { images: vec![] } });
    }
    let w = FiniteCycModule::new(base, &exps)?;
    let ring = w.ring().clone();
    let mm = w.max_exp();
    let p = BigInt::from(ring.p());
    let r = w.rank();
    let mut gram = vec![vec![ring.zero(); r]; r];
    for (b, &e) in plane_exps.iter().enumerate() {
        let u = ring.random_unit(rng);
        let real = ring.mul(&u, &ring.iota(&u));
        let v = ring.scale(&real, &p.pow(mm - e));
        gram[2 * b][2 * b + 1] = v.clone();
        gram[2 * b + 1][2 * b] = ring.neg(&v);
    }
    let base_pairing = SemilinearPairing::new(w.clone(), gram)?;
    let base_c = Involution::coordinatewise_iota(&w);

    let mut ops = Vec::new();
    for _ in 0..3 * r {
        let i = rng.gen_range(0..r);
        let j = rng.gen_range(0..r);
        if i == j {
            let u = ring.random_unit(rng);
            let uinv = ring.inverse_unit(&u)?;
            ops.push(Elementary::Scale(i, u, uinv));
        } else {
            let shift = exps[j].saturating_sub(exps[i]);
            let t = ring.scale(&ring.random(rng, 0), &p.pow(shift));
            ops.push(Elementary::Transvection(i, j, t));
        }
    }
    let images: Vec<ModElem> = (0..r).map(|i| apply_ops(&w, &ops, &w.generator(i), false)).collect();
    let new_gram = images
        .iter()
        .map(|a| images.iter().map(|b| base_pairing.eval(a, b)).collect())
        .collect();
    let pairing = SemilinearPairing::new(w.clone(), new_gram)?;
    let involution = Involution {
        images: images.iter().map(|a| apply_ops(&w, &ops, &base_c.apply(&w, a), true)).collect(),
    };
    Ok(SkewSystem { pairing, involution })
}
