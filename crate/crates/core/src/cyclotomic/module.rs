use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use rand::Rng;

use crate::fplinalg::FpMatrix;

use super::ring::{CycElement, CycRing};
use super::trace::TracePairing;
use super::CycError;

/// `W = ⊕_i R/p^{e_i} g_i`.
#[derive(Clone, Debug)]
pub struct FiniteCycModule {
    ring: CycRing,
    exps: Vec<u32>,
    coord_rings: Vec<CycRing>,
}

pub type ModElem = Vec<CycElement>;

impl FiniteCycModule {
    pub fn new(base: &CycRing, exps: &[u32]) -> Result<Self, CycError> {
        if exps.iter().any(|&e| e == 0) {
            return Err(CycError::InvalidExponent);
        }
        let m = exps.iter().copied().max().unwrap_or(1);
        let coord_rings = exps.iter().map(|&e| base.with_precision(e)).collect();
        Ok(Self { ring: base.with_precision(m), exps: exps.to_vec(), coord_rings })
    }

    /// `R/p^m` itself, or its `r`-fold direct sum.
    pub fn free(base: &CycRing, rank: usize, m: u32) -> Result<Self, CycError> {
        Self::new(base, &vec![m; rank])
    }

    /// Ring of pairing values, truncated at `p^M`, `M = max e_i`.
    pub fn ring(&self) -> &CycRing {
        &self.ring
    }

    pub fn exps(&self) -> &[u32] {
        &self.exps
    }

    pub fn rank(&self) -> usize {
        self.exps.len()
    }

    pub fn max_exp(&self) -> u32 {
        self.ring.precision().unwrap()
    }

    pub fn is_free(&self) -> bool {
        self.exps.iter().all(|&e| e == self.max_exp())
    }

    /// `log_p |W|`.
    pub fn log_order(&self) -> usize {
        self.exps.iter().map(|&e| e as usize).sum::<usize>() * self.ring.degree()
    }

    /// `dim_{F_p} W[p]`.
    pub fn socle_dim(&self) -> usize {
        self.rank() * self.ring.degree()
    }

    /// `dim_{F_p} W[π]`: one per cyclic summand.
    pub fn pi_torsion_dim(&self) -> usize {
        self.rank()
    }

    pub fn zero(&self) -> ModElem {
        vec![self.ring.zero(); self.rank()]
    }

    pub fn generator(&self, i: usize) -> ModElem {
        let mut x = self.zero();
        x[i] = self.coord_rings[i].one();
        x
    }

    pub fn reduce(&self, x: &[CycElement]) -> ModElem {
        x.iter().zip(&self.coord_rings).map(|(c, r)| r.coerce(c)).collect()
    }

    pub fn add(&self, x: &[CycElement], y: &[CycElement]) -> ModElem {
        x.iter().zip(y).zip(&self.coord_rings).map(|((a, b), r)| r.add(a, b)).collect()
    }

    pub fn sub(&self, x: &[CycElement], y: &[CycElement]) -> ModElem {
        x.iter().zip(y).zip(&self.coord_rings).map(|((a, b), r)| r.sub(a, b)).collect()
    }

    pub fn scalar(&self, s: &CycElement, x: &[CycElement]) -> ModElem {
        x.iter().zip(&self.coord_rings).map(|(a, r)| r.mul(s, a)).collect()
    }

    pub fn is_zero(&self, x: &[CycElement]) -> bool {
        self.reduce(x).iter().all(CycElement::is_zero)
    }

    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> ModElem {
        self.coord_rings.iter().map(|r| r.random(rng, 0)).collect()
    }

    /// Z-basis `ζ^k g_i`, index `i·φ + k`.
    pub fn z_basis(&self) -> Vec<ModElem> {
        let phi = self.ring.degree();
        let mut out = Vec::with_capacity(self.rank() * phi);
        for i in 0..self.rank() {
            for k in 0..phi {
                let mut x = self.zero();
                x[i] = self.coord_rings[i].zeta_pow(k as i64);
                out.push(x);
            }
        }
        out
    }

    /// Integer coordinates in the Z-basis (each block reduced mod `p^{e_i}`).
    pub fn z_coords(&self, x: &[CycElement]) -> Vec<BigInt> {
        self.reduce(x).iter().flat_map(|c| c.coeffs().to_vec()).collect()
    }

    /// F_p-basis of `W[p]`: `p^{e_i-1} ζ^k g_i`.
    pub fn socle_basis(&self) -> Vec<ModElem> {
        let phi = self.ring.degree();
        let mut out = Vec::with_capacity(self.socle_dim());
        for (i, &e) in self.exps.iter().enumerate() {
            let s = BigInt::from(self.ring.p()).pow(e - 1);
            for k in 0..phi {
                let mut x = self.zero();
                x[i] = self.coord_rings[i].scale(&self.coord_rings[i].zeta_pow(k as i64), &s);
                out.push(x);
            }
        }
        out
    }

    /// Annihilator of `x` as a π-power exponent: `R x ≅ R/π^a`, `|R x| = p^a`.
    pub fn order_exponent(&self, x: &[CycElement]) -> usize {
        let phi = self.ring.degree();
        x.iter()
            .zip(&self.coord_rings)
            .zip(&self.exps)
            .filter_map(|((c, r), &e)| r.valuation(c).map(|v| e as usize * phi - v))
            .max()
            .unwrap_or(0)
    }
}

/// `⟨ , ⟩ : W × W → R/p^M`, stored by its values on generators.
#[derive(Clone, Debug)]
pub struct SemilinearPairing {
    pub module: FiniteCycModule,
    pub gram: Vec<Vec<CycElement>>,
}

impl SemilinearPairing {
    pub fn new(module: FiniteCycModule, gram: Vec<Vec<CycElement>>) -> Result<Self, CycError> {
        let r = module.rank();
        if gram.len() != r || gram.iter().any(|row| row.len() != r) {
            return Err(CycError::ShapeMismatch);
        }
        let ring = module.ring().clone();
        let gram: Vec<Vec<CycElement>> =
            gram.iter().map(|row| row.iter().map(|g| ring.coerce(g)).collect()).collect();
        let pr = Self { module, gram };
        pr.check_well_defined()?;
        Ok(pr)
    }

    pub fn zero(module: FiniteCycModule) -> Self {
        let r = module.rank();
        let z = module.ring().zero();
        Self { module, gram: vec![vec![z; r]; r] }
    }

    /// Entry `(i, j)` must be killed by `p^{min(e_i, e_j)}`.
    fn check_well_defined(&self) -> Result<(), CycError> {
        let m = self.module.max_exp();
        let p = BigInt::from(self.module.ring().p());
        for (i, row) in self.gram.iter().enumerate() {
            for (j, g) in row.iter().enumerate() {
                let e = self.module.exps()[i].min(self.module.exps()[j]);
                let q = p.pow(m - e);
                if g.coeffs().iter().any(|c| !c.is_multiple_of(&q)) {
                    return Err(CycError::IllDefinedPairing(i, j));
                }
            }
        }
        Ok(())
    }

    pub fn eval(&self, x: &[CycElement], y: &[CycElement]) -> CycElement {
        let ring = self.module.ring();
        let mut acc = ring.zero();
        for (i, a) in x.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in y.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let t = ring.mul(&ring.mul(a, &ring.iota(b)), &self.gram[i][j]);
                acc = ring.add(&acc, &t);
            }
        }
        acc
    }

    pub fn is_skew_hermitian(&self) -> bool {
        let ring = self.module.ring();
        let r = self.module.rank();
        (0..r).all(|i| (0..r).all(|j| self.gram[j][i] == ring.neg(&ring.iota(&self.gram[i][j]))))
    }

    pub fn is_hermitian(&self) -> bool {
        let ring = self.module.ring();
        let r = self.module.rank();
        (0..r).all(|i| (0..r).all(|j| self.gram[j][i] == ring.iota(&self.gram[i][j])))
    }

    /// F_p matrix of `W[p] × W → (R/p^M)[p] ≅ F_p^φ`; full row rank iff nondegenerate.
    pub fn socle_matrix(&self) -> FpMatrix {
        let ring = self.module.ring();
        let p = ring.p();
        let phi = ring.degree();
        let r = self.module.rank();
        let top = BigInt::from(p).pow(self.module.max_exp() - 1);
        let pb = BigInt::from(p);
        let socle = self.module.socle_basis();
        let mut mat = FpMatrix::zeros(p, socle.len(), r * phi);
        for (a, x) in socle.iter().enumerate() {
            for j in 0..r {
                let v = self.eval(x, &self.module.generator(j));
                for (c, coef) in v.coeffs().iter().enumerate() {
                    let (q, rem) = coef.div_rem(&top);
                    debug_assert!(rem.is_zero());
                    mat.set(a, j * phi + c, q.mod_floor(&pb).to_u64().unwrap());
                }
            }
        }
        mat
    }

    pub fn is_nondegenerate(&self) -> bool {
        self.socle_matrix().rank() == self.module.socle_dim()
    }

    /// Determinant of the generator Gram matrix in `R/p^M` (Leibniz expansion).
    pub fn gram_det(&self) -> CycElement {
        leibniz_det(self.module.ring(), &self.gram)
    }

    /// For free modules: perfect iff the Gram determinant is a unit.
    pub fn gram_det_is_unit(&self) -> Option<bool> {
        if !self.module.is_free() {
            return None;
        }
        Some(self.module.ring().residue(&self.gram_det()) != 0)
    }
}

pub fn leibniz_det(ring: &CycRing, m: &[Vec<CycElement>]) -> CycElement {
    let n = m.len();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut acc = ring.zero();
    permute(ring, m, 0, &mut perm, &mut acc);
    acc
}

fn permute(ring: &CycRing, m: &[Vec<CycElement>], k: usize, perm: &mut Vec<usize>, acc: &mut CycElement) {
    let n = perm.len();
    if k == n {
        let mut term = ring.one();
        for (i, &j) in perm.iter().enumerate() {
            term = ring.mul(&term, &m[i][j]);
        }
        let inversions = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).filter(|&(i, j)| perm[i] > perm[j]).count();
        *acc = if inversions % 2 == 0 { ring.add(acc, &term) } else { ring.sub(acc, &term) };
        return;
    }
    for i in k..n {
        perm.swap(k, i);
        permute(ring, m, k + 1, perm, acc);
        perm.swap(k, i);
    }
}

/// `⟨ , ⟩ : W × W → Z/p^M`, stored on the Z-basis.
#[derive(Clone, Debug)]
pub struct AdjointPairing {
    pub module: FiniteCycModule,
    pub table: Vec<Vec<BigInt>>,
}

impl AdjointPairing {
    fn modulus(&self) -> BigInt {
        self.module.ring().modulus().unwrap().clone()
    }

    pub fn eval(&self, x: &[CycElement], y: &[CycElement]) -> BigInt {
        let xc = self.module.z_coords(x);
        let yc = self.module.z_coords(y);
        let mut acc = BigInt::zero();
        for (a, xa) in xc.iter().enumerate() {
            if xa.is_zero() {
                continue;
            }
            for (b, yb) in yc.iter().enumerate() {
                if !yb.is_zero() {
                    acc += xa * yb * &self.table[a][b];
                }
            }
        }
        acc.mod_floor(&self.modulus())
    }

    /// `⟨ζ x, y⟩ = ⟨x, ζ^{-1} y⟩` on the Z-basis (ζ generates R as a ring).
    pub fn is_iota_adjoint(&self) -> bool {
        let ring = self.module.ring();
        let z = ring.zeta();
        let zi = ring.zeta_pow(-1);
        let basis = self.module.z_basis();
        basis.iter().all(|x| {
            basis.iter().all(|y| {
                self.eval(&self.module.scalar(&z, x), y) == self.eval(x, &self.module.scalar(&zi, y))
            })
        })
    }

    pub fn socle_matrix(&self) -> FpMatrix {
        let ring = self.module.ring();
        let p = ring.p();
        let top = BigInt::from(p).pow(self.module.max_exp() - 1);
        let pb = BigInt::from(p);
        let socle = self.module.socle_basis();
        let basis = self.module.z_basis();
        let mut mat = FpMatrix::zeros(p, socle.len(), basis.len());
        for (a, x) in socle.iter().enumerate() {
            for (b, y) in basis.iter().enumerate() {
                let (q, rem) = self.eval(x, y).div_rem(&top);
                debug_assert!(rem.is_zero());
                mat.set(a, b, q.mod_floor(&pb).to_u64().unwrap());
            }
        }
        mat
    }

    pub fn is_nondegenerate(&self) -> bool {
        self.socle_matrix().rank() == self.module.socle_dim()
    }

    /// For free modules: the Z-Gram determinant mod p.
    pub fn gram_det_is_unit(&self) -> Option<bool> {
        if !self.module.is_free() {
            return None;
        }
        let p = self.module.ring().p();
        let n = self.table.len();
        let mut m = FpMatrix::zeros(p, n, n);
        let pb = BigInt::from(p);
        for i in 0..n {
            for j in 0..n {
                m.set(i, j, self.table[i][j].mod_floor(&pb).to_u64().unwrap());
            }
        }
        Some(m.rank() == n)
    }
}

/// Semilinear to ι-adjoint: `⟨x, y⟩_Z = τ(⟨x, y⟩_R)`.
pub fn to_adjoint(sp: &SemilinearPairing, tr: &TracePairing) -> AdjointPairing {
    let basis = sp.module.z_basis();
    let table = basis
        .iter()
        .map(|x| basis.iter().map(|y| tr.tau(&sp.eval(x, y))).collect())
        .collect();
    AdjointPairing { module: sp.module.clone(), table }
}

/// ι-adjoint to semilinear: `⟨x, y⟩_R = Σ_t ν_t^* ⟨ζ^{-t} x, y⟩_Z`.
pub fn to_semilinear(ap: &AdjointPairing, tr: &TracePairing) -> Result<SemilinearPairing, CycError> {
    let module = ap.module.clone();
    let ring = module.ring().clone();
    let dual = trace_for(&ring, tr).dual_basis()?;
    let r = module.rank();
    let mut gram = vec![vec![ring.zero(); r]; r];
    for (i, row) in gram.iter_mut().enumerate() {
        let gi = module.generator(i);
        for (j, entry) in row.iter_mut().enumerate() {
            let gj = module.generator(j);
            let mut acc = ring.zero();
            for (t, nu) in dual.iter().enumerate() {
                let x = module.scalar(&ring.zeta_pow(-(t as i64)), &gi);
                let v = ap.eval(&x, &gj);
                acc = ring.add(&acc, &ring.scale(nu, &v));
            }
            *entry = acc;
        }
    }
    SemilinearPairing::new(module, gram)
}

/// The trace pairing on the precision of `ring` (re-used if it already matches).
fn trace_for(ring: &CycRing, tr: &TracePairing) -> TracePairing {
    if tr.ring().precision() == ring.precision() {
        tr.clone()
    } else {
        TracePairing::new(ring)
    }
}

/// A Z-linear functional `W → Z/p^M`, given on the Z-basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Functional(pub Vec<BigInt>);

impl Functional {
    pub fn eval(&self, module: &FiniteCycModule, x: &[CycElement]) -> BigInt {
        let m = module.ring().modulus().unwrap();
        module.z_coords(x).iter().zip(&self.0).map(|(a, b)| a * b).sum::<BigInt>().mod_floor(m)
    }

    /// Random functional; values on the `i`-th block are multiples of `p^{M-e_i}`.
    pub fn random<R: Rng + ?Sized>(module: &FiniteCycModule, rng: &mut R) -> Self {
        let p = BigInt::from(module.ring().p());
        let mm = module.max_exp();
        let phi = module.ring().degree();
        let mut v = Vec::with_capacity(module.rank() * phi);
        for &e in module.exps() {
            let step = p.pow(mm - e);
            let range = p.pow(e).to_u64().unwrap();
            for _ in 0..phi {
                v.push(&step * BigInt::from(rng.gen_range(0..range)));
            }
        }
        Self(v)
    }
}

/// `f̂(x) = Σ_t ν_t^* f(ζ^{-t} x)` at an arbitrary `x`.
pub fn hom_hat_at(
    module: &FiniteCycModule,
    dual: &[CycElement],
    f: &Functional,
    x: &[CycElement],
) -> CycElement {
    let ring = module.ring();
    let mut acc = ring.zero();
    for (t, nu) in dual.iter().enumerate() {
        let y = module.scalar(&ring.zeta_pow(-(t as i64)), x);
        acc = ring.add(&acc, &ring.scale(nu, &f.eval(module, &y)));
    }
    acc
}

/// The R-linear map `f̂ : W → R/p^M`, recorded by its values on generators.
pub fn hom_transport(
    module: &FiniteCycModule,
    tr: &TracePairing,
    f: &Functional,
) -> Result<Vec<CycElement>, CycError> {
    let dual = trace_for(module.ring(), tr).dual_basis()?;
    Ok((0..module.rank()).map(|i| hom_hat_at(module, &dual, f, &module.generator(i))).collect())
}

/// Composition with τ: `F ↦ τ ∘ F`, for `F` given on generators.
pub fn compose_tau(module: &FiniteCycModule, tr: &TracePairing, fhat: &[CycElement]) -> Functional {
    let ring = module.ring();
    let tr = trace_for(ring, tr);
    let mut v = Vec::with_capacity(module.rank() * ring.degree());
    for img in fhat {
        for k in 0..ring.degree() {
            v.push(tr.tau(&ring.mul(&ring.zeta_pow(k as i64), img)));
        }
    }
    Functional(v)
}

/// A ι-semilinear involution `c` of `W`: `c(Σ a_i g_i) = Σ ι(a_i) c(g_i)`.
#[derive(Clone, Debug)]
pub struct Involution {
    /// `images[i] = c(g_i)`.
    pub images: Vec<ModElem>,
}

impl Involution {
    pub fn coordinatewise_iota(module: &FiniteCycModule) -> Self {
        Self { images: (0..module.rank()).map(|i| module.generator(i)).collect() }
    }

    pub fn apply(&self, module: &FiniteCycModule, x: &[CycElement]) -> ModElem {
        let ring = module.ring();
        let mut acc = module.zero();
        for (a, img) in x.iter().zip(&self.images) {
            acc = module.add(&acc, &module.scalar(&ring.iota(a), img));
        }
        acc
    }

    pub fn is_involution(&self, module: &FiniteCycModule) -> bool {
        (0..module.rank()).all(|i| {
            let g = module.generator(i);
            module.reduce(&self.apply(module, &self.apply(module, &g))) == module.reduce(&g)
        })
    }
}

/// `⟨c x, c y⟩_R = ⟨x, y⟩_R^ι` on generators.
pub fn is_equivariant_semilinear(sp: &SemilinearPairing, c: &Involution) -> bool {
    let m = &sp.module;
    let ring = m.ring();
    (0..m.rank()).all(|i| {
        (0..m.rank()).all(|j| {
            let lhs = sp.eval(&c.apply(m, &m.generator(i)), &c.apply(m, &m.generator(j)));
            lhs == ring.iota(&sp.gram[i][j])
        })
    })
}

/// The sign `ε` with `⟨c x, c y⟩_Z = ε ⟨x, y⟩_Z` on the Z-basis, if one exists.
pub fn equivariance_sign_adjoint(ap: &AdjointPairing, c: &Involution) -> Option<i8> {
    let m = &ap.module;
    let q = ap.modulus();
    let basis = m.z_basis();
    let images: Vec<ModElem> = basis.iter().map(|x| c.apply(m, x)).collect();
    let mut plus = true;
    let mut minus = true;
    for (a, x) in basis.iter().enumerate() {
        for (b, y) in basis.iter().enumerate() {
            let lhs = ap.eval(&images[a], &images[b]);
            let rhs = ap.eval(x, y);
            plus &= lhs == rhs;
            minus &= lhs == (-rhs).mod_floor(&q);
        }
    }
    match (plus, minus) {
        (true, _) => Some(1),
        (false, true) => Some(-1),
        _ => None,
    }
}
