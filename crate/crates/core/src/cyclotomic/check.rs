use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::trial_seed;

use super::group_ring::{default_bound, group_ring_split};
use super::ideal::{ideal_pairing, tensor_model};
use super::module::{
    compose_tau, hom_transport, to_adjoint, to_semilinear, FiniteCycModule, Functional,
    SemilinearPairing,
};
use super::ring::CycRing;
use super::skew::{decompose_skew_hermitian, random_skew_system};
use super::trace::TracePairing;
use super::CycError;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CheckConfig {
    pub p: u64,
    pub n: u32,
    pub m: u32,
    pub trials: usize,
    pub seed: u64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub trials: usize,
    pub failures: usize,
    /// Present when the check was not applicable.
    pub skipped: Option<String>,
    pub detail: Option<String>,
}

impl CheckResult {
    fn new(name: &str, trials: usize, failures: usize) -> Self {
        Self { name: name.into(), trials, failures, skipped: None, detail: None }
    }

    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CheckReport {
    pub config: CheckConfig,
    pub checks: Vec<CheckResult>,
    pub passed: bool,
}

fn count_failures(cfg: &CheckConfig, salt: u64, f: impl Fn(&mut ChaCha8Rng) -> bool + Sync) -> usize {
    (0..cfg.trials)
        .into_par_iter()
        .filter(|&t| {
            let mut rng = ChaCha8Rng::seed_from_u64(trial_seed(cfg.seed ^ salt, t));
            !f(&mut rng)
        })
        .count()
}

fn ring_basics(ring: &CycRing) -> CheckResult {
    let ex = ring.exact();
    let pi = ex.pi();
    let d = ex.d();
    let mut bad = Vec::new();
    if ex.iota(&pi) != ex.neg(&pi) {
        bad.push("iota(pi) != -pi");
    }
    if ex.iota(&d) != ex.neg(&d) {
        bad.push("iota(d) != -d");
    }
    if d != ex.pow(&pi, ex.different_exponent() as u64) {
        bad.push("d != pi^s");
    }
    match ex.pi_power_unit() {
        Ok(u) if ex.inverse_exact(&u).is_ok() => {}
        _ => bad.push("pi^phi / p is not a unit"),
    }
    if ex.valuation(&ex.from_int(ex.p() as i64)) != Some(ex.degree()) {
        bad.push("v_pi(p) != phi");
    }
    let mut r = CheckResult::new("ring_basics", 1, usize::from(!bad.is_empty()));
    if !bad.is_empty() {
        r.detail = Some(bad.join("; "));
    }
    r
}

fn trace_checks(cfg: &CheckConfig, ring: &CycRing) -> Vec<CheckResult> {
    let t = TracePairing::new(ring);
    let perfect = t.is_perfect();
    let skew = {
        let g = t.gram();
        (0..g.len()).all(|i| (0..g.len()).all(|j| g[i][j] == -&g[j][i]))
    };
    let mut r = CheckResult::new("trace_perfect_skew", 1, usize::from(!(perfect && skew)));
    r.detail = Some(format!("gram determinant {}", t.gram_det()));
    let fails = count_failures(cfg, 1, |rng| {
        let x = ring.random(rng, 0);
        t.tau(&x) == t.minus_trace_dinv(&x) && t.value(&x, &x).is_zero()
    });
    vec![r, CheckResult::new("tau_is_minus_trace", cfg.trials, fails)]
}

fn random_exps(rng: &mut ChaCha8Rng, m: u32) -> Vec<u32> {
    let r = rng.gen_range(1..=3);
    (0..r).map(|_| rng.gen_range(1..=m)).collect()
}

fn hom_check(cfg: &CheckConfig, ring: &CycRing, t: &TracePairing) -> CheckResult {
    let fails = count_failures(cfg, 2, |rng| {
        let exps = random_exps(rng, cfg.m);
        let Ok(w) = FiniteCycModule::new(ring, &exps) else { return false };
        let f = Functional::random(&w, rng);
        match hom_transport(&w, t, &f) {
            Ok(fh) => compose_tau(&w, t, &fh) == f,
            Err(_) => false,
        }
    });
    CheckResult::new("hom_transport_round_trip", cfg.trials, fails)
}

fn pairing_check(cfg: &CheckConfig, ring: &CycRing, t: &TracePairing) -> CheckResult {
    let rm = ring.with_precision(cfg.m);
    let fails = count_failures(cfg, 3, |rng| {
        let rank = rng.gen_range(1..=2);
        let Ok(w) = FiniteCycModule::free(&rm, rank, cfg.m) else { return false };
        let gram = (0..rank).map(|_| (0..rank).map(|_| rm.random(rng, 0)).collect()).collect();
        let Ok(sp) = SemilinearPairing::new(w, gram) else { return false };
        let ap = to_adjoint(&sp, t);
        let Ok(back) = to_semilinear(&ap, t) else { return false };
        back.gram == sp.gram
            && sp.is_nondegenerate() == ap.is_nondegenerate()
            && sp.gram_det_is_unit() == Some(sp.is_nondegenerate())
            && ap.gram_det_is_unit() == sp.gram_det_is_unit()
    });
    CheckResult::new("pairing_transport", cfg.trials, fails)
}

fn ideal_check(cfg: &CheckConfig, ring: &CycRing) -> CheckResult {
    let f = ideal_pairing(ring);
    let g = f.generator();
    let mut bad = Vec::new();
    if f.eval(&g, &g).ok() != Some(ring.exact().from_int(-1)) {
        bad.push("f(pi^q, pi^q) != -1".to_string());
    }
    match f.truncated(cfg.m) {
        Ok(sp) if sp.is_hermitian() && sp.is_nondegenerate() => {}
        _ => bad.push("truncated f not perfect Hermitian".into()),
    }
    match tensor_model(ring, cfg.m) {
        Ok((sp, _)) if sp.is_skew_hermitian() && sp.is_nondegenerate() => {}
        _ => bad.push("tensor model not perfect skew-Hermitian".into()),
    }
    let ex = ring.exact();
    let fails = count_failures(cfg, 4, |rng| {
        let a = f.random(rng, 3);
        let b = f.random(rng, 3);
        match (f.eval(&a, &b), f.eval(&b, &a)) {
            (Ok(x), Ok(y)) => ex.iota(&x) == y,
            _ => false,
        }
    });
    let mut r = CheckResult::new("ideal_pairing", cfg.trials + 1, fails + usize::from(!bad.is_empty()));
    if !bad.is_empty() {
        r.detail = Some(bad.join("; "));
    }
    r
}

fn skew_check(cfg: &CheckConfig, ring: &CycRing) -> CheckResult {
    let fails = count_failures(cfg, 5, |rng| {
        let planes: Vec<u32> = (0..rng.gen_range(0..=2)).map(|_| rng.gen_range(1..=cfg.m)).collect();
        match random_skew_system(ring, &planes, rng) {
            Ok(sys) => decompose_skew_hermitian(&sys).is_ok_and(|d| d.socle_dim % 2 == 0),
            Err(_) => false,
        }
    });
    CheckResult::new("skew_hermitian_decomposition", cfg.trials, fails)
}

fn group_ring_check(ring: &CycRing) -> CheckResult {
    let (p, n) = (ring.p(), ring.n());
    match group_ring_split(p, n) {
        Ok(g) => {
            let mut r = CheckResult::new("group_ring_split", 1, usize::from(!g.passed()));
            r.detail = Some(format!("index {}", g.index));
            r
        }
        Err(CycError::TooLarge(_)) => {
            let mut r = CheckResult::new("group_ring_split", 0, 0);
            r.skipped = Some(format!("p^n exceeds bound {}", default_bound(p)));
            r
        }
        Err(e) => {
            let mut r = CheckResult::new("group_ring_split", 1, 1);
            r.detail = Some(e.to_string());
            r
        }
    }
}

/// Runs every invariant check for one `(p, n, m)`.
pub fn run_check(cfg: &CheckConfig) -> Result<CheckReport, CycError> {
    if cfg.m == 0 {
        return Err(CycError::InvalidExponent);
    }
    let ring = CycRing::new(cfg.p, cfg.n)?.with_precision(cfg.m);
    let t = TracePairing::new(&ring);
    let mut checks = vec![ring_basics(&ring)];
    checks.extend(trace_checks(cfg, &ring));
    if t.is_perfect() {
        checks.push(hom_check(cfg, &ring, &t));
        checks.push(pairing_check(cfg, &ring, &t));
    }
    checks.push(ideal_check(cfg, &ring));
    checks.push(skew_check(cfg, &ring));
    checks.push(group_ring_check(&ring));
    let passed = checks.iter().all(CheckResult::passed);
    Ok(CheckReport { config: cfg.clone(), checks, passed })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_check_passes() {
        let cfg = CheckConfig { p: 3, n: 1, m: 2, trials: 20, seed: 5 };
        let rep = run_check(&cfg).unwrap();
        for c in &rep.checks {
            assert!(c.passed(), "{c:?}");
        }
        assert!(rep.passed);
    }
}
