use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::trial_seed;

use super::{check_global_duality, generate_with, howard_pairing, DualityReport, ToySelmerSystem};

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CampaignConfig {
    pub p: u64,
    pub trials: usize,
    pub max_places: usize,
    pub max_d: usize,
    pub max_z: usize,
    pub seed: u64,
}

impl CampaignConfig {
    pub fn new(p: u64, trials: usize, seed: u64) -> Self {
        Self { p, trials, max_places: 4, max_d: 4, max_z: 3, seed }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CampaignFailure {
    pub trial: usize,
    pub trial_seed: u64,
    pub reason: String,
    pub report: Option<DualityReport>,
    pub system: Option<ToySelmerSystem>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CampaignSummary {
    pub p: u64,
    pub trials: usize,
    pub seed: u64,
    pub duality_failures: usize,
    pub howard_failures: usize,
    /// Histogram of `dim H_{F+G} - dim H_{F∩G}` over all trials.
    pub index_histogram: Vec<usize>,
    pub failures: Vec<CampaignFailure>,
}

impl CampaignSummary {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

struct TrialOutcome {
    index: usize,
    duality_ok: bool,
    howard_ok: bool,
    failure: Option<CampaignFailure>,
}

fn run_trial(cfg: &CampaignConfig, trial: usize) -> TrialOutcome {
    let ts = trial_seed(cfg.seed, trial);
    let mut rng = ChaCha8Rng::seed_from_u64(ts);
    let places = rng.gen_range(1..=cfg.max_places);
    let z = rng.gen_range(0..=cfg.max_z);
    let fail = |reason: String, report, system| TrialOutcome {
        index: 0,
        duality_ok: false,
        howard_ok: false,
        failure: Some(CampaignFailure { trial, trial_seed: ts, reason, report, system }),
    };
    let sys = match generate_with(cfg.p, places, cfg.max_d, z, &mut rng) {
        Ok(s) => s,
        Err(e) => return fail(format!("generator: {e}"), None, None),
    };
    if let Err(e) = sys.validate() {
        return fail(format!("invariant: {e}"), None, Some(sys));
    }
    let rep = check_global_duality(&sys);
    let hp = howard_pairing(&sys);
    let h = sys.selmer();
    let fg = h.f.sum(&h.g).expect("same ambient");
    let howard_ok =
        hp.is_skew() && hp.kernel == fg && hp.rank % 2 == 0 && hp.rank == rep.dim_sum - fg.dim();
    let duality_ok = rep.passed();
    let index = rep.dim_sum - rep.dim_meet;
    if duality_ok && howard_ok {
        return TrialOutcome { index, duality_ok, howard_ok, failure: None };
    }
    let reason = match (duality_ok, howard_ok) {
        (false, false) => "duality and howard",
        (false, true) => "duality",
        _ => "howard",
    };
    TrialOutcome {
        index,
        duality_ok,
        howard_ok,
        failure: Some(CampaignFailure {
            trial,
            trial_seed: ts,
            reason: reason.into(),
            report: Some(rep),
            system: Some(sys),
        }),
    }
}

/// Generates and checks `cfg.trials` systems in parallel. Output is independent
/// of thread count: failures are reported in trial order.
pub fn run_campaign(cfg: &CampaignConfig) -> CampaignSummary {
    let outcomes: Vec<TrialOutcome> =
        (0..cfg.trials).into_par_iter().map(|t| run_trial(cfg, t)).collect();
    let max_index = cfg.max_places * cfg.max_d;
    let mut hist = vec![0usize; max_index + 1];
    let mut summary = CampaignSummary {
        p: cfg.p,
        trials: cfg.trials,
        seed: cfg.seed,
        duality_failures: 0,
        howard_failures: 0,
        index_histogram: Vec::new(),
        failures: Vec::new(),
    };
    for o in outcomes {
        if o.index <= max_index {
            hist[o.index] += 1;
        }
        summary.duality_failures += usize::from(!o.duality_ok);
        summary.howard_failures += usize::from(!o.howard_ok);
        if let Some(f) = o.failure {
            summary.failures.push(f);
        }
    }
    summary.index_histogram = hist;
    summary
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_campaign_is_clean_and_reproducible() {
        let cfg = CampaignConfig::new(3, 200, 7);
        let a = run_campaign(&cfg);
        assert!(a.passed(), "{:?}", a.failures.first());
        let b = run_campaign(&cfg);
        assert_eq!(a.index_histogram, b.index_histogram);
        assert_eq!(a.index_histogram.iter().sum::<usize>(), 200);
    }
}
