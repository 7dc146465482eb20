//! Seed-averaged regret summary.

use anyhow::bail;
use fpl_core::harness::stats::mean_ci;
use fpl_core::harness::{regret, GameTrace};
use serde::{Deserialize, Serialize};

use crate::config::ExperimentConfig;

/// Two-sided 95% normal quantile.
pub const Z_95: f64 = 1.959_963_984_540_054;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub learner: String,
    pub adversary: String,
    pub n: usize,
    pub horizon: u64,
    pub seeds: Vec<u64>,
    /// Regret vs. the best expert in hindsight, one entry per seed.
    pub regret: Vec<f64>,
    pub mean_regret: f64,
    /// 95% CI half-width of `mean_regret`.
    pub ci_half_width: f64,
    pub mean_learner_cost: f64,
    pub bound: Option<f64>,
    /// `mean_regret ≤ bound + 3·ci_half_width`.
    pub bound_satisfied: Option<bool>,
}

impl Summary {
    pub fn from_traces(cfg: &ExperimentConfig, traces: &[GameTrace]) -> Summary {
        let reports: Vec<_> = traces.iter().map(regret).collect();
        let per_seed: Vec<f64> = reports.iter().map(|r| r.regret_vs_best).collect();
        let costs: Vec<f64> = reports.iter().map(|r| r.learner_cost).collect();
        let (mean_regret, ci_half_width) = mean_ci(&per_seed, Z_95);
        let bound = reports.first().and_then(|r| r.bound);
        Summary {
            learner: cfg.learner.label().to_string(),
            adversary: cfg.adversary.label().to_string(),
            n: cfg.n,
            horizon: cfg.horizon,
            seeds: traces.iter().map(|t| t.seed).collect(),
            regret: per_seed,
            mean_regret,
            ci_half_width,
            mean_learner_cost: mean_ci(&costs, Z_95).0,
            bound,
            bound_satisfied: bound.map(|b| mean_regret <= b + 3.0 * ci_half_width),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("summary serializes")
    }

    pub fn ensure_finite(&self) -> anyhow::Result<()> {
        let mut values = vec![self.mean_regret, self.ci_half_width, self.mean_learner_cost];
        values.extend(&self.regret);
        values.extend(self.bound);
        if values.iter().any(|v| !v.is_finite()) {
            bail!("summary contains a non-finite value");
        }
        Ok(())
    }
}
