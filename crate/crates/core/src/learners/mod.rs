//! Follow-the-Perturbed-Leader variants sharing [`LearnerState`].

mod bfpl;
mod fpl;
mod infinite;
mod mc_fpl;
mod oracle_fpl;
mod reward;
pub mod schedule;

use alloc::boxed::Box;

pub use bfpl::Bfpl;
pub use fpl::{draw_perturbations, fpl_choose, ifpl_choose};
pub use infinite::{BfplInfinite, ExpertPrior, InfiniteConfig, PriorSpec};
pub use mc_fpl::{McCounter, McFpl};
pub use oracle_fpl::{OracleFpl, GUARD_PROBABILITY};
pub use reward::RewardFpl;
pub use schedule::{
    bfpl_schedule, entering_time, mc_schedule, mc_schedule_with, oracle_fpl_eta,
    reward_schedule, InfiniteSchedule, SampleRule,
};

use crate::error::{FplError, Result};
use crate::rng::RandomStreams;
use crate::types::{CostVector, EstimateVector, LearnerState, ScheduleParams};

/// Gatekeeper for bandit feedback: exactly one arm's cost may be read
/// per round.
#[derive(Debug)]
pub struct BanditFeedback<'a> {
    costs: &'a CostVector,
    played: Option<usize>,
}

impl<'a> BanditFeedback<'a> {
    pub fn new(costs: &'a CostVector) -> Self {
        BanditFeedback {
            costs,
            played: None,
        }
    }

    pub fn n(&self) -> usize {
        self.costs.len()
    }

    /// Plays `arm` and reveals its cost. Asking for a second, different
    /// arm in the same round is a contract violation.
    pub fn play(&mut self, arm: usize) -> Result<f64> {
        if arm >= self.costs.len() {
            return Err(FplError::FeedbackViolation("arm index out of range"));
        }
        match self.played {
            Some(p) if p != arm => Err(FplError::FeedbackViolation(
                "cost of an unplayed arm requested",
            )),
            _ => {
                self.played = Some(arm);
                Ok(self.costs.get(arm))
            }
        }
    }

    pub fn played(&self) -> Option<usize> {
        self.played
    }
}

/// Realized `(p, π)` pair of one oracle-FPL round: `π` is the chosen
/// expert's exact selection probability after adding this round's
/// estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct StabilityRecord {
    pub p: f64,
    pub pi: f64,
    pub eta: f64,
}

impl StabilityRecord {
    /// `π ≥ p·e^{-η v}` and `π ≥ p - η` up to `tol`.
    pub fn holds(&self, v: f64, tol: f64) -> bool {
        let first = self.pi >= self.p * libm::exp(-self.eta * v) - tol;
        let second = v > 1.0 / self.p || self.pi >= self.p - self.eta - tol;
        first && second
    }
}

/// Everything a learner did in one round.
#[derive(Debug, Clone, PartialEq)]
pub struct Step {
    pub action: usize,
    pub explored: bool,
    pub cost: f64,
    pub estimate: EstimateVector,
    /// `(first inactive index, charge)` for the infinite-expert variant.
    pub inactive_charge: Option<(usize, f64)>,
    pub schedule: ScheduleParams,
    /// Selection probability (exact, mixture, or clipped estimate) that
    /// divided the observed cost.
    pub probability: Option<f64>,
    pub stability: Option<StabilityRecord>,
}

/// A bandit learner.
pub trait Learner {
    fn state(&self) -> &LearnerState;

    /// Plays round `state().round()`, reading exactly one cost through
    /// `feedback`, and folds the resulting estimate into the state.
    fn step(&mut self, streams: &mut RandomStreams, feedback: &mut BanditFeedback<'_>)
        -> Result<Step>;
}

/// Learner selection as it appears in experiment configs.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(
    feature = "serde",
    serde(tag = "name", rename_all = "snake_case", deny_unknown_fields)
)]
pub enum LearnerConfig {
    /// Exploration-round bandit FPL.
    Bfpl {},
    /// FPL with exact selection probabilities and no exploration.
    OracleFpl {
        #[cfg_attr(feature = "serde", serde(default))]
        stability_check: bool,
    },
    /// FPL with Monte-Carlo probability estimates.
    McFpl {
        #[cfg_attr(feature = "serde", serde(default))]
        counter: McCounter,
        #[cfg_attr(feature = "serde", serde(default))]
        sample_rule: SampleRule,
    },
    /// Bandit FPL over a prior-weighted expert class with entering times.
    BfplInfinite {
        prior: PriorSpec,
        #[cfg_attr(feature = "serde", serde(default = "default_alpha"))]
        alpha: f64,
        #[cfg_attr(feature = "serde", serde(default = "default_beta"))]
        beta: f64,
        #[cfg_attr(feature = "serde", serde(default = "default_eta_exponent"))]
        eta_exponent: f64,
        /// Score with `+ln w` instead of the `ln(1/w)` penalty.
        #[cfg_attr(feature = "serde", serde(default))]
        literal_sign: bool,
    },
    /// Reward maximization with uniform exploration mixed in.
    RewardFpl {},
}

#[cfg(feature = "serde")]
fn default_alpha() -> f64 {
    InfiniteSchedule::default().alpha
}

#[cfg(feature = "serde")]
fn default_beta() -> f64 {
    InfiniteSchedule::default().beta
}

#[cfg(feature = "serde")]
fn default_eta_exponent() -> f64 {
    InfiniteSchedule::default().eta_exponent
}

impl LearnerConfig {
    pub fn build(&self, n: usize) -> Result<Box<dyn Learner + Send>> {
        Ok(match self {
            LearnerConfig::Bfpl {} => Box::new(Bfpl::new(n)?),
            LearnerConfig::OracleFpl { stability_check } => {
                Box::new(OracleFpl::new(n)?.with_stability_check(*stability_check))
            }
            LearnerConfig::McFpl {
                counter,
                sample_rule,
            } => Box::new(McFpl::new(n, *counter)?.with_sample_rule(*sample_rule)),
            LearnerConfig::BfplInfinite {
                prior,
                alpha,
                beta,
                eta_exponent,
                literal_sign,
            } => Box::new(BfplInfinite::from_config(
                n,
                &InfiniteConfig {
                    prior: prior.clone(),
                    schedule: InfiniteSchedule {
                        alpha: *alpha,
                        beta: *beta,
                        eta_exponent: *eta_exponent,
                    },
                    literal_sign: *literal_sign,
                },
            )?),
            LearnerConfig::RewardFpl {} => Box::new(RewardFpl::new(n)?),
        })
    }

    pub fn label(&self) -> &'static str {
        match self {
            LearnerConfig::Bfpl {} => "bfpl",
            LearnerConfig::OracleFpl { .. } => "oracle_fpl",
            LearnerConfig::McFpl { .. } => "mc_fpl",
            LearnerConfig::BfplInfinite { .. } => "bfpl_infinite",
            LearnerConfig::RewardFpl {} => "reward_fpl",
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn feedback_allows_one_arm() {
        let c = CostVector::new(alloc::vec![0.3, 0.7]).unwrap();
        let mut fb = BanditFeedback::new(&c);
        assert_eq!(fb.play(1).unwrap(), 0.7);
        assert_eq!(fb.play(1).unwrap(), 0.7);
        assert!(matches!(fb.play(0), Err(FplError::FeedbackViolation(_))));
        assert!(matches!(fb.play(2), Err(FplError::FeedbackViolation(_))));
        assert_eq!(fb.played(), Some(1));
    }
}
