//! Bandit FPL over a prior-weighted expert class.
//!
//! Experts are ordered by nonincreasing prior weight, so the entering
//! times `τ^i = ⌈(1/w^i)^{1/α}⌉` are nondecreasing and the active set at
//! round `t` is always a prefix. A generator materializes only as many
//! experts as the game has arms.
//!
//! Rounds before the heaviest expert has entered (active set empty) play
//! expert 0 and record nothing.

use alloc::vec::Vec;

use super::fpl::fpl_choose;
use super::schedule::{entering_time, InfiniteSchedule};
use super::{BanditFeedback, Learner, Step};
use crate::error::{FplError, Result};
use crate::rng::{RandomStreams, StreamName};
use crate::types::{EstimateVector, LearnerState, Variant};

/// How prior weights are supplied.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(
    feature = "serde",
    serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)
)]
pub enum PriorSpec {
    /// `w^i = first · ratio^i`.
    Geometric { first: f64, ratio: f64 },
    Explicit { weights: Vec<f64> },
}

/// Prior weights (nonincreasing, summing to at most 1) with entering times.
#[derive(Debug, Clone, PartialEq)]
pub struct ExpertPrior {
    weights: Vec<f64>,
    entering: Vec<u64>,
    alpha: f64,
}

impl ExpertPrior {
    pub fn new(mut weights: Vec<f64>, alpha: f64) -> Result<Self> {
        if weights.is_empty() {
            return Err(FplError::NoExperts);
        }
        if weights.iter().any(|&w| !(w > 0.0 && w <= 1.0)) {
            return Err(FplError::InvalidParameter {
                name: "weight",
                reason: "must lie in (0, 1]",
            });
        }
        if weights.iter().sum::<f64>() > 1.0 + 1e-12 {
            return Err(FplError::InvalidParameter {
                name: "weights",
                reason: "must sum to at most 1",
            });
        }
        weights.sort_by(|a, b| b.total_cmp(a));
        let entering = weights
            .iter()
            .map(|&w| entering_time(w, alpha))
            .collect::<Result<Vec<_>>>()?;
        Ok(ExpertPrior {
            weights,
            entering,
            alpha,
        })
    }

    /// First `count` experts of the geometric prior `first · ratio^i`.
    pub fn geometric(first: f64, ratio: f64, count: usize, alpha: f64) -> Result<Self> {
        if !(ratio > 0.0 && ratio <= 1.0) {
            return Err(FplError::InvalidParameter {
                name: "ratio",
                reason: "must lie in (0, 1]",
            });
        }
        let weights = (0..count)
            .map(|i| first * libm::pow(ratio, i as f64))
            .collect();
        Self::new(weights, alpha)
    }

    pub fn from_spec(spec: &PriorSpec, count: usize, alpha: f64) -> Result<Self> {
        match spec {
            PriorSpec::Geometric { first, ratio } => Self::geometric(*first, *ratio, count, alpha),
            PriorSpec::Explicit { weights } => {
                if weights.len() != count {
                    return Err(FplError::DimensionMismatch {
                        expected: count,
                        got: weights.len(),
                    });
                }
                Self::new(weights.clone(), alpha)
            }
        }
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn entering_times(&self) -> &[u64] {
        &self.entering
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// All experts with `w ≥ threshold` (a prefix).
    pub fn at_least(&self, threshold: f64) -> &[f64] {
        let k = self.weights.partition_point(|&w| w >= threshold);
        &self.weights[..k]
    }

    /// Number of experts with `τ^i ≤ t`.
    pub fn active_count(&self, t: u64) -> usize {
        self.entering.partition_point(|&tau| tau <= t)
    }

    /// `min{w^i : t ≥ τ^i}`, `None` while no expert has entered.
    pub fn min_active_weight(&self, t: u64) -> Option<f64> {
        match self.active_count(t) {
            0 => None,
            k => Some(self.weights[k - 1]),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct InfiniteConfig {
    pub prior: PriorSpec,
    pub schedule: InfiniteSchedule,
    pub literal_sign: bool,
}

#[derive(Debug, Clone)]
pub struct BfplInfinite {
    state: LearnerState,
    prior: ExpertPrior,
    schedule: InfiniteSchedule,
    literal_sign: bool,
    penalty: Vec<f64>,
    q: Vec<f64>,
}

impl BfplInfinite {
    pub fn new(prior: ExpertPrior, schedule: InfiniteSchedule, literal_sign: bool) -> Result<Self> {
        schedule.validate()?;
        let n = prior.len();
        let penalty = prior
            .weights()
            .iter()
            .map(|&w| {
                if literal_sign {
                    libm::log(w)
                } else {
                    libm::log(1.0 / w)
                }
            })
            .collect();
        Ok(BfplInfinite {
            state: LearnerState::new(n, Variant::BfplInfinite)?,
            prior,
            schedule,
            literal_sign,
            penalty,
            q: alloc::vec![0.0; n],
        })
    }

    pub fn from_config(n: usize, cfg: &InfiniteConfig) -> Result<Self> {
        let prior = ExpertPrior::from_spec(&cfg.prior, n, cfg.schedule.alpha)?;
        Self::new(prior, cfg.schedule, cfg.literal_sign)
    }

    pub fn prior(&self) -> &ExpertPrior {
        &self.prior
    }

    pub fn literal_sign(&self) -> bool {
        self.literal_sign
    }
}

/// Importance-weighted estimate `c·W/(γ w^i)` of an exploration pick.
pub(crate) fn weighted_estimate(index: usize, cost: f64, active_weight: f64, gamma: f64, w: f64) -> Result<EstimateVector> {
    EstimateVector::one_hot(index, cost * active_weight / (gamma * w))
}

/// Running estimate `(γ_t · min active weight)^{-1}` charged to every
/// expert that has not entered yet.
pub(crate) fn inactive_charge(gamma: f64, min_active_weight: f64) -> f64 {
    1.0 / (gamma * min_active_weight)
}

impl Learner for BfplInfinite {
    fn state(&self) -> &LearnerState {
        &self.state
    }

    fn step(
        &mut self,
        streams: &mut RandomStreams,
        feedback: &mut BanditFeedback<'_>,
    ) -> Result<Step> {
        let t = self.state.round();
        let schedule = self.schedule.at(t)?;
        let active = self.prior.active_count(t);
        if active == 0 {
            let cost = feedback.play(0)?;
            self.state.set_schedule(schedule);
            self.state.accumulate(&EstimateVector::zero())?;
            return Ok(Step {
                action: 0,
                explored: false,
                cost,
                estimate: EstimateVector::zero(),
                inactive_charge: None,
                schedule,
                probability: None,
                stability: None,
            });
        }
        let weights = &self.prior.weights()[..active];
        let explored = streams.get(StreamName::ExploreCoin).bernoulli(schedule.gamma);
        let (action, cost, estimate, probability) = if explored {
            let total: f64 = weights.iter().sum();
            let target = streams.get(StreamName::ExplorePick).uniform() * total;
            let mut acc = 0.0;
            let mut pick = active - 1;
            for (i, &w) in weights.iter().enumerate() {
                acc += w;
                if target < acc {
                    pick = i;
                    break;
                }
            }
            let c = feedback.play(pick)?;
            let est = weighted_estimate(pick, c, total, schedule.gamma, weights[pick])?;
            (pick, c, est, Some(schedule.gamma * weights[pick] / total))
        } else {
            let s = streams.get(StreamName::Perturbation);
            self.q[..active].iter_mut().for_each(|x| *x = s.exponential());
            // ĉ + (pen - q)/η = ĉ + pen/η - q/η
            let shifted: Vec<f64> = self.state.cumulative()[..active]
                .iter()
                .zip(&self.penalty)
                .map(|(&c, &pen)| c + pen / schedule.eta)
                .collect();
            let i = fpl_choose(&shifted, &self.q[..active], schedule.eta);
            (i, feedback.play(i)?, EstimateVector::zero(), None)
        };
        let n = self.state.n();
        let inactive_charge = if active < n {
            let charge = inactive_charge(schedule.gamma, weights[active - 1]);
            self.state.charge_suffix(active, charge);
            Some((active, charge))
        } else {
            None
        };
        self.state.set_schedule(schedule);
        self.state.accumulate(&estimate)?;
        Ok(Step {
            action,
            explored,
            cost,
            estimate,
            inactive_charge,
            schedule,
            probability,
            stability: None,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::types::CostVector;

    #[test]
    fn explored_estimate_value() {
        // active w = (1/2, 1/4), pick the second, c = 1, γ = 1/2
        let e = weighted_estimate(1, 1.0, 0.75, 0.5, 0.25).unwrap();
        assert!((e.value() - 6.0).abs() < 1e-12);
    }

    #[test]
    fn inactive_charge_value() {
        // t = 16, α = 1/8: γ = 16^{-1/4} = 1/2; min active weight 1/2
        let p = InfiniteSchedule::default().at(16).unwrap();
        assert!((p.gamma - 0.5).abs() < 1e-15);
        assert!((inactive_charge(p.gamma, 0.5) - 4.0).abs() < 1e-12);
    }

    #[test]
    fn warm_up_plays_heaviest_expert() {
        let prior = ExpertPrior::new(alloc::vec![0.5, 0.25], 0.5).unwrap();
        let mut l = BfplInfinite::new(prior, InfiniteSchedule { alpha: 0.5, ..Default::default() }, false).unwrap();
        let c = CostVector::new(alloc::vec![0.4, 0.1]).unwrap();
        let mut streams = RandomStreams::new(2);
        for _ in 1..4 {
            let mut fb = BanditFeedback::new(&c);
            let s = l.step(&mut streams, &mut fb).unwrap();
            assert_eq!(s.action, 0);
            assert!(s.estimate.is_zero() && s.inactive_charge.is_none());
        }
        let mut fb = BanditFeedback::new(&c);
        let s = l.step(&mut streams, &mut fb).unwrap();
        assert_eq!(s.action, 0);
        assert!(s.inactive_charge.is_some());
    }

    #[test]
    fn weight_floor_holds() {
        for alpha in [0.125, 0.25, 0.5] {
            let prior = ExpertPrior::geometric(0.2, 0.911, 6, alpha).unwrap();
            for t in 1..200_000u64 {
                if let Some(w) = prior.min_active_weight(t) {
                    assert!(w >= libm::pow(t as f64, -alpha) - 1e-15);
                }
            }
        }
    }

    #[test]
    fn prior_validation_and_queries() {
        assert!(ExpertPrior::new(alloc::vec![0.6, 0.6], 0.5).is_err());
        assert!(ExpertPrior::new(alloc::vec![0.0], 0.5).is_err());
        let p = ExpertPrior::new(alloc::vec![0.1, 0.5, 0.25], 0.5).unwrap();
        assert_eq!(p.weights(), &[0.5, 0.25, 0.1]);
        assert_eq!(p.entering_times(), &[4, 16, 100]);
        assert_eq!(p.at_least(0.2), &[0.5, 0.25]);
        assert_eq!(p.active_count(3), 0);
        assert_eq!(p.active_count(16), 2);
    }

    #[test]
    fn estimates_within_magnitude_bound() {
        let prior = ExpertPrior::geometric(0.2, 0.911, 6, 0.5).unwrap();
        let sched = InfiniteSchedule {
            alpha: 0.5,
            beta: 0.25,
            eta_exponent: 0.75,
        };
        let mut l = BfplInfinite::new(prior, sched, false).unwrap();
        let c = CostVector::new(alloc::vec![1.0; 6]).unwrap();
        let mut streams = RandomStreams::new(4);
        for t in 1..3000u64 {
            let mut fb = BanditFeedback::new(&c);
            let s = l.step(&mut streams, &mut fb).unwrap();
            let bound = libm::pow(t as f64, 0.75) * (1.0 + 1e-12);
            assert!(s.estimate.value() <= bound);
            if let Some((_, charge)) = s.inactive_charge {
                assert!(charge <= bound);
            }
            assert!(s.action < l.prior().active_count(t).max(1));
        }
    }
}
