use alloc::vec::Vec;

use super::fpl::{draw_perturbations, fpl_choose};
use super::schedule::reward_schedule;
use super::{BanditFeedback, Learner, Step};
use crate::error::{FplError, Result};
use crate::oracle::{exact_selection_probability, EXACT_CAP};
use crate::rng::{RandomStreams, StreamName};
use crate::types::{EstimateVector, LearnerState, Variant};

/// Reward-maximizing FPL with uniform exploration mixed in.
///
/// Rewards are `1 - cost`. The state accumulates reward estimates
/// `r / P(I_t = i)` where `P` is the mixture `(1-γ)p_FPL + γ/n`.
#[derive(Debug, Clone)]
pub struct RewardFpl {
    state: LearnerState,
    q: Vec<f64>,
    negated: Vec<f64>,
}

impl RewardFpl {
    pub fn new(n: usize) -> Result<Self> {
        reward_schedule(1, n)?;
        if n > EXACT_CAP {
            return Err(FplError::ExactOracleCap { n, cap: EXACT_CAP });
        }
        Ok(RewardFpl {
            state: LearnerState::new(n, Variant::RewardFpl)?,
            q: alloc::vec![0.0; n],
            negated: alloc::vec![0.0; n],
        })
    }

    /// Probability of playing each arm this round.
    pub fn mixture_probabilities(&self, gamma: f64, eta: f64) -> Result<Vec<f64>> {
        let n = self.state.n();
        let neg: Vec<f64> = self.state.cumulative().iter().map(|&r| -r).collect();
        (0..n)
            .map(|i| Ok(mixture(exact_selection_probability(&neg, eta, i)?, gamma, n)))
            .collect()
    }
}

fn mixture(p_fpl: f64, gamma: f64, n: usize) -> f64 {
    (1.0 - gamma) * p_fpl + gamma / n as f64
}

impl Learner for RewardFpl {
    fn state(&self) -> &LearnerState {
        &self.state
    }

    fn step(
        &mut self,
        streams: &mut RandomStreams,
        feedback: &mut BanditFeedback<'_>,
    ) -> Result<Step> {
        let n = self.state.n();
        let schedule = reward_schedule(self.state.round(), n)?;
        for (neg, &r) in self.negated.iter_mut().zip(self.state.cumulative()) {
            *neg = -r;
        }
        let explored = streams.get(StreamName::ExploreCoin).bernoulli(schedule.gamma);
        let action = if explored {
            streams.get(StreamName::ExplorePick).index(n)
        } else {
            // argmax r̂ + q/η == argmin (-r̂) - q/η
            draw_perturbations(streams, &mut self.q);
            fpl_choose(&self.negated, &self.q, schedule.eta)
        };
        let p_fpl = exact_selection_probability(&self.negated, schedule.eta, action)?;
        let prob = mixture(p_fpl, schedule.gamma, n);
        let cost = feedback.play(action)?;
        let estimate = EstimateVector::one_hot(action, (1.0 - cost) / prob)?;
        self.state.set_schedule(schedule);
        self.state.accumulate(&estimate)?;
        Ok(Step {
            action,
            explored,
            cost,
            estimate,
            inactive_charge: None,
            schedule,
            probability: Some(prob),
            stability: None,
        })
    }
}
