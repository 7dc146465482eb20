use alloc::vec::Vec;

use super::fpl::{draw_perturbations, fpl_choose};
use super::schedule::{mc_schedule_with, oracle_fpl_eta, SampleRule};
use super::{BanditFeedback, Learner, Step};
use crate::error::Result;
use crate::oracle::{
    binomial_selection_count, clipped_probability_estimate, exact_selection_probability,
    mc_selection_count, EXACT_CAP,
};
use crate::rng::{RandomStreams, StreamName};
use crate::types::{EstimateVector, LearnerState, ScheduleParams, Variant};

/// How the hit count `a^i(k)` is produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum McCounter {
    /// Resample the perturbed leader `k` times and count wins.
    #[default]
    Resample,
    /// Draw the count from `Binomial(k, p)` with `p` from the exact oracle.
    /// Same law as `Resample` at O(1) cost per round; needs `n <= 20`.
    Binomial,
}

/// FPL with Monte-Carlo selection-probability estimates clipped below at
/// the exploration threshold `γ_t = 1/(2√t)`.
#[derive(Debug, Clone)]
pub struct McFpl {
    state: LearnerState,
    q: Vec<f64>,
    counter: McCounter,
    rule: SampleRule,
}

impl McFpl {
    pub fn new(n: usize, counter: McCounter) -> Result<Self> {
        oracle_fpl_eta(1, n)?;
        let counter = if n > EXACT_CAP {
            McCounter::Resample
        } else {
            counter
        };
        Ok(McFpl {
            state: LearnerState::new(n, Variant::McFpl)?,
            q: alloc::vec![0.0; n],
            counter,
            rule: SampleRule::Quadratic,
        })
    }

    pub fn with_sample_rule(mut self, rule: SampleRule) -> Self {
        self.rule = rule;
        self
    }

    pub fn counter(&self) -> McCounter {
        self.counter
    }
}

/// `c / max{γ, a/k - γ²/√2}` at `index`.
pub(crate) fn mc_estimate(index: usize, cost: f64, hits: u64, samples: u64, gamma: f64) -> Result<(EstimateVector, f64)> {
    let p_hat = clipped_probability_estimate(hits, samples, gamma)?;
    Ok((EstimateVector::one_hot(index, cost / p_hat)?, p_hat))
}

impl Learner for McFpl {
    fn state(&self) -> &LearnerState {
        &self.state
    }

    fn step(
        &mut self,
        streams: &mut RandomStreams,
        feedback: &mut BanditFeedback<'_>,
    ) -> Result<Step> {
        let t = self.state.round();
        let eta = oracle_fpl_eta(t, self.state.n())?;
        let (gamma, k) = mc_schedule_with(t, self.rule)?;
        draw_perturbations(streams, &mut self.q);
        let i = fpl_choose(self.state.cumulative(), &self.q, eta);
        let cum = self.state.cumulative();
        let mc = streams.get(StreamName::MonteCarlo);
        let hits = match self.counter {
            McCounter::Resample => mc_selection_count(cum, eta, i, k, mc),
            McCounter::Binomial => {
                let p = exact_selection_probability(cum, eta, i)?;
                binomial_selection_count(p, k, mc)?
            }
        };
        let cost = feedback.play(i)?;
        let (estimate, p_hat) = mc_estimate(i, cost, hits, k, gamma)?;
        let schedule = ScheduleParams {
            gamma,
            eta,
            samples: Some(k),
        };
        self.state.set_schedule(schedule);
        self.state.accumulate(&estimate)?;
        Ok(Step {
            action: i,
            explored: false,
            cost,
            estimate,
            inactive_charge: None,
            schedule,
            probability: Some(p_hat),
            stability: None,
        })
    }
}
