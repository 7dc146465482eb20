use alloc::vec::Vec;

use super::fpl::{draw_perturbations, fpl_choose};
use super::schedule::oracle_fpl_eta;
use super::{BanditFeedback, StabilityRecord, Learner, Step};
use crate::error::{FplError, Result};
use crate::oracle::{exact_selection_probability, EXACT_CAP};
use crate::rng::RandomStreams;
use crate::types::{EstimateVector, LearnerState, ScheduleParams, Variant};

/// Selection probabilities below this are treated as floating-point
/// underflow and fault the round instead of being clamped.
pub const GUARD_PROBABILITY: f64 = 1e-12;

/// Plain FPL (no exploration) whose estimate divides the observed cost by
/// the exact probability of the choice it made.
#[derive(Debug, Clone)]
pub struct OracleFpl {
    state: LearnerState,
    q: Vec<f64>,
    stability_check: bool,
}

impl OracleFpl {
    pub fn new(n: usize) -> Result<Self> {
        oracle_fpl_eta(1, n)?;
        if n > EXACT_CAP {
            return Err(FplError::ExactOracleCap { n, cap: EXACT_CAP });
        }
        Ok(OracleFpl {
            state: LearnerState::new(n, Variant::OracleFpl)?,
            q: alloc::vec![0.0; n],
            stability_check: false,
        })
    }

    /// Also evaluate the post-update probability `π` every round.
    pub fn with_stability_check(mut self, on: bool) -> Self {
        self.stability_check = on;
        self
    }
}

impl Learner for OracleFpl {
    fn state(&self) -> &LearnerState {
        &self.state
    }

    fn step(
        &mut self,
        streams: &mut RandomStreams,
        feedback: &mut BanditFeedback<'_>,
    ) -> Result<Step> {
        let eta = oracle_fpl_eta(self.state.round(), self.state.n())?;
        draw_perturbations(streams, &mut self.q);
        let i = fpl_choose(self.state.cumulative(), &self.q, eta);
        let p = exact_selection_probability(self.state.cumulative(), eta, i)?;
        if p < GUARD_PROBABILITY {
            return Err(FplError::ProbabilityUnderflow { index: i, prob: p });
        }
        let cost = feedback.play(i)?;
        let estimate = EstimateVector::one_hot(i, cost / p)?;
        let stability = if self.stability_check {
            let mut after = self.state.cumulative().to_vec();
            after[i] += estimate.value();
            let pi = exact_selection_probability(&after, eta, i)?;
            Some(StabilityRecord { p, pi, eta })
        } else {
            None
        };
        let schedule = ScheduleParams {
            gamma: 0.0,
            eta,
            samples: None,
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
            probability: Some(p),
            stability,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::types::CostVector;

    #[test]
    fn division_by_probability() {
        let e = EstimateVector::one_hot(1, 0.5 / 0.25).unwrap();
        assert_eq!(e.value(), 2.0);
    }

    #[test]
    fn estimate_is_cost_over_probability() {
        let mut l = OracleFpl::new(4).unwrap().with_stability_check(true);
        let c = CostVector::new(alloc::vec![0.3, 0.8, 0.5, 0.1]).unwrap();
        let mut streams = RandomStreams::new(17);
        for _ in 0..200 {
            let before = l.state().cumulative().to_vec();
            let mut fb = BanditFeedback::new(&c);
            let s = l.step(&mut streams, &mut fb).unwrap();
            let p = exact_selection_probability(&before, s.schedule.eta, s.action).unwrap();
            assert_eq!(s.probability, Some(p));
            assert!((s.estimate.value() - c.get(s.action) / p).abs() < 1e-12);
            let rec = s.stability.unwrap();
            assert!(rec.holds(s.estimate.value(), 1e-10), "{rec:?}");
        }
    }

    #[test]
    fn unbiased_identity() {
        // Σ_i p^i · (c^i / p^i) · 1{j = i} = c^j for every j.
        let cum = [1.0, 0.0, 2.5, 0.7];
        let c = [0.3, 0.8, 0.5, 0.1];
        let eta = 0.4;
        let probs = crate::oracle::exact_selection_probabilities(&cum, eta).unwrap().probs;
        for j in 0..4 {
            let mut e = 0.0;
            for i in 0..4 {
                if i == j {
                    e += probs[i] * (c[i] / probs[i]);
                }
            }
            assert!((e - c[j]).abs() < 1e-15);
        }
    }

    #[test]
    fn rejects_oversized_instances() {
        assert!(OracleFpl::new(21).is_err());
        assert!(OracleFpl::new(1).is_err());
    }
}
