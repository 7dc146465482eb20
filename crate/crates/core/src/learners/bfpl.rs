use alloc::vec::Vec;

use super::fpl::{draw_perturbations, fpl_choose};
use super::schedule::bfpl_schedule;
use super::{BanditFeedback, Learner, Step};
use crate::error::Result;
use crate::rng::{RandomStreams, StreamName};
use crate::types::{EstimateVector, LearnerState, Variant};

/// Bandit FPL that learns only from designated exploration rounds.
///
/// With probability `γ_t` the round explores: a uniform arm is played and
/// its cost enters the estimate as `n·c/γ_t`. Otherwise plain FPL picks the
/// arm and the estimate is zero.
#[derive(Debug, Clone)]
pub struct Bfpl {
    state: LearnerState,
    q: Vec<f64>,
}

impl Bfpl {
    pub fn new(n: usize) -> Result<Self> {
        bfpl_schedule(1, n)?;
        Ok(Bfpl {
            state: LearnerState::new(n, Variant::Bfpl)?,
            q: alloc::vec![0.0; n],
        })
    }
}

/// `n·c/γ` at `index`.
pub(crate) fn exploration_estimate(n: usize, index: usize, cost: f64, gamma: f64) -> Result<EstimateVector> {
    EstimateVector::one_hot(index, n as f64 * cost / gamma)
}

impl Learner for Bfpl {
    fn state(&self) -> &LearnerState {
        &self.state
    }

    fn step(
        &mut self,
        streams: &mut RandomStreams,
        feedback: &mut BanditFeedback<'_>,
    ) -> Result<Step> {
        let n = self.state.n();
        let schedule = bfpl_schedule(self.state.round(), n)?;
        let explored = streams.get(StreamName::ExploreCoin).bernoulli(schedule.gamma);
        let (action, cost, estimate) = if explored {
            let u = streams.get(StreamName::ExplorePick).index(n);
            let c = feedback.play(u)?;
            (u, c, exploration_estimate(n, u, c, schedule.gamma)?)
        } else {
            draw_perturbations(streams, &mut self.q);
            let i = fpl_choose(self.state.cumulative(), &self.q, schedule.eta);
            (i, feedback.play(i)?, EstimateVector::zero())
        };
        self.state.set_schedule(schedule);
        self.state.accumulate(&estimate)?;
        Ok(Step {
            action,
            explored,
            cost,
            estimate,
            inactive_charge: None,
            schedule,
            probability: None,
            stability: None,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::types::CostVector;

    #[test]
    fn exploration_estimate_value() {
        let e = exploration_estimate(5, 3, 0.6, 0.2).unwrap();
        assert_eq!(e.index(), Some(3));
        assert!((e.value() - 15.0).abs() < 1e-12);
    }

    #[test]
    fn unbiased_by_enumeration() {
        // E over (r, u): with prob γ explore, u uniform; estimate n c^u / γ at u.
        let costs = [0.1, 0.9, 0.45, 0.0, 1.0];
        let n = costs.len();
        for t in [1u64, 7, 100, 5000] {
            let gamma = bfpl_schedule(t, n).unwrap().gamma;
            for (i, &ci) in costs.iter().enumerate() {
                let mut expectation = 0.0;
                for (u, &cu) in costs.iter().enumerate() {
                    let e = exploration_estimate(n, u, cu, gamma).unwrap();
                    expectation += gamma * (1.0 / n as f64) * e.at(i);
                }
                // exploitation rounds contribute (1-γ)·0
                assert!((expectation - ci).abs() <= 1e-15, "{expectation} vs {ci}");
            }
        }
    }

    #[test]
    fn exploitation_round_has_zero_estimate() {
        let mut l = Bfpl::new(3).unwrap();
        let c = CostVector::new(alloc::vec![0.2, 0.4, 0.6]).unwrap();
        let mut streams = RandomStreams::new(1);
        let mut saw_exploit = false;
        for _ in 0..2000 {
            let mut fb = BanditFeedback::new(&c);
            let s = l.step(&mut streams, &mut fb).unwrap();
            assert_eq!(fb.played(), Some(s.action));
            if !s.explored {
                saw_exploit = true;
                assert!(s.estimate.is_zero());
            } else {
                assert!(s.estimate.value() <= 3.0 / s.schedule.gamma + 1e-12);
            }
        }
        assert!(saw_exploit);
    }
}
