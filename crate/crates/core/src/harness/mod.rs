//! Game loop under bandit feedback, regret accounting, and the
//! verification experiments built on top of recorded games.

mod azuma;
mod checks;
mod coupling;
mod regret;
pub mod stats;
mod telescoping;

use alloc::vec::Vec;

pub use azuma::{
    azuma_check, azuma_evaluate, azuma_offset, bfpl_conditional_cost, martingale_evaluate,
    AzumaReport,
};
pub use checks::{bfpl_expected_estimate, stability_instance, oracle_expected_estimate};
pub use coupling::{coupling_experiment, CouplingReport, CouplingRound, Z_99};
pub use regret::{
    bfpl_bound, mc_fpl_bound, oracle_fpl_bound, regret, regret_curve, theoretical_bound,
    RegretReport,
};
pub use telescoping::{telescoping_check, TelescopingReport};

use crate::adversaries::{Adversary, AdversaryConfig, AdversaryContext};
use crate::error::{FplError, Result};
use crate::learners::{BanditFeedback, StabilityRecord, Learner, LearnerConfig};
use crate::rng::{DrawCursor, RandomStreams, StreamName};
use crate::types::{CostVector, EstimateVector, LearnerState};

/// One round of a game.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RoundRecord {
    pub t: u64,
    pub action: usize,
    pub explored: bool,
    /// `c_t^{I_t}`.
    pub cost: f64,
    pub costs: CostVector,
    pub estimate: EstimateVector,
    pub inactive_charge: Option<(usize, f64)>,
    pub gamma: f64,
    pub eta: f64,
    pub samples: Option<u64>,
    pub probability: Option<f64>,
    pub stability: Option<StabilityRecord>,
    /// Stream positions at the start of the round.
    pub cursor: DrawCursor,
}

/// A complete game: configuration echo, seed, and every round.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct GameTrace {
    pub seed: u64,
    pub n: usize,
    pub horizon: u64,
    pub learner: LearnerConfig,
    pub adversary: AdversaryConfig,
    pub rounds: Vec<RoundRecord>,
    pub final_cumulative: Vec<f64>,
}

impl GameTrace {
    pub fn actions(&self) -> Vec<usize> {
        self.rounds.iter().map(|r| r.action).collect()
    }

    pub fn estimates(&self) -> Vec<EstimateVector> {
        self.rounds.iter().map(|r| r.estimate).collect()
    }

    pub fn cost_vectors(&self) -> Vec<CostVector> {
        self.rounds.iter().map(|r| r.costs.clone()).collect()
    }

    pub fn etas(&self) -> Vec<f64> {
        self.rounds.iter().map(|r| r.eta).collect()
    }

    /// Rebuilds `ĉ_{1:T}` from the recorded estimates and charges.
    pub fn replay_cumulative(&self) -> Result<Vec<f64>> {
        let mut state = LearnerState::new(self.n, self.learner_variant())?;
        for r in &self.rounds {
            if let Some((from, charge)) = r.inactive_charge {
                state.charge_suffix(from, charge);
            }
            state.accumulate(&r.estimate)?;
        }
        Ok(state.cumulative().to_vec())
    }

    fn learner_variant(&self) -> crate::types::Variant {
        use crate::types::Variant;
        match self.learner {
            LearnerConfig::Bfpl {} => Variant::Bfpl,
            LearnerConfig::OracleFpl { .. } => Variant::OracleFpl,
            LearnerConfig::McFpl { .. } => Variant::McFpl,
            LearnerConfig::BfplInfinite { .. } => Variant::BfplInfinite,
            LearnerConfig::RewardFpl {} => Variant::RewardFpl,
        }
    }
}

/// Plays `horizon` rounds of `learner` against `adversary`.
pub fn play(
    learner: &mut dyn Learner,
    adversary: &mut dyn Adversary,
    n: usize,
    horizon: u64,
    streams: &mut RandomStreams,
) -> Result<Vec<RoundRecord>> {
    let mut past_costs: Vec<CostVector> = Vec::with_capacity(horizon as usize);
    let mut past_actions: Vec<usize> = Vec::with_capacity(horizon as usize);
    let mut rounds = Vec::with_capacity(horizon as usize);
    for t in 1..=horizon {
        let cursor = streams.cursor();
        let ctx = AdversaryContext::new(t, n, &past_costs, &past_actions)?;
        let costs = adversary.next(&ctx, streams.get(StreamName::Adversary))?;
        rounds.push(learner_round(learner, streams, costs.clone(), t, n, cursor)?);
        past_actions.push(rounds[rounds.len() - 1].action);
        past_costs.push(costs);
    }
    Ok(rounds)
}

fn learner_round(
    learner: &mut dyn Learner,
    streams: &mut RandomStreams,
    costs: CostVector,
    t: u64,
    n: usize,
    cursor: DrawCursor,
) -> Result<RoundRecord> {
    if costs.len() != n {
        return Err(FplError::DimensionMismatch {
            expected: n,
            got: costs.len(),
        });
    }
    let mut feedback = BanditFeedback::new(&costs);
    let step = learner.step(streams, &mut feedback)?;
    if feedback.played() != Some(step.action) {
        return Err(FplError::FeedbackViolation(
            "reported action differs from the played arm",
        ));
    }
    Ok(RoundRecord {
        t,
        action: step.action,
        explored: step.explored,
        cost: step.cost,
        estimate: step.estimate,
        inactive_charge: step.inactive_charge,
        gamma: step.schedule.gamma,
        eta: step.schedule.eta,
        samples: step.schedule.samples,
        probability: step.probability,
        stability: step.stability,
        costs,
        cursor,
    })
}

fn validate_horizon(horizon: u64) -> Result<()> {
    if horizon == 0 {
        return Err(FplError::InvalidParameter {
            name: "horizon",
            reason: "must be at least 1",
        });
    }
    Ok(())
}

/// Builds both sides from their configs and plays a seeded game.
pub fn run_game(
    learner: &LearnerConfig,
    adversary: &AdversaryConfig,
    n: usize,
    horizon: u64,
    seed: u64,
) -> Result<GameTrace> {
    validate_horizon(horizon)?;
    let mut l = learner.build(n)?;
    let mut a = adversary.build(n, horizon)?;
    let mut streams = RandomStreams::new(seed);
    let rounds = play(l.as_mut(), a.as_mut(), n, horizon, &mut streams)?;
    Ok(GameTrace {
        seed,
        n,
        horizon,
        learner: learner.clone(),
        adversary: adversary.clone(),
        rounds,
        final_cumulative: l.state().cumulative().to_vec(),
    })
}

/// Same game, but all cost vectors are generated before the learner moves.
/// Only valid for oblivious adversaries.
pub fn run_game_oblivious(
    learner: &LearnerConfig,
    adversary: &AdversaryConfig,
    n: usize,
    horizon: u64,
    seed: u64,
) -> Result<GameTrace> {
    validate_horizon(horizon)?;
    let mut l = learner.build(n)?;
    let mut a = adversary.build(n, horizon)?;
    if !a.is_oblivious() {
        return Err(FplError::InvalidParameter {
            name: "adversary",
            reason: "pre-generated costs require an oblivious adversary",
        });
    }
    let mut streams = RandomStreams::new(seed);
    let placeholder = alloc::vec![0usize; horizon as usize];
    let mut costs: Vec<CostVector> = Vec::with_capacity(horizon as usize);
    let mut adv_positions = Vec::with_capacity(horizon as usize);
    for t in 1..=horizon {
        let s = streams.get(StreamName::Adversary);
        adv_positions.push(s.position());
        let ctx = AdversaryContext::new(t, n, &costs, &placeholder[..(t - 1) as usize])?;
        let c = a.next(&ctx, s)?;
        costs.push(c);
    }
    let mut rounds = Vec::with_capacity(horizon as usize);
    for (idx, c) in costs.into_iter().enumerate() {
        let mut cursor = streams.cursor();
        cursor.adv = adv_positions[idx];
        rounds.push(learner_round(l.as_mut(), &mut streams, c, idx as u64 + 1, n, cursor)?);
    }
    Ok(GameTrace {
        seed,
        n,
        horizon,
        learner: learner.clone(),
        adversary: adversary.clone(),
        rounds,
        final_cumulative: l.state().cumulative().to_vec(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_round_exploration_cost() {
        // n = 2 at t = 1 always explores (γ = 1); find a seed picking arm 0.
        let adv = AdversaryConfig::FixedMatrix {
            rows: alloc::vec![alloc::vec![0.3, 0.7]],
        };
        let mut found = false;
        for seed in 0..50 {
            let tr = run_game(&LearnerConfig::Bfpl {}, &adv, 2, 1, seed).unwrap();
            assert!(tr.rounds[0].explored);
            if tr.rounds[0].action == 0 {
                assert_eq!(regret(&tr).learner_cost, 0.3);
                found = true;
                break;
            }
        }
        assert!(found);
    }

    #[test]
    fn same_seed_same_trace() {
        let adv = AdversaryConfig::PunishLastAction {};
        let a = run_game(&LearnerConfig::Bfpl {}, &adv, 3, 500, 9).unwrap();
        let b = run_game(&LearnerConfig::Bfpl {}, &adv, 3, 500, 9).unwrap();
        assert_eq!(a, b);
        let c = run_game(&LearnerConfig::Bfpl {}, &adv, 3, 500, 10).unwrap();
        assert_ne!(a.actions(), c.actions());
    }

    #[test]
    fn replay_is_bit_exact() {
        let adv = AdversaryConfig::BernoulliStochastic {
            means: alloc::vec![0.2, 0.5, 0.6],
        };
        for cfg in [
            LearnerConfig::Bfpl {},
            LearnerConfig::OracleFpl { stability_check: false },
            LearnerConfig::RewardFpl {},
        ] {
            let tr = run_game(&cfg, &adv, 3, 400, 1).unwrap();
            let replayed = tr.replay_cumulative().unwrap();
            for (a, b) in replayed.iter().zip(&tr.final_cumulative) {
                assert_eq!(a.to_bits(), b.to_bits());
            }
        }
    }

    #[test]
    fn oblivious_path_matches_adaptive_path() {
        let adv = AdversaryConfig::FixedMatrix {
            rows: alloc::vec![alloc::vec![0.3, 0.7, 0.5], alloc::vec![0.9, 0.1, 0.4]],
        };
        let a = run_game(&LearnerConfig::Bfpl {}, &adv, 3, 300, 5).unwrap();
        let b = run_game_oblivious(&LearnerConfig::Bfpl {}, &adv, 3, 300, 5).unwrap();
        assert_eq!(a, b);
        assert!(run_game_oblivious(&LearnerConfig::Bfpl {}, &AdversaryConfig::PunishLastAction {}, 3, 10, 5).is_err());
    }

    #[test]
    fn learner_reading_two_arms_is_rejected() {
        struct Cheater(LearnerState);
        impl Learner for Cheater {
            fn state(&self) -> &LearnerState {
                &self.0
            }
            fn step(&mut self, _: &mut RandomStreams, fb: &mut BanditFeedback<'_>) -> Result<crate::learners::Step> {
                fb.play(0)?;
                fb.play(1)?;
                unreachable!()
            }
        }
        let mut l = Cheater(LearnerState::new(2, crate::types::Variant::Bfpl).unwrap());
        let mut a = AdversaryConfig::PunishLastAction {}.build(2, 3).unwrap();
        let err = play(&mut l, a.as_mut(), 2, 3, &mut RandomStreams::new(0)).unwrap_err();
        assert!(matches!(err, FplError::FeedbackViolation(_)));
    }

    #[test]
    fn replaying_a_round_from_its_cursor() {
        let adv = AdversaryConfig::BernoulliStochastic {
            means: alloc::vec![0.3, 0.6],
        };
        let tr = run_game(&LearnerConfig::Bfpl {}, &adv, 2, 60, 21).unwrap();
        let mut learner = crate::learners::Bfpl::new(2).unwrap();
        let mut streams = RandomStreams::new(21);
        for r in &tr.rounds {
            streams.restore(&r.cursor);
            let mut fb = BanditFeedback::new(&r.costs);
            let step = learner.step(&mut streams, &mut fb).unwrap();
            assert_eq!(step.action, r.action);
            assert_eq!(step.estimate, r.estimate);
        }
    }
}
