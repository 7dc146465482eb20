use alloc::vec::Vec;

use super::GameTrace;
use crate::learners::LearnerConfig;

/// Cumulative costs and regret of one game.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RegretReport {
    pub learner_cost: f64,
    /// `c_{1:T}^i` for every expert.
    pub expert_costs: Vec<f64>,
    pub best_expert: usize,
    /// `learner_cost - min_i c_{1:T}^i`.
    pub regret_vs_best: f64,
    pub regret_vs_expert: Vec<f64>,
    /// Expected-regret bound for the learner variant, when it has one.
    pub bound: Option<f64>,
}

/// `4 (T n √ln n)^{2/3}`.
pub fn bfpl_bound(horizon: u64, n: usize) -> f64 {
    let nf = n as f64;
    4.0 * libm::pow(horizon as f64 * nf * libm::sqrt(libm::log(nf)), 2.0 / 3.0)
}

/// `2 √(2 T n ln n)`.
pub fn oracle_fpl_bound(horizon: u64, n: usize) -> f64 {
    let nf = n as f64;
    2.0 * libm::sqrt(2.0 * horizon as f64 * nf * libm::log(nf))
}

/// `2 √(2 T n ln n) + 7 √T`.
pub fn mc_fpl_bound(horizon: u64, n: usize) -> f64 {
    oracle_fpl_bound(horizon, n) + 7.0 * libm::sqrt(horizon as f64)
}

pub fn theoretical_bound(learner: &LearnerConfig, horizon: u64, n: usize) -> Option<f64> {
    match learner {
        LearnerConfig::Bfpl {} => Some(bfpl_bound(horizon, n)),
        LearnerConfig::OracleFpl { .. } => Some(oracle_fpl_bound(horizon, n)),
        LearnerConfig::McFpl { .. } => Some(mc_fpl_bound(horizon, n)),
        LearnerConfig::BfplInfinite { .. } | LearnerConfig::RewardFpl {} => None,
    }
}

pub fn regret(trace: &GameTrace) -> RegretReport {
    let mut learner_cost = 0.0;
    let mut expert_costs = alloc::vec![0.0; trace.n];
    for r in &trace.rounds {
        learner_cost += r.cost;
        for (acc, &c) in expert_costs.iter_mut().zip(r.costs.as_slice()) {
            *acc += c;
        }
    }
    let mut best_expert = 0;
    for (i, &c) in expert_costs.iter().enumerate() {
        if c < expert_costs[best_expert] {
            best_expert = i;
        }
    }
    RegretReport {
        learner_cost,
        regret_vs_best: learner_cost - expert_costs[best_expert],
        regret_vs_expert: expert_costs.iter().map(|&c| learner_cost - c).collect(),
        best_expert,
        expert_costs,
        bound: theoretical_bound(&trace.learner, trace.horizon, trace.n),
    }
}

/// Per-round `(cumulative learner cost, regret so far vs. best expert so far)`.
pub fn regret_curve(trace: &GameTrace) -> Vec<(f64, f64)> {
    let mut learner_cost = 0.0;
    let mut expert_costs = alloc::vec![0.0; trace.n];
    trace
        .rounds
        .iter()
        .map(|r| {
            learner_cost += r.cost;
            for (acc, &c) in expert_costs.iter_mut().zip(r.costs.as_slice()) {
                *acc += c;
            }
            let best = expert_costs.iter().copied().fold(f64::INFINITY, f64::min);
            (learner_cost, learner_cost - best)
        })
        .collect()
}
