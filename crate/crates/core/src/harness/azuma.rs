//! Concentration of the realized learner cost around its mean:
//! `c_{1:T} ≤ E c_{1:T} + √(2T ln(2/δ))` with probability at least `1-δ`.

use alloc::vec::Vec;

use super::{run_game, stats, GameTrace};
use crate::adversaries::AdversaryConfig;
use crate::error::{FplError, Result};
use crate::learners::LearnerConfig;
use crate::oracle::{closed_form_probabilities, compensated_sum};

pub const MIN_SEEDS: usize = 200;

/// `√(2T ln(2/δ))`.
pub fn azuma_offset(horizon: u64, delta: f64) -> f64 {
    libm::sqrt(2.0 * horizon as f64 * libm::log(2.0 / delta))
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct AzumaReport {
    pub runs: usize,
    /// Mean cost from the reference batch.
    pub expected_cost: f64,
    pub offset: f64,
    pub violations: usize,
    pub frequency: f64,
    /// `δ + 3σ` with `σ = √(δ(1-δ)/runs)`.
    pub threshold: f64,
    pub pass: bool,
}

/// Compares `eval_costs` against the mean of an independent
/// `reference_costs` batch.
pub fn azuma_evaluate(
    eval_costs: &[f64],
    reference_costs: &[f64],
    horizon: u64,
    delta: f64,
) -> Result<AzumaReport> {
    if !(delta > 0.0 && delta <= 1.0) {
        return Err(FplError::InvalidParameter {
            name: "delta",
            reason: "must lie in (0, 1]",
        });
    }
    if eval_costs.len() < MIN_SEEDS || reference_costs.is_empty() {
        return Err(FplError::InvalidParameter {
            name: "seeds",
            reason: "need at least 200 evaluation runs and a reference batch",
        });
    }
    let expected_cost = reference_costs.iter().sum::<f64>() / reference_costs.len() as f64;
    let offset = azuma_offset(horizon, delta);
    let violations = eval_costs.iter().filter(|&&c| c > expected_cost + offset).count();
    let runs = eval_costs.len();
    let frequency = violations as f64 / runs as f64;
    let threshold = delta + 3.0 * stats::binomial_sigma(delta, runs);
    Ok(AzumaReport {
        runs,
        expected_cost,
        offset,
        violations,
        frequency,
        threshold,
        pass: frequency <= threshold,
    })
}

/// `Σ_t E[c_t^{I_t} | h_{<t}]` of a bFPL game: the centre of the
/// bounded-difference martingale, with the exploitation distribution taken
/// from the closed form.
pub fn bfpl_conditional_cost(trace: &GameTrace) -> Result<f64> {
    if !matches!(trace.learner, LearnerConfig::Bfpl {}) {
        return Err(FplError::InvalidParameter {
            name: "learner",
            reason: "conditional costs are defined for bfpl traces",
        });
    }
    let n = trace.n as f64;
    let mut cum = alloc::vec![0.0; trace.n];
    let mut terms = Vec::with_capacity(trace.rounds.len());
    for r in &trace.rounds {
        let c = r.costs.as_slice();
        let p = closed_form_probabilities(&cum, r.eta)?.probs;
        let exploit = compensated_sum(p.iter().zip(c).map(|(a, b)| a * b));
        let explore = compensated_sum(c.iter().copied()) / n;
        terms.push(r.gamma * explore + (1.0 - r.gamma) * exploit);
        if let Some(i) = r.estimate.index() {
            cum[i] += r.estimate.value();
        }
    }
    Ok(compensated_sum(terms))
}

/// Fraction of games whose realized cost exceeds its own conditional
/// centre by more than the offset.
pub fn martingale_evaluate(
    realized: &[f64],
    centres: &[f64],
    horizon: u64,
    delta: f64,
) -> Result<AzumaReport> {
    if realized.len() != centres.len() || realized.len() < MIN_SEEDS {
        return Err(FplError::InvalidParameter {
            name: "seeds",
            reason: "need at least 200 paired runs",
        });
    }
    let offset = azuma_offset(horizon, delta);
    let violations = realized
        .iter()
        .zip(centres)
        .filter(|(c, e)| **c > **e + offset)
        .count();
    let runs = realized.len();
    let frequency = violations as f64 / runs as f64;
    let threshold = delta + 3.0 * stats::binomial_sigma(delta, runs);
    Ok(AzumaReport {
        runs,
        expected_cost: centres.iter().sum::<f64>() / runs as f64,
        offset,
        violations,
        frequency,
        threshold,
        pass: frequency <= threshold,
    })
}

/// Runs `seeds` reference games (seeds `base..base+seeds`) and `seeds`
/// evaluation games (the next block) sequentially.
pub fn azuma_check(
    learner: &LearnerConfig,
    adversary: &AdversaryConfig,
    n: usize,
    horizon: u64,
    delta: f64,
    seeds: usize,
    base: u64,
) -> Result<AzumaReport> {
    let total_cost = |seed: u64| -> Result<f64> {
        let trace = run_game(learner, adversary, n, horizon, seed)?;
        Ok(trace.rounds.iter().map(|r| r.cost).sum())
    };
    let reference: Vec<f64> = (0..seeds as u64)
        .map(|s| total_cost(base + s))
        .collect::<Result<_>>()?;
    let eval: Vec<f64> = (0..seeds as u64)
        .map(|s| total_cost(base + seeds as u64 + s))
        .collect::<Result<_>>()?;
    azuma_evaluate(&eval, &reference, horizon, delta)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn offset_values() {
        assert!((azuma_offset(10_000, 0.05) - 271.62).abs() < 5e-3);
        assert!((azuma_offset(100, 1.0) - libm::sqrt(200.0 * core::f64::consts::LN_2)).abs() < 1e-12);
    }

    #[test]
    fn delta_one_frequency_at_most_one() {
        let eval = alloc::vec![1e6; 200];
        let r = azuma_evaluate(&eval, &[0.0], 10, 1.0).unwrap();
        assert_eq!(r.frequency, 1.0);
        assert!(r.pass);
    }

    #[test]
    fn rejects_small_batches() {
        assert!(azuma_evaluate(&[0.0; 10], &[0.0], 10, 0.05).is_err());
    }

    #[test]
    fn conditional_cost_of_constant_costs() {
        let adv = AdversaryConfig::FixedMatrix {
            rows: alloc::vec![alloc::vec![0.25, 0.25, 0.25]],
        };
        let tr = run_game(&LearnerConfig::Bfpl {}, &adv, 3, 40, 1).unwrap();
        assert!((bfpl_conditional_cost(&tr).unwrap() - 10.0).abs() < 1e-12);
    }

    #[test]
    fn conditional_cost_tracks_realized_cost() {
        let adv = AdversaryConfig::BernoulliStochastic {
            means: alloc::vec![0.2, 0.5, 0.8],
        };
        let mut gap = 0.0;
        for seed in 0..40 {
            let tr = run_game(&LearnerConfig::Bfpl {}, &adv, 3, 400, seed).unwrap();
            let realized: f64 = tr.rounds.iter().map(|r| r.cost).sum();
            gap += realized - bfpl_conditional_cost(&tr).unwrap();
        }
        // martingale differences average out: |mean gap| well inside √T
        assert!((gap / 40.0).abs() < 5.0, "{gap}");
    }

    #[test]
    fn small_bfpl_game() {
        let adv = AdversaryConfig::BernoulliStochastic {
            means: alloc::vec![0.2, 0.5, 0.8],
        };
        let r = azuma_check(&LearnerConfig::Bfpl {}, &adv, 3, 50, 0.05, 200, 0).unwrap();
        assert!(r.pass, "{r:?}");
    }
}
