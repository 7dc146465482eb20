//! Per-round mean cost of FPL with fresh perturbations versus FPL with one
//! perturbation vector drawn per replication, both replayed on a fixed
//! sequence of estimates and cost vectors.

use alloc::vec::Vec;

use crate::error::{FplError, Result};
use crate::learners::fpl_choose;
use crate::rng::{Stream, StreamName};
use crate::types::{CostVector, EstimateVector};

/// Two-sided 99% normal quantile.
pub const Z_99: f64 = 2.575_829_303_548_901;

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CouplingRound {
    pub fresh_mean: f64,
    pub fresh_half_width: f64,
    pub fixed_mean: f64,
    pub fixed_half_width: f64,
}

impl CouplingRound {
    pub fn overlaps(&self) -> bool {
        (self.fresh_mean - self.fixed_mean).abs() <= self.fresh_half_width + self.fixed_half_width
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CouplingReport {
    pub replications: u64,
    pub rounds: Vec<CouplingRound>,
}

impl CouplingReport {
    pub fn all_overlap(&self) -> bool {
        self.rounds.iter().all(CouplingRound::overlaps)
    }
}

struct Moments {
    sum: f64,
    sum_sq: f64,
}

impl Moments {
    fn push(&mut self, x: f64) {
        self.sum += x;
        self.sum_sq += x * x;
    }

    fn mean_half_width(&self, m: f64) -> (f64, f64) {
        let mean = self.sum / m;
        let var = ((self.sum_sq - m * mean * mean) / (m - 1.0)).max(0.0);
        (mean, Z_99 * libm::sqrt(var / m))
    }
}

/// Replays `estimates`/`costs` with learning rates `etas` for `replications`
/// independent runs of each learner.
pub fn coupling_experiment(
    estimates: &[EstimateVector],
    costs: &[CostVector],
    etas: &[f64],
    replications: u64,
    seed: u64,
) -> Result<CouplingReport> {
    if replications < 1000 {
        return Err(FplError::InvalidParameter {
            name: "replications",
            reason: "need at least 1000",
        });
    }
    let horizon = estimates.len();
    if costs.len() != horizon || etas.len() != horizon {
        return Err(FplError::DimensionMismatch {
            expected: horizon,
            got: costs.len().min(etas.len()),
        });
    }
    let n = costs.first().map(CostVector::len).ok_or(FplError::NoExperts)?;
    // ĉ_{<t} for every t
    let mut prefixes: Vec<Vec<f64>> = Vec::with_capacity(horizon);
    let mut cum = alloc::vec![0.0; n];
    for e in estimates {
        prefixes.push(cum.clone());
        if let Some(i) = e.index() {
            if i >= n {
                return Err(FplError::DimensionMismatch {
                    expected: n,
                    got: i + 1,
                });
            }
            cum[i] += e.value();
        }
    }
    let mut fresh_stream = Stream::new(seed, StreamName::Perturbation, 0);
    let mut fixed_stream = Stream::new(seed, StreamName::Perturbation, 1);
    let zero = || Moments { sum: 0.0, sum_sq: 0.0 };
    let mut fresh: Vec<Moments> = (0..horizon).map(|_| zero()).collect();
    let mut fixed: Vec<Moments> = (0..horizon).map(|_| zero()).collect();
    let mut q = alloc::vec![0.0; n];
    let mut q_star = alloc::vec![0.0; n];
    for _ in 0..replications {
        q_star.iter_mut().for_each(|x| *x = fixed_stream.exponential());
        for t in 0..horizon {
            q.iter_mut().for_each(|x| *x = fresh_stream.exponential());
            let i = fpl_choose(&prefixes[t], &q, etas[t]);
            fresh[t].push(costs[t].get(i));
            let j = fpl_choose(&prefixes[t], &q_star, etas[t]);
            fixed[t].push(costs[t].get(j));
        }
    }
    let m = replications as f64;
    let rounds = fresh
        .iter()
        .zip(&fixed)
        .map(|(a, b)| {
            let (fresh_mean, fresh_half_width) = a.mean_half_width(m);
            let (fixed_mean, fixed_half_width) = b.mean_half_width(m);
            CouplingRound {
                fresh_mean,
                fresh_half_width,
                fixed_mean,
                fixed_half_width,
            }
        })
        .collect();
    Ok(CouplingReport {
        replications,
        rounds,
    })
}
