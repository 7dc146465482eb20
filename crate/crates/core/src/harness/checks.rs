use alloc::vec::Vec;

use crate::error::Result;
use crate::learners::StabilityRecord;
use crate::oracle::{exact_selection_probabilities, exact_selection_probability};

/// `E_{r,u}[ĉ_t]` for exploration-round bFPL, by enumerating the `n + 1`
/// outcomes (exploit, or explore arm `u`).
pub fn bfpl_expected_estimate(costs: &[f64], gamma: f64) -> Vec<f64> {
    let n = costs.len();
    let mut e = alloc::vec![0.0; n];
    // exploit: probability 1 - γ, estimate 0
    for (u, &cu) in costs.iter().enumerate() {
        let prob = gamma / n as f64;
        e[u] += prob * (n as f64 * cu / gamma);
    }
    e
}

/// `Σ_i p^i · (c^i / p^i) e_i` with exact `p`.
pub fn oracle_expected_estimate(cumulative: &[f64], eta: f64, costs: &[f64]) -> Result<Vec<f64>> {
    let p = exact_selection_probabilities(cumulative, eta)?.probs;
    let mut e = alloc::vec![0.0; costs.len()];
    for i in 0..costs.len() {
        e[i] += p[i] * (costs[i] / p[i]);
    }
    Ok(e)
}

/// `(p, π)` for adding `v ≥ 0` to expert `i`'s cumulative estimate.
pub fn stability_instance(cumulative: &[f64], eta: f64, i: usize, v: f64) -> Result<StabilityRecord> {
    let p = exact_selection_probability(cumulative, eta, i)?;
    let mut after = cumulative.to_vec();
    after[i] += v;
    let pi = exact_selection_probability(&after, eta, i)?;
    Ok(StabilityRecord { p, pi, eta })
}
