//! Induction identity for the infeasible leader with a fixed perturbation.
//!
//! With `c̃_{1:t} = ĉ_{1:t} - q*/η_t` and `M_t` the argmin of `c̃_{1:t}`:
//!
//! `Σ_t M_t∘ĉ_t - Σ_t M_t∘q*(1/η_t - 1/η_{t-1}) = Σ_t M_t∘c̃_t ≤ M_T∘c̃_{1:T}`.
//!
//! The inequality chain is checked link by link on the computed vectors,
//! `c̃_{1:t}[M_t] ≤ c̃_{1:t}[M_{t+1}]`, which holds without rounding slack.

use alloc::vec::Vec;

use crate::error::{FplError, Result};
use crate::oracle::compensated_sum;
use crate::types::EstimateVector;

pub const EQUALITY_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TelescopingReport {
    /// `|lhs - middle|` of the equality.
    pub residual: f64,
    /// Every link `c̃_{1:t}[M_t] ≤ c̃_{1:t}[M_{t+1}]` held.
    pub termwise_ok: bool,
    /// `M_T∘c̃_{1:T} - Σ_t M_t∘c̃_t` evaluated in floating point.
    pub gap: f64,
    pub pass: bool,
}

fn argmin(v: &[f64]) -> usize {
    let mut best = 0;
    for (j, &x) in v.iter().enumerate() {
        if x < v[best] {
            best = j;
        }
    }
    best
}

pub fn telescoping_check(
    estimates: &[EstimateVector],
    q_star: &[f64],
    etas: &[f64],
) -> Result<TelescopingReport> {
    let n = q_star.len();
    if n == 0 {
        return Err(FplError::NoExperts);
    }
    if etas.len() != estimates.len() {
        return Err(FplError::DimensionMismatch {
            expected: estimates.len(),
            got: etas.len(),
        });
    }
    for &eta in etas {
        if !(eta.is_finite() && eta > 0.0) {
            return Err(FplError::NonFinite { what: "eta", value: eta });
        }
    }
    let mut cum = alloc::vec![0.0; n];
    let mut prev_tilde = alloc::vec![0.0; n];
    let mut tilde = alloc::vec![0.0; n];
    let mut inv_prev = 0.0;
    let mut est_terms = Vec::with_capacity(etas.len());
    let mut pert_terms = Vec::with_capacity(etas.len());
    let mut tilde_terms = Vec::with_capacity(etas.len());
    let mut termwise_ok = true;
    let mut prev_leader: Option<usize> = None;
    let mut last_value = 0.0;
    for (est, &eta) in estimates.iter().zip(etas) {
        if let Some(i) = est.index() {
            if i >= n {
                return Err(FplError::DimensionMismatch {
                    expected: n,
                    got: i + 1,
                });
            }
            cum[i] += est.value();
        }
        let inv = 1.0 / eta;
        for j in 0..n {
            tilde[j] = cum[j] - q_star[j] * inv;
        }
        let m = argmin(&tilde);
        if let Some(p) = prev_leader {
            if prev_tilde[p] > prev_tilde[m] {
                termwise_ok = false;
            }
        }
        est_terms.push(est.at(m));
        pert_terms.push(q_star[m] * (inv - inv_prev));
        tilde_terms.push(tilde[m] - prev_tilde[m]);
        last_value = tilde[m];
        prev_tilde.copy_from_slice(&tilde);
        prev_leader = Some(m);
        inv_prev = inv;
    }
    let lhs = compensated_sum(est_terms) - compensated_sum(pert_terms);
    let middle = compensated_sum(tilde_terms.iter().copied());
    let residual = libm::fabs(lhs - middle);
    let gap = last_value - middle;
    Ok(TelescopingReport {
        residual,
        termwise_ok,
        gap,
        pass: residual < EQUALITY_TOLERANCE && termwise_ok,
    })
}
