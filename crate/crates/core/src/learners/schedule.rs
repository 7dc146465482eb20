//! Parameter schedules. All logarithms are natural.

use crate::error::{FplError, Result};
use crate::types::ScheduleParams;

fn check_round(t: u64) -> Result<()> {
    if t == 0 {
        return Err(FplError::InvalidParameter {
            name: "t",
            reason: "rounds are numbered from 1",
        });
    }
    Ok(())
}

fn check_experts(n: usize) -> Result<()> {
    if n < 2 {
        return Err(FplError::InvalidParameter {
            name: "n",
            reason: "schedule needs at least two experts",
        });
    }
    Ok(())
}

/// Exploration-round bandit FPL:
/// `γ_t = min{1, t^{-1/3}(n√ln n)^{2/3}}`, `η_t = (γ_t/n²) t^{-1/3}(n√ln n)^{2/3}`.
pub fn bfpl_schedule(t: u64, n: usize) -> Result<ScheduleParams> {
    check_round(t)?;
    check_experts(n)?;
    let nf = n as f64;
    let base = libm::pow(t as f64, -1.0 / 3.0) * libm::pow(nf * libm::sqrt(libm::log(nf)), 2.0 / 3.0);
    let gamma = base.min(1.0);
    Ok(ScheduleParams {
        gamma,
        eta: gamma / (nf * nf) * base,
        samples: None,
    })
}

/// Learning rate `√(ln n / (2nt))` of the full-information-estimate variants.
pub fn oracle_fpl_eta(t: u64, n: usize) -> Result<f64> {
    check_round(t)?;
    check_experts(n)?;
    let nf = n as f64;
    Ok(libm::sqrt(libm::log(nf) / (2.0 * nf * t as f64)))
}

/// How the Monte-Carlo sample count grows with `t`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum SampleRule {
    /// `k = ⌈2t² ln(2√t)⌉`.
    #[default]
    Quadratic,
    /// `k = ⌈γ^{-4} ln(1/γ)⌉`, which makes `e^{-γ⁴k} ≤ γ` hold.
    Hoeffding,
}

/// `γ_t = 1/(2√t)` and the per-round sample count.
pub fn mc_schedule_with(t: u64, rule: SampleRule) -> Result<(f64, u64)> {
    check_round(t)?;
    let tf = t as f64;
    let gamma = 1.0 / (2.0 * libm::sqrt(tf));
    let k = match rule {
        SampleRule::Quadratic => libm::ceil(2.0 * tf * tf * libm::log(2.0 * libm::sqrt(tf))),
        SampleRule::Hoeffding => hoeffding_samples(gamma),
    };
    Ok((gamma, (k as u64).max(1)))
}

/// `(γ_t, k_t)` with the default sample rule.
pub fn mc_schedule(t: u64) -> Result<(f64, u64)> {
    mc_schedule_with(t, SampleRule::Quadratic)
}

/// `⌈γ^{-4} ln(1/γ)⌉`.
pub fn hoeffding_samples(gamma: f64) -> f64 {
    libm::ceil(libm::pow(gamma, -4.0) * libm::log(1.0 / gamma))
}

/// Reward mode: `γ_t = min{1, √(n ln n / t)}`, `η_t = γ_t / n`.
pub fn reward_schedule(t: u64, n: usize) -> Result<ScheduleParams> {
    check_round(t)?;
    check_experts(n)?;
    let nf = n as f64;
    let gamma = libm::sqrt(nf * libm::log(nf) / t as f64).min(1.0);
    Ok(ScheduleParams {
        gamma,
        eta: gamma / nf,
        samples: None,
    })
}

/// `⌈(1/w)^{1/α}⌉`. Values within `1e-9` relative of an integer are
/// taken as that integer so that e.g. `(1/0.1)^2` gives 100.
pub fn entering_time(w: f64, alpha: f64) -> Result<u64> {
    if !(w > 0.0 && w <= 1.0) {
        return Err(FplError::InvalidParameter {
            name: "weight",
            reason: "must lie in (0, 1]",
        });
    }
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(FplError::InvalidParameter {
            name: "alpha",
            reason: "must lie in (0, 1)",
        });
    }
    let x = libm::pow(1.0 / w, 1.0 / alpha);
    if !x.is_finite() || x > 1e18 {
        return Err(FplError::InvalidParameter {
            name: "weight",
            reason: "entering time overflows",
        });
    }
    let r = libm::round(x);
    let tau = if (x - r).abs() <= 1e-9 * x { r } else { libm::ceil(x) };
    Ok(tau.max(1.0) as u64)
}

/// Power-law schedule of the infinite-expert variant:
/// `γ_t = t^{-β}`, `η_t = t^{-η_exp}`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(deny_unknown_fields))]
pub struct InfiniteSchedule {
    pub alpha: f64,
    pub beta: f64,
    pub eta_exponent: f64,
}

impl Default for InfiniteSchedule {
    fn default() -> Self {
        InfiniteSchedule {
            alpha: 1.0 / 8.0,
            beta: 0.25,
            eta_exponent: 0.75,
        }
    }
}

impl InfiniteSchedule {
    /// `β = (1 - 2α)/3` and `η_t = t^{-2α-2β}`.
    pub fn balanced(alpha: f64) -> Self {
        let beta = (1.0 - 2.0 * alpha) / 3.0;
        InfiniteSchedule {
            alpha,
            beta,
            eta_exponent: 2.0 * alpha + 2.0 * beta,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(FplError::InvalidParameter {
                name: "alpha",
                reason: "must lie in (0, 1)",
            });
        }
        if !(self.beta >= 0.0 && self.beta < 1.0) {
            return Err(FplError::InvalidParameter {
                name: "beta",
                reason: "must lie in [0, 1)",
            });
        }
        if !(self.eta_exponent >= 0.0 && self.eta_exponent.is_finite()) {
            return Err(FplError::InvalidParameter {
                name: "eta_exponent",
                reason: "must be finite and nonnegative",
            });
        }
        Ok(())
    }

    pub fn at(&self, t: u64) -> Result<ScheduleParams> {
        check_round(t)?;
        let tf = t as f64;
        Ok(ScheduleParams {
            gamma: libm::pow(tf, -self.beta),
            eta: libm::pow(tf, -self.eta_exponent),
            samples: None,
        })
    }
}
