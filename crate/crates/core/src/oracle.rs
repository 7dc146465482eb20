//! Selection distribution of the exponentially perturbed argmin.
//!
//! Expert `i` wins `argmin_j { ĉ^j - q^j/η }` with probability
//!
//! ```text
//! p^i = ∫_{u0}^∞ e^{-u} Π_{j≠i} (1 - e^{d_j - u}) du,   d_j = η(ĉ^i - ĉ^j),
//! ```
//!
//! where `u0 = max(0, max_j d_j)`. Writing `x_j = e^{d_j - u0} ∈ (0, 1]`
//! this is `e^{-u0} Σ_k (-1)^k e_k(x) / (k+1)` with `e_k` the elementary
//! symmetric polynomials (the subset expansion grouped by subset size), or
//! equivalently `e^{-u0} ∫_0^1 Π_j (1 - x_j s) ds`. The first form is the
//! closed form; the second is integrated adaptively as a cross-check.

use alloc::vec::Vec;

use rand_distr::{Binomial, Distribution};

use crate::error::{FplError, Result};
use crate::rng::Stream;

/// Largest expert count accepted by the exact methods.
pub const EXACT_CAP: usize = 20;

/// Closed form and quadrature must agree to this before the closed form
/// is trusted.
pub const FALLBACK_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Method {
    ClosedForm,
    Quadrature,
    MonteCarlo { samples: u64, hits: Vec<u64> },
}

/// Probability vector over experts for the perturbed-argmin event.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SelectionDistribution {
    pub probs: Vec<f64>,
    pub method: Method,
}

impl SelectionDistribution {
    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    pub fn max_abs_diff(&self, other: &SelectionDistribution) -> f64 {
        self.probs
            .iter()
            .zip(&other.probs)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

fn validate(cumulative: &[f64], eta: f64) -> Result<()> {
    if cumulative.is_empty() {
        return Err(FplError::NoExperts);
    }
    if !eta.is_finite() {
        return Err(FplError::NonFinite {
            what: "eta",
            value: eta,
        });
    }
    if eta <= 0.0 {
        return Err(FplError::InvalidParameter {
            name: "eta",
            reason: "must be positive",
        });
    }
    if let Some(&value) = cumulative.iter().find(|v| !v.is_finite()) {
        return Err(FplError::NonFinite {
            what: "cumulative estimate",
            value,
        });
    }
    Ok(())
}

fn check_cap(n: usize) -> Result<()> {
    if n > EXACT_CAP {
        return Err(FplError::ExactOracleCap { n, cap: EXACT_CAP });
    }
    Ok(())
}

/// `(u0, x)` for expert `i`.
fn shifted_gaps(cumulative: &[f64], eta: f64, i: usize) -> (f64, Vec<f64>) {
    let d: Vec<f64> = cumulative
        .iter()
        .enumerate()
        .filter(|&(j, _)| j != i)
        .map(|(_, &c)| eta * (cumulative[i] - c))
        .collect();
    let u0 = d.iter().copied().fold(0.0, f64::max);
    let x = d.into_iter().map(|dj| libm::exp(dj - u0)).collect();
    (u0, x)
}

/// Neumaier-compensated sum.
pub(crate) fn compensated_sum(values: impl IntoIterator<Item = f64>) -> f64 {
    let mut sum = 0.0;
    let mut comp = 0.0;
    for v in values {
        let t = sum + v;
        if libm::fabs(sum) >= libm::fabs(v) {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

fn closed_form_one(cumulative: &[f64], eta: f64, i: usize) -> f64 {
    if cumulative.len() == 1 {
        return 1.0;
    }
    let (u0, x) = shifted_gaps(cumulative, eta, i);
    let m = x.len();
    let mut e = alloc::vec![0.0; m + 1];
    e[0] = 1.0;
    for (done, &xj) in x.iter().enumerate() {
        for k in (1..=done + 1).rev() {
            e[k] += xj * e[k - 1];
        }
    }
    let mut terms: Vec<f64> = e
        .iter()
        .enumerate()
        .map(|(k, &ek)| {
            let t = ek / (k + 1) as f64;
            if k % 2 == 0 {
                t
            } else {
                -t
            }
        })
        .collect();
    terms.sort_by(|a, b| libm::fabs(*a).total_cmp(&libm::fabs(*b)));
    let s = compensated_sum(terms).clamp(0.0, 1.0);
    libm::exp(-u0) * s
}

// QUADPACK 15-point Kronrod abscissae/weights and the embedded 7-point Gauss weights.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn kronrod15(f: &impl Fn(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = WGK[7] * fc;
    let mut g = WG[3] * fc;
    for j in 0..7 {
        let dx = h * XGK[j];
        let s = f(c - dx) + f(c + dx);
        k += WGK[j] * s;
        if j % 2 == 1 {
            g += WG[j / 2] * s;
        }
    }
    (k * h, (k - g).abs() * h)
}

fn adaptive(f: &impl Fn(f64) -> f64, a: f64, b: f64, tol: f64, depth: u32) -> f64 {
    let (k, err) = kronrod15(f, a, b);
    if err <= tol || depth == 0 {
        return k;
    }
    let m = 0.5 * (a + b);
    adaptive(f, a, m, 0.5 * tol, depth - 1) + adaptive(f, m, b, 0.5 * tol, depth - 1)
}

fn quadrature_one(cumulative: &[f64], eta: f64, i: usize) -> f64 {
    if cumulative.len() == 1 {
        return 1.0;
    }
    let (u0, x) = shifted_gaps(cumulative, eta, i);
    let integrand = |s: f64| x.iter().map(|&xj| (1.0 - xj * s).max(0.0)).product::<f64>();
    // The integrand is a polynomial between consecutive kinks 1/x_j.
    let mut knots: Vec<f64> = x.iter().filter(|&&xj| xj > 1.0).map(|&xj| 1.0 / xj).collect();
    knots.push(0.0);
    knots.push(1.0);
    knots.sort_by(f64::total_cmp);
    let pieces = knots
        .windows(2)
        .filter(|w| w[1] > w[0])
        .map(|w| adaptive(&integrand, w[0], w[1], 1e-15, 30));
    libm::exp(-u0) * compensated_sum(pieces)
}

/// Closed-form selection probability of expert `i`.
pub fn closed_form_probability(cumulative: &[f64], eta: f64, i: usize) -> Result<f64> {
    validate(cumulative, eta)?;
    check_cap(cumulative.len())?;
    Ok(closed_form_one(cumulative, eta, i))
}

/// Quadrature selection probability of expert `i`.
pub fn quadrature_probability(cumulative: &[f64], eta: f64, i: usize) -> Result<f64> {
    validate(cumulative, eta)?;
    check_cap(cumulative.len())?;
    Ok(quadrature_one(cumulative, eta, i))
}

/// Exact `P(argmin_j {ĉ^j - q^j/η} = i)`. Uses the closed form, falling back
/// to quadrature if the two disagree beyond [`FALLBACK_TOLERANCE`].
pub fn exact_selection_probability(cumulative: &[f64], eta: f64, i: usize) -> Result<f64> {
    validate(cumulative, eta)?;
    check_cap(cumulative.len())?;
    if i >= cumulative.len() {
        return Err(FplError::DimensionMismatch {
            expected: cumulative.len(),
            got: i + 1,
        });
    }
    Ok(checked_one(cumulative, eta, i).0)
}

fn checked_one(cumulative: &[f64], eta: f64, i: usize) -> (f64, bool) {
    let cf = closed_form_one(cumulative, eta, i);
    let qd = quadrature_one(cumulative, eta, i);
    if (cf - qd).abs() > FALLBACK_TOLERANCE {
        (qd, true)
    } else {
        (cf, false)
    }
}

/// Exact selection distribution over all experts.
pub fn exact_selection_probabilities(
    cumulative: &[f64],
    eta: f64,
) -> Result<SelectionDistribution> {
    validate(cumulative, eta)?;
    check_cap(cumulative.len())?;
    let mut fell_back = false;
    let probs = (0..cumulative.len())
        .map(|i| {
            let (p, fb) = checked_one(cumulative, eta, i);
            fell_back |= fb;
            p
        })
        .collect();
    Ok(SelectionDistribution {
        probs,
        method: if fell_back {
            Method::Quadrature
        } else {
            Method::ClosedForm
        },
    })
}

/// Closed form for every expert, no fallback.
pub fn closed_form_probabilities(cumulative: &[f64], eta: f64) -> Result<SelectionDistribution> {
    validate(cumulative, eta)?;
    check_cap(cumulative.len())?;
    Ok(SelectionDistribution {
        probs: (0..cumulative.len())
            .map(|i| closed_form_one(cumulative, eta, i))
            .collect(),
        method: Method::ClosedForm,
    })
}

/// Quadrature for every expert.
pub fn quadrature_probabilities(cumulative: &[f64], eta: f64) -> Result<SelectionDistribution> {
    validate(cumulative, eta)?;
    check_cap(cumulative.len())?;
    Ok(SelectionDistribution {
        probs: (0..cumulative.len())
            .map(|i| quadrature_one(cumulative, eta, i))
            .collect(),
        method: Method::Quadrature,
    })
}

/// Index of the minimal perturbed score `ĉ^j - q^j/η`, lowest index on ties.
pub(crate) fn perturbed_argmin(cumulative: &[f64], eta: f64, q: &[f64]) -> usize {
    let mut best = 0;
    let mut best_score = f64::INFINITY;
    for (j, (&c, &qj)) in cumulative.iter().zip(q).enumerate() {
        let score = c - qj / eta;
        if score < best_score {
            best = j;
            best_score = score;
        }
    }
    best
}

/// Samples the perturbed leader `k` times with fresh perturbations and
/// returns how often expert `i` wins.
pub fn mc_selection_count(
    cumulative: &[f64],
    eta: f64,
    i: usize,
    k: u64,
    stream: &mut Stream,
) -> u64 {
    let mut q = alloc::vec![0.0; cumulative.len()];
    let mut hits = 0;
    for _ in 0..k {
        q.iter_mut().for_each(|x| *x = stream.exponential());
        if perturbed_argmin(cumulative, eta, &q) == i {
            hits += 1;
        }
    }
    hits
}

/// Hit counts for every expert from `k` resamples.
pub fn mc_selection_probabilities(
    cumulative: &[f64],
    eta: f64,
    k: u64,
    stream: &mut Stream,
) -> Result<SelectionDistribution> {
    validate(cumulative, eta)?;
    if k == 0 {
        return Err(FplError::InvalidParameter {
            name: "samples",
            reason: "must be at least 1",
        });
    }
    let mut q = alloc::vec![0.0; cumulative.len()];
    let mut hits = alloc::vec![0u64; cumulative.len()];
    for _ in 0..k {
        q.iter_mut().for_each(|x| *x = stream.exponential());
        hits[perturbed_argmin(cumulative, eta, &q)] += 1;
    }
    Ok(SelectionDistribution {
        probs: hits.iter().map(|&a| a as f64 / k as f64).collect(),
        method: Method::MonteCarlo { samples: k, hits },
    })
}

/// A draw with the law of [`mc_selection_count`], `Binomial(k, p)`, given
/// the exact win probability `p`.
pub fn binomial_selection_count(p: f64, k: u64, stream: &mut Stream) -> Result<u64> {
    let dist = Binomial::new(k, p.clamp(0.0, 1.0)).map_err(|_| FplError::InvalidParameter {
        name: "p",
        reason: "binomial parameters out of range",
    })?;
    Ok(dist.sample(stream.rng_mut()))
}

/// Lower-confidence estimate `max{γ, a/k - γ²/√2}` of the selection
/// probability.
pub fn clipped_probability_estimate(hits: u64, samples: u64, gamma: f64) -> Result<f64> {
    if !(gamma > 0.0 && gamma <= 0.5) {
        return Err(FplError::InvalidParameter {
            name: "gamma",
            reason: "must lie in (0, 1/2]",
        });
    }
    if samples == 0 || hits > samples {
        return Err(FplError::InvalidParameter {
            name: "hits",
            reason: "need 0 <= hits <= samples and samples >= 1",
        });
    }
    let freq = hits as f64 / samples as f64;
    Ok(gamma.max(freq - gamma * gamma / core::f64::consts::SQRT_2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::StreamName;

    #[test]
    fn symmetric_instance_is_uniform() {
        let d = exact_selection_probabilities(&[2.0, 2.0, 2.0], 0.7).unwrap();
        for p in d.probs {
            assert!((p - 1.0 / 3.0).abs() < 1e-12);
        }
    }

    #[test]
    fn single_expert() {
        let d = exact_selection_probabilities(&[3.0], 1.0).unwrap();
        assert_eq!(d.probs, alloc::vec![1.0]);
    }

    #[test]
    fn two_experts_unit_gap() {
        // n = 2, p^1 = ∫_1^∞ e^{-u}(1 - e^{1-u}) du = e^{-1}/2.
        let d = exact_selection_probabilities(&[1.0, 0.0], 1.0).unwrap();
        let expect = libm::exp(-1.0) / 2.0;
        assert!((d.probs[0] - expect).abs() < 1e-14);
        assert!((d.probs[0] - 0.183940).abs() < 1e-6);
        assert!((d.probs[1] - 0.816060).abs() < 1e-6);
    }

    #[test]
    fn cap_and_bad_inputs() {
        let big = alloc::vec![0.0; 21];
        assert_eq!(
            exact_selection_probabilities(&big, 1.0),
            Err(FplError::ExactOracleCap { n: 21, cap: 20 })
        );
        assert!(exact_selection_probabilities(&[0.0, f64::NAN], 1.0).is_err());
        assert!(exact_selection_probabilities(&[0.0, 1.0], 0.0).is_err());
        assert!(exact_selection_probabilities(&[0.0, 1.0], f64::INFINITY).is_err());
        assert!(exact_selection_probabilities(&[], 1.0).is_err());
    }

    #[test]
    fn twenty_tied_experts() {
        let d = exact_selection_probabilities(&[0.0; 20], 1.0).unwrap();
        assert_eq!(d.method, Method::ClosedForm);
        for p in d.probs {
            assert!((p - 0.05).abs() < 1e-10);
        }
    }

    #[test]
    fn mc_single_expert_always_wins() {
        let mut s = Stream::new(1, StreamName::MonteCarlo, 0);
        assert_eq!(mc_selection_count(&[4.0], 0.3, 0, 500, &mut s), 500);
    }

    #[test]
    fn mc_equal_estimates_half() {
        let mut s = Stream::new(2, StreamName::MonteCarlo, 0);
        let k = 100_000;
        let a = mc_selection_count(&[1.0, 1.0], 0.5, 0, k, &mut s);
        assert!((a as f64 / k as f64 - 0.5).abs() < 0.005);
    }

    #[test]
    fn mc_unit_gap() {
        let mut s = Stream::new(3, StreamName::MonteCarlo, 0);
        let k = 1_000_000;
        let a = mc_selection_count(&[1.0, 0.0], 1.0, 0, k, &mut s);
        assert!((a as f64 / k as f64 - 0.18394).abs() < 0.0012);
    }

    #[test]
    fn mc_distribution_hits_sum_to_k() {
        let mut s = Stream::new(4, StreamName::MonteCarlo, 0);
        let d = mc_selection_probabilities(&[0.0, 1.0, 2.0], 1.0, 10_000, &mut s).unwrap();
        match d.method {
            Method::MonteCarlo { samples, hits } => {
                assert_eq!(samples, 10_000);
                assert_eq!(hits.iter().sum::<u64>(), 10_000);
            }
            _ => panic!("wrong method"),
        }
    }

    #[test]
    fn clipped_estimate_values() {
        let v = clipped_probability_estimate(30, 45, 0.25).unwrap();
        assert!((v - 0.622473).abs() < 1e-6);
        assert_eq!(clipped_probability_estimate(5, 45, 0.25).unwrap(), 0.25);
        let v = clipped_probability_estimate(45, 45, 0.25).unwrap();
        assert!((v - 0.955806).abs() < 1e-6);
    }

    #[test]
    fn clipped_estimate_rejects_bad_gamma() {
        assert!(clipped_probability_estimate(1, 2, 0.0).is_err());
        assert!(clipped_probability_estimate(1, 2, 0.6).is_err());
        assert!(clipped_probability_estimate(3, 2, 0.25).is_err());
        assert!(clipped_probability_estimate(0, 0, 0.25).is_err());
    }

    #[test]
    fn compensated_sum_recovers_small_terms() {
        let s = compensated_sum([1e16, 1.0, -1e16]);
        assert_eq!(s, 1.0);
    }
}
