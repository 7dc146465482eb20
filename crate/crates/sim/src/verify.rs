//! Verification suites behind `fpl verify <suite>`.
//!
//! Every suite has a `*_with` form taking its sizes; the plain form uses
//! the documented defaults.

use fpl_core::adversaries::AdversaryConfig;
use fpl_core::harness::stats::{loglog_slope, mean_ci};
use fpl_core::harness::{
    azuma_evaluate, azuma_offset, bfpl_bound, bfpl_conditional_cost, martingale_evaluate, AzumaReport, bfpl_expected_estimate, coupling_experiment,
    stability_instance, mc_fpl_bound, oracle_expected_estimate, oracle_fpl_bound, regret, run_game,
    telescoping_check, theoretical_bound, GameTrace,
};
use fpl_core::learners::schedule::{
    bfpl_schedule, entering_time, mc_schedule, oracle_fpl_eta, reward_schedule,
};
use fpl_core::learners::{ExpertPrior, InfiniteSchedule, LearnerConfig, McCounter, PriorSpec, SampleRule};
use fpl_core::oracle::{
    closed_form_probabilities, exact_selection_probability, mc_selection_count,
    quadrature_probabilities,
};
use fpl_core::{Stream, StreamName};

use crate::runner::{par_map, Check};
use crate::summary::Z_95;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Suite {
    Coupling,
    Unbiasedness,
    Telescoping,
    Stability,
    Azuma,
    Bounds,
    Schedules,
}

pub fn run_suite(suite: Suite) -> anyhow::Result<Vec<Check>> {
    match suite {
        Suite::Coupling => Ok(vec![coupling(&CouplingSizes::default())?]),
        Suite::Unbiasedness => unbiasedness(1000, 7),
        Suite::Telescoping => Ok(vec![telescoping(100, 5, 1000, 0)?]),
        Suite::Stability => {
            let mut out = vec![stability(1000, 9)?];
            out.extend(oracle_agreement(1000, 20, 1_000_000, 9)?);
            Ok(out)
        }
        Suite::Azuma => azuma(&AzumaSizes::default()),
        Suite::Bounds => bounds(&BoundSizes::default()),
        Suite::Schedules => Ok(schedules()),
    }
}

fn check(name: impl Into<String>, pass: bool, detail: String) -> Check {
    Check {
        name: name.into(),
        pass,
        detail,
    }
}

/// The four adversaries of the bound experiments, for `n` arms.
pub fn standard_adversaries(n: usize) -> Vec<AdversaryConfig> {
    let a = [0.8, 0.6, 0.1, 0.9, 0.5, 0.7, 0.3, 0.4];
    let b = [0.4, 0.7, 0.3, 0.2, 0.9, 0.6, 0.5, 0.8];
    let means = [0.55, 0.45, 0.6, 0.35, 0.5, 0.65, 0.4, 0.7];
    vec![
        AdversaryConfig::FixedMatrix {
            rows: vec![
                (0..n).map(|i| a[i % a.len()]).collect(),
                (0..n).map(|i| b[i % b.len()]).collect(),
            ],
        },
        AdversaryConfig::BernoulliStochastic {
            means: (0..n).map(|i| means[i % means.len()]).collect(),
        },
        AdversaryConfig::PunishLastAction {},
        AdversaryConfig::DeceptiveSwitch {
            decoy: 0,
            switch_time: None,
            low: 0.0,
            high: 1.0,
        },
    ]
}

pub fn adaptive_adversaries() -> Vec<AdversaryConfig> {
    vec![
        AdversaryConfig::PunishLastAction {},
        AdversaryConfig::DeceptiveSwitch {
            decoy: 0,
            switch_time: None,
            low: 0.0,
            high: 1.0,
        },
        AdversaryConfig::BestResponseGreedy { window: 10 },
    ]
}

fn games(
    learner: &LearnerConfig,
    adversary: &AdversaryConfig,
    n: usize,
    horizon: u64,
    seeds: &[u64],
) -> anyhow::Result<Vec<GameTrace>> {
    par_map(seeds, |&s| Ok(run_game(learner, adversary, n, horizon, s)?))
}

fn seed_list(count: usize, base: u64) -> Vec<u64> {
    (0..count as u64).map(|s| base + s).collect()
}

/// Mean regret vs. the best expert over seeds, compared with the
/// learner's bound plus three 95% CI half-widths.
pub fn bound_check(
    learner: &LearnerConfig,
    adversary: &AdversaryConfig,
    n: usize,
    horizon: u64,
    seeds: usize,
) -> anyhow::Result<Check> {
    let bound = theoretical_bound(learner, horizon, n)
        .ok_or_else(|| anyhow::anyhow!("{} has no regret bound", learner.label()))?;
    let regrets: Vec<f64> = par_map(&seed_list(seeds, 0), |&s| {
        Ok(regret(&run_game(learner, adversary, n, horizon, s)?).regret_vs_best)
    })?;
    let (mean, half) = mean_ci(&regrets, Z_95);
    Ok(check(
        format!("{} vs {}", learner.label(), adversary.label()),
        mean.is_finite() && mean <= bound + 3.0 * half,
        format!("mean regret {mean:.2} ± {half:.2} (95%), bound {bound:.2}, T={horizon}, {seeds} seeds"),
    ))
}

/// Log-log slope of mean final regret against the horizon. Means below 1
/// are fitted as 1.
pub fn slope_check(
    learner: &LearnerConfig,
    adversary: &AdversaryConfig,
    n: usize,
    horizons: &[u64],
    seeds: usize,
    limit: f64,
) -> anyhow::Result<Check> {
    let mut means = Vec::new();
    for &h in horizons {
        let regrets: Vec<f64> = par_map(&seed_list(seeds, 0), |&s| {
            Ok(regret(&run_game(learner, adversary, n, h, s)?).regret_vs_best)
        })?;
        means.push(mean_ci(&regrets, Z_95).0);
    }
    let xs: Vec<f64> = horizons.iter().map(|&h| h as f64).collect();
    let ys: Vec<f64> = means.iter().map(|&m| m.max(1.0)).collect();
    let slope = loglog_slope(&xs, &ys);
    let shown: Vec<String> = horizons
        .iter()
        .zip(&means)
        .map(|(h, m)| format!("T={h}: {m:.2}"))
        .collect();
    Ok(check(
        format!("{} slope vs {}", learner.label(), adversary.label()),
        slope.is_finite() && slope < limit,
        format!("slope {slope:.3} (limit {limit}); mean regret {}", shown.join(", ")),
    ))
}

pub struct CouplingSizes {
    pub n: usize,
    pub horizon: u64,
    pub replications: u64,
    pub seed: u64,
}

impl Default for CouplingSizes {
    fn default() -> Self {
        CouplingSizes {
            n: 3,
            horizon: 50,
            replications: 10_000,
            seed: 4,
        }
    }
}

/// Replays an oracle-FPL game's estimate sequence with fresh and with fixed
/// perturbations.
pub fn coupling(sizes: &CouplingSizes) -> anyhow::Result<Check> {
    let mut s = Stream::new(sizes.seed, StreamName::Adversary, 7);
    let means = (0..sizes.n).map(|_| s.uniform()).collect();
    let adversary = AdversaryConfig::BernoulliStochastic { means };
    let learner = LearnerConfig::OracleFpl { stability_check: false };
    let tr = run_game(&learner, &adversary, sizes.n, sizes.horizon, sizes.seed)?;
    let rep = coupling_experiment(
        &tr.estimates(),
        &tr.cost_vectors(),
        &tr.etas(),
        sizes.replications,
        sizes.seed,
    )?;
    let overlapping = rep.rounds.iter().filter(|r| r.overlaps()).count();
    let worst = rep
        .rounds
        .iter()
        .map(|r| (r.fresh_mean - r.fixed_mean).abs())
        .fold(0.0, f64::max);
    Ok(check(
        "coupling",
        rep.all_overlap(),
        format!(
            "99% CIs overlap in {overlapping}/{} rounds, largest mean gap {worst:.4}, R={}",
            rep.rounds.len(),
            rep.replications
        ),
    ))
}

/// bFPL enumeration on random instances and the oracle-FPL identity on
/// every round of recorded games.
pub fn unbiasedness(instances: usize, seed: u64) -> anyhow::Result<Vec<Check>> {
    let mut s = Stream::new(seed, StreamName::Adversary, 11);
    let mut worst = 0.0f64;
    let mut worst_oracle = 0.0f64;
    for _ in 0..instances {
        let n = 2 + s.index(7);
        let costs: Vec<f64> = (0..n).map(|_| s.uniform()).collect();
        let gamma = 1.0 - s.uniform();
        for (e, c) in bfpl_expected_estimate(&costs, gamma).iter().zip(&costs) {
            worst = worst.max((e - c).abs() / c.max(f64::MIN_POSITIVE));
        }
        let cum: Vec<f64> = (0..n).map(|_| 10.0 * s.uniform()).collect();
        let eta = 0.01 + s.uniform();
        for (e, c) in oracle_expected_estimate(&cum, eta, &costs)?.iter().zip(&costs) {
            worst_oracle = worst_oracle.max((e - c).abs() / c.max(f64::MIN_POSITIVE));
        }
    }
    let tol = 4.0 * f64::EPSILON;
    let mut rounds = 0usize;
    let mut worst_round = 0.0f64;
    let learner = LearnerConfig::OracleFpl { stability_check: false };
    for adv in standard_adversaries(5) {
        for tr in games(&learner, &adv, 5, 2000, &seed_list(3, seed))? {
            for r in &tr.rounds {
                let p = r.probability.unwrap_or(f64::NAN);
                let back = p * r.estimate.value();
                worst_round = worst_round.max((back - r.cost).abs() / r.cost.max(f64::MIN_POSITIVE));
                rounds += 1;
            }
        }
    }
    Ok(vec![
        check(
            "bfpl enumeration",
            worst <= tol,
            format!("max relative deviation {worst:.2e} over {instances} instances"),
        ),
        check(
            "oracle expectation",
            worst_oracle <= tol,
            format!("max relative deviation {worst_oracle:.2e} over {instances} instances"),
        ),
        check(
            "oracle per-round p·(c/p) = c",
            worst_round <= tol,
            format!("max relative deviation {worst_round:.2e} over {rounds} rounds"),
        ),
    ])
}

/// Random bFPL games against every built-in adversary, each checked with
/// its own fixed perturbation vector.
pub fn telescoping(runs: usize, n: usize, horizon: u64, base: u64) -> anyhow::Result<Check> {
    let mut advs = standard_adversaries(n);
    advs.extend(adaptive_adversaries());
    let jobs: Vec<(u64, usize)> = (0..runs).map(|k| (base + k as u64, k % advs.len())).collect();
    let reports = par_map(&jobs, |&(seed, a)| {
        let tr = run_game(&LearnerConfig::Bfpl {}, &advs[a], n, horizon, seed)?;
        let mut s = Stream::new(seed, StreamName::Perturbation, 1);
        let q: Vec<f64> = (0..n).map(|_| s.exponential()).collect();
        Ok(telescoping_check(&tr.estimates(), &q, &tr.etas())?)
    })?;
    let passed = reports.iter().filter(|r| r.pass).count();
    let residual = reports.iter().map(|r| r.residual).fold(0.0, f64::max);
    let links = reports.iter().all(|r| r.termwise_ok);
    Ok(check(
        "telescoping",
        passed == runs,
        format!("{passed}/{runs} runs pass; max equality residual {residual:.2e}; every inequality link exact: {links}"),
    ))
}

/// `π ≥ p e^{-ηv}` for arbitrary `v ≥ 0` and `π ≥ p - η` for `v = c/p`.
pub fn stability(instances: usize, seed: u64) -> anyhow::Result<Check> {
    let mut s = Stream::new(seed, StreamName::Adversary, 13);
    let tol = 1e-10;
    let mut violations = 0;
    let mut margin = f64::INFINITY;
    for _ in 0..instances {
        let n = 2 + s.index(7);
        let cum: Vec<f64> = (0..n).map(|_| 50.0 * s.uniform()).collect();
        let eta = 10f64.powf(-3.0 + 4.0 * s.uniform());
        let i = s.index(n);
        let p = exact_selection_probability(&cum, eta, i)?;
        let v_estimate = s.uniform() / p;
        let v_free = 100.0 * s.uniform();
        for v in [v_estimate, v_free] {
            let rec = stability_instance(&cum, eta, i, v)?;
            let m1 = rec.pi - rec.p * (-eta * v).exp();
            let m2 = if v <= 1.0 / rec.p { rec.pi - (rec.p - eta) } else { f64::INFINITY };
            margin = margin.min(m1).min(m2);
            if m1 < -tol || m2 < -tol {
                violations += 1;
            }
        }
    }
    Ok(check(
        "stability",
        violations == 0,
        format!("{violations} violations in {instances} instances, smallest margin {margin:.2e}"),
    ))
}

pub struct AzumaSizes {
    pub n: usize,
    pub horizon: u64,
    pub delta: f64,
    pub seeds: usize,
}

impl Default for AzumaSizes {
    fn default() -> Self {
        AzumaSizes {
            n: 5,
            horizon: 10_000,
            delta: 0.05,
            seeds: 500,
        }
    }
}

/// bFPL cost concentration against the standard adversaries.
///
/// Two centres are used. The martingale centre `Σ_t E[c_t | h_{<t}]` is
/// computed exactly per game and is checked against every adversary. The
/// unconditional centre `Ê c_{1:T}` comes from a separate batch of seeds and
/// is checked against the adversaries in `literal`; see [`azuma_unconditional`]
/// for the rest.
pub fn azuma(sizes: &AzumaSizes) -> anyhow::Result<Vec<Check>> {
    let offset = azuma_offset(sizes.horizon, sizes.delta);
    let mut out = vec![check(
        "azuma offset",
        (azuma_offset(10_000, 0.05) - 271.62).abs() < 5e-3,
        format!("offset {offset:.2} at T={}, delta={}", sizes.horizon, sizes.delta),
    )];
    let literal = ["fixed_matrix", "bernoulli_stochastic", "punish_last_action"];
    for adv in standard_adversaries(sizes.n) {
        let (realized, centres): (Vec<f64>, Vec<f64>) = par_map(&seed_list(sizes.seeds, 0), |&s| {
            let tr = run_game(&LearnerConfig::Bfpl {}, &adv, sizes.n, sizes.horizon, s)?;
            Ok((total_cost(&tr), bfpl_conditional_cost(&tr)?))
        })?
        .into_iter()
        .unzip();
        let rep = martingale_evaluate(&realized, &centres, sizes.horizon, sizes.delta)?;
        out.push(azuma_line(format!("azuma (conditional centre) vs {}", adv.label()), &rep));
        if literal.contains(&adv.label()) {
            let reference = reference_costs(&adv, sizes)?;
            let rep = azuma_evaluate(&realized, &reference, sizes.horizon, sizes.delta)?;
            out.push(azuma_line(format!("azuma (unconditional centre) vs {}", adv.label()), &rep));
        }
    }
    Ok(out)
}

/// The unconditional-centre form against DeceptiveSwitch, whose cost
/// level depends strongly on the learner's early play.
pub fn azuma_unconditional(sizes: &AzumaSizes) -> anyhow::Result<Check> {
    let adv = standard_adversaries(sizes.n).remove(3);
    let realized: Vec<f64> = par_map(&seed_list(sizes.seeds, 0), |&s| {
        Ok(total_cost(&run_game(&LearnerConfig::Bfpl {}, &adv, sizes.n, sizes.horizon, s)?))
    })?;
    let reference = reference_costs(&adv, sizes)?;
    let rep = azuma_evaluate(&realized, &reference, sizes.horizon, sizes.delta)?;
    Ok(azuma_line(format!("azuma (unconditional centre) vs {}", adv.label()), &rep))
}

fn total_cost(tr: &GameTrace) -> f64 {
    tr.rounds.iter().map(|r| r.cost).sum()
}

fn reference_costs(adv: &AdversaryConfig, sizes: &AzumaSizes) -> anyhow::Result<Vec<f64>> {
    par_map(&seed_list(sizes.seeds, 1_000_000), |&s| {
        Ok(total_cost(&run_game(&LearnerConfig::Bfpl {}, adv, sizes.n, sizes.horizon, s)?))
    })
}

fn azuma_line(name: String, rep: &AzumaReport) -> Check {
    check(
        name,
        rep.pass,
        format!(
            "{}/{} runs above centre + {:.2} (mean centre {:.2}, frequency {:.4}, threshold {:.4})",
            rep.violations, rep.runs, rep.offset, rep.expected_cost, rep.frequency, rep.threshold
        ),
    )
}

pub struct BoundSizes {
    pub n: usize,
    pub horizon: u64,
    pub seeds: usize,
    pub slope_horizons: Vec<u64>,
    pub slope_seeds: usize,
    pub mc_horizon: u64,
    pub mc_seeds: usize,
    pub mc_literal_horizon: u64,
    pub mc_literal_seeds: usize,
    pub infinite_horizon: u64,
    pub infinite_seeds: usize,
}

impl Default for BoundSizes {
    fn default() -> Self {
        BoundSizes {
            n: 5,
            horizon: 10_000,
            seeds: 100,
            slope_horizons: vec![1_000, 10_000, 100_000],
            slope_seeds: 20,
            mc_horizon: 2000,
            mc_seeds: 100,
            mc_literal_horizon: 200,
            mc_literal_seeds: 5,
            infinite_horizon: 10_000,
            infinite_seeds: 50,
        }
    }
}

pub fn bfpl_bounds(sizes: &BoundSizes) -> anyhow::Result<Vec<Check>> {
    standard_adversaries(sizes.n)
        .iter()
        .map(|a| bound_check(&LearnerConfig::Bfpl {}, a, sizes.n, sizes.horizon, sizes.seeds))
        .collect()
}

pub fn oracle_bounds(sizes: &BoundSizes) -> anyhow::Result<Vec<Check>> {
    let learner = LearnerConfig::OracleFpl { stability_check: false };
    let mut out: Vec<Check> = standard_adversaries(sizes.n)
        .iter()
        .map(|a| bound_check(&learner, a, sizes.n, sizes.horizon, sizes.seeds))
        .collect::<anyhow::Result<_>>()?;
    for a in adaptive_adversaries() {
        out.push(slope_check(&learner, &a, sizes.n, &sizes.slope_horizons, sizes.slope_seeds, 0.8)?);
    }
    Ok(out)
}

/// Binomial-counter MC-FPL at the reduced horizon, plus literal resampling
/// at a horizon where it is affordable.
pub fn mc_bounds(sizes: &BoundSizes) -> anyhow::Result<Vec<Check>> {
    let binomial = LearnerConfig::McFpl {
        counter: McCounter::Binomial,
        sample_rule: SampleRule::Quadratic,
    };
    let literal = LearnerConfig::McFpl {
        counter: McCounter::Resample,
        sample_rule: SampleRule::Quadratic,
    };
    let mut out: Vec<Check> = standard_adversaries(sizes.n)
        .iter()
        .map(|a| bound_check(&binomial, a, sizes.n, sizes.mc_horizon, sizes.mc_seeds))
        .collect::<anyhow::Result<_>>()?;
    for a in &standard_adversaries(sizes.n)[1..3] {
        let mut c = bound_check(&literal, a, sizes.n, sizes.mc_literal_horizon, sizes.mc_literal_seeds)?;
        c.name = format!("{} (resampled counts)", c.name);
        out.push(c);
    }
    Ok(out)
}

/// Geometric six-expert prior with `α = 1/2`.
pub fn infinite_learner() -> LearnerConfig {
    LearnerConfig::BfplInfinite {
        prior: PriorSpec::Geometric {
            first: 0.2,
            ratio: 0.911,
        },
        alpha: 0.5,
        beta: 0.25,
        eta_exponent: 0.75,
        literal_sign: false,
    }
}

pub fn infinite_checks(sizes: &BoundSizes) -> anyhow::Result<Vec<Check>> {
    let n = 6;
    let learner = infinite_learner();
    let LearnerConfig::BfplInfinite { prior, alpha, beta, eta_exponent, .. } = &learner else {
        unreachable!()
    };
    let schedule = InfiniteSchedule {
        alpha: *alpha,
        beta: *beta,
        eta_exponent: *eta_exponent,
    };
    let prior = ExpertPrior::from_spec(prior, n, *alpha)?;
    let taus = prior.entering_times().to_vec();
    let horizon = sizes.infinite_horizon;

    let mut floor_ok = true;
    let mut floor_rounds = 0;
    for t in 1..=horizon {
        if let Some(w) = prior.min_active_weight(t) {
            floor_ok &= w >= (t as f64).powf(-alpha);
            floor_rounds += 1;
        }
    }
    let mut out = vec![check(
        "infinite weight floor",
        floor_ok && taus.iter().all(|&t| t <= 64),
        format!(
            "min active weight ≥ t^-α in {floor_rounds} rounds with a nonempty active set; entering times {taus:?}"
        ),
    )];

    let checkpoints: Vec<u64> = (0..=4)
        .map(|k| 10f64.powf(3.0 + k as f64 / 4.0).round() as u64)
        .collect();
    let mut adversaries = vec![AdversaryConfig::BernoulliStochastic {
        means: vec![0.6, 0.5, 0.7, 0.3, 0.55, 0.65],
    }];
    adversaries.extend(adaptive_adversaries().into_iter().take(2));
    let mut magnitude_ok = true;
    let mut active_ok = true;
    let mut largest_ratio = 0.0f64;
    for adv in &adversaries {
        let traces = games(&learner, adv, n, horizon, &seed_list(sizes.infinite_seeds, 0))?;
        let mut at_checkpoint = vec![Vec::new(); checkpoints.len()];
        for tr in &traces {
            let mut learner_cost = 0.0;
            let mut expert = vec![0.0; n];
            for r in &tr.rounds {
                let cap = (r.t as f64).powf(alpha + schedule.beta);
                let mag = r.estimate.value().max(r.inactive_charge.map_or(0.0, |c| c.1));
                largest_ratio = largest_ratio.max(mag / cap);
                magnitude_ok &= mag <= cap * (1.0 + 1e-12);
                if prior.active_count(r.t) > 0 {
                    active_ok &= r.action < prior.active_count(r.t);
                }
                learner_cost += r.cost;
                for (e, &c) in expert.iter_mut().zip(r.costs.as_slice()) {
                    *e += c;
                }
                if let Some(k) = checkpoints.iter().position(|&c| c == r.t) {
                    let best = (0..n)
                        .filter(|&i| taus[i] <= r.t)
                        .map(|i| expert[i])
                        .fold(f64::INFINITY, f64::min);
                    at_checkpoint[k].push(learner_cost - best);
                }
            }
        }
        let xs: Vec<f64> = checkpoints.iter().map(|&c| c as f64).collect();
        let means: Vec<f64> = at_checkpoint.iter().map(|v| mean_ci(v, Z_95).0).collect();
        let ys: Vec<f64> = means.iter().map(|&m| m.max(1.0)).collect();
        let slope = loglog_slope(&xs, &ys);
        out.push(check(
            format!("infinite regret slope vs {}", adv.label()),
            slope.is_finite() && slope < 0.9,
            format!(
                "slope {slope:.3} over t={checkpoints:?}; mean regret vs best entered expert {:?}",
                means.iter().map(|m| (m * 100.0).round() / 100.0).collect::<Vec<_>>()
            ),
        ));
    }
    out.insert(
        1,
        check(
            "infinite estimate magnitude",
            magnitude_ok && active_ok,
            format!(
                "largest estimate / t^(α+β) = {largest_ratio:.4}; plays restricted to entered experts: {active_ok}"
            ),
        ),
    );
    Ok(out)
}

pub fn bounds(sizes: &BoundSizes) -> anyhow::Result<Vec<Check>> {
    let mut out = bfpl_bounds(sizes)?;
    out.extend(oracle_bounds(sizes)?);
    out.extend(mc_bounds(sizes)?);
    out.extend(infinite_checks(sizes)?);
    Ok(out)
}

/// Closed form vs quadrature on random instances, Monte-Carlo within 3σ,
/// and the two-expert worked value.
pub fn oracle_agreement(instances: usize, mc_instances: usize, k: u64, seed: u64) -> anyhow::Result<Vec<Check>> {
    let mut s = Stream::new(seed, StreamName::Adversary, 17);
    let mut worst = 0.0f64;
    let draw = |s: &mut Stream| {
        let n = 1 + s.index(8);
        let cum: Vec<f64> = (0..n).map(|_| 50.0 * s.uniform()).collect();
        let eta = 10f64.powf(-3.0 + 4.0 * s.uniform());
        (cum, eta)
    };
    for _ in 0..instances {
        let (cum, eta) = draw(&mut s);
        let a = closed_form_probabilities(&cum, eta)?;
        let b = quadrature_probabilities(&cum, eta)?;
        worst = worst.max(a.max_abs_diff(&b));
    }
    let mut mc_worst_sigmas = 0.0f64;
    let mut mc_ok = true;
    let mut mc = Stream::new(seed, StreamName::MonteCarlo, 0);
    for _ in 0..mc_instances {
        let (cum, eta) = draw(&mut s);
        let i = s.index(cum.len());
        let p = exact_selection_probability(&cum, eta, i)?;
        let hits = mc_selection_count(&cum, eta, i, k, &mut mc);
        let sigma = (p * (1.0 - p) / k as f64).sqrt();
        let dev = (hits as f64 / k as f64 - p).abs();
        // a zero-variance instance must match exactly
        mc_ok &= if sigma > 0.0 { dev <= 3.0 * sigma } else { dev == 0.0 };
        if sigma > 0.0 {
            mc_worst_sigmas = mc_worst_sigmas.max(dev / sigma);
        }
    }
    let p1 = exact_selection_probability(&[1.0, 0.0], 1.0, 0)?;
    let p2 = exact_selection_probability(&[1.0, 0.0], 1.0, 1)?;
    Ok(vec![
        check(
            "closed form vs quadrature",
            worst <= 1e-8,
            format!("max deviation {worst:.2e} over {instances} instances"),
        ),
        check(
            "exact vs Monte-Carlo",
            mc_ok,
            format!("largest deviation {mc_worst_sigmas:.2} σ over {mc_instances} instances, k={k}"),
        ),
        check(
            "worked value",
            (p1 - 0.183940).abs() < 1e-6 && (p2 - 0.816060).abs() < 1e-6,
            format!("p = ({p1:.6}, {p2:.6})"),
        ),
    ])
}

pub fn schedules() -> Vec<Check> {
    let mut monotone = true;
    for n in [2, 5, 20] {
        let mut prev_inv = 0.0;
        for t in 1..=10_000u64 {
            let a = bfpl_schedule(t, n).unwrap();
            let b = bfpl_schedule(t + 1, n).unwrap();
            monotone &= b.gamma <= a.gamma && b.eta <= a.eta && 1.0 / a.eta >= prev_inv;
            prev_inv = 1.0 / a.eta;
            monotone &= mc_schedule(t + 1).unwrap().0 <= mc_schedule(t).unwrap().0;
            monotone &= oracle_fpl_eta(t + 1, n).unwrap() <= oracle_fpl_eta(t, n).unwrap();
            let (r0, r1) = (reward_schedule(t, n).unwrap(), reward_schedule(t + 1, n).unwrap());
            monotone &= r1.gamma <= r0.gamma && r1.eta <= r0.eta;
        }
    }
    let close = |a: f64, b: f64, tol: f64| (a - b).abs() <= tol;
    let b1 = bfpl_schedule(1, 2).unwrap();
    let b1000 = bfpl_schedule(1000, 2).unwrap();
    let bfpl_ok = b1.gamma == 1.0
        && close(b1.eta, 0.351211, 1e-6)
        && close(b1000.gamma, 0.140485, 1e-6)
        && close(b1000.eta, 0.004934, 1e-6);
    let mc_ok = mc_schedule(1).unwrap() == (0.5, 2)
        && mc_schedule(4).unwrap() == (0.25, 45)
        && mc_schedule(100).unwrap() == (0.05, 59915);
    let r8 = reward_schedule(8, 2).unwrap();
    let eta_oracle = oracle_fpl_eta(2, 4).unwrap();
    let other_ok = close(r8.gamma, 0.416277, 1e-6)
        && close(r8.eta, 0.208139, 1e-6)
        && close(eta_oracle, 0.294353, 1e-6)
        && entering_time(1.0, 0.125).unwrap() == 1
        && entering_time(0.5, 0.125).unwrap() == 256
        && entering_time(0.1, 0.5).unwrap() == 100;
    let bounds_ok = close(bfpl_bound(10_000, 5), 6362.06, 5e-3)
        && close(oracle_fpl_bound(10_000, 5), 802.36, 5e-3)
        && close(mc_fpl_bound(10_000, 5), 1502.36, 5e-3)
        && close(azuma_offset(10_000, 0.05), 271.62, 5e-3);
    vec![
        check("schedule monotonicity", monotone, "γ_t, η_t nonincreasing and 1/η_t nondecreasing for t ≤ 10^4, n ∈ {2, 5, 20}".into()),
        check(
            "bfpl schedule values",
            bfpl_ok,
            format!(
                "t=1: γ={}, η={:.6}; t=1000: γ={:.6}, η={:.6}",
                b1.gamma, b1.eta, b1000.gamma, b1000.eta
            ),
        ),
        check("mc schedule values", mc_ok, "k(1)=2, k(4)=45, k(100)=59915".into()),
        check(
            "other schedule values",
            other_ok,
            format!("reward t=8: γ={:.6}, η={:.6}; oracle η(t=2, n=4)={eta_oracle:.6}; entering times 1, 256, 100", r8.gamma, r8.eta),
        ),
        check(
            "bound formulas",
            bounds_ok,
            format!(
                "{:.2}, {:.2}, {:.2}, offset {:.2}",
                bfpl_bound(10_000, 5),
                oracle_fpl_bound(10_000, 5),
                mc_fpl_bound(10_000, 5),
                azuma_offset(10_000, 0.05)
            ),
        ),
    ]
}
