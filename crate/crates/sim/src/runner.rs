//! Runs the (seed × config) games of an experiment and writes artifacts.

use std::fs::File;
use std::io::BufWriter;
use std::path::Path;

use anyhow::{bail, Context};
use fpl_core::harness::{run_game, telescoping_check, GameTrace};
use fpl_core::rng::{Stream, StreamName};
use rayon::prelude::*;

use crate::config::ExperimentConfig;
use crate::plot;
use crate::summary::Summary;
use crate::trace_csv;

/// Worker-count override for parallel seeds.
pub const WORKERS_ENV: &str = "FPL_WORKERS";

pub fn worker_count() -> usize {
    std::env::var(WORKERS_ENV)
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .filter(|&w| w > 0)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
}

/// Maps `f` over `items` on the worker pool. Output order follows input order.
pub fn par_map<T, R, F>(items: &[T], f: F) -> anyhow::Result<Vec<R>>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> anyhow::Result<R> + Sync + Send,
{
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(worker_count())
        .build()?;
    pool.install(|| items.par_iter().map(&f).collect())
}

pub fn run_games(cfg: &ExperimentConfig) -> anyhow::Result<Vec<GameTrace>> {
    par_map(&cfg.seeds, |&seed| {
        run_game(&cfg.learner, &cfg.adversary, cfg.n, cfg.horizon, seed)
            .with_context(|| format!("seed {seed}"))
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

impl std::fmt::Display for Check {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let tag = if self.pass { "PASS" } else { "FAIL" };
        write!(f, "{tag} {}: {}", self.name, self.detail)
    }
}

pub struct RunOutcome {
    pub traces: Vec<GameTrace>,
    pub summary: Summary,
    pub checks: Vec<Check>,
}

impl RunOutcome {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

/// Runs every seed, rejects non-finite metrics, writes the configured
/// artifacts and evaluates the configured checks.
pub fn run_experiment(cfg: &ExperimentConfig) -> anyhow::Result<RunOutcome> {
    let traces = run_games(cfg)?;
    for tr in &traces {
        ensure_finite(tr)?;
    }
    let summary = Summary::from_traces(cfg, &traces);
    summary.ensure_finite()?;
    if let Some(path) = &cfg.output.csv {
        let f = create(path)?;
        trace_csv::write_traces(BufWriter::new(f), &traces)
            .with_context(|| format!("writing {}", path.display()))?;
    }
    if let Some(path) = &cfg.output.summary {
        std::fs::write(path, summary.to_json() + "\n")
            .with_context(|| format!("writing {}", path.display()))?;
    }
    if let Some(path) = &cfg.output.plot {
        let Some(csv_path) = &cfg.output.csv else {
            bail!("output.plot is drawn from the CSV; set output.csv as well");
        };
        let rows = trace_csv::read_rows(File::open(csv_path)?)?;
        let svg = plot::regret_svg(&rows, Some(&cfg.learner), cfg.n)?;
        std::fs::write(path, svg).with_context(|| format!("writing {}", path.display()))?;
    }
    let checks = run_checks(cfg, &traces, &summary)?;
    Ok(RunOutcome {
        traces,
        summary,
        checks,
    })
}

fn create(path: &Path) -> anyhow::Result<File> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir)?;
    }
    File::create(path).with_context(|| format!("creating {}", path.display()))
}

fn ensure_finite(tr: &GameTrace) -> anyhow::Result<()> {
    for r in &tr.rounds {
        let values = [
            r.cost,
            r.gamma,
            r.eta,
            r.estimate.value(),
            r.probability.unwrap_or(0.0),
            r.inactive_charge.map_or(0.0, |c| c.1),
        ];
        if values.iter().any(|v| !v.is_finite()) {
            bail!("seed {} round {}: non-finite metric", tr.seed, r.t);
        }
    }
    if tr.final_cumulative.iter().any(|v| !v.is_finite()) {
        bail!("seed {}: non-finite cumulative estimate", tr.seed);
    }
    Ok(())
}

fn run_checks(
    cfg: &ExperimentConfig,
    traces: &[GameTrace],
    summary: &Summary,
) -> anyhow::Result<Vec<Check>> {
    let mut checks = Vec::new();
    if cfg.verify.bound {
        checks.push(match (summary.bound, summary.bound_satisfied) {
            (Some(b), Some(ok)) => Check {
                name: "bound".into(),
                pass: ok,
                detail: format!(
                    "mean regret {:.3} (±{:.3}) vs bound {b:.3}",
                    summary.mean_regret, summary.ci_half_width
                ),
            },
            _ => Check {
                name: "bound".into(),
                pass: false,
                detail: format!("learner {} has no regret bound", cfg.learner.label()),
            },
        });
    }
    if cfg.verify.stability {
        let mut worst = f64::INFINITY;
        let mut violations = 0;
        for r in traces.iter().flat_map(|t| &t.rounds) {
            if let Some(e) = r.stability {
                let margin = e.pi - (e.p - e.eta);
                worst = worst.min(margin);
                if margin < -1e-10 {
                    violations += 1;
                }
            }
        }
        checks.push(Check {
            name: "stability".into(),
            pass: violations == 0,
            detail: format!("{violations} violations, smallest margin {worst:.3e}"),
        });
    }
    if cfg.verify.telescoping {
        let mut worst = 0.0f64;
        let mut ok = true;
        for tr in traces {
            let mut s = Stream::new(tr.seed, StreamName::Perturbation, 1);
            let q: Vec<f64> = (0..tr.n).map(|_| s.exponential()).collect();
            let rep = telescoping_check(&tr.estimates(), &q, &tr.etas())?;
            worst = worst.max(rep.residual);
            ok &= rep.pass;
        }
        checks.push(Check {
            name: "telescoping".into(),
            pass: ok,
            detail: format!("max residual {worst:.3e}"),
        });
    }
    Ok(checks)
}
