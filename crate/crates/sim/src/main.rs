use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use fpl_core::learners::LearnerConfig;
use fpl_sim::config::ExperimentConfig;
use fpl_sim::verify::{run_suite, Suite};
use fpl_sim::{oracle_table, plot, run_experiment, trace_csv};

#[derive(Parser)]
#[command(name = "fpl", version, about = "Follow-the-Perturbed-Leader bandit experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every seed of an experiment config and write its artifacts.
    Run { config: PathBuf },
    /// Print the selection distribution by closed form, quadrature and sampling.
    Oracle {
        /// Cumulative estimates, comma separated.
        #[arg(long, value_delimiter = ',', required = true, allow_negative_numbers = true)]
        cumulative: Vec<f64>,
        #[arg(long)]
        eta: f64,
        #[arg(long, default_value_t = 1_000_000)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Run a verification suite.
    Verify {
        #[arg(value_enum)]
        suite: Suite,
    },
    /// Render an SVG regret curve from a trace CSV.
    Plot {
        csv: PathBuf,
        /// Write here instead of next to the CSV.
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Config whose learner supplies the bound curve.
        #[arg(long)]
        config: Option<PathBuf>,
    },
}

const CONFIG_ERROR: u8 = 2;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(CONFIG_ERROR)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match cli.command {
        Command::Run { config } => run(config),
        Command::Oracle {
            cumulative,
            eta,
            samples,
            seed,
        } => match oracle_table::inspect(&cumulative, eta, samples, seed) {
            Ok(t) => {
                if let Some(w) = &t.warning {
                    eprintln!("warning: {w}");
                }
                print!("{}", t.render());
                ExitCode::SUCCESS
            }
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(CONFIG_ERROR)
            }
        },
        Command::Verify { suite } => match run_suite(suite) {
            Ok(checks) => {
                for c in &checks {
                    println!("{c}");
                }
                if checks.iter().all(|c| c.pass) {
                    ExitCode::SUCCESS
                } else {
                    ExitCode::FAILURE
                }
            }
            Err(e) => {
                eprintln!("error: {e:#}");
                ExitCode::FAILURE
            }
        },
        Command::Plot {
            csv,
            output,
            config,
        } => plot_cmd(csv, output, config),
    }
}

fn run(path: PathBuf) -> ExitCode {
    let cfg = match ExperimentConfig::load(&path) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(CONFIG_ERROR);
        }
    };
    match run_experiment(&cfg) {
        Ok(outcome) => {
            let s = &outcome.summary;
            println!(
                "{} vs {}: mean regret {:.3} ± {:.3} over {} seeds",
                s.learner,
                s.adversary,
                s.mean_regret,
                s.ci_half_width,
                s.seeds.len()
            );
            if let (Some(b), Some(ok)) = (s.bound, s.bound_satisfied) {
                println!("bound {b:.3}: {}", if ok { "satisfied" } else { "exceeded" });
            }
            for c in &outcome.checks {
                println!("{c}");
            }
            if outcome.passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn plot_cmd(csv: PathBuf, output: Option<PathBuf>, config: Option<PathBuf>) -> ExitCode {
    let (learner, n): (Option<LearnerConfig>, usize) = match config.map(|p| ExperimentConfig::load(&p)) {
        Some(Ok(c)) => (Some(c.learner), c.n),
        Some(Err(e)) => {
            eprintln!("error: {e}");
            return ExitCode::from(CONFIG_ERROR);
        }
        None => (None, 0),
    };
    let result = std::fs::File::open(&csv)
        .map_err(anyhow::Error::from)
        .and_then(trace_csv::read_rows)
        .and_then(|rows| plot::regret_svg(&rows, learner.as_ref(), n))
        .and_then(|svg| {
            let out = output.unwrap_or_else(|| csv.with_extension("svg"));
            std::fs::write(&out, svg)?;
            Ok(out)
        });
    match result {
        Ok(out) => {
            println!("wrote {}", out.display());
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
