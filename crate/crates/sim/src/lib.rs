//! Configuration-driven experiment runner for `fpl-core`: JSON configs,
//! per-round CSV traces, JSON summaries, SVG regret plots and the
//! verification suites.

pub mod config;
pub mod oracle_table;
pub mod plot;
pub mod runner;
pub mod summary;
pub mod trace_csv;
pub mod verify;

pub use config::{ConfigError, ExperimentConfig};
pub use runner::{run_experiment, Check, RunOutcome};
