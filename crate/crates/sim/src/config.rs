//! Experiment configuration files (JSON).

use std::collections::HashSet;
use std::path::{Path, PathBuf};

use fpl_core::adversaries::AdversaryConfig;
use fpl_core::learners::LearnerConfig;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub learner: LearnerConfig,
    pub adversary: AdversaryConfig,
    pub n: usize,
    pub horizon: u64,
    pub seeds: Vec<u64>,
    #[serde(default)]
    pub output: OutputConfig,
    #[serde(default)]
    pub verify: VerifyToggles,
}

/// Artifact paths. Relative paths are taken relative to the config file.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub csv: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub summary: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub plot: Option<PathBuf>,
}

/// Checks applied to the finished games; any failure makes `run` exit 1.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifyToggles {
    /// Mean regret within the theoretical bound plus 3 CI half-widths.
    #[serde(default)]
    pub bound: bool,
    /// Realized `(p, π)` pairs of oracle-FPL rounds satisfy `π ≥ p - η`.
    #[serde(default)]
    pub stability: bool,
    /// The induction identity on each game's estimate sequence.
    #[serde(default)]
    pub telescoping: bool,
}

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("{path}:{line}:{column}: {message}")]
    Parse {
        path: String,
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{path}: {message}")]
    Invalid { path: String, message: String },
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.display().to_string(),
            source,
        })?;
        let mut cfg = Self::parse(&text, &path.display().to_string())?;
        if let Some(dir) = path.parent() {
            cfg.output.resolve(dir);
        }
        Ok(cfg)
    }

    /// Parses and validates; `origin` labels diagnostics.
    pub fn parse(text: &str, origin: &str) -> Result<Self, ConfigError> {
        let cfg: ExperimentConfig =
            serde_json::from_str(text).map_err(|e| ConfigError::Parse {
                path: origin.to_string(),
                line: e.line(),
                column: e.column(),
                message: strip_position(&e.to_string()),
            })?;
        cfg.validate().map_err(|message| ConfigError::Invalid {
            path: origin.to_string(),
            message,
        })?;
        Ok(cfg)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn validate(&self) -> Result<(), String> {
        if self.horizon == 0 {
            return Err("horizon must be at least 1".into());
        }
        if self.seeds.is_empty() {
            return Err("seeds must not be empty".into());
        }
        let mut seen = HashSet::new();
        for s in &self.seeds {
            if !seen.insert(s) {
                return Err(format!("seed {s} listed twice"));
            }
        }
        self.learner
            .build(self.n)
            .map_err(|e| format!("learner: {e}"))?;
        self.adversary
            .build(self.n, self.horizon)
            .map_err(|e| format!("adversary: {e}"))?;
        if self.verify.stability && !matches!(self.learner, LearnerConfig::OracleFpl { stability_check: true }) {
            return Err("verify.stability needs learner oracle_fpl with stability_check = true".into());
        }
        Ok(())
    }
}

impl OutputConfig {
    fn resolve(&mut self, dir: &Path) {
        for p in [&mut self.csv, &mut self.summary, &mut self.plot].into_iter().flatten() {
            if p.is_relative() {
                *p = dir.join(&*p);
            }
        }
    }
}

// serde_json appends " at line L column C"; the diagnostic prefix carries it.
fn strip_position(msg: &str) -> String {
    match msg.rfind(" at line ") {
        Some(i) => msg[..i].to_string(),
        None => msg.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"{
  "learner": {"name": "bfpl"},
  "adversary": {"name": "fixed_matrix", "rows": [[0.3, 0.7]]},
  "n": 2,
  "horizon": 100,
  "seeds": [1]
}"#;

    #[test]
    fn minimal_parses() {
        let cfg = ExperimentConfig::parse(MINIMAL, "min.json").unwrap();
        assert_eq!(cfg.learner, LearnerConfig::Bfpl {});
        assert_eq!(cfg.horizon, 100);
        assert_eq!(cfg.output, OutputConfig::default());
    }

    #[test]
    fn round_trip() {
        let text = r#"{
  "learner": {"name": "bfpl_infinite", "prior": {"kind": "geometric", "first": 0.2, "ratio": 0.911}, "alpha": 0.5},
  "adversary": {"name": "deceptive_switch", "decoy": 1, "switch_time": 40},
  "n": 6, "horizon": 120, "seeds": [3, 1, 2],
  "output": {"csv": "a.csv", "plot": "a.svg"},
  "verify": {"telescoping": true}
}"#;
        let cfg = ExperimentConfig::parse(text, "x").unwrap();
        let again = ExperimentConfig::parse(&cfg.to_json(), "y").unwrap();
        assert_eq!(cfg, again);
    }

    #[test]
    fn unknown_keys_rejected_with_position() {
        let text = MINIMAL.replace("\"n\": 2", "\"n\": 2,\n  \"colour\": 1");
        match ExperimentConfig::parse(&text, "c.json") {
            Err(ConfigError::Parse { line, message, .. }) => {
                assert_eq!(line, 5);
                assert!(message.contains("colour"), "{message}");
            }
            other => panic!("{other:?}"),
        }
        let text = MINIMAL.replace(r#"{"name": "bfpl"}"#, r#"{"name": "bfpl", "eta": 1}"#);
        assert!(ExperimentConfig::parse(&text, "c.json").is_err());
    }

    #[test]
    fn semantic_errors() {
        let bad_cost = MINIMAL.replace("0.7", "1.7");
        assert!(matches!(
            ExperimentConfig::parse(&bad_cost, "c"),
            Err(ConfigError::Invalid { .. })
        ));
        let dup = MINIMAL.replace("[1]", "[1, 1]");
        assert!(ExperimentConfig::parse(&dup, "c").is_err());
        let zero = MINIMAL.replace("100", "0");
        assert!(ExperimentConfig::parse(&zero, "c").is_err());
    }

    #[test]
    fn diagnostic_format() {
        let err = ExperimentConfig::parse("{\n  \"n\": 2,\n  oops\n}", "bad.json").unwrap_err();
        let shown = err.to_string();
        assert!(shown.starts_with("bad.json:3:"), "{shown}");
    }
}
