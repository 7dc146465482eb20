use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use fpl_core::harness::{regret, run_game};
use fpl_sim::config::ExperimentConfig;
use fpl_sim::trace_csv::{read_rows, rows_to_traces};

const MINIMAL: &str = r#"{
  "learner": {"name": "bfpl"},
  "adversary": {"name": "fixed_matrix", "rows": [[0.3, 0.7]]},
  "n": 2,
  "horizon": 100,
  "seeds": [1],
  "output": {"csv": "trace.csv", "summary": "summary.json", "plot": "regret.svg"}
}"#;

fn fpl(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fpl")).args(args).output().unwrap()
}

fn run_config(dir: &Path, text: &str) -> Output {
    let path = dir.join("experiment.json");
    fs::write(&path, text).unwrap();
    fpl(&["run", path.to_str().unwrap()])
}

#[test]
fn minimal_config_writes_all_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_config(dir.path(), MINIMAL);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = fs::read_to_string(dir.path().join("trace.csv")).unwrap();
    let mut lines = csv.lines();
    let head = lines.next().unwrap();
    assert!(head.starts_with("t,seed,action,explore_flag,cost,cum_cost,cum_regret,gamma_t,eta_t,"));
    assert_eq!(lines.count(), 100);
    let svg = fs::read_to_string(dir.path().join("regret.svg")).unwrap();
    assert!(svg.starts_with("<svg") || svg.starts_with("<?xml"));
}

#[test]
fn summary_matches_csv_recomputation() {
    let dir = tempfile::tempdir().unwrap();
    let text = MINIMAL.replace("\"seeds\": [1]", "\"seeds\": [4, 9, 2]");
    assert!(run_config(dir.path(), &text).status.success());
    let summary: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("summary.json")).unwrap()).unwrap();
    let cfg = ExperimentConfig::parse(&text, "x").unwrap();
    let rows = read_rows(fs::File::open(dir.path().join("trace.csv")).unwrap()).unwrap();
    let traces = rows_to_traces(&rows, &cfg.learner, &cfg.adversary).unwrap();
    let per_seed: Vec<f64> = traces.iter().map(|t| regret(t).regret_vs_best).collect();
    let listed: Vec<f64> = summary["regret"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_f64().unwrap())
        .collect();
    assert_eq!(per_seed, listed);
    let mean = per_seed.iter().sum::<f64>() / per_seed.len() as f64;
    assert!((summary["mean_regret"].as_f64().unwrap() - mean).abs() < 1e-9);
    for (seed, t) in [4, 9, 2].into_iter().zip(&traces) {
        let last = rows.iter().filter(|r| r.seed == seed).last().unwrap();
        assert_eq!(last.cum_regret, regret(t).regret_vs_best);
    }
}

#[test]
fn csv_round_trip_rebuilds_games() {
    let dir = tempfile::tempdir().unwrap();
    let text = r#"{
  "learner": {"name": "oracle_fpl", "stability_check": true},
  "adversary": {"name": "punish_last_action"},
  "n": 4, "horizon": 60, "seeds": [7, 8],
  "output": {"csv": "trace.csv"}
}"#;
    assert!(run_config(dir.path(), text).status.success());
    let cfg = ExperimentConfig::parse(text, "x").unwrap();
    let rows = read_rows(fs::File::open(dir.path().join("trace.csv")).unwrap()).unwrap();
    let rebuilt = rows_to_traces(&rows, &cfg.learner, &cfg.adversary).unwrap();
    for (seed, tr) in [7, 8].into_iter().zip(&rebuilt) {
        let direct = run_game(&cfg.learner, &cfg.adversary, cfg.n, cfg.horizon, seed).unwrap();
        assert_eq!(&direct, tr);
    }
}

#[test]
fn bad_config_reports_position_and_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let text = MINIMAL.replace("\"n\": 2,", "\"n\": 2,\n  \"colour\": 3,");
    let out = run_config(dir.path(), &text);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("experiment.json:5:"), "{err}");
    assert!(err.contains("colour"), "{err}");

    let out = run_config(dir.path(), &MINIMAL.replace("0.7", "1.5"));
    assert_eq!(out.status.code(), Some(2));

    let out = fpl(&["run", dir.path().join("missing.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(fpl(&["verify", "nonsense"]).status.code(), Some(2));
    assert_eq!(fpl(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(fpl(&["oracle", "--cumulative", "1,0", "--eta", "-1"]).status.code(), Some(2));
}

#[test]
fn oracle_subcommand_prints_three_columns() {
    let out = fpl(&["oracle", "--cumulative", "1,1,1,1", "--eta", "0.5", "--samples", "100000"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("closed_form"));
    assert_eq!(text.matches("0.250000").count(), 8);

    let out = fpl(&["oracle", "--cumulative", "1,0", "--eta", "1", "--samples", "200000", "--seed", "2"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("0.183940") && text.contains("0.816060"), "{text}");
}

#[test]
fn plot_subcommand_redraws_svg() {
    let dir = tempfile::tempdir().unwrap();
    assert!(run_config(dir.path(), MINIMAL).status.success());
    let csv = dir.path().join("trace.csv");
    let cfg = dir.path().join("experiment.json");
    let out_svg = dir.path().join("again.svg");
    let out = fpl(&[
        "plot",
        csv.to_str().unwrap(),
        "-o",
        out_svg.to_str().unwrap(),
        "--config",
        cfg.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(fs::read(&out_svg).unwrap(), fs::read(dir.path().join("regret.svg")).unwrap());
}

#[test]
fn verify_toggles_report_checks() {
    let dir = tempfile::tempdir().unwrap();
    let text = r#"{
  "learner": {"name": "oracle_fpl", "stability_check": true},
  "adversary": {"name": "punish_last_action"},
  "n": 3, "horizon": 40, "seeds": [1],
  "verify": {"bound": true, "stability": true, "telescoping": true}
}"#;
    let out = run_config(dir.path(), text);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stdout));
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("PASS"));
}

#[test]
fn shipped_configs_parse() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs");
    let mut seen = 0;
    for entry in fs::read_dir(dir).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().is_some_and(|e| e == "json") {
            ExperimentConfig::load(&path).unwrap_or_else(|e| panic!("{e}"));
            seen += 1;
        }
    }
    assert!(seen >= 3);
}
