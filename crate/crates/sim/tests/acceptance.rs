//! Acceptance run: one PASS/FAIL line per criterion, details indented below.

use std::path::Path;
use std::process::{Command, ExitCode};
use std::time::Instant;

use fpl_core::adversaries::AdversaryConfig;
use fpl_core::learners::{LearnerConfig, McCounter, SampleRule};
use fpl_sim::verify::{self, AzumaSizes, BoundSizes, CouplingSizes};
use fpl_sim::Check;

struct Outcome {
    pass: bool,
    details: Vec<String>,
}

fn from_checks(checks: Vec<Check>) -> Outcome {
    Outcome {
        pass: !checks.is_empty() && checks.iter().all(|c| c.pass),
        details: checks
            .iter()
            .map(|c| format!("{} [{}] {}", c.name, if c.pass { "ok" } else { "FAILED" }, c.detail))
            .collect(),
    }
}

fn bfpl_bound() -> anyhow::Result<Outcome> {
    Ok(from_checks(verify::bfpl_bounds(&BoundSizes::default())?))
}

fn oracle_bound_and_slopes() -> anyhow::Result<Outcome> {
    Ok(from_checks(verify::oracle_bounds(&BoundSizes::default())?))
}

fn mc_bound() -> anyhow::Result<Outcome> {
    Ok(from_checks(verify::mc_bounds(&BoundSizes::default())?))
}

fn coupling() -> anyhow::Result<Outcome> {
    Ok(from_checks(vec![verify::coupling(&CouplingSizes::default())?]))
}

fn unbiasedness() -> anyhow::Result<Outcome> {
    Ok(from_checks(verify::unbiasedness(1000, 7)?))
}

fn perturbed_addition() -> anyhow::Result<Outcome> {
    Ok(from_checks(vec![verify::stability(1000, 9)?]))
}

fn telescoping() -> anyhow::Result<Outcome> {
    Ok(from_checks(vec![verify::telescoping(100, 5, 1000, 0)?]))
}

fn concentration() -> anyhow::Result<Outcome> {
    let sizes = AzumaSizes::default();
    let mut out = from_checks(verify::azuma(&sizes)?);
    let note = verify::azuma_unconditional(&sizes)?;
    out.details.push(format!(
        "note (not gated): {} [{}] {}",
        note.name,
        if note.pass { "within" } else { "exceeds" },
        note.detail
    ));
    Ok(out)
}

fn oracle_correctness() -> anyhow::Result<Outcome> {
    Ok(from_checks(verify::oracle_agreement(1000, 20, 1_000_000, 9)?))
}

fn infinite_variant() -> anyhow::Result<Outcome> {
    Ok(from_checks(verify::infinite_checks(&BoundSizes::default())?))
}

fn run_cli(dir: &Path, config: &str, workers: &str) -> anyhow::Result<Vec<Vec<u8>>> {
    let cfg_path = dir.join("experiment.json");
    std::fs::write(&cfg_path, config)?;
    let out = Command::new(env!("CARGO_BIN_EXE_fpl"))
        .arg("run")
        .arg(&cfg_path)
        .env("FPL_WORKERS", workers)
        .output()?;
    if !out.status.success() {
        anyhow::bail!("fpl run failed: {}", String::from_utf8_lossy(&out.stderr));
    }
    let mut files = vec![out.stdout];
    for name in ["trace.csv", "summary.json", "regret.svg"] {
        files.push(std::fs::read(dir.join(name))?);
    }
    Ok(files)
}

fn determinism() -> anyhow::Result<Outcome> {
    let learners = [
        LearnerConfig::Bfpl {},
        LearnerConfig::OracleFpl { stability_check: true },
        LearnerConfig::McFpl {
            counter: McCounter::Resample,
            sample_rule: SampleRule::Quadratic,
        },
        LearnerConfig::McFpl {
            counter: McCounter::Binomial,
            sample_rule: SampleRule::Quadratic,
        },
        verify::infinite_learner(),
        LearnerConfig::RewardFpl {},
    ];
    let mut adversaries = verify::standard_adversaries(6);
    adversaries.push(AdversaryConfig::BestResponseGreedy { window: 10 });
    let mut details = Vec::new();
    let mut pass = true;
    for (k, learner) in learners.iter().enumerate() {
        let adversary = &adversaries[k % adversaries.len()];
        let config = serde_json::json!({
            "learner": learner,
            "adversary": adversary,
            "n": 6,
            "horizon": 150,
            "seeds": [3, 1, 4, 15],
            "output": {"csv": "trace.csv", "summary": "summary.json", "plot": "regret.svg"}
        })
        .to_string();
        let a = tempfile::tempdir()?;
        let b = tempfile::tempdir()?;
        let first = run_cli(a.path(), &config, "1")?;
        let second = run_cli(b.path(), &config, "3")?;
        let same = first == second;
        pass &= same;
        details.push(format!(
            "{} vs {}: stdout, CSV, summary and SVG {} across reruns (1 and 3 workers)",
            learner.label(),
            adversary.label(),
            if same { "byte-identical" } else { "DIFFER" }
        ));
    }
    let verify_a = Command::new(env!("CARGO_BIN_EXE_fpl")).args(["verify", "telescoping"]).output()?;
    let verify_b = Command::new(env!("CARGO_BIN_EXE_fpl")).args(["verify", "telescoping"]).output()?;
    let same = verify_a.stdout == verify_b.stdout && verify_a.status.success();
    pass &= same;
    details.push(format!(
        "verify telescoping output {} across reruns",
        if same { "byte-identical" } else { "DIFFERS" }
    ));
    Ok(Outcome { pass, details })
}

type Criterion = (&'static str, fn() -> anyhow::Result<Outcome>);

fn main() -> ExitCode {
    let criteria: [Criterion; 11] = [
        ("bFPL regret within 4(Tn√ln n)^(2/3), n=5, T=10^4, 100 seeds", bfpl_bound),
        ("oracle-FPL regret within 2√(2Tn ln n), sublinear vs adaptive adversaries", oracle_bound_and_slopes),
        ("MC-FPL regret within 2√(2Tn ln n) + 7√T at T=2000", mc_bound),
        ("fresh vs fixed perturbation per-round costs indistinguishable", coupling),
        ("cost estimates unbiased", unbiasedness),
        ("selection probability after adding an estimate", perturbed_addition),
        ("telescoping identity and inequality on 100 runs", telescoping),
        ("cost concentration, 500 seeds, δ=0.05", concentration),
        ("exact oracle agreement and worked value", oracle_correctness),
        ("infinite-expert variant properties", infinite_variant),
        ("byte-identical reruns", determinism),
    ];
    let mut failed = 0;
    for (i, (label, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run().unwrap_or_else(|e| Outcome {
            pass: false,
            details: vec![format!("error: {e:#}")],
        });
        let tag = if outcome.pass { "PASS" } else { "FAIL" };
        println!(
            "criterion {:>2}: {tag}  {label}  ({:.1}s)",
            i + 1,
            start.elapsed().as_secs_f64()
        );
        for d in &outcome.details {
            println!("    {d}");
        }
        if !outcome.pass {
            failed += 1;
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
