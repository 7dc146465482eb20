//! Per-round CSV traces.
//!
//! One row per (seed, round), seeds in config order. The first nine columns
//! are the headline metrics; the rest carry what is needed to rebuild a
//! [`GameTrace`]: optional schedule/probability fields, the estimate, the
//! infinite-variant charge, the oracle pair, substream positions at the
//! start of the round, and the full cost vector.

use std::io::{Read, Write};

use anyhow::{anyhow, bail, Context};
use fpl_core::adversaries::AdversaryConfig;
use fpl_core::harness::{regret_curve, GameTrace, RoundRecord};
use fpl_core::learners::{StabilityRecord, LearnerConfig};
use fpl_core::rng::DrawCursor;
use fpl_core::{CostVector, EstimateVector};

pub const HEADLINE: [&str; 9] = [
    "t",
    "seed",
    "action",
    "explore_flag",
    "cost",
    "cum_cost",
    "cum_regret",
    "gamma_t",
    "eta_t",
];

const DETAIL: [&str; 13] = [
    "samples",
    "probability",
    "est_index",
    "est_value",
    "charge_index",
    "charge_value",
    "stability_p",
    "stability_pi",
    "pos_q",
    "pos_r",
    "pos_u",
    "pos_adv",
    "pos_mc",
];

pub fn header(n: usize) -> Vec<String> {
    HEADLINE
        .iter()
        .chain(DETAIL.iter())
        .map(|s| s.to_string())
        .chain((0..n).map(|i| format!("cost_{i}")))
        .collect()
}

/// 17 significant digits.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

fn opt<T: ToString>(x: Option<T>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

fn opt_f64(x: Option<f64>) -> String {
    x.map(fmt_f64).unwrap_or_default()
}

pub fn write_traces<W: Write>(out: W, traces: &[GameTrace]) -> anyhow::Result<()> {
    let n = traces.first().map(|t| t.n).unwrap_or(0);
    let mut w = csv::Writer::from_writer(out);
    w.write_record(header(n))?;
    for tr in traces {
        if tr.n != n {
            bail!("traces with different expert counts cannot share a file");
        }
        for (r, (cum_cost, cum_regret)) in tr.rounds.iter().zip(regret_curve(tr)) {
            let mut rec = vec![
                r.t.to_string(),
                tr.seed.to_string(),
                r.action.to_string(),
                u8::from(r.explored).to_string(),
                fmt_f64(r.cost),
                fmt_f64(cum_cost),
                fmt_f64(cum_regret),
                fmt_f64(r.gamma),
                fmt_f64(r.eta),
                opt(r.samples),
                opt_f64(r.probability),
                opt(r.estimate.index()),
                fmt_f64(r.estimate.value()),
                opt(r.inactive_charge.map(|c| c.0)),
                opt_f64(r.inactive_charge.map(|c| c.1)),
                opt_f64(r.stability.map(|e| e.p)),
                opt_f64(r.stability.map(|e| e.pi)),
                r.cursor.q.to_string(),
                r.cursor.r.to_string(),
                r.cursor.u.to_string(),
                r.cursor.adv.to_string(),
                r.cursor.mc.to_string(),
            ];
            rec.extend(r.costs.as_slice().iter().map(|&c| fmt_f64(c)));
            w.write_record(&rec)?;
        }
    }
    w.flush()?;
    Ok(())
}

/// One parsed CSV row.
#[derive(Debug, Clone, PartialEq)]
pub struct CsvRow {
    pub seed: u64,
    pub cum_cost: f64,
    pub cum_regret: f64,
    pub record: RoundRecord,
}

pub fn read_rows<R: Read>(input: R) -> anyhow::Result<Vec<CsvRow>> {
    let mut rd = csv::Reader::from_reader(input);
    let head = rd.headers()?.clone();
    let n = head.len().checked_sub(HEADLINE.len() + DETAIL.len()).ok_or_else(|| anyhow!("too few columns"))?;
    let expected = header(n);
    if head.iter().ne(expected.iter().map(String::as_str)) {
        bail!("unexpected header");
    }
    let mut rows = Vec::new();
    for (line, rec) in rd.records().enumerate() {
        let rec = rec?;
        rows.push(parse_row(&rec, n).with_context(|| format!("data row {}", line + 1))?);
    }
    Ok(rows)
}

fn parse_row(rec: &csv::StringRecord, n: usize) -> anyhow::Result<CsvRow> {
    let f = |i: usize| rec.get(i).unwrap_or("");
    let num = |i: usize| -> anyhow::Result<f64> {
        f(i).parse::<f64>().with_context(|| format!("column {}", i + 1))
    };
    let int = |i: usize| -> anyhow::Result<u64> {
        f(i).parse::<u64>().with_context(|| format!("column {}", i + 1))
    };
    let opt_int = |i: usize| -> anyhow::Result<Option<u64>> {
        if f(i).is_empty() { Ok(None) } else { int(i).map(Some) }
    };
    let opt_num = |i: usize| -> anyhow::Result<Option<f64>> {
        if f(i).is_empty() { Ok(None) } else { num(i).map(Some) }
    };
    let eta = num(8)?;
    let estimate = match opt_int(11)? {
        Some(i) => EstimateVector::one_hot(i as usize, num(12)?)?,
        None => EstimateVector::zero(),
    };
    let inactive_charge = match (opt_int(13)?, opt_num(14)?) {
        (Some(i), Some(c)) => Some((i as usize, c)),
        (None, None) => None,
        _ => bail!("half-filled charge columns"),
    };
    let stability = match (opt_num(15)?, opt_num(16)?) {
        (Some(p), Some(pi)) => Some(StabilityRecord { p, pi, eta }),
        (None, None) => None,
        _ => bail!("half-filled oracle columns"),
    };
    let base = HEADLINE.len() + DETAIL.len();
    let costs = CostVector::new((0..n).map(|i| num(base + i)).collect::<anyhow::Result<_>>()?)?;
    let record = RoundRecord {
        t: int(0)?,
        action: int(2)? as usize,
        explored: match f(3) {
            "0" => false,
            "1" => true,
            other => bail!("explore_flag {other:?}"),
        },
        cost: num(4)?,
        costs,
        estimate,
        inactive_charge,
        gamma: num(7)?,
        eta,
        samples: opt_int(9)?,
        probability: opt_num(10)?,
        stability,
        cursor: DrawCursor {
            q: int(17)?,
            r: int(18)?,
            u: int(19)?,
            adv: int(20)?,
            mc: int(21)?,
        },
    };
    Ok(CsvRow {
        seed: int(1)?,
        cum_cost: num(5)?,
        cum_regret: num(6)?,
        record,
    })
}

/// Groups rows by seed (in order of first appearance).
pub fn group_by_seed(rows: &[CsvRow]) -> Vec<(u64, Vec<&CsvRow>)> {
    let mut groups: Vec<(u64, Vec<&CsvRow>)> = Vec::new();
    for r in rows {
        match groups.iter_mut().find(|g| g.0 == r.seed) {
            Some(g) => g.1.push(r),
            None => groups.push((r.seed, vec![r])),
        }
    }
    groups
}

/// Rebuilds the games of a CSV given the configuration that produced it.
pub fn rows_to_traces(
    rows: &[CsvRow],
    learner: &LearnerConfig,
    adversary: &AdversaryConfig,
) -> anyhow::Result<Vec<GameTrace>> {
    group_by_seed(rows)
        .into_iter()
        .map(|(seed, rs)| {
            let n = rs[0].record.costs.len();
            let mut tr = GameTrace {
                seed,
                n,
                horizon: rs.len() as u64,
                learner: learner.clone(),
                adversary: adversary.clone(),
                rounds: rs.iter().map(|r| r.record.clone()).collect(),
                final_cumulative: Vec::new(),
            };
            for (i, r) in tr.rounds.iter().enumerate() {
                if r.t != i as u64 + 1 {
                    bail!("seed {seed}: round {} out of order", r.t);
                }
            }
            tr.final_cumulative = tr.replay_cumulative()?;
            Ok(tr)
        })
        .collect()
}
