//! Side-by-side selection distributions for the `oracle` subcommand.

use std::fmt::Write as _;

use fpl_core::oracle::{
    closed_form_probabilities, mc_selection_probabilities, quadrature_probabilities, EXACT_CAP,
};
use fpl_core::{Result, Stream, StreamName};

#[derive(Debug, Clone, PartialEq)]
pub struct OracleTable {
    pub closed_form: Option<Vec<f64>>,
    pub quadrature: Option<Vec<f64>>,
    pub monte_carlo: Vec<f64>,
    pub samples: u64,
    /// Largest deviation between any two columns.
    pub max_deviation: f64,
    /// Largest deviation between the two exact columns.
    pub exact_deviation: Option<f64>,
    pub warning: Option<String>,
}

pub fn inspect(cumulative: &[f64], eta: f64, samples: u64, seed: u64) -> Result<OracleTable> {
    let mut stream = Stream::new(seed, StreamName::MonteCarlo, 0);
    let mc = mc_selection_probabilities(cumulative, eta, samples, &mut stream)?.probs;
    let (closed_form, quadrature, warning) = if cumulative.len() > EXACT_CAP {
        (
            None,
            None,
            Some(format!(
                "n = {} exceeds the exact cap of {EXACT_CAP}; Monte-Carlo only",
                cumulative.len()
            )),
        )
    } else {
        (
            Some(closed_form_probabilities(cumulative, eta)?.probs),
            Some(quadrature_probabilities(cumulative, eta)?.probs),
            None,
        )
    };
    let cols: Vec<&Vec<f64>> = [closed_form.as_ref(), quadrature.as_ref(), Some(&mc)]
        .into_iter()
        .flatten()
        .collect();
    let dev = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
    let mut max_deviation = 0.0f64;
    for (i, a) in cols.iter().enumerate() {
        for b in &cols[i + 1..] {
            max_deviation = max_deviation.max(dev(a, b));
        }
    }
    let exact_deviation = match (&closed_form, &quadrature) {
        (Some(a), Some(b)) => Some(dev(a, b)),
        _ => None,
    };
    Ok(OracleTable {
        closed_form,
        quadrature,
        monte_carlo: mc,
        samples,
        max_deviation,
        exact_deviation,
        warning,
    })
}

impl OracleTable {
    pub fn render(&self) -> String {
        let mut s = String::new();
        let cell = |v: Option<&Vec<f64>>, i: usize| v.map_or("-".to_string(), |v| format!("{:.6}", v[i]));
        let _ = writeln!(s, "{:>6}  {:>12}  {:>12}  {:>12}", "expert", "closed_form", "quadrature", "monte_carlo");
        for i in 0..self.monte_carlo.len() {
            let _ = writeln!(
                s,
                "{:>6}  {:>12}  {:>12}  {:>12}",
                i,
                cell(self.closed_form.as_ref(), i),
                cell(self.quadrature.as_ref(), i),
                format!("{:.6}", self.monte_carlo[i])
            );
        }
        if let Some(d) = self.exact_deviation {
            let _ = writeln!(s, "max |closed_form - quadrature| = {d:.3e}");
        }
        let _ = writeln!(s, "max pairwise deviation = {:.3e} (k = {})", self.max_deviation, self.samples);
        s
    }
}
