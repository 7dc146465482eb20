//! Static SVG regret curves, drawn from parsed CSV rows.

use std::fmt::Write as _;

use anyhow::bail;
use fpl_core::harness::stats::mean_ci;
use fpl_core::harness::theoretical_bound;
use fpl_core::learners::LearnerConfig;

use crate::summary::Z_95;
use crate::trace_csv::{group_by_seed, CsvRow};

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 440.0;
const LEFT: f64 = 72.0;
const RIGHT: f64 = 24.0;
const TOP: f64 = 28.0;
const BOTTOM: f64 = 48.0;
const MAX_POINTS: usize = 800;

/// Mean cumulative regret per round over seeds, with its 95% CI.
pub fn mean_curve(rows: &[CsvRow]) -> anyhow::Result<Vec<(u64, f64, f64)>> {
    let groups = group_by_seed(rows);
    let Some(len) = groups.iter().map(|g| g.1.len()).min() else {
        bail!("no rows to plot");
    };
    let mut out = Vec::with_capacity(len);
    let mut buf = Vec::with_capacity(groups.len());
    for i in 0..len {
        buf.clear();
        buf.extend(groups.iter().map(|g| g.1[i].cum_regret));
        let (m, h) = mean_ci(&buf, Z_95);
        out.push((groups[0].1[i].record.t, m, h));
    }
    Ok(out)
}

/// Renders mean regret, its CI band and (when the learner has one) the
/// bound curve.
pub fn regret_svg(rows: &[CsvRow], learner: Option<&LearnerConfig>, n: usize) -> anyhow::Result<String> {
    let curve = mean_curve(rows)?;
    let stride = curve.len().div_ceil(MAX_POINTS).max(1);
    let mut pts: Vec<(u64, f64, f64)> = curve.iter().copied().step_by(stride).collect();
    if pts.last() != curve.last() {
        pts.push(*curve.last().unwrap());
    }
    let bound: Option<Vec<(u64, f64)>> = learner.and_then(|l| {
        pts.iter()
            .map(|&(t, _, _)| theoretical_bound(l, t, n).map(|b| (t, b)))
            .collect()
    });

    let t_max = pts.last().unwrap().0.max(1) as f64;
    let mut lo = pts.iter().map(|p| p.1 - p.2).fold(0.0, f64::min);
    let mut hi = pts.iter().map(|p| p.1 + p.2).fold(0.0, f64::max);
    if let Some(b) = &bound {
        hi = b.iter().map(|p| p.1).fold(hi, f64::max);
        lo = b.iter().map(|p| p.1).fold(lo, f64::min);
    }
    if hi - lo < 1e-9 {
        hi = lo + 1.0;
    }
    let plot_w = WIDTH - LEFT - RIGHT;
    let plot_h = HEIGHT - TOP - BOTTOM;
    let x = |t: f64| LEFT + plot_w * t / t_max;
    let y = |v: f64| TOP + plot_h * (hi - v) / (hi - lo);

    let mut s = String::new();
    writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    )?;
    writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#)?;
    for k in 0..=5 {
        let v = lo + (hi - lo) * k as f64 / 5.0;
        let yy = y(v);
        writeln!(
            s,
            r##"<line x1="{LEFT}" y1="{yy:.2}" x2="{:.2}" y2="{yy:.2}" stroke="#ddd"/><text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"##,
            WIDTH - RIGHT,
            LEFT - 6.0,
            yy + 4.0,
            tick(v)
        )?;
        let t = t_max * k as f64 / 5.0;
        writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
            x(t),
            HEIGHT - BOTTOM + 18.0,
            tick(t)
        )?;
    }
    writeln!(
        s,
        r#"<rect x="{LEFT}" y="{TOP}" width="{plot_w}" height="{plot_h}" fill="none" stroke="black"/>"#
    )?;
    writeln!(
        s,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">round t</text>"#,
        LEFT + plot_w / 2.0,
        HEIGHT - 10.0
    )?;
    writeln!(
        s,
        r#"<text x="16" y="{:.2}" text-anchor="middle" transform="rotate(-90 16 {:.2})">cumulative regret</text>"#,
        TOP + plot_h / 2.0,
        TOP + plot_h / 2.0
    )?;

    let mut band = String::new();
    for p in &pts {
        write!(band, "{:.2},{:.2} ", x(p.0 as f64), y(p.1 + p.2))?;
    }
    for p in pts.iter().rev() {
        write!(band, "{:.2},{:.2} ", x(p.0 as f64), y(p.1 - p.2))?;
    }
    writeln!(s, r##"<polygon points="{}" fill="#1f77b4" fill-opacity="0.2" stroke="none"/>"##, band.trim_end())?;
    let line: Vec<String> = pts
        .iter()
        .map(|p| format!("{:.2},{:.2}", x(p.0 as f64), y(p.1)))
        .collect();
    writeln!(
        s,
        r##"<polyline points="{}" fill="none" stroke="#1f77b4" stroke-width="1.5"/>"##,
        line.join(" ")
    )?;
    if let Some(b) = &bound {
        let line: Vec<String> = b
            .iter()
            .map(|p| format!("{:.2},{:.2}", x(p.0 as f64), y(p.1)))
            .collect();
        writeln!(
            s,
            r##"<polyline points="{}" fill="none" stroke="#d62728" stroke-dasharray="6 4" stroke-width="1.5"/>"##,
            line.join(" ")
        )?;
    }
    let lx = LEFT + 12.0;
    writeln!(
        s,
        r##"<line x1="{lx}" y1="{}" x2="{}" y2="{}" stroke="#1f77b4" stroke-width="1.5"/><text x="{}" y="{}">mean regret (95% CI)</text>"##,
        TOP + 14.0,
        lx + 24.0,
        TOP + 14.0,
        lx + 30.0,
        TOP + 18.0
    )?;
    if bound.is_some() {
        writeln!(
            s,
            r##"<line x1="{lx}" y1="{}" x2="{}" y2="{}" stroke="#d62728" stroke-dasharray="6 4" stroke-width="1.5"/><text x="{}" y="{}">regret bound</text>"##,
            TOP + 32.0,
            lx + 24.0,
            TOP + 32.0,
            lx + 30.0,
            TOP + 36.0
        )?;
    }
    writeln!(s, "</svg>")?;
    Ok(s)
}

fn tick(v: f64) -> String {
    if v != 0.0 && (v.abs() >= 1e5 || v.abs() < 1e-2) {
        format!("{v:.1e}")
    } else if v.fract() == 0.0 {
        format!("{v:.0}")
    } else {
        format!("{v:.2}")
    }
}
