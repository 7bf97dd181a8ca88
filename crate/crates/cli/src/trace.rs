//! Membrane-potential traces as CSV and a minimal SVG plot.

use std::fmt::Write as _;
use std::fs::{self, File};
use std::io::BufWriter;
use std::path::Path;

use lpsnn_core::srm::Trace;
use lpsnn_core::{Genome, Simulator};

use crate::config::Experiment;
use crate::error::{HarnessError, Result};
use crate::eval::PatternSet;

/// Simulates one pattern over the full window and writes its trace CSV, plus
/// an SVG plot when `svg` is given.
pub fn emit_traces(
    genome: &Genome,
    exp: &Experiment,
    set: &PatternSet,
    pattern: usize,
    csv: &Path,
    svg: Option<&Path>,
) -> Result<Trace> {
    let p = set.patterns.get(pattern).ok_or_else(|| {
        HarnessError::Usage(format!(
            "pattern {pattern} out of range; the set has {}",
            set.len()
        ))
    })?;
    // Validates topology and scheme against the configuration.
    crate::eval::task_for(genome, exp, set)?;
    let sim = Simulator::new(exp.sim)?;
    let wiring = sim.wire(&genome.topology, &genome.synapses())?;
    let trace = sim.trace(&wiring, &sim.stimulus(&p.inputs)?)?;

    let file = File::create(csv).map_err(|e| HarnessError::io(csv, e))?;
    trace
        .write_csv(BufWriter::new(file))
        .map_err(|e| HarnessError::io(csv, e))?;
    if let Some(svg) = svg {
        let title = format!("{} pattern {}", genome.topology, set.names[pattern]);
        fs::write(svg, render_svg(&trace, exp.sim.sim_time_ms, &title))
            .map_err(|e| HarnessError::io(svg, e))?;
    }
    Ok(trace)
}

const W: f64 = 800.0;
const H: f64 = 400.0;
const MARGIN: f64 = 50.0;
const COLORS: [&str; 8] = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#17becf",
];

/// One polyline per neuron, a dashed threshold line and axis ticks.
pub fn render_svg(trace: &Trace, sim_time_ms: f64, title: &str) -> String {
    let (lo, hi) = trace.rows.iter().fold(
        (0.0f64.min(trace.threshold), trace.threshold.max(0.0)),
        |(lo, hi), r| (lo.min(r.u), hi.max(r.u)),
    );
    let pad = 0.05 * (hi - lo).max(1e-9);
    let (lo, hi) = (lo - pad, hi + pad);
    let x = |t: f64| MARGIN + (W - 2.0 * MARGIN) * t / sim_time_ms;
    let y = |u: f64| H - MARGIN - (H - 2.0 * MARGIN) * (u - lo) / (hi - lo);

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}" font-family="sans-serif" font-size="11">"#
    );
    let _ = writeln!(
        s,
        r#"<text x="{}" y="20" text-anchor="middle">{title}</text>"#,
        W / 2.0
    );
    let (x0, x1, y0, y1) = (MARGIN, W - MARGIN, H - MARGIN, MARGIN);
    let _ = writeln!(
        s,
        r#"<line x1="{x0}" y1="{y0}" x2="{x1}" y2="{y0}" stroke="black"/>"#
    );
    let _ = writeln!(
        s,
        r#"<line x1="{x0}" y1="{y0}" x2="{x0}" y2="{y1}" stroke="black"/>"#
    );
    for i in 0..=5 {
        let t = sim_time_ms * i as f64 / 5.0;
        let _ = writeln!(
            s,
            r#"<line x1="{0:.1}" y1="{y0}" x2="{0:.1}" y2="{1}" stroke="black"/><text x="{0:.1}" y="{2}" text-anchor="middle">{t}</text>"#,
            x(t),
            y0 + 4.0,
            y0 + 16.0
        );
        let u = lo + (hi - lo) * i as f64 / 5.0;
        let _ = writeln!(
            s,
            r#"<line x1="{0}" y1="{1:.1}" x2="{x0}" y2="{1:.1}" stroke="black"/><text x="{2}" y="{1:.1}" text-anchor="end" dominant-baseline="middle">{u:.2}</text>"#,
            x0 - 4.0,
            y(u),
            x0 - 6.0
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}" text-anchor="middle">t (ms)</text>"#,
        W / 2.0,
        H - 10.0
    );
    let ty = y(trace.threshold);
    let _ = writeln!(
        s,
        r#"<line x1="{x0}" y1="{ty:.1}" x2="{x1}" y2="{ty:.1}" stroke="gray" stroke-dasharray="6 4"/><text x="{}" y="{:.1}" fill="gray">theta</text>"#,
        x1 + 4.0,
        ty
    );
    for (i, n) in trace.neurons().into_iter().enumerate() {
        let points: Vec<String> = trace
            .rows
            .iter()
            .filter(|r| r.neuron == n)
            .map(|r| format!("{:.2},{:.2}", x(r.t_ms), y(r.u)))
            .collect();
        let color = COLORS[i % COLORS.len()];
        let _ = writeln!(
            s,
            r#"<polyline fill="none" stroke="{color}" stroke-width="1.2" points="{}"><title>neuron {n}</title></polyline>"#,
            points.join(" ")
        );
    }
    s.push_str("</svg>\n");
    s
}
