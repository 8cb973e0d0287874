use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};

use super::pipeline::{BsrCurve, EvaluationReport};

pub const REPORT_HEADER: &str = "method,k,bsr,probes_pct,chosen_C,chosen_kernel,chosen_gamma,selector_s,classify_s";

fn comment_lines(header: &[String]) -> String {
    header.iter().map(|h| format!("# {h}\n")).collect()
}

pub fn report_csv(reports: &[EvaluationReport], header: &[String]) -> String {
    let mut out = comment_lines(header);
    out.push_str(REPORT_HEADER);
    out.push('\n');
    for r in reports {
        let probes = r.probes_retained_pct.map(|p| p.to_string()).unwrap_or_default();
        let gamma = r.chosen.kernel.gamma().map(|g| g.to_string()).unwrap_or_default();
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{}",
            r.method,
            r.k,
            r.bsr_test,
            probes,
            r.chosen.c,
            r.chosen.kernel.name(),
            gamma,
            r.selector_seconds,
            r.classify_seconds
        );
    }
    out
}

pub fn curve_csv(curve: &BsrCurve, header: &[String]) -> String {
    let mut out = comment_lines(header);
    out.push_str("k,bsr\n");
    for (k, b) in &curve.points {
        let _ = writeln!(out, "{k},{b}");
    }
    out
}

/// `0.9512(38)`: BSR with the percentage of probes retained in
/// parentheses, or the bare BSR when probes are unknown.
pub fn format_bsr_probes(bsr: f64, probes_pct: Option<f64>) -> String {
    match probes_pct {
        Some(p) => format!("{bsr:.4}({p:.0})"),
        None => format!("{bsr:.4}"),
    }
}

/// Fixed-width comparison table with one row per report.
pub fn bench_table(reports: &[EvaluationReport]) -> String {
    let mut out = format!(
        "{:<10} {:>6} {:>14} {:>12} {:>12}\n",
        "method", "k", "BSR(probes%)", "selector_s", "classify_s"
    );
    for r in reports {
        let _ = writeln!(
            out,
            "{:<10} {:>6} {:>14} {:>12.3e} {:>12.3e}",
            r.method,
            r.k,
            format_bsr_probes(r.bsr_test, r.probes_retained_pct),
            r.selector_seconds,
            r.classify_seconds
        );
    }
    out
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| Error::io(path, e))
}
