//! JSON and CSV renderings of comparison and sweep results.
//!
//! Output is deterministic: rows follow input order and floats use the
//! shortest representation that parses back to the same value.

use serde::Serialize;
use serde_json::json;

use crate::compare::{
    ComparisonReport, PairComparison, SweepResult, METRIC_TIE_RELATIVE, QUARTILE_METHOD, RUNTIME_TIE_SECONDS,
};

pub const ORIENTATION: &str = "delta = (a - b) / b where compiler_b is the lexicographically smaller compiler id";

pub const PAIR_CSV_HEADER: [&str; 8] = [
    "base",
    "compiler_a",
    "compiler_b",
    "metric",
    "delta_metric",
    "delta_runtime",
    "percent_re",
    "flags",
];

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn to_csv<I, R>(header: &[&str], rows: I) -> String
where
    I: IntoIterator<Item = R>,
    R: IntoIterator<Item = String>,
{
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for row in rows {
        w.write_record(row).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv output is utf-8")
}

/// One row per pair comparison.
pub fn pairs_csv(pairs: &[PairComparison]) -> String {
    to_csv(
        &PAIR_CSV_HEADER,
        pairs.iter().map(|p| {
            let flags: Vec<&str> = p.flags.iter().map(|f| f.as_str()).collect();
            [
                p.base.clone(),
                p.compiler_a.clone(),
                p.compiler_b.clone(),
                p.metric.clone(),
                opt(p.delta_metric),
                opt(p.delta_runtime),
                opt(p.percent_re),
                flags.join("|"),
            ]
        }),
    )
}

#[derive(Serialize)]
struct Metadata {
    orientation: &'static str,
    quartile_method: &'static str,
    metric_tie_relative: f64,
    runtime_tie_seconds: f64,
}

const METADATA: Metadata = Metadata {
    orientation: ORIENTATION,
    quartile_method: QUARTILE_METHOD,
    metric_tie_relative: METRIC_TIE_RELATIVE,
    runtime_tie_seconds: RUNTIME_TIE_SECONDS,
};

/// Full report: metadata, every version record, every pair and the
/// per-metric summaries.
pub fn report_json(report: &ComparisonReport) -> String {
    let value = json!({
        "metadata": METADATA,
        "records": report.records,
        "pairs": report.pairs,
        "summaries": report.summaries,
    });
    serde_json::to_string_pretty(&value).expect("report serializes")
}

/// Per-metric %RE distribution and identification accuracy.
pub fn summary_json(report: &ComparisonReport) -> String {
    let metrics: Vec<_> = report
        .summaries
        .iter()
        .map(|s| {
            json!({
                "metric": s.metric,
                "pairs": s.pairs,
                "excluded_pairs": s.excluded_pairs,
                "percent_re": s.percent_re,
                "identification_accuracy_percent": s.identification_accuracy_percent,
                "identifications_correct": s.identifications.iter().filter(|i| i.correct).count(),
                "identifications_total": s.identifications.len(),
            })
        })
        .collect();
    let value = json!({ "metadata": METADATA, "metrics": metrics });
    serde_json::to_string_pretty(&value).expect("summary serializes")
}

pub const SWEEP_CSV_HEADER: [&str; 4] = ["w_s", "device", "median_percent_re", "pairs_used"];

pub fn sweep_csv(result: &SweepResult) -> String {
    to_csv(
        &SWEEP_CSV_HEADER,
        result.points.iter().map(|p| {
            [
                p.w_s.to_string(),
                p.device.clone(),
                opt(p.median_percent_re),
                p.pairs_used.to_string(),
            ]
        }),
    )
}

pub fn sweep_json(result: &SweepResult) -> String {
    serde_json::to_string_pretty(result).expect("sweep serializes")
}

/// `x` rounded to `digits` significant digits, for human-readable tables.
pub fn format_significant(x: f64, digits: usize) -> String {
    if x == 0.0 || !x.is_finite() {
        return x.to_string();
    }
    let digits = digits.max(1);
    let magnitude = x.abs().log10().floor() as i32;
    let decimals = (digits as i32 - 1 - magnitude).max(0) as usize;
    if !(-5..=15).contains(&magnitude) {
        return format!("{:.*e}", digits - 1, x);
    }
    format!("{x:.decimals$}")
}
