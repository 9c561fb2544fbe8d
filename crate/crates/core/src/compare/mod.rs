//! Accuracy of depth metrics for comparing compiled versions of a circuit.
//!
//! Two questions are answered per metric:
//!
//! * how well the relative change in the metric between two versions
//!   predicts the relative change in runtime (percent relative error), and
//! * whether the versions minimizing the metric are exactly the versions
//!   minimizing runtime (optimal-version identification).

mod stats;
mod sweep;

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::calibration::DurationTable;
use crate::depth::{BarrierMode, DepthError, Metric, WeightMap};
use crate::runtime::{estimate_runtime_with, RuntimeError};

pub use stats::{
    median, quantile_sorted, summarize_distribution, DistributionSummary, FENCE_IQR_FACTOR, QUARTILE_METHOD,
};
pub use sweep::{sweep_weights, weight_grid, BaseCircuit, SweepOptimum, SweepPoint, SweepResult, SweepTemplate};

/// Metric values closer than this, relative to their magnitude, are tied.
pub const METRIC_TIE_RELATIVE: f64 = 1e-9;
/// Runtimes closer than this many seconds are tied.
pub const RUNTIME_TIE_SECONDS: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CompareError {
    #[error("relative difference against a zero baseline")]
    ZeroDenominator,
    #[error("percent relative error is undefined when the runtime difference is zero")]
    ZeroRuntimeDelta,
    #[error("record {base}/{compiler} has no value for metric `{metric}`")]
    MissingMetric {
        base: String,
        compiler: String,
        metric: String,
    },
    #[error("base circuit `{base}` lists compiler `{compiler}` more than once")]
    DuplicateVersion { base: String, compiler: String },
    #[error("cannot summarize an empty distribution")]
    EmptyDistribution,
    #[error("distribution contains non-finite value {0}")]
    NonFiniteValue(f64),
    #[error("invalid weight grid: {0}")]
    InvalidGrid(String),
    #[error("{base}/{compiler}: {source}")]
    Depth {
        base: String,
        compiler: String,
        #[source]
        source: DepthError,
    },
    #[error("{base}/{compiler} on {device}: {source}")]
    Runtime {
        base: String,
        compiler: String,
        device: String,
        #[source]
        source: RuntimeError,
    },
}

/// `(a - b) / b`.
pub fn relative_difference(a: f64, b: f64) -> Result<f64, CompareError> {
    if b == 0.0 {
        return Err(CompareError::ZeroDenominator);
    }
    Ok((a - b) / b)
}

/// `|dd - dr| / |dr| * 100`: error of predicting the runtime change `dr`
/// with the metric change `dd`. At least 100 whenever the signs differ.
pub fn percent_relative_error(delta_metric: f64, delta_runtime: f64) -> Result<f64, CompareError> {
    if delta_runtime == 0.0 {
        return Err(CompareError::ZeroRuntimeDelta);
    }
    Ok((delta_metric - delta_runtime).abs() / delta_runtime.abs() * 100.0)
}

/// One compiled version of a base circuit with its metric values and true
/// runtime.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VersionRecord {
    pub base_circuit: String,
    pub compiler: String,
    pub metric_values: BTreeMap<String, f64>,
    pub runtime_s: f64,
}

impl VersionRecord {
    pub fn new(base_circuit: impl Into<String>, compiler: impl Into<String>, runtime_s: f64) -> Self {
        Self {
            base_circuit: base_circuit.into(),
            compiler: compiler.into(),
            metric_values: BTreeMap::new(),
            runtime_s,
        }
    }

    pub fn with_metric(mut self, metric: impl Into<String>, value: f64) -> Self {
        self.metric_values.insert(metric.into(), value);
        self
    }

    fn metric(&self, metric: &str) -> Result<f64, CompareError> {
        self.metric_values
            .get(metric)
            .copied()
            .ok_or_else(|| CompareError::MissingMetric {
                base: self.base_circuit.clone(),
                compiler: self.compiler.clone(),
                metric: metric.to_owned(),
            })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PairFlag {
    /// The denominator version has metric value 0.
    ZeroMetricBaseline,
    /// The denominator version has runtime 0.
    ZeroRuntimeBaseline,
    /// Both versions have the same runtime, up to the runtime tie tolerance.
    ZeroRuntimeDelta,
}

impl PairFlag {
    pub fn as_str(self) -> &'static str {
        match self {
            PairFlag::ZeroMetricBaseline => "zero_metric_baseline",
            PairFlag::ZeroRuntimeBaseline => "zero_runtime_baseline",
            PairFlag::ZeroRuntimeDelta => "zero_runtime_delta",
        }
    }
}

/// Comparison of version `compiler_a` against `compiler_b`; `compiler_b`
/// (the lexicographically smaller id) is the denominator.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairComparison {
    pub base: String,
    pub compiler_a: String,
    pub compiler_b: String,
    pub metric: String,
    pub delta_metric: Option<f64>,
    pub delta_runtime: Option<f64>,
    pub percent_re: Option<f64>,
    pub flags: Vec<PairFlag>,
}

/// Relative difference, snapped to exactly 0 when the two values are tied
/// under the same tolerance used for argmin sets.
fn tied_difference(a: f64, b: f64, tied: fn(f64, f64) -> bool) -> Result<f64, CompareError> {
    let d = relative_difference(a, b)?;
    Ok(if tied(a, b) { 0.0 } else { d })
}

impl PairComparison {
    fn between(a: &VersionRecord, b: &VersionRecord, metric: &str) -> Result<Self, CompareError> {
        let mut flags = Vec::new();
        let delta_metric = tied_difference(a.metric(metric)?, b.metric(metric)?, metric_tied)
            .map_err(|_| flags.push(PairFlag::ZeroMetricBaseline))
            .ok();
        let delta_runtime = tied_difference(a.runtime_s, b.runtime_s, runtime_tied)
            .map_err(|_| flags.push(PairFlag::ZeroRuntimeBaseline))
            .ok();
        let percent_re = match (delta_metric, delta_runtime) {
            (Some(dd), Some(dr)) => percent_relative_error(dd, dr)
                .map_err(|_| flags.push(PairFlag::ZeroRuntimeDelta))
                .ok(),
            (_, Some(0.0)) => {
                flags.push(PairFlag::ZeroRuntimeDelta);
                None
            }
            _ => None,
        };
        Ok(Self {
            base: a.base_circuit.clone(),
            compiler_a: a.compiler.clone(),
            compiler_b: b.compiler.clone(),
            metric: metric.to_owned(),
            delta_metric,
            delta_runtime,
            percent_re,
            flags,
        })
    }
}

/// Records grouped by base circuit in order of first appearance, each group
/// sorted by compiler id.
pub fn group_by_base(records: &[VersionRecord]) -> Result<Vec<(&str, Vec<&VersionRecord>)>, CompareError> {
    let mut order: Vec<&str> = Vec::new();
    let mut groups: BTreeMap<&str, Vec<&VersionRecord>> = BTreeMap::new();
    for r in records {
        let group = groups.entry(r.base_circuit.as_str()).or_insert_with(|| {
            order.push(r.base_circuit.as_str());
            Vec::new()
        });
        if group.iter().any(|g| g.compiler == r.compiler) {
            return Err(CompareError::DuplicateVersion {
                base: r.base_circuit.clone(),
                compiler: r.compiler.clone(),
            });
        }
        group.push(r);
    }
    Ok(order
        .into_iter()
        .map(|base| {
            let mut group = groups.remove(base).unwrap_or_default();
            group.sort_by(|a, b| a.compiler.cmp(&b.compiler));
            (base, group)
        })
        .collect())
}

/// Every unordered pair of versions within each base circuit, `k(k-1)/2`
/// per base with `k` versions.
pub fn all_pairs(records: &[VersionRecord], metric: &str) -> Result<Vec<PairComparison>, CompareError> {
    let mut out = Vec::new();
    for (_, versions) in group_by_base(records)? {
        for (i, lower) in versions.iter().enumerate() {
            for upper in &versions[i + 1..] {
                out.push(PairComparison::between(upper, lower, metric)?);
            }
        }
    }
    Ok(out)
}

/// Outcome of checking whether a metric picks out the fastest version(s).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Identification {
    pub base: String,
    pub correct: bool,
    pub metric_argmin: Vec<String>,
    pub runtime_argmin: Vec<String>,
}

fn metric_tied(v: f64, min: f64) -> bool {
    (v - min).abs() <= METRIC_TIE_RELATIVE * v.abs().max(min.abs())
}

fn runtime_tied(v: f64, min: f64) -> bool {
    (v - min).abs() <= RUNTIME_TIE_SECONDS
}

fn argmin_set(
    versions: &[&VersionRecord],
    value: impl Fn(&VersionRecord) -> Result<f64, CompareError>,
    tied: fn(f64, f64) -> bool,
) -> Result<Vec<String>, CompareError> {
    let values = versions.iter().map(|r| value(r)).collect::<Result<Vec<f64>, _>>()?;
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    let mut set: Vec<String> = versions
        .iter()
        .zip(&values)
        .filter(|(_, &v)| tied(v, min))
        .map(|(r, _)| r.compiler.clone())
        .collect();
    set.sort();
    Ok(set)
}

/// Compares the set of versions minimizing `metric` with the set minimizing
/// runtime. The identification is correct only if the sets are equal, so a
/// metric tie that includes a slower version counts as wrong.
pub fn identify_optimal(records: &[VersionRecord], metric: &str) -> Result<Identification, CompareError> {
    let versions: Vec<&VersionRecord> = records.iter().collect();
    identify_group(&versions, metric)
}

fn identify_group(versions: &[&VersionRecord], metric: &str) -> Result<Identification, CompareError> {
    let metric_argmin = argmin_set(versions, |r| r.metric(metric), metric_tied)?;
    let runtime_argmin = argmin_set(versions, |r| Ok(r.runtime_s), runtime_tied)?;
    Ok(Identification {
        base: versions.first().map(|r| r.base_circuit.clone()).unwrap_or_default(),
        correct: metric_argmin == runtime_argmin,
        metric_argmin,
        runtime_argmin,
    })
}

/// One identification per base circuit having at least two versions.
pub fn identify_all(records: &[VersionRecord], metric: &str) -> Result<Vec<Identification>, CompareError> {
    group_by_base(records)?
        .into_iter()
        .filter(|(_, versions)| versions.len() >= 2)
        .map(|(_, versions)| identify_group(&versions, metric))
        .collect()
}

/// Percentage of correct identifications; `None` when there are none.
pub fn identification_accuracy(identifications: &[Identification]) -> Option<f64> {
    if identifications.is_empty() {
        return None;
    }
    let correct = identifications.iter().filter(|i| i.correct).count();
    Some(correct as f64 / identifications.len() as f64 * 100.0)
}

/// Per-metric results of a comparison run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetricSummary {
    pub metric: String,
    pub pairs: usize,
    /// Pairs whose %RE is undefined; left out of the distribution.
    pub excluded_pairs: usize,
    pub percent_re: Option<DistributionSummary>,
    pub identification_accuracy_percent: Option<f64>,
    pub identifications: Vec<Identification>,
}

/// Everything a comparison run produces.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComparisonReport {
    pub records: Vec<VersionRecord>,
    pub pairs: Vec<PairComparison>,
    pub summaries: Vec<MetricSummary>,
}

pub fn compare_versions(records: &[VersionRecord], metrics: &[&str]) -> Result<ComparisonReport, CompareError> {
    let mut pairs = Vec::new();
    let mut summaries = Vec::new();
    for &metric in metrics {
        let metric_pairs = all_pairs(records, metric)?;
        let values: Vec<f64> = metric_pairs.iter().filter_map(|p| p.percent_re).collect();
        let identifications = identify_all(records, metric)?;
        summaries.push(MetricSummary {
            metric: metric.to_owned(),
            pairs: metric_pairs.len(),
            excluded_pairs: metric_pairs.len() - values.len(),
            percent_re: if values.is_empty() {
                None
            } else {
                Some(summarize_distribution(&values)?)
            },
            identification_accuracy_percent: identification_accuracy(&identifications),
            identifications,
        });
        pairs.extend(metric_pairs);
    }
    Ok(ComparisonReport {
        records: records.to_vec(),
        pairs,
        summaries,
    })
}

/// Evaluates every version of every base: runtime against `table` and each
/// requested metric. Records come out in base order, then version order.
pub fn measure_versions(
    bases: &[BaseCircuit],
    table: &DurationTable,
    metrics: &[Metric],
    weights: Option<&WeightMap>,
    barrier: BarrierMode,
) -> Result<Vec<VersionRecord>, CompareError> {
    let per_base = bases
        .par_iter()
        .map(|base| {
            base.versions
                .iter()
                .map(|(compiler, circuit)| {
                    let runtime =
                        estimate_runtime_with(circuit, table, barrier).map_err(|source| CompareError::Runtime {
                            base: base.name.clone(),
                            compiler: compiler.clone(),
                            device: table.device().to_owned(),
                            source,
                        })?;
                    let mut record = VersionRecord::new(&base.name, compiler, runtime);
                    for &metric in metrics {
                        let value =
                            metric
                                .evaluate(circuit, weights, barrier)
                                .map_err(|source| CompareError::Depth {
                                    base: base.name.clone(),
                                    compiler: compiler.clone(),
                                    source,
                                })?;
                        record = record.with_metric(metric.name(), value);
                    }
                    Ok(record)
                })
                .collect::<Result<Vec<_>, CompareError>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(per_base.into_iter().flatten().collect())
}
