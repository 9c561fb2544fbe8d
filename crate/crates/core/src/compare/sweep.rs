//! Single-qubit weight sweep.
//!
//! The two-qubit entangler is pinned to 1, virtual `rz` to 0, and the
//! physical single-qubit gates share one weight `w_s` that runs over a grid.
//! For each device and grid point the median %RE of gate-aware depth is
//! recorded, and the grid point minimizing it is reported.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use serde::Serialize;

use super::{all_pairs, median, CompareError, VersionRecord};
use crate::calibration::DurationTable;
use crate::circuit::Circuit;
use crate::depth::{gate_aware_depth_with, BarrierMode, Metric, WeightMap};
use crate::runtime::estimate_runtime_with;

/// Which gates have fixed weights and which follow `w_s`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SweepTemplate {
    fixed: BTreeMap<String, f64>,
    swept: BTreeSet<String>,
}

impl SweepTemplate {
    pub fn empty() -> Self {
        Self::default()
    }

    /// `ecr` and `cz` at 1, `rz` at 0, `sx` and `x` swept.
    pub fn superconducting_native() -> Self {
        Self::empty()
            .fixed("ecr", 1.0)
            .fixed("cz", 1.0)
            .fixed("rz", 0.0)
            .swept("sx")
            .swept("x")
    }

    pub fn fixed(mut self, gate: impl Into<String>, weight: f64) -> Self {
        let gate = gate.into();
        self.swept.remove(&gate);
        self.fixed.insert(gate, weight);
        self
    }

    pub fn swept(mut self, gate: impl Into<String>) -> Self {
        let gate = gate.into();
        self.fixed.remove(&gate);
        self.swept.insert(gate);
        self
    }

    pub fn weights(&self, w_s: f64) -> Result<WeightMap, CompareError> {
        let pairs = self
            .fixed
            .iter()
            .map(|(g, &w)| (g.clone(), w))
            .chain(self.swept.iter().map(|g| (g.clone(), w_s)));
        WeightMap::from_pairs(pairs).map_err(|e| CompareError::InvalidGrid(e.to_string()))
    }
}

/// A base circuit and its compiled versions, keyed by compiler id.
#[derive(Debug, Clone, PartialEq)]
pub struct BaseCircuit {
    pub name: String,
    pub versions: Vec<(String, Circuit)>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepPoint {
    pub w_s: f64,
    pub device: String,
    /// `None` when no pair had a defined %RE.
    pub median_percent_re: Option<f64>,
    pub pairs_used: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepOptimum {
    pub device: String,
    pub w_s: f64,
    pub median_percent_re: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepResult {
    /// Grouped by device in input order, ascending `w_s` within a device.
    pub points: Vec<SweepPoint>,
    /// Grid point with the lowest median per device; the smallest `w_s` wins
    /// ties.
    pub optima: Vec<SweepOptimum>,
}

/// Evenly spaced grid from `start` to `stop` inclusive. Values are rounded
/// to 12 decimals so that accumulated step error does not leak into keys.
pub fn weight_grid(start: f64, stop: f64, step: f64) -> Result<Vec<f64>, CompareError> {
    let bad = |msg: &str| Err(CompareError::InvalidGrid(msg.to_owned()));
    if !(start.is_finite() && stop.is_finite() && step.is_finite()) {
        return bad("bounds and step must be finite");
    }
    if !(0.0..=1.0).contains(&start) || !(0.0..=1.0).contains(&stop) {
        return bad("bounds must lie in [0, 1]");
    }
    if start > stop {
        return bad("start exceeds stop");
    }
    if step <= 0.0 {
        return bad("step must be positive");
    }
    let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
    Ok((0..count)
        .map(|i| {
            let v = start + i as f64 * step;
            ((v * 1e12).round() / 1e12).min(stop)
        })
        .collect())
}

fn device_runtimes(
    bases: &[BaseCircuit],
    table: &DurationTable,
    barrier: BarrierMode,
) -> Result<Vec<Vec<f64>>, CompareError> {
    bases
        .iter()
        .map(|base| {
            base.versions
                .iter()
                .map(|(compiler, circuit)| {
                    estimate_runtime_with(circuit, table, barrier).map_err(|source| CompareError::Runtime {
                        base: base.name.clone(),
                        compiler: compiler.clone(),
                        device: table.device().to_owned(),
                        source,
                    })
                })
                .collect()
        })
        .collect()
}

fn median_at(
    bases: &[BaseCircuit],
    runtimes: &[Vec<f64>],
    weights: &WeightMap,
    barrier: BarrierMode,
) -> Result<(Option<f64>, usize), CompareError> {
    let metric = Metric::GateAware.name();
    let mut records = Vec::new();
    for (base, base_runtimes) in bases.iter().zip(runtimes) {
        for ((compiler, circuit), &runtime) in base.versions.iter().zip(base_runtimes) {
            let depth = gate_aware_depth_with(circuit, weights, barrier).map_err(|source| CompareError::Depth {
                base: base.name.clone(),
                compiler: compiler.clone(),
                source,
            })?;
            records.push(VersionRecord::new(&base.name, compiler, runtime).with_metric(metric, depth));
        }
    }
    let values: Vec<f64> = all_pairs(&records, metric)?
        .into_iter()
        .filter_map(|p| p.percent_re)
        .collect();
    if values.is_empty() {
        Ok((None, 0))
    } else {
        Ok((Some(median(&values)?), values.len()))
    }
}

/// Median gate-aware %RE for every (device, `w_s`) combination.
pub fn sweep_weights(
    bases: &[BaseCircuit],
    devices: &[DurationTable],
    template: &SweepTemplate,
    grid: &[f64],
    barrier: BarrierMode,
) -> Result<SweepResult, CompareError> {
    for &w in grid {
        if !(0.0..=1.0).contains(&w) {
            return Err(CompareError::InvalidGrid(format!("grid value {w} outside [0, 1]")));
        }
    }
    let maps = grid
        .iter()
        .map(|&w| template.weights(w))
        .collect::<Result<Vec<_>, _>>()?;

    let mut points = Vec::with_capacity(grid.len() * devices.len());
    let mut optima = Vec::new();
    for table in devices {
        let runtimes = device_runtimes(bases, table, barrier)?;
        let medians = maps
            .par_iter()
            .map(|w| median_at(bases, &runtimes, w, barrier))
            .collect::<Result<Vec<_>, _>>()?;

        let mut best: Option<SweepOptimum> = None;
        for (&w_s, (median, pairs_used)) in grid.iter().zip(medians) {
            if let Some(m) = median {
                if best.as_ref().is_none_or(|b| m < b.median_percent_re) {
                    best = Some(SweepOptimum {
                        device: table.device().to_owned(),
                        w_s,
                        median_percent_re: m,
                    });
                }
            }
            points.push(SweepPoint {
                w_s,
                device: table.device().to_owned(),
                median_percent_re: median,
                pairs_used,
            });
        }
        optima.extend(best);
    }
    Ok(SweepResult { points, optima })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_sizes() {
        let g = weight_grid(0.0, 1.0, 0.01).unwrap();
        assert_eq!(g.len(), 101);
        assert_eq!(g[0], 0.0);
        assert_eq!(g[30], 0.3);
        assert_eq!(g[100], 1.0);
        assert_eq!(weight_grid(0.5, 0.5, 0.01).unwrap(), vec![0.5]);
        assert_eq!(weight_grid(0.0, 1.0, 0.25).unwrap(), vec![0.0, 0.25, 0.5, 0.75, 1.0]);
    }

    #[test]
    fn grid_errors() {
        assert!(weight_grid(0.0, 1.0, 0.0).is_err());
        assert!(weight_grid(0.6, 0.5, 0.1).is_err());
        assert!(weight_grid(-0.1, 0.5, 0.1).is_err());
        assert!(weight_grid(0.0, 1.5, 0.1).is_err());
        assert!(weight_grid(0.0, f64::NAN, 0.1).is_err());
    }

    #[test]
    fn template_weights() {
        let w = SweepTemplate::superconducting_native().weights(0.25).unwrap();
        assert_eq!(w.get("ecr"), Some(1.0));
        assert_eq!(w.get("cz"), Some(1.0));
        assert_eq!(w.get("rz"), Some(0.0));
        assert_eq!(w.get("sx"), Some(0.25));
        assert_eq!(w.get("x"), Some(0.25));
        let w = SweepTemplate::superconducting_native()
            .fixed("x", 0.5)
            .weights(0.1)
            .unwrap();
        assert_eq!(w.get("x"), Some(0.5));
    }
}
