//! Per-device gate-duration tables and architecture weight maps.
//!
//! A [`DurationTable`] records how long each gate takes at each qubit
//! location of one device. [`configure_weights`] averages those times over
//! one or more devices of the same architecture and normalizes by the
//! slowest gate, giving the weight map used by gate-aware depth.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::depth::WeightMap;

#[derive(Debug, Error)]
pub enum CalibrationError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed duration table (line {line}, column {column}): {message}")]
    Json {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("schema violation at {pointer}: {message}")]
    Schema { pointer: String, message: String },
    #[error("duplicate entry for ({gate}, {qubits:?}) at {pointer}")]
    DuplicateEntry {
        gate: String,
        qubits: Vec<usize>,
        pointer: String,
    },
    #[error("no duration tables given")]
    NoTables,
    #[error("mixed architectures: `{expected}` and `{found}` (device `{device}`)")]
    MixedArchitectures {
        expected: String,
        found: String,
        device: String,
    },
    #[error("every gate has zero average duration; nothing to normalize against")]
    NoPositiveMean,
}

/// Gate times of one device, keyed by gate name and ordered qubit tuple.
#[derive(Debug, Clone, PartialEq)]
pub struct DurationTable {
    device: String,
    architecture: String,
    entries: BTreeMap<String, BTreeMap<Vec<usize>, f64>>,
    defaults: BTreeMap<String, f64>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TableFile {
    device: String,
    architecture: String,
    entries: Vec<EntryFile>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    defaults: BTreeMap<String, f64>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EntryFile {
    gate: String,
    qubits: Vec<usize>,
    duration_s: f64,
}

fn check_duration(value: f64, pointer: impl FnOnce() -> String) -> Result<(), CalibrationError> {
    if value.is_finite() && value >= 0.0 {
        Ok(())
    } else {
        Err(CalibrationError::Schema {
            pointer: pointer(),
            message: format!("duration must be finite and non-negative, got {value}"),
        })
    }
}

/// Escapes a key for use inside a JSON pointer.
fn pointer_token(key: &str) -> String {
    key.replace('~', "~0").replace('/', "~1")
}

impl DurationTable {
    pub fn new(device: impl Into<String>, architecture: impl Into<String>) -> Self {
        Self {
            device: device.into(),
            architecture: architecture.into(),
            entries: BTreeMap::new(),
            defaults: BTreeMap::new(),
        }
    }

    /// Adds a location entry. Fails on a repeated (gate, qubits) key or an
    /// invalid duration.
    pub fn insert(
        &mut self,
        gate: impl Into<String>,
        qubits: impl Into<Vec<usize>>,
        duration_s: f64,
    ) -> Result<(), CalibrationError> {
        let gate = gate.into();
        let qubits = qubits.into();
        let pointer = || format!("/entries/{gate}/{qubits:?}");
        check_duration(duration_s, pointer)?;
        if qubits.is_empty() {
            return Err(CalibrationError::Schema {
                pointer: pointer(),
                message: "qubit tuple is empty".into(),
            });
        }
        let slot = self.entries.entry(gate.clone()).or_default();
        if slot.contains_key(&qubits) {
            return Err(CalibrationError::DuplicateEntry {
                pointer: pointer(),
                gate,
                qubits,
            });
        }
        slot.insert(qubits, duration_s);
        Ok(())
    }

    pub fn set_default(&mut self, gate: impl Into<String>, duration_s: f64) -> Result<(), CalibrationError> {
        let gate = gate.into();
        check_duration(duration_s, || format!("/defaults/{}", pointer_token(&gate)))?;
        self.defaults.insert(gate, duration_s);
        Ok(())
    }

    pub fn device(&self) -> &str {
        &self.device
    }

    pub fn architecture(&self) -> &str {
        &self.architecture
    }

    /// Exact location entry, direction-sensitive.
    pub fn entry(&self, gate: &str, qubits: &[usize]) -> Option<f64> {
        self.entries.get(gate)?.get(qubits).copied()
    }

    pub fn default_for(&self, gate: &str) -> Option<f64> {
        self.defaults.get(gate).copied()
    }

    /// Exact location entry first, then the gate default.
    pub fn lookup(&self, gate: &str, qubits: &[usize]) -> Option<f64> {
        self.entry(gate, qubits).or_else(|| self.default_for(gate))
    }

    /// Number of location entries.
    pub fn len(&self) -> usize {
        self.entries.values().map(BTreeMap::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// All location entries in (gate, qubits) order.
    pub fn entries(&self) -> impl Iterator<Item = (&str, &[usize], f64)> {
        self.entries.iter().flat_map(|(gate, locs)| {
            locs.iter()
                .map(move |(qubits, &d)| (gate.as_str(), qubits.as_slice(), d))
        })
    }

    pub fn defaults(&self) -> impl Iterator<Item = (&str, f64)> {
        self.defaults.iter().map(|(k, &v)| (k.as_str(), v))
    }

    /// Every gate name with either location entries or a default.
    pub fn gate_names(&self) -> impl Iterator<Item = &str> {
        let mut names: Vec<&str> = self
            .entries
            .keys()
            .chain(self.defaults.keys())
            .map(String::as_str)
            .collect();
        names.sort_unstable();
        names.dedup();
        names.into_iter()
    }

    /// Returns a copy with every duration multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        let mut out = self.clone();
        for locs in out.entries.values_mut() {
            for d in locs.values_mut() {
                *d *= factor;
            }
        }
        for d in out.defaults.values_mut() {
            *d *= factor;
        }
        out
    }

    pub fn from_json_str(text: &str) -> Result<Self, CalibrationError> {
        let file: TableFile = serde_json::from_str(text).map_err(|e| CalibrationError::Json {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        let mut table = DurationTable::new(file.device, file.architecture);
        for (i, entry) in file.entries.into_iter().enumerate() {
            check_duration(entry.duration_s, || format!("/entries/{i}/duration_s"))?;
            if entry.qubits.is_empty() {
                return Err(CalibrationError::Schema {
                    pointer: format!("/entries/{i}/qubits"),
                    message: "qubit tuple is empty".into(),
                });
            }
            let slot = table.entries.entry(entry.gate.clone()).or_default();
            if slot.contains_key(&entry.qubits) {
                return Err(CalibrationError::DuplicateEntry {
                    gate: entry.gate,
                    qubits: entry.qubits,
                    pointer: format!("/entries/{i}"),
                });
            }
            slot.insert(entry.qubits, entry.duration_s);
        }
        for (gate, d) in file.defaults {
            check_duration(d, || format!("/defaults/{}", pointer_token(&gate)))?;
            table.defaults.insert(gate, d);
        }
        Ok(table)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, CalibrationError> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|source| CalibrationError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::from_json_str(&text)
    }

    pub fn to_json_string(&self) -> String {
        let file = TableFile {
            device: self.device.clone(),
            architecture: self.architecture.clone(),
            entries: self
                .entries()
                .map(|(gate, qubits, duration_s)| EntryFile {
                    gate: gate.to_owned(),
                    qubits: qubits.to_vec(),
                    duration_s,
                })
                .collect(),
            defaults: self.defaults.clone(),
        };
        serde_json::to_string_pretty(&file).expect("duration tables always serialize")
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<(), CalibrationError> {
        let path = path.as_ref();
        fs::write(path, self.to_json_string()).map_err(|source| CalibrationError::Io {
            path: path.display().to_string(),
            source,
        })
    }
}

/// Duration statistics for one gate name.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GateStats {
    pub mean: f64,
    /// Number of location entries averaged; 0 when the value came from the
    /// gate default.
    pub count: usize,
    pub min: f64,
    pub max: f64,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct GateTimeSummary {
    pub gates: BTreeMap<String, GateStats>,
}

impl GateTimeSummary {
    pub fn mean(&self, gate: &str) -> Option<f64> {
        self.gates.get(gate).map(|s| s.mean)
    }
}

fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

/// Sorted so the sum does not depend on input order.
fn order_independent_mean(values: &mut [f64]) -> f64 {
    values.sort_by(f64::total_cmp);
    mean(values)
}

/// Per-gate mean over location entries. Defaults are used only for gates
/// that have no location entries at all.
pub fn summarize(table: &DurationTable) -> GateTimeSummary {
    let mut gates = BTreeMap::new();
    for (gate, locs) in &table.entries {
        if locs.is_empty() {
            continue;
        }
        let values: Vec<f64> = locs.values().copied().collect();
        let min = values.iter().copied().fold(f64::INFINITY, f64::min);
        let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let mean = mean(&values).clamp(min, max);
        gates.insert(
            gate.clone(),
            GateStats {
                mean,
                count: values.len(),
                min,
                max,
            },
        );
    }
    for (gate, &d) in &table.defaults {
        gates.entry(gate.clone()).or_insert(GateStats {
            mean: d,
            count: 0,
            min: d,
            max: d,
        });
    }
    GateTimeSummary { gates }
}

/// How per-device times are combined across devices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Averaging {
    /// Mean of per-device means; every device counts equally.
    #[default]
    Hierarchical,
    /// One mean over all location entries of all devices.
    Pooled,
}

/// Cross-device average time of every gate, before normalization.
pub fn average_gate_times(
    tables: &[DurationTable],
    averaging: Averaging,
) -> Result<BTreeMap<String, f64>, CalibrationError> {
    let first = tables.first().ok_or(CalibrationError::NoTables)?;
    for t in tables {
        if t.architecture != first.architecture {
            return Err(CalibrationError::MixedArchitectures {
                expected: first.architecture.clone(),
                found: t.architecture.clone(),
                device: t.device.clone(),
            });
        }
    }

    let mut samples: BTreeMap<String, Vec<f64>> = BTreeMap::new();
    for t in tables {
        match averaging {
            Averaging::Hierarchical => {
                for (gate, stats) in summarize(t).gates {
                    samples.entry(gate).or_default().push(stats.mean);
                }
            }
            Averaging::Pooled => {
                for (gate, locs) in &t.entries {
                    samples.entry(gate.clone()).or_default().extend(locs.values());
                }
                for (gate, &d) in &t.defaults {
                    if t.entries.get(gate).is_none_or(BTreeMap::is_empty) {
                        samples.entry(gate.clone()).or_default().push(d);
                    }
                }
            }
        }
    }
    Ok(samples
        .into_iter()
        .filter(|(_, v)| !v.is_empty())
        .map(|(gate, mut v)| (gate, order_independent_mean(&mut v)))
        .collect())
}

/// Average each gate's time across the given devices and divide by the
/// slowest gate's average. The slowest gate gets exactly 1.0.
pub fn configure_weights(tables: &[DurationTable], averaging: Averaging) -> Result<WeightMap, CalibrationError> {
    let means = average_gate_times(tables, averaging)?;
    let anchor = means.values().copied().fold(0.0_f64, f64::max);
    if anchor <= 0.0 {
        return Err(CalibrationError::NoPositiveMean);
    }
    let mut weights = WeightMap::new(Some(tables[0].architecture.clone()));
    for (gate, m) in means {
        weights
            .insert(gate, m / anchor)
            .expect("ratio of non-negative finite means is a valid weight");
    }
    Ok(weights)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table(device: &str, arch: &str, entries: &[(&str, &[usize], f64)]) -> DurationTable {
        let mut t = DurationTable::new(device, arch);
        for &(g, q, d) in entries {
            t.insert(g, q, d).unwrap();
        }
        t
    }

    #[test]
    fn load_single_entry() {
        let t = DurationTable::from_json_str(
            r#"{"device": "d", "architecture": "a",
                "entries": [{"gate": "x", "qubits": [0], "duration_s": 5.0e-8}]}"#,
        )
        .unwrap();
        assert_eq!(t.len(), 1);
        assert_eq!(t.entry("x", &[0]), Some(5.0e-8));
    }

    #[test]
    fn negative_duration_is_schema_error() {
        let err = DurationTable::from_json_str(
            r#"{"device": "d", "architecture": "a",
                "entries": [{"gate": "x", "qubits": [0], "duration_s": -1}]}"#,
        )
        .unwrap_err();
        match err {
            CalibrationError::Schema { pointer, .. } => assert_eq!(pointer, "/entries/0/duration_s"),
            other => panic!("unexpected {other:?}"),
        }
        let err = DurationTable::from_json_str(
            r#"{"device": "d", "architecture": "a", "entries": [], "defaults": {"a/b": -2}}"#,
        )
        .unwrap_err();
        assert!(matches!(err, CalibrationError::Schema { ref pointer, .. } if pointer == "/defaults/a~1b"));
    }

    #[test]
    fn duplicate_key_rejected() {
        let err = DurationTable::from_json_str(
            r#"{"device": "d", "architecture": "a", "entries": [
                {"gate": "cz", "qubits": [0, 1], "duration_s": 1e-7},
                {"gate": "cz", "qubits": [0, 1], "duration_s": 2e-7}]}"#,
        )
        .unwrap_err();
        assert!(matches!(err, CalibrationError::DuplicateEntry { ref pointer, .. } if pointer == "/entries/1"));
        // the reversed direction is a different key
        let t = DurationTable::from_json_str(
            r#"{"device": "d", "architecture": "a", "entries": [
                {"gate": "ecr", "qubits": [0, 1], "duration_s": 1e-7},
                {"gate": "ecr", "qubits": [1, 0], "duration_s": 2e-7}]}"#,
        )
        .unwrap();
        assert_eq!(t.entry("ecr", &[1, 0]), Some(2e-7));
    }

    #[test]
    fn malformed_json_and_unknown_fields() {
        assert!(matches!(
            DurationTable::from_json_str("{"),
            Err(CalibrationError::Json { .. })
        ));
        assert!(
            DurationTable::from_json_str(r#"{"device": "d", "architecture": "a", "entries": [], "extra": 1}"#).is_err()
        );
    }

    #[test]
    fn lookup_precedence() {
        let mut t = table("d", "a", &[("ecr", &[0, 1], 5e-7)]);
        assert_eq!(t.lookup("ecr", &[1, 0]), None);
        t.set_default("ecr", 6e-7).unwrap();
        assert_eq!(t.lookup("ecr", &[0, 1]), Some(5e-7));
        assert_eq!(t.lookup("ecr", &[1, 0]), Some(6e-7));
    }

    #[test]
    fn two_point_mean() {
        let t = table("d", "a", &[("x", &[0], 4e-8), ("x", &[1], 6e-8)]);
        let s = summarize(&t);
        assert_eq!(s.mean("x"), Some(5e-8));
        assert_eq!(s.gates["x"].count, 2);
        let t = table("d", "a", &[("sx", &[3], 3.5e-8)]);
        assert_eq!(summarize(&t).mean("sx"), Some(3.5e-8));
    }

    #[test]
    fn defaults_only_when_no_entries() {
        let mut t = table("d", "a", &[("x", &[0], 4e-8)]);
        t.set_default("x", 1.0).unwrap();
        t.set_default("measure", 1e-6).unwrap();
        let s = summarize(&t);
        assert_eq!(s.mean("x"), Some(4e-8));
        assert_eq!(s.gates["measure"].count, 0);
        assert_eq!(s.mean("measure"), Some(1e-6));
    }

    #[test]
    fn self_normalization() {
        let w = configure_weights(
            &[table("d", "heron", &[("cz", &[0, 1], 6.6e-7)])],
            Averaging::Hierarchical,
        )
        .unwrap();
        assert_eq!(w.get("cz"), Some(1.0));
        assert_eq!(w.architecture(), Some("heron"));
    }

    #[test]
    fn configuration_errors() {
        assert!(matches!(
            configure_weights(&[], Averaging::Hierarchical),
            Err(CalibrationError::NoTables)
        ));
        let a = table("a", "eagle", &[("x", &[0], 1e-8)]);
        let b = table("b", "heron", &[("x", &[0], 1e-8)]);
        assert!(matches!(
            configure_weights(&[a, b], Averaging::Hierarchical),
            Err(CalibrationError::MixedArchitectures { .. })
        ));
        let z = table("z", "eagle", &[("rz", &[0], 0.0)]);
        assert!(matches!(
            configure_weights(&[z], Averaging::Hierarchical),
            Err(CalibrationError::NoPositiveMean)
        ));
    }

    #[test]
    fn hierarchical_versus_pooled() {
        // device a has three x entries, device b one
        let a = table(
            "a",
            "arch",
            &[
                ("x", &[0], 1.0),
                ("x", &[1], 1.0),
                ("x", &[2], 1.0),
                ("cz", &[0, 1], 4.0),
            ],
        );
        let b = table("b", "arch", &[("x", &[0], 3.0), ("cz", &[0, 1], 4.0)]);
        let h = configure_weights(&[a.clone(), b.clone()], Averaging::Hierarchical).unwrap();
        assert_eq!(h.get("x"), Some(0.5));
        let p = configure_weights(&[a, b], Averaging::Pooled).unwrap();
        assert_eq!(p.get("x"), Some(1.5 / 4.0));
    }

    #[test]
    fn gate_missing_from_a_device() {
        let a = table("a", "arch", &[("x", &[0], 1.0), ("cz", &[0, 1], 4.0)]);
        let b = table("b", "arch", &[("cz", &[0, 1], 4.0)]);
        let w = configure_weights(&[a, b], Averaging::Hierarchical).unwrap();
        assert_eq!(w.get("x"), Some(0.25));
    }
}
