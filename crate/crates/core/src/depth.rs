//! Traditional, multi-qubit and gate-aware depth.
//!
//! All three metrics are the same ASAP sweep: each counted gate lifts its
//! operands to `max(operand depths) + increment`, and the depth is the largest
//! per-qubit value at the end. Only the increment differs.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::Add;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::circuit::{Circuit, Gate, GateKind};

/// How barriers take part in the sweep. Delays are always skipped by the
/// depth metrics.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BarrierMode {
    /// Barriers are ignored entirely.
    #[default]
    Skip,
    /// Barriers lift their operands to the operands' common maximum without
    /// adding anything.
    Sync,
}

impl FromStr for BarrierMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "skip" => Ok(BarrierMode::Skip),
            "sync" => Ok(BarrierMode::Sync),
            other => Err(format!("unknown barrier mode `{other}` (expected skip or sync)")),
        }
    }
}

/// Running depth of every qubit during a sweep.
#[derive(Debug, Clone)]
pub struct QubitDepthState<T> {
    depths: Vec<T>,
}

impl<T> QubitDepthState<T>
where
    T: Copy + PartialOrd + Add<Output = T> + Default,
{
    pub fn new(num_qubits: usize) -> Self {
        Self {
            depths: vec![T::default(); num_qubits],
        }
    }

    fn ensure(&mut self, qubit: usize) {
        if qubit >= self.depths.len() {
            self.depths.resize(qubit + 1, T::default());
        }
    }

    /// Largest current depth among `qubits`.
    pub fn frontier(&mut self, qubits: &[usize]) -> T {
        let mut front = T::default();
        for &q in qubits {
            self.ensure(q);
            if self.depths[q] > front {
                front = self.depths[q];
            }
        }
        front
    }

    /// Applies one gate: every operand moves to `frontier + increment`.
    pub fn advance(&mut self, qubits: &[usize], increment: T) {
        let next = self.frontier(qubits) + increment;
        for &q in qubits {
            self.depths[q] = next;
        }
    }

    /// Adds `increment` to each operand independently.
    pub fn advance_each(&mut self, qubits: &[usize], increment: T) {
        for &q in qubits {
            self.ensure(q);
            self.depths[q] = self.depths[q] + increment;
        }
    }

    pub fn get(&self, qubit: usize) -> T {
        self.depths.get(qubit).copied().unwrap_or_default()
    }

    pub fn max(&self) -> T {
        self.depths
            .iter()
            .copied()
            .fold(T::default(), |acc, d| if d > acc { d } else { acc })
    }
}

/// What a non-barrier gate does to the sweep.
pub(crate) enum Step<T> {
    Skip,
    Advance(T),
    AdvanceEach(T),
}

/// Runs the sweep, asking `step` how to treat every gate except barriers,
/// which are handled according to `barrier`.
pub(crate) fn sweep<T, E, F>(circuit: &Circuit, barrier: BarrierMode, mut step: F) -> Result<T, E>
where
    T: Copy + PartialOrd + Add<Output = T> + Default,
    F: FnMut(usize, &Gate) -> Result<Step<T>, E>,
{
    let mut state = QubitDepthState::new(circuit.register_width());
    for (index, gate) in circuit.gates().iter().enumerate() {
        if gate.kind == GateKind::Barrier {
            if barrier == BarrierMode::Sync {
                state.advance(&gate.qubits, T::default());
            }
            continue;
        }
        match step(index, gate)? {
            Step::Skip => {}
            Step::Advance(inc) => state.advance(&gate.qubits, inc),
            Step::AdvanceEach(inc) => state.advance_each(&gate.qubits, inc),
        }
    }
    Ok(state.max())
}

fn counted(gate: &Gate) -> bool {
    !gate.kind.is_directive()
}

pub fn traditional_depth(circuit: &Circuit) -> usize {
    traditional_depth_with(circuit, BarrierMode::Skip)
}

pub fn traditional_depth_with(circuit: &Circuit, barrier: BarrierMode) -> usize {
    let result: Result<usize, std::convert::Infallible> = sweep(circuit, barrier, |_, g| {
        Ok(if counted(g) { Step::Advance(1) } else { Step::Skip })
    });
    result.unwrap_or_else(|e| match e {})
}

/// Depth counting only multi-qubit unitaries. Single-qubit gates and
/// measurements still join their operands' depths, they just add nothing.
pub fn multiqubit_depth(circuit: &Circuit) -> usize {
    multiqubit_depth_with(circuit, BarrierMode::Skip)
}

pub fn multiqubit_depth_with(circuit: &Circuit, barrier: BarrierMode) -> usize {
    let result: Result<usize, std::convert::Infallible> = sweep(circuit, barrier, |_, g| {
        Ok(if !counted(g) {
            Step::Skip
        } else if g.is_multi_qubit() {
            Step::Advance(1)
        } else {
            Step::Advance(0)
        })
    });
    result.unwrap_or_else(|e| match e {})
}

pub fn gate_aware_depth(circuit: &Circuit, weights: &WeightMap) -> Result<f64, DepthError> {
    gate_aware_depth_with(circuit, weights, BarrierMode::Skip)
}

pub fn gate_aware_depth_with(circuit: &Circuit, weights: &WeightMap, barrier: BarrierMode) -> Result<f64, DepthError> {
    sweep(circuit, barrier, |position, g| {
        if !counted(g) {
            return Ok(Step::Skip);
        }
        weights
            .get(&g.name)
            .map(Step::Advance)
            .ok_or_else(|| DepthError::MissingWeight {
                gate: g.name.clone(),
                position,
            })
    })
}

/// Gate-aware depth of many circuits in parallel; results keep input order.
pub fn gate_aware_depths(
    circuits: &[Circuit],
    weights: &WeightMap,
    barrier: BarrierMode,
) -> Vec<Result<f64, DepthError>> {
    circuits
        .par_iter()
        .map(|c| gate_aware_depth_with(c, weights, barrier))
        .collect()
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DepthError {
    #[error("no weight for gate `{gate}` (gate {position})")]
    MissingWeight { gate: String, position: usize },
    #[error("gate-aware depth needs a weight map")]
    WeightsRequired,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum WeightError {
    #[error("weight for `{gate}` must be finite and non-negative, got {value}")]
    Invalid { gate: String, value: f64 },
    #[error("invalid weight map JSON: {0}")]
    Json(String),
}

/// Gate name to dimensionless weight. Keys are case-sensitive.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(try_from = "WeightMapFile", into = "WeightMapFile")]
pub struct WeightMap {
    architecture: Option<String>,
    weights: BTreeMap<String, f64>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct WeightMapFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    architecture: Option<String>,
    weights: BTreeMap<String, f64>,
}

impl TryFrom<WeightMapFile> for WeightMap {
    type Error = WeightError;

    fn try_from(file: WeightMapFile) -> Result<Self, Self::Error> {
        let mut map = WeightMap::new(file.architecture);
        for (gate, w) in file.weights {
            map.insert(gate, w)?;
        }
        Ok(map)
    }
}

impl From<WeightMap> for WeightMapFile {
    fn from(map: WeightMap) -> Self {
        WeightMapFile {
            architecture: map.architecture,
            weights: map.weights,
        }
    }
}

impl WeightMap {
    pub fn new(architecture: Option<String>) -> Self {
        Self {
            architecture,
            weights: BTreeMap::new(),
        }
    }

    pub fn from_pairs<I, S>(pairs: I) -> Result<Self, WeightError>
    where
        I: IntoIterator<Item = (S, f64)>,
        S: Into<String>,
    {
        let mut map = WeightMap::default();
        for (gate, w) in pairs {
            map.insert(gate, w)?;
        }
        Ok(map)
    }

    pub fn with_architecture(mut self, architecture: impl Into<String>) -> Self {
        self.architecture = Some(architecture.into());
        self
    }

    pub fn insert(&mut self, gate: impl Into<String>, weight: f64) -> Result<(), WeightError> {
        let gate = gate.into();
        if !weight.is_finite() || weight < 0.0 {
            return Err(WeightError::Invalid { gate, value: weight });
        }
        self.weights.insert(gate, weight);
        Ok(())
    }

    pub fn get(&self, gate: &str) -> Option<f64> {
        self.weights.get(gate).copied()
    }

    pub fn architecture(&self) -> Option<&str> {
        self.architecture.as_deref()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, f64)> {
        self.weights.iter().map(|(k, &v)| (k.as_str(), v))
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn from_json_str(text: &str) -> Result<Self, WeightError> {
        serde_json::from_str(text).map_err(|e| WeightError::Json(e.to_string()))
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("weight maps always serialize")
    }
}

/// The three depth metrics by name.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Metric {
    #[serde(rename = "traditional")]
    Traditional,
    #[serde(rename = "multiqubit")]
    MultiQubit,
    #[serde(rename = "gateaware")]
    GateAware,
}

impl Metric {
    pub const ALL: [Metric; 3] = [Metric::Traditional, Metric::MultiQubit, Metric::GateAware];

    pub fn name(self) -> &'static str {
        match self {
            Metric::Traditional => "traditional",
            Metric::MultiQubit => "multiqubit",
            Metric::GateAware => "gateaware",
        }
    }

    /// Key used for this metric's value in JSON output.
    pub fn field(self) -> &'static str {
        match self {
            Metric::Traditional => "traditional_depth",
            Metric::MultiQubit => "multiqubit_depth",
            Metric::GateAware => "gate_aware_depth",
        }
    }

    pub fn evaluate(
        self,
        circuit: &Circuit,
        weights: Option<&WeightMap>,
        barrier: BarrierMode,
    ) -> Result<f64, DepthError> {
        match self {
            Metric::Traditional => Ok(traditional_depth_with(circuit, barrier) as f64),
            Metric::MultiQubit => Ok(multiqubit_depth_with(circuit, barrier) as f64),
            Metric::GateAware => {
                let weights = weights.ok_or(DepthError::WeightsRequired)?;
                gate_aware_depth_with(circuit, weights, barrier)
            }
        }
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Metric {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "traditional" => Ok(Metric::Traditional),
            "multiqubit" | "multi-qubit" => Ok(Metric::MultiQubit),
            "gateaware" | "gate-aware" => Ok(Metric::GateAware),
            other => Err(format!(
                "unknown metric `{other}` (expected traditional, multiqubit or gateaware)"
            )),
        }
    }
}
