//! Gate-list intermediate representation shared by every analysis.
//!
//! A [`Circuit`] is an ordered list of [`Gate`]s over a flat qubit register.
//! List order is execution order on each qubit, so the list is always a valid
//! topological order of the logical-dependency DAG.

use std::fmt;

use serde::{Deserialize, Serialize};

/// What a gate is, as far as the metrics care.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GateKind {
    Unitary,
    Measure,
    Barrier,
    Delay,
}

impl GateKind {
    /// Barriers and delays are scheduling directives rather than operations.
    pub fn is_directive(self) -> bool {
        matches!(self, GateKind::Barrier | GateKind::Delay)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Gate {
    pub name: String,
    pub qubits: Vec<usize>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub params: Vec<f64>,
    pub kind: GateKind,
}

impl Gate {
    /// A unitary gate without parameters.
    pub fn new(name: impl Into<String>, qubits: impl Into<Vec<usize>>) -> Self {
        Self {
            name: name.into(),
            qubits: qubits.into(),
            params: Vec::new(),
            kind: GateKind::Unitary,
        }
    }

    pub fn with_params(mut self, params: impl Into<Vec<f64>>) -> Self {
        self.params = params.into();
        self
    }

    pub fn measure(qubit: usize) -> Self {
        Self {
            name: "measure".to_owned(),
            qubits: vec![qubit],
            params: Vec::new(),
            kind: GateKind::Measure,
        }
    }

    pub fn barrier(qubits: impl Into<Vec<usize>>) -> Self {
        Self {
            name: "barrier".to_owned(),
            qubits: qubits.into(),
            params: Vec::new(),
            kind: GateKind::Barrier,
        }
    }

    /// A delay of `seconds` on a single qubit.
    pub fn delay(qubit: usize, seconds: f64) -> Self {
        Self {
            name: "delay".to_owned(),
            qubits: vec![qubit],
            params: vec![seconds],
            kind: GateKind::Delay,
        }
    }

    /// True for unitary gates acting on two or more qubits. Directives and
    /// measurements never count as multi-qubit.
    pub fn is_multi_qubit(&self) -> bool {
        self.kind == GateKind::Unitary && self.qubits.len() >= 2
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name)?;
        if !self.params.is_empty() {
            let params: Vec<String> = self.params.iter().map(f64::to_string).collect();
            write!(f, "({})", params.join(","))?;
        }
        let qubits: Vec<String> = self.qubits.iter().map(usize::to_string).collect();
        write!(f, "@[{}]", qubits.join(","))
    }
}

/// Free-function form of [`Gate::is_multi_qubit`].
pub fn is_multi_qubit(gate: &Gate) -> bool {
    gate.is_multi_qubit()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ViolationKind {
    EmptyOperands,
    QubitOutOfRange { qubit: usize, num_qubits: usize },
    DuplicateOperand { qubit: usize },
    MeasureArity { operands: usize },
    BarrierWithParams,
}

/// One invariant violation, located by gate position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub gate_index: usize,
    pub kind: ViolationKind,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "gate {}: ", self.gate_index)?;
        match &self.kind {
            ViolationKind::EmptyOperands => write!(f, "gate has no qubit operands"),
            ViolationKind::QubitOutOfRange { qubit, num_qubits } => {
                write!(f, "qubit {qubit} out of range for a {num_qubits}-qubit circuit")
            }
            ViolationKind::DuplicateOperand { qubit } => {
                write!(f, "qubit {qubit} appears more than once")
            }
            ViolationKind::MeasureArity { operands } => {
                write!(f, "measure takes one qubit, got {operands}")
            }
            ViolationKind::BarrierWithParams => write!(f, "barrier cannot carry parameters"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Circuit {
    num_qubits: usize,
    gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(num_qubits: usize) -> Self {
        Self {
            num_qubits,
            gates: Vec::new(),
        }
    }

    /// Builds a circuit from an existing gate list. No validation happens
    /// here; call [`Circuit::validate`] before handing it to the metrics.
    pub fn from_gates(num_qubits: usize, gates: Vec<Gate>) -> Self {
        Self { num_qubits, gates }
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn push(&mut self, gate: Gate) -> &mut Self {
        self.gates.push(gate);
        self
    }

    /// Appends every gate of `other`, widening the register if needed.
    pub fn extend_with(&mut self, other: &Circuit) {
        self.num_qubits = self.num_qubits.max(other.num_qubits);
        self.gates.extend_from_slice(&other.gates);
    }

    /// Reports every invariant violation in gate order. An empty list means
    /// the circuit is well formed.
    pub fn violations(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        for (gate_index, gate) in self.gates.iter().enumerate() {
            let mut push = |kind| out.push(Violation { gate_index, kind });
            if gate.qubits.is_empty() {
                push(ViolationKind::EmptyOperands);
            }
            for (pos, &qubit) in gate.qubits.iter().enumerate() {
                if qubit >= self.num_qubits {
                    push(ViolationKind::QubitOutOfRange {
                        qubit,
                        num_qubits: self.num_qubits,
                    });
                }
                if gate.qubits[..pos].contains(&qubit) {
                    push(ViolationKind::DuplicateOperand { qubit });
                }
            }
            if gate.kind == GateKind::Measure && gate.qubits.len() != 1 {
                push(ViolationKind::MeasureArity {
                    operands: gate.qubits.len(),
                });
            }
            if gate.kind == GateKind::Barrier && !gate.params.is_empty() {
                push(ViolationKind::BarrierWithParams);
            }
        }
        out
    }

    pub fn validate(&self) -> Result<(), Vec<Violation>> {
        let violations = self.violations();
        if violations.is_empty() {
            Ok(())
        } else {
            Err(violations)
        }
    }

    /// One past the largest qubit index used, or `num_qubits` if larger.
    pub(crate) fn register_width(&self) -> usize {
        self.gates
            .iter()
            .flat_map(|g| g.qubits.iter().copied())
            .map(|q| q + 1)
            .max()
            .unwrap_or(0)
            .max(self.num_qubits)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn multi_qubit_classification() {
        assert!(Gate::new("cz", [0, 1]).is_multi_qubit());
        assert!(!Gate::new("x", [3]).is_multi_qubit());
        assert!(!Gate::barrier([0, 1, 2]).is_multi_qubit());
        assert!(!Gate::measure(0).is_multi_qubit());
        assert!(is_multi_qubit(&Gate::new("ccx", [0, 1, 2])));
    }

    #[test]
    fn empty_circuit_is_valid() {
        assert_eq!(Circuit::new(1).validate(), Ok(()));
    }

    #[test]
    fn out_of_range_operand() {
        let c = Circuit::from_gates(3, vec![Gate::new("x", [5])]);
        let v = c.validate().unwrap_err();
        assert_eq!(
            v,
            vec![Violation {
                gate_index: 0,
                kind: ViolationKind::QubitOutOfRange {
                    qubit: 5,
                    num_qubits: 3
                }
            }]
        );
    }

    #[test]
    fn duplicate_operand() {
        let c = Circuit::from_gates(3, vec![Gate::new("x", [0]), Gate::new("cz", [1, 1])]);
        let v = c.validate().unwrap_err();
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].gate_index, 1);
        assert_eq!(v[0].kind, ViolationKind::DuplicateOperand { qubit: 1 });
    }

    #[test]
    fn reports_every_violation() {
        let mut barrier = Gate::barrier([0]);
        barrier.params.push(1.0);
        let mut measure = Gate::measure(0);
        measure.qubits.push(1);
        let c = Circuit::from_gates(2, vec![Gate::new("x", Vec::new()), barrier, measure]);
        let kinds: Vec<_> = c.violations().into_iter().map(|v| v.kind).collect();
        assert_eq!(
            kinds,
            vec![
                ViolationKind::EmptyOperands,
                ViolationKind::BarrierWithParams,
                ViolationKind::MeasureArity { operands: 2 },
            ]
        );
    }

    #[test]
    fn appending_keeps_earlier_gates() {
        let mut c = Circuit::new(2);
        c.push(Gate::new("x", [0]));
        let before = c.gates()[0].clone();
        c.push(Gate::new("cz", [0, 1]));
        assert_eq!(c.gates()[0], before);
        assert_eq!(c, c.clone());
    }

    #[test]
    fn gate_display() {
        let g = Gate::new("rz", [2]).with_params([0.5]);
        assert_eq!(g.to_string(), "rz(0.5)@[2]");
    }
}
