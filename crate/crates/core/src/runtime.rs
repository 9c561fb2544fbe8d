//! Exact runtime under ASAP scheduling, using per-location gate durations.

use rayon::prelude::*;
use thiserror::Error;

use crate::calibration::DurationTable;
use crate::circuit::{Circuit, GateKind};
use crate::depth::{sweep, BarrierMode, Step};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RuntimeError {
    #[error("no duration for `{gate}` on qubits {qubits:?} (gate {position})")]
    Unresolved {
        gate: String,
        qubits: Vec<usize>,
        position: usize,
    },
    #[error("delay at gate {position} has no duration parameter")]
    DelayWithoutDuration { position: usize },
    #[error("delay at gate {position} has invalid duration {value}")]
    InvalidDelay { position: usize, value: f64 },
}

/// Runtime in seconds. Each gate starts once all its operands are free and
/// takes its table duration (exact location first, then the gate default).
/// A `delay` adds its first parameter, in seconds, to each operand.
pub fn estimate_runtime(circuit: &Circuit, table: &DurationTable) -> Result<f64, RuntimeError> {
    estimate_runtime_with(circuit, table, BarrierMode::Skip)
}

pub fn estimate_runtime_with(
    circuit: &Circuit,
    table: &DurationTable,
    barrier: BarrierMode,
) -> Result<f64, RuntimeError> {
    sweep(circuit, barrier, |position, gate| {
        if gate.kind == GateKind::Delay {
            let value = *gate
                .params
                .first()
                .ok_or(RuntimeError::DelayWithoutDuration { position })?;
            if !value.is_finite() || value < 0.0 {
                return Err(RuntimeError::InvalidDelay { position, value });
            }
            return Ok(Step::AdvanceEach(value));
        }
        table
            .lookup(&gate.name, &gate.qubits)
            .map(Step::Advance)
            .ok_or_else(|| RuntimeError::Unresolved {
                gate: gate.name.clone(),
                qubits: gate.qubits.clone(),
                position,
            })
    })
}

/// Runtimes of many circuits against one table; results keep input order.
pub fn estimate_runtimes(
    circuits: &[Circuit],
    table: &DurationTable,
    barrier: BarrierMode,
) -> Vec<Result<f64, RuntimeError>> {
    circuits
        .par_iter()
        .map(|c| estimate_runtime_with(c, table, barrier))
        .collect()
}
