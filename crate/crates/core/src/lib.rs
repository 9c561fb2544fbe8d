//! Circuit depth metrics and runtime analysis for compiled quantum circuits.
//!
//! * [`circuit`]: gate-list IR.
//! * [`qasm`]: OpenQASM 2.0 subset parser and printer.
//! * [`depth`]: traditional, multi-qubit and gate-aware depth.
//! * [`calibration`]: device gate-duration tables and weight configuration.
//! * [`runtime`]: exact runtime from per-location durations.
//! * [`compare`]: accuracy of the metrics across compiled versions.
//! * [`report`]: JSON and CSV renderings of comparison and sweep results.
//! * [`manifest`]: batch manifests of compiled-version files.
//! * [`synthetic`]: generated compiled-version corpora and calibrations.

// Error variants carry the base, compiler and device names for diagnostics.
#![allow(clippy::result_large_err)]

pub mod calibration;
pub mod circuit;
pub mod compare;
pub mod depth;
pub mod manifest;
pub mod qasm;
pub mod report;
pub mod runtime;
pub mod synthetic;

pub use calibration::{configure_weights, summarize, Averaging, CalibrationError, DurationTable, GateTimeSummary};
pub use circuit::{is_multi_qubit, Circuit, Gate, GateKind, Violation, ViolationKind};
pub use depth::{gate_aware_depth, multiqubit_depth, traditional_depth, BarrierMode, DepthError, Metric, WeightMap};
pub use manifest::{Manifest, ManifestError};
pub use qasm::{parse, unparse, ParseDiagnostic, ParseErrors};
pub use runtime::{estimate_runtime, RuntimeError};
