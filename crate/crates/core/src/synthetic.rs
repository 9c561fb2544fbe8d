//! Synthetic compiled-circuit corpora and device calibrations.
//!
//! A base circuit is a random sequence of logical single-qubit rotations and
//! entanglers. Each [`CompilerStyle`] lowers it to native gates differently:
//! how many physical gates a rotation costs, how much single-qubit dressing
//! surrounds an entangler, and how often routing inserts a SWAP. The
//! resulting versions differ in both single- and two-qubit content, which is
//! what separates the depth metrics.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::calibration::DurationTable;
use crate::circuit::{Circuit, Gate};
use crate::compare::BaseCircuit;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum LogicalOp {
    Rotation(usize),
    Entangle(usize, usize),
}

/// How one compiler lowers logical operations to native gates.
#[derive(Debug, Clone, PartialEq)]
pub struct CompilerStyle {
    pub name: String,
    /// Native sequence emitted for one logical rotation.
    pub rotation: Vec<&'static str>,
    /// Probability that a rotation is merged away entirely.
    pub merge_probability: f64,
    /// Single-qubit gates emitted on each operand before an entangler.
    pub dressing: Vec<&'static str>,
    /// Probability that an entangler first needs a routing SWAP.
    pub swap_probability: f64,
}

impl CompilerStyle {
    /// Four lowering styles with distinct trade-offs between single-qubit
    /// overhead and routing overhead.
    pub fn standard_set() -> Vec<CompilerStyle> {
        vec![
            CompilerStyle {
                name: "greedy".into(),
                rotation: vec!["rz", "sx", "rz", "sx", "rz"],
                merge_probability: 0.0,
                dressing: vec!["sx", "x"],
                swap_probability: 0.05,
            },
            CompilerStyle {
                name: "lookahead".into(),
                rotation: vec!["rz", "sx", "rz"],
                merge_probability: 0.1,
                dressing: vec!["x"],
                swap_probability: 0.25,
            },
            CompilerStyle {
                name: "peephole".into(),
                rotation: vec!["sx", "rz"],
                merge_probability: 0.35,
                dressing: vec!["sx", "sx", "x"],
                swap_probability: 0.15,
            },
            CompilerStyle {
                name: "router".into(),
                rotation: vec!["rz", "sx", "rz", "sx"],
                merge_probability: 0.2,
                dressing: Vec::new(),
                swap_probability: 0.35,
            },
        ]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CorpusConfig {
    pub seed: u64,
    pub bases: usize,
    pub min_qubits: usize,
    pub max_qubits: usize,
    pub logical_ops: usize,
    /// Fraction of logical operations that are entanglers.
    pub entangler_fraction: f64,
    /// Native two-qubit gate name (`ecr`, `cz`, ...).
    pub two_qubit_gate: String,
    pub compilers: Vec<CompilerStyle>,
}

impl Default for CorpusConfig {
    fn default() -> Self {
        Self {
            seed: 7,
            bases: 15,
            min_qubits: 4,
            max_qubits: 8,
            logical_ops: 40,
            entangler_fraction: 0.4,
            two_qubit_gate: "ecr".into(),
            compilers: CompilerStyle::standard_set(),
        }
    }
}

fn logical_circuit(rng: &mut ChaCha8Rng, qubits: usize, ops: usize, entangler_fraction: f64) -> Vec<LogicalOp> {
    (0..ops)
        .map(|_| {
            if qubits >= 2 && rng.gen_bool(entangler_fraction) {
                let a = rng.gen_range(0..qubits);
                let mut b = rng.gen_range(0..qubits - 1);
                if b >= a {
                    b += 1;
                }
                LogicalOp::Entangle(a, b)
            } else {
                LogicalOp::Rotation(rng.gen_range(0..qubits))
            }
        })
        .collect()
}

fn lower(
    ops: &[LogicalOp],
    qubits: usize,
    style: &CompilerStyle,
    two_qubit_gate: &str,
    rng: &mut ChaCha8Rng,
) -> Circuit {
    let mut c = Circuit::new(qubits);
    let entangle = |c: &mut Circuit, a: usize, b: usize| {
        for q in [a, b] {
            for &g in &style.dressing {
                c.push(Gate::new(g, [q]));
            }
        }
        c.push(Gate::new(two_qubit_gate, [a, b]));
    };
    for &op in ops {
        match op {
            LogicalOp::Rotation(q) => {
                if !rng.gen_bool(style.merge_probability) {
                    for &g in &style.rotation {
                        let gate = Gate::new(g, [q]);
                        c.push(if g == "rz" {
                            gate.with_params([rng.gen_range(-3.0..3.0)])
                        } else {
                            gate
                        });
                    }
                }
            }
            LogicalOp::Entangle(a, b) => {
                if qubits > 2 && rng.gen_bool(style.swap_probability) {
                    let mut other = rng.gen_range(0..qubits - 2);
                    for taken in [a.min(b), a.max(b)] {
                        if other >= taken {
                            other += 1;
                        }
                    }
                    // SWAP as three entanglers with alternating direction
                    entangle(&mut c, a, other);
                    entangle(&mut c, other, a);
                    entangle(&mut c, a, other);
                }
                entangle(&mut c, a, b);
            }
        }
    }
    c
}

/// Base circuits, each compiled by every style in `config.compilers`.
pub fn generate_corpus(config: &CorpusConfig) -> Vec<BaseCircuit> {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    (0..config.bases)
        .map(|i| {
            let qubits = rng.gen_range(config.min_qubits..=config.max_qubits);
            let ops = logical_circuit(&mut rng, qubits, config.logical_ops, config.entangler_fraction);
            let versions = config
                .compilers
                .iter()
                .map(|style| {
                    let mut crng = ChaCha8Rng::seed_from_u64(rng.gen());
                    (
                        style.name.clone(),
                        lower(&ops, qubits, style, &config.two_qubit_gate, &mut crng),
                    )
                })
                .collect();
            BaseCircuit {
                name: format!("base{i:02}_q{qubits}"),
                versions,
            }
        })
        .collect()
}

/// Device calibration profile: mean gate times and per-location spread.
#[derive(Debug, Clone, PartialEq)]
pub struct DeviceProfile {
    pub device: String,
    pub architecture: String,
    pub two_qubit_gate: String,
    pub two_qubit_seconds: f64,
    /// Physical single-qubit gate time as a fraction of the two-qubit time.
    pub single_qubit_ratio: f64,
    pub measure_seconds: Option<f64>,
    /// Relative half-width of the uniform per-location jitter.
    pub jitter: f64,
    pub num_qubits: usize,
    pub seed: u64,
}

/// A full table over every qubit and every ordered qubit pair. `rz` is
/// virtual and recorded with duration 0.
pub fn device_table(profile: &DeviceProfile) -> DurationTable {
    let mut rng = ChaCha8Rng::seed_from_u64(profile.seed);
    let mut jitter = |base: f64| {
        if profile.jitter > 0.0 {
            base * (1.0 + rng.gen_range(-profile.jitter..=profile.jitter))
        } else {
            base
        }
    };
    let single = profile.two_qubit_seconds * profile.single_qubit_ratio;
    let mut table = DurationTable::new(&profile.device, &profile.architecture);
    for q in 0..profile.num_qubits {
        for g in ["sx", "x"] {
            table.insert(g, [q], jitter(single)).expect("fresh key");
        }
        table.insert("rz", [q], 0.0).expect("fresh key");
        if let Some(m) = profile.measure_seconds {
            table.insert("measure", [q], jitter(m)).expect("fresh key");
        }
    }
    for a in 0..profile.num_qubits {
        for b in 0..profile.num_qubits {
            if a != b {
                let d = jitter(profile.two_qubit_seconds);
                table
                    .insert(profile.two_qubit_gate.as_str(), [a, b], d)
                    .expect("fresh key");
            }
        }
    }
    table
}
