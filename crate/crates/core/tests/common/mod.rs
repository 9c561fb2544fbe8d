//! Shared test helpers: random circuits and an explicit dependency-DAG
//! longest-path oracle that does not use the sweep.

#![allow(dead_code)]

use std::collections::BTreeMap;

use proptest::prelude::*;
use qdepth::{Circuit, DurationTable, Gate, GateKind, WeightMap};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const SINGLE: [&str; 3] = ["x", "sx", "rz"];
pub const DOUBLE: [&str; 2] = ["cz", "ecr"];
pub const TRIPLE: [&str; 1] = ["ccx"];
pub const ALL_NAMES: [&str; 7] = ["x", "sx", "rz", "cz", "ecr", "ccx", "measure"];

pub fn reference_circuit() -> Circuit {
    Circuit::from_gates(
        3,
        vec![
            Gate::new("cz", [0, 1]),
            Gate::new("x", [0]),
            Gate::new("x", [0]),
            Gate::new("x", [0]),
            Gate::new("x", [1]),
            Gate::new("cz", [1, 2]),
        ],
    )
}

fn distinct(rng: &mut impl Rng, n: usize, k: usize) -> Vec<usize> {
    let mut all: Vec<usize> = (0..n).collect();
    all.shuffle(rng);
    all.truncate(k);
    all
}

/// Random well-formed circuit; barriers only when `barriers` is set.
pub fn random_circuit(rng: &mut impl Rng, max_qubits: usize, max_gates: usize, barriers: bool) -> Circuit {
    let n = rng.gen_range(1..=max_qubits);
    let len = rng.gen_range(0..=max_gates);
    let mut c = Circuit::new(n);
    for _ in 0..len {
        let roll = rng.gen_range(0..100);
        let gate = if roll < 40 || n == 1 {
            let name = SINGLE[rng.gen_range(0..SINGLE.len())];
            Gate::new(name, [rng.gen_range(0..n)])
        } else if roll < 75 || n == 2 && roll < 90 {
            Gate::new(DOUBLE[rng.gen_range(0..DOUBLE.len())], distinct(rng, n, 2))
        } else if roll < 85 && n >= 3 {
            Gate::new(TRIPLE[0], distinct(rng, n, 3))
        } else if roll < 92 || !barriers {
            Gate::measure(rng.gen_range(0..n))
        } else {
            let k = rng.gen_range(1..=n);
            Gate::barrier(distinct(rng, n, k))
        };
        c.push(gate);
    }
    c
}

pub fn random_weights(rng: &mut impl Rng) -> WeightMap {
    WeightMap::from_pairs(ALL_NAMES.iter().map(|&n| (n, rng.gen_range(0.0..=1.0)))).unwrap()
}

/// Table with an exact entry for every location used by `c`; a random
/// subset of gates is left to defaults instead.
pub fn random_table(rng: &mut impl Rng, c: &Circuit) -> DurationTable {
    let mut t = DurationTable::new("rand", "arch");
    let mut via_default: BTreeMap<&str, bool> = BTreeMap::new();
    for name in ALL_NAMES {
        let use_default = rng.gen_bool(0.2);
        via_default.insert(name, use_default);
        if use_default {
            t.set_default(name, rng.gen_range(1e-9..1e-6)).unwrap();
        }
    }
    for g in c.gates() {
        if g.kind.is_directive() || via_default[g.name.as_str()] || t.entry(&g.name, &g.qubits).is_some() {
            continue;
        }
        t.insert(g.name.as_str(), g.qubits.clone(), rng.gen_range(1e-9..1e-6))
            .unwrap();
    }
    t
}

/// Explicit logical-dependency DAG: one node per timed gate, an edge from
/// the previous timed gate on each shared qubit.
pub struct DependencyDag {
    pub weights: Vec<f64>,
    pub successors: Vec<Vec<usize>>,
    pub has_predecessor: Vec<bool>,
}

impl DependencyDag {
    pub fn build(c: &Circuit, mut weight: impl FnMut(&Gate) -> f64) -> Self {
        let mut weights = Vec::new();
        let mut successors: Vec<Vec<usize>> = Vec::new();
        let mut has_predecessor = Vec::new();
        let mut last_on_qubit: BTreeMap<usize, usize> = BTreeMap::new();
        for g in c.gates() {
            if matches!(g.kind, GateKind::Barrier | GateKind::Delay) {
                continue;
            }
            let id = weights.len();
            weights.push(weight(g));
            successors.push(Vec::new());
            has_predecessor.push(false);
            for q in &g.qubits {
                if let Some(&prev) = last_on_qubit.get(q) {
                    if !successors[prev].contains(&id) {
                        successors[prev].push(id);
                    }
                    has_predecessor[id] = true;
                }
                last_on_qubit.insert(*q, id);
            }
        }
        Self {
            weights,
            successors,
            has_predecessor,
        }
    }

    /// Maximum weight over every source-to-sink path, by enumerating the
    /// paths one at a time.
    pub fn longest_path_by_enumeration(&self) -> f64 {
        let mut best = 0.0_f64;
        let mut stack: Vec<(usize, f64)> = (0..self.weights.len())
            .filter(|&v| !self.has_predecessor[v])
            .map(|v| (v, self.weights[v]))
            .collect();
        while let Some((v, sum)) = stack.pop() {
            if self.successors[v].is_empty() {
                best = best.max(sum);
            }
            for &s in &self.successors[v] {
                stack.push((s, sum + self.weights[s]));
            }
        }
        best
    }
}

pub fn oracle_gate_aware(c: &Circuit, w: &WeightMap) -> f64 {
    DependencyDag::build(c, |g| w.get(&g.name).unwrap()).longest_path_by_enumeration()
}

pub fn oracle_runtime(c: &Circuit, t: &DurationTable) -> f64 {
    DependencyDag::build(c, |g| t.lookup(&g.name, &g.qubits).unwrap()).longest_path_by_enumeration()
}

pub fn relative_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()) || a == b
}

pub fn corpus(seed: u64, count: usize, barriers: bool) -> Vec<Circuit> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| random_circuit(&mut rng, 8, 30, barriers)).collect()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Proptest strategy over random circuits (seeded through the rng above).
pub fn arb_circuit(barriers: bool) -> impl Strategy<Value = Circuit> {
    any::<u64>().prop_map(move |seed| random_circuit(&mut rng(seed), 8, 30, barriers))
}

pub fn arb_weights() -> impl Strategy<Value = WeightMap> {
    any::<u64>().prop_map(|seed| random_weights(&mut rng(seed)))
}
