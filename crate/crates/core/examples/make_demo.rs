//! Writes the bundled demonstration dataset: synthetic Eagle- and
//! Heron-like calibrations for three devices each, plus fifteen base
//! circuits compiled four ways for each architecture.
//!
//! Usage: cargo run -p qdepth --example make_demo -- [OUT_DIR]

use std::fs;
use std::path::Path;

use qdepth::synthetic::{device_table, generate_corpus, CorpusConfig, DeviceProfile};
use qdepth::{configure_weights, unparse, Averaging};
use serde_json::json;

struct Architecture {
    name: &'static str,
    two_qubit_gate: &'static str,
    two_qubit_seconds: f64,
    single_qubit_ratio: f64,
    devices: [&'static str; 3],
    seed: u64,
}

const ARCHITECTURES: [Architecture; 2] = [
    Architecture {
        name: "eagle",
        two_qubit_gate: "ecr",
        two_qubit_seconds: 5.33e-7,
        single_qubit_ratio: 0.0942,
        devices: ["eagle-a", "eagle-b", "eagle-c"],
        seed: 7,
    },
    Architecture {
        name: "heron",
        two_qubit_gate: "cz",
        two_qubit_seconds: 6.8e-8,
        single_qubit_ratio: 0.483,
        devices: ["heron-a", "heron-b", "heron-c"],
        seed: 11,
    },
];

fn write(path: &Path, contents: &str) -> std::io::Result<()> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir)?;
    }
    fs::write(path, contents)
}

fn main() -> std::io::Result<()> {
    let out = std::env::args().nth(1).unwrap_or_else(|| "demo".to_owned());
    let out = Path::new(&out);

    for arch in &ARCHITECTURES {
        let root = out.join(arch.name);
        let config = CorpusConfig {
            seed: arch.seed,
            two_qubit_gate: arch.two_qubit_gate.into(),
            ..CorpusConfig::default()
        };
        let corpus = generate_corpus(&config);

        let mut bases = Vec::new();
        for base in &corpus {
            let mut versions = Vec::new();
            for (compiler, circuit) in &base.versions {
                let rel = format!("circuits/{}/{compiler}.qasm", base.name);
                write(&root.join(&rel), &unparse(circuit))?;
                versions.push(json!({ "compiler": compiler, "file": rel }));
            }
            bases.push(json!({ "name": base.name, "versions": versions }));
        }
        let manifest = serde_json::to_string_pretty(&json!({ "bases": bases }))?;
        write(&root.join("manifest.json"), &manifest)?;

        let mut tables = Vec::new();
        for (i, device) in arch.devices.iter().enumerate() {
            let table = device_table(&DeviceProfile {
                device: (*device).into(),
                architecture: arch.name.into(),
                two_qubit_gate: arch.two_qubit_gate.into(),
                two_qubit_seconds: arch.two_qubit_seconds,
                single_qubit_ratio: arch.single_qubit_ratio,
                measure_seconds: None,
                jitter: 0.15,
                num_qubits: config.max_qubits,
                seed: arch.seed * 100 + i as u64,
            });
            write(&root.join(format!("devices/{device}.json")), &table.to_json_string())?;
            tables.push(table);
        }
        let weights = configure_weights(&tables, Averaging::Hierarchical).expect("demo tables are consistent");
        write(&root.join("weights.json"), &weights.to_json_string())?;
    }

    write(
        &out.join("reference.qasm"),
        "OPENQASM 2.0;\ninclude \"qelib1.inc\";\nqreg q[3];\ncz q[0],q[1];\nx q[0];\nx q[0];\nx q[0];\nx q[1];\ncz q[1],q[2];\n",
    )?;
    write(
        &out.join("reference-weights.json"),
        &serde_json::to_string_pretty(&json!({ "architecture": "example", "weights": { "cz": 1.0, "x": 0.1 } }))?,
    )?;
    println!("wrote demo dataset to {}", out.display());
    Ok(())
}
