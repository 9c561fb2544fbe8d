use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use qdepth::synthetic::{device_table, generate_corpus, CorpusConfig, DeviceProfile};
use qdepth::{unparse, DurationTable};
use serde_json::{json, Value};
use tempfile::TempDir;

const REF: &str = "OPENQASM 2.0;\ninclude \"qelib1.inc\";\nqreg q[3];\ncz q[0],q[1];\nx q[0];\nx q[0];\nx q[0];\nx q[1];\ncz q[1],q[2];\n";

fn run(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qdepth"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write(dir: &Path, name: &str, contents: &str) -> PathBuf {
    let path = dir.join(name);
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent).unwrap();
    }
    fs::write(&path, contents).unwrap();
    path
}

fn profile(device: &str, arch: &str, gate: &str, ratio: f64, jitter: f64, seed: u64) -> DeviceProfile {
    DeviceProfile {
        device: device.into(),
        architecture: arch.into(),
        two_qubit_gate: gate.into(),
        two_qubit_seconds: 5.33e-7,
        single_qubit_ratio: ratio,
        measure_seconds: None,
        jitter,
        num_qubits: 8,
        seed,
    }
}

/// Writes a synthetic manifest of `bases` x `versions` and returns its path.
fn synthetic_manifest(dir: &Path, bases: usize, versions: usize) -> PathBuf {
    let mut config = CorpusConfig {
        bases,
        ..CorpusConfig::default()
    };
    config.compilers.truncate(versions);
    let mut entries = Vec::new();
    for base in generate_corpus(&config) {
        let mut vs = Vec::new();
        for (compiler, circuit) in &base.versions {
            let rel = format!("circuits/{}/{compiler}.qasm", base.name);
            write(dir, &rel, &unparse(circuit));
            vs.push(json!({ "compiler": compiler, "file": rel }));
        }
        entries.push(json!({ "name": base.name, "versions": vs }));
    }
    write(dir, "manifest.json", &json!({ "bases": entries }).to_string())
}

#[test]
fn depth_reference_values() {
    let tmp = TempDir::new().unwrap();
    write(tmp.path(), "ref.qasm", REF);
    write(
        tmp.path(),
        "eagle.json",
        r#"{"architecture":"example","weights":{"cz":1.0,"x":0.1}}"#,
    );

    let o = run(tmp.path(), &["depth", "--metric", "traditional", "ref.qasm"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "{\"file\":\"ref.qasm\",\"traditional_depth\":4}\n");

    let o = run(
        tmp.path(),
        &["depth", "--metric", "gateaware", "--weights", "eagle.json", "ref.qasm"],
    );
    assert_eq!(stdout(&o), "{\"file\":\"ref.qasm\",\"gate_aware_depth\":2.1}\n");

    let o = run(
        tmp.path(),
        &["depth", "--weights", "eagle.json", "ref.qasm", "ref.qasm"],
    );
    let lines: Vec<Value> = stdout(&o).lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(lines.len(), 2);
    assert_eq!(lines[0]["multiqubit_depth"], 2);
    assert_eq!(lines[1]["gate_aware_depth"], 2.1);
}

#[test]
fn depth_exit_codes() {
    let tmp = TempDir::new().unwrap();
    write(tmp.path(), "ref.qasm", REF);
    write(tmp.path(), "bad.qasm", "OPENQASM 2.0;\nqreg q[1];\nfrobnicate q[0];\n");
    write(tmp.path(), "partial.json", r#"{"weights":{"cz":1.0}}"#);
    write(tmp.path(), "broken.json", r#"{"weights":{"cz":-1.0}}"#);

    assert_eq!(
        run(tmp.path(), &["depth", "--metric", "gateaware", "ref.qasm"])
            .status
            .code(),
        Some(3)
    );
    let o = run(
        tmp.path(),
        &[
            "depth",
            "--metric",
            "gateaware",
            "--weights",
            "partial.json",
            "ref.qasm",
        ],
    );
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains('x'));
    let o = run(tmp.path(), &["depth", "bad.qasm"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("3:1"));
    assert_eq!(run(tmp.path(), &["depth", "missing.qasm"]).status.code(), Some(2));
    assert_eq!(
        run(tmp.path(), &["depth", "--weights", "broken.json", "ref.qasm"])
            .status
            .code(),
        Some(4)
    );
}

#[test]
fn weights_from_tables() {
    let tmp = TempDir::new().unwrap();
    let mut names = Vec::new();
    for d in 0..3 {
        let name = format!("eagle{d}.json");
        device_table(&profile(&format!("eagle{d}"), "eagle", "ecr", 0.0942, 0.0, d))
            .save(tmp.path().join(&name))
            .unwrap();
        names.push(name);
    }
    device_table(&profile("heron0", "heron", "cz", 0.483, 0.0, 9))
        .save(tmp.path().join("heron0.json"))
        .unwrap();

    let mut args = vec!["weights", "--out", "w.json"];
    args.extend(names.iter().map(String::as_str));
    let o = run(tmp.path(), &args);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("ecr"));
    let w: Value = serde_json::from_str(&fs::read_to_string(tmp.path().join("w.json")).unwrap()).unwrap();
    assert_eq!(w["architecture"], "eagle");
    assert_eq!(w["weights"]["ecr"], 1.0);
    assert_eq!(w["weights"]["rz"], 0.0);
    let sx = w["weights"]["sx"].as_f64().unwrap();
    assert!((sx - 0.0942).abs() < 5e-5, "{sx}");

    let o = run(tmp.path(), &["weights", "heron0.json"]);
    let w: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(w["weights"]["cz"], 1.0);

    let o = run(tmp.path(), &["weights", "eagle0.json", "heron0.json"]);
    assert_eq!(o.status.code(), Some(4));
    assert_eq!(run(tmp.path(), &["weights", "nope.json"]).status.code(), Some(4));
}

#[test]
fn estimate_runtimes() {
    let tmp = TempDir::new().unwrap();
    write(tmp.path(), "empty.qasm", "OPENQASM 2.0;\nqreg q[2];\n");
    write(tmp.path(), "ecr.qasm", "OPENQASM 2.0;\nqreg q[2];\necr q[0],q[1];\n");
    write(
        tmp.path(),
        "reversed.qasm",
        "OPENQASM 2.0;\nqreg q[2];\necr q[1],q[0];\n",
    );
    let mut table = DurationTable::new("dev", "eagle");
    table.insert("ecr", [0, 1], 5.33e-7).unwrap();
    table.save(tmp.path().join("t.json")).unwrap();

    let o = run(
        tmp.path(),
        &["estimate", "--durations", "t.json", "empty.qasm", "ecr.qasm"],
    );
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(
        stdout(&o),
        "{\"file\":\"empty.qasm\",\"runtime_s\":0.0}\n{\"file\":\"ecr.qasm\",\"runtime_s\":5.33e-7}\n"
    );

    let o = run(tmp.path(), &["estimate", "--durations", "t.json", "reversed.qasm"]);
    assert_eq!(o.status.code(), Some(3));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("ecr") && err.contains("[1, 0]"), "{err}");
}

#[test]
fn compare_pair_counts_and_reports() {
    let tmp = TempDir::new().unwrap();
    let dir = tmp.path();
    synthetic_manifest(dir, 15, 4);
    device_table(&profile("dev", "eagle", "ecr", 0.1, 0.1, 1))
        .save(dir.join("t.json"))
        .unwrap();
    write(dir, "w.json", r#"{"weights":{"ecr":1.0,"rz":0.0,"sx":0.1,"x":0.1}}"#);

    let o = run(
        dir,
        &[
            "compare",
            "manifest.json",
            "--durations",
            "t.json",
            "--weights",
            "w.json",
            "--out",
            "out",
        ],
    );
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = fs::read_to_string(dir.join("out/pairs.csv")).unwrap();
    for metric in ["traditional", "multiqubit", "gateaware"] {
        let rows = csv.lines().filter(|l| l.contains(&format!(",{metric},"))).count();
        assert_eq!(rows, 90, "{metric}");
    }
    let summary: Value = serde_json::from_str(&fs::read_to_string(dir.join("out/summary.json")).unwrap()).unwrap();
    assert!(summary["metadata"].is_object());
    let report = fs::read(dir.join("out/report.json")).unwrap();

    let o = run(
        dir,
        &[
            "compare",
            "manifest.json",
            "--durations",
            "t.json",
            "--weights",
            "w.json",
            "--out",
            "again",
        ],
    );
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(fs::read(dir.join("again/report.json")).unwrap(), report);
    assert_eq!(fs::read_to_string(dir.join("again/pairs.csv")).unwrap(), csv);
}

#[test]
fn compare_single_pair() {
    let tmp = TempDir::new().unwrap();
    let dir = tmp.path();
    synthetic_manifest(dir, 1, 2);
    device_table(&profile("dev", "eagle", "ecr", 0.1, 0.1, 1))
        .save(dir.join("t.json"))
        .unwrap();
    let o = run(
        dir,
        &[
            "compare",
            "manifest.json",
            "--metrics",
            "traditional",
            "--durations",
            "t.json",
            "--out",
            "o",
        ],
    );
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(fs::read_to_string(dir.join("o/pairs.csv")).unwrap().lines().count(), 2);
}

#[test]
fn compare_proportional_metric_is_perfect() {
    let tmp = TempDir::new().unwrap();
    let dir = tmp.path();
    synthetic_manifest(dir, 6, 4);
    // durations exactly proportional to the weights
    device_table(&profile("dev", "eagle", "ecr", 0.25, 0.0, 1))
        .save(dir.join("t.json"))
        .unwrap();
    write(dir, "w.json", r#"{"weights":{"ecr":1.0,"rz":0.0,"sx":0.25,"x":0.25}}"#);
    let o = run(
        dir,
        &[
            "compare",
            "manifest.json",
            "--metrics",
            "gateaware",
            "--durations",
            "t.json",
            "--weights",
            "w.json",
            "--out",
            "o",
        ],
    );
    assert_eq!(o.status.code(), Some(0));
    let summary: Value = serde_json::from_str(&fs::read_to_string(dir.join("o/summary.json")).unwrap()).unwrap();
    let text = summary.to_string();
    assert!(text.contains("\"identification_accuracy_percent\":100.0"), "{text}");
    let csv = fs::read_to_string(dir.join("o/pairs.csv")).unwrap();
    for row in csv.lines().skip(1) {
        let field = row.split(',').nth(6).unwrap();
        if field.is_empty() {
            assert!(row.ends_with("zero_runtime_delta"), "{row}");
        } else {
            assert!(field.parse::<f64>().unwrap() < 1e-9, "{row}");
        }
    }
}

#[test]
fn compare_manifest_errors() {
    let tmp = TempDir::new().unwrap();
    let dir = tmp.path();
    DurationTable::new("dev", "a").save(dir.join("t.json")).unwrap();
    write(dir, "bad.json", r#"{"bases":[{"name":"b"}]}"#);
    write(
        dir,
        "missing.json",
        r#"{"bases":[{"name":"b","versions":[{"compiler":"c","file":"none.qasm"}]}]}"#,
    );
    write(
        dir,
        "garbled.json",
        r#"{"bases":[{"name":"b","versions":[{"compiler":"c","file":"g.qasm"}]}]}"#,
    );
    write(dir, "g.qasm", "not qasm");
    let code = |m: &str| {
        run(dir, &["compare", m, "--durations", "t.json", "--out", "o"])
            .status
            .code()
    };
    assert_eq!(code("bad.json"), Some(5));
    assert_eq!(code("nowhere.json"), Some(5));
    assert_eq!(code("missing.json"), Some(5));
    assert_eq!(code("garbled.json"), Some(2));
}

#[test]
fn sweep_grid_rows_and_argmin() {
    let tmp = TempDir::new().unwrap();
    let dir = tmp.path();
    synthetic_manifest(dir, 15, 4);
    device_table(&profile("r03a", "x", "ecr", 0.3, 0.05, 3))
        .save(dir.join("a.json"))
        .unwrap();
    device_table(&profile("r03b", "x", "ecr", 0.3, 0.05, 4))
        .save(dir.join("b.json"))
        .unwrap();

    let o = run(
        dir,
        &[
            "sweep",
            "manifest.json",
            "--durations",
            "a.json",
            "b.json",
            "--grid",
            "0:1:0.01",
            "--out",
            "s.csv",
        ],
    );
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = fs::read_to_string(dir.join("s.csv")).unwrap();
    assert_eq!(csv.lines().filter(|l| l.contains(",r03a,")).count(), 101);
    assert_eq!(csv.lines().filter(|l| l.contains(",r03b,")).count(), 101);
    let summary = stdout(&o);
    for line in summary.lines().skip(1) {
        let w: f64 = line.split_whitespace().nth(1).unwrap().parse().unwrap();
        assert!((w - 0.3).abs() <= 0.02, "{line}");
    }

    let o = run(
        dir,
        &[
            "sweep",
            "manifest.json",
            "--durations",
            "a.json",
            "--grid",
            "0.5:0.5:0.01",
        ],
    );
    assert_eq!(stdout(&o).lines().count(), 2);

    for bad in ["0:1", "1:0:0.1", "0:1:0", "a:b:c"] {
        let o = run(dir, &["sweep", "manifest.json", "--durations", "a.json", "--grid", bad]);
        assert_eq!(o.status.code(), Some(4), "{bad}");
    }
}
