//! `qdepth` command-line tool.
//!
//! Exit codes: 0 ok, 2 parse error, 3 unresolved weight or duration,
//! 4 configuration error, 5 manifest error.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use qdepth::calibration::average_gate_times;
use qdepth::compare::{compare_versions, measure_versions, sweep_weights, weight_grid, CompareError, SweepTemplate};
use qdepth::report::{format_significant, pairs_csv, report_json, summary_json, sweep_csv};
use qdepth::runtime::estimate_runtime_with;
use qdepth::{
    configure_weights, parse, Averaging, BarrierMode, CalibrationError, Circuit, DurationTable, Manifest,
    ManifestError, Metric, WeightMap,
};
use rayon::prelude::*;
use serde_json::{json, Map, Value};

const PARSE: u8 = 2;
const RESOLUTION: u8 = 3;
const CONFIGURATION: u8 = 4;
const MANIFEST: u8 = 5;

#[derive(Parser)]
#[command(
    name = "qdepth",
    version,
    about = "Depth metrics and runtime estimates for compiled quantum circuits"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print depth metrics for each OpenQASM 2.0 file, one JSON object per line.
    Depth(DepthArgs),
    /// Build a gate-aware weight map from device duration tables.
    Weights(WeightsArgs),
    /// Estimate the runtime of each file against a duration table.
    Estimate(EstimateArgs),
    /// Compare compiled versions listed in a manifest and write reports.
    Compare(CompareArgs),
    /// Sweep the single-qubit weight and report median %RE per device.
    Sweep(SweepArgs),
}

#[derive(Args)]
struct BarrierArg {
    /// How barriers affect scheduling: skip (ignored) or sync (align operands).
    #[arg(long, default_value = "skip")]
    barrier: BarrierMode,
}

#[derive(Args)]
struct DepthArgs {
    #[arg(required = true)]
    files: Vec<PathBuf>,
    /// Metrics to report (traditional, multiqubit, gateaware). Defaults to
    /// traditional and multiqubit, plus gateaware when --weights is given.
    #[arg(long = "metric", value_delimiter = ',')]
    metrics: Vec<Metric>,
    /// Weight map JSON for gate-aware depth.
    #[arg(long)]
    weights: Option<PathBuf>,
    #[command(flatten)]
    barrier: BarrierArg,
}

#[derive(Args)]
struct WeightsArgs {
    /// Duration table JSON files, all of one architecture.
    #[arg(required = true)]
    tables: Vec<PathBuf>,
    /// Where to write the weight map; printed to stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Average over all location entries instead of per-device means.
    #[arg(long)]
    pooled: bool,
}

#[derive(Args)]
struct EstimateArgs {
    #[arg(required = true)]
    files: Vec<PathBuf>,
    /// Duration table JSON.
    #[arg(long)]
    durations: PathBuf,
    #[command(flatten)]
    barrier: BarrierArg,
}

#[derive(Args)]
struct CompareArgs {
    manifest: PathBuf,
    /// Metrics to compare. Same default as `depth`.
    #[arg(long, value_delimiter = ',')]
    metrics: Vec<Metric>,
    /// Duration table JSON giving the true runtimes.
    #[arg(long)]
    durations: PathBuf,
    #[arg(long)]
    weights: Option<PathBuf>,
    /// Output directory for pairs.csv, report.json and summary.json.
    #[arg(long)]
    out: PathBuf,
    #[command(flatten)]
    barrier: BarrierArg,
}

#[derive(Args)]
struct SweepArgs {
    manifest: PathBuf,
    /// Duration table JSON files, one per device.
    #[arg(long, required = true, num_args = 1..)]
    durations: Vec<PathBuf>,
    /// Grid as start:stop:step, inclusive.
    #[arg(long, default_value = "0:1:0.01")]
    grid: String,
    /// Where to write the sweep CSV; printed to stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    #[command(flatten)]
    barrier: BarrierArg,
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Self {
            code,
            message: message.into(),
        }
    }
}

impl From<CalibrationError> for Failure {
    fn from(e: CalibrationError) -> Self {
        Failure::new(CONFIGURATION, e.to_string())
    }
}

impl From<ManifestError> for Failure {
    fn from(e: ManifestError) -> Self {
        let code = match e {
            ManifestError::Parse { .. } => PARSE,
            _ => MANIFEST,
        };
        Failure::new(code, e.to_string())
    }
}

impl From<CompareError> for Failure {
    fn from(e: CompareError) -> Self {
        let code = match e {
            CompareError::Depth { .. } | CompareError::Runtime { .. } => RESOLUTION,
            _ => CONFIGURATION,
        };
        Failure::new(code, e.to_string())
    }
}

type Outcome = Result<(), Failure>;

fn read_circuit(path: &Path) -> Result<Circuit, Failure> {
    let text =
        fs::read_to_string(path).map_err(|e| Failure::new(PARSE, format!("cannot read {}: {e}", path.display())))?;
    parse(&text).map_err(|e| Failure::new(PARSE, format!("{}: {e}", path.display())))
}

fn read_weights(path: &Path) -> Result<WeightMap, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::new(CONFIGURATION, format!("cannot read {}: {e}", path.display())))?;
    WeightMap::from_json_str(&text).map_err(|e| Failure::new(CONFIGURATION, format!("{}: {e}", path.display())))
}

fn write_file(path: &Path, contents: &str) -> Outcome {
    fs::write(path, contents).map_err(|e| Failure::new(CONFIGURATION, format!("cannot write {}: {e}", path.display())))
}

fn default_metrics(requested: &[Metric], weights: Option<&WeightMap>) -> Vec<Metric> {
    let mut metrics = if requested.is_empty() {
        let mut m = vec![Metric::Traditional, Metric::MultiQubit];
        if weights.is_some() {
            m.push(Metric::GateAware);
        }
        m
    } else {
        requested.to_vec()
    };
    let mut seen = Vec::new();
    metrics.retain(|m| {
        let fresh = !seen.contains(m);
        seen.push(*m);
        fresh
    });
    metrics
}

fn metric_value(metric: Metric, value: f64) -> Value {
    match metric {
        Metric::Traditional | Metric::MultiQubit => json!(value as u64),
        Metric::GateAware => json!(value),
    }
}

/// Runs `work` over `files` in parallel and prints the lines in input order,
/// stopping at the first failure.
fn per_file<F>(files: &[PathBuf], work: F) -> Outcome
where
    F: Fn(&Path) -> Result<Value, Failure> + Sync,
{
    let results: Vec<Result<Value, Failure>> = files.par_iter().map(|f| work(f)).collect();
    for result in results {
        println!("{}", result?);
    }
    Ok(())
}

fn depth(args: DepthArgs) -> Outcome {
    let weights = args.weights.as_deref().map(read_weights).transpose()?;
    let metrics = default_metrics(&args.metrics, weights.as_ref());
    let barrier = args.barrier.barrier;
    per_file(&args.files, |path| {
        let circuit = read_circuit(path)?;
        let mut obj = Map::new();
        obj.insert("file".into(), json!(path.display().to_string()));
        for &metric in &metrics {
            let value = metric
                .evaluate(&circuit, weights.as_ref(), barrier)
                .map_err(|e| Failure::new(RESOLUTION, format!("{}: {e}", path.display())))?;
            obj.insert(metric.field().into(), metric_value(metric, value));
        }
        Ok(Value::Object(obj))
    })
}

fn weights(args: WeightsArgs) -> Outcome {
    let tables = args
        .tables
        .iter()
        .map(DurationTable::load)
        .collect::<Result<Vec<_>, _>>()?;
    let averaging = if args.pooled {
        Averaging::Pooled
    } else {
        Averaging::Hierarchical
    };
    let map = configure_weights(&tables, averaging)?;
    let means = average_gate_times(&tables, averaging)?;

    let mut summary = format!(
        "architecture {} ({} device{}, {} averaging)\n{:<10} {:>12} {:>14}\n",
        tables[0].architecture(),
        tables.len(),
        if tables.len() == 1 { "" } else { "s" },
        if args.pooled { "pooled" } else { "hierarchical" },
        "gate",
        "weight",
        "mean_s",
    );
    for (gate, w) in map.iter() {
        summary.push_str(&format!(
            "{gate:<10} {:>12} {:>14}\n",
            format_significant(w, 6),
            format_significant(means[gate], 6)
        ));
    }
    match &args.out {
        Some(out) => {
            write_file(out, &map.to_json_string())?;
            print!("{summary}");
        }
        None => {
            println!("{}", map.to_json_string());
            eprint!("{summary}");
        }
    }
    Ok(())
}

fn estimate(args: EstimateArgs) -> Outcome {
    let table = DurationTable::load(&args.durations)?;
    let barrier = args.barrier.barrier;
    per_file(&args.files, |path| {
        let circuit = read_circuit(path)?;
        let runtime = estimate_runtime_with(&circuit, &table, barrier)
            .map_err(|e| Failure::new(RESOLUTION, format!("{}: {e}", path.display())))?;
        Ok(json!({ "file": path.display().to_string(), "runtime_s": runtime }))
    })
}

fn compare(args: CompareArgs) -> Outcome {
    let manifest = Manifest::load(&args.manifest)?;
    let table = DurationTable::load(&args.durations)?;
    let weights = args.weights.as_deref().map(read_weights).transpose()?;
    let metrics = default_metrics(&args.metrics, weights.as_ref());
    let bases = manifest.load_circuits()?;
    let records = measure_versions(&bases, &table, &metrics, weights.as_ref(), args.barrier.barrier)?;
    let names: Vec<&str> = metrics.iter().map(|m| m.name()).collect();
    let report = compare_versions(&records, &names)?;

    fs::create_dir_all(&args.out)
        .map_err(|e| Failure::new(CONFIGURATION, format!("cannot create {}: {e}", args.out.display())))?;
    write_file(&args.out.join("pairs.csv"), &pairs_csv(&report.pairs))?;
    write_file(&args.out.join("report.json"), &report_json(&report))?;
    write_file(&args.out.join("summary.json"), &summary_json(&report))?;

    println!(
        "{:<12} {:>6} {:>9} {:>14} {:>12}",
        "metric", "pairs", "excluded", "median_%RE", "accuracy_%"
    );
    for s in &report.summaries {
        let median = s
            .percent_re
            .as_ref()
            .map_or("n/a".into(), |d| format_significant(d.median, 6));
        let accuracy = s
            .identification_accuracy_percent
            .map_or("n/a".into(), |a| format_significant(a, 6));
        println!(
            "{:<12} {:>6} {:>9} {:>14} {:>12}",
            s.metric, s.pairs, s.excluded_pairs, median, accuracy
        );
    }
    Ok(())
}

fn parse_grid(spec: &str) -> Result<Vec<f64>, Failure> {
    let bad = || Failure::new(CONFIGURATION, format!("grid must be start:stop:step, got {spec:?}"));
    let parts: Vec<f64> = spec
        .split(':')
        .map(|p| p.trim().parse::<f64>().map_err(|_| bad()))
        .collect::<Result<_, _>>()?;
    let [start, stop, step] = parts[..] else {
        return Err(bad());
    };
    Ok(weight_grid(start, stop, step)?)
}

fn sweep(args: SweepArgs) -> Outcome {
    let grid = parse_grid(&args.grid)?;
    let manifest = Manifest::load(&args.manifest)?;
    let devices = args
        .durations
        .iter()
        .map(DurationTable::load)
        .collect::<Result<Vec<_>, _>>()?;
    let bases = manifest.load_circuits()?;
    let result = sweep_weights(
        &bases,
        &devices,
        &SweepTemplate::superconducting_native(),
        &grid,
        args.barrier.barrier,
    )?;

    let mut summary = String::from("device           argmin_w_s  median_%RE\n");
    for o in &result.optima {
        summary.push_str(&format!(
            "{:<16} {:>10} {:>11}\n",
            o.device,
            format_significant(o.w_s, 6),
            format_significant(o.median_percent_re, 6)
        ));
    }
    match &args.out {
        Some(out) => {
            write_file(out, &sweep_csv(&result))?;
            print!("{summary}");
        }
        None => {
            print!("{}", sweep_csv(&result));
            eprint!("{summary}");
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Depth(a) => depth(a),
        Command::Weights(a) => weights(a),
        Command::Estimate(a) => estimate(a),
        Command::Compare(a) => compare(a),
        Command::Sweep(a) => sweep(a),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
