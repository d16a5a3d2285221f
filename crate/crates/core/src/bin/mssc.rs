//! Command-line front end: dataset ingestion, algorithm invocation, and
//! JSON result emission.
//!
//! Exit codes: 0 success (and, for `verify`, a confirmed local solution);
//! 1 invalid configuration or malformed input; 2 I/O failure; 3 candidate
//! rejected by `verify`; 4 exact-solver cap exceeded. All diagnostics go
//! to standard error; results go to standard output or `--output`.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use mssc::clustering::{natural_clustering, Assignment, CentroidSystem};
use mssc::dataset::{dedup_with_map, DataSet};
use mssc::error::Error;
use mssc::io::{load_csv, read_candidate, to_json_string};
use mssc::params::ControlParams;
use mssc::trace::RunTrace;
use mssc::verify::DEFAULT_PARTITION_CAP;
use mssc::{incremental, kmeans, verify};

#[derive(Parser)]
#[command(name = "mssc", version, about = "Minimum sum-of-squares clustering")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Cluster a data set and write centroids, clusters, and a run trace.
    Cluster(ClusterArgs),
    /// Check a candidate centroid system against the local-optimality
    /// conditions.
    Verify(VerifyArgs),
    /// Solve a desk-scale instance exactly by partition enumeration.
    Oracle(OracleArgs),
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum Algorithm {
    /// Plain k-means from a supplied initial system.
    Km,
    /// Incremental driver, re-seeding variant.
    Obav1,
    /// Incremental driver, system-carrying variant.
    Obav2,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum TraceLevel {
    None,
    Summary,
    Full,
}

#[derive(Args)]
struct ClusterArgs {
    /// Input CSV (one point per row); optional when --synthetic is given.
    input: Option<PathBuf>,
    #[arg(long, value_enum)]
    algo: Algorithm,
    #[arg(short, long)]
    k: usize,
    /// "auto" or three comma-separated values g1,g2,g3.
    #[arg(long, default_value = "auto")]
    gammas: String,
    /// Enable the far-point candidate reduction.
    #[arg(long)]
    reduce: bool,
    /// Reduction coefficient (effective value at level l: min(delta, 1/l)).
    #[arg(long, default_value_t = 1e-3)]
    delta: f64,
    /// Threshold reduced candidates by the first cluster's spread factor
    /// instead of gamma1 (comparison mode).
    #[arg(long)]
    eta1_literal: bool,
    /// k-means stopping displacement.
    #[arg(long, default_value_t = 0.0)]
    tol_conv: f64,
    #[arg(long, default_value_t = 1000)]
    max_iter: usize,
    /// Initial centroids (JSON with a "centroids" key); required for km.
    #[arg(long)]
    init_file: Option<PathBuf>,
    /// Write the result JSON here instead of standard output.
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = TraceLevel::Summary)]
    trace: TraceLevel,
    /// Generate a uniform synthetic data set "m,n" instead of reading a
    /// file.
    #[arg(long)]
    synthetic: Option<String>,
    /// Seed for synthetic generation.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct VerifyArgs {
    /// Input CSV.
    input: PathBuf,
    /// Candidate JSON with a "centroids" key.
    candidate: PathBuf,
    /// Absolute tolerance for the optimality checks.
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct OracleArgs {
    /// Input CSV.
    input: PathBuf,
    #[arg(short, long)]
    k: usize,
    /// Cap on the number of partitions to enumerate.
    #[arg(long, default_value_t = DEFAULT_PARTITION_CAP)]
    cap: u64,
    #[arg(long)]
    output: Option<PathBuf>,
}

struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn config(message: impl Into<String>) -> Self {
        Self {
            code: 1,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(err: Error) -> Self {
        let code = match err {
            Error::Io(_) => 2,
            Error::PartitionCapExceeded { .. } => 4,
            _ => 1,
        };
        Self {
            code,
            message: err.to_string(),
        }
    }
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            use clap::error::ErrorKind;
            match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    print!("{err}");
                    std::process::exit(0);
                }
                _ => {
                    eprint!("{err}");
                    std::process::exit(1);
                }
            }
        }
    };
    let code = match run(cli) {
        Ok(code) => code,
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            failure.code
        }
    };
    std::process::exit(code);
}

fn run(cli: Cli) -> Result<i32, Failure> {
    match cli.command {
        Command::Cluster(args) => cmd_cluster(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Oracle(args) => cmd_oracle(args),
    }
}

fn cmd_cluster(args: ClusterArgs) -> Result<i32, Failure> {
    let raw = load_input(&args)?;
    let (data, dedup_map) = dedup_with_map(&raw);

    let result = match args.algo {
        Algorithm::Km => {
            let init_path = args
                .init_file
                .as_ref()
                .ok_or_else(|| Failure::config("--algo km requires --init-file"))?;
            let init = read_candidate(init_path)?;
            if init.len() != args.k {
                return Err(Failure::config(format!(
                    "--k {} does not match the {} centroids in the init file",
                    args.k,
                    init.len()
                )));
            }
            if init.dim() != data.dim() {
                return Err(Failure::config(format!(
                    "init centroids have dimension {}, data has {}",
                    init.dim(),
                    data.dim()
                )));
            }
            let r = kmeans::run(&data, &init, args.tol_conv, args.max_iter);
            let trace = match args.trace {
                TraceLevel::None => json!({}),
                _ => json!({ "iterations": r.iterations, "converged": r.converged }),
            };
            ResultDoc {
                centroids: r.centroids,
                assignment: r.assignment,
                objective: r.objective,
                trace,
            }
        }
        Algorithm::Obav1 | Algorithm::Obav2 => {
            let params = build_params(&args, data.len())?;
            let (centroids, assignment, trace) = if args.algo == Algorithm::Obav1 {
                let (x, trace) = incremental::version1(&data, args.k, &params)?;
                let assignment = natural_clustering(&data, &x);
                (x, assignment, trace)
            } else {
                let (x, assignment, trace) = incremental::version2(&data, args.k, &params)?;
                (x, assignment, trace)
            };
            eprintln!(
                "levels: {}, objective: {:.6e}, wall: {:.3}s, distance evals: {}",
                trace.levels.len(),
                trace.final_objective,
                trace.wall_time.as_secs_f64(),
                trace.distance_evals,
            );
            let objective = trace.final_objective;
            ResultDoc {
                centroids,
                assignment,
                objective,
                trace: trace_value(&trace, args.trace),
            }
        }
    };

    let doc = result.to_value(&dedup_map, raw.len());
    emit(&doc, args.output.as_deref())?;
    Ok(0)
}

struct ResultDoc {
    centroids: CentroidSystem,
    assignment: Assignment,
    objective: f64,
    trace: Value,
}

impl ResultDoc {
    /// Clusters are reported as indices into the *original* rows, so
    /// duplicate input points land in the cluster of their representative.
    fn to_value(&self, dedup_map: &[usize], raw_len: usize) -> Value {
        let mut clusters: Vec<Vec<usize>> = vec![Vec::new(); self.centroids.len()];
        for (raw_index, &rep) in dedup_map.iter().enumerate().take(raw_len) {
            let j = self.assignment.cluster_of[rep];
            clusters[j].push(raw_index);
        }
        json!({
            "centroids": self.centroids.centroids(),
            "clusters": clusters,
            "objective": self.objective,
            "trace": self.trace,
        })
    }
}

fn trace_value(trace: &RunTrace, level: TraceLevel) -> Value {
    match level {
        TraceLevel::None => json!({}),
        TraceLevel::Summary => trace.summary_value(),
        TraceLevel::Full => trace.full_value(),
    }
}

fn cmd_verify(args: VerifyArgs) -> Result<i32, Failure> {
    let raw = load_csv(&args.input)?;
    let data = mssc::dedup(&raw);
    let candidate = read_candidate(&args.candidate)?;
    if candidate.dim() != data.dim() {
        return Err(Failure::config(format!(
            "candidate centroids have dimension {}, data has {}",
            candidate.dim(),
            data.dim()
        )));
    }
    let report = verify::verify_local(&data, &candidate, args.tol);
    let objective = mssc::mssc_objective(&data, &candidate);
    let mut doc = serde_json::to_value(&report).expect("report serializes");
    doc["objective"] = json!(objective);
    emit(&doc, args.output.as_deref())?;
    Ok(
        if report.classification == verify::Classification::NontrivialLocalSolution {
            0
        } else {
            3
        },
    )
}

fn cmd_oracle(args: OracleArgs) -> Result<i32, Failure> {
    let raw = load_csv(&args.input)?;
    let data = mssc::dedup(&raw);
    let outcome = verify::brute_force_global(&data, args.k, args.cap)?;
    let optima: Vec<&[Vec<f64>]> = outcome.optima.iter().map(|s| s.centroids()).collect();
    let doc = json!({
        "objective": outcome.objective,
        "optima": optima,
    });
    emit(&doc, args.output.as_deref())?;
    Ok(0)
}

fn build_params(args: &ClusterArgs, m: usize) -> Result<ControlParams, Failure> {
    let params = if args.gammas.trim() == "auto" {
        ControlParams::recommended(m)
    } else {
        let parts: Vec<&str> = args.gammas.split(',').map(str::trim).collect();
        if parts.len() != 3 {
            return Err(Failure::config(format!(
                "--gammas expects \"auto\" or three comma-separated values, got {:?}",
                args.gammas
            )));
        }
        let parse = |s: &str| {
            s.parse::<f64>()
                .map_err(|_| Failure::config(format!("--gammas: not a number: {s:?}")))
        };
        ControlParams::new(parse(parts[0])?, parse(parts[1])?, parse(parts[2])?)?
    };
    Ok(params
        .with_delta(args.delta)?
        .with_tol_conv(args.tol_conv)?
        .with_max_iter(args.max_iter)?
        .with_reduction(args.reduce)
        .with_reduction_literal_eta1(args.eta1_literal))
}

fn load_input(args: &ClusterArgs) -> Result<DataSet, Failure> {
    if let Some(shape) = &args.synthetic {
        let parts: Vec<&str> = shape.split(',').map(str::trim).collect();
        let dims: Vec<usize> = parts
            .iter()
            .map(|s| s.parse::<usize>())
            .collect::<Result<_, _>>()
            .map_err(|_| Failure::config(format!("--synthetic expects \"m,n\", got {shape:?}")))?;
        if dims.len() != 2 || dims[0] == 0 || dims[1] == 0 {
            return Err(Failure::config(format!(
                "--synthetic expects positive \"m,n\", got {shape:?}"
            )));
        }
        return Ok(synthetic(dims[0], dims[1], args.seed));
    }
    let path = args
        .input
        .as_ref()
        .ok_or_else(|| Failure::config("input file required unless --synthetic is given"))?;
    Ok(load_csv(path)?)
}

/// Uniform points in the unit cube from a splitmix64 stream: deterministic
/// across platforms, no RNG dependency.
fn synthetic(m: usize, n: usize, seed: u64) -> DataSet {
    let mut state = seed;
    let mut next = move || {
        state = state.wrapping_add(0x9e37_79b9_7f4a_7c15);
        let mut z = state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z = z ^ (z >> 31);
        (z >> 11) as f64 / (1u64 << 53) as f64
    };
    let points = (0..m).map(|_| (0..n).map(|_| next()).collect()).collect();
    DataSet::new(points).expect("synthetic points are finite")
}

fn emit(doc: &Value, output: Option<&Path>) -> Result<(), Failure> {
    let text = to_json_string(doc);
    match output {
        Some(path) => std::fs::write(path, text).map_err(|e| Failure::from(Error::Io(e)))?,
        None => print!("{text}"),
    }
    Ok(())
}
