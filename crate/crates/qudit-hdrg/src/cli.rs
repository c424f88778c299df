//! Command-line front end: trials, sweeps, percolation studies, threshold
//! fits, and the decode runtime benchmark.
//!
//! Every artifact output is paired with a run manifest echoing the full
//! configuration, so any CSV or JSON file can be reproduced byte for byte
//! from its manifest alone. Exit codes: 0 on success, 1 on runtime or I/O
//! failure, 2 on usage errors.

use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use thiserror::Error;

use crate::fitting::{self, FitOptions};
use crate::montecarlo::{self, SuccessEstimate, TrialConfig};
use crate::percolation::{self, SpanEstimate};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Runtime(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            _ => 1,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "qudit-hdrg",
    version,
    about = "Fault-tolerant decoding simulations for qubit and qudit surface codes"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run a single fault-tolerant decoding trial.
    Trial(TrialArgs),
    /// Sweep distances and rates, estimating success probabilities.
    Sweep(SweepArgs),
    /// Measure syndrome-percolation spanning fractions.
    Percolation(PercolationArgs),
    /// Fit a threshold from a sweep CSV.
    Fit(FitArgs),
    /// Benchmark decode runtime scaling with distance.
    Bench(BenchArgs),
}

fn parse_rate(s: &str) -> Result<f64, String> {
    let value: f64 = s.parse().map_err(|_| format!("`{s}` is not a number"))?;
    if !(0.0..1.0).contains(&value) {
        return Err(format!("rate must be in [0, 1), got {value}"));
    }
    Ok(value)
}

/// Comma list (`0.01,0.02`) or inclusive range (`start:end:step`).
fn parse_rates(s: &str) -> Result<Vec<f64>, String> {
    let rates = if s.contains(':') {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return Err("rate range must be start:end:step".into());
        }
        let start = parse_rate(parts[0])?;
        let end = parse_rate(parts[1])?;
        let step: f64 = parts[2]
            .parse()
            .map_err(|_| format!("`{}` is not a number", parts[2]))?;
        if step <= 0.0 || end < start {
            return Err("rate range must satisfy start <= end, step > 0".into());
        }
        let count = ((end - start) / step + 0.5).floor() as usize + 1;
        (0..count)
            .map(|i| ((start + step * i as f64) * 1e12).round() / 1e12)
            .collect()
    } else {
        s.split(',')
            .map(parse_rate)
            .collect::<Result<Vec<f64>, String>>()?
    };
    if rates.is_empty() {
        return Err("need at least one rate".into());
    }
    Ok(rates)
}

fn parse_distances(s: &str) -> Result<Vec<u32>, String> {
    let distances: Vec<u32> = s
        .split(',')
        .map(|part| {
            part.trim()
                .parse::<u32>()
                .map_err(|_| format!("`{part}` is not an integer"))
        })
        .collect::<Result<_, _>>()?;
    if distances.is_empty() {
        return Err("need at least one distance".into());
    }
    if let Some(bad) = distances.iter().find(|&&l| l < 2) {
        return Err(format!("distance must be at least 2, got {bad}"));
    }
    Ok(distances)
}

#[derive(Debug, Args)]
pub struct TrialArgs {
    /// Code distance L (at least 2).
    #[arg(long, value_parser = clap::value_parser!(u32).range(2..))]
    pub distance: u32,
    /// Qudit dimension d (at least 2).
    #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u32).range(2..))]
    pub dim: u32,
    /// Error rate p per qudit per time step.
    #[arg(long, value_parser = parse_rate)]
    pub rate: f64,
    /// Number of measurement rounds (defaults to the distance).
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    pub time_steps: Option<u32>,
    /// Initialization sweep depth, 0-4.
    #[arg(long, default_value_t = 0, value_parser = clap::value_parser!(u32).range(0..=4))]
    pub init_depth: u32,
    /// Master seed.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Trial index within the seed's batch.
    #[arg(long, default_value_t = 0)]
    pub trial: u64,
    /// Emit the full JSON trace instead of the summary line.
    #[arg(long)]
    pub trace: bool,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// Comma-separated code distances, e.g. 6,10,14.
    #[arg(long, value_parser = parse_distances)]
    pub distances: std::vec::Vec<u32>,
    /// Rates as a comma list or start:end:step range.
    #[arg(long, value_parser = parse_rates)]
    pub rates: std::vec::Vec<f64>,
    #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u32).range(2..))]
    pub dim: u32,
    /// Monte Carlo trials per cell.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub trials: u64,
    #[arg(long, default_value_t = 0, value_parser = clap::value_parser!(u32).range(0..=4))]
    pub init_depth: u32,
    /// Fixed number of measurement rounds (defaults to T = L per cell).
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    pub time_steps: Option<u32>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Write the table here instead of stdout (manifest goes alongside).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Emit a JSON array with the same fields instead of CSV.
    #[arg(long)]
    pub json: bool,
    /// Worker thread cap (defaults to available parallelism).
    #[arg(long)]
    pub threads: Option<usize>,
}

#[derive(Debug, Args)]
pub struct PercolationArgs {
    #[arg(long, value_parser = parse_distances)]
    pub distances: std::vec::Vec<u32>,
    #[arg(long, value_parser = parse_rates)]
    pub rates: std::vec::Vec<f64>,
    #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u32).range(2..))]
    pub dim: u32,
    /// Noise samples per cell.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub samples: u64,
    #[arg(long, default_value_t = 0, value_parser = clap::value_parser!(u32).range(0..=4))]
    pub init_depth: u32,
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    pub time_steps: Option<u32>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Emit a JSON array with the same fields instead of CSV.
    #[arg(long)]
    pub json: bool,
    #[arg(long)]
    pub threads: Option<usize>,
}

#[derive(Debug, Args)]
pub struct FitArgs {
    /// Sweep CSV to read.
    #[arg(long)]
    pub input: PathBuf,
    /// Half-width of the rate window around the estimated crossing.
    #[arg(long, default_value_t = 0.004)]
    pub half_width: f64,
    /// Restrict to one qudit dimension when the CSV mixes several.
    #[arg(long)]
    pub dim: Option<u32>,
    /// Restrict to one initialization depth.
    #[arg(long)]
    pub init_depth: Option<u32>,
    /// Bootstrap resamples for the threshold uncertainty.
    #[arg(long, default_value_t = 200)]
    pub resamples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Write the JSON report here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    /// At least three distances for the log-log slope.
    #[arg(long, value_parser = parse_distances)]
    pub distances: std::vec::Vec<u32>,
    #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u32).range(2..))]
    pub dim: u32,
    #[arg(long, value_parser = parse_rate)]
    pub rate: f64,
    /// Timed decodes per distance.
    #[arg(long, default_value_t = 25, value_parser = clap::value_parser!(u64).range(3..))]
    pub samples: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

/// Configuration echo written alongside every artifact output.
#[derive(Debug, Serialize)]
pub struct RunManifest<'a, P: Serialize> {
    pub tool: &'a str,
    pub version: &'a str,
    pub command: &'a str,
    pub parameters: P,
}

fn manifest_json<P: Serialize>(command: &str, parameters: P) -> String {
    serde_json::to_string(&RunManifest {
        tool: "qudit-hdrg",
        version: env!("CARGO_PKG_VERSION"),
        command,
        parameters,
    })
    .expect("manifest serializes")
}

/// CSV to a file with a sidecar manifest, or to stdout with the manifest as
/// a leading comment line.
fn emit_csv(out: &Option<PathBuf>, manifest: &str, body: &str) -> Result<(), CliError> {
    match out {
        Some(path) => {
            fs::write(path, body)?;
            let manifest_path = path.with_extension("manifest.json");
            fs::write(manifest_path, manifest)?;
        }
        None => {
            print!("# {manifest}\n{body}");
        }
    }
    Ok(())
}

/// JSON table variant: one document with the manifest embedded.
fn emit_json_rows<T: Serialize>(
    out: &Option<PathBuf>,
    manifest: &str,
    rows: &[T],
) -> Result<(), CliError> {
    let document = serde_json::json!({
        "manifest": serde_json::from_str::<serde_json::Value>(manifest)
            .expect("manifest is valid JSON"),
        "rows": rows,
    });
    let mut text = serde_json::to_string_pretty(&document).expect("document serializes");
    text.push('\n');
    match out {
        Some(path) => fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn with_thread_pool<T: Send>(
    threads: Option<usize>,
    job: impl FnOnce() -> T + Send,
) -> Result<T, CliError> {
    match threads {
        None => Ok(job()),
        Some(n) => {
            if n == 0 {
                return Err(CliError::Usage("--threads must be at least 1".into()));
            }
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| CliError::Runtime(format!("thread pool: {e}")))?;
            Ok(pool.install(job))
        }
    }
}

pub fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Trial(args) => cmd_trial(args),
        Command::Sweep(args) => cmd_sweep(args),
        Command::Percolation(args) => cmd_percolation(args),
        Command::Fit(args) => cmd_fit(args),
        Command::Bench(args) => cmd_bench(args),
    }
}

fn cmd_trial(args: TrialArgs) -> Result<(), CliError> {
    let config = TrialConfig {
        distance: args.distance,
        time_steps: args.time_steps.unwrap_or(args.distance),
        dim: args.dim,
        rate: args.rate,
        init_depth: args.init_depth,
        seed: args.seed,
        trial: args.trial,
    };
    let trace = montecarlo::run_trial_traced(&config);
    if args.trace {
        println!(
            "{}",
            serde_json::to_string_pretty(&trace).expect("trace serializes")
        );
    } else {
        let o = &trace.outcome;
        println!(
            "success={} levels_used={} defects_initial={} defects_after_init={} decode_seconds={:.6}",
            o.success, o.levels_used, o.defects_initial, o.defects_after_init, o.decode_seconds
        );
    }
    Ok(())
}

#[derive(Debug, Serialize)]
struct SweepManifest<'a> {
    distances: &'a [u32],
    rates: &'a [f64],
    dim: u32,
    trials: u64,
    init_depth: u32,
    time_steps: Option<u32>,
    seed: u64,
}

fn cmd_sweep(args: SweepArgs) -> Result<(), CliError> {
    let manifest = manifest_json(
        "sweep",
        SweepManifest {
            distances: &args.distances,
            rates: &args.rates,
            dim: args.dim,
            trials: args.trials,
            init_depth: args.init_depth,
            time_steps: args.time_steps,
            seed: args.seed,
        },
    );
    let cells = montecarlo::sweep_cells(
        &args.distances,
        &args.rates,
        args.dim,
        args.init_depth,
        args.time_steps,
    );
    let estimates = with_thread_pool(args.threads, || {
        montecarlo::run_batch(&cells, args.trials, args.seed)
    })?;
    if args.json {
        return emit_json_rows(&args.out, &manifest, &estimates);
    }
    let mut body = String::new();
    writeln!(body, "{}", SuccessEstimate::CSV_HEADER).unwrap();
    for estimate in &estimates {
        writeln!(body, "{}", estimate.csv_row()).unwrap();
    }
    emit_csv(&args.out, &manifest, &body)
}

#[derive(Debug, Serialize)]
struct PercolationManifest<'a> {
    distances: &'a [u32],
    rates: &'a [f64],
    dim: u32,
    samples: u64,
    init_depth: u32,
    time_steps: Option<u32>,
    seed: u64,
}

fn cmd_percolation(args: PercolationArgs) -> Result<(), CliError> {
    let manifest = manifest_json(
        "percolation",
        PercolationManifest {
            distances: &args.distances,
            rates: &args.rates,
            dim: args.dim,
            samples: args.samples,
            init_depth: args.init_depth,
            time_steps: args.time_steps,
            seed: args.seed,
        },
    );
    let cells = montecarlo::sweep_cells(
        &args.distances,
        &args.rates,
        args.dim,
        args.init_depth,
        args.time_steps,
    );
    let estimates = with_thread_pool(args.threads, || {
        percolation::percolation_batch(&cells, args.samples, args.seed)
    })?;
    if args.json {
        return emit_json_rows(&args.out, &manifest, &estimates);
    }
    let mut body = String::new();
    writeln!(body, "{}", SpanEstimate::CSV_HEADER).unwrap();
    for estimate in &estimates {
        writeln!(body, "{}", estimate.csv_row()).unwrap();
    }
    emit_csv(&args.out, &manifest, &body)
}

#[derive(Debug, Serialize)]
struct FitManifest<'a> {
    input: &'a str,
    half_width: f64,
    dim: Option<u32>,
    init_depth: Option<u32>,
    resamples: usize,
    seed: u64,
}

#[derive(Debug, Serialize)]
struct FitReport<'a> {
    manifest: serde_json::Value,
    window_p_lo: f64,
    window_p_hi: f64,
    window_rows: usize,
    fit: &'a fitting::ThresholdFit,
}

fn cmd_fit(args: FitArgs) -> Result<(), CliError> {
    let manifest = manifest_json(
        "fit",
        FitManifest {
            input: &args.input.display().to_string(),
            half_width: args.half_width,
            dim: args.dim,
            init_depth: args.init_depth,
            resamples: args.resamples,
            seed: args.seed,
        },
    );
    let text = fs::read_to_string(&args.input)?;
    let rows = fitting::parse_sweep_csv(&text, args.dim, args.init_depth)
        .map_err(|e| CliError::Runtime(e.to_string()))?;
    let window = fitting::select_window(&rows, args.half_width)
        .map_err(|e| CliError::Runtime(e.to_string()))?;
    let options = FitOptions {
        resamples: args.resamples,
        seed: args.seed,
        ..Default::default()
    };
    let fit =
        fitting::fit_threshold(&window, &options).map_err(|e| CliError::Runtime(e.to_string()))?;
    let report = FitReport {
        manifest: serde_json::from_str(&manifest).expect("manifest is valid JSON"),
        window_p_lo: window.p_lo,
        window_p_hi: window.p_hi,
        window_rows: window.rows.len(),
        fit: &fit,
    };
    let json = serde_json::to_string_pretty(&report).expect("report serializes");
    match &args.out {
        Some(path) => fs::write(path, json)?,
        None => println!("{json}"),
    }
    Ok(())
}

/// Median decode time per distance plus the fitted log-log slope.
pub fn bench_decode_times(
    distances: &[u32],
    dim: u32,
    rate: f64,
    samples: u64,
    seed: u64,
) -> Vec<(u32, f64)> {
    let mut medians = Vec::new();
    for &distance in distances {
        let mut times: Vec<f64> = (0..samples)
            .map(|trial| {
                let config = TrialConfig {
                    seed,
                    trial,
                    ..TrialConfig::new(distance, dim, rate)
                };
                // Time only the 3D decode, not noise generation.
                let trace = montecarlo::run_trial_traced(&config);
                trace.outcome.decode_seconds
            })
            .collect();
        times.sort_by(f64::total_cmp);
        medians.push((distance, times[times.len() / 2]));
    }
    medians
}

/// Least-squares slope of `ln(time)` against `ln(L)`.
pub fn log_log_slope(points: &[(u32, f64)]) -> f64 {
    let n = points.len() as f64;
    let logs: Vec<(f64, f64)> = points
        .iter()
        .map(|&(l, t)| ((l as f64).ln(), t.max(1e-12).ln()))
        .collect();
    let sum_x: f64 = logs.iter().map(|p| p.0).sum();
    let sum_y: f64 = logs.iter().map(|p| p.1).sum();
    let sum_xx: f64 = logs.iter().map(|p| p.0 * p.0).sum();
    let sum_xy: f64 = logs.iter().map(|p| p.0 * p.1).sum();
    (n * sum_xy - sum_x * sum_y) / (n * sum_xx - sum_x * sum_x)
}

fn cmd_bench(args: BenchArgs) -> Result<(), CliError> {
    let mut distances = args.distances.clone();
    distances.sort_unstable();
    distances.dedup();
    if distances.len() < 3 {
        return Err(CliError::Usage(
            "bench needs at least 3 distinct distances for a slope".into(),
        ));
    }
    let started = Instant::now();
    let medians = bench_decode_times(&distances, args.dim, args.rate, args.samples, args.seed);
    println!("L,median_decode_seconds");
    for (distance, median) in &medians {
        println!("{distance},{median}");
    }
    let slope = log_log_slope(&medians);
    println!("# log-log slope: {slope:.3}");
    println!("# wall time: {:.2}s", started.elapsed().as_secs_f64());
    Ok(())
}
