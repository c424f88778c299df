//! Complete fault-tolerant decoding trials and batched success estimates.
//!
//! One trial runs the whole pipeline: sample noise histories, build the
//! syndrome-changes grid, optionally run the initialization sweep, decode,
//! project the 3D corrections onto the final error layer, and close with a
//! noise-free 2D decoding round whose output always has trivial syndrome.
//! Success means the residual operator is a stabilizer.

use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::hdrg::{self, DecodeTrace, DecoderConfig};
use crate::history::{project_correction, single_layer_changes, syndrome_changes};
use crate::initstep;
use crate::lattice::{compute_syndrome, is_stabilizer, logical_class, CodeGeometry, QuditDim};
use crate::noise::{generate_histories, NoiseParams, RngStream, StreamPurpose};

/// Everything a single trial needs. `seed` is the user-facing master seed;
/// the per-trial random streams also fold in the cell parameters so each
/// sweep cell draws independent noise.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TrialConfig {
    pub distance: u32,
    pub time_steps: u32,
    pub dim: u32,
    pub rate: f64,
    pub init_depth: u32,
    pub seed: u64,
    pub trial: u64,
}

impl TrialConfig {
    pub fn new(distance: u32, dim: u32, rate: f64) -> Self {
        TrialConfig {
            distance,
            time_steps: distance,
            dim,
            rate,
            init_depth: 0,
            seed: 0,
            trial: 0,
        }
    }

    /// The random stream for one purpose within this trial.
    pub fn noise_stream(&self, purpose: StreamPurpose) -> RngStream {
        RngStream::derive(self.stream_master(), self.trial, purpose)
    }

    /// Master seed for this trial's streams: the user seed mixed with every
    /// cell parameter, so distinct cells never share noise realizations.
    fn stream_master(&self) -> u64 {
        let mut acc = self.seed;
        for value in [
            self.distance as u64,
            self.time_steps as u64,
            self.dim as u64,
            self.rate.to_bits(),
            self.init_depth as u64,
        ] {
            acc = mix(acc, value);
        }
        acc
    }
}

fn mix(acc: u64, value: u64) -> u64 {
    let mut z = acc ^ value.wrapping_mul(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Result of one decoding trial.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TrialOutcome {
    pub success: bool,
    pub levels_used: u32,
    pub defects_initial: usize,
    pub defects_after_init: usize,
    pub decode_seconds: f64,
}

/// Full diagnostic record of one trial, for `--trace` output.
#[derive(Debug, Clone, Serialize)]
pub struct TrialTrace {
    pub config: TrialConfig,
    pub outcome: TrialOutcome,
    pub init_annihilated: Vec<usize>,
    pub decode: DecodeTrace,
}

/// Run one full fault-tolerant trial.
pub fn run_trial(config: &TrialConfig) -> TrialOutcome {
    run_trial_traced(config).outcome
}

/// Run one trial keeping the per-level decoder trace.
pub fn run_trial_traced(config: &TrialConfig) -> TrialTrace {
    let geometry = CodeGeometry::new(config.distance).expect("valid distance");
    let dim = QuditDim::new(config.dim).expect("valid qudit dimension");
    let params = NoiseParams::new(config.rate, dim);
    let mut qudit_rng = config.noise_stream(StreamPurpose::QuditNoise);
    let mut measurement_rng = config.noise_stream(StreamPurpose::MeasurementNoise);

    // (1)-(2) noise histories and the syndrome-changes grid.
    let histories = generate_histories(
        &params,
        &geometry,
        config.time_steps as usize,
        &mut qudit_rng,
        &mut measurement_rng,
    );
    let changes = syndrome_changes(&histories.measured, &geometry, dim);
    let defects_initial = changes.defect_count();

    // (3) initialization sweep, identity at depth 0.
    let init = initstep::initialize(&changes, config.init_depth, &geometry);
    let defects_after_init = init.reduced.defect_count();

    // (4) hard-decision decoding of the reduced history.
    let started = Instant::now();
    let (decoded, decode_trace) =
        hdrg::decode_with_trace(&init.reduced, &geometry, &DecoderConfig::fault_tolerant());
    let decode_seconds = started.elapsed().as_secs_f64();

    // (5)-(6) project the composed corrections onto the final error layer.
    let combined = init.corrections.compose(&decoded, dim);
    let projected = project_correction(&combined, &geometry, dim);
    let residual = histories.errors.last().unwrap().compose(&projected, dim);

    // (7) noise-free 2D round: the time boundary is closed so every defect
    // is fixed physically, which guarantees a trivial final syndrome.
    let final_syndrome = compute_syndrome(&residual, &geometry, dim);
    let final_changes = single_layer_changes(&final_syndrome, &geometry, dim);
    let cleanup = hdrg::decode(&final_changes, &geometry, &DecoderConfig::noise_free_2d());
    let corrected = residual.compose(&project_correction(&cleanup, &geometry, dim), dim);

    // (8) verdict; the cleanup round must have cleared the syndrome.
    assert!(
        compute_syndrome(&corrected, &geometry, dim).is_zero(),
        "noise-free round left a non-trivial syndrome"
    );
    let success = is_stabilizer(&corrected, &geometry, dim);
    debug_assert_eq!(success, logical_class(&corrected, &geometry, dim) == 0);

    TrialTrace {
        config: *config,
        outcome: TrialOutcome {
            success,
            levels_used: decode_trace.levels_used(),
            defects_initial,
            defects_after_init,
            decode_seconds,
        },
        init_annihilated: init.annihilated,
        decode: decode_trace,
    }
}

/// One cell of a parameter sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepCell {
    pub distance: u32,
    pub time_steps: u32,
    pub dim: u32,
    pub rate: f64,
    pub init_depth: u32,
}

impl SweepCell {
    pub fn trial_config(&self, seed: u64, trial: u64) -> TrialConfig {
        TrialConfig {
            distance: self.distance,
            time_steps: self.time_steps,
            dim: self.dim,
            rate: self.rate,
            init_depth: self.init_depth,
            seed,
            trial,
        }
    }
}

/// Monte Carlo success estimate for one sweep cell. Serializes with the
/// same field names the CSV header uses.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SuccessEstimate {
    #[serde(rename = "L")]
    pub distance: u32,
    #[serde(rename = "T")]
    pub time_steps: u32,
    #[serde(rename = "d")]
    pub dim: u32,
    #[serde(rename = "p")]
    pub rate: f64,
    pub init_depth: u32,
    pub trials: u64,
    pub successes: u64,
    pub p_succ: f64,
    pub stderr: f64,
    pub seed: u64,
}

impl SuccessEstimate {
    fn from_counts(cell: &SweepCell, trials: u64, successes: u64, seed: u64) -> Self {
        let p = successes as f64 / trials as f64;
        SuccessEstimate {
            distance: cell.distance,
            time_steps: cell.time_steps,
            dim: cell.dim,
            rate: cell.rate,
            init_depth: cell.init_depth,
            trials,
            successes,
            p_succ: p,
            stderr: (p * (1.0 - p) / trials as f64).sqrt(),
            seed,
        }
    }

    pub const CSV_HEADER: &'static str = "d,L,T,p,init_depth,trials,successes,p_succ,stderr,seed";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{}",
            self.dim,
            self.distance,
            self.time_steps,
            self.rate,
            self.init_depth,
            self.trials,
            self.successes,
            self.p_succ,
            self.stderr,
            self.seed
        )
    }
}

/// Estimate the success probability of one cell over `trials` trials.
/// Trials run on the current rayon pool; counts are order-independent, so
/// the estimate is identical for any worker count.
pub fn estimate_cell(cell: &SweepCell, trials: u64, seed: u64) -> SuccessEstimate {
    assert!(trials >= 1);
    let successes = (0..trials)
        .into_par_iter()
        .map(|trial| run_trial(&cell.trial_config(seed, trial)).success as u64)
        .sum();
    SuccessEstimate::from_counts(cell, trials, successes, seed)
}

/// Run every cell of a sweep. Cells are independent; the output order
/// matches the input order.
pub fn run_batch(cells: &[SweepCell], trials: u64, seed: u64) -> Vec<SuccessEstimate> {
    cells
        .iter()
        .map(|cell| estimate_cell(cell, trials, seed))
        .collect()
}

/// Cross product of distances and rates at fixed dimension and depth, with
/// `T = L` unless overridden.
pub fn sweep_cells(
    distances: &[u32],
    rates: &[f64],
    dim: u32,
    init_depth: u32,
    time_steps: Option<u32>,
) -> Vec<SweepCell> {
    let mut cells = Vec::new();
    for &distance in distances {
        for &rate in rates {
            cells.push(SweepCell {
                distance,
                time_steps: time_steps.unwrap_or(distance),
                dim,
                rate,
                init_depth,
            });
        }
    }
    cells
}
