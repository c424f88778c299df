//! Spanning detection for 1-connected defect clusters in `S'`.
//!
//! A cluster spans an axis when it touches both extreme coordinate values of
//! that axis. Only the two spatial directions are checked: a cluster that is
//! string-like purely along the time axis collapses to nothing physical
//! under projection, so time spanning carries no information about logical
//! operators.

use rayon::prelude::*;
use serde::Serialize;

use crate::history::{syndrome_changes, ChangesHistory};
use crate::initstep;
use crate::lattice::{CodeGeometry, QuditDim};
use crate::montecarlo::SweepCell;
use crate::noise::{generate_histories, NoiseParams, StreamPurpose};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PercolationResult {
    pub spans_x: bool,
    pub spans_y: bool,
    pub largest_cluster: usize,
}

struct SpanState {
    parent: Vec<u32>,
    size: Vec<u32>,
    min_x: Vec<u32>,
    max_x: Vec<u32>,
    min_y: Vec<u32>,
    max_y: Vec<u32>,
}

impl SpanState {
    fn new(xs: &[u32], ys: &[u32]) -> Self {
        SpanState {
            parent: (0..xs.len() as u32).collect(),
            size: vec![1; xs.len()],
            min_x: xs.to_vec(),
            max_x: xs.to_vec(),
            min_y: ys.to_vec(),
            max_y: ys.to_vec(),
        }
    }

    fn find(&mut self, mut v: u32) -> u32 {
        while self.parent[v as usize] != v {
            let grandparent = self.parent[self.parent[v as usize] as usize];
            self.parent[v as usize] = grandparent;
            v = grandparent;
        }
        v
    }

    fn union(&mut self, a: u32, b: u32) {
        let ra = self.find(a);
        let rb = self.find(b);
        if ra == rb {
            return;
        }
        let (keep, drop) = if self.size[ra as usize] >= self.size[rb as usize] {
            (ra as usize, rb as usize)
        } else {
            (rb as usize, ra as usize)
        };
        self.parent[drop] = keep as u32;
        self.size[keep] += self.size[drop];
        self.min_x[keep] = self.min_x[keep].min(self.min_x[drop]);
        self.max_x[keep] = self.max_x[keep].max(self.max_x[drop]);
        self.min_y[keep] = self.min_y[keep].min(self.min_y[drop]);
        self.max_y[keep] = self.max_y[keep].max(self.max_y[drop]);
    }
}

/// Check whether any 1-connected cluster spans the x or y axis.
pub fn percolates(changes: &ChangesHistory) -> PercolationResult {
    let dims = changes.dims();
    let defects = changes.defects();
    if defects.is_empty() {
        return PercolationResult {
            spans_x: false,
            spans_y: false,
            largest_cluster: 0,
        };
    }

    let xs: Vec<u32> = defects.iter().map(|d| d.x).collect();
    let ys: Vec<u32> = defects.iter().map(|d| d.y).collect();
    let mut state = SpanState::new(&xs, &ys);

    // Cell lookup for the forward unit neighbors; defects are (t, x, y)
    // sorted so each unordered pair is visited once.
    let mut cells = vec![-1i32; dims.cell_count()];
    for (idx, defect) in defects.iter().enumerate() {
        cells[dims.cell_index(defect.t, defect.x, defect.y)] = idx as i32;
    }
    for (idx, defect) in defects.iter().enumerate() {
        let (t, x, y) = (defect.t as i64, defect.x as i64, defect.y as i64);
        for (nt, nx, ny) in [(t + 1, x, y), (t, x + 1, y), (t, x, y + 1)] {
            if dims.contains(nt, nx, ny) {
                let other = cells[dims.cell_index(nt as u32, nx as u32, ny as u32)];
                if other >= 0 {
                    state.union(idx as u32, other as u32);
                }
            }
        }
    }

    let mut spans_x = false;
    let mut spans_y = false;
    let mut largest = 0usize;
    for idx in 0..defects.len() as u32 {
        let root = state.find(idx);
        if root != idx {
            continue;
        }
        let r = root as usize;
        largest = largest.max(state.size[r] as usize);
        if state.min_x[r] == 0 && state.max_x[r] == dims.cols - 1 {
            spans_x = true;
        }
        if state.min_y[r] == 0 && state.max_y[r] == dims.rows - 1 {
            spans_y = true;
        }
    }
    PercolationResult {
        spans_x,
        spans_y,
        largest_cluster: largest,
    }
}

/// Fraction of noise samples whose changes history contains a spatially
/// spanning cluster. Serializes with the CSV header's field names.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpanEstimate {
    #[serde(rename = "L")]
    pub distance: u32,
    #[serde(rename = "T")]
    pub time_steps: u32,
    #[serde(rename = "d")]
    pub dim: u32,
    #[serde(rename = "p")]
    pub rate: f64,
    pub init_depth: u32,
    pub samples: u64,
    pub span_fraction: f64,
    pub seed: u64,
}

impl SpanEstimate {
    pub const CSV_HEADER: &'static str = "d,L,T,p,init_depth,samples,span_fraction";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{}",
            self.dim,
            self.distance,
            self.time_steps,
            self.rate,
            self.init_depth,
            self.samples,
            self.span_fraction
        )
    }
}

/// Sample the spanning fraction at one sweep cell, applying the
/// initialization sweep first when the cell carries a non-zero depth.
pub fn estimate_spanning(cell: &SweepCell, samples: u64, seed: u64) -> SpanEstimate {
    assert!(samples >= 1);
    let geometry = CodeGeometry::new(cell.distance).expect("valid distance");
    let dim = QuditDim::new(cell.dim).expect("valid qudit dimension");
    let spanning: u64 = (0..samples)
        .into_par_iter()
        .map(|sample| {
            // Reuse the trial stream derivation so percolation samples see
            // the same noise a decoding trial of this cell would.
            let config = cell.trial_config(seed, sample);
            let params = NoiseParams::new(cell.rate, dim);
            let mut qudit_rng = config.noise_stream(StreamPurpose::QuditNoise);
            let mut measurement_rng = config.noise_stream(StreamPurpose::MeasurementNoise);
            let histories = generate_histories(
                &params,
                &geometry,
                cell.time_steps as usize,
                &mut qudit_rng,
                &mut measurement_rng,
            );
            let changes = syndrome_changes(&histories.measured, &geometry, dim);
            let checked = if cell.init_depth > 0 {
                initstep::initialize(&changes, cell.init_depth, &geometry).reduced
            } else {
                changes
            };
            let result = percolates(&checked);
            (result.spans_x || result.spans_y) as u64
        })
        .sum();
    SpanEstimate {
        distance: cell.distance,
        time_steps: cell.time_steps,
        dim: cell.dim,
        rate: cell.rate,
        init_depth: cell.init_depth,
        samples,
        span_fraction: spanning as f64 / samples as f64,
        seed,
    }
}

/// Spanning fractions over a whole sweep, in input cell order.
pub fn percolation_batch(cells: &[SweepCell], samples: u64, seed: u64) -> Vec<SpanEstimate> {
    cells
        .iter()
        .map(|cell| estimate_spanning(cell, samples, seed))
        .collect()
}
