//! Threshold estimation by finite-size rescaling.
//!
//! Success probabilities near the crossing of the different-`L` curves are
//! fitted to a quadratic in the rescaled variable `x = (p - p_th) L^{1/nu}`
//! with a finite-size correction term:
//!
//! ```text
//! P_succ = A + B x + C x^2 + D L^{-1/mu}
//! ```
//!
//! For fixed `(p_th, nu, mu)` the coefficients `A..D` solve a weighted
//! linear least-squares problem; the outer nonlinear search is a bounded
//! Nelder-Mead simplex. Uncertainty on `p_th` comes from bootstrap
//! resampling of the data rows.

// Index loops over small fixed-size systems read better than iterator
// gymnastics here.
#![allow(clippy::needless_range_loop)]

use rand::Rng;
use serde::Serialize;
use thiserror::Error;

use crate::noise::{RngStream, StreamPurpose};

#[derive(Debug, Error, PartialEq)]
pub enum FitError {
    #[error("degenerate fit input: {0}")]
    Degenerate(String),
    #[error("no crossing of the two largest-L curves inside the data range")]
    NoCrossing,
    #[error("simplex search did not converge after {iterations} iterations (best {best})")]
    NoConvergence { iterations: usize, best: f64 },
    #[error("window selection failed: {0}")]
    Window(String),
}

/// One data point: success probability at `(L, p)` with its binomial error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FitRow {
    pub distance: u32,
    pub rate: f64,
    pub p_succ: f64,
    pub stderr: f64,
}

/// Rows selected for fitting, restricted to rates near the curve crossing.
#[derive(Debug, Clone, Serialize)]
pub struct DataWindow {
    pub rows: Vec<FitRow>,
    pub p_lo: f64,
    pub p_hi: f64,
}

impl DataWindow {
    pub fn new(rows: Vec<FitRow>) -> Result<Self, FitError> {
        let (p_lo, p_hi) = rows
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), row| {
                (lo.min(row.rate), hi.max(row.rate))
            });
        let window = DataWindow { rows, p_lo, p_hi };
        window.validate()?;
        Ok(window)
    }

    fn validate(&self) -> Result<(), FitError> {
        let mut distances: Vec<u32> = self.rows.iter().map(|r| r.distance).collect();
        distances.sort_unstable();
        distances.dedup();
        if distances.len() < 3 {
            return Err(FitError::Degenerate(format!(
                "need at least 3 distinct distances, got {}",
                distances.len()
            )));
        }
        let mut rates: Vec<u64> = self.rows.iter().map(|r| r.rate.to_bits()).collect();
        rates.sort_unstable();
        rates.dedup();
        if rates.len() < 3 {
            return Err(FitError::Degenerate(format!(
                "need at least 3 distinct rates, got {}",
                rates.len()
            )));
        }
        let first = self.rows[0].p_succ;
        if self.rows.iter().all(|r| (r.p_succ - first).abs() < 1e-12) {
            return Err(FitError::Degenerate(
                "success probabilities are constant".into(),
            ));
        }
        Ok(())
    }
}

/// Estimate where the two largest-`L` curves cross, by linear interpolation
/// of their difference over the rates both curves share, then keep every row
/// within `half_width` of that crossing.
pub fn select_window(rows: &[FitRow], half_width: f64) -> Result<DataWindow, FitError> {
    if rows.is_empty() {
        return Err(FitError::Window("empty input table".into()));
    }
    let mut distances: Vec<u32> = rows.iter().map(|r| r.distance).collect();
    distances.sort_unstable();
    distances.dedup();
    if distances.len() < 2 {
        return Err(FitError::Window("need at least two distances".into()));
    }
    let largest = distances[distances.len() - 1];
    let second = distances[distances.len() - 2];
    let crossing = estimate_crossing(rows, second, largest)?;
    let selected: Vec<FitRow> = rows
        .iter()
        .filter(|r| (r.rate - crossing).abs() <= half_width)
        .copied()
        .collect();
    if selected.is_empty() {
        return Err(FitError::Window(format!(
            "no rows within {half_width} of crossing {crossing}"
        )));
    }
    DataWindow::new(selected)
}

fn curve_of(rows: &[FitRow], distance: u32) -> Vec<(f64, f64)> {
    let mut curve: Vec<(f64, f64)> = rows
        .iter()
        .filter(|r| r.distance == distance)
        .map(|r| (r.rate, r.p_succ))
        .collect();
    curve.sort_by(|a, b| a.0.total_cmp(&b.0));
    curve
}

fn estimate_crossing(rows: &[FitRow], low_l: u32, high_l: u32) -> Result<f64, FitError> {
    let low_curve = curve_of(rows, low_l);
    let high_curve = curve_of(rows, high_l);
    // The difference is evaluated on the rates both curves share, carrying
    // the combined binomial error of the two points.
    let mut diffs: Vec<(f64, f64, f64)> = Vec::new();
    for &(p, y_high) in &high_curve {
        if let Some(&(_, y_low)) = low_curve.iter().find(|&&(q, _)| q == p) {
            let se_high = rows
                .iter()
                .find(|r| r.distance == high_l && r.rate == p)
                .map_or(0.0, |r| r.stderr);
            let se_low = rows
                .iter()
                .find(|r| r.distance == low_l && r.rate == p)
                .map_or(0.0, |r| r.stderr);
            let sigma = (se_high * se_high + se_low * se_low).sqrt().max(1e-6);
            diffs.push((p, y_high - y_low, sigma));
        }
    }
    if diffs.len() < 2 {
        return Err(FitError::Window("curves share fewer than two rates".into()));
    }
    let (p_min, p_max) = (diffs[0].0, diffs[diffs.len() - 1].0);

    // Weighted quadratic trend of the difference curve; its decreasing root
    // is the crossing. A smooth trend is robust against the single noisy
    // sign flips that derail naive segment interpolation.
    let mut normal = [[0.0f64; 3]; 3];
    let mut rhs = [0.0f64; 3];
    for &(p, y, sigma) in &diffs {
        let basis = [1.0, p, p * p];
        let weight = 1.0 / (sigma * sigma);
        for i in 0..3 {
            for j in 0..3 {
                normal[i][j] += weight * basis[i] * basis[j];
            }
            rhs[i] += weight * basis[i] * y;
        }
    }
    let [c, b, a] = solve3(normal, rhs).ok_or(FitError::NoCrossing)?;
    let in_range = |p: f64| (p_min..=p_max).contains(&p);
    let crossing = if a.abs() < 1e-9 {
        if b == 0.0 {
            return Err(FitError::NoCrossing);
        }
        -c / b
    } else {
        let disc = b * b - 4.0 * a * c;
        if disc < 0.0 {
            return Err(FitError::NoCrossing);
        }
        let roots = [
            (-b + disc.sqrt()) / (2.0 * a),
            (-b - disc.sqrt()) / (2.0 * a),
        ];
        // Keep the root where the difference is falling: below the crossing
        // the larger code wins, above it the smaller one does.
        let falling: Vec<f64> = roots
            .into_iter()
            .filter(|&r| in_range(r) && 2.0 * a * r + b < 0.0)
            .collect();
        match falling.first() {
            Some(&r) => r,
            None => *roots
                .iter()
                .find(|&&r| in_range(r))
                .ok_or(FitError::NoCrossing)?,
        }
    };
    if !in_range(crossing) {
        return Err(FitError::NoCrossing);
    }
    Ok(crossing)
}

fn solve3(mut m: [[f64; 3]; 3], mut b: [f64; 3]) -> Option<[f64; 3]> {
    for col in 0..3 {
        let pivot = (col..3).max_by(|&i, &j| m[i][col].abs().total_cmp(&m[j][col].abs()))?;
        if m[pivot][col].abs() < 1e-30 {
            return None;
        }
        m.swap(col, pivot);
        b.swap(col, pivot);
        for row in col + 1..3 {
            let factor = m[row][col] / m[col][col];
            for k in col..3 {
                m[row][k] -= factor * m[col][k];
            }
            b[row] -= factor * b[col];
        }
    }
    let mut solution = [0.0f64; 3];
    for col in (0..3).rev() {
        let mut value = b[col];
        for k in col + 1..3 {
            value -= m[col][k] * solution[k];
        }
        solution[col] = value / m[col][col];
    }
    Some(solution)
}

/// Fitted threshold with its rescaling exponents and fit diagnostics.
#[derive(Debug, Clone, Serialize)]
pub struct ThresholdFit {
    pub p_th: f64,
    pub nu: f64,
    pub mu: f64,
    /// `A, B, C, D` of the rescaled quadratic.
    pub coefficients: [f64; 4],
    pub residual_sum: f64,
    pub p_th_stderr: f64,
    pub resamples: usize,
}

/// Options for the nonlinear search and the bootstrap.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct FitOptions {
    pub resamples: usize,
    pub seed: u64,
    pub max_iterations: usize,
}

impl Default for FitOptions {
    fn default() -> Self {
        FitOptions {
            resamples: 200,
            seed: 0,
            max_iterations: 20_000,
        }
    }
}

const NU_RANGE: (f64, f64) = (0.5, 3.0);
const MU_RANGE: (f64, f64) = (0.3, 5.0);
const WEIGHT_FLOOR_STDERR: f64 = 1e-4;

/// Weighted least squares of the model for fixed nonlinear parameters.
/// Returns the coefficients and the weighted residual sum, or `None` when
/// the normal equations are singular.
fn solve_linear(rows: &[FitRow], p_th: f64, nu: f64, mu: f64) -> Option<([f64; 4], f64)> {
    let mut normal = [[0.0f64; 4]; 4];
    let mut rhs = [0.0f64; 4];
    for row in rows {
        let l = row.distance as f64;
        let x = (row.rate - p_th) * l.powf(1.0 / nu);
        let basis = [1.0, x, x * x, l.powf(-1.0 / mu)];
        let sigma = row.stderr.max(WEIGHT_FLOOR_STDERR);
        let weight = 1.0 / (sigma * sigma);
        for i in 0..4 {
            for j in 0..4 {
                normal[i][j] += weight * basis[i] * basis[j];
            }
            rhs[i] += weight * basis[i] * row.p_succ;
        }
    }
    let coefficients = solve4(normal, rhs)?;
    let mut residual_sum = 0.0;
    for row in rows {
        let l = row.distance as f64;
        let x = (row.rate - p_th) * l.powf(1.0 / nu);
        let predicted = coefficients[0]
            + coefficients[1] * x
            + coefficients[2] * x * x
            + coefficients[3] * l.powf(-1.0 / mu);
        let sigma = row.stderr.max(WEIGHT_FLOOR_STDERR);
        let r = (row.p_succ - predicted) / sigma;
        residual_sum += r * r;
    }
    Some((coefficients, residual_sum))
}

/// Gaussian elimination with partial pivoting on a 4x4 system.
fn solve4(mut m: [[f64; 4]; 4], mut b: [f64; 4]) -> Option<[f64; 4]> {
    for col in 0..4 {
        let pivot = (col..4).max_by(|&i, &j| m[i][col].abs().total_cmp(&m[j][col].abs()))?;
        if m[pivot][col].abs() < 1e-12 {
            return None;
        }
        m.swap(col, pivot);
        b.swap(col, pivot);
        for row in col + 1..4 {
            let factor = m[row][col] / m[col][col];
            for k in col..4 {
                m[row][k] -= factor * m[col][k];
            }
            b[row] -= factor * b[col];
        }
    }
    let mut solution = [0.0f64; 4];
    for col in (0..4).rev() {
        let mut value = b[col];
        for k in col + 1..4 {
            value -= m[col][k] * solution[k];
        }
        solution[col] = value / m[col][col];
    }
    Some(solution)
}

fn objective(rows: &[FitRow], bounds: (f64, f64), params: [f64; 3]) -> f64 {
    let [p_th, nu, mu] = params;
    // Penalty walls keep the simplex inside the admissible box.
    let mut penalty = 0.0;
    let mut wall = |value: f64, lo: f64, hi: f64| {
        if value < lo {
            penalty += 1e8 * (1.0 + (lo - value));
        }
        if value > hi {
            penalty += 1e8 * (1.0 + (value - hi));
        }
    };
    wall(p_th, bounds.0, bounds.1);
    wall(nu, NU_RANGE.0, NU_RANGE.1);
    wall(mu, MU_RANGE.0, MU_RANGE.1);
    if penalty > 0.0 {
        return penalty;
    }
    match solve_linear(rows, p_th, nu, mu) {
        Some((_, residual)) => residual,
        None => 1e12,
    }
}

/// Standard Nelder-Mead on the three nonlinear parameters, restarted once
/// from the incumbent to escape flat steps.
fn simplex_search(
    rows: &[FitRow],
    bounds: (f64, f64),
    start: [f64; 3],
    scale: [f64; 3],
    max_iterations: usize,
) -> Result<([f64; 3], f64, usize), FitError> {
    let f = |p: [f64; 3]| objective(rows, bounds, p);
    let mut best = (start, f(start));
    let mut used = 0usize;
    for round in 0..3 {
        let shrink = 1.0 / (round as f64 + 1.0);
        let step = [scale[0] * shrink, scale[1] * shrink, scale[2] * shrink];
        let (point, value, iterations) =
            nelder_mead(&f, best.0, step, max_iterations.saturating_sub(used))?;
        used += iterations;
        if value < best.1 {
            best = (point, value);
        }
    }
    Ok((best.0, best.1, used))
}

fn nelder_mead(
    f: &dyn Fn([f64; 3]) -> f64,
    start: [f64; 3],
    step: [f64; 3],
    max_iterations: usize,
) -> Result<([f64; 3], f64, usize), FitError> {
    const ALPHA: f64 = 1.0; // reflection
    const GAMMA: f64 = 2.0; // expansion
    const RHO: f64 = 0.5; // contraction
    const SIGMA: f64 = 0.5; // shrink

    let mut simplex: Vec<([f64; 3], f64)> = Vec::with_capacity(4);
    simplex.push((start, f(start)));
    for axis in 0..3 {
        let mut vertex = start;
        vertex[axis] += step[axis];
        simplex.push((vertex, f(vertex)));
    }

    let mut iterations = 0usize;
    loop {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let best = simplex[0].1;
        let worst = simplex[3].1;
        let spread = (worst - best).abs();
        let size: f64 = (1..4)
            .map(|i| {
                (0..3)
                    .map(|k| (simplex[i].0[k] - simplex[0].0[k]).abs())
                    .fold(0.0, f64::max)
            })
            .fold(0.0, f64::max);
        if spread < 1e-12 * (1.0 + best.abs()) && size < 1e-10 {
            return Ok((simplex[0].0, simplex[0].1, iterations));
        }
        if iterations >= max_iterations {
            return Err(FitError::NoConvergence { iterations, best });
        }
        iterations += 1;

        let mut centroid = [0.0f64; 3];
        for vertex in &simplex[..3] {
            for k in 0..3 {
                centroid[k] += vertex.0[k] / 3.0;
            }
        }
        let at = |t: f64| {
            let mut p = [0.0f64; 3];
            for k in 0..3 {
                p[k] = centroid[k] + t * (simplex[3].0[k] - centroid[k]);
            }
            p
        };

        let reflected = at(-ALPHA);
        let reflected_value = f(reflected);
        if reflected_value < simplex[0].1 {
            let expanded = at(-GAMMA);
            let expanded_value = f(expanded);
            simplex[3] = if expanded_value < reflected_value {
                (expanded, expanded_value)
            } else {
                (reflected, reflected_value)
            };
            continue;
        }
        if reflected_value < simplex[2].1 {
            simplex[3] = (reflected, reflected_value);
            continue;
        }
        let contracted = if reflected_value < simplex[3].1 {
            at(-RHO)
        } else {
            at(RHO)
        };
        let contracted_value = f(contracted);
        if contracted_value < simplex[3].1.min(reflected_value) {
            simplex[3] = (contracted, contracted_value);
            continue;
        }
        // Shrink toward the best vertex.
        for i in 1..4 {
            for k in 0..3 {
                simplex[i].0[k] = simplex[0].0[k] + SIGMA * (simplex[i].0[k] - simplex[0].0[k]);
            }
            simplex[i].1 = f(simplex[i].0);
        }
    }
}

/// Fit the rescaled quadratic to a data window.
pub fn fit_threshold(window: &DataWindow, options: &FitOptions) -> Result<ThresholdFit, FitError> {
    window.validate()?;
    let bounds = (window.p_lo, window.p_hi);
    let start = [0.5 * (window.p_lo + window.p_hi), 1.0, 1.0];
    let width = (window.p_hi - window.p_lo).max(1e-6);
    let scale = [0.25 * width, 0.25, 0.5];
    let max_iterations = options.max_iterations;
    let (point, residual, _) = simplex_search(&window.rows, bounds, start, scale, max_iterations)?;
    let (coefficients, _) = solve_linear(&window.rows, point[0], point[1], point[2])
        .ok_or_else(|| FitError::Degenerate("singular design at optimum".into()))?;

    // Bootstrap over data rows for the threshold uncertainty.
    let mut rng = RngStream::derive(options.seed, 0, StreamPurpose::Bootstrap);
    let mut estimates = Vec::with_capacity(options.resamples);
    for _ in 0..options.resamples {
        let resampled: Vec<FitRow> = (0..window.rows.len())
            .map(|_| window.rows[rng.random_range(0..window.rows.len())])
            .collect();
        let resample_rows = DataWindow {
            rows: resampled,
            p_lo: window.p_lo,
            p_hi: window.p_hi,
        };
        if resample_rows.validate().is_err() {
            continue;
        }
        if let Ok((p, _, _)) =
            simplex_search(&resample_rows.rows, bounds, point, scale, max_iterations)
        {
            estimates.push(p[0]);
        }
    }
    if options.resamples > 0 && estimates.len() < options.resamples / 2 {
        return Err(FitError::Degenerate(format!(
            "only {} of {} bootstrap resamples converged",
            estimates.len(),
            options.resamples
        )));
    }
    let p_th_stderr = if estimates.len() > 1 {
        let mean = estimates.iter().sum::<f64>() / estimates.len() as f64;
        (estimates
            .iter()
            .map(|e| (e - mean) * (e - mean))
            .sum::<f64>()
            / (estimates.len() - 1) as f64)
            .sqrt()
    } else {
        0.0
    };

    Ok(ThresholdFit {
        p_th: point[0],
        nu: point[1],
        mu: point[2],
        coefficients,
        residual_sum: residual,
        p_th_stderr,
        resamples: estimates.len(),
    })
}

/// Parse rows out of a sweep CSV produced by the `sweep` subcommand.
/// Comment lines starting with `#` and the header line are skipped.
pub fn parse_sweep_csv(
    text: &str,
    dim_filter: Option<u32>,
    depth_filter: Option<u32>,
) -> Result<Vec<FitRow>, FitError> {
    let mut rows = Vec::new();
    let mut seen_dims: Vec<u32> = Vec::new();
    let mut seen_depths: Vec<u32> = Vec::new();
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') || line.starts_with("d,") {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 10 {
            return Err(FitError::Window(format!(
                "expected 10 CSV fields, got {}: {line}",
                fields.len()
            )));
        }
        let parse_err = |what: &str| FitError::Window(format!("bad {what} in line: {line}"));
        let dim: u32 = fields[0].parse().map_err(|_| parse_err("d"))?;
        let distance: u32 = fields[1].parse().map_err(|_| parse_err("L"))?;
        let rate: f64 = fields[3].parse().map_err(|_| parse_err("p"))?;
        let depth: u32 = fields[4].parse().map_err(|_| parse_err("init_depth"))?;
        let p_succ: f64 = fields[7].parse().map_err(|_| parse_err("p_succ"))?;
        let stderr: f64 = fields[8].parse().map_err(|_| parse_err("stderr"))?;
        if dim_filter.is_some_and(|d| d != dim) || depth_filter.is_some_and(|k| k != depth) {
            continue;
        }
        if !seen_dims.contains(&dim) {
            seen_dims.push(dim);
        }
        if !seen_depths.contains(&depth) {
            seen_depths.push(depth);
        }
        rows.push(FitRow {
            distance,
            rate,
            p_succ,
            stderr,
        });
    }
    if seen_dims.len() > 1 {
        return Err(FitError::Window(
            "multiple qudit dimensions in input; pass a dimension filter".into(),
        ));
    }
    if seen_depths.len() > 1 {
        return Err(FitError::Window(
            "multiple init depths in input; pass a depth filter".into(),
        ));
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn model(l: u32, p: f64, p_th: f64, nu: f64, mu: f64, coeff: [f64; 4]) -> f64 {
        let lf = l as f64;
        let x = (p - p_th) * lf.powf(1.0 / nu);
        coeff[0] + coeff[1] * x + coeff[2] * x * x + coeff[3] * lf.powf(-1.0 / mu)
    }

    fn synthetic(p_th: f64, nu: f64, mu: f64, coeff: [f64; 4]) -> Vec<FitRow> {
        let mut rows = Vec::new();
        for l in [6u32, 10, 14] {
            for i in 0..9 {
                let p = 0.022 + 0.002 * i as f64;
                rows.push(FitRow {
                    distance: l,
                    rate: p,
                    p_succ: model(l, p, p_th, nu, mu, coeff),
                    stderr: 0.01,
                });
            }
        }
        rows
    }

    #[test]
    fn exact_recovery_on_noiseless_model_data() {
        let truth = [0.85, -0.9, -4.0, 0.05];
        let rows = synthetic(0.03, 1.0, 1.0, truth);
        let window = DataWindow::new(rows).unwrap();
        let fit = fit_threshold(
            &window,
            &FitOptions {
                resamples: 50,
                ..Default::default()
            },
        )
        .unwrap();
        assert!(
            (fit.p_th - 0.03).abs() < 1e-4,
            "recovered p_th = {}",
            fit.p_th
        );
        assert!(fit.residual_sum < 1e-10, "rss = {}", fit.residual_sum);
        for (got, want) in fit.coefficients.iter().zip(truth) {
            assert!(
                (got - want).abs() < 1e-3,
                "coefficients {:?}",
                fit.coefficients
            );
        }
        assert!(fit.p_th >= window.p_lo && fit.p_th <= window.p_hi);
    }

    #[test]
    fn fit_invariant_under_row_permutation() {
        let rows = synthetic(0.028, 1.2, 1.5, [0.8, -1.1, -3.0, 0.08]);
        let mut reversed = rows.clone();
        reversed.reverse();
        let options = FitOptions {
            resamples: 0,
            ..Default::default()
        };
        let a = fit_threshold(&DataWindow::new(rows).unwrap(), &options).unwrap();
        let b = fit_threshold(&DataWindow::new(reversed).unwrap(), &options).unwrap();
        assert!((a.p_th - b.p_th).abs() < 1e-6);
    }

    #[test]
    fn constant_data_is_degenerate() {
        let rows: Vec<FitRow> = [6u32, 10, 14]
            .iter()
            .flat_map(|&l| {
                (0..4).map(move |i| FitRow {
                    distance: l,
                    rate: 0.02 + 0.002 * i as f64,
                    p_succ: 0.5,
                    stderr: 0.01,
                })
            })
            .collect();
        assert!(matches!(
            DataWindow::new(rows),
            Err(FitError::Degenerate(_))
        ));
    }

    #[test]
    fn too_few_distances_is_degenerate() {
        let rows: Vec<FitRow> = (0..6)
            .map(|i| FitRow {
                distance: 6,
                rate: 0.02 + 0.001 * i as f64,
                p_succ: 0.5 + 0.01 * i as f64,
                stderr: 0.01,
            })
            .collect();
        assert!(matches!(
            DataWindow::new(rows),
            Err(FitError::Degenerate(_))
        ));
    }

    #[test]
    fn window_selection_centers_on_crossing() {
        // Two monotone curves crossing at p = 0.02.
        let mut rows = Vec::new();
        for i in 0..9 {
            let p = 0.012 + 0.002 * i as f64;
            rows.push(FitRow {
                distance: 6,
                rate: p,
                p_succ: 0.9 - 10.0 * (p - 0.02),
                stderr: 0.01,
            });
            rows.push(FitRow {
                distance: 10,
                rate: p,
                p_succ: 0.9 - 25.0 * (p - 0.02),
                stderr: 0.01,
            });
            rows.push(FitRow {
                distance: 14,
                rate: p,
                p_succ: 0.9 - 40.0 * (p - 0.02),
                stderr: 0.01,
            });
        }
        let window = select_window(&rows, 0.004).unwrap();
        assert!(window.p_lo >= 0.016 - 1e-12 && window.p_hi <= 0.024 + 1e-12);
        assert!(window
            .rows
            .iter()
            .all(|r| (r.rate - 0.02).abs() <= 0.004 + 1e-12));
    }

    #[test]
    fn non_crossing_curves_report_error() {
        let mut rows = Vec::new();
        for i in 0..5 {
            let p = 0.01 + 0.002 * i as f64;
            rows.push(FitRow {
                distance: 6,
                rate: p,
                p_succ: 0.9,
                stderr: 0.01,
            });
            rows.push(FitRow {
                distance: 10,
                rate: p,
                p_succ: 0.8,
                stderr: 0.01,
            });
        }
        assert!(matches!(
            select_window(&rows, 0.004),
            Err(FitError::NoCrossing)
        ));
    }

    #[test]
    fn csv_parser_roundtrip() {
        let text = "\
# manifest: {}
d,L,T,p,init_depth,trials,successes,p_succ,stderr,seed
2,6,6,0.016,0,100,90,0.9,0.03,7
2,10,10,0.016,0,100,95,0.95,0.0217944947177,7
";
        let rows = parse_sweep_csv(text, None, None).unwrap();
        assert_eq!(rows.len(), 2);
        assert_eq!(rows[0].distance, 6);
        assert_eq!(rows[1].p_succ, 0.95);
    }

    #[test]
    fn csv_parser_rejects_mixed_dimensions() {
        let text = "\
2,6,6,0.016,0,100,90,0.9,0.03,7
3,6,6,0.016,0,100,90,0.9,0.03,7
";
        assert!(parse_sweep_csv(text, None, None).is_err());
        assert_eq!(parse_sweep_csv(text, Some(3), None).unwrap().len(), 1);
    }
}
