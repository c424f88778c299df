//! Uncorrelated noise model: per-qudit `X^k` errors and per-measurement
//! outcome shifts, each non-trivial charge drawn with probability `p/(d-1)`.

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::lattice::{compute_syndrome, CodeGeometry, ErrorLayer, QuditDim, SyndromeLayer};

/// Noise strength for one sector: each edge (and each measurement outcome)
/// independently picks up a charge `k in [1, d-1]` with probability
/// `p/(d-1)` per time step.
#[derive(Debug, Clone, Copy)]
pub struct NoiseParams {
    pub p: f64,
    pub dim: QuditDim,
}

impl NoiseParams {
    pub fn new(p: f64, dim: QuditDim) -> Self {
        assert!((0.0..1.0).contains(&p), "error rate must be in [0, 1)");
        NoiseParams { p, dim }
    }
}

/// Label separating the independent random sub-streams of one trial.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StreamPurpose {
    QuditNoise = 0,
    MeasurementNoise = 1,
    Bootstrap = 2,
}

const STREAM_LANES: u64 = 4;

fn splitmix64(state: &mut u64) {
    *state = state.wrapping_add(0x9e37_79b9_7f4a_7c15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    *state = z ^ (z >> 31);
}

/// Deterministic counter-based random stream.
///
/// The stream is fully determined by `(master seed, trial index, purpose)`,
/// so any parallel schedule reproduces exactly the draws of a serial run.
pub struct RngStream(ChaCha8Rng);

impl RngStream {
    pub fn derive(master: u64, trial: u64, purpose: StreamPurpose) -> Self {
        let mut state = master;
        let mut seed = [0u8; 32];
        for chunk in seed.chunks_exact_mut(8) {
            splitmix64(&mut state);
            chunk.copy_from_slice(&state.to_le_bytes());
        }
        let mut rng = ChaCha8Rng::from_seed(seed);
        rng.set_stream(trial.wrapping_mul(STREAM_LANES) + purpose as u64);
        RngStream(rng)
    }
}

impl RngCore for RngStream {
    fn next_u32(&mut self) -> u32 {
        self.0.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.0.next_u64()
    }

    fn fill_bytes(&mut self, dest: &mut [u8]) {
        self.0.fill_bytes(dest)
    }
}

fn sample_charges(params: &NoiseParams, out: &mut [u32], rng: &mut RngStream) {
    let d = params.dim.get();
    for slot in out.iter_mut() {
        *slot = if rng.0.random::<f64>() < params.p {
            if d == 2 {
                1
            } else {
                rng.0.random_range(1..d)
            }
        } else {
            0
        };
    }
}

/// Fresh qudit errors for one time step.
pub fn sample_qudit_noise(
    params: &NoiseParams,
    geometry: &CodeGeometry,
    rng: &mut RngStream,
) -> ErrorLayer {
    let mut charges = vec![0u32; geometry.edge_count()];
    sample_charges(params, &mut charges, rng);
    let mut layer = ErrorLayer::zeros(geometry);
    for (idx, &c) in charges.iter().enumerate() {
        if c != 0 {
            layer.set(geometry, geometry.edge_at(idx), c);
        }
    }
    layer
}

/// Fresh measurement-outcome shifts for one time step, applied additively
/// (mod d) to the true syndrome.
pub fn sample_measurement_noise(
    params: &NoiseParams,
    geometry: &CodeGeometry,
    rng: &mut RngStream,
) -> SyndromeLayer {
    let mut layer = SyndromeLayer::zeros(geometry);
    sample_charges(params, layer.charges_mut(), rng);
    layer
}

/// Accumulated error and measured syndrome histories for `T` time steps.
#[derive(Debug, Clone)]
pub struct Histories {
    /// `errors[t]` is the accumulated physical error after step `t`.
    pub errors: Vec<ErrorLayer>,
    /// `measured[t]` is the (noisy) syndrome measured at step `t`.
    pub measured: Vec<SyndromeLayer>,
}

/// Build histories from externally supplied per-step fresh noise. Production
/// sampling goes through [`generate_histories`]; tests inject known layers.
pub fn accumulate_histories(
    fresh_errors: Vec<ErrorLayer>,
    measurement_shifts: Vec<SyndromeLayer>,
    geometry: &CodeGeometry,
    dim: QuditDim,
) -> Histories {
    assert_eq!(fresh_errors.len(), measurement_shifts.len());
    assert!(!fresh_errors.is_empty(), "need at least one time step");
    let mut errors = Vec::with_capacity(fresh_errors.len());
    let mut measured = Vec::with_capacity(fresh_errors.len());
    let mut accumulated = ErrorLayer::zeros(geometry);
    for (fresh, shift) in fresh_errors.into_iter().zip(measurement_shifts) {
        accumulated.compose_in_place(&fresh, dim);
        let syndrome = compute_syndrome(&accumulated, geometry, dim);
        measured.push(syndrome.compose(&shift, dim));
        errors.push(accumulated.clone());
    }
    Histories { errors, measured }
}

/// Sample `time_steps` rounds of qudit noise and noisy syndrome extraction.
pub fn generate_histories(
    params: &NoiseParams,
    geometry: &CodeGeometry,
    time_steps: usize,
    qudit_rng: &mut RngStream,
    measurement_rng: &mut RngStream,
) -> Histories {
    assert!(time_steps >= 1);
    let fresh: Vec<ErrorLayer> = (0..time_steps)
        .map(|_| sample_qudit_noise(params, geometry, qudit_rng))
        .collect();
    let shifts: Vec<SyndromeLayer> = (0..time_steps)
        .map(|_| sample_measurement_noise(params, geometry, measurement_rng))
        .collect();
    accumulate_histories(fresh, shifts, geometry, params.dim)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::Edge;

    fn dim(d: u32) -> QuditDim {
        QuditDim::new(d).unwrap()
    }

    #[test]
    fn zero_rate_is_noiseless() {
        let g = CodeGeometry::new(5).unwrap();
        let params = NoiseParams::new(0.0, dim(5));
        let mut q = RngStream::derive(1, 0, StreamPurpose::QuditNoise);
        let mut m = RngStream::derive(1, 0, StreamPurpose::MeasurementNoise);
        let h = generate_histories(&params, &g, 5, &mut q, &mut m);
        assert!(h.errors.iter().all(ErrorLayer::is_zero));
        assert!(h.measured.iter().all(SyndromeLayer::is_zero));
    }

    #[test]
    fn identical_streams_reproduce() {
        let g = CodeGeometry::new(4).unwrap();
        let params = NoiseParams::new(0.2, dim(3));
        let sample = |trial| {
            let mut rng = RngStream::derive(99, trial, StreamPurpose::QuditNoise);
            sample_qudit_noise(&params, &g, &mut rng)
        };
        assert_eq!(sample(7), sample(7));
        assert_ne!(sample(7), sample(8));
    }

    #[test]
    fn qubit_noise_rate_matches_p() {
        let g = CodeGeometry::new(10).unwrap();
        let params = NoiseParams::new(0.1, dim(2));
        let mut rng = RngStream::derive(3, 0, StreamPurpose::QuditNoise);
        let mut hits = 0usize;
        let mut draws = 0usize;
        for _ in 0..2000 {
            let layer = sample_qudit_noise(&params, &g, &mut rng);
            hits += layer.weight();
            draws += layer.charges().len();
        }
        let fraction = hits as f64 / draws as f64;
        let sigma = (0.1 * 0.9 / draws as f64).sqrt();
        assert!((fraction - 0.1).abs() < 3.0 * sigma, "fraction {fraction}");
    }

    #[test]
    fn qudit_noise_is_uniform_over_charges() {
        // d=5, p=0.1: non-trivial fraction 0.1, each k in 1..=4 at 0.025.
        let g = CodeGeometry::new(24).unwrap();
        let params = NoiseParams::new(0.1, dim(5));
        let mut rng = RngStream::derive(11, 0, StreamPurpose::QuditNoise);
        let per_layer = g.edge_count();
        let layers = 1_000_000usize.div_ceil(per_layer);
        let draws = layers * per_layer;
        let mut counts = [0usize; 5];
        for _ in 0..layers {
            let layer = sample_qudit_noise(&params, &g, &mut rng);
            for &c in layer.charges() {
                counts[c as usize] += 1;
            }
        }
        let nontrivial = draws - counts[0];
        let fraction = nontrivial as f64 / draws as f64;
        let sigma = (0.1 * 0.9 / draws as f64).sqrt();
        assert!((fraction - 0.1).abs() < 3.0 * sigma, "fraction {fraction}");
        for (k, &count) in counts.iter().enumerate().skip(1) {
            let f = count as f64 / draws as f64;
            let sigma_k = (0.025 * 0.975 / draws as f64).sqrt();
            assert!((f - 0.025).abs() < 3.0 * sigma_k, "k={k} fraction {f}");
        }
    }

    #[test]
    fn measurement_noise_rate() {
        let g = CodeGeometry::new(16).unwrap();
        let params = NoiseParams::new(0.06, dim(3));
        let mut rng = RngStream::derive(5, 2, StreamPurpose::MeasurementNoise);
        let mut hits = 0usize;
        let mut draws = 0usize;
        for _ in 0..3000 {
            let layer = sample_measurement_noise(&params, &g, &mut rng);
            hits += layer.charges().iter().filter(|&&c| c != 0).count();
            draws += layer.charges().len();
        }
        let fraction = hits as f64 / draws as f64;
        let sigma = (0.06 * 0.94 / draws as f64).sqrt();
        assert!((fraction - 0.06).abs() < 3.0 * sigma, "fraction {fraction}");
    }

    #[test]
    fn injected_error_persists_in_measured_syndromes() {
        // A single X^k appearing at step 1 (0-based) with no other noise
        // shows the same defect pair in s_1..s_T and nothing at s_0.
        let g = CodeGeometry::new(5).unwrap();
        let d = dim(5);
        let t_steps = 4;
        let mut fresh: Vec<ErrorLayer> = (0..t_steps).map(|_| ErrorLayer::zeros(&g)).collect();
        fresh[1].set(&g, Edge::Vertical { x: 2, y: 2 }, 3);
        let shifts = (0..t_steps).map(|_| SyndromeLayer::zeros(&g)).collect();
        let h = accumulate_histories(fresh, shifts, &g, d);
        assert!(h.measured[0].is_zero());
        let expected = &h.measured[1];
        assert!(!expected.is_zero());
        for t in 2..t_steps {
            assert_eq!(&h.measured[t], expected);
        }
    }

    #[test]
    fn accumulated_error_is_sum_of_fresh_layers() {
        let g = CodeGeometry::new(4).unwrap();
        let d = dim(3);
        let params = NoiseParams::new(0.3, d);
        let mut rng = RngStream::derive(17, 0, StreamPurpose::QuditNoise);
        let fresh: Vec<ErrorLayer> = (0..5)
            .map(|_| sample_qudit_noise(&params, &g, &mut rng))
            .collect();
        let shifts = (0..5).map(|_| SyndromeLayer::zeros(&g)).collect();
        let h = accumulate_histories(fresh.clone(), shifts, &g, d);
        let mut running = ErrorLayer::zeros(&g);
        for (t, layer) in fresh.iter().enumerate() {
            running.compose_in_place(layer, d);
            assert_eq!(h.errors[t], running);
        }
    }
}
