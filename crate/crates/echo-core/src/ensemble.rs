//! Doppler-broadened ensembles and the macroscopic polarization.
//!
//! Detunings of the probe transition are sampled from N(0, σ²) by one of three
//! schemes; the coupling-transition detuning follows the locked proportion
//! Δ12/Δ23 = ω12/ω23 (each field Doppler-shifts with the same velocity), or a
//! deterministic decorrelated assignment when the lock is off.
//!
//! Accumulation is a weighted sum of the per-atom 2↔3 optical coherences,
//! P(t) = Σ_i w_i·ρ23^{(i)}(t), reduced in a fixed pairwise tree order so the
//! result is bitwise identical no matter how many worker threads produced the
//! per-atom rows.

use alloc::vec::Vec;

use num_complex::Complex64 as C64;
use num_traits::Float;
use rand::SeedableRng;
use rand_distr::{Distribution, Normal};

use crate::bloch::{AtomContext, Trajectory, SPEED_OF_LIGHT};
use crate::error::CoreError;
use crate::gauss_hermite::gauss_hermite;
use crate::matrix::Level;
use crate::params::SystemParams;
use crate::trace::SignalTrace;

/// How the probe-transition detunings are placed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SamplingScheme {
    /// Equally spaced nodes over ±`grid_halfwidth_sigmas`·σ with
    /// trapezoid-corrected Gaussian weights.
    UniformGrid,
    /// Gauss-Hermite nodes of the Gaussian weight.
    GaussHermite,
    /// Independent draws with the given seed, equal weights.
    MonteCarlo { seed: u64 },
}

/// Ensemble description.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnsembleSpec {
    pub n_atoms: usize,
    /// Standard deviation of the 1↔2 Doppler detuning distribution (rad/s).
    pub sigma_doppler: f64,
    pub scheme: SamplingScheme,
    /// Enforce Δ12/Δ23 = ω12/ω23 atom by atom.
    pub ratio_lock: bool,
    /// Half-width T* of the Gaussian envelope oracle (s).
    pub t_star: f64,
    /// Uniform-grid span in units of σ (± this many sigmas). 5 is the default
    /// used by the presets; revival period 2π(n−1)/span must exceed the
    /// simulation horizon.
    pub grid_halfwidth_sigmas: f64,
}

impl EnsembleSpec {
    pub fn validate(&self) -> Result<(), CoreError> {
        if self.n_atoms == 0 {
            return Err(CoreError::invalid("n_atoms must be >= 1"));
        }
        if !(self.sigma_doppler >= 0.0) {
            return Err(CoreError::invalid("sigma_doppler must be >= 0"));
        }
        if !(self.grid_halfwidth_sigmas > 0.0) {
            return Err(CoreError::invalid("grid_halfwidth_sigmas must be > 0"));
        }
        Ok(())
    }
}

fn gaussian_pdf(x: f64, sigma: f64) -> f64 {
    let z = x / sigma;
    (-0.5 * z * z).exp() / (sigma * (2.0 * core::f64::consts::PI).sqrt())
}

/// Deterministic decorrelating permutation (bit-reversal order), used to break
/// the Δ12/Δ23 correlation of grid schemes when the ratio lock is off.
fn bit_reversal_permutation(n: usize) -> Vec<usize> {
    let bits = usize::BITS - (n.max(2) - 1).leading_zeros();
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by_key(|&j| (j.reverse_bits() >> (usize::BITS - bits), j));
    idx
}

/// Draw/place the per-atom detunings and normalized weights.
pub fn sample_detunings(
    spec: &EnsembleSpec,
    params: &SystemParams,
) -> Result<Vec<(AtomContext, f64)>, CoreError> {
    spec.validate()?;
    let n = spec.n_atoms;
    let sigma = spec.sigma_doppler;

    let (delta12, mut weights): (Vec<f64>, Vec<f64>) = if sigma == 0.0 {
        (alloc::vec![0.0; n], alloc::vec![1.0 / n as f64; n])
    } else {
        match spec.scheme {
            SamplingScheme::UniformGrid => {
                if n == 1 {
                    (alloc::vec![0.0], alloc::vec![1.0])
                } else {
                    let w_span = spec.grid_halfwidth_sigmas * sigma;
                    let h = 2.0 * w_span / (n - 1) as f64;
                    let nodes: Vec<f64> =
                        (0..n).map(|j| -w_span + j as f64 * h).collect();
                    let mut w: Vec<f64> =
                        nodes.iter().map(|&x| gaussian_pdf(x, sigma)).collect();
                    w[0] *= 0.5;
                    w[n - 1] *= 0.5;
                    (nodes, w)
                }
            }
            SamplingScheme::GaussHermite => {
                let (x, w) = gauss_hermite(n);
                // e^{−x²} weight ↔ N(0, σ²) via δ = √2·σ·x.
                let nodes = x.iter().map(|&xi| core::f64::consts::SQRT_2 * sigma * xi).collect();
                (nodes, w)
            }
            SamplingScheme::MonteCarlo { seed } => {
                let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(seed);
                let normal = Normal::new(0.0, sigma)
                    .map_err(|_| CoreError::invalid("sigma_doppler must be finite"))?;
                let nodes = (0..n).map(|_| normal.sample(&mut rng)).collect();
                (nodes, alloc::vec![1.0 / n as f64; n])
            }
        }
    };

    let total: f64 = weights.iter().sum();
    if !(total > 0.0) {
        return Err(CoreError::numerical("ensemble weights sum to zero"));
    }
    for w in weights.iter_mut() {
        *w /= total;
    }

    let ratio_23_over_12 = params.omega23 / params.omega12;
    let delta23: Vec<f64> = if spec.ratio_lock {
        delta12.iter().map(|&d| d * ratio_23_over_12).collect()
    } else {
        match spec.scheme {
            SamplingScheme::MonteCarlo { seed } => {
                // Independent second stream, same marginal.
                let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
                if sigma == 0.0 {
                    alloc::vec![0.0; n]
                } else {
                    let normal = Normal::new(0.0, sigma * ratio_23_over_12)
                        .map_err(|_| CoreError::invalid("sigma_doppler must be finite"))?;
                    (0..n).map(|_| normal.sample(&mut rng)).collect()
                }
            }
            _ => {
                let perm = bit_reversal_permutation(n);
                perm.iter().map(|&j| delta12[j] * ratio_23_over_12).collect()
            }
        }
    };

    Ok(delta12
        .iter()
        .zip(delta23.iter())
        .zip(weights.iter())
        .map(|((&d12, &d23), &w)| {
            (
                AtomContext {
                    delta12: d12,
                    delta23: d23,
                    velocity: d12 * SPEED_OF_LIGHT / params.omega12,
                },
                w,
            )
        })
        .collect())
}

/// Weighted elementwise pairwise-tree sum of per-atom rows. This is the
/// documented fixed summation order for ensemble accumulation.
pub fn pairwise_weighted_sum(rows: &[&[C64]], weights: &[f64]) -> Vec<C64> {
    assert_eq!(rows.len(), weights.len());
    assert!(!rows.is_empty());
    fn go(rows: &[&[C64]], weights: &[f64]) -> Vec<C64> {
        if rows.len() <= 4 {
            let len = rows[0].len();
            let mut acc = alloc::vec![C64::new(0.0, 0.0); len];
            for (row, &w) in rows.iter().zip(weights) {
                for (a, &z) in acc.iter_mut().zip(row.iter()) {
                    *a += z * w;
                }
            }
            acc
        } else {
            let mid = rows.len() / 2;
            let left = go(&rows[..mid], &weights[..mid]);
            let right = go(&rows[mid..], &weights[mid..]);
            left.iter().zip(right.iter()).map(|(&a, &b)| a + b).collect()
        }
    }
    go(rows, weights)
}

fn check_shared_grid(grids: &[&[f64]]) -> Result<(), CoreError> {
    let first = grids[0];
    for g in grids.iter().skip(1) {
        if g.len() != first.len() || g.iter().zip(first.iter()).any(|(a, b)| a != b) {
            return Err(CoreError::invalid("mismatched trajectory grids"));
        }
    }
    Ok(())
}

/// Unnormalized macroscopic polarization P(t) = Σ_i w_i·ρ23^{(i)}(t).
pub fn accumulate_polarization_raw(
    trajectories: &[Trajectory],
    weights: &[f64],
) -> Result<SignalTrace, CoreError> {
    if trajectories.is_empty() || trajectories.len() != weights.len() {
        return Err(CoreError::invalid("need one weight per trajectory"));
    }
    let grids: Vec<&[f64]> = trajectories.iter().map(|t| t.t_grid.as_slice()).collect();
    check_shared_grid(&grids)?;
    let rows: Vec<Vec<C64>> = trajectories
        .iter()
        .map(|t| t.states.iter().map(|s| s.get(Level::L2, Level::L3)).collect())
        .collect();
    let row_refs: Vec<&[C64]> = rows.iter().map(|r| r.as_slice()).collect();
    let p = pairwise_weighted_sum(&row_refs, weights);
    SignalTrace::from_polarization(trajectories[0].t_grid.clone(), p)
}

/// Accumulate rows of ρ23 samples directly (the memory-lean driver path).
pub fn accumulate_rows(
    t_grid: &[f64],
    rows: &[&[C64]],
    weights: &[f64],
    norm_window: (f64, f64),
) -> Result<SignalTrace, CoreError> {
    if rows.is_empty() || rows.len() != weights.len() {
        return Err(CoreError::invalid("need one weight per row"));
    }
    for r in rows {
        if r.len() != t_grid.len() {
            return Err(CoreError::invalid("mismatched trajectory grids"));
        }
    }
    let p = pairwise_weighted_sum(rows, weights);
    let raw = SignalTrace::from_polarization(t_grid.to_vec(), p)?;
    normalize_first_pulse(raw, norm_window)
}

/// Macroscopic polarization normalized so the first-emission peak is P0 = 1.
///
/// `norm_window` is the first-emission interval (between the end of the first
/// pulse and the start of the second); the peak |P| inside it defines P0.
pub fn accumulate_polarization(
    trajectories: &[Trajectory],
    weights: &[f64],
    norm_window: (f64, f64),
) -> Result<SignalTrace, CoreError> {
    let raw = accumulate_polarization_raw(trajectories, weights)?;
    normalize_first_pulse(raw, norm_window)
}

fn normalize_first_pulse(
    raw: SignalTrace,
    norm_window: (f64, f64),
) -> Result<SignalTrace, CoreError> {
    let (lo, hi) = raw.window_indices(norm_window.0, norm_window.1);
    let p0 = raw.polarization[lo..hi]
        .iter()
        .map(|p| p.norm())
        .fold(0.0_f64, f64::max);
    if !(p0 > 0.0) {
        return Err(CoreError::numerical(
            "normalization window holds no first-emission signal",
        ));
    }
    let scaled = raw.polarization.iter().map(|&p| p / p0).collect();
    SignalTrace::from_polarization(raw.t_grid, scaled)
}
