//! Simulation kernels for photon echo in a three-level Λ system with
//! quasi-degenerate lower levels.
//!
//! The crate is split along the pipeline:
//! - [`params`]/[`matrix`]: parameter types, validation, the 3×3 density matrix;
//! - [`bloch`]: the RWA equations of motion and a fixed-step RK4 integrator for
//!   a single atom driven by a pulse sequence;
//! - [`ensemble`]: Doppler-broadened ensembles (grid / Gauss-Hermite /
//!   Monte-Carlo sampling with the locked detuning ratio) and the macroscopic
//!   polarization accumulator;
//! - [`envelope`]: the closed-form echo envelope and the Gaussian ensemble
//!   average integral used as its oracle;
//! - [`analysis`]: echo timing/peak detection, exponential decay fits,
//!   quantum-beat extraction and the memory-time estimators.
//!
//! The crate is `no_std` (with `alloc`); all types are plain values that can be
//! copied or sent across threads freely. Units are SI (seconds, rad/s) or any
//! consistent rescaling thereof.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod analysis;
pub mod bloch;
pub mod ensemble;
pub mod envelope;
pub mod error;
pub mod fft;
pub mod gauss_hermite;
pub mod matrix;
pub mod params;
pub mod trace;

pub use analysis::{
    beat_period, detect_echo_peak, fit_exponential_decay, memory_time_estimate,
    photon_number_decay, predict_echo_time, theoretical_decay_coefficient, EchoReport,
};
pub use bloch::{
    dt_max, free_phase_shift, integrate_sequence, rhs, step_rk4, AtomContext, FieldSample,
    PhaseLevel, RhsMode, Trajectory,
};
pub use ensemble::{
    accumulate_polarization, accumulate_polarization_raw, sample_detunings, EnsembleSpec,
    SamplingScheme,
};
pub use envelope::{analytic_envelope, gaussian_average_integral, t_star_from_sigma, EnvelopeForm};
pub use error::CoreError;
pub use matrix::{DensityMatrix, Level};
pub use params::{validate, DSplit, Pulse, PulseSequence, SystemParams, Transition};
pub use trace::SignalTrace;
