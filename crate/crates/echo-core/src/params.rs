use alloc::format;
use alloc::vec::Vec;

use crate::error::CoreError;

/// Splitting between the two quasi-degenerate levels (1 and 3).
///
/// The infinite mode models instantaneous dephasing of the 1↔3 coherence:
/// ρ13 and everything that feeds it are frozen at zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DSplit {
    Finite(f64),
    Infinite,
}

impl DSplit {
    pub fn finite_value(self) -> Option<f64> {
        match self {
            DSplit::Finite(d) => Some(d),
            DSplit::Infinite => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, DSplit::Infinite)
    }
}

/// Atomic and field constants of the Λ system.
///
/// Rates are half-rates in the equations of motion (populations decay as
/// −2γ·ρ); `gamma12` only enters the closed-form decay law, not the dynamics,
/// and `capital_gamma` is a spectroscopic scale (it sets the unit for the
/// dimensionless d presets and the internal time scaling) — neither appears in
/// the right-hand side. `capital_gamma13` adds to the 1↔3 coherence decay.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemParams {
    /// 2↔1 transition angular frequency (rad/s).
    pub omega12: f64,
    /// 2↔3 transition angular frequency (rad/s).
    pub omega23: f64,
    /// Population relaxation half-rates of levels 1, 2, 3 (1/s).
    pub gamma1: f64,
    pub gamma2: f64,
    pub gamma3: f64,
    /// Coherence decay rate used by the decay law (1/s).
    pub gamma12: f64,
    /// Homogeneous broadening (1/s).
    pub capital_gamma: f64,
    /// Additional 1↔3 coherence broadening (1/s).
    pub capital_gamma13: f64,
    /// Incoherent pump rate Λ (1/s).
    pub lambda_pump: f64,
    /// Splitting between the quasi-degenerate levels (rad/s).
    pub d_split: DSplit,
    /// Static medium–field interaction constant (rad/s), active during pulses.
    pub v_coupling: f64,
}

impl SystemParams {
    /// All rates zero, ratio-one transition frequencies. Starting point for
    /// tests and presets.
    pub fn bare(omega12: f64, omega23: f64) -> Self {
        SystemParams {
            omega12,
            omega23,
            gamma1: 0.0,
            gamma2: 0.0,
            gamma3: 0.0,
            gamma12: 0.0,
            capital_gamma: 0.0,
            capital_gamma13: 0.0,
            lambda_pump: 0.0,
            d_split: DSplit::Finite(0.0),
            v_coupling: 0.0,
        }
    }

    /// ω12/ω23, the factor in the echo-time law and the detuning-ratio lock.
    pub fn frequency_ratio(&self) -> f64 {
        self.omega12 / self.omega23
    }
}

/// Which transition a pulse drives.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Transition {
    /// 1↔2, Rabi coupling g_p.
    Probe12,
    /// 2↔3, Rabi coupling G_c.
    Coupling23,
}

impl Transition {
    pub fn label(self) -> &'static str {
        match self {
            Transition::Probe12 => "probe_12",
            Transition::Coupling23 => "coupling_23",
        }
    }
}

/// One rectangular driving pulse: coupling `rabi_amplitude`·e^{i·phase} on
/// `transition`, on during [start, start+duration).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Pulse {
    pub start: f64,
    pub duration: f64,
    pub transition: Transition,
    /// g0 (rad/s); the population Rabi angular frequency is 2·g0.
    pub rabi_amplitude: f64,
    /// Φ (rad).
    pub phase: f64,
    /// Laboratory-frame detuning of this field from its transition (rad/s),
    /// added to the per-atom Doppler detuning. All pulses on one transition
    /// must share it (the rotating frame is fixed per transition).
    pub detuning: f64,
}

impl Pulse {
    pub fn end(&self) -> f64 {
        self.start + self.duration
    }

    pub fn covers(&self, t: f64) -> bool {
        t >= self.start && t < self.end()
    }
}

/// Timed pulse sequence for one simulation.
///
/// `t0` is the time origin of the echo-forming emission — the center of the
/// rephasing (second) pulse event — and `t12` the delay between the first and
/// second pulse events. The echo-time law reads T = t0 + (ω12/ω23)·t12 with
/// these conventions.
#[derive(Debug, Clone, PartialEq)]
pub struct PulseSequence {
    /// Sorted by start, non-overlapping per transition.
    pub pulses: Vec<Pulse>,
    /// Time of the first emission event: center of the second pulse (s).
    pub t0: f64,
    /// Delay between pulse events 1 and 2 (s).
    pub t12: f64,
    /// Simulation horizon (s).
    pub t_end: f64,
}

/// Checks every type invariant and returns the pair unchanged.
///
/// The first violated invariant is reported with its field name.
pub fn validate<'a>(
    params: &'a SystemParams,
    seq: &'a PulseSequence,
) -> Result<(&'a SystemParams, &'a PulseSequence), CoreError> {
    for (name, value) in [
        ("gamma1", params.gamma1),
        ("gamma2", params.gamma2),
        ("gamma3", params.gamma3),
        ("gamma12", params.gamma12),
        ("capital_gamma", params.capital_gamma),
        ("capital_gamma13", params.capital_gamma13),
        ("lambda_pump", params.lambda_pump),
    ] {
        if !value.is_finite() {
            return Err(CoreError::invalid(format!("{name} not finite")));
        }
        if value < 0.0 {
            return Err(CoreError::invalid(format!("{name} negative")));
        }
    }
    if !(params.omega12 > 0.0) {
        return Err(CoreError::invalid("omega12 must be > 0"));
    }
    if !(params.omega23 > 0.0) {
        return Err(CoreError::invalid("omega23 must be > 0"));
    }
    if let DSplit::Finite(d) = params.d_split {
        if !d.is_finite() || d < 0.0 {
            return Err(CoreError::invalid("d_split must be >= 0 or the infinite marker"));
        }
    }
    if !params.v_coupling.is_finite() {
        return Err(CoreError::invalid("v_coupling not finite"));
    }

    for (k, p) in seq.pulses.iter().enumerate() {
        if !(p.duration > 0.0) {
            return Err(CoreError::invalid(format!("pulse {k}: duration must be > 0")));
        }
        if p.rabi_amplitude < 0.0 {
            return Err(CoreError::invalid(format!("pulse {k}: rabi_amplitude negative")));
        }
        if !p.start.is_finite() || !p.phase.is_finite() || !p.detuning.is_finite() {
            return Err(CoreError::invalid(format!("pulse {k}: non-finite field")));
        }
    }
    for w in seq.pulses.windows(2) {
        if w[1].start < w[0].start {
            return Err(CoreError::invalid("pulses not sorted by start"));
        }
    }
    for tr in [Transition::Probe12, Transition::Coupling23] {
        let mut last_end: Option<f64> = None;
        let mut det: Option<f64> = None;
        for p in seq.pulses.iter().filter(|p| p.transition == tr) {
            if let Some(e) = last_end {
                if p.start < e {
                    return Err(CoreError::invalid(format!("overlap on {}", tr.label())));
                }
            }
            last_end = Some(p.end());
            match det {
                None => det = Some(p.detuning),
                Some(d0) if d0 == p.detuning => {}
                Some(_) => {
                    return Err(CoreError::invalid(format!(
                        "pulses on {} have differing detunings",
                        tr.label()
                    )))
                }
            }
        }
    }
    if !(seq.t12 > 0.0) {
        return Err(CoreError::invalid("t12 must be > 0"));
    }
    if !(seq.t_end > seq.t0 + seq.t12) {
        return Err(CoreError::invalid("t_end must exceed t0 + t12"));
    }
    Ok((params, seq))
}
