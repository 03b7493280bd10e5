use alloc::vec::Vec;

use num_complex::Complex64 as C64;

use crate::error::CoreError;

/// Uniformly sampled macroscopic signal: complex polarization P(t) (normalized
/// units) and the derived intensity |P(t)|².
///
/// Also used for any uniformly sampled series fed to the analysis layer, e.g.
/// the echo-peak intensity as a function of the interpulse delay.
#[derive(Debug, Clone, PartialEq)]
pub struct SignalTrace {
    pub t_grid: Vec<f64>,
    pub polarization: Vec<C64>,
    pub intensity: Vec<f64>,
}

impl SignalTrace {
    /// Build from a polarization series; the intensity is |P|² by construction.
    pub fn from_polarization(t_grid: Vec<f64>, polarization: Vec<C64>) -> Result<Self, CoreError> {
        if t_grid.len() != polarization.len() {
            return Err(CoreError::invalid("trace: grid/polarization length mismatch"));
        }
        if t_grid.len() < 2 {
            return Err(CoreError::invalid("trace: need at least two samples"));
        }
        let dt = t_grid[1] - t_grid[0];
        if !(dt > 0.0) {
            return Err(CoreError::invalid("trace: grid must be strictly increasing"));
        }
        for w in t_grid.windows(2) {
            let step = w[1] - w[0];
            if !(step > 0.0) || (step - dt).abs() > 1e-9 * dt.abs() {
                return Err(CoreError::invalid("trace: grid must be uniform"));
            }
        }
        let intensity = polarization.iter().map(|p| p.norm_sqr()).collect();
        Ok(SignalTrace { t_grid, polarization, intensity })
    }

    pub fn len(&self) -> usize {
        self.t_grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t_grid.is_empty()
    }

    pub fn dt(&self) -> f64 {
        self.t_grid[1] - self.t_grid[0]
    }

    /// Index range [lo, hi) of samples with t in [t_a, t_b].
    pub fn window_indices(&self, t_a: f64, t_b: f64) -> (usize, usize) {
        let lo = self.t_grid.iter().position(|&t| t >= t_a).unwrap_or(self.len());
        let hi = self.t_grid.iter().rposition(|&t| t <= t_b).map_or(lo, |k| k + 1);
        (lo, hi.max(lo))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn intensity_is_exact_square() {
        let t = vec![0.0, 1.0, 2.0];
        let p = vec![C64::new(0.3, 0.4), C64::new(-1.0, 0.0), C64::new(0.0, 2.0)];
        let tr = SignalTrace::from_polarization(t, p).unwrap();
        assert_eq!(tr.intensity, vec![0.25, 1.0, 4.0]);
    }

    #[test]
    fn non_uniform_grid_rejected() {
        let t = vec![0.0, 1.0, 2.5];
        let p = vec![C64::new(1.0, 0.0); 3];
        assert!(SignalTrace::from_polarization(t, p).is_err());
    }

    #[test]
    fn window_indices_inclusive() {
        let t = vec![0.0, 1.0, 2.0, 3.0, 4.0];
        let p = vec![C64::new(1.0, 0.0); 5];
        let tr = SignalTrace::from_polarization(t, p).unwrap();
        assert_eq!(tr.window_indices(1.0, 3.0), (1, 4));
        assert_eq!(tr.window_indices(0.5, 0.75), (1, 1));
    }
}
