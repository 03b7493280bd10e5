use core::ops::{Add, Mul, Sub};

use num_complex::Complex64 as C64;
use num_traits::Float;

use crate::error::CoreError;

/// Level labels of the Λ system. `L2` is the common (ground) state; `L1` and
/// `L3` are the quasi-degenerate levels separated by the splitting `d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Level {
    L1,
    L2,
    L3,
}

impl Level {
    #[inline]
    pub fn index(self) -> usize {
        match self {
            Level::L1 => 0,
            Level::L2 => 1,
            Level::L3 => 2,
        }
    }
}

/// 3×3 complex density matrix of a single atom, stored row-major with index 0
/// ↔ level 1, 1 ↔ level 2, 2 ↔ level 3.
///
/// The integrator keeps states Hermitian by construction ([`hermitize`] runs
/// after every accepted step); the type itself does not enforce Hermiticity so
/// that derivatives and RK4 stage combinations can be represented too.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityMatrix {
    pub m: [[C64; 3]; 3],
}

impl DensityMatrix {
    pub const ZERO: DensityMatrix = DensityMatrix {
        m: [[C64::new(0.0, 0.0); 3]; 3],
    };

    /// All population in one level, no coherences.
    pub fn pure(level: Level) -> Self {
        let mut out = Self::ZERO;
        let k = level.index();
        out.m[k][k] = C64::new(1.0, 0.0);
        out
    }

    /// Ground-state atom (all population in level 2).
    pub fn ground() -> Self {
        Self::pure(Level::L2)
    }

    #[inline]
    pub fn get(&self, i: Level, j: Level) -> C64 {
        self.m[i.index()][j.index()]
    }

    #[inline]
    pub fn set(&mut self, i: Level, j: Level, value: C64) {
        self.m[i.index()][j.index()] = value;
    }

    pub fn trace(&self) -> C64 {
        self.m[0][0] + self.m[1][1] + self.m[2][2]
    }

    pub fn is_finite(&self) -> bool {
        self.m
            .iter()
            .flatten()
            .all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// Max-norm distance from Hermiticity, ‖ρ − ρ†‖_max.
    pub fn hermiticity_defect(&self) -> f64 {
        let mut worst = 0.0_f64;
        for i in 0..3 {
            for j in 0..3 {
                let d = self.m[i][j] - self.m[j][i].conj();
                worst = worst.max(d.norm());
            }
        }
        worst
    }

    /// Smallest eigenvalue of the Hermitian part, used to monitor positivity.
    ///
    /// Closed-form symmetric 3×3 eigenvalue bound via the trigonometric method;
    /// the equations of motion are not of Lindblad form, so negative excursions
    /// are possible and only reported, never asserted.
    pub fn min_eigenvalue(&self) -> f64 {
        // Work on the Hermitian part to tolerate roundoff asymmetry.
        let mut a = [[C64::new(0.0, 0.0); 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                a[i][j] = (self.m[i][j] + self.m[j][i].conj()) * 0.5;
            }
        }
        let q = (a[0][0].re + a[1][1].re + a[2][2].re) / 3.0;
        let mut p2 = 0.0;
        for i in 0..3 {
            p2 += (a[i][i].re - q) * (a[i][i].re - q);
        }
        p2 += 2.0 * (a[0][1].norm_sqr() + a[0][2].norm_sqr() + a[1][2].norm_sqr());
        if p2 <= 0.0 {
            return q;
        }
        let p = (p2 / 6.0).sqrt();
        // det((A - q I) / p)
        let mut b = a;
        for (i, row) in b.iter_mut().enumerate() {
            row[i] -= C64::new(q, 0.0);
        }
        let inv_p = 1.0 / p;
        for row in b.iter_mut() {
            for z in row.iter_mut() {
                *z *= inv_p;
            }
        }
        let det = b[0][0] * (b[1][1] * b[2][2] - b[1][2] * b[2][1])
            - b[0][1] * (b[1][0] * b[2][2] - b[1][2] * b[2][0])
            + b[0][2] * (b[1][0] * b[2][1] - b[1][1] * b[2][0]);
        let r = (det.re / 2.0).clamp(-1.0, 1.0);
        let phi = r.acos() / 3.0;
        // eig_k = q + 2p cos(phi + 2πk/3); with phi in [0, π/3] the k = 1
        // branch is the smallest.
        q + 2.0 * p * (phi + 2.0 * core::f64::consts::FRAC_PI_3).cos()
    }
}

/// Hermitian closure: returns (ρ + ρ†)/2 with real diagonal.
///
/// The stated equations of motion list only six of the nine matrix elements;
/// the remaining three are their conjugates, and this projection removes the
/// roundoff drift between the pairs after each integration step. Idempotent
/// exactly (including in floating point).
pub fn hermitize(rho: &DensityMatrix) -> Result<DensityMatrix, CoreError> {
    if !rho.is_finite() {
        return Err(CoreError::numerical("hermitize: non-finite entry"));
    }
    let mut out = DensityMatrix::ZERO;
    for i in 0..3 {
        for j in 0..3 {
            out.m[i][j] = (rho.m[i][j] + rho.m[j][i].conj()) * 0.5;
        }
        out.m[i][i] = C64::new(out.m[i][i].re, 0.0);
    }
    Ok(out)
}

impl Add for DensityMatrix {
    type Output = DensityMatrix;
    fn add(self, rhs: DensityMatrix) -> DensityMatrix {
        let mut out = DensityMatrix::ZERO;
        for i in 0..3 {
            for j in 0..3 {
                out.m[i][j] = self.m[i][j] + rhs.m[i][j];
            }
        }
        out
    }
}

impl Sub for DensityMatrix {
    type Output = DensityMatrix;
    fn sub(self, rhs: DensityMatrix) -> DensityMatrix {
        let mut out = DensityMatrix::ZERO;
        for i in 0..3 {
            for j in 0..3 {
                out.m[i][j] = self.m[i][j] - rhs.m[i][j];
            }
        }
        out
    }
}

impl Mul<f64> for DensityMatrix {
    type Output = DensityMatrix;
    fn mul(self, s: f64) -> DensityMatrix {
        let mut out = DensityMatrix::ZERO;
        for i in 0..3 {
            for j in 0..3 {
                out.m[i][j] = self.m[i][j] * s;
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn hermitize_fixes_off_diagonal_pair() {
        // rho[1][2] = i, rho[2][1] = 0 -> both become i/2 and -i/2.
        let mut rho = DensityMatrix::ZERO;
        rho.set(Level::L1, Level::L2, c(0.0, 1.0));
        let h = hermitize(&rho).unwrap();
        assert_eq!(h.get(Level::L1, Level::L2), c(0.0, 0.5));
        assert_eq!(h.get(Level::L2, Level::L1), c(0.0, -0.5));
    }

    #[test]
    fn hermitize_is_identity_on_hermitian_input() {
        let mut rho = DensityMatrix::ground();
        rho.set(Level::L1, Level::L2, c(0.3, -0.1));
        rho.set(Level::L2, Level::L1, c(0.3, 0.1));
        let h = hermitize(&rho).unwrap();
        assert_eq!(h, rho);
    }

    #[test]
    fn hermitize_random_matrix_is_hermitian_to_1e15() {
        // Splitmix-style pseudo-random entries; the oracle is the defect norm.
        let mut state = 0x9e3779b97f4a7c15_u64;
        let mut next = || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (state >> 11) as f64 / (1u64 << 53) as f64 - 0.5
        };
        let mut rho = DensityMatrix::ZERO;
        for i in 0..3 {
            for j in 0..3 {
                rho.m[i][j] = c(next(), next());
            }
        }
        let h = hermitize(&rho).unwrap();
        assert!(h.hermiticity_defect() < 1e-15);
    }

    #[test]
    fn hermitize_rejects_non_finite() {
        let mut rho = DensityMatrix::ZERO;
        rho.m[0][1] = c(f64::NAN, 0.0);
        assert!(hermitize(&rho).is_err());
    }

    #[test]
    fn trace_of_hermitized_is_real_part_of_trace() {
        let mut rho = DensityMatrix::ZERO;
        rho.m[0][0] = c(0.25, 0.7);
        rho.m[1][1] = c(0.5, -0.2);
        rho.m[2][2] = c(0.125, 0.1);
        let h = hermitize(&rho).unwrap();
        assert_eq!(h.trace().re, rho.trace().re);
        assert_eq!(h.trace().im, 0.0);
    }

    #[test]
    fn min_eigenvalue_of_diagonal() {
        let mut rho = DensityMatrix::ZERO;
        rho.m[0][0] = c(0.2, 0.0);
        rho.m[1][1] = c(0.5, 0.0);
        rho.m[2][2] = c(-0.1, 0.0);
        assert!((rho.min_eigenvalue() + 0.1).abs() < 1e-12);
    }

    #[test]
    fn min_eigenvalue_with_coherence() {
        // [[0, g], [g, 0]] block has eigenvalues ±g.
        let mut rho = DensityMatrix::ZERO;
        rho.set(Level::L1, Level::L2, c(0.3, 0.0));
        rho.set(Level::L2, Level::L1, c(0.3, 0.0));
        assert!((rho.min_eigenvalue() + 0.3).abs() < 1e-12);
    }
}
