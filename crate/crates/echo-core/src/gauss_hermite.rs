//! Gauss-Hermite nodes and weights for ∫ f(x)·e^{−x²} dx.
//!
//! Newton iteration on the Hermite recurrence (the classic `gauher` scheme);
//! accurate to ~1e-14 for the orders used here (n ≤ 256).

use alloc::vec::Vec;

use num_traits::Float;

/// Nodes (ascending) and weights of the n-point rule for weight e^{−x²}.
pub fn gauss_hermite(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1, "need at least one node");
    let pim4 = 0.751_125_544_464_942_9_f64; // π^{-1/4}
    let m = (n + 1) / 2;
    let mut nodes = alloc::vec![0.0_f64; n];
    let mut weights = alloc::vec![0.0_f64; n];
    let nf = n as f64;
    let mut z = 0.0_f64;
    for i in 0..m {
        // Initial guesses from Stroud & Secrest.
        z = match i {
            0 => (2.0 * nf + 1.0).sqrt() - 1.85575 * (2.0 * nf + 1.0).powf(-1.0 / 6.0),
            1 => z - 1.14 * nf.powf(0.426) / z,
            2 => 1.86 * z - 0.86 * nodes[0],
            3 => 1.91 * z - 0.91 * nodes[1],
            _ => 2.0 * z - nodes[i - 2],
        };
        let mut pp = 0.0;
        for _ in 0..100 {
            // Evaluate the orthonormal Hermite polynomial and its derivative.
            let mut p1 = pim4;
            let mut p2 = 0.0;
            for j in 0..n {
                let p3 = p2;
                p2 = p1;
                let jf = j as f64;
                p1 = z * (2.0 / (jf + 1.0)).sqrt() * p2 - (jf / (jf + 1.0)).sqrt() * p3;
            }
            pp = (2.0 * nf).sqrt() * p2;
            let dz = p1 / pp;
            z -= dz;
            if dz.abs() < 1e-15 * z.abs().max(1.0) {
                break;
            }
        }
        nodes[i] = -z;
        nodes[n - 1 - i] = z;
        let w = 2.0 / (pp * pp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}
