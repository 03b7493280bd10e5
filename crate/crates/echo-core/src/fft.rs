//! In-place radix-2 FFT, enough for the beat-period spectral search.

use alloc::vec::Vec;

use num_complex::Complex64 as C64;
use num_traits::Float;

/// Smallest power of two >= n (n >= 1).
pub fn next_pow2(n: usize) -> usize {
    n.next_power_of_two()
}

/// In-place forward DFT of a power-of-two-length buffer,
/// X[k] = Σ_j x[j]·e^{−2πi jk/n}.
pub fn fft_in_place(buf: &mut [C64]) {
    let n = buf.len();
    assert!(n.is_power_of_two(), "fft length must be a power of two");
    if n <= 1 {
        return;
    }
    // bit-reversal permutation
    let mut j = 0usize;
    for i in 1..n {
        let mut bit = n >> 1;
        while j & bit != 0 {
            j ^= bit;
            bit >>= 1;
        }
        j |= bit;
        if i < j {
            buf.swap(i, j);
        }
    }
    let mut len = 2;
    while len <= n {
        let ang = -2.0 * core::f64::consts::PI / len as f64;
        let wl = C64::new(ang.cos(), ang.sin());
        let mut i = 0;
        while i < n {
            let mut w = C64::new(1.0, 0.0);
            for k in 0..len / 2 {
                let u = buf[i + k];
                let v = buf[i + k + len / 2] * w;
                buf[i + k] = u + v;
                buf[i + k + len / 2] = u - v;
                w *= wl;
            }
            i += len;
        }
        len <<= 1;
    }
}

/// Magnitudes of the DFT of `x` after zero-padding to the next power of two
/// at least `min_len`. Returns (magnitudes, padded length).
pub fn padded_spectrum(x: &[f64], min_len: usize) -> (Vec<f64>, usize) {
    let n = next_pow2(x.len().max(min_len).max(2));
    let mut buf: Vec<C64> = Vec::with_capacity(n);
    buf.extend(x.iter().map(|&v| C64::new(v, 0.0)));
    buf.resize(n, C64::new(0.0, 0.0));
    fft_in_place(&mut buf);
    let mags = buf.iter().take(n / 2 + 1).map(|z| z.norm()).collect();
    (mags, n)
}
