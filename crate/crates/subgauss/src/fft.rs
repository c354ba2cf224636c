//! Thin wrapper around rustfft for the transforms used by convolution and
//! Fourier inversion. Both directions are unnormalized, matching rustfft.

use num_complex::Complex64;
use rustfft::FftPlanner;

/// In-place forward DFT: X_k = sum_j x_j exp(-2 pi i jk / n).
pub fn forward(buf: &mut [Complex64]) {
    let mut planner = FftPlanner::new();
    let fft = planner.plan_fft_forward(buf.len());
    fft.process(buf);
}

/// In-place inverse-direction DFT without the 1/n factor:
/// X_k = sum_j x_j exp(+2 pi i jk / n).
pub fn inverse_unnormalized(buf: &mut [Complex64]) {
    let mut planner = FftPlanner::new();
    let fft = planner.plan_fft_inverse(buf.len());
    fft.process(buf);
}

/// Smallest power of two >= n.
pub fn next_pow2(n: usize) -> usize {
    n.next_power_of_two()
}
