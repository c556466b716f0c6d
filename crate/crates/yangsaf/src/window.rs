//! Nuttall windows and complex analytic bandpass kernel pairs.
//!
//! Every detector in the front end and the refinement stage is a Nuttall
//! window modulated to a center frequency, paired with the analytic
//! derivative of the same kernel so instantaneous frequency can be computed
//! without differentiating the signal.

use crate::error::{param, Result};
use num_complex::Complex64;
use std::f64::consts::PI;

/// 4-term cosine series coefficients of the Nuttall window used throughout
/// (minimum-sidelobe family). The coefficients sum to 1 and their alternating
/// sum is 0, so the window peaks at 1 and tapers to 0 at the support edges.
pub const NUTTALL_COEFFS: [f64; 4] = [0.338946, 0.481973, 0.161054, 0.018027];

/// Evaluates the continuous window at time `t` (seconds, 0 at center) for a
/// kernel tuned by `width_hz`. Support is |t| <= 2/width_hz.
pub fn nuttall_value(t: f64, width_hz: f64) -> f64 {
    let period = 4.0 / width_hz;
    if t.abs() > period / 2.0 {
        return 0.0;
    }
    NUTTALL_COEFFS
        .iter()
        .enumerate()
        .map(|(k, a)| a * (2.0 * PI * k as f64 * t / period).cos())
        .sum()
}

/// Time derivative of [`nuttall_value`], in closed form.
pub fn nuttall_derivative_value(t: f64, width_hz: f64) -> f64 {
    let period = 4.0 / width_hz;
    if t.abs() > period / 2.0 {
        return 0.0;
    }
    NUTTALL_COEFFS
        .iter()
        .enumerate()
        .map(|(k, a)| {
            let omega = 2.0 * PI * k as f64 / period;
            -a * omega * (omega * t).sin()
        })
        .sum()
}

fn check_band(f_c: f64, sample_rate: f64) -> Result<()> {
    if !(f_c > 0.0 && f_c < sample_rate / 2.0) || !f_c.is_finite() {
        return param(format!(
            "center frequency {f_c} Hz outside (0, {}) Hz",
            sample_rate / 2.0
        ));
    }
    Ok(())
}

/// Number of samples on each side of the kernel center for a window of
/// support (-2/width, 2/width).
pub fn half_width_samples(width_hz: f64, sample_rate: f64) -> usize {
    (2.0 * sample_rate / width_hz).round() as usize
}

/// Samples the Nuttall window for center frequency `f_c`, centered, odd
/// length `2*round(2*fs/f_c) + 1`. Endpoint samples sit at the support edge
/// and are (numerically) zero.
pub fn nuttall_window(f_c: f64, sample_rate: f64) -> Result<Vec<f64>> {
    check_band(f_c, sample_rate)?;
    let hw = half_width_samples(f_c, sample_rate);
    let mut w = vec![0.0; 2 * hw + 1];
    for i in 0..=hw {
        let v = nuttall_value((hw - i) as f64 / sample_rate, f_c);
        w[i] = v;
        w[2 * hw - i] = v; // exact symmetry
    }
    Ok(w)
}

/// Samples `w_d(t) = w'(t) + j*omega_c*w(t)` on the same grid as
/// [`nuttall_window`]. This is the window that turns the filtered signal's
/// time derivative into a second convolution.
pub fn derivative_window(f_c: f64, sample_rate: f64) -> Result<Vec<Complex64>> {
    check_band(f_c, sample_rate)?;
    let hw = half_width_samples(f_c, sample_rate);
    let omega_c = 2.0 * PI * f_c;
    let mut w = vec![Complex64::new(0.0, 0.0); 2 * hw + 1];
    for i in 0..=hw {
        let t = (hw - i) as f64 / sample_rate;
        let re = nuttall_derivative_value(t, f_c);
        let im = omega_c * nuttall_value(t, f_c);
        w[i] = Complex64::new(re, im);
        w[2 * hw - i] = Complex64::new(-re, im); // w' odd, w even
    }
    Ok(w)
}

/// An analytic bandpass kernel and its time derivative, both zero-delay
/// (odd length, centered).
#[derive(Debug, Clone)]
pub struct KernelPair {
    /// `h(t) = w(t) exp(j*2*pi*f_center*t)`.
    pub h: Vec<Complex64>,
    /// `h_d(t) = w_d(t) exp(j*2*pi*f_center*t) = dh/dt`.
    pub h_d: Vec<Complex64>,
    /// Center frequency in Hz.
    pub center_frequency: f64,
    /// Half of the window support in seconds (= 2/width_hz).
    pub support_half_width: f64,
}

impl KernelPair {
    /// Designs a kernel centered at `center_hz` whose window is sized by
    /// `width_hz`: support ±2/width_hz, first spectral zeros at
    /// `center_hz ± width_hz`.
    ///
    /// Front-end channels use `width_hz == center_hz` (zeros at 0 and 2 f_c);
    /// refinement detectors reuse one width for every harmonic.
    pub fn design(center_hz: f64, width_hz: f64, sample_rate: f64) -> Result<Self> {
        check_band(center_hz, sample_rate)?;
        check_band(width_hz, sample_rate)?;
        let hw = half_width_samples(width_hz, sample_rate);
        let omega_c = 2.0 * PI * center_hz;
        let n = 2 * hw + 1;
        let mut h = Vec::with_capacity(n);
        let mut h_d = Vec::with_capacity(n);
        for i in 0..n {
            let t = (i as f64 - hw as f64) / sample_rate;
            let w = nuttall_value(t, width_hz);
            let wd = Complex64::new(nuttall_derivative_value(t, width_hz), omega_c * w);
            let carrier = Complex64::from_polar(1.0, omega_c * t);
            h.push(w * carrier);
            h_d.push(wd * carrier);
        }
        Ok(Self {
            h,
            h_d,
            center_frequency: center_hz,
            support_half_width: 2.0 / width_hz,
        })
    }

    pub fn len(&self) -> usize {
        self.h.len()
    }

    pub fn is_empty(&self) -> bool {
        self.h.is_empty()
    }

    /// Samples on each side of the center tap.
    pub fn half_len(&self) -> usize {
        (self.h.len() - 1) / 2
    }

    /// Magnitudes of `h`, normalized to unit sum. This is the smoothing
    /// kernel applied to the raw aperiodicity track.
    pub fn smoothing_kernel(&self) -> Vec<f64> {
        let mags: Vec<f64> = self.h.iter().map(|c| c.norm()).collect();
        let sum: f64 = mags.iter().sum();
        mags.iter().map(|m| m / sum).collect()
    }

    /// Frequency response at `freq` by direct evaluation of the transform
    /// over the kernel taps (times in seconds relative to the center tap).
    pub fn response_at(&self, freq: f64, sample_rate: f64) -> Complex64 {
        let hw = self.half_len() as f64;
        let mut acc = Complex64::new(0.0, 0.0);
        for (i, c) in self.h.iter().enumerate() {
            let t = (i as f64 - hw) / sample_rate;
            acc += c * Complex64::from_polar(1.0, -2.0 * PI * freq * t);
        }
        acc
    }
}

/// The standard front-end channel kernel: window width equals the center
/// frequency, giving spectral zeros at 0 and `2 * f_c`.
pub fn make_kernel_pair(f_c: f64, sample_rate: f64) -> Result<KernelPair> {
    KernelPair::design(f_c, f_c, sample_rate)
}
