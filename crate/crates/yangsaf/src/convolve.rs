//! Same-mode convolution, direct and FFT-backed.
//!
//! All convolutions align the kernel center on each output sample and treat
//! samples outside the signal as zero, so outputs have the signal's length.
//! The direct path is the reference; [`FftConvolver`] produces the same
//! values (within 1e-9) and is what the analysis stages actually run.

use crate::error::{param, Result};
use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use std::sync::Arc;

/// Reference same-mode convolution of a complex signal with a centered,
/// odd-length complex kernel.
pub fn convolve_direct(x: &[Complex64], kernel: &[Complex64]) -> Result<Vec<Complex64>> {
    if x.is_empty() || kernel.is_empty() {
        return param("convolution inputs must be non-empty");
    }
    let hw = (kernel.len() - 1) / 2;
    let n = x.len();
    let mut y = vec![Complex64::new(0.0, 0.0); n];
    for (i, out) in y.iter_mut().enumerate() {
        let mut acc = Complex64::new(0.0, 0.0);
        for (j, k) in kernel.iter().enumerate() {
            let idx = i as isize + hw as isize - j as isize;
            if idx >= 0 && (idx as usize) < n {
                acc += k * x[idx as usize];
            }
        }
        *out = acc;
    }
    Ok(y)
}

/// Same-mode convolution of a real signal with a real kernel (used for
/// aperiodicity smoothing and window-level checks).
pub fn convolve_direct_real(x: &[f64], kernel: &[f64]) -> Result<Vec<f64>> {
    if x.is_empty() || kernel.is_empty() {
        return param("convolution inputs must be non-empty");
    }
    let hw = (kernel.len() - 1) / 2;
    let n = x.len();
    let mut y = vec![0.0; n];
    for (i, out) in y.iter_mut().enumerate() {
        let mut acc = 0.0;
        for (j, k) in kernel.iter().enumerate() {
            let idx = i as isize + hw as isize - j as isize;
            if idx >= 0 && (idx as usize) < n {
                acc += k * x[idx as usize];
            }
        }
        *out = acc;
    }
    Ok(y)
}

/// Public convolution entry point: picks the FFT path when the direct cost
/// would be large, otherwise runs the reference loop.
pub fn convolve_complex(x: &[Complex64], kernel: &[Complex64]) -> Result<Vec<Complex64>> {
    if x.is_empty() || kernel.is_empty() {
        return param("convolution inputs must be non-empty");
    }
    if x.len() * kernel.len() <= 1 << 18 {
        return convolve_direct(x, kernel);
    }
    let conv = FftConvolver::for_lengths(x.len(), kernel.len());
    let xs = conv.spectrum(x);
    let ks = conv.kernel_spectrum(kernel);
    Ok(conv.convolve_spectra(&xs, &ks, x.len()))
}

/// FFT convolution engine sized once for a signal length and the largest
/// kernel it will meet. Signal spectra can be cached and reused against many
/// kernels. Shareable across threads.
pub struct FftConvolver {
    n: usize,
    fft: Arc<dyn Fft<f64>>,
    ifft: Arc<dyn Fft<f64>>,
}

impl FftConvolver {
    pub fn for_lengths(signal_len: usize, max_kernel_len: usize) -> Self {
        let needed = signal_len + max_kernel_len - 1;
        let n = needed.next_power_of_two();
        let mut planner = FftPlanner::new();
        Self {
            n,
            fft: planner.plan_fft_forward(n),
            ifft: planner.plan_fft_inverse(n),
        }
    }

    pub fn fft_len(&self) -> usize {
        self.n
    }

    /// Forward transform of a zero-padded complex signal.
    pub fn spectrum(&self, x: &[Complex64]) -> Vec<Complex64> {
        assert!(x.len() <= self.n, "signal longer than FFT size");
        let mut buf = vec![Complex64::new(0.0, 0.0); self.n];
        buf[..x.len()].copy_from_slice(x);
        self.fft.process(&mut buf);
        buf
    }

    /// Forward transform of a zero-padded real signal.
    pub fn spectrum_real(&self, x: &[f64]) -> Vec<Complex64> {
        assert!(x.len() <= self.n, "signal longer than FFT size");
        let mut buf = vec![Complex64::new(0.0, 0.0); self.n];
        for (b, v) in buf.iter_mut().zip(x) {
            b.re = *v;
        }
        self.fft.process(&mut buf);
        buf
    }

    /// Forward transform of a centered odd-length kernel, laid out so the
    /// center tap sits at index 0 (wrap-around layout). Multiplying by a
    /// signal spectrum then yields same-mode alignment.
    pub fn kernel_spectrum(&self, kernel: &[Complex64]) -> Vec<Complex64> {
        let hw = (kernel.len() - 1) / 2;
        assert!(kernel.len() <= self.n, "kernel longer than FFT size");
        let mut buf = vec![Complex64::new(0.0, 0.0); self.n];
        for (u, k) in kernel.iter().enumerate() {
            // tap at signed offset (u - hw) goes to index (u - hw) mod n
            let idx = (u + self.n - hw) % self.n;
            buf[idx] = *k;
        }
        self.fft.process(&mut buf);
        buf
    }

    /// Real kernel convenience wrapper for [`Self::kernel_spectrum`].
    pub fn kernel_spectrum_real(&self, kernel: &[f64]) -> Vec<Complex64> {
        let k: Vec<Complex64> = kernel.iter().map(|v| Complex64::new(*v, 0.0)).collect();
        self.kernel_spectrum(&k)
    }

    /// Inverse transform, returning the first `out_len` samples.
    pub fn inverse(&self, spectrum: Vec<Complex64>, out_len: usize) -> Vec<Complex64> {
        let mut buf = spectrum;
        assert_eq!(buf.len(), self.n);
        self.ifft.process(&mut buf);
        let scale = 1.0 / self.n as f64;
        buf.truncate(out_len);
        for v in &mut buf {
            *v *= scale;
        }
        buf
    }

    /// Multiplies two spectra, inverts, and returns the first `out_len`
    /// samples (the same-mode result).
    pub fn convolve_spectra(
        &self,
        signal_spectrum: &[Complex64],
        kernel_spectrum: &[Complex64],
        out_len: usize,
    ) -> Vec<Complex64> {
        let mut buf: Vec<Complex64> = signal_spectrum
            .iter()
            .zip(kernel_spectrum)
            .map(|(a, b)| a * b)
            .collect();
        self.ifft.process(&mut buf);
        let scale = 1.0 / self.n as f64;
        buf.truncate(out_len);
        for v in &mut buf {
            *v *= scale;
        }
        buf
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::window::make_kernel_pair;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn rejects_empty() {
        assert!(convolve_complex(&[], &[c(1.0)]).is_err());
        assert!(convolve_complex(&[c(1.0)], &[]).is_err());
        assert!(convolve_direct_real(&[], &[1.0]).is_err());
    }

    #[test]
    fn impulse_reproduces_kernel() {
        let kernel: Vec<Complex64> = (0..7).map(|i| Complex64::new(i as f64, -1.0)).collect();
        let mut x = vec![c(0.0); 21];
        x[10] = c(1.0);
        let y = convolve_complex(&x, &kernel).unwrap();
        for (j, k) in kernel.iter().enumerate() {
            // kernel center lands on the impulse position
            assert_eq!(y[10 + 3 - j], *k);
        }
        assert_eq!(y[0], c(0.0));
    }

    #[test]
    fn tone_has_flat_interior_magnitude() {
        let fs = 22050.0;
        let f_c = 220.0;
        let pair = make_kernel_pair(f_c, fs).unwrap();
        let n = (0.5 * fs) as usize;
        let x: Vec<Complex64> = (0..n)
            .map(|i| c((2.0 * PI * f_c * i as f64 / fs).cos()))
            .collect();
        let y = convolve_complex(&x, &pair.h).unwrap();
        let hw = pair.half_len();
        let interior = &y[2 * hw..n - 2 * hw];
        let mags: Vec<f64> = interior.iter().map(|v| v.norm()).collect();
        let mean = mags.iter().sum::<f64>() / mags.len() as f64;
        for m in &mags {
            assert!((m - mean).abs() / mean < 1e-6, "ripple {:e}", (m - mean) / mean);
        }
    }

    #[test]
    fn linearity() {
        let kernel: Vec<Complex64> = (0..5).map(|i| Complex64::new(0.2 * i as f64, 0.1)).collect();
        let x1: Vec<Complex64> = (0..40).map(|i| c((i as f64 * 0.3).sin())).collect();
        let x2: Vec<Complex64> = (0..40).map(|i| c((i as f64 * 0.7).cos())).collect();
        let (a, b) = (2.5, -1.25);
        let lhs: Vec<Complex64> = {
            let mixed: Vec<Complex64> = x1.iter().zip(&x2).map(|(p, q)| a * p + b * q).collect();
            convolve_complex(&mixed, &kernel).unwrap()
        };
        let y1 = convolve_complex(&x1, &kernel).unwrap();
        let y2 = convolve_complex(&x2, &kernel).unwrap();
        for i in 0..lhs.len() {
            let rhs = a * y1[i] + b * y2[i];
            assert!((lhs[i] - rhs).norm() < 1e-12);
        }
    }

    #[test]
    fn fft_path_matches_direct_on_kernel_pair() {
        let fs = 8000.0;
        let pair = make_kernel_pair(400.0, fs).unwrap();
        let n = 1200;
        let x: Vec<Complex64> = (0..n)
            .map(|i| c((2.0 * PI * 390.0 * i as f64 / fs).cos() + 0.2 * (i as f64 * 0.11).sin()))
            .collect();
        let direct = convolve_direct(&x, &pair.h).unwrap();
        let conv = FftConvolver::for_lengths(n, pair.len());
        let fftd = conv.convolve_spectra(&conv.spectrum(&x), &conv.kernel_spectrum(&pair.h), n);
        let peak = direct.iter().map(|v| v.norm()).fold(0.0, f64::max);
        for i in 0..n {
            assert!((direct[i] - fftd[i]).norm() <= 1e-9 * peak.max(1.0));
        }
    }

    proptest! {
        #[test]
        fn fft_matches_direct(
            xs in prop::collection::vec(-1.0f64..1.0, 8..200),
            ks in prop::collection::vec(-1.0f64..1.0, 1..20),
        ) {
            // force odd kernel length
            let mut ks = ks;
            if ks.len() % 2 == 0 {
                ks.push(0.5);
            }
            let x: Vec<Complex64> = xs.iter().map(|v| Complex64::new(*v, -v * 0.5)).collect();
            let k: Vec<Complex64> = ks.iter().map(|v| Complex64::new(*v, v * 0.25)).collect();
            let direct = convolve_direct(&x, &k).unwrap();
            let conv = FftConvolver::for_lengths(x.len(), k.len());
            let fftd = conv.convolve_spectra(&conv.spectrum(&x), &conv.kernel_spectrum(&k), x.len());
            for i in 0..x.len() {
                prop_assert!((direct[i] - fftd[i]).norm() <= 1e-9);
            }
        }

        #[test]
        fn homogeneity(scale in 0.01f64..100.0) {
            let kernel: Vec<Complex64> = (0..9)
                .map(|i| Complex64::new((i as f64 * 0.4).sin(), (i as f64 * 0.2).cos()))
                .collect();
            let x: Vec<Complex64> = (0..64)
                .map(|i| Complex64::new((i as f64 * 0.3).cos(), 0.0))
                .collect();
            let y = convolve_direct(&x, &kernel).unwrap();
            let scaled: Vec<Complex64> = kernel.iter().map(|k| k * scale).collect();
            let ys = convolve_direct(&x, &scaled).unwrap();
            for i in 0..y.len() {
                prop_assert!((ys[i] - y[i] * scale).norm() <= 1e-9 * y[i].norm().max(1.0) * scale.max(1.0));
            }
        }
    }
}
