//! Ground-truth test signals: FM harmonic complexes and calibrated noise.
//!
//! The F0 law is a sinusoid on the log-frequency axis,
//! `f0(t) = f0_mean * 2^((depth/2400) * sin(2*pi*mod_freq*t))`, and harmonic
//! phases come from the exact running integral of `k * f0(t)`, so the
//! trajectory the synthesizer reports really is the trajectory in the signal.

use crate::error::{param, Result};
use crate::signal::AudioBuffer;
use crate::tracker::F0Trajectory;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use std::f64::consts::PI;

/// Parameters of one synthetic battery signal.
#[derive(Debug, Clone, PartialEq)]
pub struct TestSignalSpec {
    /// Mean F0, Hz.
    pub f0_mean: f64,
    /// Peak-to-peak modulation depth in musical cents.
    pub depth_cents: f64,
    /// Modulation frequency, Hz.
    pub mod_freq: f64,
    /// Number of harmonics (1 = pure tone).
    pub n_harmonics: u32,
    /// Harmonic amplitude slope, dB per octave (0 = flat).
    pub harmonic_slope_db: f64,
    /// Signal duration, seconds.
    pub duration: f64,
    /// Sample rate, Hz.
    pub sample_rate: f64,
    /// White-noise level as signal-to-noise ratio in dB; None = clean.
    pub snr_db: Option<f64>,
    /// Noise seed.
    pub seed: u64,
}

impl Default for TestSignalSpec {
    fn default() -> Self {
        Self {
            f0_mean: 120.0,
            depth_cents: 0.0,
            mod_freq: 0.0,
            n_harmonics: 10,
            harmonic_slope_db: -6.0,
            duration: 3.0,
            sample_rate: 22050.0,
            snr_db: None,
            seed: 1,
        }
    }
}

impl TestSignalSpec {
    /// Highest instantaneous F0 the law reaches.
    pub fn f0_max(&self) -> f64 {
        self.f0_mean * (self.depth_cents / 2400.0).exp2()
    }

    fn validate(&self) -> Result<()> {
        if !(self.f0_mean > 0.0 && self.duration > 0.0 && self.sample_rate > 0.0) {
            return param("f0_mean, duration and sample_rate must be positive");
        }
        if self.n_harmonics < 1 {
            return param("need at least one harmonic");
        }
        if self.depth_cents < 0.0 || self.mod_freq < 0.0 {
            return param("depth_cents and mod_freq must be non-negative");
        }
        let top = self.n_harmonics as f64 * self.f0_max();
        if top >= self.sample_rate / 2.0 {
            return param(format!(
                "harmonic {} would reach {top:.1} Hz, at or above Nyquist",
                self.n_harmonics
            ));
        }
        Ok(())
    }

    /// The F0 law at time `t`.
    pub fn f0_at(&self, t: f64) -> f64 {
        let swing = self.depth_cents / 2400.0 * (2.0 * PI * self.mod_freq * t).sin();
        self.f0_mean * swing.exp2()
    }
}

/// Synthesizes the harmonic complex and returns it with the exact
/// ground-truth trajectory sampled at the audio rate.
pub fn synthesize(spec: &TestSignalSpec) -> Result<(AudioBuffer, F0Trajectory)> {
    spec.validate()?;
    let fs = spec.sample_rate;
    let n = (spec.duration * fs).round() as usize;
    if n == 0 {
        return param("duration too short for one sample");
    }

    // running integral of f0 (cycles), trapezoid at the audio rate
    let f0: Vec<f64> = (0..n).map(|i| spec.f0_at(i as f64 / fs)).collect();
    let mut phase_cycles = vec![0.0; n];
    for i in 1..n {
        phase_cycles[i] = phase_cycles[i - 1] + 0.5 * (f0[i - 1] + f0[i]) / fs;
    }

    let amps: Vec<f64> = (1..=spec.n_harmonics)
        .map(|k| 10f64.powf(spec.harmonic_slope_db * (k as f64).log2() / 20.0))
        .collect();
    let norm: f64 = amps.iter().sum();

    let samples: Vec<f64> = (0..n)
        .map(|i| {
            let mut acc = 0.0;
            for (ki, a) in amps.iter().enumerate() {
                let k = (ki + 1) as f64;
                acc += a * (2.0 * PI * k * phase_cycles[i]).cos();
            }
            acc / norm
        })
        .collect();

    let mut truth = F0Trajectory::masked((0..n).map(|i| i as f64 / fs).collect());
    for i in 0..n {
        truth.f0[i] = f0[i];
        truth.variance[i] = 0.0;
    }

    let audio = AudioBuffer::new(samples, fs)?;
    match spec.snr_db {
        Some(snr) => Ok((add_noise(&audio, snr, spec.seed)?, truth)),
        None => Ok((audio, truth)),
    }
}

/// Adds white Gaussian noise at the requested SNR. Deterministic per seed.
pub fn add_noise(x: &AudioBuffer, snr_db: f64, seed: u64) -> Result<AudioBuffer> {
    if !snr_db.is_finite() {
        return param("snr_db must be finite");
    }
    let p_sig = x.power();
    if p_sig <= 0.0 {
        return param("cannot set an SNR against a silent signal");
    }
    let sigma = (p_sig * 10f64.powf(-snr_db / 10.0)).sqrt();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let samples: Vec<f64> = x
        .samples()
        .iter()
        .map(|s| {
            let z: f64 = StandardNormal.sample(&mut rng);
            s + sigma * z
        })
        .collect();
    AudioBuffer::new(samples, x.sample_rate())
}
