//! Real-valued mono audio with a sample rate.

use crate::error::{param, Error, Result};

/// Mono audio samples (nominal range ±1) at a fixed sample rate.
#[derive(Debug, Clone, PartialEq)]
pub struct AudioBuffer {
    samples: Vec<f64>,
    sample_rate: f64,
}

impl AudioBuffer {
    /// Wraps samples, validating the invariants: positive sample rate, at
    /// least one sample, all samples finite.
    pub fn new(samples: Vec<f64>, sample_rate: f64) -> Result<Self> {
        if !(sample_rate > 0.0) || !sample_rate.is_finite() {
            return param(format!("sample_rate must be positive, got {sample_rate}"));
        }
        if samples.is_empty() {
            return param("audio buffer must hold at least one sample");
        }
        if let Some(i) = samples.iter().position(|s| !s.is_finite()) {
            return Err(Error::Parameter(format!("non-finite sample at index {i}")));
        }
        Ok(Self { samples, sample_rate })
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn sample_rate(&self) -> f64 {
        self.sample_rate
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        false // invariant: length >= 1
    }

    /// Duration in seconds, counting the span from first to one past the last sample.
    pub fn duration(&self) -> f64 {
        self.samples.len() as f64 / self.sample_rate
    }

    /// Time of sample `i` in seconds.
    pub fn time_of(&self, i: usize) -> f64 {
        i as f64 / self.sample_rate
    }

    /// Index of the sample nearest to time `t`, clamped to the valid range.
    pub fn nearest_sample(&self, t: f64) -> usize {
        let i = (t * self.sample_rate).round();
        (i.max(0.0) as usize).min(self.samples.len() - 1)
    }

    /// Mean square of the samples.
    pub fn power(&self) -> f64 {
        self.samples.iter().map(|s| s * s).sum::<f64>() / self.samples.len() as f64
    }

    /// Returns a copy scaled by `c`.
    pub fn scaled(&self, c: f64) -> Self {
        Self {
            samples: self.samples.iter().map(|s| s * c).collect(),
            sample_rate: self.sample_rate,
        }
    }
}
