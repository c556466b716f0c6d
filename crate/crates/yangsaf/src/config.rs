//! Analysis configuration.

use crate::error::{param, Result};
use serde::{Deserialize, Serialize};

/// Which refinement chain the pipeline runs after the initial estimate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Variant {
    /// Harmonic refinement only: ten-harmonic pass after a three-harmonic pass.
    Harmonic,
    /// Time-warp refinement: two warped ten-harmonic passes after the
    /// three-harmonic pass.
    TimeWarp,
}

/// The full parameter set for the analyzer. Serializes to TOML with
/// round-trip fidelity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AnalysisConfig {
    /// Lowest channel center frequency, Hz.
    pub f_lo: f64,
    /// Upper bound for channel center frequencies, Hz.
    pub f_hi: f64,
    /// Channels per octave in the front-end filterbank.
    pub channels_per_octave: u32,
    /// Output frame rate, Hz.
    pub frame_rate: f64,
    /// Scale converting smoothed aperiodicity into log-frequency variance.
    /// Calibrated once against the standard deviation of log-IF error on
    /// sine-plus-noise sweeps (see `calibration` test); do not tune per run.
    pub sigma_scale: f64,
    /// Floor on the log-frequency standard deviation of one channel's
    /// estimate. Defaults to a quarter of the channel spacing so a clean
    /// channel never degenerates to a delta inside its own band.
    pub sigma_min: f64,
    /// Refinement chain selection.
    pub variant: Variant,
    /// Divide harmonic-evidence variance by k^2 when converting harmonic k's
    /// frequency to F0 evidence (the f_k/k scaling applied to its variance).
    pub harmonic_variance_div_k2: bool,
    /// Seeds for evaluation batteries.
    pub seeds: Vec<u64>,
    /// Duration of evaluation battery signals, seconds.
    pub battery_duration: f64,
    /// Offset mapping a detector's aperiodicity to an SNR estimate in dB:
    /// `snr_db = -10*log10(a) + snr_cal_offset_db`. Calibrated once against
    /// band-limited noise injected at known SNR (see `calibration` test).
    pub snr_cal_offset_db: f64,
    /// Number of harmonics in the final aperiodicity report.
    pub report_harmonics: usize,
}

impl Default for AnalysisConfig {
    fn default() -> Self {
        let channels_per_octave = 12;
        Self {
            f_lo: 40.0,
            f_hi: 1000.0,
            channels_per_octave,
            frame_rate: 200.0,
            sigma_scale: 1.6,
            sigma_min: Self::sigma_min_for(channels_per_octave),
            variant: Variant::TimeWarp,
            harmonic_variance_div_k2: true,
            seeds: vec![1, 2, 3, 4, 5],
            battery_duration: 3.0,
            snr_cal_offset_db: -4.0,
            report_harmonics: 10,
        }
    }
}

impl AnalysisConfig {
    /// Default log-frequency deviation floor for a filterbank with `k`
    /// channels per octave: a quarter of the channel spacing in natural log.
    pub fn sigma_min_for(k: u32) -> f64 {
        std::f64::consts::LN_2 / (4.0 * k as f64)
    }

    /// Validates every field that later stages assume.
    pub fn validate(&self) -> Result<()> {
        if !(self.f_lo > 0.0 && self.f_hi > self.f_lo) {
            return param(format!("need 0 < f_lo < f_hi, got {} .. {}", self.f_lo, self.f_hi));
        }
        if self.channels_per_octave < 1 {
            return param("channels_per_octave must be >= 1");
        }
        if !(self.frame_rate > 0.0) {
            return param("frame_rate must be positive");
        }
        if !(self.sigma_scale > 0.0) || !(self.sigma_min > 0.0) {
            return param("sigma_scale and sigma_min must be positive");
        }
        if !(self.battery_duration > 0.0) {
            return param("battery_duration must be positive");
        }
        if self.report_harmonics == 0 {
            return param("report_harmonics must be >= 1");
        }
        if self.seeds.is_empty() {
            return param("need at least one seed");
        }
        Ok(())
    }
}
