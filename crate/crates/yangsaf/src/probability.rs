//! Observation probability of each channel holding the fundamental.
//!
//! Per frame, every unmasked channel contributes a Gaussian mass on the
//! natural-log frequency axis, centered at its instantaneous frequency with
//! a variance scaled from its aperiodicity. Integrating the mixture over a
//! channel's nominal band gives the probability that the fundamental sits in
//! that band.

use crate::config::AnalysisConfig;
use crate::frontend::{ChannelLayout, FrameMaps};

/// One Gaussian component on the log-frequency axis.
#[derive(Debug, Clone, PartialEq)]
pub struct MixtureComponent {
    /// Natural log of the component's center frequency.
    pub log_center: f64,
    /// Variance on the log axis, (log-Hz)^2.
    pub variance: f64,
    /// Mixing weight; weights of a frame sum to 1.
    pub weight: f64,
}

/// A frame's Gaussian mixture. Empty when every channel is masked.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct MixtureFrame {
    pub components: Vec<MixtureComponent>,
}

impl MixtureFrame {
    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    /// Density at log-frequency `nu`.
    pub fn density(&self, nu: f64) -> f64 {
        self.components
            .iter()
            .map(|c| {
                let z = (nu - c.log_center) / c.variance.sqrt();
                c.weight * (-0.5 * z * z).exp() / (2.0 * std::f64::consts::PI * c.variance).sqrt()
            })
            .sum()
    }
}

/// Converts a smoothed aperiodicity value into a log-frequency variance,
/// floored so a clean channel still spreads over a quarter channel spacing.
pub fn variance_from_aperiodicity(a_ks: f64, sigma_scale: f64, sigma_min: f64) -> f64 {
    (sigma_scale * a_ks.max(0.0)).max(sigma_min * sigma_min)
}

/// Builds the frame mixture from per-channel instantaneous frequencies (NaN
/// or non-positive = masked) and variances. Component weights are uniform
/// over the surviving channels; reliability is already in the variances.
pub fn build_mixture(frame_if: &[f64], frame_var: &[f64]) -> MixtureFrame {
    let mut components: Vec<MixtureComponent> = frame_if
        .iter()
        .zip(frame_var)
        .filter(|(f, v)| f.is_finite() && **f > 0.0 && v.is_finite() && **v > 0.0)
        .map(|(f, v)| MixtureComponent {
            log_center: f.ln(),
            variance: *v,
            weight: 1.0,
        })
        .collect();
    let n = components.len();
    for c in &mut components {
        c.weight = 1.0 / n as f64;
    }
    MixtureFrame { components }
}

/// Standard normal CDF.
fn phi(z: f64) -> f64 {
    0.5 * (1.0 + libm::erf(z / std::f64::consts::SQRT_2))
}

/// Probability mass of the mixture inside channel `k`'s nominal band.
pub fn channel_probability(mix: &MixtureFrame, k: usize, layout: &ChannelLayout) -> f64 {
    let (f_lo, f_hi) = layout.band_edges(k);
    let (lo, hi) = (f_lo.ln(), f_hi.ln());
    mix.components
        .iter()
        .map(|c| {
            let s = c.variance.sqrt();
            c.weight * (phi((hi - c.log_center) / s) - phi((lo - c.log_center) / s))
        })
        .sum()
}

/// Fills `maps.prob_map` from the IF and aperiodicity maps.
pub fn fill_probability(maps: &mut FrameMaps, config: &AnalysisConfig) {
    let n_channels = maps.layout.len();
    for frame in 0..maps.n_frames() {
        let vars: Vec<f64> = maps
            .ap_map
            .row(frame)
            .iter()
            .map(|a| variance_from_aperiodicity(*a, config.sigma_scale, config.sigma_min))
            .collect();
        let mix = build_mixture(maps.if_map.row(frame), &vars);
        if mix.is_empty() {
            for ch in 0..n_channels {
                maps.prob_map.set(frame, ch, 0.0);
            }
            continue;
        }
        for ch in 0..n_channels {
            maps.prob_map
                .set(frame, ch, channel_probability(&mix, ch, &maps.layout));
        }
    }
}
