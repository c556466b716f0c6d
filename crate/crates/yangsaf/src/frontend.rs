//! Per-channel estimation front end.
//!
//! Each channel filters the signal with an analytic Nuttall bandpass kernel
//! and reports two tracks at the audio rate: instantaneous frequency from
//! Flanagan's equation, and an aperiodicity measure from the residual of a
//! filter-normalize-filter-normalize cascade. Both are then sampled down to
//! the frame rate.

use crate::config::AnalysisConfig;
use crate::convolve::FftConvolver;
use crate::error::{param, Result};
use crate::signal::AudioBuffer;
use crate::window::{make_kernel_pair, KernelPair};
use num_complex::Complex64;
use std::f64::consts::PI;

/// Log-spaced channel center frequencies.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelLayout {
    centers: Vec<f64>,
    channels_per_octave: u32,
    f_lo: f64,
    f_hi: f64,
}

impl ChannelLayout {
    /// Designs centers `f_lo * 2^(n/K)` for n = 0, 1, ... while they stay at
    /// or below `f_hi`; every center must clear the Nyquist limit.
    pub fn design(f_lo: f64, f_hi: f64, channels_per_octave: u32, sample_rate: f64) -> Result<Self> {
        if !(f_lo > 0.0 && f_hi > f_lo) {
            return param(format!("inverted channel range {f_lo} .. {f_hi}"));
        }
        if channels_per_octave < 1 {
            return param("channels_per_octave must be >= 1");
        }
        let k = channels_per_octave as f64;
        let count = (k * (f_hi / f_lo).log2() * (1.0 + 1e-12)).floor() as usize + 1;
        let centers: Vec<f64> = (0..count).map(|n| f_lo * (n as f64 / k).exp2()).collect();
        if let Some(c) = centers.iter().find(|c| **c >= sample_rate / 2.0) {
            return param(format!("channel center {c} Hz at or above Nyquist"));
        }
        Ok(Self {
            centers,
            channels_per_octave,
            f_lo,
            f_hi,
        })
    }

    pub fn from_config(config: &AnalysisConfig, sample_rate: f64) -> Result<Self> {
        Self::design(config.f_lo, config.f_hi, config.channels_per_octave, sample_rate)
    }

    pub fn centers(&self) -> &[f64] {
        &self.centers
    }

    pub fn center(&self, ch: usize) -> f64 {
        self.centers[ch]
    }

    pub fn len(&self) -> usize {
        self.centers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.centers.is_empty()
    }

    pub fn channels_per_octave(&self) -> u32 {
        self.channels_per_octave
    }

    /// Natural-log spacing between adjacent centers.
    pub fn log_spacing(&self) -> f64 {
        std::f64::consts::LN_2 / self.channels_per_octave as f64
    }

    /// Nominal band edges of channel `ch`: half a channel spacing to each
    /// side on the log axis, so adjacent bands tile exactly.
    pub fn band_edges(&self, ch: usize) -> (f64, f64) {
        let half = 1.0 / (2.0 * self.channels_per_octave as f64);
        let c = self.centers[ch];
        (c * (-half).exp2(), c * half.exp2())
    }

    /// Index of the channel whose center is nearest to `freq` on the log axis.
    pub fn nearest(&self, freq: f64) -> usize {
        let lf = freq.ln();
        let mut best = 0;
        let mut best_d = f64::INFINITY;
        for (i, c) in self.centers.iter().enumerate() {
            let d = (c.ln() - lf).abs();
            if d < best_d {
                best_d = d;
                best = i;
            }
        }
        best
    }
}

/// Dense frame-by-channel matrix. Masked cells hold NaN.
#[derive(Debug, Clone, PartialEq)]
pub struct FrameMatrix {
    data: Vec<f64>,
    n_frames: usize,
    n_channels: usize,
}

impl FrameMatrix {
    pub fn filled(n_frames: usize, n_channels: usize, value: f64) -> Self {
        Self {
            data: vec![value; n_frames * n_channels],
            n_frames,
            n_channels,
        }
    }

    pub fn n_frames(&self) -> usize {
        self.n_frames
    }

    pub fn n_channels(&self) -> usize {
        self.n_channels
    }

    pub fn get(&self, frame: usize, ch: usize) -> f64 {
        self.data[frame * self.n_channels + ch]
    }

    pub fn set(&mut self, frame: usize, ch: usize, v: f64) {
        self.data[frame * self.n_channels + ch] = v;
    }

    /// All channels at one frame.
    pub fn row(&self, frame: usize) -> &[f64] {
        &self.data[frame * self.n_channels..(frame + 1) * self.n_channels]
    }

    /// One channel across frames (copied out).
    pub fn column(&self, ch: usize) -> Vec<f64> {
        (0..self.n_frames).map(|f| self.get(f, ch)).collect()
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }
}

/// Front-end products on the frame grid.
#[derive(Debug, Clone)]
pub struct FrameMaps {
    pub frame_rate: f64,
    pub frame_times: Vec<f64>,
    pub layout: ChannelLayout,
    /// Instantaneous frequency per cell, Hz. NaN marks a masked cell.
    pub if_map: FrameMatrix,
    /// Smoothed aperiodicity per cell, clamped to [0, 1].
    pub ap_map: FrameMatrix,
    /// Observation probability per cell; zero until the probability stage
    /// fills it.
    pub prob_map: FrameMatrix,
    /// Duration of the analyzed signal, seconds.
    pub signal_duration: f64,
}

impl FrameMaps {
    pub fn n_frames(&self) -> usize {
        self.frame_times.len()
    }

    /// A cell is an edge cell while the kernel support still overlaps the
    /// signal boundary: within 2/f_c of either end.
    pub fn is_edge(&self, frame: usize, ch: usize) -> bool {
        let guard = 2.0 / self.layout.center(ch);
        let t = self.frame_times[frame];
        t < guard || t > self.signal_duration - guard
    }

    pub fn is_masked(&self, frame: usize, ch: usize) -> bool {
        !self.if_map.get(frame, ch).is_finite()
    }
}

/// Uniform frame times covering the buffer at `frame_rate`.
pub fn frame_grid(x: &AudioBuffer, frame_rate: f64) -> Vec<f64> {
    let last_t = (x.len() - 1) as f64 / x.sample_rate();
    let n = (last_t * frame_rate).floor() as usize + 1;
    (0..n).map(|i| i as f64 / frame_rate).collect()
}

/// Flanagan's instantaneous-frequency equation on a filtered sample and the
/// derivative-filtered sample. Returns angular frequency (rad/s), or `None`
/// when the filter output is zero and the phase derivative is undefined.
pub fn flanagan_if(x: Complex64, x_d: Complex64) -> Option<f64> {
    let mag2 = x.norm_sqr();
    if mag2 <= 0.0 {
        return None;
    }
    let w = (x.re * x_d.im - x.im * x_d.re) / mag2;
    w.is_finite().then_some(w)
}

/// Per-channel tracks at the audio rate.
#[derive(Debug, Clone)]
pub struct ChannelTrack {
    /// Instantaneous frequency, Hz; NaN where the filter output vanishes.
    pub inst_freq: Vec<f64>,
    /// Raw residual power `|r|^2` per sample.
    pub aperiodicity_raw: Vec<f64>,
    /// Residual power smoothed by the unit-sum kernel magnitude.
    pub aperiodicity_smoothed: Vec<f64>,
}

/// Shared FFT machinery for measuring many detectors against one signal.
pub(crate) struct DetectorEngine {
    conv: FftConvolver,
    x_spectrum: Vec<Complex64>,
    len: usize,
}

impl DetectorEngine {
    /// `max_kernel_len` must cover the longest kernel that will be measured.
    pub fn new(x: &AudioBuffer, max_kernel_len: usize) -> Self {
        let conv = FftConvolver::for_lengths(x.len(), max_kernel_len);
        let x_spectrum = conv.spectrum_real(x.samples());
        Self {
            conv,
            x_spectrum,
            len: x.len(),
        }
    }

    /// Runs one detector: filter, Flanagan IF, the double filter-normalize
    /// cascade, and smoothing.
    pub fn measure(&self, pair: &KernelPair) -> ChannelTrack {
        let n = self.len;
        let h_spec = self.conv.kernel_spectrum(&pair.h);
        let y1 = self.conv.convolve_spectra(&self.x_spectrum, &h_spec, n);
        let xd = self.conv.convolve_spectra(
            &self.x_spectrum,
            &self.conv.kernel_spectrum(&pair.h_d),
            n,
        );

        let mut inst_freq = vec![f64::NAN; n];
        for i in 0..n {
            if let Some(w) = flanagan_if(y1[i], xd[i]) {
                inst_freq[i] = w / (2.0 * PI);
            }
        }

        // amplitude-normalize, refilter, renormalize, subtract
        let mut invalid = vec![false; n];
        let mut y1n = vec![Complex64::new(0.0, 0.0); n];
        for i in 0..n {
            let mag = y1[i].norm();
            if mag > 0.0 {
                y1n[i] = y1[i] / mag;
            } else {
                invalid[i] = true;
            }
        }
        let y2 = self
            .conv
            .convolve_spectra(&self.conv.spectrum(&y1n), &h_spec, n);
        let mut ap_raw = vec![0.0; n];
        for i in 0..n {
            let mag2 = y2[i].norm();
            if invalid[i] || mag2 <= 0.0 {
                ap_raw[i] = 1.0;
            } else {
                ap_raw[i] = (y1n[i] - y2[i] / mag2).norm_sqr();
            }
        }

        let smooth = pair.smoothing_kernel();
        let ap_spec = self.conv.spectrum_real(&ap_raw);
        let ks = self.conv.kernel_spectrum_real(&smooth);
        let smoothed = self.conv.convolve_spectra(&ap_spec, &ks, n);
        let aperiodicity_smoothed: Vec<f64> = smoothed.iter().map(|c| c.re.max(0.0)).collect();

        ChannelTrack {
            inst_freq,
            aperiodicity_raw: ap_raw,
            aperiodicity_smoothed,
        }
    }
}

/// Full-rate instantaneous frequency and aperiodicity for one channel.
pub fn channel_track(x: &AudioBuffer, f_c: f64) -> Result<ChannelTrack> {
    let pair = make_kernel_pair(f_c, x.sample_rate())?;
    if pair.len() > x.len() {
        return param(format!(
            "signal shorter than the {f_c} Hz kernel ({} < {} samples)",
            x.len(),
            pair.len()
        ));
    }
    let engine = DetectorEngine::new(x, pair.len());
    Ok(engine.measure(&pair))
}

/// Gain in dB seen by a minor component at `f_probe` after the cascade
/// cancels a dominant component at `f_c`. The cascade's equivalent filter is
/// `|g - g^2|` with `g` the kernel response normalized at the dominant
/// frequency.
pub fn equivalent_suppression_gain(f_c: f64, f_probe: f64, sample_rate: f64) -> Result<f64> {
    if !(f_probe > 0.0 && f_probe < sample_rate / 2.0) {
        return param(format!("probe {f_probe} Hz outside (0, Nyquist)"));
    }
    let pair = make_kernel_pair(f_c, sample_rate)?;
    let at_dominant = pair.response_at(f_c, sample_rate);
    let g = pair.response_at(f_probe, sample_rate) / at_dominant;
    let gain = (g - g * g).norm();
    Ok(20.0 * gain.max(1e-15).log10())
}

/// Runs every channel of the filterbank and samples the tracks at the frame
/// grid. Channels run in parallel when the `parallel` feature is on; output
/// is identical to the sequential order either way.
pub fn analyze_frontend(x: &AudioBuffer, config: &AnalysisConfig) -> Result<FrameMaps> {
    config.validate()?;
    let layout = ChannelLayout::from_config(config, x.sample_rate())?;
    let frame_times = frame_grid(x, config.frame_rate);
    let n_frames = frame_times.len();
    let n_channels = layout.len();

    let lowest = layout.center(0);
    let max_len = 2 * crate::window::half_width_samples(lowest, x.sample_rate()) + 1;
    if max_len > x.len() {
        return param(format!(
            "signal too short for the {lowest} Hz channel ({} < {max_len} samples)",
            x.len()
        ));
    }
    let engine = DetectorEngine::new(x, max_len);

    let sample_of: Vec<usize> = frame_times.iter().map(|t| x.nearest_sample(*t)).collect();
    let fs = x.sample_rate();
    let columns = crate::par_map(layout.centers().to_vec(), |f_c| {
        let pair = make_kernel_pair(f_c, fs).expect("center validated by layout");
        let track = engine.measure(&pair);
        let mut if_col = Vec::with_capacity(n_frames);
        let mut ap_col = Vec::with_capacity(n_frames);
        for s in &sample_of {
            if_col.push(track.inst_freq[*s]);
            ap_col.push(track.aperiodicity_smoothed[*s].min(1.0));
        }
        (if_col, ap_col)
    });

    let mut if_map = FrameMatrix::filled(n_frames, n_channels, f64::NAN);
    let mut ap_map = FrameMatrix::filled(n_frames, n_channels, 1.0);
    for (ch, (if_col, ap_col)) in columns.iter().enumerate() {
        for f in 0..n_frames {
            if_map.set(f, ch, if_col[f]);
            ap_map.set(f, ch, ap_col[f]);
        }
    }

    Ok(FrameMaps {
        frame_rate: config.frame_rate,
        frame_times,
        layout,
        if_map,
        ap_map,
        prob_map: FrameMatrix::filled(n_frames, n_channels, 0.0),
        signal_duration: x.duration(),
    })
}
