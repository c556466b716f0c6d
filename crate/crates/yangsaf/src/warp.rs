//! F0-adaptive time warping.
//!
//! Stretching the time axis proportionally to the instantaneous F0 makes the
//! warped signal's F0 constant, so harmonic detectors see stationary lines.
//! The warped axis `tau` satisfies `dtau/dt = f0(t) / f0_ref` with `f0_ref`
//! the geometric mean of the trajectory, keeping overall duration comparable.

use crate::error::{Error, Result};
use crate::signal::AudioBuffer;
use crate::tracker::F0Trajectory;
use crate::window::NUTTALL_COEFFS;
use std::f64::consts::PI;

/// Upsampling factor used before the final linear interpolation.
const UPSAMPLE_FACTOR: usize = 4;
/// Half-length of the interpolation filter in original-rate samples.
const UPSAMPLE_HALF_TAPS: usize = 16;

/// Nuttall shape on the normalized support [-1, 1].
fn nuttall_shape(x: f64) -> f64 {
    if x.abs() > 1.0 {
        return 0.0;
    }
    NUTTALL_COEFFS
        .iter()
        .enumerate()
        .map(|(k, a)| a * (PI * k as f64 * x).cos())
        .sum()
}

fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-12 {
        1.0
    } else {
        (PI * x).sin() / (PI * x)
    }
}

/// Signal resampled to a 4x grid with a Nuttall-windowed sinc, queried by
/// linear interpolation.
pub(crate) struct Upsampled {
    data: Vec<f64>,
    grid_rate: f64,
}

impl Upsampled {
    pub fn build(x: &AudioBuffer) -> Self {
        let factor = UPSAMPLE_FACTOR;
        let half = (factor * UPSAMPLE_HALF_TAPS) as isize;
        // windowed-sinc taps, then each polyphase branch normalized to unit
        // sum so constants pass exactly
        let taps: Vec<f64> = (-half..=half)
            .map(|m| sinc(m as f64 / factor as f64) * nuttall_shape(m as f64 / half as f64))
            .collect();
        let mut branch_sum = vec![0.0; factor];
        for (i, t) in taps.iter().enumerate() {
            let m = i as isize - half;
            branch_sum[(m.rem_euclid(factor as isize)) as usize] += t;
        }

        let n = x.len();
        let s = x.samples();
        let mut data = vec![0.0; n * factor];
        for (j, out) in data.iter_mut().enumerate() {
            let p = j % factor;
            let base = (j / factor) as isize;
            let mut acc = 0.0;
            // taps for branch p sit at offsets p + q*factor
            let mut off = p as isize;
            while off <= half {
                let q = (off - p as isize) / factor as isize;
                let i = base - q;
                if i >= 0 && (i as usize) < n {
                    acc += s[i as usize] * taps[(off + half) as usize];
                }
                off += factor as isize;
            }
            let mut off = p as isize - factor as isize;
            while off >= -half {
                let q = (off - p as isize) / factor as isize;
                let i = base - q;
                if i >= 0 && (i as usize) < n {
                    acc += s[i as usize] * taps[(off + half) as usize];
                }
                off -= factor as isize;
            }
            *out = acc / branch_sum[p];
        }
        Self {
            data,
            grid_rate: x.sample_rate() * factor as f64,
        }
    }

    /// Linear interpolation on the upsampled grid; zero outside.
    pub fn value_at(&self, t: f64) -> f64 {
        let pos = t * self.grid_rate;
        if pos < 0.0 {
            return 0.0;
        }
        let i = pos.floor() as usize;
        if i + 1 >= self.data.len() {
            return if i < self.data.len() { self.data[i] } else { 0.0 };
        }
        let frac = pos - i as f64;
        self.data[i] * (1.0 - frac) + self.data[i + 1] * frac
    }
}

/// The monotone map between original time and the warped axis.
#[derive(Debug, Clone)]
pub struct WarpMap {
    sample_rate: f64,
    /// tau at every original sample time i/fs.
    tau: Vec<f64>,
    /// dtau/dt at every original sample (= f0(t)/f0_ref).
    rate: Vec<f64>,
    f0_ref: f64,
}

impl WarpMap {
    /// The constant F0 the warped signal settles at.
    pub fn f0_ref(&self) -> f64 {
        self.f0_ref
    }

    /// Warped time for an original time.
    pub fn tau_of(&self, t: f64) -> f64 {
        interp_uniform(&self.tau, t * self.sample_rate)
    }

    /// Original time for a warped time (inverse of [`Self::tau_of`]).
    pub fn t_of(&self, tau: f64) -> f64 {
        let v = &self.tau;
        if tau <= v[0] {
            return 0.0;
        }
        let last = v.len() - 1;
        if tau >= v[last] {
            return last as f64 / self.sample_rate;
        }
        // binary search on the strictly increasing tau grid
        let mut lo = 0usize;
        let mut hi = last;
        while hi - lo > 1 {
            let mid = (lo + hi) / 2;
            if v[mid] <= tau {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let frac = (tau - v[lo]) / (v[hi] - v[lo]);
        (lo as f64 + frac) / self.sample_rate
    }

    /// dtau/dt at an original time.
    pub fn rate_at(&self, t: f64) -> f64 {
        interp_uniform(&self.rate, t * self.sample_rate)
    }

    /// Warped duration in tau-seconds.
    pub fn warped_end(&self) -> f64 {
        *self.tau.last().unwrap()
    }
}

fn interp_uniform(v: &[f64], pos: f64) -> f64 {
    if pos <= 0.0 {
        return v[0];
    }
    let i = pos.floor() as usize;
    if i + 1 >= v.len() {
        return *v.last().unwrap();
    }
    let frac = pos - i as f64;
    v[i] * (1.0 - frac) + v[i + 1] * frac
}

/// Interpolates a trajectory's bridged log-F0 onto the audio sample grid.
fn log_f0_at_audio_rate(traj: &F0Trajectory, n: usize, fs: f64) -> Result<Vec<f64>> {
    if let Some(i) = (0..traj.len()).find(|i| !traj.is_masked(*i) && traj.f0[*i] <= 0.0) {
        return Err(Error::NonPositiveF0 { time: traj.times[i] });
    }
    let logs = traj.bridged_log_f0().ok_or(Error::NoPeriodicEvidence)?;
    let t0 = traj.times[0];
    let m = traj.times.len();
    let mut out = vec![0.0; n];
    let mut k = 0usize; // marching bracket into traj times
    for (i, o) in out.iter_mut().enumerate() {
        let t = i as f64 / fs;
        while k + 1 < m && traj.times[k + 1] <= t {
            k += 1;
        }
        *o = if t <= t0 {
            logs[0]
        } else if k + 1 >= m {
            logs[m - 1]
        } else {
            let (ta, tb) = (traj.times[k], traj.times[k + 1]);
            let w = (t - ta) / (tb - ta);
            logs[k] * (1.0 - w) + logs[k + 1] * w
        };
    }
    Ok(out)
}

/// Resamples the signal onto the axis where its F0 trajectory is constant.
/// Masked gaps in the trajectory are bridged by log-linear interpolation.
pub fn warp_time_axis(x: &AudioBuffer, traj: &F0Trajectory) -> Result<(AudioBuffer, WarpMap)> {
    let fs = x.sample_rate();
    let n = x.len();
    let log_f0 = log_f0_at_audio_rate(traj, n, fs)?;
    let f0_ref = traj.geometric_mean_f0().ok_or(Error::NoPeriodicEvidence)?;

    let rate: Vec<f64> = log_f0.iter().map(|l| l.exp() / f0_ref).collect();
    let mut tau = vec![0.0; n];
    for i in 1..n {
        tau[i] = tau[i - 1] + 0.5 * (rate[i - 1] + rate[i]) / fs;
    }

    let map = WarpMap {
        sample_rate: fs,
        tau,
        rate,
        f0_ref,
    };

    let up = Upsampled::build(x);
    // epsilon guards the exact-identity case against accumulated roundoff
    let out_len = (map.warped_end() * fs + 1e-9).floor() as usize + 1;
    let samples: Vec<f64> = (0..out_len)
        .map(|j| up.value_at(map.t_of(j as f64 / fs)))
        .collect();
    Ok((AudioBuffer::new(samples, fs)?, map))
}
