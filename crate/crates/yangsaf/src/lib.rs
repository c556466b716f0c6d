//! F0 and aperiodicity analysis for quasi-periodic signals.
//!
//! The analyzer runs in three stages:
//!
//! 1. **Front end** ([`frontend`]): a bank of complex Nuttall-windowed bandpass
//!    detectors, log-spaced over the pitch range, each reporting instantaneous
//!    frequency (Flanagan's equation), an aperiodicity measure (residual of a
//!    double filter-and-normalize cascade), and an observation probability that
//!    the channel contains the fundamental ([`probability`]).
//! 2. **Tracker** ([`tracker`]): estimates the utterance pitch range, smooths
//!    the probability map in time, follows the best channel with an octave
//!    gate, and mixes nearby channel frequencies into an initial F0 trajectory.
//! 3. **Refinement** ([`refine`], [`pipeline`]): harmonic detectors at
//!    multiples of the tracked F0 sharpen the estimate; F0-adaptive time
//!    warping flattens the trajectory so rapid modulation no longer smears the
//!    harmonic structure, then the measurement repeats on the warped signal.
//!
//! [`testgen`] builds ground-truth FM harmonic complexes and [`evaluation`]
//! scores trackers against them (RMS error in musical cents, FM transfer
//! function, SNR sweeps).
//!
//! ```
//! use yangsaf::config::AnalysisConfig;
//! use yangsaf::pipeline::{run_pipeline, Variant};
//! use yangsaf::testgen::TestSignalSpec;
//!
//! let spec = TestSignalSpec {
//!     f0_mean: 120.0,
//!     duration: 0.8,
//!     ..TestSignalSpec::default()
//! };
//! let (audio, _truth) = yangsaf::testgen::synthesize(&spec).unwrap();
//! let config = AnalysisConfig::default();
//! let out = run_pipeline(&audio, &config, Variant::Harmonic).unwrap();
//! assert!(out.refined.frames_unmasked() > 0);
//! ```

pub mod config;
pub mod convolve;
pub mod error;
pub mod evaluation;
pub mod frontend;
pub mod mixing;
pub mod pipeline;
pub mod probability;
pub mod refine;
pub mod signal;
pub mod testgen;
pub mod tracker;
pub mod warp;
pub mod wav;
pub mod window;

pub use config::AnalysisConfig;
pub use error::Error;
pub use signal::AudioBuffer;

/// Map `f` over `items`, in parallel when the `parallel` feature is enabled.
///
/// Output order always matches input order, so results are identical to the
/// sequential path.
#[cfg(feature = "parallel")]
pub(crate) fn par_map<I, T, F>(items: Vec<I>, f: F) -> Vec<T>
where
    I: Send,
    T: Send,
    F: Fn(I) -> T + Sync + Send,
{
    use rayon::prelude::*;
    items.into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn par_map<I, T, F>(items: Vec<I>, f: F) -> Vec<T>
where
    F: Fn(I) -> T,
{
    items.into_iter().map(f).collect()
}
