//! Minimum-variance mixing of independent estimates.
//!
//! Given estimates with variances `sigma_k^2`, the weights minimizing the
//! variance of the weighted sum under `sum(b_k) = 1` are found by solving,
//! for k = 1..N-1,
//!
//! ```text
//! sigma_N^2 = b_k sigma_k^2 + sigma_N^2 * sum_{n=1..N-1} b_n
//! ```
//!
//! with `b_N = 1 - sum(b_k)`. The solver keeps this literal linear system as
//! the primary path and cross-checks it against the inverse-variance closed
//! form in debug builds.

use crate::error::{param, Error, Result};
use nalgebra::{DMatrix, DVector};

/// Variances above this are capped before solving to keep the system
/// well-conditioned; an estimate this uncertain contributes nothing anyway.
pub const VARIANCE_CAP: f64 = 1e12;

/// Optimal mixing weights and the variance of the mixed estimate.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightSolution {
    pub weights: Vec<f64>,
    pub combined_variance: f64,
}

/// Solves for the minimum-variance weights of estimates with the given
/// variances. All variances must be finite and positive.
pub fn optimal_weights(variances: &[f64]) -> Result<WeightSolution> {
    if variances.is_empty() {
        return param("optimal_weights needs at least one variance");
    }
    if let Some(v) = variances.iter().find(|v| !(**v > 0.0) || !v.is_finite()) {
        return param(format!("variances must be positive and finite, got {v}"));
    }
    let capped: Vec<f64> = variances.iter().map(|v| v.min(VARIANCE_CAP)).collect();
    let n = capped.len();

    let weights = if n == 1 {
        vec![1.0]
    } else {
        let last = capped[n - 1];
        let m = n - 1;
        let mut a = DMatrix::from_element(m, m, last);
        for k in 0..m {
            a[(k, k)] += capped[k];
        }
        let rhs = DVector::from_element(m, last);
        let sol = a
            .lu()
            .solve(&rhs)
            .ok_or_else(|| Error::Parameter("singular weight system".into()))?;
        let mut w: Vec<f64> = sol.iter().copied().collect();
        w.push(1.0 - w.iter().sum::<f64>());
        w
    };

    debug_assert!({
        let inv_sum: f64 = capped.iter().map(|v| 1.0 / v).sum();
        weights
            .iter()
            .zip(&capped)
            .all(|(w, v)| (w - (1.0 / v) / inv_sum).abs() < 1e-9)
    });

    let combined_variance = weights
        .iter()
        .zip(&capped)
        .map(|(w, v)| w * w * v)
        .sum::<f64>();
    Ok(WeightSolution {
        weights,
        combined_variance,
    })
}

/// Applies a weight solution to estimate values, returning the mixed value
/// and its variance.
pub fn combine_estimates(values: &[f64], solution: &WeightSolution) -> Result<(f64, f64)> {
    if values.len() != solution.weights.len() {
        return Err(Error::LengthMismatch {
            expected: solution.weights.len(),
            actual: values.len(),
        });
    }
    let mixed = values
        .iter()
        .zip(&solution.weights)
        .map(|(v, w)| v * w)
        .sum();
    Ok((mixed, solution.combined_variance))
}
