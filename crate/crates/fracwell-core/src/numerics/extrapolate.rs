//! Aitken Δ² acceleration of slowly convergent sample sequences.
//!
//! Every asymptotic target in the crate ("value as x → ∞", "value as
//! r → 1⁻") is estimated from a finite geometric sweep of samples and
//! extrapolated here. Aitken is used rather than a fitted decay exponent
//! because the leading correction exponent varies with the profile
//! parameters.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A sampled sequence together with its extrapolated limit.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LimitEstimate {
    /// (abscissa, value) pairs; abscissae strictly increasing.
    pub samples: Vec<(f64, f64)>,
    pub extrapolated: f64,
    /// Absolute difference of the last two retained extrapolants.
    pub error_estimate: f64,
    pub converged: bool,
}

/// Iterated Aitken Δ² over a geometric sample sweep.
///
/// Needs at least 4 samples with strictly increasing abscissae in (near)
/// geometric progression. `tol` controls the convergence flag: the estimate
/// is marked converged when the last two extrapolants differ by less than
/// `tol` in absolute value (scaled by the magnitude of the limit).
///
/// Erratic input (non-finite transforms, corrections larger than the raw
/// sample spread) falls back to the last raw sample with `converged = false`.
pub fn extrapolate_limit(samples: &[(f64, f64)], tol: f64) -> Result<LimitEstimate> {
    if samples.len() < 4 {
        return Err(Error::domain(format!(
            "extrapolate_limit needs at least 4 samples, got {}",
            samples.len()
        )));
    }
    for pair in samples.windows(2) {
        if !(pair[0].0 < pair[1].0) {
            return Err(Error::domain("abscissae must be strictly increasing"));
        }
    }
    let values: Vec<f64> = samples.iter().map(|&(_, v)| v).collect();
    let spread = {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for &v in &values {
            lo = lo.min(v);
            hi = hi.max(v);
        }
        hi - lo
    };
    let scale0 = values.iter().fold(0.0f64, |a, v| a.max(v.abs())).max(1.0);

    // A convergent sweep has shrinking consecutive differences; when the
    // final difference is no smaller than the first, the data is erratic
    // and acceleration would manufacture a limit.
    let d_first = (values[1] - values[0]).abs();
    let d_last = (values[values.len() - 1] - values[values.len() - 2]).abs();
    if d_last >= d_first && d_last > 10.0 * f64::EPSILON * scale0 {
        return Ok(LimitEstimate {
            samples: samples.to_vec(),
            extrapolated: *values.last().unwrap(),
            error_estimate: spread,
            converged: false,
        });
    }

    // extrapolants[d] is the deepest available value after d Aitken passes.
    let mut extrapolants = vec![*values.last().unwrap()];
    let mut row = values;
    while row.len() >= 3 {
        let mut next = Vec::with_capacity(row.len() - 2);
        for k in 0..row.len() - 2 {
            let (a0, a1, a2) = (row[k], row[k + 1], row[k + 2]);
            let d2 = a2 - 2.0 * a1 + a0;
            let scale = a0.abs() + a1.abs() + a2.abs() + 1.0;
            if d2.abs() <= f64::EPSILON * scale {
                // Second difference at rounding level: already converged.
                next.push(a2);
            } else {
                let d1 = a2 - a1;
                next.push(a2 - d1 * d1 / d2);
            }
        }
        extrapolants.push(*next.last().unwrap());
        row = next;
    }

    // Retain the depth whose consecutive difference is smallest; deeper
    // passes on noisy data amplify noise instead of converging.
    let mut best_depth = 1usize;
    let mut best_diff = f64::INFINITY;
    for d in 1..extrapolants.len() {
        let diff = (extrapolants[d] - extrapolants[d - 1]).abs();
        if extrapolants[d].is_finite() && diff < best_diff {
            best_diff = diff;
            best_depth = d;
        }
    }

    let extrapolated = extrapolants[best_depth];
    let error_estimate = (extrapolants[best_depth] - extrapolants[best_depth - 1]).abs();
    let last_raw = *samples.last().map(|(_, v)| v).unwrap();

    // Erratic-data guard: the accepted correction must not exceed the raw
    // spread of the sweep.
    if !extrapolated.is_finite() || (extrapolated - last_raw).abs() > spread + f64::EPSILON {
        return Ok(LimitEstimate {
            samples: samples.to_vec(),
            extrapolated: last_raw,
            error_estimate: spread,
            converged: false,
        });
    }

    let scale = extrapolated.abs().max(1.0);
    Ok(LimitEstimate {
        samples: samples.to_vec(),
        extrapolated,
        error_estimate,
        converged: error_estimate < tol * scale,
    })
}
