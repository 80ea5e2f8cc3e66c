//! Euler Gamma function on the positive real axis.
//!
//! Lanczos approximation with g = 7 and 9 coefficients. All the constants
//! needed downstream (extension kernels, asymptotic targets) evaluate Γ at
//! positive arguments only, so no reflection formula is carried.

use crate::error::{Error, Result};

const LANCZOS_G: f64 = 7.0;

// Coefficients for g = 7, n = 9 (GSL / Godfrey set).
const LANCZOS_COEF: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// Γ(x) for x > 0, relative error below 1e-12 across the positive axis.
///
/// Rejects non-positive and non-finite arguments instead of reflecting.
pub fn gamma(x: f64) -> Result<f64> {
    if !x.is_finite() {
        return Err(Error::domain(format!("gamma: non-finite argument {x}")));
    }
    if x <= 0.0 {
        return Err(Error::domain(format!(
            "gamma: argument must be positive, got {x}"
        )));
    }
    Ok(lanczos(x))
}

fn lanczos(x: f64) -> f64 {
    // Series is written for Γ(z + 1); shift down once.
    let z = x - 1.0;
    let mut acc = LANCZOS_COEF[0];
    for (i, c) in LANCZOS_COEF.iter().enumerate().skip(1) {
        acc += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    (2.0 * std::f64::consts::PI).sqrt() * t.powf(z + 0.5) * (-t).exp() * acc
}

/// Γ(i + 2s) / Γ(1 + 2s) evaluated as the exact product
/// (1 + 2s)(2 + 2s)···(i − 1 + 2s).
///
/// For i = 0 the ratio is Γ(2s)/Γ(1 + 2s) = 1/(2s) by the recurrence.
pub fn gamma_ratio(i: u32, s: f64) -> f64 {
    debug_assert!(s > 0.0 && s < 1.0);
    if i == 0 {
        return 1.0 / (2.0 * s);
    }
    let mut prod = 1.0;
    for j in 1..i {
        prod *= j as f64 + 2.0 * s;
    }
    prod
}
