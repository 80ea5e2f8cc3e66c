//! The oscillatory function f(x) = x^α (sin(x^{-γ})/ln x + 1) on (0, 1):
//! it has a clean power-law limit at the origin yet its Hölder quotient
//! blows up along an explicit sequence of point pairs.

use serde::Serialize;

use crate::error::{Error, Result};

/// Parameters of the oscillatory construction; γ is pinned to
/// 2|β - α|/β by the choice of the exponents.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct OscParams {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
}

impl OscParams {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        if !(alpha > 0.0) {
            return Err(Error::domain("alpha must be positive"));
        }
        if !(beta > 0.0 && beta < 1.0) {
            return Err(Error::domain("beta must lie in (0,1)"));
        }
        let gamma = 2.0 * (beta - alpha).abs() / beta;
        if !(gamma > 0.0) {
            return Err(Error::domain(
                "alpha = beta gives gamma = 0; the construction needs gamma > 0",
            ));
        }
        Ok(OscParams { alpha, beta, gamma })
    }

    /// Smallest admissible x: below this, x^{-γ} exceeds 1e12 and direct
    /// evaluation of the phase is rejected.
    pub fn x_floor(&self) -> f64 {
        1e-12f64.powf(1.0 / self.gamma)
    }
}

/// Direct evaluation of f(x) = x^α (sin(x^{-γ})/ln x + 1) for x in (0, 1).
pub fn osc_f(params: &OscParams, x: f64) -> Result<f64> {
    if !(x > 0.0 && x < 1.0) {
        return Err(Error::domain(format!("osc_f needs x in (0,1), got {x}")));
    }
    if x < params.x_floor() {
        return Err(Error::domain(format!(
            "osc_f: x = {x} below the phase-accuracy floor {:.3e}",
            params.x_floor()
        )));
    }
    Ok(x.powf(params.alpha) * ((x.powf(-params.gamma)).sin() / x.ln() + 1.0))
}

/// The marked points of the blow-up sequence, with their phases carried as
/// exact multiples of π.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct OscPoints {
    pub p: f64,
    pub q: f64,
    /// p^{-γ} = π (n + 1): an integer multiple of π, sin = 0 exactly.
    pub phase_p: PhaseMultiple,
    /// q^{-γ} = π (n + 1/2): a half-integer multiple, |sin| = 1 exactly.
    pub phase_q: PhaseMultiple,
}

/// A phase known symbolically as (multiple) × π, with the parity that
/// decides its sine without evaluating trigonometry of a huge argument.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct PhaseMultiple {
    /// The rational multiple of π (n+1 or n+1/2).
    pub multiple: f64,
    /// sin(multiple · π) evaluated from the symbolic form.
    pub sin_exact: f64,
}

/// p_n = (2/(π(2+2n)))^{1/γ} and q_n = (2/(π(1+2n)))^{1/γ}, with phases
/// computed symbolically rather than through p^{-γ}.
pub fn osc_points(params: &OscParams, n: u64) -> Result<OscPoints> {
    if n == 0 {
        return Err(Error::domain("osc_points needs n >= 1"));
    }
    let nf = n as f64;
    let inv_gamma = 1.0 / params.gamma;
    let p = (2.0 / (std::f64::consts::PI * (2.0 + 2.0 * nf))).powf(inv_gamma);
    let q = (2.0 / (std::f64::consts::PI * (1.0 + 2.0 * nf))).powf(inv_gamma);
    let sin_q = if n % 2 == 0 { 1.0 } else { -1.0 }; // sin(π/2 + nπ)
    Ok(OscPoints {
        p,
        q,
        phase_p: PhaseMultiple {
            multiple: nf + 1.0,
            sin_exact: 0.0,
        },
        phase_q: PhaseMultiple {
            multiple: nf + 0.5,
            sin_exact: sin_q,
        },
    })
}

/// f at the marked points through the exact-phase route:
/// f(p_n) = p_n^α and f(q_n) = q_n^α (±1/ln q_n + 1).
pub fn osc_f_at_points(params: &OscParams, pts: &OscPoints) -> (f64, f64) {
    let fp = pts.p.powf(params.alpha);
    let fq = pts.q.powf(params.alpha) * (pts.phase_q.sin_exact / pts.q.ln() + 1.0);
    (fp, fq)
}

/// |f(q_n) - f(p_n)| / |q_n - p_n|^β with both factors evaluated through
/// cancellation-free forms (the exact phases, and expm1/ln1p for the tiny
/// gap q_n - p_n).
pub fn holder_quotient(params: &OscParams, n: u64) -> Result<f64> {
    let pts = osc_points(params, n)?;
    let (fp, fq) = osc_f_at_points(params, &pts);

    // q - p = q (1 - (a/b)^{1/γ}), a = 1+2n, b = 2+2n.
    let a = 1.0 + 2.0 * n as f64;
    let rel = -(-(1.0 / a).ln_1p() / params.gamma).exp_m1();
    let gap = pts.q * rel;

    // f(q) - f(p) = q^α (sin_q/ln q + 1 - (p/q)^α); the last difference is
    // the same stable form with exponent α/γ.
    let rel_alpha = -(-(1.0 / a).ln_1p() * params.alpha / params.gamma).exp_m1();
    let diff = pts.q.powf(params.alpha) * (pts.phase_q.sin_exact / pts.q.ln() + rel_alpha);
    debug_assert!(
        (diff.abs() - (fq - fp).abs()).abs() <= 1e-6 * diff.abs().max(1e-300),
        "stable and direct numerators disagree"
    );
    Ok(diff.abs() / gap.powf(params.beta))
}

/// Least-squares slope of ln(quotient) against ln(n) over the given n sweep.
pub fn quotient_loglog_slope(params: &OscParams, ns: &[u64]) -> Result<f64> {
    if ns.len() < 2 {
        return Err(Error::domain("slope fit needs at least two points"));
    }
    let mut pts = Vec::with_capacity(ns.len());
    for &n in ns {
        pts.push(((n as f64).ln(), holder_quotient(params, n)?.ln()));
    }
    let count = pts.len() as f64;
    let mean_x = pts.iter().map(|p| p.0).sum::<f64>() / count;
    let mean_y = pts.iter().map(|p| p.1).sum::<f64>() / count;
    let mut num = 0.0;
    let mut den = 0.0;
    for (x, y) in pts {
        num += (x - mean_x) * (y - mean_y);
        den += (x - mean_x) * (x - mean_x);
    }
    Ok(num / den)
}
