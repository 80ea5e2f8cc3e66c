//! Evaluation of the one-dimensional fractional Laplacian
//!
//!   L_s φ(x) = ∫_0^∞ (φ(x+t) + φ(x-t) - 2 φ(x)) t^(-1-2s) dt
//!
//! applied to a profile or any of its derivatives up to order 4.
//!
//! The symmetrized second-difference form is integrable for every
//! s in (0,1), so no principal value is taken. The integral is split into
//! an inner Taylor correction on (0, t_min], adaptive panel quadrature on
//! [t_min, T], and a closed-form/transformed outer part on [T, ∞) where
//! both x+t and x-t lie in the exact tails.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::numerics::quad::{adaptive_panel_integrate, gauss_rule, QuadratureConfig};
use crate::profile::{Profile, TailSide};

pub use crate::numerics::quad::TminPolicy;

/// Contribution of each region of the split integral; the value is their sum.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct Breakdown {
    pub inner: f64,
    pub mid: f64,
    pub outer_constant: f64,
    pub outer_power: f64,
}

/// One evaluation of L_s φ^(i)(x).
#[derive(Debug, Clone, Copy, Serialize)]
pub struct FracEval {
    pub value: f64,
    pub error_estimate: f64,
    pub breakdown: Breakdown,
}

const MAX_FRACLAP_DERIV: usize = 4;

/// L_s φ(x) for the given profile.
pub fn fraclap(profile: &dyn Profile, x: f64, cfg: &QuadratureConfig) -> Result<FracEval> {
    fraclap_deriv(profile, 0, x, cfg)
}

/// L_s φ^(i)(x) for i in 0..=4; i = 0 is exactly `fraclap`.
pub fn fraclap_deriv(
    profile: &dyn Profile,
    i: usize,
    x: f64,
    cfg: &QuadratureConfig,
) -> Result<FracEval> {
    if i > MAX_FRACLAP_DERIV {
        return Err(Error::domain(format!(
            "fraclap_deriv: order must lie in 0..={MAX_FRACLAP_DERIV}, got {i}"
        )));
    }
    cfg.validate()?;
    let s = profile.s();
    let two_s = 2.0 * s;

    let eval = |y: f64| -> f64 {
        if i == 0 {
            profile.value(y)
        } else {
            profile.deriv(y, i).expect("order validated")
        }
    };
    let center = eval(x);
    let d2 = profile.deriv(x, i + 2)?;
    let d4 = if i + 4 <= 6 {
        Some(profile.deriv(x, i + 4)?)
    } else {
        None
    };

    // Inner cutoff. The second difference loses eps·|φ| absolutely, which
    // the t^(-1-2s) weight amplifies to eps |φ| t_min^(-2s)/(2s); the Taylor
    // correction leaves a remainder growing like t_min^(4-2s) (or 6-2s when
    // the quartic term is available). The cutoff balances the two — the
    // optimum is tolerance independent, so tightening tolerances never
    // degrades the inner part — and never drops below the spec rule floor.
    let noise_scale = f64::EPSILON * center.abs().max(1.0);
    let t_rule = (cfg.tol_abs * (2.0 - two_s) / d2.abs().max(1.0)).powf(1.0 / (2.0 - two_s));
    let t_balance = match d4 {
        Some(d4) => {
            let proxy = (10.0 * d4.abs()).max(1.0); // stand-in for φ^{(i+6)}
            (1800.0 * noise_scale / (two_s * proxy)).powf(1.0 / 6.0)
        }
        None => {
            let proxy = (10.0 * d2.abs()).max(1.0); // stand-in for φ^{(i+4)}
            (12.0 * (4.0 - two_s) * noise_scale / (two_s * proxy)).powf(0.25)
        }
    };
    let t_min = t_rule
        .max(t_balance)
        .clamp(cfg.t_min_policy.floor, cfg.t_min_policy.cap);

    // Inner Taylor correction, with the quartic term when the profile still
    // has the derivatives for it.
    let mut inner = d2 * t_min.powf(2.0 - two_s) / (2.0 - two_s);
    if let Some(d4) = d4 {
        inner += d4 * t_min.powf(4.0 - two_s) / (12.0 * (4.0 - two_s));
    }
    // Remainder probe: whatever the Taylor correction misses at t_min,
    // extended over the inner region, plus the rounding floor.
    let probe = eval(x + t_min) + eval(x - t_min) - 2.0 * center;
    let taylor_probe = d2 * t_min * t_min + d4.unwrap_or(0.0) * t_min.powi(4) / 12.0;
    let inner_err = (probe - taylor_probe).abs() * t_min.powf(-two_s) / (4.0 - two_s)
        + noise_scale * t_min.powf(-two_s) / two_s;

    // Outer radius: beyond T both x ± t are in the exact tails.
    let tail_start = profile.tail_start();
    let big_t = cfg.outer_margin * (x.abs() + tail_start);

    // Mid region: adaptive panels, seeded at the tail-crossing abscissae
    // and geometrically in between.
    let (mid, mid_err) = match integrate_mid(&eval, center, x, s, t_min, big_t, tail_start, cfg) {
        Ok(pair) => pair,
        Err(Error::QuadratureNonConvergence {
            best,
            error_estimate,
        }) => {
            let (oc, op, _) = outer_parts(profile, i, x, s, big_t, center);
            return Err(Error::QuadratureNonConvergence {
                best: inner + best + oc + op,
                error_estimate,
            });
        }
        Err(e) => return Err(e),
    };

    let (outer_constant, outer_power, outer_err) = outer_parts(profile, i, x, s, big_t, center);

    let value = inner + mid + outer_constant + outer_power;
    Ok(FracEval {
        value,
        error_estimate: inner_err + mid_err + outer_err,
        breakdown: Breakdown {
            inner,
            mid,
            outer_constant,
            outer_power,
        },
    })
}

#[allow(clippy::too_many_arguments)]
fn integrate_mid(
    eval: &dyn Fn(f64) -> f64,
    center: f64,
    x: f64,
    s: f64,
    t_min: f64,
    big_t: f64,
    tail_start: f64,
    cfg: &QuadratureConfig,
) -> Result<(f64, f64)> {
    let two_s = 2.0 * s;
    let integrand = |t: f64| (eval(x + t) + eval(x - t) - 2.0 * center) * t.powf(-1.0 - two_s);

    // Segment boundaries: tail crossings of x ± t, then geometric fill.
    let mut seeds = vec![t_min, big_t];
    for cross in [
        tail_start - x,
        -tail_start - x,
        x - tail_start,
        x + tail_start,
    ] {
        if cross > t_min * 1.0001 && cross < big_t * 0.9999 {
            seeds.push(cross);
        }
    }
    seeds.sort_by(|a, b| a.partial_cmp(b).unwrap());
    seeds.dedup_by(|a, b| (*a - *b).abs() < 1e-12 * b.abs());
    let mut bounds = Vec::with_capacity(64);
    for pair in seeds.windows(2) {
        let (a, b) = (pair[0], pair[1]);
        bounds.push(a);
        let decades = (b / a).log2() / 3.0;
        let extra = decades.ceil() as usize;
        for k in 1..extra {
            bounds.push(a * (b / a).powf(k as f64 / extra as f64));
        }
    }
    bounds.push(big_t);

    let nseg = (bounds.len() - 1).max(1) as f64;
    let seg_cfg = QuadratureConfig {
        tol_abs: cfg.tol_abs / nseg,
        tol_rel: cfg.tol_rel,
        ..cfg.clone()
    };
    let mut total = 0.0;
    let mut err = 0.0;
    for pair in bounds.windows(2) {
        let (v, e) = adaptive_panel_integrate(integrand, pair[0], pair[1], &seg_cfg).map_err(
            |quad_err| match quad_err {
                Error::QuadratureNonConvergence {
                    best,
                    error_estimate,
                } => Error::QuadratureNonConvergence {
                    best: total + best,
                    error_estimate: err + error_estimate,
                },
                other => other,
            },
        )?;
        total += v;
        err += e;
    }
    Ok((total, err))
}

/// Closed-form constant part and the transformed power part of the outer
/// integral. Returns (constant, power, error_estimate).
fn outer_parts(
    profile: &dyn Profile,
    i: usize,
    x: f64,
    s: f64,
    big_t: f64,
    center: f64,
) -> (f64, f64, f64) {
    let two_s = 2.0 * s;
    let constant = -2.0 * center * big_t.powf(-two_s) / two_s;

    // After u = T/t the power part becomes
    //   T^(-2s) ∫_0^1 [dev_L(T/u - x) + dev_R(T/u + x)] u^(2s-1) du
    // with both arguments in the exact tails for all u in (0, 1].
    let integrand = |u: f64| {
        let t = big_t / u;
        (profile.tail_deviation(TailSide::Left, i, t - x)
            + profile.tail_deviation(TailSide::Right, i, t + x))
            * u.powf(two_s - 1.0)
    };
    let rule40 = gauss_rule(40);
    let rule20 = gauss_rule(20);
    let i40 = rule40.integrate(0.0, 1.0, integrand);
    let i20 = rule20.integrate(0.0, 1.0, integrand);
    let scale = big_t.powf(-two_s);
    (constant, scale * i40, scale * (i40 - i20).abs())
}

/// Closed form of L_{1/2} applied to u = (2/π) arctan, in the unnormalized
/// convention of this crate:
///
///   L_{1/2} u(x) = -sin(π u(x)) = -2x / (1 + x²).
///
/// (The c_{1,1/2}-normalized half-Laplacian of u is (1/π) sin(π u); the
/// kernel here carries no normalizing constant, which multiplies that
/// identity by π. Verified against a brute-force evaluation of the
/// defining integral.)
pub fn fraclap_arctan_exact(x: f64) -> f64 {
    -2.0 * x / (1.0 + x * x)
}
