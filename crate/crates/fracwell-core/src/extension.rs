//! Poisson extension to the upper half-plane: kernels, the harmonic lift
//! ū(x, y) = ∫ H_s(ξ) v(x - yξ) dξ of a bounded profile, the conjugate
//! function w = y^{1-2s} ∂_y ū computed two independent ways, and the
//! Hamiltonian-type inequality linking the extension energy to the
//! potential.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::numerics::gamma::gamma;
use crate::numerics::quad::{adaptive_panel_integrate, QuadratureConfig};

const SQRT_PI: f64 = 1.772_453_850_905_516;

/// The constants attached to the extension problem at a given order s.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ExtensionConstants {
    pub s: f64,
    /// Poisson-kernel normalization: ∫ P_s(x, y) dx = 1.
    pub p_s: f64,
    /// 2^{2s-1} Γ(s)/Γ(1-2s), written through the reflection formula so only
    /// positive Gamma arguments appear; vanishes at s = 1/2.
    pub d_s: f64,
    /// s(1-s) 2^{2s} Γ((1+2s)/2) / (√π Γ(2-s)).
    pub q_s: f64,
    /// The ratio the boundary conditions actually use: 1/(2s p_s), the
    /// unique value consistent with both the extension boundary condition
    /// and the trace limit of w.
    pub ds_over_qs: f64,
    /// The closed form Γ((1+2s)/2) Γ(1-2s) / (√π Γ(1-s) Γ(s)); disagrees
    /// with the normalization-defined p_s for generic s and diverges at
    /// s = 1/2 (None there). Recorded, not used.
    pub p_s_remark: Option<f64>,
}

/// All constants of the extension problem.
pub fn extension_constants(s: f64) -> Result<ExtensionConstants> {
    if !(s > 0.0 && s < 1.0) {
        return Err(Error::domain(format!("s must lie in (0,1), got {s}")));
    }
    let p_s = gamma((1.0 + 2.0 * s) / 2.0)? / (SQRT_PI * gamma(s)?);
    let q_s = s * (1.0 - s) * 2f64.powf(2.0 * s) * gamma((1.0 + 2.0 * s) / 2.0)?
        / (SQRT_PI * gamma(2.0 - s)?);
    // Γ(1-2s) = π / (sin(2πs) Γ(2s)); the sine factor is applied directly.
    let sin_2pis = (2.0 * std::f64::consts::PI * s).sin();
    let d_s = 2f64.powf(2.0 * s - 1.0) * gamma(s)? * sin_2pis * gamma(2.0 * s)?
        / std::f64::consts::PI;
    let p_s_remark = if sin_2pis.abs() < 1e-9 {
        None
    } else {
        Some(
            gamma((1.0 + 2.0 * s) / 2.0)? * std::f64::consts::PI
                / (sin_2pis
                    * gamma(2.0 * s)?
                    * SQRT_PI
                    * gamma(1.0 - s)?
                    * gamma(s)?),
        )
    };
    Ok(ExtensionConstants {
        s,
        p_s,
        d_s,
        q_s,
        ds_over_qs: 1.0 / (2.0 * s * p_s),
        p_s_remark,
    })
}

/// H_s(ξ) = p_s (1 + ξ²)^{-(1+2s)/2}; the y = 1 slice of the Poisson kernel.
pub fn kernel_h(s: f64, p_s: f64, xi: f64) -> f64 {
    p_s * (1.0 + xi * xi).powf(-(1.0 + 2.0 * s) / 2.0)
}

/// Which kernel weights an integral over ξ.
#[derive(Debug, Clone, Copy)]
enum KernelKind {
    /// H_s(ξ): even, decay ξ^{-1-2s}.
    Plain,
    /// H_s'(ξ): odd, decay ξ^{-2-2s}.
    Derivative,
    /// H_s(ξ) + ξ H_s'(ξ): even, decay -2s p_s ξ^{-1-2s}.
    YDerivative,
}

/// ∫_R K(ξ) f(ξ) dξ for the three kernel shapes. The central part |ξ| <= 1
/// is integrated directly; the far field is mapped by ξ = z^{-1/(2s)}, which
/// turns each kernel-weighted integrand into a bounded one on (0, 1].
fn kernel_integral(
    kind: KernelKind,
    s: f64,
    p_s: f64,
    f: &dyn Fn(f64) -> f64,
    cfg: &QuadratureConfig,
) -> Result<f64> {
    let two_s = 2.0 * s;
    let central = |xi: f64| -> f64 {
        let base = (1.0 + xi * xi).powf(-(1.0 + two_s) / 2.0);
        match kind {
            KernelKind::Plain => p_s * base * f(xi),
            KernelKind::Derivative => {
                -p_s * (1.0 + two_s) * xi * base / (1.0 + xi * xi) * f(xi)
            }
            KernelKind::YDerivative => {
                p_s * base * (1.0 - (1.0 + two_s) * xi * xi / (1.0 + xi * xi)) * f(xi)
            }
        }
    };
    let (center, _) = adaptive_panel_integrate(central, -1.0, 1.0, cfg)?;

    let far = |z: f64| -> f64 {
        let xi = z.powf(-1.0 / two_s);
        let zs = z.powf(1.0 / s);
        match kind {
            KernelKind::Plain => {
                (p_s / two_s)
                    * (1.0 + zs).powf(-(1.0 + two_s) / 2.0)
                    * (f(xi) + f(-xi))
            }
            KernelKind::Derivative => {
                -(p_s * (1.0 + two_s) / two_s)
                    * z.powf(1.0 / two_s)
                    * (1.0 + zs).powf(-(3.0 + two_s) / 2.0)
                    * (f(xi) - f(-xi))
            }
            KernelKind::YDerivative => {
                (p_s / two_s)
                    * (zs - two_s)
                    * (1.0 + zs).powf(-(3.0 + two_s) / 2.0)
                    * (f(xi) + f(-xi))
            }
        }
    };
    let (outer, _) = adaptive_panel_integrate(far, 0.0, 1.0, cfg)?;
    Ok(center + outer)
}

/// The harmonic lift ū(x, y) = ∫ H_s(ξ) v(x - yξ) dξ of a bounded
/// continuous v, for y > 0.
pub fn extend(
    v: &dyn Fn(f64) -> f64,
    s: f64,
    x: f64,
    y: f64,
    cfg: &QuadratureConfig,
) -> Result<f64> {
    if !(y > 0.0) {
        return Err(Error::domain(format!("extend needs y > 0, got {y}")));
    }
    let c = extension_constants(s)?;
    kernel_integral(KernelKind::Plain, s, c.p_s, &|xi| v(x - y * xi), cfg)
}

/// ∂_x ū via the integrated-by-parts kernel form
/// (1/y) ∫ H_s'(ξ) (v(x - yξ) - v(x)) dξ; the difference form keeps the
/// 1/y amplification benign.
pub fn extend_dx(
    v: &dyn Fn(f64) -> f64,
    s: f64,
    x: f64,
    y: f64,
    cfg: &QuadratureConfig,
) -> Result<f64> {
    let c = extension_constants(s)?;
    let vx = v(x);
    let val = kernel_integral(
        KernelKind::Derivative,
        s,
        c.p_s,
        &|xi| v(x - y * xi) - vx,
        cfg,
    )?;
    Ok(val / y)
}

/// ∂_y ū via -(1/y) ∫ (H_s + ξ H_s')(ξ) (v(x - yξ) - v(x)) dξ.
pub fn extend_dy(
    v: &dyn Fn(f64) -> f64,
    s: f64,
    x: f64,
    y: f64,
    cfg: &QuadratureConfig,
) -> Result<f64> {
    let c = extension_constants(s)?;
    let vx = v(x);
    let val = kernel_integral(
        KernelKind::YDerivative,
        s,
        c.p_s,
        &|xi| v(x - y * xi) - vx,
        cfg,
    )?;
    Ok(-val / y)
}

/// How to compute the conjugate function w = y^{1-2s} ∂_y ū.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WMethod {
    FiniteDifference,
    Representation,
}

/// w by a five-point central difference of ū in y with step y/100.
pub fn w_finite_difference(
    v: &dyn Fn(f64) -> f64,
    s: f64,
    x: f64,
    y: f64,
    cfg: &QuadratureConfig,
) -> Result<f64> {
    let h = y / 100.0;
    let u = |yy: f64| extend(v, s, x, yy, cfg);
    let d = (-u(y + 2.0 * h)? + 8.0 * u(y + h)? - 8.0 * u(y - h)? + u(y - 2.0 * h)?)
        / (12.0 * h);
    Ok(y.powf(1.0 - 2.0 * s) * d)
}

/// w by the representation formula
/// w(x, y) = 2s p_s ∫ H_{1-s}(ξ) L_s v(x - yξ) dξ.
pub fn w_representation(
    lsv: &dyn Fn(f64) -> f64,
    s: f64,
    x: f64,
    y: f64,
    cfg: &QuadratureConfig,
) -> Result<f64> {
    let c = extension_constants(s)?;
    let conj = extension_constants(1.0 - s)?;
    let val = kernel_integral(
        KernelKind::Plain,
        1.0 - s,
        conj.p_s,
        &|xi| lsv(x - y * xi),
        cfg,
    )?;
    Ok(2.0 * s * c.p_s * val)
}

/// Dispatcher over the two w routes.
pub fn w_eval(
    v: &dyn Fn(f64) -> f64,
    lsv: &dyn Fn(f64) -> f64,
    s: f64,
    x: f64,
    y: f64,
    cfg: &QuadratureConfig,
    method: WMethod,
) -> Result<f64> {
    match method {
        WMethod::FiniteDifference => w_finite_difference(v, s, x, y, cfg),
        WMethod::Representation => w_representation(lsv, s, x, y, cfg),
    }
}

/// One sampled point of the extension grid.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ExtensionSample {
    pub x: f64,
    pub y: f64,
    pub u_bar: f64,
    pub w_fd: f64,
    pub w_repr: f64,
}

/// Result of the Hamiltonian-type estimate at one (x, y).
#[derive(Debug, Clone, Copy, Serialize)]
pub struct HamiltonianCheck {
    pub x: f64,
    pub y: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

/// The strict inequality
///
///   (d_s/q_s) ∫_0^y (t^{1-2s}/2) (ū_x² - ū_y²) dt < G(ū(x,0)) - G(L⁺)
///
/// for a monotone profile v with potential G (G' = L_s v ∘ v^{-1} and
/// G(L⁺) = G(1)). ū_x and ū_y use the integrated-by-parts kernel forms; the
/// t-integral runs adaptive panels.
pub fn hamiltonian_check(
    v: &dyn Fn(f64) -> f64,
    g: &dyn Fn(f64) -> f64,
    s: f64,
    x: f64,
    y: f64,
    cfg: &QuadratureConfig,
) -> Result<HamiltonianCheck> {
    if !(y > 0.0) {
        return Err(Error::domain(format!(
            "hamiltonian_check needs y > 0, got {y}"
        )));
    }
    let c = extension_constants(s)?;
    let integrand = |t: f64| -> f64 {
        let ux = extend_dx(v, s, x, t, cfg).unwrap_or(f64::NAN);
        let uy = extend_dy(v, s, x, t, cfg).unwrap_or(f64::NAN);
        t.powf(1.0 - 2.0 * s) * 0.5 * (ux * ux - uy * uy)
    };
    // The inner evaluations are themselves full quadratures; match the outer
    // tolerance to their noise level.
    let outer_cfg = QuadratureConfig {
        tol_abs: (cfg.tol_abs * 100.0).max(1e-11),
        tol_rel: (cfg.tol_rel * 100.0).max(1e-8),
        max_panels: 512,
        ..cfg.clone()
    };
    let (integral, _) = adaptive_panel_integrate(integrand, 0.0, y, &outer_cfg)?;
    if integral.is_nan() {
        return Err(Error::domain("extension gradient failed to evaluate"));
    }
    let lhs = c.ds_over_qs * integral;
    let rhs = g(v(x)) - g(1.0);
    Ok(HamiltonianCheck {
        x,
        y,
        lhs,
        rhs,
        holds: lhs < rhs,
    })
}

/// The double-well potential paired with the arctan profile in the
/// unnormalized convention: G(ρ) = (cos(πρ) + 1)/π, so that
/// G'(ρ) = -sin(πρ) = L_{1/2} u ∘ u^{-1}.
pub fn arctan_well_potential(rho: f64) -> f64 {
    ((std::f64::consts::PI * rho).cos() + 1.0) / std::f64::consts::PI
}
