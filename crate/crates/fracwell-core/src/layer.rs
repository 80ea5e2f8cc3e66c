//! Construction of the C-infinity, strictly increasing profile with exact
//! power tails, its derivatives and its inverse.
//!
//! Outside a finite bridge the profile is the exact tail formula
//! -1 + C1 |x|^(-alpha) on the left and 1 - C2 x^(-beta) on the right. On
//! the bridge it is a fixed canonical blend of the two clamped tails;
//! values and derivatives up to order 6 are evaluated from the closed form
//! by Taylor-mode differentiation, so every derivative order carries full
//! precision.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::smooth_step;
use crate::numerics::taylor::{smooth_step_jet, Jet};
use crate::profile::{Profile, TailSide};

/// Parameters of the power-tail profile.
#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct LayerParams {
    pub s: f64,
    pub alpha: f64,
    pub beta: f64,
    pub kappa: f64,
    pub c1: f64,
    pub c2: f64,
}

impl LayerParams {
    /// A symmetric profile with unit tail coefficients: s = 1/2,
    /// alpha = beta = 1, C1 = C2 = 1, kappa = 1.
    pub fn unit_symmetric() -> Self {
        LayerParams {
            s: 0.5,
            alpha: 1.0,
            beta: 1.0,
            kappa: 1.0,
            c1: 1.0,
            c2: 1.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.s > 0.0 && self.s < 1.0) {
            return Err(Error::domain(format!("s must lie in (0,1), got {}", self.s)));
        }
        let two_s = 2.0 * self.s;
        if !(self.alpha > 0.0 && self.alpha <= two_s) {
            return Err(Error::domain(format!(
                "alpha must lie in (0, 2s] = (0, {two_s}], got {}",
                self.alpha
            )));
        }
        if !(self.beta > 0.0 && self.beta <= two_s) {
            return Err(Error::domain(format!(
                "beta must lie in (0, 2s] = (0, {two_s}], got {}",
                self.beta
            )));
        }
        if !(self.kappa > 0.0) {
            return Err(Error::domain("kappa must be positive"));
        }
        if !(self.c1 > 0.0 && self.c2 > 0.0) {
            return Err(Error::domain("tail coefficients must be positive"));
        }
        Ok(())
    }

    /// Whether the construction is exactly odd.
    pub fn is_symmetric(&self) -> bool {
        self.alpha == self.beta && self.c1 == self.c2
    }
}

/// Headroom demanded from the clamped tail values before a monotone bridge
/// is attempted: C1 c^(-alpha) + C2 c^(-beta) <= 2 - GAP_SLACK at the clamp
/// level c.
const GAP_SLACK: f64 = 0.05;

/// Candidate margins (in units of kappa) for widening the bridge until the
/// clamped tails leave room for an increasing blend.
const MARGIN_LADDER: [f64; 5] = [0.5, 1.0, 2.0, 4.0, 8.0];

const MONOTONE_GRID: usize = 4096;
const MAX_DERIV_ORDER: usize = 6;

/// The constructed profile. Immutable after construction; evaluators are
/// pure, so shared read access is safe.
#[derive(Debug, Clone)]
pub struct Layer {
    params: LayerParams,
    /// Half-width of the bridge: kappa + margin. Tails are exact beyond it.
    bridge_half_width: f64,
    /// Clamp level of the leveled tail arguments, in (kappa, bridge_half_width).
    plateau: f64,
    monotone_verified: bool,
}

impl Layer {
    pub fn new(params: LayerParams) -> Result<Self> {
        params.validate()?;

        let kappa = params.kappa;
        let mut chosen = None;
        for margin in MARGIN_LADDER {
            let w = kappa * (1.0 + margin);
            let plateau = 0.5 * (kappa + w);
            let clamped_sum =
                params.c1 * plateau.powf(-params.alpha) + params.c2 * plateau.powf(-params.beta);
            if clamped_sum <= 2.0 - GAP_SLACK {
                chosen = Some((w, plateau));
                break;
            }
        }
        let Some((w, plateau)) = chosen else {
            return Err(Error::Construction {
                x: kappa,
                reason: "tail coefficients leave no room for an increasing bridge \
                         (clamped tail values overlap for every candidate margin)"
                    .into(),
            });
        };

        let layer = Layer {
            params,
            bridge_half_width: w,
            plateau,
            monotone_verified: false,
        };
        layer.check_monotone_and_range()?;
        Ok(Layer {
            monotone_verified: true,
            ..layer
        })
    }

    fn check_monotone_and_range(&self) -> Result<()> {
        let span = (10.0 * self.params.kappa).max(1.25 * self.bridge_half_width);
        let mut prev = f64::NEG_INFINITY;
        for k in 0..MONOTONE_GRID {
            let x = -span + 2.0 * span * k as f64 / (MONOTONE_GRID - 1) as f64;
            let v = self.phi(x);
            if !(v > prev) {
                return Err(Error::Construction {
                    x,
                    reason: "profile not strictly increasing on the validation grid".into(),
                });
            }
            if v.abs() >= 1.0 {
                return Err(Error::Construction {
                    x,
                    reason: format!("profile value {v} escapes (-1, 1)"),
                });
            }
            prev = v;
        }
        Ok(())
    }

    pub fn params(&self) -> &LayerParams {
        &self.params
    }

    /// Tails are exact (closed form) for |x| >= this.
    pub fn bridge_half_width(&self) -> f64 {
        self.bridge_half_width
    }

    pub fn monotone_verified(&self) -> bool {
        self.monotone_verified
    }

    /// The profile value; exact tail formula beyond the bridge, the
    /// canonical blend on it.
    pub fn phi(&self, x: f64) -> f64 {
        let p = &self.params;
        if x <= -self.bridge_half_width {
            -1.0 + p.c1 * (-x).powf(-p.alpha)
        } else if x >= self.bridge_half_width {
            1.0 - p.c2 * x.powf(-p.beta)
        } else {
            self.bridge_jet_upto(x, 0).value()
        }
    }

    /// Derivative of order 1..=6; exact tail formulas outside the bridge,
    /// Taylor-mode differentiation of the blend on it.
    pub fn phi_deriv(&self, x: f64, order: usize) -> Result<f64> {
        if !(1..=MAX_DERIV_ORDER).contains(&order) {
            return Err(Error::domain(format!(
                "derivative order must lie in 1..={MAX_DERIV_ORDER}, got {order}"
            )));
        }
        let p = &self.params;
        if x <= -self.bridge_half_width {
            Ok(p.c1 * rising_factor(p.alpha, order) * (-x).powf(-p.alpha - order as f64))
        } else if x >= self.bridge_half_width {
            let sign = if order % 2 == 1 { 1.0 } else { -1.0 };
            Ok(sign * p.c2 * rising_factor(p.beta, order) * x.powf(-p.beta - order as f64))
        } else {
            Ok(self.bridge_jet_upto(x, order).deriv(order))
        }
    }

    /// The unique x with phi(x) = r. Analytic inversion in the tails,
    /// safeguarded bisection + Newton on the bridge; |phi(x) - r| <= 1e-12.
    pub fn phi_inverse(&self, r: f64) -> Result<f64> {
        if !(-1.0 < r && r < 1.0) {
            return Err(Error::domain(format!(
                "phi_inverse: r must lie in (-1, 1), got {r}"
            )));
        }
        let p = &self.params;
        let w = self.bridge_half_width;
        let v_lo = -1.0 + p.c1 * w.powf(-p.alpha);
        let v_hi = 1.0 - p.c2 * w.powf(-p.beta);
        if r <= v_lo {
            return Ok(-(p.c1 / (1.0 + r)).powf(1.0 / p.alpha));
        }
        if r >= v_hi {
            return Ok((p.c2 / (1.0 - r)).powf(1.0 / p.beta));
        }

        // Bracketed Newton on the bridge.
        let (mut lo, mut hi) = (-w, w);
        let mut x = 0.5 * (lo + hi);
        for _ in 0..200 {
            let jet = self.bridge_jet_upto(x, 1);
            let fx = jet.value() - r;
            if fx.abs() <= 1e-13 {
                break;
            }
            if fx > 0.0 {
                hi = x;
            } else {
                lo = x;
            }
            let d = jet.deriv(1);
            let newton = x - fx / d;
            x = if d > 0.0 && newton > lo && newton < hi {
                newton
            } else {
                0.5 * (lo + hi)
            };
        }
        if (self.phi(x) - r).abs() > 1e-12 {
            return Err(Error::Construction {
                x,
                reason: format!("phi_inverse failed to reach tolerance at r = {r}"),
            });
        }
        Ok(x)
    }

    /// Taylor jet of the blend at a bridge point. `max_order` is advisory
    /// (the jet always carries 6 orders); it only documents intent at call
    /// sites.
    fn bridge_jet_upto(&self, x: f64, _max_order: usize) -> Jet {
        let p = &self.params;
        let w = self.bridge_half_width;
        let xj = Jet::variable(x);

        let lower = self
            .clamp_jet(&xj, /*mirror=*/ false)
            .powf(-p.alpha)
            .scale(p.c1)
            .add(&Jet::constant(-1.0));
        let upper = Jet::constant(1.0).sub(
            &self
                .clamp_jet(&xj, /*mirror=*/ true)
                .powf(-p.beta)
                .scale(p.c2),
        );

        let t = xj.add(&Jet::constant(w)).scale(1.0 / (2.0 * w));
        let sig = smooth_step_jet(&t);
        let one_minus_sig = Jet::constant(1.0).sub(&sig);
        one_minus_sig.mul(&lower).add(&sig.mul(&upper))
    }

    /// Leveled |x| for the left tail (mirror = false): equal to -x for
    /// x <= -w, smoothly and monotonically decreased to the plateau over a
    /// window of length w - plateau, constant afterwards. The window length
    /// keeps the level derivative one-signed. mirror = true evaluates the
    /// right-tail counterpart m_+(x) = m_-(-x).
    fn clamp_jet(&self, xj: &Jet, mirror: bool) -> Jet {
        let w = self.bridge_half_width;
        let c = self.plateau;
        let window = w - c;
        let arg = if mirror { xj.scale(-1.0) } else { *xj };
        let x = arg.value();
        if x <= -w {
            return arg.scale(-1.0);
        }
        let tau = arg.add(&Jet::constant(w)).scale(1.0 / window);
        if tau.value() >= 1.0 {
            return Jet::constant(c);
        }
        let sig = smooth_step_jet(&tau);
        let neg = arg.scale(-1.0);
        Jet::constant(1.0)
            .sub(&sig)
            .mul(&neg)
            .add(&sig.scale(c))
    }
}

/// alpha (alpha+1) ... (alpha+order-1).
fn rising_factor(exponent: f64, order: usize) -> f64 {
    let mut prod = 1.0;
    for k in 0..order {
        prod *= exponent + k as f64;
    }
    prod
}

/// Scalar twin of the jet blend; kept as an independent cross-check.
#[cfg(test)]
pub(crate) fn raw_bridge_value(params: &LayerParams, w: f64, plateau: f64, x: f64) -> f64 {
    let window = w - plateau;
    let clamp_left = |x: f64| -> f64 {
        if x <= -w {
            return -x;
        }
        let tau = (x + w) / window;
        if tau >= 1.0 {
            return plateau;
        }
        let sig = smooth_step(tau);
        (1.0 - sig) * (-x) + sig * plateau
    };
    let t = (x + w) / (2.0 * w);
    let sig = smooth_step(t);
    let lower = -1.0 + params.c1 * clamp_left(x).powf(-params.alpha);
    let upper = 1.0 - params.c2 * clamp_left(-x).powf(-params.beta);
    (1.0 - sig) * lower + sig * upper
}

impl Profile for Layer {
    fn s(&self) -> f64 {
        self.params.s
    }

    fn value(&self, x: f64) -> f64 {
        self.phi(x)
    }

    fn deriv(&self, x: f64, order: usize) -> Result<f64> {
        self.phi_deriv(x, order)
    }

    fn inverse(&self, r: f64) -> Result<f64> {
        self.phi_inverse(r)
    }

    fn tail_start(&self) -> f64 {
        self.bridge_half_width
    }

    fn tail_deviation(&self, side: TailSide, order: usize, z: f64) -> f64 {
        let p = &self.params;
        match (side, order) {
            (TailSide::Left, 0) => p.c1 * z.powf(-p.alpha),
            (TailSide::Right, 0) => -p.c2 * z.powf(-p.beta),
            (TailSide::Left, n) => p.c1 * rising_factor(p.alpha, n) * z.powf(-p.alpha - n as f64),
            (TailSide::Right, n) => {
                let sign = if n % 2 == 1 { 1.0 } else { -1.0 };
                sign * p.c2 * rising_factor(p.beta, n) * z.powf(-p.beta - n as f64)
            }
        }
    }
}
