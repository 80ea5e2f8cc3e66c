//! The verification harness: every far-field and near-well limit becomes a
//! sampled sweep, an extrapolated value and a pass/fail record against its
//! closed-form target.

use serde::{Serialize, Serializer};

use crate::error::Result;
use crate::fraclap::{fraclap, fraclap_deriv};
use crate::layer::{Layer, LayerParams};
use crate::numerics::extrapolate::extrapolate_limit;
use crate::numerics::gamma::gamma_ratio;
use crate::numerics::quad::QuadratureConfig;
use crate::potential::{build_potential, flux_integral, recover_vderiv, GridConfig, PotentialModel};
use crate::profile::Profile;

/// Which limit a report refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    MinusInfinity,
    PlusInfinity,
    /// r -> -1 from above.
    LeftWell,
    /// r -> 1 from below.
    RightWell,
}

impl Serialize for Side {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        ser.serialize_str(match self {
            Side::MinusInfinity => "-inf",
            Side::PlusInfinity => "+inf",
            Side::LeftWell => "-1+",
            Side::RightWell => "1-",
        })
    }
}

/// A numeric target, or the bare claim that the limit exists and is finite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Target {
    Value(f64),
    Finite,
}

impl Serialize for Target {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Target::Value(v) => ser.serialize_f64(*v),
            Target::Finite => ser.serialize_str("finite"),
        }
    }
}

/// One verified limit.
#[derive(Debug, Clone, Serialize)]
pub struct LimitReport {
    pub name: String,
    pub paper_eq: String,
    pub side: Side,
    pub samples: Vec<(f64, f64)>,
    pub extrapolated: f64,
    pub error_estimate: f64,
    pub converged: bool,
    pub target: Target,
    pub rel_error: f64,
    pub pass: bool,
}

/// A non-asymptotic check (well balance, positivity, regularity indices).
#[derive(Debug, Clone, Serialize)]
pub struct ScalarCheck {
    pub name: String,
    pub paper_eq: String,
    pub value: f64,
    pub constraint: String,
    pub pass: bool,
}

/// Sampling controls for the limit sweeps.
#[derive(Debug, Clone, Copy, Serialize, PartialEq)]
pub struct SweepConfig {
    /// First abscissa, in units of kappa.
    pub x0_factor: f64,
    /// Geometric ratio between consecutive samples.
    pub ratio: f64,
    pub count: usize,
    /// Relative tolerance for pass/fail of finite targets.
    pub rel_tol: f64,
    /// The near-well V sweeps anchor their tail integral at
    /// tail_anchor_factor times the largest sample abscissa.
    pub tail_anchor_factor: f64,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            x0_factor: 50.0,
            ratio: 2.0,
            count: 7,
            rel_tol: 2e-2,
            tail_anchor_factor: 100.0,
        }
    }
}

impl SweepConfig {
    /// Far-field sweeps for L_s φ^(i): the signal decays like x^(-i-2s), so
    /// higher orders start closer in and stop earlier to stay above the
    /// quadrature noise floor.
    pub fn for_deriv_order(&self, i: usize) -> SweepConfig {
        match i {
            0 | 1 => *self,
            2 => SweepConfig {
                x0_factor: self.x0_factor.min(20.0),
                ratio: 2.0,
                count: self.count.min(6),
                ..*self
            },
            _ => SweepConfig {
                x0_factor: self.x0_factor.min(12.0),
                ratio: 1.7,
                count: self.count.min(6),
                ..*self
            },
        }
    }

    fn abscissae(&self, kappa: f64) -> Vec<f64> {
        (0..self.count)
            .map(|k| self.x0_factor * kappa * self.ratio.powi(k as i32))
            .collect()
    }
}

fn finish_report(
    name: &str,
    paper_eq: &str,
    side: Side,
    samples: Vec<(f64, f64)>,
    target: Target,
    rel_tol: f64,
) -> Result<LimitReport> {
    let est = extrapolate_limit(&samples, rel_tol)?;
    let (rel_error, pass) = match target {
        Target::Value(t) => {
            let rel = (est.extrapolated - t).abs() / t.abs().max(f64::MIN_POSITIVE);
            (rel, rel <= rel_tol)
        }
        Target::Finite => {
            let rel = est.error_estimate / est.extrapolated.abs().max(1e-300);
            (rel, est.converged)
        }
    };
    Ok(LimitReport {
        name: name.into(),
        paper_eq: paper_eq.into(),
        side,
        samples: est.samples,
        extrapolated: est.extrapolated,
        error_estimate: est.error_estimate,
        converged: est.converged,
        target,
        rel_error,
        pass,
    })
}

/// Far-field decay of L_s φ: |x|^{2s} L_s φ(x) -> 1/s (x -> -∞) and
/// -1/s (x -> +∞).
pub fn verify_prop_thone(
    layer: &Layer,
    cfg: &QuadratureConfig,
    sweep: &SweepConfig,
) -> Result<[LimitReport; 2]> {
    let p = layer.params();
    let two_s = 2.0 * p.s;
    let xs = sweep.abscissae(p.kappa);
    let mut minus = Vec::with_capacity(xs.len());
    let mut plus = Vec::with_capacity(xs.len());
    for &x in &xs {
        minus.push((x, x.powf(two_s) * fraclap(layer, -x, cfg)?.value));
        plus.push((x, x.powf(two_s) * fraclap(layer, x, cfg)?.value));
    }
    Ok([
        finish_report(
            "fraclap_decay",
            "(3.1)",
            Side::MinusInfinity,
            minus,
            Target::Value(1.0 / p.s),
            sweep.rel_tol,
        )?,
        finish_report(
            "fraclap_decay",
            "(3.1)",
            Side::PlusInfinity,
            plus,
            Target::Value(-1.0 / p.s),
            sweep.rel_tol,
        )?,
    ])
}

/// Far-field decay of L_s φ^(i):
/// |x|^{i+2s} L_s φ^(i)(x) -> (∓1)^{i-1} · 2 Γ(i+2s)/Γ(1+2s) as x -> ±∞.
pub fn verify_cor_derivatives(
    layer: &Layer,
    i: usize,
    cfg: &QuadratureConfig,
    sweep: &SweepConfig,
) -> Result<[LimitReport; 2]> {
    let p = layer.params();
    let sweep = sweep.for_deriv_order(i);
    let two_s = 2.0 * p.s;
    let xs = sweep.abscissae(p.kappa);
    let mut minus = Vec::with_capacity(xs.len());
    let mut plus = Vec::with_capacity(xs.len());
    for &x in &xs {
        let w = x.powf(i as f64 + two_s);
        minus.push((x, w * fraclap_deriv(layer, i, -x, cfg)?.value));
        plus.push((x, w * fraclap_deriv(layer, i, x, cfg)?.value));
    }
    let magnitude = 2.0 * gamma_ratio(i as u32, p.s);
    let sign_plus = if i % 2 == 1 { 1.0 } else { -1.0 }; // (−1)^{i−1}
    let name = format!("fraclap_deriv{i}_decay");
    Ok([
        finish_report(
            &name,
            "Cor. 3.3",
            Side::MinusInfinity,
            minus,
            Target::Value(magnitude), // (+1)^{i−1} = 1 on the left
            sweep.rel_tol,
        )?,
        finish_report(
            &name,
            "Cor. 3.3",
            Side::PlusInfinity,
            plus,
            Target::Value(sign_plus * magnitude),
            sweep.rel_tol,
        )?,
    ])
}

/// Closed-form targets for the well limits of V and V'.
pub fn well_v_target(params: &LayerParams, side: Side) -> f64 {
    let s = params.s;
    match side {
        Side::LeftWell => {
            params.alpha * params.c1.powf(-2.0 * s / params.alpha)
                / ((2.0 * s + params.alpha) * s)
        }
        Side::RightWell => {
            params.beta * params.c2.powf(-2.0 * s / params.beta)
                / ((2.0 * s + params.beta) * s)
        }
        _ => unreachable!("well target asked for an infinity side"),
    }
}

pub fn well_vprime_target(params: &LayerParams, side: Side) -> f64 {
    let s = params.s;
    match side {
        Side::LeftWell => params.c1.powf(-2.0 * s / params.alpha) / s,
        Side::RightWell => -params.c2.powf(-2.0 * s / params.beta) / s,
        _ => unreachable!("well target asked for an infinity side"),
    }
}

/// Near-well scaling of V and V':
/// V(r)/(1+r)^{2s/α+1} and V'(r)/(1+r)^{2s/α} at -1⁺ (and mirrored at 1⁻).
///
/// V' samples are h = L_s φ directly; V samples integrate the flux
/// L_s φ · φ' from a far tail anchor (V(-1) = 0 on the left; the identity
/// V(1) = 0 anchors the right well, which is the content of the well
/// balance check). The supplied model provides provenance and is validated
/// against the layer.
pub fn verify_potential_limits(
    layer: &Layer,
    model: &PotentialModel,
    cfg: &QuadratureConfig,
    sweep: &SweepConfig,
) -> Result<[LimitReport; 4]> {
    let p = layer.params();
    debug_assert_eq!(&model.layer, p);
    let two_s = 2.0 * p.s;
    let xs = sweep.abscissae(p.kappa);
    let x_max = *xs.last().unwrap();
    let anchor = sweep.tail_anchor_factor * x_max;

    // Left well: cumulative V from -anchor upward; seed with the measured
    // far-field estimate of the dropped tail.
    let seed_left = {
        let m = anchor.powf(two_s) * fraclap(layer, -anchor, cfg)?.value.abs();
        m * p.c1 * p.alpha * anchor.powf(-two_s - p.alpha) / (two_s + p.alpha)
    };
    let seed_right = {
        let m = anchor.powf(two_s) * fraclap(layer, anchor, cfg)?.value.abs();
        m * p.c2 * p.beta * anchor.powf(-two_s - p.beta) / (two_s + p.beta)
    };

    let mut v_left = Vec::with_capacity(xs.len());
    let mut acc = seed_left;
    let mut upper = -anchor;
    for &x in xs.iter().rev() {
        acc += flux_integral(layer, upper, -x, cfg)?;
        upper = -x;
        v_left.push((x, acc));
    }
    v_left.reverse();

    let mut v_right = Vec::with_capacity(xs.len());
    let mut acc = seed_right;
    let mut lower = anchor;
    for &x in xs.iter().rev() {
        // V(r) = -∫_x^∞ L_s φ φ' (positive); accumulate right-to-left.
        acc -= flux_integral(layer, x, lower, cfg)?;
        lower = x;
        v_right.push((x, acc));
    }
    v_right.reverse();

    let mut v_scaled_l = Vec::new();
    let mut v_scaled_r = Vec::new();
    let mut vp_scaled_l = Vec::new();
    let mut vp_scaled_r = Vec::new();
    for (k, &x) in xs.iter().enumerate() {
        let one_plus_r = p.c1 * x.powf(-p.alpha); // 1 + φ(-x), exact tail
        let one_minus_r = p.c2 * x.powf(-p.beta); // 1 - φ(x)
        v_scaled_l.push((x, v_left[k].1 / one_plus_r.powf(two_s / p.alpha + 1.0)));
        v_scaled_r.push((x, v_right[k].1 / one_minus_r.powf(two_s / p.beta + 1.0)));
        let h_l = fraclap(layer, -x, cfg)?.value;
        let h_r = fraclap(layer, x, cfg)?.value;
        vp_scaled_l.push((x, h_l / one_plus_r.powf(two_s / p.alpha)));
        vp_scaled_r.push((x, h_r / one_minus_r.powf(two_s / p.beta)));
    }

    Ok([
        finish_report(
            "v_well_scaling",
            "(2.5)",
            Side::LeftWell,
            v_scaled_l,
            Target::Value(well_v_target(p, Side::LeftWell)),
            sweep.rel_tol,
        )?,
        finish_report(
            "v_well_scaling",
            "(2.5)",
            Side::RightWell,
            v_scaled_r,
            Target::Value(well_v_target(p, Side::RightWell)),
            sweep.rel_tol,
        )?,
        finish_report(
            "vprime_well_scaling",
            "(2.6)",
            Side::LeftWell,
            vp_scaled_l,
            Target::Value(well_vprime_target(p, Side::LeftWell)),
            sweep.rel_tol,
        )?,
        finish_report(
            "vprime_well_scaling",
            "(2.6)",
            Side::RightWell,
            vp_scaled_r,
            Target::Value(well_vprime_target(p, Side::RightWell)),
            sweep.rel_tol,
        )?,
    ])
}

/// Target for V^{(i+1)}(r)/(1±r)^{2s/γ - i} at a well with tail exponent γ
/// (γ = α on the left, β on the right): the stated product when the
/// hypothesis 2s >= γ i holds or 2s/γ is not an integer, the bare
/// finiteness claim otherwise.
pub fn higher_limit_target(params: &LayerParams, side: Side, i: usize) -> Target {
    let s = params.s;
    let (gamma_exp, coef, sign) = match side {
        Side::LeftWell => (params.alpha, params.c1, 1.0),
        Side::RightWell => (
            params.beta,
            params.c2,
            if i % 2 == 0 { -1.0 } else { 1.0 }, // (−1)^{i+1}
        ),
        _ => unreachable!(),
    };
    let ratio = 2.0 * s / gamma_exp;
    let hypothesis = 2.0 * s >= gamma_exp * i as f64 - 1e-12;
    let integer_ratio = (ratio - ratio.round()).abs() < 1e-9;
    if !hypothesis && integer_ratio {
        return Target::Finite;
    }
    let mut prod = 1.0;
    for j in 0..i {
        prod *= ratio - j as f64;
    }
    Target::Value(sign * coef.powf(-ratio) * prod / s)
}

/// Near-well scaling of the recovered V^{(i+1)} for i in 1..=3.
pub fn verify_higher_limits(
    layer: &Layer,
    i: usize,
    cfg: &QuadratureConfig,
    sweep: &SweepConfig,
) -> Result<[LimitReport; 2]> {
    let p = layer.params();
    let sweep = sweep.for_deriv_order(i);
    let two_s = 2.0 * p.s;
    let xs = sweep.abscissae(p.kappa);
    let mut left = Vec::with_capacity(xs.len());
    let mut right = Vec::with_capacity(xs.len());
    for &x in &xs {
        let one_plus_r = p.c1 * x.powf(-p.alpha);
        let one_minus_r = p.c2 * x.powf(-p.beta);
        let v_l = recover_vderiv(layer, -x, i, cfg)?;
        let v_r = recover_vderiv(layer, x, i, cfg)?;
        left.push((x, v_l / one_plus_r.powf(two_s / p.alpha - i as f64)));
        right.push((x, v_r / one_minus_r.powf(two_s / p.beta - i as f64)));
    }
    let name = format!("v_deriv{}_well_scaling", i + 1);
    Ok([
        finish_report(
            &name,
            "(2.8)",
            Side::LeftWell,
            left,
            higher_limit_target(p, Side::LeftWell, i),
            sweep.rel_tol,
        )?,
        finish_report(
            &name,
            "(2.9)",
            Side::RightWell,
            right,
            higher_limit_target(p, Side::RightWell, i),
            sweep.rel_tol,
        )?,
    ])
}

/// The double-well shape checks on a built potential: V(-1) = 0 exactly,
/// |V(1)| small against max V, and positivity inside.
pub fn verify_double_well(model: &PotentialModel) -> Vec<ScalarCheck> {
    let max_v = model.max_v();
    let v_at_minus_one = model.v_values[0];
    let v_at_one = model.v_at_one();
    let min_interior = model.min_interior_v();
    vec![
        ScalarCheck {
            name: "well_anchor_left".into(),
            paper_eq: "(2.4)".into(),
            value: v_at_minus_one,
            constraint: "V(-1) = 0 exactly".into(),
            pass: v_at_minus_one == 0.0,
        },
        ScalarCheck {
            name: "well_balance_right".into(),
            paper_eq: "Prop. 3.9".into(),
            value: v_at_one,
            constraint: format!("|V(1)| <= 1e-4 * max V = {:.3e}", 1e-4 * max_v),
            pass: v_at_one.abs() <= 1e-4 * max_v,
        },
        ScalarCheck {
            name: "interior_positivity".into(),
            paper_eq: "(2.5)".into(),
            value: min_interior,
            constraint: "min V over interior grid > 0".into(),
            pass: min_interior > 0.0,
        },
    ]
}

/// Regularity indices (⌊2s/α⌋, ⌊2s/β⌋) classifying V near the two wells.
pub fn regularity_class(params: &LayerParams) -> (u32, u32) {
    let left = (2.0 * params.s / params.alpha).floor() as u32;
    let right = (2.0 * params.s / params.beta).floor() as u32;
    (left, right)
}

/// Options for the composite verification run.
#[derive(Debug, Clone, Serialize)]
pub struct VerifyOptions {
    pub sweep: SweepConfig,
    pub grid: GridConfig,
    /// Orders of L_s φ^(i) decay checks.
    pub deriv_orders: Vec<usize>,
    /// Orders of near-well V^{(i+1)} recovery checks.
    pub higher_orders: Vec<usize>,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            sweep: SweepConfig::default(),
            grid: GridConfig::default(),
            deriv_orders: vec![1, 2],
            higher_orders: vec![1],
        }
    }
}

/// The aggregated verification record for one layer.
#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    pub layer: LayerParams,
    pub quadrature: QuadratureConfig,
    pub regularity: (u32, u32),
    pub checks: Vec<LimitReport>,
    pub scalar_checks: Vec<ScalarCheck>,
}

impl VerificationReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass) && self.scalar_checks.iter().all(|c| c.pass)
    }

    pub fn check_count(&self) -> usize {
        self.checks.len() + self.scalar_checks.len()
    }
}

/// Run every check of the harness on one layer and aggregate. Reports are
/// ordered by name, then side, deterministically.
pub fn verify_all(
    layer: &Layer,
    cfg: &QuadratureConfig,
    options: &VerifyOptions,
) -> Result<VerificationReport> {
    let mut checks = Vec::new();
    checks.extend(verify_prop_thone(layer, cfg, &options.sweep)?);
    for &i in &options.deriv_orders {
        checks.extend(verify_cor_derivatives(layer, i, cfg, &options.sweep)?);
    }
    let model = build_potential(layer, &options.grid, cfg)?;
    checks.extend(verify_potential_limits(layer, &model, cfg, &options.sweep)?);
    for &i in &options.higher_orders {
        checks.extend(verify_higher_limits(layer, i, cfg, &options.sweep)?);
    }
    checks.sort_by(|a, b| (&a.name, side_key(a.side)).cmp(&(&b.name, side_key(b.side))));

    let mut scalar_checks = verify_double_well(&model);
    let (reg_l, reg_r) = regularity_class(layer.params());
    scalar_checks.push(ScalarCheck {
        name: "regularity_floor_left".into(),
        paper_eq: "(2.13)".into(),
        value: reg_l as f64,
        constraint: "floor(2s/alpha), informational".into(),
        pass: true,
    });
    scalar_checks.push(ScalarCheck {
        name: "regularity_floor_right".into(),
        paper_eq: "(2.13)".into(),
        value: reg_r as f64,
        constraint: "floor(2s/beta), informational".into(),
        pass: true,
    });

    Ok(VerificationReport {
        layer: *layer.params(),
        quadrature: cfg.clone(),
        regularity: (reg_l, reg_r),
        checks,
        scalar_checks,
    })
}

fn side_key(side: Side) -> u8 {
    match side {
        Side::MinusInfinity => 0,
        Side::PlusInfinity => 1,
        Side::LeftWell => 2,
        Side::RightWell => 3,
    }
}
