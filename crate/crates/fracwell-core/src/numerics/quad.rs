//! Gauss-Legendre rules and adaptive panel integration.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A Gauss-Legendre rule on the reference interval (-1, 1).
#[derive(Debug, Clone)]
pub struct GaussRule {
    pub order: usize,
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussRule {
    /// Nodes and weights by Newton iteration on the Legendre recurrence.
    pub fn legendre(order: usize) -> Self {
        assert!(order >= 2, "Gauss rule needs order >= 2");
        let n = order;
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let m = n.div_ceil(2);
        for i in 0..m {
            // Tricomi initial guess, then Newton.
            let mut x =
                (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_eval(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            weights[i] = w;
            nodes[n - 1 - i] = x;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        GaussRule {
            order,
            nodes,
            weights,
        }
    }

    /// ∫_a^b f for a single panel.
    pub fn integrate<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, mut f: F) -> f64 {
        let c = 0.5 * (a + b);
        let h = 0.5 * (b - a);
        let mut acc = 0.0;
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            acc += w * f(c + h * x);
        }
        acc * h
    }
}

/// Shared per-order rule cache; node computation is deterministic, so the
/// first writer wins and every reader sees identical rules.
pub fn gauss_rule(order: usize) -> Arc<GaussRule> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<GaussRule>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut map = cache.lock().expect("rule cache poisoned");
    map.entry(order)
        .or_insert_with(|| Arc::new(GaussRule::legendre(order)))
        .clone()
}

fn legendre_eval(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Inner-cutoff policy for the singular integrals: clamp bounds for the
/// Taylor cutoff t_min.
#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct TminPolicy {
    pub floor: f64,
    pub cap: f64,
}

impl Default for TminPolicy {
    fn default() -> Self {
        TminPolicy {
            floor: 1e-8,
            cap: 1e-2,
        }
    }
}

/// Tolerances and panel budget shared by every quadrature in the crate.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields, default)]
pub struct QuadratureConfig {
    pub tol_abs: f64,
    pub tol_rel: f64,
    pub panel_order: usize,
    pub max_panels: usize,
    pub t_min_policy: TminPolicy,
    /// Factor (>= 1) applied to |x| + bridge span when choosing the outer
    /// truncation radius of the singular integral.
    pub outer_margin: f64,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig {
            tol_abs: 1e-11,
            tol_rel: 1e-10,
            panel_order: 20,
            max_panels: 4096,
            t_min_policy: TminPolicy::default(),
            outer_margin: 4.0,
        }
    }
}

impl QuadratureConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.tol_abs > 0.0) || !(self.tol_rel > 0.0) {
            return Err(Error::domain("quadrature tolerances must be positive"));
        }
        if self.panel_order < 8 {
            return Err(Error::domain("panel_order must be at least 8"));
        }
        if !(self.outer_margin >= 1.0) {
            return Err(Error::domain("outer_margin must be >= 1"));
        }
        if self.t_min_policy.floor <= 0.0 || self.t_min_policy.cap < self.t_min_policy.floor {
            return Err(Error::domain("t_min policy bounds out of order"));
        }
        Ok(())
    }
}

/// Adaptive bisection with a fixed-order Gauss rule per panel.
///
/// Returns (value, error_estimate) with
/// |value - ∫_a^b f| <= max(tol_abs, tol_rel * |value|) for integrands that
/// are smooth per panel; panel-budget exhaustion is an error carrying the
/// best estimate.
pub fn adaptive_panel_integrate<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    b: f64,
    cfg: &QuadratureConfig,
) -> Result<(f64, f64)> {
    if !(a < b) {
        return Err(Error::domain(format!(
            "integration bounds out of order: [{a}, {b}]"
        )));
    }
    let rule = gauss_rule(cfg.panel_order);
    let total_len = b - a;
    // A panel narrower than this is accepted unconditionally; refining
    // further only chases rounding noise.
    let width_floor = total_len * 1e-13;

    let coarse = rule.integrate(a, b, &mut f);
    let mut stack = vec![(a, b, coarse)];
    let mut panels = 1usize;
    let mut value = 0.0f64;
    let mut err = 0.0f64;

    while let Some((lo, hi, old)) = stack.pop() {
        let mid = 0.5 * (lo + hi);
        let left = rule.integrate(lo, mid, &mut f);
        let right = rule.integrate(mid, hi, &mut f);
        let fine = left + right;
        let disc = (fine - old).abs();
        let share = (hi - lo) / total_len;
        let local_tol = f64::max(cfg.tol_abs, cfg.tol_rel * fine.abs().max(value.abs())) * share;
        if disc <= local_tol || (hi - lo) < width_floor {
            value += fine;
            err += disc;
        } else {
            panels += 1;
            if panels > cfg.max_panels {
                // Flush what is left at its current refinement level.
                let mut best = value + fine;
                let mut best_err = err + disc;
                while let Some((l, h, o)) = stack.pop() {
                    let _ = (l, h);
                    best += o;
                    best_err += disc.max(cfg.tol_abs);
                }
                return Err(Error::QuadratureNonConvergence {
                    best,
                    error_estimate: best_err,
                });
            }
            stack.push((lo, mid, left));
            stack.push((mid, hi, right));
        }
    }
    Ok((value, err))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn rule_invariants() {
        for &order in &[8usize, 20, 40] {
            let rule = GaussRule::legendre(order);
            let sum: f64 = rule.weights.iter().sum();
            assert!((sum - 2.0).abs() < 1e-13, "weight sum {sum}");
            for w in &rule.weights {
                assert!(*w > 0.0);
            }
            for pair in rule.nodes.windows(2) {
                assert!(pair[0] < pair[1]);
            }
            for i in 0..order {
                assert!((rule.nodes[i] + rule.nodes[order - 1 - i]).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn exact_for_polynomials() {
        let rule = GaussRule::legendre(20);
        // Degree 2*20-1 is integrated exactly.
        let val = rule.integrate(-1.0, 1.0, |x| x.powi(38));
        assert_relative_eq!(val, 2.0 / 39.0, max_relative = 1e-12);
    }

    #[test]
    fn adaptive_constant() {
        let cfg = QuadratureConfig::default();
        let (v, _) = adaptive_panel_integrate(|_| 1.0, 0.0, 1.0, &cfg).unwrap();
        assert_relative_eq!(v, 1.0, max_relative = 1e-14);
    }

    #[test]
    fn adaptive_mild_singularity() {
        let cfg = QuadratureConfig::default();
        let (v, e) = adaptive_panel_integrate(|t| t.powf(0.2), 0.0, 1.0, &cfg).unwrap();
        assert!((v - 1.0 / 1.2).abs() <= 1e-10, "value {v}, err {e}");
    }

    #[test]
    fn adaptive_sine() {
        let cfg = QuadratureConfig::default();
        let (v, _) =
            adaptive_panel_integrate(f64::sin, 0.0, std::f64::consts::PI, &cfg).unwrap();
        assert_relative_eq!(v, 2.0, max_relative = 1e-12);
    }

    #[test]
    fn budget_exhaustion_reports_best() {
        let cfg = QuadratureConfig {
            max_panels: 4,
            tol_abs: 1e-15,
            tol_rel: 1e-15,
            ..QuadratureConfig::default()
        };
        let res = adaptive_panel_integrate(|t: f64| t.abs().sqrt().sin(), 0.0, 50.0, &cfg);
        match res {
            Err(Error::QuadratureNonConvergence { best, .. }) => {
                assert!(best.is_finite());
            }
            other => panic!("expected budget exhaustion, got {other:?}"),
        }
    }
}
