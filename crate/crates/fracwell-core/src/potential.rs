//! Reconstruction of the double-well potential from the profile:
//! V'(φ(x)) = L_s φ(x), V(-1) = 0, and pointwise recovery of higher
//! derivatives of V at the wells through the higher-order chain rule.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fraclap::{fraclap, fraclap_deriv};
use crate::layer::{Layer, LayerParams};
use crate::numerics::partitions_weighted;
use crate::numerics::quad::{adaptive_panel_integrate, QuadratureConfig};
use crate::profile::Profile;

/// Grid controls for `build_potential`.
#[derive(Debug, Clone, Copy, Serialize, PartialEq)]
pub struct GridConfig {
    /// Truncation abscissa of the x-integration domain.
    pub x_far: f64,
    /// Number of asinh-uniform nodes (odd; forced up to the next odd count).
    pub nodes: usize,
}

impl Default for GridConfig {
    fn default() -> Self {
        GridConfig {
            x_far: 1e4,
            nodes: 2001,
        }
    }
}

/// Grid representation of V and V' on [-1, 1].
#[derive(Debug, Clone, Serialize)]
pub struct PotentialModel {
    /// Strictly increasing, includes both endpoints -1 and 1.
    pub r_grid: Vec<f64>,
    pub v_values: Vec<f64>,
    /// V' on the same grid; equals L_s φ at the interior nodes, 0 at ±1.
    pub vprime_values: Vec<f64>,
    /// The x-abscissae behind the interior entries (empty slots for ±1).
    pub x_grid: Vec<f64>,
    pub x_far: f64,
    /// Upper bounds on the dropped tail integrals, from the measured
    /// far-field prefactor.
    pub truncation_bound_left: f64,
    pub truncation_bound_right: f64,
    /// Set when the truncation bounds are not negligible against max V.
    pub truncation_warning: bool,
    pub layer: LayerParams,
    pub quadrature: QuadratureConfig,
}

impl PotentialModel {
    pub fn max_v(&self) -> f64 {
        self.v_values.iter().fold(f64::NEG_INFINITY, |a, &v| a.max(v))
    }

    /// Minimum of V over the grid points strictly inside (-1, 1).
    pub fn min_interior_v(&self) -> f64 {
        self.v_values[1..self.v_values.len() - 1]
            .iter()
            .fold(f64::INFINITY, |a, &v| a.min(v))
    }

    /// V at the right well (the full integral; its smallness is a theorem
    /// check, never enforced).
    pub fn v_at_one(&self) -> f64 {
        *self.v_values.last().unwrap()
    }

    /// Piecewise-linear interpolation of V on the grid; r is clamped to
    /// [-1, 1]. Accuracy is limited by the grid resolution.
    pub fn v_of_r(&self, r: f64) -> f64 {
        let r = r.clamp(-1.0, 1.0);
        match self
            .r_grid
            .binary_search_by(|probe| probe.partial_cmp(&r).unwrap())
        {
            Ok(j) => self.v_values[j],
            Err(j) => {
                let (r0, r1) = (self.r_grid[j - 1], self.r_grid[j]);
                let (v0, v1) = (self.v_values[j - 1], self.v_values[j]);
                v0 + (v1 - v0) * (r - r0) / (r1 - r0)
            }
        }
    }
}

/// h(r) = L_s φ(φ^{-1}(r)).
pub fn h_of_r(layer: &Layer, r: f64, cfg: &QuadratureConfig) -> Result<f64> {
    let x = layer.phi_inverse(r)?;
    Ok(fraclap(layer, x, cfg)?.value)
}

/// ∫_a^b L_s φ(x) φ'(x) dx through the asinh substitution (the integrand is
/// smooth and the substitution equidistributes the decades).
pub fn flux_integral(layer: &Layer, a: f64, b: f64, cfg: &QuadratureConfig) -> Result<f64> {
    let f = |u: f64| {
        let x = u.sinh();
        let lphi = fraclap(layer, x, cfg).map(|e| e.value).unwrap_or(f64::NAN);
        lphi * layer.phi_deriv(x, 1).expect("order 1") * u.cosh()
    };
    let relaxed = QuadratureConfig {
        // The integrand itself costs a full singular quadrature per point;
        // meet it with a tolerance that matches its own noise level.
        tol_abs: (cfg.tol_abs * 10.0).max(1e-12),
        tol_rel: (cfg.tol_rel * 10.0).max(1e-9),
        ..cfg.clone()
    };
    let (v, _) = adaptive_panel_integrate(f, a.asinh(), b.asinh(), &relaxed)?;
    if v.is_nan() {
        return Err(Error::domain("flux integrand failed to evaluate"));
    }
    Ok(v)
}

/// Cumulative reconstruction of V on an asinh-uniform x-grid.
///
/// V(φ(X)) = ∫_{-∞}^X L_s φ(x) φ'(x) dx; the domain is truncated at ±x_far
/// and the dropped tails are (a) estimated from the measured far-field
/// prefactor to seed V at the first node and complete V(1), and
/// (b) reported as explicit bounds. V(1) is an output, not a constraint.
pub fn build_potential(
    layer: &Layer,
    grid: &GridConfig,
    cfg: &QuadratureConfig,
) -> Result<PotentialModel> {
    if !(grid.x_far > 10.0 * layer.bridge_half_width()) {
        return Err(Error::domain(
            "x_far must exceed ten bridge half-widths for a meaningful tail estimate",
        ));
    }
    let n = if grid.nodes % 2 == 1 {
        grid.nodes
    } else {
        grid.nodes + 1
    };
    if n < 41 {
        return Err(Error::domain("potential grid needs at least 41 nodes"));
    }

    let p = *layer.params();
    let two_s = 2.0 * p.s;
    let u_max = grid.x_far.asinh();
    let h_u = 2.0 * u_max / (n - 1) as f64;

    let mut x = Vec::with_capacity(n);
    let mut integrand = Vec::with_capacity(n);
    let mut lphi = Vec::with_capacity(n);
    for j in 0..n {
        let u = -u_max + h_u * j as f64;
        let xj = u.sinh();
        let l = fraclap(layer, xj, cfg)?.value;
        x.push(xj);
        lphi.push(l);
        integrand.push(l * layer.phi_deriv(xj, 1)? * u.cosh());
    }

    // Measured far-field prefactors sup |x|^{2s} |L_s φ| over the last
    // decade of the grid on each side.
    let mut m_left = 0.0f64;
    let mut m_right = 0.0f64;
    for j in 0..n {
        if x[j] <= -grid.x_far / 10.0 {
            m_left = m_left.max(x[j].abs().powf(two_s) * lphi[j].abs());
        }
        if x[j] >= grid.x_far / 10.0 {
            m_right = m_right.max(x[j].abs().powf(two_s) * lphi[j].abs());
        }
    }
    // |∫_{x_far}^∞ t^{-2s} |φ'| dt| with the exact tail derivative.
    let tail_mass_left = p.c1 * p.alpha * grid.x_far.powf(-two_s - p.alpha) / (two_s + p.alpha);
    let tail_mass_right = p.c2 * p.beta * grid.x_far.powf(-two_s - p.beta) / (two_s + p.beta);
    let bound_left = m_left * tail_mass_left;
    let bound_right = m_right * tail_mass_right;

    // Cumulative cubic integration in u, seeded with the signed left-tail
    // estimate (L_s φ > 0 near -∞). The interior stencil is reflection
    // symmetric, so an odd integrand accumulates to an even V to rounding.
    let mut v = Vec::with_capacity(n + 2);
    let mut acc = bound_left;
    v.push(acc);
    for j in 1..n {
        let inc = if j == 1 {
            h_u * (9.0 * integrand[0] + 19.0 * integrand[1] - 5.0 * integrand[2] + integrand[3])
                / 24.0
        } else if j + 1 < n {
            h_u * (-integrand[j - 2]
                + 13.0 * integrand[j - 1]
                + 13.0 * integrand[j]
                - integrand[j + 1])
                / 24.0
        } else {
            h_u * (integrand[n - 4] - 5.0 * integrand[n - 3]
                + 19.0 * integrand[n - 2]
                + 9.0 * integrand[n - 1])
                / 24.0
        };
        acc += inc;
        v.push(acc);
    }
    // Right-tail completion (L_s φ < 0 near +∞).
    let v_at_one = acc - bound_right;

    let mut r_grid = Vec::with_capacity(n + 2);
    let mut v_values = Vec::with_capacity(n + 2);
    let mut vprime = Vec::with_capacity(n + 2);
    r_grid.push(-1.0);
    v_values.push(0.0);
    vprime.push(0.0);
    for j in 0..n {
        r_grid.push(layer.phi(x[j]));
        v_values.push(v[j]);
        vprime.push(lphi[j]);
    }
    r_grid.push(1.0);
    v_values.push(v_at_one);
    vprime.push(0.0);

    let max_v = v_values.iter().fold(0.0f64, |a, &w| a.max(w));
    let truncation_warning = bound_left + bound_right > 1e-4 * max_v;

    Ok(PotentialModel {
        r_grid,
        v_values,
        vprime_values: vprime,
        x_grid: x,
        x_far: grid.x_far,
        truncation_bound_left: bound_left,
        truncation_bound_right: bound_right,
        truncation_warning,
        layer: p,
        quadrature: cfg.clone(),
    })
}

/// V^{(i+1)}(φ(x)) for a tail point x, recovered by the triangular solve of
/// the higher-order chain rule
///
///   d^i/dx^i V'(φ(x)) = L_s φ^{(i)}(x)
///     = Σ i!/(m_1!···m_i!) V^{(1+Σm_j)}(φ(x)) Π (φ^{(j)}(x)/j!)^{m_j}
///
/// over i-tuples with Σ j·m_j = i, whose only tuple with Σm_j = i is
/// (m_1 = i); everything else recurses on lower orders.
pub fn recover_vderiv(layer: &Layer, x: f64, i: usize, cfg: &QuadratureConfig) -> Result<f64> {
    if i > 4 {
        return Err(Error::domain(format!(
            "recover_vderiv: order must lie in 0..=4, got {i}"
        )));
    }
    let guard = (2.0 * layer.params().kappa).max(layer.tail_start());
    if !(x.abs() > guard) {
        return Err(Error::domain(format!(
            "recover_vderiv needs a tail point (|x| > {guard}), got {x}"
        )));
    }
    let mut memo: Vec<Option<f64>> = vec![None; i + 1];
    recover_rec(layer, x, i, cfg, &mut memo)
}

fn recover_rec(
    layer: &Layer,
    x: f64,
    k: usize,
    cfg: &QuadratureConfig,
    memo: &mut Vec<Option<f64>>,
) -> Result<f64> {
    if let Some(v) = memo[k] {
        return Ok(v);
    }
    let value = if k == 0 {
        fraclap(layer, x, cfg)?.value
    } else {
        let lhs = fraclap_deriv(layer, k, x, cfg)?.value;
        let mut correction = 0.0;
        for tuple in partitions_weighted(k as u32)? {
            if tuple[0] == k as u32 {
                continue; // the solo first-derivative tuple is the unknown
            }
            let order_sum: u32 = tuple.iter().sum();
            let v_low = recover_rec(layer, x, order_sum as usize, cfg, memo)?;
            let mut coef = factorial(k);
            let mut prod = 1.0;
            for (j, &m) in tuple.iter().enumerate() {
                if m == 0 {
                    continue;
                }
                coef /= factorial(m as usize);
                let dphi = layer.phi_deriv(x, j + 1)? / factorial(j + 1);
                prod *= dphi.powi(m as i32);
            }
            correction += coef * v_low * prod;
        }
        let dphi1 = layer.phi_deriv(x, 1)?;
        (lhs - correction) / dphi1.powi(k as i32)
    };
    memo[k] = Some(value);
    Ok(value)
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product::<f64>().max(1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn unit() -> Layer {
        Layer::new(LayerParams::unit_symmetric()).unwrap()
    }

    #[test]
    fn h_examples() {
        let layer = unit();
        let cfg = QuadratureConfig::default();
        let h0 = h_of_r(&layer, 0.0, &cfg).unwrap();
        assert!(h0.abs() < 1e-9, "h(0) = {h0}");
        let h_half = h_of_r(&layer, 0.5, &cfg).unwrap();
        let direct = fraclap(&layer, 2.0, &cfg).unwrap().value;
        assert_relative_eq!(h_half, direct, max_relative = 1e-9);
    }

    #[test]
    fn recover_order_zero_is_fraclap() {
        let layer = unit();
        let cfg = QuadratureConfig::default();
        let a = recover_vderiv(&layer, 8.0, 0, &cfg).unwrap();
        let b = fraclap(&layer, 8.0, &cfg).unwrap().value;
        assert_eq!(a, b);
    }

    #[test]
    fn recover_order_one_is_ratio() {
        let layer = unit();
        let cfg = QuadratureConfig::default();
        let got = recover_vderiv(&layer, -12.0, 1, &cfg).unwrap();
        let want = fraclap_deriv(&layer, 1, -12.0, &cfg).unwrap().value
            / layer.phi_deriv(-12.0, 1).unwrap();
        assert_relative_eq!(got, want, max_relative = 1e-12);
    }

    #[test]
    fn recover_nondegenerate_well_curvature() {
        // alpha = beta = 2s with C = 1: V'' -> 1/(s C1) = 2 at the wells.
        let layer = unit();
        let cfg = QuadratureConfig::default();
        let v2 = recover_vderiv(&layer, -1e3, 1, &cfg).unwrap();
        assert!((v2 - 2.0).abs() < 0.06, "V'' near the left well: {v2}");
    }

    #[test]
    fn recover_rejects_bridge_points() {
        let layer = unit();
        let cfg = QuadratureConfig::default();
        assert!(recover_vderiv(&layer, 0.5, 1, &cfg).is_err());
        assert!(recover_vderiv(&layer, 10.0, 5, &cfg).is_err());
    }

    #[test]
    fn potential_shape() {
        let layer = unit();
        let cfg = QuadratureConfig::default();
        let grid = GridConfig {
            x_far: 1e4,
            nodes: 801,
        };
        let model = build_potential(&layer, &grid, &cfg).unwrap();

        assert_eq!(model.v_values[0], 0.0);
        assert_eq!(*model.r_grid.first().unwrap(), -1.0);
        assert_eq!(*model.r_grid.last().unwrap(), 1.0);
        for pair in model.r_grid.windows(2) {
            assert!(pair[0] < pair[1], "r grid not increasing: {pair:?}");
        }
        let max_v = model.max_v();
        assert!(max_v > 0.0);
        assert!(
            model.v_at_one().abs() <= 1e-4 * max_v,
            "V(1) = {} vs max {max_v}",
            model.v_at_one()
        );
        assert!(model.min_interior_v() > 0.0);
        assert!(!model.truncation_warning);

        // V' on the grid is h by construction.
        for (j, &r) in model.r_grid.iter().enumerate() {
            if j == 0 || j == model.r_grid.len() - 1 {
                continue;
            }
            let _ = r;
            assert!(model.vprime_values[j].is_finite());
        }
    }

    #[test]
    fn potential_symmetry() {
        let layer = unit();
        let cfg = QuadratureConfig::default();
        let model = build_potential(&layer, &GridConfig::default(), &cfg).unwrap();
        // Odd h integrates to an even V: V(r) = V(-r). The grid is
        // symmetric, so compare mirrored entries.
        let n = model.r_grid.len();
        for j in 0..n {
            let vj = model.v_values[j];
            let vm = model.v_values[n - 1 - j];
            assert!(
                (vj - vm).abs() <= 1e-8,
                "V symmetry at j = {j}: {vj} vs {vm}"
            );
        }
    }

    #[test]
    fn fundamental_theorem_on_grid() {
        // The numerical x-derivative of the cumulative V (refined locally by
        // quadrature between grid nodes) matches h(φ(x)) φ'(x). The blend
        // has large high-order derivatives, so the difference step must be
        // far below the grid spacing to resolve it.
        let layer = unit();
        let cfg = QuadratureConfig::default();
        let model = build_potential(&layer, &GridConfig::default(), &cfg).unwrap();
        let n = model.x_grid.len();
        let delta = 2e-4;
        for j in (0..n).step_by(n / 17) {
            let x = model.x_grid[j];
            let r = model.r_grid[j + 1];
            if r.abs() > 0.95 {
                continue;
            }
            let dv = flux_integral(&layer, x - delta, x + delta, &cfg).unwrap() / (2.0 * delta);
            let want = model.vprime_values[j + 1] * layer.phi_deriv(x, 1).unwrap();
            assert_relative_eq!(dv, want, max_relative = 1e-4, epsilon = 1e-8);
        }
    }
}
