//! The profile abstraction shared by every evaluator: a bounded, strictly
//! increasing function connecting -1 to +1, with exactly known far-field
//! behavior on both sides.

use crate::error::{Error, Result};

/// Which infinity a tail quantity refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TailSide {
    /// x -> -infinity (the -1 phase).
    Left,
    /// x -> +infinity (the +1 phase).
    Right,
}

/// A transition profile with exact tail expansions.
pub trait Profile: Sync {
    /// The fractional order s in (0, 1) this profile is paired with.
    fn s(&self) -> f64;

    fn value(&self, x: f64) -> f64;

    /// order in 1..=6.
    fn deriv(&self, x: f64, order: usize) -> Result<f64>;

    /// The unique x with value(x) = r, for r strictly inside (-1, 1).
    fn inverse(&self, r: f64) -> Result<f64>;

    /// |x| beyond which `tail_deviation` is exact.
    fn tail_start(&self) -> f64;

    /// Derivative of the given order at +z (Right) or -z (Left), minus its
    /// limit at the corresponding infinity (the limit is ±1 for order 0 and
    /// zero for every positive order). Exact for z >= tail_start().
    fn tail_deviation(&self, side: TailSide, order: usize, z: f64) -> f64;
}

/// The profile u(x) = (2/π) arctan(x), paired with s = 1/2.
///
/// Everything about it is closed-form: u, all derivatives, the inverse and
/// the fractional Laplacian, which makes it the quadrature oracle of the
/// crate.
#[derive(Debug, Clone, Copy, Default)]
pub struct ArctanProfile;

/// The closed-form profile used as quadrature oracle (s fixed to 1/2).
pub fn arctan_layer() -> ArctanProfile {
    ArctanProfile
}

const FRAC_2_PI: f64 = std::f64::consts::FRAC_2_PI;

impl ArctanProfile {
    /// n-th derivative, n >= 1:
    /// u^(n)(x) = (2/π)(-1)^(n-1) (n-1)! sin(nθ) sin^n(θ), cot θ = x.
    fn deriv_exact(x: f64, n: usize) -> f64 {
        let theta = 1.0f64.atan2(x);
        let sin_theta = theta.sin();
        let mut fact = 1.0;
        for k in 1..n {
            fact *= k as f64;
        }
        let sign = if n % 2 == 1 { 1.0 } else { -1.0 };
        FRAC_2_PI * sign * fact * (n as f64 * theta).sin() * sin_theta.powi(n as i32)
    }
}

impl Profile for ArctanProfile {
    fn s(&self) -> f64 {
        0.5
    }

    fn value(&self, x: f64) -> f64 {
        FRAC_2_PI * x.atan()
    }

    fn deriv(&self, x: f64, order: usize) -> Result<f64> {
        if !(1..=6).contains(&order) {
            return Err(Error::domain(format!(
                "derivative order must lie in 1..=6, got {order}"
            )));
        }
        Ok(Self::deriv_exact(x, order))
    }

    fn inverse(&self, r: f64) -> Result<f64> {
        if !(-1.0 < r && r < 1.0) {
            return Err(Error::domain(format!(
                "inverse: r must lie in (-1, 1), got {r}"
            )));
        }
        Ok((std::f64::consts::FRAC_PI_2 * r).tan())
    }

    fn tail_start(&self) -> f64 {
        1.0
    }

    fn tail_deviation(&self, side: TailSide, order: usize, z: f64) -> f64 {
        match (side, order) {
            // 1 - u(z) = (2/π) arctan(1/z) for z > 0.
            (TailSide::Right, 0) => -FRAC_2_PI * (1.0 / z).atan(),
            (TailSide::Left, 0) => FRAC_2_PI * (1.0 / z).atan(),
            (TailSide::Right, n) => Self::deriv_exact(z, n),
            (TailSide::Left, n) => Self::deriv_exact(-z, n),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn basic_values() {
        let u = arctan_layer();
        assert_eq!(u.value(0.0), 0.0);
        assert_relative_eq!(u.value(1.0), 0.5, max_relative = 1e-15);
    }

    #[test]
    fn far_field_rate() {
        // x (1 - u(x)) -> 2/π.
        let u = arctan_layer();
        let x = 1e8;
        let scaled = x * (-u.tail_deviation(TailSide::Right, 0, x));
        assert_relative_eq!(scaled, FRAC_2_PI, max_relative = 1e-7);
    }

    #[test]
    fn derivative_formula_matches_analytic() {
        let u = arctan_layer();
        let h = 1e-5;
        for &x in &[-2.3, -0.4, 0.0, 0.9, 3.7] {
            let fd = (u.value(x + h) - u.value(x - h)) / (2.0 * h);
            assert_relative_eq!(u.deriv(x, 1).unwrap(), fd, max_relative = 1e-8);
            // u'' = -(2/π) 2x / (1+x²)².
            let d2_exact = -FRAC_2_PI * 2.0 * x / (1.0 + x * x).powi(2);
            assert_relative_eq!(u.deriv(x, 2).unwrap(), d2_exact, epsilon = 1e-13);
        }
        assert_relative_eq!(
            u.deriv(1.0, 1).unwrap(),
            FRAC_2_PI / 2.0,
            max_relative = 1e-14
        );
    }

    #[test]
    fn inverse_round_trip() {
        let u = arctan_layer();
        for k in -40..=40 {
            let r = k as f64 / 41.0;
            let x = u.inverse(r).unwrap();
            assert_relative_eq!(u.value(x), r, epsilon = 1e-14);
        }
        assert!(u.inverse(1.0).is_err());
        assert!(u.inverse(-1.5).is_err());
    }
}
