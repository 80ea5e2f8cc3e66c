//! Order-6 Taylor-mode differentiation for the closed-form bridge blend.
//!
//! A `Jet` carries the Taylor coefficients f(x), f'(x), f''(x)/2!, ...,
//! f^(6)(x)/6! of a scalar function at a point. Arithmetic and the elementary
//! functions propagate them exactly (to rounding), which gives bridge
//! derivatives of every order without the noise amplification of numerical
//! or spectral differentiation.

/// Number of Taylor coefficients carried (value + 6 derivatives).
pub const JET_LEN: usize = 7;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet {
    /// c[k] = f^(k)(x) / k!
    pub c: [f64; JET_LEN],
}

impl Jet {
    pub fn constant(v: f64) -> Jet {
        let mut c = [0.0; JET_LEN];
        c[0] = v;
        Jet { c }
    }

    /// The identity function at x.
    pub fn variable(x: f64) -> Jet {
        let mut c = [0.0; JET_LEN];
        c[0] = x;
        c[1] = 1.0;
        Jet { c }
    }

    pub fn value(&self) -> f64 {
        self.c[0]
    }

    /// f^(order)(x), order <= 6.
    pub fn deriv(&self, order: usize) -> f64 {
        debug_assert!(order < JET_LEN);
        let mut fact = 1.0;
        for k in 1..=order {
            fact *= k as f64;
        }
        self.c[order] * fact
    }

    pub fn scale(mut self, a: f64) -> Jet {
        for c in &mut self.c {
            *c *= a;
        }
        self
    }

    pub fn mul(&self, other: &Jet) -> Jet {
        let mut out = [0.0; JET_LEN];
        for k in 0..JET_LEN {
            let mut acc = 0.0;
            for j in 0..=k {
                acc += self.c[j] * other.c[k - j];
            }
            out[k] = acc;
        }
        Jet { c: out }
    }

    pub fn add(&self, other: &Jet) -> Jet {
        let mut out = self.c;
        for (o, b) in out.iter_mut().zip(&other.c) {
            *o += b;
        }
        Jet { c: out }
    }

    pub fn sub(&self, other: &Jet) -> Jet {
        let mut out = self.c;
        for (o, b) in out.iter_mut().zip(&other.c) {
            *o -= b;
        }
        Jet { c: out }
    }

    /// 1 / self; requires a nonzero leading coefficient.
    pub fn recip(&self) -> Jet {
        let mut out = [0.0; JET_LEN];
        out[0] = 1.0 / self.c[0];
        for k in 1..JET_LEN {
            let mut acc = 0.0;
            for j in 1..=k {
                acc += self.c[j] * out[k - j];
            }
            out[k] = -acc / self.c[0];
        }
        Jet { c: out }
    }

    /// exp(self).
    pub fn exp(&self) -> Jet {
        let mut out = [0.0; JET_LEN];
        out[0] = self.c[0].exp();
        for k in 1..JET_LEN {
            let mut acc = 0.0;
            for j in 1..=k {
                acc += j as f64 * self.c[j] * out[k - j];
            }
            out[k] = acc / k as f64;
        }
        Jet { c: out }
    }

    /// self^p for a positive leading coefficient.
    pub fn powf(&self, p: f64) -> Jet {
        let u0 = self.c[0];
        debug_assert!(u0 > 0.0);
        let mut out = [0.0; JET_LEN];
        out[0] = u0.powf(p);
        for k in 1..JET_LEN {
            let mut acc = 0.0;
            for j in 1..=k {
                acc += (p * j as f64 - (k - j) as f64) * self.c[j] * out[k - j];
            }
            out[k] = acc / (k as f64 * u0);
        }
        Jet { c: out }
    }
}

/// The C-infinity step σ(t) = e^{-1/t} / (e^{-1/t} + e^{-1/(1-t)}) lifted to
/// jets, with the clamped regions returned as constant jets. Arguments
/// within 1e-6 of the clamp boundaries are treated as clamped: every true
/// derivative there is far below the f64 underflow threshold.
pub fn smooth_step_jet(t: &Jet) -> Jet {
    let t0 = t.c[0];
    if t0 <= 1e-6 {
        return Jet::constant(0.0);
    }
    if t0 >= 1.0 - 1e-6 {
        return Jet::constant(1.0);
    }
    let a = t.recip().scale(-1.0).exp();
    let one_minus = Jet::constant(1.0).sub(t);
    let b = one_minus.recip().scale(-1.0).exp();
    a.mul(&a.add(&b).recip())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn polynomial_derivatives() {
        // f(x) = (2x + 1)^3
        let x = Jet::variable(1.5);
        let f = x.scale(2.0).add(&Jet::constant(1.0)).powf(3.0);
        let base = 4.0f64;
        assert_relative_eq!(f.value(), base.powi(3), max_relative = 1e-14);
        assert_relative_eq!(f.deriv(1), 6.0 * base.powi(2), max_relative = 1e-14);
        assert_relative_eq!(f.deriv(2), 24.0 * base, max_relative = 1e-14);
        assert_relative_eq!(f.deriv(3), 48.0, max_relative = 1e-13);
        assert_relative_eq!(f.deriv(4), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn exp_derivatives() {
        let x = Jet::variable(0.3);
        let f = x.scale(2.0).exp();
        for k in 0..=6 {
            assert_relative_eq!(
                f.deriv(k),
                2.0f64.powi(k as i32) * 0.6f64.exp(),
                max_relative = 1e-13
            );
        }
    }

    #[test]
    fn recip_matches_powf() {
        let x = Jet::variable(0.8);
        let shifted = x.add(&Jet::constant(0.7));
        let a = shifted.recip();
        let b = shifted.powf(-1.0);
        for k in 0..JET_LEN {
            assert_relative_eq!(a.c[k], b.c[k], max_relative = 1e-13);
        }
    }

    #[test]
    fn smooth_step_jet_matches_value_and_fd() {
        let value = |t: f64| crate::numerics::smooth_step(t);
        for &t0 in &[0.1, 0.25, 0.5, 0.77, 0.9] {
            let jet = smooth_step_jet(&Jet::variable(t0));
            assert_relative_eq!(jet.value(), value(t0), max_relative = 1e-14);
            let h = 1e-5;
            let fd = (value(t0 + h) - value(t0 - h)) / (2.0 * h);
            assert_relative_eq!(jet.deriv(1), fd, max_relative = 1e-6);
            // Second derivative against the FD of the (exact) jet slope.
            let slope = |t: f64| smooth_step_jet(&Jet::variable(t)).deriv(1);
            let fd2 = (slope(t0 + h) - slope(t0 - h)) / (2.0 * h);
            assert_relative_eq!(jet.deriv(2), fd2, max_relative = 1e-6, epsilon = 1e-10);
        }
        assert_eq!(smooth_step_jet(&Jet::variable(-0.5)), Jet::constant(0.0));
        assert_eq!(smooth_step_jet(&Jet::variable(2.0)), Jet::constant(1.0));
    }
}
