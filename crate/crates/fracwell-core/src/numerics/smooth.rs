//! The canonical C-infinity step used for every blend in the crate.

/// σ(t) = e^{-1/t} / (e^{-1/t} + e^{-1/(1-t)}) on (0,1), clamped to 0 and 1
/// outside. Nondecreasing, flat to all orders at both endpoints, and
/// σ(t) + σ(1-t) = 1.
pub fn smooth_step(t: f64) -> f64 {
    if t <= 0.0 {
        return 0.0;
    }
    if t >= 1.0 {
        return 1.0;
    }
    let a = (-1.0 / t).exp();
    let b = (-1.0 / (1.0 - t)).exp();
    a / (a + b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clamped_regions() {
        assert_eq!(smooth_step(-1.0), 0.0);
        assert_eq!(smooth_step(2.0), 1.0);
        assert_eq!(smooth_step(0.0), 0.0);
        assert_eq!(smooth_step(1.0), 1.0);
    }

    #[test]
    fn midpoint_symmetry() {
        assert_eq!(smooth_step(0.5), 0.5);
        for &t in &[0.1, 0.2, 0.31, 0.47, 0.83] {
            let sum = smooth_step(t) + smooth_step(1.0 - t);
            assert!((sum - 1.0).abs() < 1e-15, "sum at {t} was {sum}");
        }
    }

    #[test]
    fn nondecreasing() {
        let mut prev = -1.0;
        for k in 0..=1000 {
            let v = smooth_step(k as f64 / 1000.0);
            assert!(v >= prev);
            prev = v;
        }
    }

    #[test]
    fn flat_at_endpoints() {
        // Finite-difference derivative near the flat ends stays below 1e-6.
        let h = 1e-5;
        for &t in &[1e-3, 1.0 - 1e-3] {
            let d = (smooth_step(t + h) - smooth_step(t - h)) / (2.0 * h);
            assert!(d.abs() < 1e-6, "slope at {t} was {d}");
        }
    }
}
