//! The acceptance suite: every headline claim the crate is built to verify,
//! each with its stated tolerance, printed as one pass/fail line
//! (run with `cargo test --test acceptance -- --nocapture` to see them).

use std::time::Instant;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use fracwell_core::asymptotics::{
    verify_cor_derivatives, verify_double_well, verify_higher_limits, verify_potential_limits,
    verify_prop_thone, SweepConfig, Target,
};
use fracwell_core::extension::{
    arctan_well_potential, extension_constants, hamiltonian_check, w_finite_difference,
    w_representation,
};
use fracwell_core::numerics::QuadratureConfig;
use fracwell_core::potential::{build_potential, GridConfig};
use fracwell_core::{
    arctan_layer, extend, fraclap, fraclap_arctan_exact, quotient_loglog_slope, verify_all,
    holder_quotient, Layer, LayerParams, OscParams, Profile, VerifyOptions,
};

fn report(criterion: &str, pass: bool, detail: &str) {
    println!(
        "{} {criterion}: {detail}",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass, "{criterion}: {detail}");
}

fn asymmetric_layer() -> Layer {
    Layer::new(LayerParams {
        s: 0.4,
        alpha: 0.5,
        beta: 0.8,
        kappa: 1.0,
        c1: 1.0,
        c2: 2.0,
    })
    .unwrap()
}

#[test]
fn criterion_01_arctan_oracle() {
    let start = Instant::now();
    let cfg = QuadratureConfig {
        tol_abs: 1e-10,
        tol_rel: 1e-9,
        ..QuadratureConfig::default()
    };
    let u = arctan_layer();
    let mut worst = 0.0f64;
    for k in 0..41 {
        let x = -10.0 + 0.5 * k as f64;
        let got = fraclap(&u, x, &cfg).unwrap().value;
        worst = worst.max((got - fraclap_arctan_exact(x)).abs());
    }
    let elapsed = start.elapsed().as_secs_f64();
    report(
        "criterion 1 (arctan oracle)",
        worst <= 1e-8 && elapsed < 5.0,
        &format!("max |quadrature - closed form| = {worst:.3e} over 41 points in {elapsed:.2} s"),
    );
}

#[test]
fn criterion_02_kernel_normalization() {
    let cfg = QuadratureConfig::default();
    let mut worst = 0.0f64;
    for &s in &[0.25, 0.5, 0.75] {
        let mass = extend(&|_| 1.0, s, 0.0, 1.0, &cfg).unwrap();
        worst = worst.max((mass - 1.0).abs());
    }
    report(
        "criterion 2 (kernel normalization)",
        worst <= 1e-10,
        &format!("max |∫H_s - 1| = {worst:.3e} over s in {{0.25, 0.5, 0.75}}"),
    );
}

#[test]
fn criterion_03_far_field_decay() {
    let start = Instant::now();
    let layer = asymmetric_layer();
    let cfg = QuadratureConfig::default();
    let sweep = SweepConfig {
        x0_factor: 50.0,
        ratio: 2.0,
        count: 9, // x_k = 50·2^k, k <= 8
        rel_tol: 2e-2,
        tail_anchor_factor: 100.0,
    };
    let [minus, plus] = verify_prop_thone(&layer, &cfg, &sweep).unwrap();
    let elapsed = start.elapsed().as_secs_f64();
    assert_eq!(minus.target, Target::Value(2.5));
    assert_eq!(plus.target, Target::Value(-2.5));
    report(
        "criterion 3 (far-field decay ±1/s)",
        minus.pass && plus.pass && elapsed < 30.0,
        &format!(
            "extrapolated {:.4} / {:.4} vs ±2.5 (rel {:.2e} / {:.2e}) in {elapsed:.2} s",
            minus.extrapolated, plus.extrapolated, minus.rel_error, plus.rel_error
        ),
    );
}

#[test]
fn criterion_04_derivative_decay() {
    let layer = asymmetric_layer();
    let cfg = QuadratureConfig::default();
    let sweep = SweepConfig {
        rel_tol: 3e-2,
        ..SweepConfig::default()
    };
    let [minus1, plus1] = verify_cor_derivatives(&layer, 1, &cfg, &sweep).unwrap();
    assert_eq!(minus1.target, Target::Value(2.0));
    assert_eq!(plus1.target, Target::Value(2.0));

    let sweep2 = SweepConfig {
        rel_tol: 5e-2,
        ..SweepConfig::default()
    };
    let [_, plus2] = verify_cor_derivatives(&layer, 2, &cfg, &sweep2).unwrap();
    assert_eq!(plus2.target, Target::Value(-3.6));

    report(
        "criterion 4 (derivative decay)",
        minus1.pass && plus1.pass && plus2.pass,
        &format!(
            "i=1: {:.4}/{:.4} vs +2 (3%); i=2 (+∞): {:.4} vs -3.6 (rel {:.2e}, 5%)",
            minus1.extrapolated, plus1.extrapolated, plus2.extrapolated, plus2.rel_error
        ),
    );
}

#[test]
fn criterion_05_double_well_shape() {
    let layer = Layer::new(LayerParams::unit_symmetric()).unwrap();
    let cfg = QuadratureConfig::default();
    let model = build_potential(&layer, &GridConfig::default(), &cfg).unwrap();
    let checks = verify_double_well(&model);
    let all = checks.iter().all(|c| c.pass);
    report(
        "criterion 5 (double well)",
        all,
        &format!(
            "V(-1) = {:.1e}, V(1) = {:.3e} (budget {:.3e}), min interior V = {:.3e}",
            checks[0].value,
            checks[1].value,
            1e-4 * model.max_v(),
            checks[2].value
        ),
    );
}

#[test]
fn criterion_06_well_asymptotics() {
    let layer = Layer::new(LayerParams::unit_symmetric()).unwrap();
    let cfg = QuadratureConfig::default();
    let model = build_potential(&layer, &GridConfig::default(), &cfg).unwrap();
    let sweep = SweepConfig::default(); // rel_tol 2e-2
    let [v_left, _, vp_left, _] =
        verify_potential_limits(&layer, &model, &cfg, &sweep).unwrap();
    assert_eq!(vp_left.target, Target::Value(2.0));
    assert_eq!(v_left.target, Target::Value(1.0));
    report(
        "criterion 6 (well asymptotics)",
        vp_left.pass && v_left.pass,
        &format!(
            "V'/(1+r) -> {:.4} vs 2 (rel {:.2e}); V/(1+r)² -> {:.4} vs 1 (rel {:.2e})",
            vp_left.extrapolated, vp_left.rel_error, v_left.extrapolated, v_left.rel_error
        ),
    );
}

#[test]
fn criterion_07_recovered_curvature() {
    let cfg = QuadratureConfig::default();

    // Degenerate tails alpha = beta = 1/2: V''(r)/(1+r) -> 4 at -1⁺.
    let degenerate = Layer::new(LayerParams {
        alpha: 0.5,
        beta: 0.5,
        ..LayerParams::unit_symmetric()
    })
    .unwrap();
    let sweep5 = SweepConfig {
        rel_tol: 5e-2,
        ..SweepConfig::default()
    };
    let [deg_left, _] = verify_higher_limits(&degenerate, 1, &cfg, &sweep5).unwrap();
    assert_eq!(deg_left.target, Target::Value(4.0));

    // alpha = beta = 2s: non-degenerate wells, V'' -> 1/(s C1) = 2.
    let nondegenerate = Layer::new(LayerParams::unit_symmetric()).unwrap();
    let sweep3 = SweepConfig {
        rel_tol: 3e-2,
        ..SweepConfig::default()
    };
    let [non_left, _] = verify_higher_limits(&nondegenerate, 1, &cfg, &sweep3).unwrap();
    assert_eq!(non_left.target, Target::Value(2.0));

    report(
        "criterion 7 (recovered well curvature)",
        deg_left.pass && non_left.pass,
        &format!(
            "degenerate: {:.4} vs 4 (rel {:.2e}, 5%); non-degenerate: {:.4} vs 2 (rel {:.2e}, 3%)",
            deg_left.extrapolated, deg_left.rel_error, non_left.extrapolated, non_left.rel_error
        ),
    );
}

#[test]
fn criterion_08_extension_trace() {
    let cfg = QuadratureConfig::default();
    let u = arctan_layer();
    let v = |t: f64| u.value(t);
    let c = extension_constants(0.5).unwrap();

    let mut worst_trace = 0.0f64;
    for k in 0..=20 {
        let x = -5.0 + 0.5 * k as f64;
        let w = w_representation(&fraclap_arctan_exact, 0.5, x, 1e-3, &cfg).unwrap();
        let want = 2.0 * 0.5 * c.p_s * fraclap_arctan_exact(x);
        worst_trace = worst_trace.max((w - want).abs());
    }

    let mut worst_cross = 0.0f64;
    for &x in &[0.0, 0.7, -0.7, 2.0, -2.0] {
        for k in 0..=6 {
            let y = 0.1 + 0.15 * k as f64;
            let fd = w_finite_difference(&v, 0.5, x, y, &cfg).unwrap();
            let repr = w_representation(&fraclap_arctan_exact, 0.5, x, y, &cfg).unwrap();
            worst_cross = worst_cross.max((fd - repr).abs());
        }
    }

    report(
        "criterion 8 (extension trace)",
        worst_trace <= 1e-3 && worst_cross <= 1e-6,
        &format!(
            "max trace deviation {worst_trace:.3e} (<= 1e-3); max |w_fd - w_repr| {worst_cross:.3e} (<= 1e-6)"
        ),
    );
}

#[test]
fn criterion_09_hamiltonian_estimate() {
    let cfg = QuadratureConfig::default();
    let u = arctan_layer();
    let v = |t: f64| u.value(t);

    let origin = hamiltonian_check(&v, &arctan_well_potential, 0.5, 0.0, 1.0, &cfg).unwrap();
    let rhs_target = 2.0 / std::f64::consts::PI;
    let rhs_ok = (origin.rhs - rhs_target).abs() <= 1e-6;

    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let mut all_hold = true;
    let mut min_margin = f64::INFINITY;
    for _ in 0..20 {
        let x = rng.gen_range(-3.0..3.0f64);
        let y = rng.gen_range(1e-3..2.0f64);
        let check = hamiltonian_check(&v, &arctan_well_potential, 0.5, x, y, &cfg).unwrap();
        all_hold &= check.holds;
        min_margin = min_margin.min(check.rhs - check.lhs);
    }

    report(
        "criterion 9 (hamiltonian estimate)",
        rhs_ok && all_hold,
        &format!(
            "rhs(0) = {:.9} vs 2/π = {rhs_target:.9}; strict inequality at 20 seeded samples, min margin {min_margin:.3e}",
            origin.rhs
        ),
    );
}

#[test]
fn criterion_10_oscillatory_counterexample() {
    let params = OscParams::new(1.0, 0.5).unwrap();
    let ns: Vec<u64> = (3..=9).map(|d| 10u64.pow(d)).collect();
    let slope = quotient_loglog_slope(&params, &ns).unwrap();
    let base = holder_quotient(&params, 1_000).unwrap();
    let max_q = ns
        .iter()
        .map(|&n| holder_quotient(&params, n).unwrap())
        .fold(f64::NEG_INFINITY, f64::max);

    let x = 1e-6f64;
    let limit_dev = (fracwell_core::osc_f(&params, x).unwrap() / x - 1.0).abs();

    report(
        "criterion 10 (oscillatory counterexample)",
        slope >= 0.1 && max_q > 5.0 * base && limit_dev <= 0.05,
        &format!(
            "log-log slope {slope:.3} (>= 0.1); max/base quotient {:.1} (> 5); |f(1e-6)/1e-6 - 1| = {limit_dev:.4}",
            max_q / base
        ),
    );
}

#[test]
fn criterion_11_full_default_run() {
    let start = Instant::now();
    let layer = Layer::new(LayerParams::unit_symmetric()).unwrap();
    let cfg = QuadratureConfig::default();
    let report_data = verify_all(&layer, &cfg, &VerifyOptions::default()).unwrap();
    let elapsed = start.elapsed().as_secs_f64();
    report(
        "criterion 11 (default verification run)",
        report_data.all_pass() && report_data.check_count() >= 12 && elapsed < 300.0,
        &format!(
            "{} checks, all pass = {}, {elapsed:.1} s",
            report_data.check_count(),
            report_data.all_pass()
        ),
    );
}
