//! Batch front end: parse a TOML run configuration, dispatch one of the
//! subcommands, and write CSV/JSON reports with full provenance.
//!
//! Exit codes: 0 success, 1 check failure (or numeric non-convergence),
//! 2 configuration error, 3 I/O error.

mod config;
mod output;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use fracwell_core::extension::{
    arctan_well_potential, extension_constants, hamiltonian_check, w_finite_difference,
    w_representation, HamiltonianCheck,
};
use fracwell_core::potential::build_potential;
use fracwell_core::{
    arctan_layer, fraclap, fraclap_arctan_exact, holder_quotient, osc_points,
    quotient_loglog_slope, regularity_class, verify_all, Error as CoreError, Layer, OscParams,
    Profile,
};

use config::RunConfig;
use output::{write_csv, write_json, Cell, Meta};

#[derive(Debug)]
pub enum CliError {
    Config(String),
    Io(String),
    Numeric(String),
    ChecksFailed,
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::Domain(_) | CoreError::Construction { .. } => {
                CliError::Config(e.to_string())
            }
            CoreError::QuadratureNonConvergence { .. } => CliError::Numeric(e.to_string()),
        }
    }
}

#[derive(Parser)]
#[command(
    name = "fracwell",
    version,
    about = "Power-tail transition layers: fractional Laplacian evaluation, double-well reconstruction and asymptotic verification"
)]
struct Cli {
    /// Path to the TOML run configuration.
    #[arg(long, short, global = true, default_value = "fracwell.toml")]
    config: PathBuf,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Emit the profile and its derivative on the sample grid.
    Layer,
    /// Evaluate L_s φ on the sample grid with the region breakdown.
    Fraclap {
        /// Use the closed-form arctan profile regardless of the config.
        #[arg(long)]
        arctan: bool,
    },
    /// Reconstruct the double-well potential V and V'.
    Potential,
    /// Run the full asymptotic verification harness.
    Verify,
    /// Harmonic extension samples plus the trace and Hamiltonian checks.
    Extension,
    /// The oscillatory Hölder-quotient blow-up.
    Counterexample,
    /// Everything above, in order.
    All,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("fracwell: one or more checks failed");
            ExitCode::from(1)
        }
        Err(CliError::ChecksFailed) => {
            eprintln!("fracwell: one or more checks failed");
            ExitCode::from(1)
        }
        Err(CliError::Numeric(msg)) => {
            eprintln!("fracwell: numeric failure: {msg}");
            ExitCode::from(1)
        }
        Err(CliError::Config(msg)) => {
            eprintln!("fracwell: configuration error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Io(msg)) => {
            eprintln!("fracwell: i/o error: {msg}");
            ExitCode::from(3)
        }
    }
}

struct Ctx {
    cfg: RunConfig,
    meta: Meta,
    out_dir: PathBuf,
}

fn run(cli: &Cli) -> Result<bool, CliError> {
    let raw = fs::read(&cli.config)
        .map_err(|e| CliError::Config(format!("cannot read {:?}: {e}", cli.config)))?;
    let text = std::str::from_utf8(&raw)
        .map_err(|e| CliError::Config(format!("config is not UTF-8: {e}")))?;
    let cfg: RunConfig =
        toml::from_str(text).map_err(|e| CliError::Config(format!("config parse: {e}")))?;
    cfg.validate().map_err(CliError::Config)?;

    let out_dir = match std::env::var_os("FRACWELL_OUTPUT_DIR") {
        Some(dir) => PathBuf::from(dir),
        None => cfg.output.dir.clone(),
    };
    fs::create_dir_all(&out_dir)
        .map_err(|e| CliError::Io(format!("creating {out_dir:?}: {e}")))?;

    let ctx = Ctx {
        meta: Meta::new(&raw),
        cfg,
        out_dir,
    };

    match cli.command {
        Command::Layer => cmd_layer(&ctx).map(|()| true),
        Command::Fraclap { arctan } => cmd_fraclap(&ctx, arctan).map(|()| true),
        Command::Potential => cmd_potential(&ctx).map(|()| true),
        Command::Verify => cmd_verify(&ctx),
        Command::Extension => cmd_extension(&ctx),
        Command::Counterexample => cmd_counterexample(&ctx),
        Command::All => {
            cmd_layer(&ctx)?;
            cmd_fraclap(&ctx, false)?;
            cmd_potential(&ctx)?;
            let mut ok = cmd_verify(&ctx)?;
            ok &= cmd_extension(&ctx)?;
            ok &= cmd_counterexample(&ctx)?;
            Ok(ok)
        }
    }
}

fn build_layer(ctx: &Ctx) -> Result<Layer, CliError> {
    Ok(Layer::new(ctx.cfg.layer.to_params())?)
}

fn use_arctan(ctx: &Ctx) -> bool {
    ctx.cfg.run.profile == "arctan"
}

fn cmd_layer(ctx: &Ctx) -> Result<(), CliError> {
    let layer = build_layer(ctx)?;
    let mut rows = Vec::new();
    for x in ctx.cfg.grids.fraclap.points() {
        rows.push(vec![
            Cell::Float(x),
            Cell::Float(layer.phi(x)),
            Cell::Float(layer.phi_deriv(x, 1)?),
        ]);
    }
    write_csv(&ctx.out_dir, "layer.csv", &ctx.meta, &["x", "phi", "dphi"], &rows)?;

    #[derive(Serialize)]
    struct LayerJson<'a> {
        meta: &'a Meta,
        params: fracwell_core::LayerParams,
        bridge_half_width: f64,
        monotone_verified: bool,
        regularity: (u32, u32),
    }
    write_json(
        &ctx.out_dir,
        "layer.json",
        &LayerJson {
            meta: &ctx.meta,
            params: *layer.params(),
            bridge_half_width: layer.bridge_half_width(),
            monotone_verified: layer.monotone_verified(),
            regularity: regularity_class(layer.params()),
        },
    )?;
    Ok(())
}

fn cmd_fraclap(ctx: &Ctx, force_arctan: bool) -> Result<(), CliError> {
    let arctan = arctan_layer();
    let layer;
    let profile: &dyn Profile = if force_arctan || use_arctan(ctx) {
        &arctan
    } else {
        layer = build_layer(ctx)?;
        &layer
    };
    let mut rows = Vec::new();
    for x in ctx.cfg.grids.fraclap.points() {
        let ev = fraclap(profile, x, &ctx.cfg.quadrature)?;
        rows.push(vec![
            Cell::Float(x),
            Cell::Float(ev.value),
            Cell::Float(ev.error_estimate),
            Cell::Float(ev.breakdown.inner),
            Cell::Float(ev.breakdown.mid),
            Cell::Float(ev.breakdown.outer_constant),
            Cell::Float(ev.breakdown.outer_power),
        ]);
    }
    write_csv(
        &ctx.out_dir,
        "fraclap.csv",
        &ctx.meta,
        &[
            "x",
            "value",
            "error_estimate",
            "inner",
            "mid",
            "outer_constant",
            "outer_power",
        ],
        &rows,
    )?;
    Ok(())
}

fn cmd_potential(ctx: &Ctx) -> Result<(), CliError> {
    let layer = build_layer(ctx)?;
    let model = build_potential(&layer, &ctx.cfg.grids.potential.to_grid(), &ctx.cfg.quadrature)?;
    let mut rows = Vec::new();
    for j in 0..model.r_grid.len() {
        rows.push(vec![
            Cell::Float(model.r_grid[j]),
            Cell::Float(model.v_values[j]),
            Cell::Float(model.vprime_values[j]),
        ]);
    }
    write_csv(
        &ctx.out_dir,
        "potential.csv",
        &ctx.meta,
        &["r", "V", "Vprime"],
        &rows,
    )?;

    #[derive(Serialize)]
    struct PotentialJson<'a> {
        meta: &'a Meta,
        x_far: f64,
        truncation_bound_left: f64,
        truncation_bound_right: f64,
        truncation_warning: bool,
        v_at_one: f64,
        max_v: f64,
        layer: fracwell_core::LayerParams,
        quadrature: &'a fracwell_core::QuadratureConfig,
        /// h(±1) := 0 closes the grid; a continuous extension, recorded here.
        boundary_closure: &'static str,
    }
    write_json(
        &ctx.out_dir,
        "potential.json",
        &PotentialJson {
            meta: &ctx.meta,
            x_far: model.x_far,
            truncation_bound_left: model.truncation_bound_left,
            truncation_bound_right: model.truncation_bound_right,
            truncation_warning: model.truncation_warning,
            v_at_one: model.v_at_one(),
            max_v: model.max_v(),
            layer: model.layer,
            quadrature: &ctx.cfg.quadrature,
            boundary_closure: "vprime at r = ±1 set to 0 (continuous extension of h)",
        },
    )?;
    Ok(())
}

fn cmd_verify(ctx: &Ctx) -> Result<bool, CliError> {
    let layer = build_layer(ctx)?;
    let report = verify_all(&layer, &ctx.cfg.quadrature, &ctx.cfg.verify_options())?;

    #[derive(Serialize)]
    struct VerifyJson<'a> {
        meta: &'a Meta,
        #[serde(flatten)]
        report: &'a fracwell_core::VerificationReport,
        all_pass: bool,
    }
    write_json(
        &ctx.out_dir,
        "verify.json",
        &VerifyJson {
            meta: &ctx.meta,
            report: &report,
            all_pass: report.all_pass(),
        },
    )?;

    let mut rows = Vec::new();
    for c in &report.checks {
        rows.push(vec![
            Cell::Text(c.name.clone()),
            Cell::Text(c.paper_eq.clone()),
            Cell::Text(side_label(c.side).into()),
            Cell::Float(c.extrapolated),
            match c.target {
                fracwell_core::Target::Value(v) => Cell::Float(v),
                fracwell_core::Target::Finite => Cell::Text("finite".into()),
            },
            Cell::Float(c.rel_error),
            Cell::Bool(c.pass),
        ]);
    }
    for c in &report.scalar_checks {
        rows.push(vec![
            Cell::Text(c.name.clone()),
            Cell::Text(c.paper_eq.clone()),
            Cell::Text("scalar".into()),
            Cell::Float(c.value),
            Cell::Text(c.constraint.clone()),
            Cell::Float(f64::NAN),
            Cell::Bool(c.pass),
        ]);
    }
    write_csv(
        &ctx.out_dir,
        "verify.csv",
        &ctx.meta,
        &[
            "name",
            "paper_eq",
            "side",
            "estimate",
            "target",
            "rel_error",
            "pass",
        ],
        &rows,
    )?;
    Ok(report.all_pass())
}

fn side_label(side: fracwell_core::Side) -> &'static str {
    match side {
        fracwell_core::Side::MinusInfinity => "-inf",
        fracwell_core::Side::PlusInfinity => "+inf",
        fracwell_core::Side::LeftWell => "-1+",
        fracwell_core::Side::RightWell => "1-",
    }
}

fn cmd_extension(ctx: &Ctx) -> Result<bool, CliError> {
    let cfg = &ctx.cfg.quadrature;
    let grid = &ctx.cfg.grids.extension;

    // Profile, its fractional Laplacian and its potential, by configuration.
    let layer;
    let model;
    let (s, value, lsv, potential): (
        f64,
        Box<dyn Fn(f64) -> f64>,
        Box<dyn Fn(f64) -> f64>,
        Box<dyn Fn(f64) -> f64>,
    ) = if use_arctan(ctx) {
        let u = arctan_layer();
        (
            0.5,
            Box::new(move |t| u.value(t)),
            Box::new(fraclap_arctan_exact),
            Box::new(arctan_well_potential),
        )
    } else {
        layer = build_layer(ctx)?;
        model = build_potential(&layer, &ctx.cfg.grids.potential.to_grid(), cfg)?;
        let quad = cfg.clone();
        let l1 = layer.clone();
        let l2 = layer.clone();
        (
            layer.params().s,
            Box::new(move |t| l1.phi(t)),
            Box::new(move |t| fraclap(&l2, t, &quad).map(|e| e.value).unwrap_or(f64::NAN)),
            Box::new(move |r| model.v_of_r(r)),
        )
    };

    let mut rows = Vec::new();
    let mut max_cross = 0.0f64;
    for kx in 0..grid.x_count {
        let x = grid.x_min
            + (grid.x_max - grid.x_min) * kx as f64 / (grid.x_count.max(2) - 1) as f64;
        for ky in 0..grid.y_count {
            let y = grid.y_min
                + (grid.y_max - grid.y_min) * ky as f64 / (grid.y_count.max(2) - 1) as f64;
            let u_bar = fracwell_core::extend(&*value, s, x, y, cfg)?;
            let w_fd = w_finite_difference(&*value, s, x, y, cfg)?;
            let w_repr = w_representation(&*lsv, s, x, y, cfg)?;
            max_cross = max_cross.max((w_fd - w_repr).abs());
            rows.push(vec![
                Cell::Float(x),
                Cell::Float(y),
                Cell::Float(u_bar),
                Cell::Float(w_fd),
                Cell::Float(w_repr),
            ]);
        }
    }
    write_csv(
        &ctx.out_dir,
        "extension.csv",
        &ctx.meta,
        &["x", "y", "u_bar", "w_fd", "w_repr"],
        &rows,
    )?;

    // Trace check: w(x, 1e-3) against 2 s p_s L_s v(x).
    let consts = extension_constants(s)?;
    let mut max_trace = 0.0f64;
    for kx in 0..grid.x_count {
        let x = grid.x_min
            + (grid.x_max - grid.x_min) * kx as f64 / (grid.x_count.max(2) - 1) as f64;
        let w = w_representation(&*lsv, s, x, 1e-3, cfg)?;
        let want = 2.0 * s * consts.p_s * lsv(x);
        max_trace = max_trace.max((w - want).abs());
    }

    // Hamiltonian inequality at seeded samples.
    let mut rng = ChaCha8Rng::seed_from_u64(ctx.cfg.run.seed);
    let mut hamiltonian: Vec<HamiltonianCheck> = Vec::new();
    let mut all_hold = true;
    for _ in 0..grid.hamiltonian_samples {
        let x = rng.gen_range(-3.0..3.0f64);
        let y = rng.gen_range(1e-3..2.0f64);
        let check = hamiltonian_check(&*value, &*potential, s, x, y, cfg)?;
        all_hold &= check.holds;
        hamiltonian.push(check);
    }

    let trace_pass = max_trace <= 1e-3;
    let cross_pass = max_cross <= 1e-6;

    #[derive(Serialize)]
    struct ExtensionJson<'a> {
        meta: &'a Meta,
        constants: fracwell_core::ExtensionConstants,
        checks: Vec<NamedCheck>,
        hamiltonian_samples: Vec<HamiltonianCheck>,
    }
    #[derive(Serialize)]
    struct NamedCheck {
        name: String,
        paper_eq: String,
        value: f64,
        threshold: f64,
        pass: bool,
    }
    let checks = vec![
        NamedCheck {
            name: "trace_limit_max_deviation".into(),
            paper_eq: "(3.32)".into(),
            value: max_trace,
            threshold: 1e-3,
            pass: trace_pass,
        },
        NamedCheck {
            name: "cross_method_max_difference".into(),
            paper_eq: "(3.31)".into(),
            value: max_cross,
            threshold: 1e-6,
            pass: cross_pass,
        },
        NamedCheck {
            name: "hamiltonian_strict_inequality".into(),
            paper_eq: "(3.40)".into(),
            value: hamiltonian
                .iter()
                .map(|c| c.rhs - c.lhs)
                .fold(f64::INFINITY, f64::min),
            threshold: 0.0,
            pass: all_hold,
        },
    ];
    let pass = checks.iter().all(|c| c.pass);
    write_json(
        &ctx.out_dir,
        "extension.json",
        &ExtensionJson {
            meta: &ctx.meta,
            constants: consts,
            checks,
            hamiltonian_samples: hamiltonian,
        },
    )?;
    Ok(pass)
}

fn cmd_counterexample(ctx: &Ctx) -> Result<bool, CliError> {
    let g = &ctx.cfg.grids.counterexample;
    let params = OscParams::new(g.alpha, g.beta)?;
    let ns: Vec<u64> = (g.decade_min..=g.decade_max).map(|d| 10u64.pow(d)).collect();

    let mut rows = Vec::new();
    let mut quotients = Vec::new();
    for &n in &ns {
        let pts = osc_points(&params, n)?;
        let (fp, fq) = fracwell_core::counterexample::osc_f_at_points(&params, &pts);
        let q = holder_quotient(&params, n)?;
        quotients.push(q);
        rows.push(vec![
            Cell::Int(n),
            Cell::Float(pts.p),
            Cell::Float(pts.q),
            Cell::Float(fp),
            Cell::Float(fq),
            Cell::Float(q),
        ]);
    }
    write_csv(
        &ctx.out_dir,
        "counterexample.csv",
        &ctx.meta,
        &["n", "p_n", "q_n", "f_p", "f_q", "quotient"],
        &rows,
    )?;

    let slope = quotient_loglog_slope(&params, &ns)?;
    let base = quotients[0];
    let max_q = quotients.iter().fold(f64::NEG_INFINITY, |a, &b| a.max(b));
    let blow_up = max_q > 5.0 * base;
    let slope_pass = slope >= 0.1;

    #[derive(Serialize)]
    struct CounterexampleJson<'a> {
        meta: &'a Meta,
        params: OscParams,
        loglog_slope: f64,
        blow_up_factor: f64,
        checks: Vec<(String, String, bool)>,
    }
    write_json(
        &ctx.out_dir,
        "counterexample.json",
        &CounterexampleJson {
            meta: &ctx.meta,
            params,
            loglog_slope: slope,
            blow_up_factor: max_q / base,
            checks: vec![
                (
                    "holder_quotient_slope".into(),
                    "§6".into(),
                    slope_pass,
                ),
                ("holder_quotient_blow_up".into(), "§6".into(), blow_up),
            ],
        },
    )?;
    Ok(slope_pass && blow_up)
}
