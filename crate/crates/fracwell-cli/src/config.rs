//! Run configuration: a single TOML file with nested sections. Unknown keys
//! are rejected everywhere except the free-form tolerances map.

use std::collections::BTreeMap;
use std::path::PathBuf;

use serde::Deserialize;

use fracwell_core::asymptotics::SweepConfig;
use fracwell_core::numerics::QuadratureConfig;
use fracwell_core::potential::GridConfig;
use fracwell_core::{LayerParams, VerifyOptions};

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub run: RunSection,
    pub layer: LayerSection,
    pub quadrature: QuadratureConfig,
    pub grids: GridsSection,
    /// Named tolerances; `limit_rel` drives the asymptotic pass thresholds.
    pub tolerances: BTreeMap<String, f64>,
    pub output: OutputSection,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            run: RunSection::default(),
            layer: LayerSection::default(),
            quadrature: QuadratureConfig::default(),
            grids: GridsSection::default(),
            tolerances: BTreeMap::new(),
            output: OutputSection::default(),
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunSection {
    pub seed: u64,
    /// "layer" or "arctan".
    pub profile: String,
}

impl Default for RunSection {
    fn default() -> Self {
        RunSection {
            seed: 42,
            profile: "layer".into(),
        }
    }
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct LayerSection {
    pub s: f64,
    pub alpha: f64,
    pub beta: f64,
    pub kappa: f64,
    pub c1: f64,
    pub c2: f64,
}

impl Default for LayerSection {
    fn default() -> Self {
        let p = LayerParams::unit_symmetric();
        LayerSection {
            s: p.s,
            alpha: p.alpha,
            beta: p.beta,
            kappa: p.kappa,
            c1: p.c1,
            c2: p.c2,
        }
    }
}

impl LayerSection {
    pub fn to_params(self) -> LayerParams {
        LayerParams {
            s: self.s,
            alpha: self.alpha,
            beta: self.beta,
            kappa: self.kappa,
            c1: self.c1,
            c2: self.c2,
        }
    }
}

#[derive(Debug, Clone, Deserialize, Default)]
#[serde(deny_unknown_fields, default)]
pub struct GridsSection {
    pub fraclap: RangeGrid,
    pub potential: PotentialGrid,
    pub extension: ExtensionGrid,
    pub limits: LimitsGrid,
    pub counterexample: CounterexampleGrid,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RangeGrid {
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

impl Default for RangeGrid {
    fn default() -> Self {
        RangeGrid {
            min: -10.0,
            max: 10.0,
            count: 41,
        }
    }
}

impl RangeGrid {
    pub fn points(&self) -> Vec<f64> {
        if self.count <= 1 {
            return vec![self.min];
        }
        (0..self.count)
            .map(|k| self.min + (self.max - self.min) * k as f64 / (self.count - 1) as f64)
            .collect()
    }
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PotentialGrid {
    pub x_far: f64,
    pub nodes: usize,
}

impl Default for PotentialGrid {
    fn default() -> Self {
        let g = GridConfig::default();
        PotentialGrid {
            x_far: g.x_far,
            nodes: g.nodes,
        }
    }
}

impl PotentialGrid {
    pub fn to_grid(self) -> GridConfig {
        GridConfig {
            x_far: self.x_far,
            nodes: self.nodes,
        }
    }
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ExtensionGrid {
    pub x_min: f64,
    pub x_max: f64,
    pub x_count: usize,
    pub y_min: f64,
    pub y_max: f64,
    pub y_count: usize,
    pub hamiltonian_samples: usize,
}

impl Default for ExtensionGrid {
    fn default() -> Self {
        ExtensionGrid {
            x_min: -5.0,
            x_max: 5.0,
            x_count: 11,
            y_min: 0.1,
            y_max: 1.0,
            y_count: 7,
            hamiltonian_samples: 20,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct LimitsGrid {
    pub x0_factor: f64,
    pub ratio: f64,
    pub count: usize,
    pub tail_anchor_factor: f64,
    pub deriv_orders: Vec<usize>,
    pub higher_orders: Vec<usize>,
}

impl Default for LimitsGrid {
    fn default() -> Self {
        let opts = VerifyOptions::default();
        LimitsGrid {
            x0_factor: opts.sweep.x0_factor,
            ratio: opts.sweep.ratio,
            count: opts.sweep.count,
            tail_anchor_factor: opts.sweep.tail_anchor_factor,
            deriv_orders: opts.deriv_orders,
            higher_orders: opts.higher_orders,
        }
    }
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CounterexampleGrid {
    pub alpha: f64,
    pub beta: f64,
    pub decade_min: u32,
    pub decade_max: u32,
}

impl Default for CounterexampleGrid {
    fn default() -> Self {
        CounterexampleGrid {
            alpha: 1.0,
            beta: 0.5,
            decade_min: 3,
            decade_max: 9,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputSection {
    pub dir: PathBuf,
}

impl Default for OutputSection {
    fn default() -> Self {
        OutputSection {
            dir: PathBuf::from("out"),
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), String> {
        if self.run.profile != "layer" && self.run.profile != "arctan" {
            return Err(format!(
                "run.profile must be \"layer\" or \"arctan\", got {:?}",
                self.run.profile
            ));
        }
        self.layer
            .to_params()
            .validate()
            .map_err(|e| e.to_string())?;
        self.quadrature.validate().map_err(|e| e.to_string())?;
        for (name, tol) in &self.tolerances {
            if !(tol > &0.0) {
                return Err(format!("tolerance {name:?} must be positive, got {tol}"));
            }
        }
        if self.grids.limits.count < 4 {
            return Err("grids.limits.count must be at least 4".into());
        }
        for &i in &self.grids.limits.deriv_orders {
            if !(1..=3).contains(&i) {
                return Err(format!("grids.limits.deriv_orders entries must lie in 1..=3, got {i}"));
            }
        }
        for &i in &self.grids.limits.higher_orders {
            if !(1..=3).contains(&i) {
                return Err(format!("grids.limits.higher_orders entries must lie in 1..=3, got {i}"));
            }
        }
        if self.grids.counterexample.decade_min >= self.grids.counterexample.decade_max {
            return Err("counterexample decades must be an increasing range".into());
        }
        Ok(())
    }

    pub fn limit_rel_tolerance(&self) -> f64 {
        self.tolerances.get("limit_rel").copied().unwrap_or(2e-2)
    }

    pub fn sweep(&self) -> SweepConfig {
        SweepConfig {
            x0_factor: self.grids.limits.x0_factor,
            ratio: self.grids.limits.ratio,
            count: self.grids.limits.count,
            rel_tol: self.limit_rel_tolerance(),
            tail_anchor_factor: self.grids.limits.tail_anchor_factor,
        }
    }

    pub fn verify_options(&self) -> VerifyOptions {
        VerifyOptions {
            sweep: self.sweep(),
            grid: self.grids.potential.to_grid(),
            deriv_orders: self.grids.limits.deriv_orders.clone(),
            higher_orders: self.grids.limits.higher_orders.clone(),
        }
    }
}
