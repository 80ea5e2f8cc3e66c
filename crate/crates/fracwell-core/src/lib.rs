//! Numerical kernels for power-tail transition layers: construction of the
//! profile, evaluation of the one-dimensional fractional Laplacian on it,
//! reconstruction of the associated double-well potential, harmonic
//! extension to the half-plane, and a verification harness that turns every
//! asymptotic claim into a pass/fail report.

pub mod error;
pub mod numerics;
pub mod profile;

pub mod layer;

pub mod fraclap;

pub mod potential;

pub mod asymptotics;

pub mod counterexample;

pub mod extension;

pub use asymptotics::{
    regularity_class, verify_all, LimitReport, ScalarCheck, Side, SweepConfig, Target,
    VerificationReport, VerifyOptions,
};
pub use counterexample::{holder_quotient, osc_f, osc_points, quotient_loglog_slope, OscParams};
pub use error::{Error, Result};
pub use extension::{
    arctan_well_potential, extend, extension_constants, hamiltonian_check, w_eval,
    ExtensionConstants, ExtensionSample, HamiltonianCheck, WMethod,
};
pub use fraclap::{fraclap, fraclap_arctan_exact, fraclap_deriv, FracEval};
pub use layer::{Layer, LayerParams};
pub use numerics::{LimitEstimate, QuadratureConfig};
pub use potential::{build_potential, h_of_r, recover_vderiv, GridConfig, PotentialModel};
pub use profile::{arctan_layer, ArctanProfile, Profile, TailSide};
