//! Shared numerical kernels: special functions, smooth cutoffs, quadrature,
//! limit extrapolation, Taylor-mode differentiation and weighted-partition
//! enumeration.
//!
//! Everything here is pure and deterministic; no shared mutable state.

pub mod extrapolate;
pub mod gamma;
pub mod partitions;
pub mod quad;
pub mod smooth;
pub mod taylor;

pub use extrapolate::{extrapolate_limit, LimitEstimate};
pub use gamma::{gamma, gamma_ratio};
pub use partitions::{partition_count, partitions_weighted, MAX_PARTITION_ORDER};
pub use quad::{adaptive_panel_integrate, GaussRule, QuadratureConfig, TminPolicy};
pub use smooth::smooth_step;
