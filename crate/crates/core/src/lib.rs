//! Entropic and Hilbert–Schmidt geometric quantum discord of finite-dimensional
//! bipartite states under one- and two-sided projective measurements.
//!
//! All composite indices are A-major: `|α⟩⊗|β⟩` sits at `α·n_B + β`. Entropies are in bits.

pub mod entropic;
pub mod error;
pub mod geometric;
mod linalg;
pub mod measurement;
pub mod optimizer;
pub mod qstate;

pub use error::{DiscordError, Result};
pub use linalg::CMatrix;
pub use measurement::{OptimalMeasurement, OrthonormalBasis, ProductMeasurement};
pub use optimizer::{OptimizationResult, OptimizerConfig};
pub use qstate::{BipartiteState, DensityMatrix, Subsystem, TwoQubitBloch};

/// The linear-algebra crate used in public signatures.
pub use nalgebra;
