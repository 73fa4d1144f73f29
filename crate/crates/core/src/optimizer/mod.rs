//! Search over measurement bases.
//!
//! [`maximize_over_product_bases`] and [`maximize_over_basis`] run a seeded multistart
//! compass search on the unitary group; [`alternating_sphere_max`] handles the two-qubit
//! Bloch-sphere objective by exact eigen-maximisation, and the grid oracles certify both
//! at qubit scale.

mod pattern;
mod sphere;
mod unitary;
pub mod warm_starts;

pub use pattern::{
    maximize_over_basis, maximize_over_product_bases, BasisObjective, BasisSearch, FnProductObjective,
    ProductObjective, ProductSearch,
};
pub use sphere::{
    alternating_sphere_max, alternating_trace, bloch_objective, sphere_grid, sphere_grid_oracle,
    sphere_grid_oracle_exhaustive, SphereMaximum,
};
pub use unitary::{param_count, params_from_unitary, unitary_from_params};

use serde::{Deserialize, Serialize};

use crate::error::{DiscordError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OptimizerConfig {
    /// Random starts, in addition to any caller-supplied warm starts.
    pub restarts: usize,
    /// Poll budget per start.
    pub max_iterations: usize,
    pub step_tolerance: f64,
    pub value_tolerance: f64,
    pub seed: u64,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        OptimizerConfig {
            restarts: 64,
            max_iterations: 500,
            step_tolerance: 1e-10,
            value_tolerance: 1e-12,
            seed: 0,
        }
    }
}

impl OptimizerConfig {
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_restarts(mut self, restarts: usize) -> Self {
        self.restarts = restarts;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.restarts == 0 || self.max_iterations == 0 {
            return Err(DiscordError::Domain(
                "optimizer needs at least one restart and one iteration".into(),
            ));
        }
        if !(self.step_tolerance > 0.0 && self.value_tolerance > 0.0) {
            return Err(DiscordError::Domain("optimizer tolerances must be positive".into()));
        }
        Ok(())
    }
}

/// Diagnostics for one optimisation call.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimizationResult {
    /// Maximum over all restarts' final values.
    pub best_value: f64,
    /// Parameters of the maximiser: concatenated [`params_from_unitary`] blocks for
    /// basis searches, `[a, b]` for the sphere search.
    pub best_params: Vec<f64>,
    /// Index of the winning start (warm starts come first).
    pub best_restart: usize,
    pub restarts_run: usize,
    pub iterations_total: usize,
    /// Whether the winning start met its stopping criterion within budget.
    pub converged: bool,
}
