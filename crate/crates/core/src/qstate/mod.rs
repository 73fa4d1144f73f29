//! Validated density matrices on `H_A ⊗ H_B`, partial traces and the standard state families.
//!
//! Composite indices are A-major throughout the crate: basis vector `|α⟩⊗|β⟩` sits at
//! index `α·n_B + β`.

mod bloch;
mod families;
pub mod io;
mod samplers;

pub use bloch::{from_bloch, pauli, to_bloch, TwoQubitBloch};
pub use families::{
    bell_phi_plus, classical_classical, isotropic, maximally_entangled_projector, pure_state,
    random_state, swap_operator, werner,
};
pub use samplers::{
    random_classical_classical, random_distribution, random_product_measurement, random_product_state,
    random_zero_marginal_qubits,
};

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{DiscordError, Result};
use crate::linalg::{self, CMatrix};

/// Entrywise tolerance on `ρ - ρ†`.
pub const HERMITIAN_TOL: f64 = 1e-12;
/// Tolerance on `|tr ρ - 1|`.
pub const TRACE_TOL: f64 = 1e-12;
/// States whose smallest eigenvalue falls below `-PSD_TOL` are rejected, never clipped.
pub const PSD_TOL: f64 = 1e-10;

/// One side of a bipartition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum Subsystem {
    A,
    B,
}

impl Subsystem {
    pub fn other(self) -> Subsystem {
        match self {
            Subsystem::A => Subsystem::B,
            Subsystem::B => Subsystem::A,
        }
    }
}

/// A Hermitian, unit-trace, positive semidefinite matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: CMatrix,
}

impl DensityMatrix {
    /// Validates `matrix` as a density operator.
    pub fn new(matrix: CMatrix) -> Result<Self> {
        validate(&matrix)?;
        Ok(DensityMatrix { matrix })
    }

    /// For matrices that are density operators by construction (channel outputs,
    /// partial traces). Only Hermiticity and trace are re-checked, in debug builds.
    pub(crate) fn from_trusted(matrix: CMatrix) -> Self {
        debug_assert!(linalg::hermiticity_defect(&matrix) < 1e-9);
        debug_assert!((linalg::trace(&matrix).re - 1.0).abs() < 1e-9);
        DensityMatrix { matrix }
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        DensityMatrix {
            matrix: CMatrix::identity(dim, dim) / Complex64::from(dim as f64),
        }
    }

    /// `diag(p)` for a probability vector `p`.
    pub fn diagonal(p: &[f64]) -> Result<Self> {
        let m = CMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
            p.len(),
            p.iter().map(|&x| Complex64::from(x)),
        ));
        DensityMatrix::new(m)
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        linalg::hermitian_eigenvalues(&self.matrix)
    }

    /// `tr ρ²`.
    pub fn purity(&self) -> f64 {
        self.matrix.iter().map(|z| z.norm_sqr()).sum()
    }
}

fn validate(m: &CMatrix) -> Result<()> {
    if m.nrows() != m.ncols() || m.nrows() == 0 {
        return Err(DiscordError::dims(
            "non-empty square matrix",
            format!("{}x{}", m.nrows(), m.ncols()),
        ));
    }
    if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(DiscordError::Format("matrix has non-finite entries".into()));
    }
    let deviation = linalg::hermiticity_defect(m);
    if deviation > HERMITIAN_TOL {
        return Err(DiscordError::NonHermitian { deviation });
    }
    let tr = linalg::trace(m).re;
    if (tr - 1.0).abs() > TRACE_TOL {
        return Err(DiscordError::NonUnitTrace { trace: tr });
    }
    let min_eigenvalue = linalg::hermitian_eigenvalues(m)[0];
    if min_eigenvalue < -PSD_TOL {
        return Err(DiscordError::NotPositiveSemidefinite { min_eigenvalue });
    }
    Ok(())
}

/// A density matrix on `H_A ⊗ H_B` with recorded subsystem dimensions.
#[derive(Debug, Clone, PartialEq)]
pub struct BipartiteState {
    dim_a: usize,
    dim_b: usize,
    rho: DensityMatrix,
}

impl BipartiteState {
    pub fn new(entries: CMatrix, dim_a: usize, dim_b: usize) -> Result<Self> {
        make_bipartite(entries, dim_a, dim_b)
    }

    pub fn from_density(rho: DensityMatrix, dim_a: usize, dim_b: usize) -> Result<Self> {
        if dim_a == 0 || dim_b == 0 || dim_a * dim_b != rho.dim() {
            return Err(DiscordError::dims(
                format!("{}x{}", dim_a * dim_b, dim_a * dim_b),
                format!("{}x{}", rho.dim(), rho.dim()),
            ));
        }
        Ok(BipartiteState { dim_a, dim_b, rho })
    }

    pub(crate) fn from_trusted(matrix: CMatrix, dim_a: usize, dim_b: usize) -> Self {
        debug_assert_eq!(matrix.nrows(), dim_a * dim_b);
        BipartiteState {
            dim_a,
            dim_b,
            rho: DensityMatrix::from_trusted(matrix),
        }
    }

    pub fn maximally_mixed(dim_a: usize, dim_b: usize) -> Self {
        BipartiteState {
            dim_a,
            dim_b,
            rho: DensityMatrix::maximally_mixed(dim_a * dim_b),
        }
    }

    pub fn dim_a(&self) -> usize {
        self.dim_a
    }

    pub fn dim_b(&self) -> usize {
        self.dim_b
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.dim_a, self.dim_b)
    }

    pub fn dim(&self, side: Subsystem) -> usize {
        match side {
            Subsystem::A => self.dim_a,
            Subsystem::B => self.dim_b,
        }
    }

    pub fn rho(&self) -> &DensityMatrix {
        &self.rho
    }

    pub fn matrix(&self) -> &CMatrix {
        self.rho.matrix()
    }

    pub fn purity(&self) -> f64 {
        self.rho.purity()
    }

    pub fn partial_trace(&self, keep: Subsystem) -> DensityMatrix {
        partial_trace(self, keep)
    }
}

/// Validation gateway for user-supplied matrices. The Hermitian part is never taken
/// silently: asymmetry beyond [`HERMITIAN_TOL`] is an error.
pub fn make_bipartite(entries: CMatrix, dim_a: usize, dim_b: usize) -> Result<BipartiteState> {
    let n = dim_a * dim_b;
    if dim_a == 0 || dim_b == 0 || entries.nrows() != n || entries.ncols() != n {
        return Err(DiscordError::dims(
            format!("{n}x{n} for dims ({dim_a}, {dim_b})"),
            format!("{}x{}", entries.nrows(), entries.ncols()),
        ));
    }
    let rho = DensityMatrix::new(entries)?;
    Ok(BipartiteState { dim_a, dim_b, rho })
}

/// Reduced state on `keep`.
pub fn partial_trace(state: &BipartiteState, keep: Subsystem) -> DensityMatrix {
    let (na, nb) = state.dims();
    let m = state.matrix();
    let out = match keep {
        Subsystem::A => CMatrix::from_fn(na, na, |a, a2| {
            (0..nb).map(|b| m[(a * nb + b, a2 * nb + b)]).sum()
        }),
        Subsystem::B => CMatrix::from_fn(nb, nb, |b, b2| {
            (0..na).map(|a| m[(a * nb + b, a * nb + b2)]).sum()
        }),
    };
    DensityMatrix::from_trusted(out)
}

/// `a ⊗ b` with the crate's A-major index convention.
pub fn tensor(a: &DensityMatrix, b: &DensityMatrix) -> BipartiteState {
    BipartiteState {
        dim_a: a.dim(),
        dim_b: b.dim(),
        rho: DensityMatrix::from_trusted(a.matrix().kronecker(b.matrix())),
    }
}

pub fn purity(rho: &DensityMatrix) -> f64 {
    rho.purity()
}

/// Probability table `p[(α, β)]`, `n_A × n_B`.
pub type ProbabilityTable = DMatrix<f64>;
