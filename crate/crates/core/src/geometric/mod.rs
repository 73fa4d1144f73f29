//! Hilbert–Schmidt geometric discord.
//!
//! For fixed measurement bases the closest classical state is the dephased state itself
//! (`Σ(p_αβ − ρ_ααββ)²` is the only `p`-dependent term of the distance), so the discord is
//! `tr ρ² − sup tr(dephased ρ)²` and no inner optimisation over distributions is needed.

mod correlation;
mod operator_basis;

pub use correlation::{
    correlation_matrix, correlation_matrix_in, lower_bound_one_sided, lower_bound_two_sided,
    measurement_matrix, objective27, CorrelationData,
};
pub use operator_basis::{hermitian_operator_basis, HermitianOperatorBasis};

use nalgebra::{DMatrix, Matrix3, Vector3};
use serde::Serialize;

use crate::error::{DiscordError, Result};
use crate::linalg::CMatrix;
use crate::measurement::{
    bloch_basis, conditional_blocks, product_diagonal, quadratic_form, OptimalMeasurement, OrthonormalBasis,
    ProductMeasurement,
};
use crate::optimizer::{
    alternating_sphere_max, bloch_objective, maximize_over_basis, maximize_over_product_bases, warm_starts,
    BasisObjective, OptimizationResult, OptimizerConfig, ProductObjective,
};
use crate::qstate::{from_bloch, BipartiteState, Subsystem, TwoQubitBloch};
use correlation::projector_coefficients;

/// `‖ρ₁ − ρ₂‖² = tr[(ρ₁ − ρ₂)²]`.
pub fn hs_distance_sq(r1: &BipartiteState, r2: &BipartiteState) -> Result<f64> {
    if r1.dims() != r2.dims() {
        return Err(DiscordError::dims(format!("{:?}", r1.dims()), format!("{:?}", r2.dims())));
    }
    Ok((r1.matrix() - r2.matrix()).iter().map(|z| z.norm_sqr()).sum())
}

/// Purity of the two-sided dephased state, `Σ_αβ ⟨αβ|ρ|αβ⟩²`.
pub fn dephased_purity(state: &BipartiteState, m: &ProductMeasurement) -> Result<f64> {
    if m.dims() != state.dims() {
        return Err(DiscordError::dims(format!("{:?}", state.dims()), format!("{:?}", m.dims())));
    }
    let (na, nb) = state.dims();
    Ok(product_diagonal(state.matrix(), na, nb, m.basis_a.unitary(), m.basis_b.unitary())
        .iter()
        .map(|p| p * p)
        .sum())
}

/// A geometric discord estimate bracketed by its spectral lower bound.
#[derive(Debug, Clone, PartialEq)]
pub struct GeoResult {
    pub value: f64,
    pub optimal_measurement: OptimalMeasurement,
    pub lower_bound: f64,
    pub optimizer_report: OptimizationResult,
}

struct DephasedPurity<'s> {
    rho: &'s CMatrix,
    na: usize,
    nb: usize,
}

impl ProductObjective for DephasedPurity<'_> {
    fn dims(&self) -> (usize, usize) {
        (self.na, self.nb)
    }

    fn value(&self, ua: &CMatrix, ub: &CMatrix) -> f64 {
        product_diagonal(self.rho, self.na, self.nb, ua, ub).iter().map(|p| p * p).sum()
    }

    fn partial<'a>(&'a self, free: Subsystem, fixed: &CMatrix) -> Box<dyn Fn(&CMatrix) -> f64 + 'a> {
        let blocks = conditional_blocks(self.rho, self.na, self.nb, free.other(), fixed);
        Box::new(move |u| {
            let mut acc = 0.0;
            for m in &blocks {
                for i in 0..u.ncols() {
                    let q = quadratic_form(m, u, i);
                    acc += q * q;
                }
            }
            acc
        })
    }
}

/// Purity of the one-sided dephased state `Σ_α |α⟩⟨α| ⊗ B_α`, i.e. `Σ_α ‖B_α‖²`.
struct OneSidedPurity<'s> {
    rho: &'s CMatrix,
    na: usize,
    nb: usize,
    side: Subsystem,
}

impl BasisObjective for OneSidedPurity<'_> {
    fn dim(&self) -> usize {
        match self.side {
            Subsystem::A => self.na,
            Subsystem::B => self.nb,
        }
    }

    fn value(&self, u: &CMatrix) -> f64 {
        conditional_blocks(self.rho, self.na, self.nb, self.side, u)
            .iter()
            .map(|b| b.iter().map(|z| z.norm_sqr()).sum::<f64>())
            .sum()
    }
}

/// `‖A C Bᵗ‖²` with `A`, `B` the projector-coefficient matrices of the two bases.
struct CorrelationObjective<'c> {
    cd: &'c CorrelationData,
}

impl ProductObjective for CorrelationObjective<'_> {
    fn dims(&self) -> (usize, usize) {
        self.cd.dims()
    }

    fn value(&self, ua: &CMatrix, ub: &CMatrix) -> f64 {
        let a = projector_coefficients(ua, &self.cd.basis_a);
        let b = projector_coefficients(ub, &self.cd.basis_b);
        (a * &self.cd.c * b.transpose()).norm_squared()
    }

    fn partial<'a>(&'a self, free: Subsystem, fixed: &CMatrix) -> Box<dyn Fn(&CMatrix) -> f64 + 'a> {
        let cd = self.cd;
        match free {
            Subsystem::A => {
                let m: DMatrix<f64> = &cd.c * projector_coefficients(fixed, &cd.basis_b).transpose();
                Box::new(move |u| (projector_coefficients(u, &cd.basis_a) * &m).norm_squared())
            }
            Subsystem::B => {
                let m: DMatrix<f64> = projector_coefficients(fixed, &cd.basis_a) * &cd.c;
                Box::new(move |u| (&m * projector_coefficients(u, &cd.basis_b).transpose()).norm_squared())
            }
        }
    }
}

/// Two-sided geometric discord `tr ρ² − sup Σ_αβ ρ_ααββ²`, searched with the default
/// warm starts. The value is an upper estimate; `lower_bound` brackets it from below.
pub fn geo_discord_two_sided(state: &BipartiteState, cfg: &OptimizerConfig) -> Result<GeoResult> {
    geo_discord_two_sided_with(state, cfg, &warm_starts::generic(state))
}

pub fn geo_discord_two_sided_with(
    state: &BipartiteState,
    cfg: &OptimizerConfig,
    warm: &[ProductMeasurement],
) -> Result<GeoResult> {
    let (na, nb) = state.dims();
    let objective = DephasedPurity { rho: state.matrix(), na, nb };
    let search = maximize_over_product_bases(&objective, cfg, warm)?;
    Ok(GeoResult {
        value: state.purity() - search.report.best_value,
        optimal_measurement: OptimalMeasurement::TwoSided(search.measurement),
        lower_bound: lower_bound_two_sided(&correlation_matrix(state)?),
        optimizer_report: search.report,
    })
}

/// The same quantity computed entirely from the correlation matrix:
/// `tr(CCᵗ) − sup ‖A C Bᵗ‖²`.
pub fn geo_discord_from_correlation(
    cd: &CorrelationData,
    cfg: &OptimizerConfig,
    warm: &[ProductMeasurement],
) -> Result<GeoResult> {
    let search = maximize_over_product_bases(&CorrelationObjective { cd }, cfg, warm)?;
    Ok(GeoResult {
        value: cd.frobenius_sq() - search.report.best_value,
        optimal_measurement: OptimalMeasurement::TwoSided(search.measurement),
        lower_bound: lower_bound_two_sided(cd),
        optimizer_report: search.report,
    })
}

/// One-sided geometric discord `tr ρ² − sup ‖Σ_α (Π_α⊗I) ρ (Π_α⊗I)‖²` for `side = A`
/// (mirrored for B).
pub fn geo_discord_one_sided(state: &BipartiteState, side: Subsystem, cfg: &OptimizerConfig) -> Result<GeoResult> {
    geo_discord_one_sided_with(state, side, cfg, &warm_starts::generic_one_sided(state, side))
}

pub fn geo_discord_one_sided_with(
    state: &BipartiteState,
    side: Subsystem,
    cfg: &OptimizerConfig,
    warm: &[OrthonormalBasis],
) -> Result<GeoResult> {
    let (na, nb) = state.dims();
    let objective = OneSidedPurity { rho: state.matrix(), na, nb, side };
    let search = maximize_over_basis(&objective, cfg, warm)?;
    Ok(GeoResult {
        value: state.purity() - search.report.best_value,
        optimal_measurement: OptimalMeasurement::OneSided { side, basis: search.basis },
        lower_bound: lower_bound_one_sided(&correlation_matrix(state)?, side),
        optimizer_report: search.report,
    })
}

/// `(mx − 1)² / (m(m−1)(m+1)²)` for the `m×m` Werner state.
pub fn werner_geo_closed(m: usize, x: f64) -> Result<f64> {
    if m < 2 || !(-1.0..=1.0).contains(&x) {
        return Err(DiscordError::Domain(format!("Werner parameters need m ≥ 2, x ∈ [−1, 1]; got m = {m}, x = {x}")));
    }
    let m = m as f64;
    Ok((m * x - 1.0).powi(2) / (m * (m - 1.0) * (m + 1.0).powi(2)))
}

/// `(m²x − 1)² / (m(m−1)(m+1)²)` for the `m×m` isotropic state.
pub fn isotropic_geo_closed(m: usize, x: f64) -> Result<f64> {
    if m < 2 || !(0.0..=1.0).contains(&x) {
        return Err(DiscordError::Domain(format!("isotropic parameters need m ≥ 2, x ∈ [0, 1]; got m = {m}, x = {x}")));
    }
    let m = m as f64;
    Ok((m * m * x - 1.0).powi(2) / (m * (m - 1.0) * (m + 1.0).powi(2)))
}

fn check_unit(v: &Vector3<f64>) -> Result<()> {
    let norm = v.norm();
    if (norm - 1.0).abs() > 1e-10 {
        return Err(DiscordError::NotUnitVector { norm });
    }
    Ok(())
}

/// `(a·x)² + (b·y)² + (aᵗTb)²`: four times the dephased purity minus one, for the
/// product measurement `bloch_basis(a) ⊗ bloch_basis(b)`.
pub fn two_qubit_geo_objective(bloch: &TwoQubitBloch, a: &Vector3<f64>, b: &Vector3<f64>) -> Result<f64> {
    check_unit(a)?;
    check_unit(b)?;
    Ok(bloch_objective(bloch, a, b))
}

/// Structural fast paths for two-qubit states.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum TwoQubitCase {
    /// `T = 0`.
    NoCorrelationTensor,
    /// `T = x yᵗ`: a product state.
    Product,
    /// `x = y = 0`: the value is `¼[tr TTᵗ − λ_max(TTᵗ)]`.
    ZeroMarginals,
    General,
}

const CASE_TOL: f64 = 1e-12;

pub fn two_qubit_case(bloch: &TwoQubitBloch) -> TwoQubitCase {
    if bloch.t.norm() <= CASE_TOL {
        TwoQubitCase::NoCorrelationTensor
    } else if (bloch.t - bloch.x * bloch.y.transpose()).norm() <= CASE_TOL {
        TwoQubitCase::Product
    } else if bloch.x.norm() <= CASE_TOL && bloch.y.norm() <= CASE_TOL {
        TwoQubitCase::ZeroMarginals
    } else {
        TwoQubitCase::General
    }
}

fn unit_or_z(v: &Vector3<f64>) -> Vector3<f64> {
    let n = v.norm();
    if n > CASE_TOL {
        v / n
    } else {
        Vector3::z()
    }
}

/// Two-qubit geometric discord from Bloch data:
/// `¼[‖x‖² + ‖y‖² + tr TTᵗ] − ¼ sup [(a·x)² + (b·y)² + (aᵗTb)²]`.
/// Exact structure (see [`TwoQubitCase`]) is answered in closed form; otherwise the
/// alternating eigen-iteration supplies the supremum.
pub fn two_qubit_geo(bloch: &TwoQubitBloch, cfg: &OptimizerConfig) -> Result<GeoResult> {
    let state = from_bloch(bloch)?;
    let lower_bound = lower_bound_two_sided(&correlation_matrix(&state)?);
    let total = bloch.x.norm_squared() + bloch.y.norm_squared() + bloch.t.norm_squared();
    let case = two_qubit_case(bloch);
    let (value, a, b, report) = match case {
        TwoQubitCase::NoCorrelationTensor | TwoQubitCase::Product => {
            (0.0, unit_or_z(&bloch.x), unit_or_z(&bloch.y), None)
        }
        TwoQubitCase::ZeroMarginals => {
            let tt: Matrix3<f64> = bloch.t * bloch.t.transpose();
            let eig = tt.symmetric_eigen();
            let k = eig.eigenvalues.imax();
            let a = unit_or_z(&eig.eigenvectors.column(k).into_owned());
            let b = unit_or_z(&(bloch.t.transpose() * a));
            (0.25 * (tt.trace() - eig.eigenvalues[k]), a, b, None)
        }
        TwoQubitCase::General => {
            let best = alternating_sphere_max(bloch, cfg)?;
            (0.25 * (total - best.value), best.a, best.b, Some(best.report))
        }
    };
    let report = report.unwrap_or_else(|| OptimizationResult {
        best_value: bloch_objective(bloch, &a, &b),
        best_params: a.iter().chain(b.iter()).copied().collect(),
        best_restart: 0,
        restarts_run: 0,
        iterations_total: 0,
        converged: true,
    });
    Ok(GeoResult {
        value,
        optimal_measurement: OptimalMeasurement::TwoSided(ProductMeasurement::new(bloch_basis(&a)?, bloch_basis(&b)?)),
        lower_bound,
        optimizer_report: report,
    })
}

#[cfg(test)]
mod tests;
