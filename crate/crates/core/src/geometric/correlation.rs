//! The real correlation matrix `C` of a state in product operator bases, and the
//! spectral bounds it yields.

use nalgebra::DMatrix;

use super::operator_basis::{hermitian_operator_basis, trace_product, HermitianOperatorBasis};
use crate::error::{DiscordError, Result};
use crate::linalg::{self, CMatrix};
use crate::measurement::OrthonormalBasis;
use crate::qstate::{BipartiteState, Subsystem};

/// Imaginary residue tolerated in `tr(ρ X_i⊗Y_j)`.
const RESIDUE_TOL: f64 = 1e-10;

/// `ρ = Σ_ij c_ij X_i ⊗ Y_j`.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationData {
    pub c: DMatrix<f64>,
    pub basis_a: HermitianOperatorBasis,
    pub basis_b: HermitianOperatorBasis,
}

impl CorrelationData {
    pub fn dims(&self) -> (usize, usize) {
        (self.basis_a.dim(), self.basis_b.dim())
    }

    /// `tr(CCᵗ)`, which equals the purity of the source state.
    pub fn frobenius_sq(&self) -> f64 {
        self.c.iter().map(|v| v * v).sum()
    }

    /// `Σ c_ij X_i ⊗ Y_j`.
    pub fn reconstruct(&self) -> CMatrix {
        let (na, nb) = self.dims();
        let mut rho = CMatrix::zeros(na * nb, na * nb);
        for (i, x) in self.basis_a.operators().iter().enumerate() {
            let y = self.basis_b.reconstruct(self.c.row(i).transpose().as_slice());
            rho += x.kronecker(&y);
        }
        rho
    }

    /// Eigenvalues of `CCᵗ`, decreasing, with multiplicity.
    pub fn spectrum(&self) -> Vec<f64> {
        linalg::symmetric_eigenvalues_desc(&(&self.c * self.c.transpose()))
    }
}

/// Correlation matrix in the default Gell-Mann bases.
pub fn correlation_matrix(state: &BipartiteState) -> Result<CorrelationData> {
    let (na, nb) = state.dims();
    correlation_matrix_in(state, &hermitian_operator_basis(na), &hermitian_operator_basis(nb))
}

pub fn correlation_matrix_in(
    state: &BipartiteState,
    basis_a: &HermitianOperatorBasis,
    basis_b: &HermitianOperatorBasis,
) -> Result<CorrelationData> {
    let (na, nb) = state.dims();
    if basis_a.dim() != na || basis_b.dim() != nb {
        return Err(DiscordError::dims(
            format!("operator bases for ({na}, {nb})"),
            format!("({}, {})", basis_a.dim(), basis_b.dim()),
        ));
    }
    let rho = state.matrix();
    let mut cm = DMatrix::zeros(na * na, nb * nb);
    for (j, y) in basis_b.operators().iter().enumerate() {
        // R_j = tr_B[ρ (I ⊗ Y_j)].
        let r = CMatrix::from_fn(na, na, |a, a2| {
            let mut acc = linalg::ZERO;
            for b in 0..nb {
                for b2 in 0..nb {
                    acc += rho[(a * nb + b, a2 * nb + b2)] * y[(b2, b)];
                }
            }
            acc
        });
        for (i, x) in basis_a.operators().iter().enumerate() {
            let v = trace_product(&r, x);
            if v.im.abs() > RESIDUE_TOL {
                return Err(DiscordError::NumericalResidue { residue: v.im.abs() });
            }
            cm[(i, j)] = v.re;
        }
    }
    Ok(CorrelationData {
        c: cm,
        basis_a: basis_a.clone(),
        basis_b: basis_b.clone(),
    })
}

/// `A_αi = ⟨α|X_i|α⟩`: row `α` holds the coefficients of the projector `|α⟩⟨α|`.
pub fn measurement_matrix(basis: &OrthonormalBasis, ops: &HermitianOperatorBasis) -> Result<DMatrix<f64>> {
    if basis.dim() != ops.dim() {
        return Err(DiscordError::dims(format!("basis of dimension {}", ops.dim()), basis.dim()));
    }
    Ok(projector_coefficients(basis.unitary(), ops))
}

pub(crate) fn projector_coefficients(u: &CMatrix, ops: &HermitianOperatorBasis) -> DMatrix<f64> {
    let n = u.nrows();
    DMatrix::from_fn(n, ops.len(), |alpha, i| {
        crate::measurement::quadratic_form(&ops.operators()[i], u, alpha)
    })
}

/// `tr(A C Bᵗ B Cᵗ Aᵗ) = ‖A C Bᵗ‖²_F`, the purity retained by the measurement whose
/// projector coefficients are the rows of `a_mat` and `b_mat`.
pub fn objective27(cd: &CorrelationData, a_mat: &DMatrix<f64>, b_mat: &DMatrix<f64>) -> Result<f64> {
    if a_mat.ncols() != cd.c.nrows() || b_mat.ncols() != cd.c.ncols() {
        return Err(DiscordError::dims(
            format!("A with {} columns and B with {} columns", cd.c.nrows(), cd.c.ncols()),
            format!("{} and {}", a_mat.ncols(), b_mat.ncols()),
        ));
    }
    Ok((a_mat * &cd.c * b_mat.transpose()).norm_squared())
}

/// `tr(CCᵗ) − Σ_{k ≤ min(n_A, n_B)} λ_k`.
pub fn lower_bound_two_sided(cd: &CorrelationData) -> f64 {
    let (na, nb) = cd.dims();
    bound(cd, na.min(nb))
}

/// `tr(CCᵗ) − Σ_{k ≤ n_side} λ_k`. For side B the spectrum is that of `CᵗC`, i.e. the
/// same nonzero eigenvalues padded with zeros.
pub fn lower_bound_one_sided(cd: &CorrelationData, side: Subsystem) -> f64 {
    let (na, nb) = cd.dims();
    bound(
        cd,
        match side {
            Subsystem::A => na,
            Subsystem::B => nb,
        },
    )
}

fn bound(cd: &CorrelationData, k: usize) -> f64 {
    let spectrum = cd.spectrum();
    cd.frobenius_sq() - spectrum.iter().take(k).sum::<f64>()
}
