//! Orthonormal Hermitian operator bases under the trace inner product `tr(XY)`.

use nalgebra::DMatrix;

use crate::error::{DiscordError, Result};
use crate::linalg::{c, CMatrix, ZERO};

/// Tolerance on `tr(X_i X_j) − δ_ij` and on Hermiticity.
const ORTHONORMALITY_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct HermitianOperatorBasis {
    operators: Vec<CMatrix>,
}

impl HermitianOperatorBasis {
    /// `I/√d`, then the normalised generalised Gell-Mann matrices in three families:
    /// symmetric `(E_jk + E_kj)/√2` and antisymmetric `(−iE_jk + iE_kj)/√2` for
    /// `j < k` in lexicographic order, then diagonal
    /// `(Σ_{j<l} E_jj − l E_ll)/√(l(l+1))` for `l = 1..d`.
    /// For `d = 2` this is `{I, σ_x, σ_y, σ_z}/√2`.
    pub fn gell_mann(dim: usize) -> Self {
        assert!(dim >= 1, "operator basis needs a positive dimension");
        let d = dim;
        let mut ops = Vec::with_capacity(d * d);
        ops.push(CMatrix::identity(d, d) * c(1.0 / (d as f64).sqrt(), 0.0));
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let pairs: Vec<(usize, usize)> = (0..d).flat_map(|j| (j + 1..d).map(move |k| (j, k))).collect();
        for &(j, k) in &pairs {
            let mut m = CMatrix::zeros(d, d);
            m[(j, k)] = c(s, 0.0);
            m[(k, j)] = c(s, 0.0);
            ops.push(m);
        }
        for &(j, k) in &pairs {
            let mut m = CMatrix::zeros(d, d);
            m[(j, k)] = c(0.0, -s);
            m[(k, j)] = c(0.0, s);
            ops.push(m);
        }
        for l in 1..d {
            let norm = 1.0 / ((l * (l + 1)) as f64).sqrt();
            let mut m = CMatrix::zeros(d, d);
            for j in 0..l {
                m[(j, j)] = c(norm, 0.0);
            }
            m[(l, l)] = c(-(l as f64) * norm, 0.0);
            ops.push(m);
        }
        HermitianOperatorBasis { operators: ops }
    }

    /// A second, unrelated orthonormal basis: `E_jj`, then `(E_jk + E_kj)/√2` and
    /// `(−iE_jk + iE_kj)/√2` for each `j < k`.
    pub fn matrix_units(dim: usize) -> Self {
        let d = dim;
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let mut ops = Vec::with_capacity(d * d);
        for j in 0..d {
            let mut m = CMatrix::zeros(d, d);
            m[(j, j)] = c(1.0, 0.0);
            ops.push(m);
        }
        for j in 0..d {
            for k in j + 1..d {
                let mut m = CMatrix::zeros(d, d);
                m[(j, k)] = c(s, 0.0);
                m[(k, j)] = c(s, 0.0);
                ops.push(m);
                let mut m = CMatrix::zeros(d, d);
                m[(j, k)] = c(0.0, -s);
                m[(k, j)] = c(0.0, s);
                ops.push(m);
            }
        }
        HermitianOperatorBasis { operators: ops }
    }

    /// Validates a caller-supplied list: `d²` Hermitian `d×d` matrices, orthonormal
    /// under `tr(XY)` (orthonormality of `d²` elements implies completeness).
    pub fn from_operators(operators: Vec<CMatrix>) -> Result<Self> {
        let d = operators.first().map_or(0, |m| m.nrows());
        if d == 0 || operators.len() != d * d || operators.iter().any(|m| m.shape() != (d, d)) {
            return Err(DiscordError::dims(
                "d² operators of shape d×d",
                format!("{} operators", operators.len()),
            ));
        }
        for m in &operators {
            let deviation = crate::linalg::hermiticity_defect(m);
            if deviation > ORTHONORMALITY_TOL {
                return Err(DiscordError::NonHermitian { deviation });
            }
        }
        let basis = HermitianOperatorBasis { operators };
        let gram = basis.gram();
        let defect = (gram - DMatrix::identity(d * d, d * d)).abs().max();
        if defect > ORTHONORMALITY_TOL {
            return Err(DiscordError::Domain(format!(
                "operators are not trace-orthonormal (defect {defect:e})"
            )));
        }
        Ok(basis)
    }

    pub fn dim(&self) -> usize {
        self.operators[0].nrows()
    }

    pub fn len(&self) -> usize {
        self.operators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.operators.is_empty()
    }

    pub fn operators(&self) -> &[CMatrix] {
        &self.operators
    }

    /// `tr(X_i X_j)`, real part.
    pub fn gram(&self) -> DMatrix<f64> {
        let n = self.len();
        DMatrix::from_fn(n, n, |i, j| trace_product(&self.operators[i], &self.operators[j]).re)
    }

    /// Coefficients `tr(H X_i)` of a Hermitian matrix.
    pub fn coefficients(&self, h: &CMatrix) -> Vec<f64> {
        self.operators.iter().map(|x| trace_product(h, x).re).collect()
    }

    pub fn reconstruct(&self, coefficients: &[f64]) -> CMatrix {
        let d = self.dim();
        self.operators
            .iter()
            .zip(coefficients)
            .fold(CMatrix::zeros(d, d), |acc, (x, &w)| acc + x * c(w, 0.0))
    }
}

/// The default basis: [`HermitianOperatorBasis::gell_mann`].
pub fn hermitian_operator_basis(dim: usize) -> HermitianOperatorBasis {
    HermitianOperatorBasis::gell_mann(dim)
}

/// `tr(AB)` without forming the product.
pub(crate) fn trace_product(a: &CMatrix, b: &CMatrix) -> num_complex::Complex64 {
    let n = a.nrows();
    let mut acc = ZERO;
    for i in 0..n {
        for j in 0..n {
            acc += a[(i, j)] * b[(j, i)];
        }
    }
    acc
}
