use nalgebra::{Matrix3, Vector3};

use super::{make_bipartite, BipartiteState};
use crate::error::{DiscordError, Result};
use crate::linalg::{c, CMatrix, I, ONE};

/// Residue above which an extracted Bloch coefficient counts as genuinely complex.
const IMAGINARY_RESIDUE_TOL: f64 = 1e-10;

/// Pauli matrix `σ_k` for `k ∈ {1, 2, 3}`; `k = 0` gives the identity.
pub fn pauli(k: usize) -> CMatrix {
    let z = c(0.0, 0.0);
    match k {
        0 => CMatrix::from_row_slice(2, 2, &[ONE, z, z, ONE]),
        1 => CMatrix::from_row_slice(2, 2, &[z, ONE, ONE, z]),
        2 => CMatrix::from_row_slice(2, 2, &[z, -I, I, z]),
        3 => CMatrix::from_row_slice(2, 2, &[ONE, z, z, -ONE]),
        _ => panic!("pauli index {k} out of range"),
    }
}

/// Two-qubit state data: `ρ = ¼(I + Σ x_i σ_i⊗I + Σ y_j I⊗σ_j + Σ T_ij σ_i⊗σ_j)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoQubitBloch {
    pub x: Vector3<f64>,
    pub y: Vector3<f64>,
    pub t: Matrix3<f64>,
}

impl TwoQubitBloch {
    pub fn new(x: Vector3<f64>, y: Vector3<f64>, t: Matrix3<f64>) -> Self {
        TwoQubitBloch { x, y, t }
    }

    /// Reconstructs the state, checking positivity.
    pub fn to_state(&self) -> Result<BipartiteState> {
        from_bloch(self)
    }
}

pub fn from_bloch(b: &TwoQubitBloch) -> Result<BipartiteState> {
    // ‖x‖ > 1 or ‖y‖ > 1 makes a marginal, hence ρ, indefinite; the PSD check covers it.
    let id = pauli(0);
    let mut rho = CMatrix::identity(4, 4);
    for i in 1..=3 {
        let si = pauli(i);
        rho += si.kronecker(&id) * c(b.x[i - 1], 0.0);
        rho += id.kronecker(&si) * c(b.y[i - 1], 0.0);
        for j in 1..=3 {
            rho += si.kronecker(&pauli(j)) * c(b.t[(i - 1, j - 1)], 0.0);
        }
    }
    make_bipartite(rho * c(0.25, 0.0), 2, 2)
}

pub fn to_bloch(state: &BipartiteState) -> Result<TwoQubitBloch> {
    if state.dims() != (2, 2) {
        return Err(DiscordError::dims(
            "(2, 2)",
            format!("({}, {})", state.dim_a(), state.dim_b()),
        ));
    }
    let rho = state.matrix();
    let expect = |op: CMatrix| -> Result<f64> {
        let v = (rho * op).trace();
        if v.im.abs() > IMAGINARY_RESIDUE_TOL {
            return Err(DiscordError::NumericalResidue { residue: v.im.abs() });
        }
        Ok(v.re)
    };
    let id = pauli(0);
    let mut x = Vector3::zeros();
    let mut y = Vector3::zeros();
    let mut t = Matrix3::zeros();
    for i in 1..=3 {
        x[i - 1] = expect(pauli(i).kronecker(&id))?;
        y[i - 1] = expect(id.kronecker(&pauli(i)))?;
        for j in 1..=3 {
            t[(i - 1, j - 1)] = expect(pauli(i).kronecker(&pauli(j)))?;
        }
    }
    Ok(TwoQubitBloch { x, y, t })
}
