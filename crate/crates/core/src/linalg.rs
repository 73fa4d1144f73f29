//! Small dense complex linear-algebra helpers shared by every module.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

pub type CMatrix = DMatrix<Complex64>;

pub(crate) const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub(crate) const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub(crate) const I: Complex64 = Complex64::new(0.0, 1.0);

#[inline]
pub(crate) fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}


/// Largest entrywise `|m_ij - conj(m_ji)|`.
pub(crate) fn hermiticity_defect(m: &CMatrix) -> f64 {
    let n = m.nrows();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

pub(crate) fn trace(m: &CMatrix) -> Complex64 {
    m.diagonal().iter().sum()
}

/// Eigenvalues of a Hermitian matrix in ascending order.
///
/// Only the lower triangle is read by the solver, so callers must pass a matrix
/// that is Hermitian up to round-off.
pub(crate) fn hermitian_eigenvalues(m: &CMatrix) -> Vec<f64> {
    let n = m.nrows();
    match n {
        0 => Vec::new(),
        1 => vec![m[(0, 0)].re],
        2 => {
            let a = m[(0, 0)].re;
            let d = m[(1, 1)].re;
            let b = m[(1, 0)].norm();
            let mean = 0.5 * (a + d);
            let half_gap = (0.25 * (a - d) * (a - d) + b * b).sqrt();
            vec![mean - half_gap, mean + half_gap]
        }
        _ => {
            let mut ev: Vec<f64> = m.clone().symmetric_eigenvalues().iter().copied().collect();
            ev.sort_by(f64::total_cmp);
            ev
        }
    }
}

/// Eigen-decomposition `m = V diag(λ) V†` of a Hermitian matrix.
pub(crate) fn hermitian_eigen(m: &CMatrix) -> (DVector<f64>, CMatrix) {
    let eig = m.clone().symmetric_eigen();
    (eig.eigenvalues, eig.eigenvectors)
}

/// Eigenvalues of a real symmetric matrix, sorted in decreasing order.
pub(crate) fn symmetric_eigenvalues_desc(m: &DMatrix<f64>) -> Vec<f64> {
    let mut ev: Vec<f64> = m.clone().symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(|a, b| b.total_cmp(a));
    ev
}

/// `max |(U†U - I)_ij|`.
pub(crate) fn unitarity_defect(u: &CMatrix) -> f64 {
    let n = u.nrows();
    let g = u.adjoint() * u;
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            let target = if i == j { ONE } else { ZERO };
            worst = worst.max((g[(i, j)] - target).norm());
        }
    }
    worst
}

/// Modified Gram–Schmidt on the columns of `u`; removes accumulated round-off drift.
pub(crate) fn reorthonormalize(u: &mut CMatrix) {
    let n = u.ncols();
    for k in 0..n {
        for j in 0..k {
            let proj: Complex64 = (0..u.nrows()).map(|r| u[(r, j)].conj() * u[(r, k)]).sum();
            for r in 0..u.nrows() {
                let v = u[(r, j)];
                u[(r, k)] -= proj * v;
            }
        }
        let norm = (0..u.nrows()).map(|r| u[(r, k)].norm_sqr()).sum::<f64>().sqrt();
        for r in 0..u.nrows() {
            u[(r, k)] /= norm;
        }
    }
}

/// Shannon entropy in bits of a (possibly unnormalised within round-off) weight list,
/// using the `0 log 0 = 0` convention below `floor`.
pub(crate) fn shannon_bits(weights: impl IntoIterator<Item = f64>, floor: f64) -> f64 {
    let mut h = 0.0;
    for p in weights {
        if p > floor {
            h -= p * p.log2();
        }
    }
    h
}
