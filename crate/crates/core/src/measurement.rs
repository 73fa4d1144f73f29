//! Orthonormal measurement bases and the dephasing channels they induce.
//!
//! A basis is stored as the unitary whose columns are the basis vectors; projectors
//! `Π_α = |α⟩⟨α|` are derived on demand, so the global phase of each column never
//! matters. One-sided dephasing always names its side explicitly: the `Π_α` shorthand
//! for `Π_α ⊗ I_B` is never used in the API.

use nalgebra::{DVector, Vector3};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{DiscordError, Result};
use crate::linalg::{self, c, CMatrix};
use crate::qstate::{BipartiteState, DensityMatrix, ProbabilityTable, Subsystem};

/// Entrywise tolerance on `U†U - I`.
pub const UNITARITY_TOL: f64 = 1e-10;

/// A complete orthonormal basis `{|α⟩}` of one subsystem.
#[derive(Debug, Clone, PartialEq)]
pub struct OrthonormalBasis {
    vectors: CMatrix,
}

impl OrthonormalBasis {
    pub fn from_unitary(u: CMatrix) -> Result<Self> {
        if u.nrows() != u.ncols() || u.nrows() == 0 {
            return Err(DiscordError::dims(
                "non-empty square matrix",
                format!("{}x{}", u.nrows(), u.ncols()),
            ));
        }
        let deviation = linalg::unitarity_defect(&u);
        if deviation > UNITARITY_TOL {
            return Err(DiscordError::NotUnitary { deviation });
        }
        Ok(OrthonormalBasis { vectors: u })
    }

    pub(crate) fn from_unitary_unchecked(u: CMatrix) -> Self {
        debug_assert!(linalg::unitarity_defect(&u) < 1e-8);
        OrthonormalBasis { vectors: u }
    }

    /// Haar-distributed basis from a seeded generator.
    pub fn random(dim: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Self::random_with(dim, &mut rng)
    }

    pub fn random_with<R: rand::Rng + ?Sized>(dim: usize, rng: &mut R) -> Self {
        let g = CMatrix::from_fn(dim, dim, |_, _| {
            let re: f64 = StandardNormal.sample(rng);
            let im: f64 = StandardNormal.sample(rng);
            c(re, im)
        });
        let qr = g.qr();
        let (mut q, r) = (qr.q(), qr.r());
        for k in 0..dim {
            let d = r[(k, k)];
            let phase = if d.norm() > 0.0 { d / c(d.norm(), 0.0) } else { c(1.0, 0.0) };
            for i in 0..dim {
                q[(i, k)] *= phase;
            }
        }
        linalg::reorthonormalize(&mut q);
        OrthonormalBasis { vectors: q }
    }

    pub fn dim(&self) -> usize {
        self.vectors.nrows()
    }

    pub fn unitary(&self) -> &CMatrix {
        &self.vectors
    }

    pub fn vector(&self, k: usize) -> DVector<Complex64> {
        self.vectors.column(k).into_owned()
    }

    pub fn projector(&self, k: usize) -> CMatrix {
        let v = self.vector(k);
        &v * v.adjoint()
    }

    /// Entrywise complex conjugate of every basis vector.
    pub fn conjugate(&self) -> Self {
        OrthonormalBasis {
            vectors: self.vectors.map(|z| z.conj()),
        }
    }
}

/// Eigenbasis of a density matrix, eigenvalues in ascending order.
pub fn eigenbasis(rho: &DensityMatrix) -> OrthonormalBasis {
    let (vals, vecs) = linalg::hermitian_eigen(rho.matrix());
    let mut order: Vec<usize> = (0..vals.len()).collect();
    order.sort_by(|&i, &j| vals[i].total_cmp(&vals[j]));
    let mut u = CMatrix::from_fn(vecs.nrows(), vecs.ncols(), |r, k| vecs[(r, order[k])]);
    linalg::reorthonormalize(&mut u);
    OrthonormalBasis { vectors: u }
}

/// The optimiser's answer: a basis on one side, or a product basis.
#[derive(Debug, Clone, PartialEq)]
pub enum OptimalMeasurement {
    OneSided { side: Subsystem, basis: OrthonormalBasis },
    TwoSided(ProductMeasurement),
}

/// The standard basis `e_0, …, e_{d-1}`.
pub fn computational_basis(dim: usize) -> OrthonormalBasis {
    OrthonormalBasis {
        vectors: CMatrix::identity(dim, dim),
    }
}

/// Qubit basis whose projectors are `(I ± a·σ)/2`; column 0 is the `+a` eigenvector.
pub fn bloch_basis(a: &Vector3<f64>) -> Result<OrthonormalBasis> {
    let norm = a.norm();
    if (norm - 1.0).abs() > 1e-10 {
        return Err(DiscordError::NotUnitVector { norm });
    }
    let a = a / norm;
    // Two algebraically equal forms; pick the one away from its singular pole.
    let (u, v) = if a.z >= 0.0 {
        let s = (2.0 * (1.0 + a.z)).sqrt();
        (c((1.0 + a.z) / s, 0.0), c(a.x / s, a.y / s))
    } else {
        let s = (2.0 * (1.0 - a.z)).sqrt();
        (c(a.x / s, -a.y / s), c((1.0 - a.z) / s, 0.0))
    };
    let m = CMatrix::from_row_slice(2, 2, &[u, -v.conj(), v, u.conj()]);
    Ok(OrthonormalBasis { vectors: m })
}

/// A two-sided projective measurement `{Π_α ⊗ Π_β}`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProductMeasurement {
    pub basis_a: OrthonormalBasis,
    pub basis_b: OrthonormalBasis,
}

impl ProductMeasurement {
    pub fn new(basis_a: OrthonormalBasis, basis_b: OrthonormalBasis) -> Self {
        ProductMeasurement { basis_a, basis_b }
    }

    pub fn computational(dim_a: usize, dim_b: usize) -> Self {
        ProductMeasurement::new(computational_basis(dim_a), computational_basis(dim_b))
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.basis_a.dim(), self.basis_b.dim())
    }

    pub fn basis(&self, side: Subsystem) -> &OrthonormalBasis {
        match side {
            Subsystem::A => &self.basis_a,
            Subsystem::B => &self.basis_b,
        }
    }

    /// `U_A ⊗ U_B`; its columns are the product vectors `|α⟩⊗|β⟩`.
    pub fn joint_unitary(&self) -> CMatrix {
        self.basis_a.unitary().kronecker(self.basis_b.unitary())
    }

    fn check(&self, state: &BipartiteState) -> Result<()> {
        if self.dims() != state.dims() {
            return Err(DiscordError::dims(
                format!("measurement dims {:?}", state.dims()),
                format!("{:?}", self.dims()),
            ));
        }
        Ok(())
    }
}

fn side_unitary(state: &BipartiteState, basis: &OrthonormalBasis, side: Subsystem) -> Result<CMatrix> {
    let (na, nb) = state.dims();
    if basis.dim() != state.dim(side) {
        return Err(DiscordError::dims(
            format!("basis of dimension {} for side {side:?}", state.dim(side)),
            basis.dim(),
        ));
    }
    Ok(match side {
        Subsystem::A => basis.unitary().kronecker(&CMatrix::identity(nb, nb)),
        Subsystem::B => CMatrix::identity(na, na).kronecker(basis.unitary()),
    })
}

/// `Σ_α (Π_α ⊗ I) ρ (Π_α ⊗ I)` for `side = A`, and the mirror image for `side = B`.
pub fn dephase_one_sided(
    state: &BipartiteState,
    basis: &OrthonormalBasis,
    side: Subsystem,
) -> Result<BipartiteState> {
    let (na, nb) = state.dims();
    let v = side_unitary(state, basis, side)?;
    let mut w = v.adjoint() * state.matrix() * &v;
    for r in 0..na * nb {
        for col in 0..na * nb {
            let differs = match side {
                Subsystem::A => r / nb != col / nb,
                Subsystem::B => r % nb != col % nb,
            };
            if differs {
                w[(r, col)] = linalg::ZERO;
            }
        }
    }
    Ok(BipartiteState::from_trusted(&v * w * v.adjoint(), na, nb))
}

/// `Σ_αβ Π_αβ ρ Π_αβ`: diagonal in the product basis.
pub fn dephase_two_sided(state: &BipartiteState, m: &ProductMeasurement) -> Result<BipartiteState> {
    m.check(state)?;
    let (na, nb) = state.dims();
    let v = m.joint_unitary();
    let w = v.adjoint() * state.matrix() * &v;
    let diag = DVector::from_iterator(na * nb, (0..na * nb).map(|k| c(w[(k, k)].re, 0.0)));
    Ok(BipartiteState::from_trusted(
        &v * CMatrix::from_diagonal(&diag) * v.adjoint(),
        na,
        nb,
    ))
}

/// `p_αβ = ⟨αβ|ρ|αβ⟩` as an `n_A × n_B` table.
pub fn diagonal_distribution(state: &BipartiteState, m: &ProductMeasurement) -> Result<ProbabilityTable> {
    m.check(state)?;
    let (na, nb) = state.dims();
    let p = product_diagonal(state.matrix(), na, nb, m.basis_a.unitary(), m.basis_b.unitary());
    Ok(ProbabilityTable::from_row_slice(na, nb, &p))
}

/// `⟨αβ|ρ|αβ⟩` for all `(α, β)`, A-major, without forming `U_A ⊗ U_B`.
pub(crate) fn product_diagonal(rho: &CMatrix, na: usize, nb: usize, ua: &CMatrix, ub: &CMatrix) -> Vec<f64> {
    let blocks = conditional_blocks(rho, na, nb, Subsystem::B, ub);
    let mut p = vec![0.0; na * nb];
    for (beta, m) in blocks.iter().enumerate() {
        for alpha in 0..na {
            p[alpha * nb + beta] = quadratic_form(m, ua, alpha);
        }
    }
    p
}

/// Unnormalised conditional states left on the other side after projecting `side` onto
/// each column of `u`: `(⟨α|⊗I) ρ (|α⟩⊗I)` for side A, `(I⊗⟨β|) ρ (I⊗|β⟩)` for side B.
pub(crate) fn conditional_blocks(
    rho: &CMatrix,
    na: usize,
    nb: usize,
    side: Subsystem,
    u: &CMatrix,
) -> Vec<CMatrix> {
    match side {
        Subsystem::A => (0..na)
            .map(|alpha| {
                CMatrix::from_fn(nb, nb, |j, l| {
                    let mut acc = linalg::ZERO;
                    for i in 0..na {
                        let ui = u[(i, alpha)].conj();
                        for k in 0..na {
                            acc += ui * rho[(i * nb + j, k * nb + l)] * u[(k, alpha)];
                        }
                    }
                    acc
                })
            })
            .collect(),
        Subsystem::B => (0..nb)
            .map(|beta| {
                CMatrix::from_fn(na, na, |i, k| {
                    let mut acc = linalg::ZERO;
                    for j in 0..nb {
                        let uj = u[(j, beta)].conj();
                        for l in 0..nb {
                            acc += uj * rho[(i * nb + j, k * nb + l)] * u[(l, beta)];
                        }
                    }
                    acc
                })
            })
            .collect(),
    }
}

/// `Re ⟨u_k| m |u_k⟩` for column `k` of `u`.
#[inline]
pub(crate) fn quadratic_form(m: &CMatrix, u: &CMatrix, k: usize) -> f64 {
    let n = m.nrows();
    let mut acc = 0.0;
    for i in 0..n {
        let ui = u[(i, k)];
        let mut row = linalg::ZERO;
        for j in 0..n {
            row += m[(i, j)] * u[(j, k)];
        }
        acc += (ui.conj() * row).re;
    }
    acc
}
