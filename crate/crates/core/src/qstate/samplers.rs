//! Seeded samplers for randomized checks. Each is bit-identical for equal arguments.

use nalgebra::DVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1};

use super::{classical_classical, tensor, BipartiteState, DensityMatrix, ProbabilityTable};
use crate::error::Result;
use crate::linalg::{c, CMatrix};
use crate::measurement::{OrthonormalBasis, ProductMeasurement};

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform (flat Dirichlet) distribution on `n_A × n_B` outcomes.
pub fn random_distribution(dim_a: usize, dim_b: usize, seed: u64) -> ProbabilityTable {
    random_distribution_with(dim_a, dim_b, &mut rng(seed))
}

fn random_distribution_with<R: Rng>(dim_a: usize, dim_b: usize, rng: &mut R) -> ProbabilityTable {
    let w: Vec<f64> = (0..dim_a * dim_b).map(|_| Exp1.sample(rng)).collect();
    let total: f64 = w.iter().sum();
    ProbabilityTable::from_row_slice(dim_a, dim_b, &w.iter().map(|v| v / total).collect::<Vec<_>>())
}

/// Random distribution in a pair of Haar-random bases.
pub fn random_classical_classical(dim_a: usize, dim_b: usize, seed: u64) -> Result<BipartiteState> {
    let mut r = rng(seed);
    let p = random_distribution_with(dim_a, dim_b, &mut r);
    let ua = OrthonormalBasis::random_with(dim_a, &mut r);
    let ub = OrthonormalBasis::random_with(dim_b, &mut r);
    classical_classical(&p, &ua, &ub)
}

/// `ρ_a ⊗ ρ_b` with full-rank random factors.
pub fn random_product_state(dim_a: usize, dim_b: usize, seed: u64) -> Result<BipartiteState> {
    let a = DensityMatrix::random(dim_a, dim_a, seed.wrapping_mul(2))?;
    let b = DensityMatrix::random(dim_b, dim_b, seed.wrapping_mul(2).wrapping_add(1))?;
    Ok(tensor(&a, &b))
}

/// Pair of independent Haar-random bases.
pub fn random_product_measurement(dim_a: usize, dim_b: usize, seed: u64) -> ProductMeasurement {
    let mut r = rng(seed);
    let a = OrthonormalBasis::random_with(dim_a, &mut r);
    let b = OrthonormalBasis::random_with(dim_b, &mut r);
    ProductMeasurement::new(a, b)
}

/// Two-qubit state with maximally mixed marginals: a random mixture of the four Bell
/// states, rotated by random local unitaries.
pub fn random_zero_marginal_qubits(seed: u64) -> Result<BipartiteState> {
    let mut r = rng(seed);
    let w = random_distribution_with(1, 4, &mut r);
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let z = c(0.0, 0.0);
    let bells = [
        [c(h, 0.0), z, z, c(h, 0.0)],
        [c(h, 0.0), z, z, c(-h, 0.0)],
        [z, c(h, 0.0), c(h, 0.0), z],
        [z, c(h, 0.0), c(-h, 0.0), z],
    ];
    let mut rho = CMatrix::zeros(4, 4);
    for (k, b) in bells.iter().enumerate() {
        let psi = DVector::from_row_slice(b);
        rho += (&psi * psi.adjoint()) * c(w[(0, k)], 0.0);
    }
    let local = random_product_measurement(2, 2, r.random()).joint_unitary();
    let rotated = &local * rho * local.adjoint();
    super::make_bipartite(rotated, 2, 2)
}
