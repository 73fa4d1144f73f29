use nalgebra::DVector;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::{make_bipartite, BipartiteState, DensityMatrix, ProbabilityTable};
use crate::error::{DiscordError, Result};
use crate::linalg::{c, CMatrix};
use crate::measurement::OrthonormalBasis;

/// Swap operator `F = Σ_kl |k⟩⟨l| ⊗ |l⟩⟨k|` on `C^m ⊗ C^m`.
pub fn swap_operator(m: usize) -> CMatrix {
    let mut f = CMatrix::zeros(m * m, m * m);
    for k in 0..m {
        for l in 0..m {
            f[(k * m + l, l * m + k)] = c(1.0, 0.0);
        }
    }
    f
}

/// Projector onto `(1/√m) Σ_k |kk⟩`, i.e. `M = (1/m) Σ_kl |k⟩⟨l| ⊗ |k⟩⟨l|`.
pub fn maximally_entangled_projector(m: usize) -> CMatrix {
    let mut p = CMatrix::zeros(m * m, m * m);
    let w = c(1.0 / m as f64, 0.0);
    for k in 0..m {
        for l in 0..m {
            p[(k * m + k, l * m + l)] = w;
        }
    }
    p
}

/// `m × m` Werner state `((m-x) I + (mx-1) F) / (m³ - m)`, `x ∈ [-1, 1]`.
///
/// `x = 1/m` is the maximally mixed state; `x = -1` at `m = 2` is the singlet.
pub fn werner(m: usize, x: f64) -> Result<BipartiteState> {
    if m < 2 {
        return Err(DiscordError::Domain(format!("werner: m = {m} < 2")));
    }
    if !(-1.0..=1.0).contains(&x) {
        return Err(DiscordError::Domain(format!("werner: x = {x} outside [-1, 1]")));
    }
    let mf = m as f64;
    let norm = mf * mf * mf - mf;
    let a = (mf - x) / norm;
    let b = (mf * x - 1.0) / norm;
    let rho = CMatrix::identity(m * m, m * m) * c(a, 0.0) + swap_operator(m) * c(b, 0.0);
    make_bipartite(rho, m, m)
}

/// `m × m` isotropic state `((1-x) I + (m²x-1) M) / (m² - 1)`, `x ∈ [0, 1]`.
pub fn isotropic(m: usize, x: f64) -> Result<BipartiteState> {
    if m < 2 {
        return Err(DiscordError::Domain(format!("isotropic: m = {m} < 2")));
    }
    if !(0.0..=1.0).contains(&x) {
        return Err(DiscordError::Domain(format!("isotropic: x = {x} outside [0, 1]")));
    }
    let m2 = (m * m) as f64;
    let a = (1.0 - x) / (m2 - 1.0);
    let b = (m2 * x - 1.0) / (m2 - 1.0);
    let rho =
        CMatrix::identity(m * m, m * m) * c(a, 0.0) + maximally_entangled_projector(m) * c(b, 0.0);
    make_bipartite(rho, m, m)
}

/// `|ψ⟩⟨ψ|` for a (not necessarily normalised) nonzero vector.
pub fn pure_state(psi: &DVector<Complex64>, dim_a: usize, dim_b: usize) -> Result<BipartiteState> {
    let norm = psi.norm();
    if norm == 0.0 {
        return Err(DiscordError::Domain("pure_state: zero vector".into()));
    }
    let v = psi / c(norm, 0.0);
    make_bipartite(&v * v.adjoint(), dim_a, dim_b)
}

/// `|Φ+⟩⟨Φ+|` with `|Φ+⟩ = (|00⟩ + |11⟩)/√2`.
pub fn bell_phi_plus() -> BipartiteState {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let psi = DVector::from_vec(vec![c(h, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(h, 0.0)]);
    pure_state(&psi, 2, 2).expect("Bell projector is a valid state")
}

/// `Σ_αβ p_αβ |α⟩⟨α| ⊗ |β⟩⟨β|`: the states with vanishing two-sided discord.
pub fn classical_classical(
    p: &ProbabilityTable,
    basis_a: &OrthonormalBasis,
    basis_b: &OrthonormalBasis,
) -> Result<BipartiteState> {
    let (na, nb) = (basis_a.dim(), basis_b.dim());
    if p.nrows() != na || p.ncols() != nb {
        return Err(DiscordError::dims(
            format!("{na}x{nb} probability table"),
            format!("{}x{}", p.nrows(), p.ncols()),
        ));
    }
    if let Some(bad) = p.iter().find(|v| !(v.is_finite() && **v >= 0.0)) {
        return Err(DiscordError::InvalidDistribution(format!(
            "entry {bad} is not a nonnegative number"
        )));
    }
    let total: f64 = p.iter().sum();
    if (total - 1.0).abs() > super::TRACE_TOL {
        return Err(DiscordError::InvalidDistribution(format!(
            "entries sum to {total}, not 1"
        )));
    }
    let v = basis_a.unitary().kronecker(basis_b.unitary());
    let diag = DVector::from_iterator(
        na * nb,
        (0..na).flat_map(|a| (0..nb).map(move |b| (a, b))).map(|(a, b)| c(p[(a, b)], 0.0)),
    );
    let rho = &v * CMatrix::from_diagonal(&diag) * v.adjoint();
    make_bipartite(rho, na, nb)
}

/// Seeded Ginibre sample `G G† / tr(G G†)` with `G` a complex Gaussian
/// `(n_A n_B) × rank` matrix. Bit-identical for equal arguments.
pub fn random_state(dim_a: usize, dim_b: usize, rank: usize, seed: u64) -> Result<BipartiteState> {
    let n = dim_a * dim_b;
    if n == 0 || rank == 0 || rank > n {
        return Err(DiscordError::Domain(format!(
            "random_state: rank {rank} outside [1, {n}]"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = CMatrix::from_fn(n, rank, |_, _| {
        let re: f64 = StandardNormal.sample(&mut rng);
        let im: f64 = StandardNormal.sample(&mut rng);
        c(re, im)
    });
    let gg = &g * g.adjoint();
    let tr: f64 = gg.diagonal().iter().map(|z| z.re).sum();
    let mut rho = gg / c(tr, 0.0);
    // G G† is Hermitian in exact arithmetic; pin the diagonal to real values.
    for i in 0..n {
        rho[(i, i)].im = 0.0;
    }
    make_bipartite(rho, dim_a, dim_b)
}

impl DensityMatrix {
    /// Seeded random density matrix on a single system.
    pub fn random(dim: usize, rank: usize, seed: u64) -> Result<DensityMatrix> {
        Ok(random_state(dim, 1, rank, seed)?.rho().clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measurement::computational_basis;
    use crate::qstate::{partial_trace, Subsystem};
    use approx::assert_abs_diff_eq;

    fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
        (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    #[test]
    fn werner_special_points() {
        let w = werner(2, 0.5).unwrap();
        assert!(max_abs_diff(w.matrix(), DensityMatrix::maximally_mixed(4).matrix()) < 1e-15);

        // a = 1/2, b = -1/2: (I - F)/2 is the singlet projector.
        let w = werner(2, -1.0).unwrap();
        let expected = (CMatrix::identity(4, 4) - swap_operator(2)) * c(0.5, 0.0);
        assert!(max_abs_diff(w.matrix(), &expected) < 1e-15);
    }

    #[test]
    fn swap_operator_identities() {
        for m in 2..=4 {
            let f = swap_operator(m);
            assert!(max_abs_diff(&(&f * &f), &CMatrix::identity(m * m, m * m)) < 1e-15);
            assert_abs_diff_eq!(f.trace().re, m as f64, epsilon = 1e-15);
        }
    }

    #[test]
    fn entangled_projector_identities() {
        for m in 2..=4 {
            let p = maximally_entangled_projector(m);
            assert!(max_abs_diff(&(&p * &p), &p) < 1e-15);
            assert_abs_diff_eq!(p.trace().re, 1.0, epsilon = 1e-15);
        }
    }

    #[test]
    fn isotropic_special_points() {
        let s = isotropic(2, 0.25).unwrap();
        assert!(max_abs_diff(s.matrix(), DensityMatrix::maximally_mixed(4).matrix()) < 1e-15);
        let s = isotropic(2, 1.0).unwrap();
        assert!(max_abs_diff(s.matrix(), bell_phi_plus().matrix()) < 1e-15);
    }

    #[test]
    fn families_are_maximally_mixed_at_threshold() {
        for m in 2..=4 {
            let mm = DensityMatrix::maximally_mixed(m * m);
            let w = werner(m, 1.0 / m as f64).unwrap();
            assert!(max_abs_diff(w.matrix(), mm.matrix()) < 1e-12);
            let i = isotropic(m, 1.0 / (m * m) as f64).unwrap();
            assert!(max_abs_diff(i.matrix(), mm.matrix()) < 1e-12);
        }
    }

    #[test]
    fn families_validate_across_domain() {
        for m in 2..=4 {
            for k in 0..=20 {
                let x = -1.0 + 2.0 * k as f64 / 20.0;
                werner(m, x).unwrap();
                isotropic(m, k as f64 / 20.0).unwrap();
            }
        }
    }

    #[test]
    fn family_domain_errors() {
        assert!(matches!(werner(2, 1.5), Err(DiscordError::Domain(_))));
        assert!(matches!(werner(1, 0.0), Err(DiscordError::Domain(_))));
        assert!(matches!(isotropic(3, -0.1), Err(DiscordError::Domain(_))));
    }

    #[test]
    fn classical_classical_examples() {
        let (za, zb) = (computational_basis(2), computational_basis(2));
        let uniform = ProbabilityTable::from_element(2, 2, 0.25);
        let s = classical_classical(&uniform, &za, &zb).unwrap();
        assert!(max_abs_diff(s.matrix(), DensityMatrix::maximally_mixed(4).matrix()) < 1e-15);

        let p = ProbabilityTable::from_row_slice(2, 2, &[0.5, 0.0, 0.0, 0.5]);
        let s = classical_classical(&p, &za, &zb).unwrap();
        let expected = DensityMatrix::diagonal(&[0.5, 0.0, 0.0, 0.5]).unwrap();
        assert!(max_abs_diff(s.matrix(), expected.matrix()) < 1e-15);
    }

    #[test]
    fn classical_classical_rejects_bad_tables() {
        let (za, zb) = (computational_basis(2), computational_basis(2));
        let neg = ProbabilityTable::from_row_slice(2, 2, &[0.6, -0.1, 0.25, 0.25]);
        assert!(matches!(
            classical_classical(&neg, &za, &zb),
            Err(DiscordError::InvalidDistribution(_))
        ));
        let short = ProbabilityTable::from_element(2, 2, 0.2);
        assert!(matches!(
            classical_classical(&short, &za, &zb),
            Err(DiscordError::InvalidDistribution(_))
        ));
    }

    #[test]
    fn random_state_contract() {
        let full = random_state(2, 3, 6, 11).unwrap();
        assert_eq!(full.dims(), (2, 3));
        let pure = random_state(3, 3, 1, 4).unwrap();
        assert_abs_diff_eq!(pure.purity(), 1.0, epsilon = 1e-12);
        let again = random_state(2, 3, 6, 11).unwrap();
        assert_eq!(full, again);
        assert!(random_state(2, 2, 5, 0).is_err());
        // Marginals of random states are valid density matrices too.
        DensityMatrix::new(partial_trace(&full, Subsystem::B).into_matrix()).unwrap();
    }
}
