//! Von Neumann entropy, mutual information and entropic discord (all in bits).
//!
//! The discords are infima over measurements found by the seeded multistart search, so
//! every reported value is an upper estimate of the true discord, never a certificate.

use nalgebra::Vector3;

use crate::error::{DiscordError, Result};
use crate::linalg::{self, shannon_bits, CMatrix};
use crate::measurement::{
    conditional_blocks, dephase_one_sided, dephase_two_sided, diagonal_distribution, product_diagonal,
    quadratic_form, OptimalMeasurement, OrthonormalBasis, ProductMeasurement,
};
use crate::optimizer::{
    maximize_over_basis, maximize_over_product_bases, sphere_grid, warm_starts, BasisObjective,
    OptimizationResult, OptimizerConfig, ProductObjective,
};
use crate::qstate::{to_bloch, BipartiteState, DensityMatrix, ProbabilityTable, Subsystem};

/// Eigenvalues at or below this contribute nothing (`0 log 0 = 0`).
pub const EIGENVALUE_FLOOR: f64 = 1e-14;

/// `S(ρ) = −tr ρ log₂ ρ`.
pub fn entropy(rho: &DensityMatrix) -> f64 {
    spectrum_entropy(rho.matrix())
}

fn spectrum_entropy(m: &CMatrix) -> f64 {
    // Negative eigenvalues inside the PSD tolerance are treated as zero.
    shannon_bits(linalg::hermitian_eigenvalues(m), EIGENVALUE_FLOOR)
}

/// `S(ρ^A) + S(ρ^B) − S(ρ^AB)`.
pub fn mutual_information(state: &BipartiteState) -> f64 {
    entropy(&state.partial_trace(Subsystem::A)) + entropy(&state.partial_trace(Subsystem::B))
        - entropy(state.rho())
}

/// Mutual information of a joint distribution laid out A-major with `nb` columns.
fn classical_mi(p: &[f64], na: usize, nb: usize) -> f64 {
    let pa = (0..na).map(|a| (0..nb).map(|b| p[a * nb + b]).sum::<f64>());
    let pb = (0..nb).map(|b| (0..na).map(|a| p[a * nb + b]).sum::<f64>());
    shannon_bits(pa, EIGENVALUE_FLOOR) + shannon_bits(pb, EIGENVALUE_FLOOR)
        - shannon_bits(p.iter().copied(), EIGENVALUE_FLOOR)
}

/// Classical mutual information of a probability table.
pub fn table_mutual_information(p: &ProbabilityTable) -> f64 {
    let (na, nb) = p.shape();
    let flat: Vec<f64> = (0..na * nb).map(|k| p[(k / nb, k % nb)]).collect();
    classical_mi(&flat, na, nb)
}

/// Loss of mutual information under the two-sided measurement `m`.
pub fn measured_loss_two_sided(state: &BipartiteState, m: &ProductMeasurement) -> Result<f64> {
    let p = diagonal_distribution(state, m)?;
    Ok(mutual_information(state) - table_mutual_information(&p))
}

/// The two-sided loss split at the intermediate A-dephased state `ρ̃₁`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LossSplit {
    /// `I(ρ) − I(ρ̃₁)`.
    pub loss_a: f64,
    /// `I(ρ̃₁) − I(ρ̃)`.
    pub loss_b: f64,
}

impl LossSplit {
    pub fn total(&self) -> f64 {
        self.loss_a + self.loss_b
    }
}

pub fn loss_split(state: &BipartiteState, m: &ProductMeasurement) -> Result<LossSplit> {
    if m.dims() != state.dims() {
        return Err(DiscordError::dims(format!("{:?}", state.dims()), format!("{:?}", m.dims())));
    }
    let first = dephase_one_sided(state, &m.basis_a, Subsystem::A)?;
    let both = dephase_two_sided(state, m)?;
    let (i0, i1, i2) = (mutual_information(state), mutual_information(&first), mutual_information(&both));
    Ok(LossSplit {
        loss_a: i0 - i1,
        loss_b: i1 - i2,
    })
}

/// A discord estimate with the measurement that attains it.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscordValue {
    pub value: f64,
    pub optimal_measurement: OptimalMeasurement,
    pub optimizer_report: OptimizationResult,
}

/// Retained classical mutual information `I(p_αβ)` as a function of both bases.
struct RetainedInformation<'s> {
    rho: &'s CMatrix,
    na: usize,
    nb: usize,
}

impl ProductObjective for RetainedInformation<'_> {
    fn dims(&self) -> (usize, usize) {
        (self.na, self.nb)
    }

    fn value(&self, ua: &CMatrix, ub: &CMatrix) -> f64 {
        classical_mi(&product_diagonal(self.rho, self.na, self.nb, ua, ub), self.na, self.nb)
    }

    fn partial<'a>(&'a self, free: Subsystem, fixed: &CMatrix) -> Box<dyn Fn(&CMatrix) -> f64 + 'a> {
        let (na, nb) = (self.na, self.nb);
        let blocks = conditional_blocks(self.rho, na, nb, free.other(), fixed);
        Box::new(move |u| {
            let mut p = vec![0.0; na * nb];
            for (j, m) in blocks.iter().enumerate() {
                for i in 0..u.ncols() {
                    let q = quadratic_form(m, u, i);
                    match free {
                        Subsystem::A => p[i * nb + j] = q,
                        Subsystem::B => p[j * nb + i] = q,
                    }
                }
            }
            classical_mi(&p, na, nb)
        })
    }
}

/// `H(p_α) − S(ρ̃)` for a measurement on `side`, where `ρ̃` is the one-sided dephased state.
struct OneSidedGain<'s> {
    rho: &'s CMatrix,
    na: usize,
    nb: usize,
    side: Subsystem,
}

impl BasisObjective for OneSidedGain<'_> {
    fn dim(&self) -> usize {
        match self.side {
            Subsystem::A => self.na,
            Subsystem::B => self.nb,
        }
    }

    fn value(&self, u: &CMatrix) -> f64 {
        let blocks = conditional_blocks(self.rho, self.na, self.nb, self.side, u);
        let weights = blocks.iter().map(|b| linalg::trace(b).re);
        let joint: f64 = blocks.iter().map(spectrum_entropy).sum();
        shannon_bits(weights, EIGENVALUE_FLOOR) - joint
    }
}

/// Two-sided entropic discord `I(ρ) − max I(p_αβ)`, searched with the default warm starts.
pub fn discord_two_sided(state: &BipartiteState, cfg: &OptimizerConfig) -> Result<DiscordValue> {
    discord_two_sided_with(state, cfg, &warm_starts::generic(state))
}

/// As [`discord_two_sided`] with caller-chosen warm starts.
pub fn discord_two_sided_with(
    state: &BipartiteState,
    cfg: &OptimizerConfig,
    warm: &[ProductMeasurement],
) -> Result<DiscordValue> {
    let (na, nb) = state.dims();
    let objective = RetainedInformation { rho: state.matrix(), na, nb };
    let search = maximize_over_product_bases(&objective, cfg, warm)?;
    Ok(DiscordValue {
        value: mutual_information(state) - search.report.best_value,
        optimal_measurement: OptimalMeasurement::TwoSided(search.measurement),
        optimizer_report: search.report,
    })
}

/// One-sided entropic discord `S(ρ^X) − S(ρ) + min [S(ρ̃) − S(ρ̃^X)]` for `X = side`.
pub fn discord_one_sided(state: &BipartiteState, side: Subsystem, cfg: &OptimizerConfig) -> Result<DiscordValue> {
    discord_one_sided_with(state, side, cfg, &warm_starts::generic_one_sided(state, side))
}

pub fn discord_one_sided_with(
    state: &BipartiteState,
    side: Subsystem,
    cfg: &OptimizerConfig,
    warm: &[OrthonormalBasis],
) -> Result<DiscordValue> {
    let (na, nb) = state.dims();
    let objective = OneSidedGain { rho: state.matrix(), na, nb, side };
    let search = maximize_over_basis(&objective, cfg, warm)?;
    let value = entropy(&state.partial_trace(side)) - entropy(state.rho()) - search.report.best_value;
    Ok(DiscordValue {
        value,
        optimal_measurement: OptimalMeasurement::OneSided { side, basis: search.basis },
        optimizer_report: search.report,
    })
}

fn require_qubits(state: &BipartiteState) -> Result<()> {
    if state.dims() != (2, 2) {
        return Err(DiscordError::dims("(2, 2)", format!("{:?}", state.dims())));
    }
    Ok(())
}

/// Brute-force two-qubit two-sided discord: the retained information is maximised over
/// a latitude–longitude grid on both Bloch spheres, using
/// `p_st = ¼(1 + s a·x + t b·y + st aᵗTb)`. Cost `O(r⁴)`.
pub fn two_sided_grid_oracle(state: &BipartiteState, resolution: usize) -> Result<f64> {
    require_qubits(state)?;
    let bloch = to_bloch(state)?;
    let grid = sphere_grid(resolution);
    let tb: Vec<Vector3<f64>> = grid.iter().map(|b| bloch.t * b).collect();
    let by: Vec<f64> = grid.iter().map(|b| b.dot(&bloch.y)).collect();
    let mut best = f64::NEG_INFINITY;
    for a in &grid {
        let ax = a.dot(&bloch.x);
        for (j, tbj) in tb.iter().enumerate() {
            let atb = a.dot(tbj);
            let p = [
                0.25 * (1.0 + ax + by[j] + atb),
                0.25 * (1.0 + ax - by[j] - atb),
                0.25 * (1.0 - ax + by[j] - atb),
                0.25 * (1.0 - ax - by[j] + atb),
            ];
            best = best.max(classical_mi(&p, 2, 2));
        }
    }
    Ok(mutual_information(state) - best)
}

/// Brute-force two-qubit one-sided discord over a grid on the measured side's Bloch
/// sphere. The conditional blocks are `¼[(1 + s a·x) I + (y + s Tᵗa)·σ]`.
pub fn one_sided_grid_oracle(state: &BipartiteState, side: Subsystem, resolution: usize) -> Result<f64> {
    require_qubits(state)?;
    let bloch = to_bloch(state)?;
    let (x, y, t) = match side {
        Subsystem::A => (bloch.x, bloch.y, bloch.t.transpose()),
        Subsystem::B => (bloch.y, bloch.x, bloch.t),
    };
    let mut best = f64::NEG_INFINITY;
    for a in sphere_grid(resolution) {
        let ax = a.dot(&x);
        let ta = t * a;
        let mut weights = [0.0; 2];
        let mut joint = 0.0;
        for (k, s) in [1.0, -1.0].into_iter().enumerate() {
            let w = 0.25 * (1.0 + s * ax);
            let r = 0.25 * (y + ta * s).norm();
            weights[k] = 2.0 * w;
            joint += shannon_bits([w + r, w - r], EIGENVALUE_FLOOR);
        }
        best = best.max(shannon_bits(weights, EIGENVALUE_FLOOR) - joint);
    }
    Ok(entropy(&state.partial_trace(side)) - entropy(state.rho()) - best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qstate::{bell_phi_plus, classical_classical, random_state, tensor};

    fn quick() -> OptimizerConfig {
        OptimizerConfig::default().with_restarts(8)
    }

    #[test]
    fn entropy_examples() {
        assert!((entropy(&DensityMatrix::maximally_mixed(2)) - 1.0).abs() < 1e-12);
        assert!(entropy(&DensityMatrix::random(4, 1, 3).unwrap()).abs() < 1e-9);
        let d = DensityMatrix::diagonal(&[0.75, 0.25]).unwrap();
        let direct = -(0.75f64 * 0.75f64.log2() + 0.25 * 0.25f64.log2());
        assert!((entropy(&d) - direct).abs() < 1e-12);
        assert!((entropy(&d) - 0.811278).abs() < 1e-6);
    }

    #[test]
    fn mutual_information_examples() {
        assert!((mutual_information(&bell_phi_plus()) - 2.0).abs() < 1e-12);
        let cc = classical_classical(
            &ProbabilityTable::from_row_slice(2, 2, &[0.5, 0.0, 0.0, 0.5]),
            &crate::measurement::computational_basis(2),
            &crate::measurement::computational_basis(2),
        )
        .unwrap();
        assert!((mutual_information(&cc) - 1.0).abs() < 1e-12);
        let a = DensityMatrix::random(2, 2, 1).unwrap();
        let b = DensityMatrix::random(3, 2, 2).unwrap();
        assert!(mutual_information(&tensor(&a, &b)).abs() < 1e-9);
    }

    #[test]
    fn loss_examples() {
        let bell = bell_phi_plus();
        let comp = ProductMeasurement::computational(2, 2);
        assert!((measured_loss_two_sided(&bell, &comp).unwrap() - 1.0).abs() < 1e-12);
        let split = loss_split(&bell, &comp).unwrap();
        assert!((split.loss_a - 1.0).abs() < 1e-12 && split.loss_b.abs() < 1e-12);

        let ua = OrthonormalBasis::random(2, 4);
        let ub = OrthonormalBasis::random(3, 5);
        let p = ProbabilityTable::from_row_slice(2, 3, &[0.1, 0.2, 0.05, 0.3, 0.15, 0.2]);
        let cc = classical_classical(&p, &ua, &ub).unwrap();
        let own = ProductMeasurement::new(ua, ub);
        assert!(measured_loss_two_sided(&cc, &own).unwrap().abs() < 1e-9);
        let s = loss_split(&cc, &own).unwrap();
        assert!(s.loss_a.abs() < 1e-9 && s.loss_b.abs() < 1e-9);

        let prod = tensor(&DensityMatrix::random(2, 2, 8).unwrap(), &DensityMatrix::random(2, 2, 9).unwrap());
        let any = ProductMeasurement::new(OrthonormalBasis::random(2, 1), OrthonormalBasis::random(2, 2));
        assert!(measured_loss_two_sided(&prod, &any).unwrap().abs() < 1e-9);
        assert!(loss_split(&bell, &ProductMeasurement::computational(2, 3)).is_err());
    }

    #[test]
    fn loss_split_sums_and_is_nonnegative() {
        for seed in 0..60 {
            let (na, nb) = [(2, 2), (2, 3), (3, 3)][seed as usize % 3];
            let s = random_state(na, nb, 1 + seed as usize % (na * nb), seed).unwrap();
            let m = ProductMeasurement::new(OrthonormalBasis::random(na, 1000 + seed), OrthonormalBasis::random(nb, 2000 + seed));
            let total = measured_loss_two_sided(&s, &m).unwrap();
            let split = loss_split(&s, &m).unwrap();
            assert!(total >= -1e-9);
            assert!(split.loss_a >= -1e-9 && split.loss_b >= -1e-9);
            assert!((split.total() - total).abs() < 1e-9);
        }
    }

    /// The ensemble form `I(ρ) − [S(ρ^B) − Σ p_α S(ρ_α^B)]` and the entropy-difference form
    /// agree basis by basis.
    #[test]
    fn ensemble_form_matches_entropy_form() {
        for seed in 0..20 {
            let s = random_state(2, 3, 3, 50 + seed).unwrap();
            let basis = OrthonormalBasis::random(2, 70 + seed);
            let blocks = conditional_blocks(s.matrix(), 2, 3, Subsystem::A, basis.unitary());
            let mut holevo = entropy(&s.partial_trace(Subsystem::B));
            for b in &blocks {
                let p = linalg::trace(b).re;
                holevo -= p * spectrum_entropy(&(b / num_complex::Complex64::new(p, 0.0)));
            }
            let ensemble = mutual_information(&s) - holevo;

            let dephased = dephase_one_sided(&s, &basis, Subsystem::A).unwrap();
            let difference = entropy(&s.partial_trace(Subsystem::A)) - entropy(s.rho()) + entropy(dephased.rho())
                - entropy(&dephased.partial_trace(Subsystem::A));
            assert!((ensemble - difference).abs() < 1e-10, "{ensemble} vs {difference}");
        }
    }

    #[test]
    fn concavity_and_continuity() {
        for seed in 0..30 {
            let r = DensityMatrix::random(3, 2, seed).unwrap();
            let s = DensityMatrix::random(3, 3, 100 + seed).unwrap();
            let mix = DensityMatrix::new((r.matrix() + s.matrix()) * num_complex::Complex64::new(0.5, 0.0)).unwrap();
            assert!(entropy(&mix) >= 0.5 * entropy(&r) + 0.5 * entropy(&s) - 1e-9);
        }
        let pure = DensityMatrix::random(4, 1, 7).unwrap();
        let bumped = (pure.matrix() * num_complex::Complex64::new(1.0 - 1e-13, 0.0))
            + CMatrix::identity(4, 4) * num_complex::Complex64::new(1e-13 / 4.0, 0.0);
        let bumped = DensityMatrix::new(bumped).unwrap();
        assert!((entropy(&bumped) - entropy(&pure)).abs() < 1e-9);
    }

    #[test]
    fn discord_examples() {
        let bell = bell_phi_plus();
        assert!((discord_two_sided(&bell, &quick()).unwrap().value - 1.0).abs() < 1e-4);
        assert!((discord_one_sided(&bell, Subsystem::A, &quick()).unwrap().value - 1.0).abs() < 1e-4);
        assert!((two_sided_grid_oracle(&bell, 12).unwrap() - 1.0).abs() < 1e-12);

        let prod = tensor(&DensityMatrix::random(2, 2, 8).unwrap(), &DensityMatrix::random(3, 3, 9).unwrap());
        assert!(discord_two_sided(&prod, &quick()).unwrap().value.abs() < 1e-6);
        assert!(discord_one_sided(&prod, Subsystem::A, &quick()).unwrap().value.abs() < 1e-6);

        let p = ProbabilityTable::from_row_slice(2, 2, &[0.4, 0.1, 0.2, 0.3]);
        let cc = classical_classical(&p, &OrthonormalBasis::random(2, 1), &OrthonormalBasis::random(2, 2)).unwrap();
        assert!(discord_two_sided(&cc, &quick()).unwrap().value.abs() < 1e-6);
    }

    #[test]
    fn two_sided_dominates_one_sided() {
        let cfg = quick();
        for seed in 0..4 {
            let s = random_state(2, 2, 2, 300 + seed).unwrap();
            let two = discord_two_sided(&s, &cfg).unwrap().value;
            for side in [Subsystem::A, Subsystem::B] {
                let one = discord_one_sided(&s, side, &cfg).unwrap().value;
                assert!(two >= one - 1e-6, "{two} < {one}");
                let grid = one_sided_grid_oracle(&s, side, 40).unwrap();
                assert!(one <= grid + 1e-9, "optimizer {one} worse than grid {grid}");
                assert!(grid - one < 1e-2);
            }
            let grid = two_sided_grid_oracle(&s, 16).unwrap();
            assert!(two <= grid + 1e-9);
        }
    }
}
