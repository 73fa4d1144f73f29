use super::*;
use crate::measurement::{computational_basis, dephase_one_sided, dephase_two_sided};
use crate::qstate::{
    bell_phi_plus, classical_classical, isotropic, pure_state, random_state, tensor, to_bloch, werner,
    DensityMatrix, ProbabilityTable,
};
use nalgebra::DVector;

fn quick() -> OptimizerConfig {
    OptimizerConfig::default().with_restarts(8)
}

fn ket(bits: &[f64]) -> DVector<num_complex::Complex64> {
    DVector::from_iterator(bits.len(), bits.iter().map(|&b| num_complex::Complex64::new(b, 0.0)))
}

#[test]
fn hs_distance_examples() {
    let s = random_state(2, 3, 3, 1).unwrap();
    assert_eq!(hs_distance_sq(&s, &s).unwrap(), 0.0);
    let p00 = pure_state(&ket(&[1.0, 0.0, 0.0, 0.0]), 2, 2).unwrap();
    let p01 = pure_state(&ket(&[0.0, 1.0, 0.0, 0.0]), 2, 2).unwrap();
    assert!((hs_distance_sq(&p00, &p01).unwrap() - 2.0).abs() < 1e-15);
    let mixed = BipartiteState::maximally_mixed(2, 2);
    assert!((hs_distance_sq(&bell_phi_plus(), &mixed).unwrap() - 0.75).abs() < 1e-15);
    assert!((hs_distance_sq(&mixed, &bell_phi_plus()).unwrap() - 0.75).abs() < 1e-15);
    assert!(hs_distance_sq(&s, &mixed).is_err());
}

#[test]
fn correlation_examples() {
    let cd = correlation_matrix(&BipartiteState::maximally_mixed(2, 2)).unwrap();
    let mut expected = DMatrix::zeros(4, 4);
    expected[(0, 0)] = 0.5;
    assert!((&cd.c - expected).abs().max() < 1e-15);

    let cd = correlation_matrix(&bell_phi_plus()).unwrap();
    let expected = DMatrix::from_diagonal(&DVector::from_vec(vec![0.5, 0.5, -0.5, 0.5]));
    assert!((&cd.c - expected).abs().max() < 1e-15);
    assert!((lower_bound_two_sided(&cd) - 0.5).abs() < 1e-12);
    assert!((lower_bound_one_sided(&cd, Subsystem::A) - 0.5).abs() < 1e-12);

    let ra = DensityMatrix::random(2, 2, 3).unwrap();
    let rb = DensityMatrix::random(3, 2, 4).unwrap();
    let cd = correlation_matrix(&tensor(&ra, &rb)).unwrap();
    let ca = DVector::from_vec(hermitian_operator_basis(2).coefficients(ra.matrix()));
    let cb = DVector::from_vec(hermitian_operator_basis(3).coefficients(rb.matrix()));
    assert!((&cd.c - ca * cb.transpose()).abs().max() < 1e-14);

    let pure = tensor(&DensityMatrix::random(2, 1, 5).unwrap(), &DensityMatrix::random(2, 1, 6).unwrap());
    assert!(lower_bound_two_sided(&correlation_matrix(&pure).unwrap()).abs() < 1e-12);
    assert!(lower_bound_two_sided(&correlation_matrix(&BipartiteState::maximally_mixed(2, 2)).unwrap()).abs() < 1e-15);
}

#[test]
fn correlation_invariants() {
    for seed in 0..20 {
        let (na, nb) = [(2, 2), (2, 3), (3, 2), (3, 3)][seed as usize % 4];
        let s = random_state(na, nb, 1 + seed as usize % (na * nb), seed).unwrap();
        let cd = correlation_matrix(&s).unwrap();
        assert!((cd.frobenius_sq() - s.purity()).abs() < 1e-12);
        assert!((cd.reconstruct() - s.matrix()).camax() < 1e-10);
        let units = correlation_matrix_in(
            &s,
            &HermitianOperatorBasis::matrix_units(na),
            &HermitianOperatorBasis::matrix_units(nb),
        )
        .unwrap();
        assert!((units.frobenius_sq() - s.purity()).abs() < 1e-12);
        // Spectral bounds do not depend on the operator basis.
        assert!((lower_bound_two_sided(&cd) - lower_bound_two_sided(&units)).abs() < 1e-12);
        let (a, b) = (lower_bound_one_sided(&cd, Subsystem::A), lower_bound_one_sided(&cd, Subsystem::B));
        if na == nb {
            assert!((a - b).abs() < 1e-12);
        }
        if na < nb {
            assert!(a >= b - 1e-12);
        }
        let two = lower_bound_two_sided(&cd);
        for (side, n) in [(Subsystem::A, na), (Subsystem::B, nb)] {
            if n >= na.min(nb) {
                assert!(lower_bound_one_sided(&cd, side) <= two + 1e-12);
            }
        }
    }
}

#[test]
fn measurement_matrix_examples() {
    let ops = hermitian_operator_basis(2);
    let a = measurement_matrix(&computational_basis(2), &ops).unwrap();
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let expected = DMatrix::from_row_slice(2, 4, &[s, 0.0, 0.0, s, s, 0.0, 0.0, -s]);
    assert!((a - expected).abs().max() < 1e-15);
    for d in 2..=4 {
        let basis = OrthonormalBasis::random(d, d as u64);
        let a = measurement_matrix(&basis, &hermitian_operator_basis(d)).unwrap();
        let gram = &a * a.transpose();
        assert!((gram - DMatrix::identity(d, d)).abs().max() < 1e-12);
    }
    assert!(measurement_matrix(&computational_basis(3), &ops).is_err());
}

#[test]
fn objective27_matches_dephased_purity() {
    let bell = bell_phi_plus();
    let comp = ProductMeasurement::computational(2, 2);
    let cd = correlation_matrix(&bell).unwrap();
    let ops = hermitian_operator_basis(2);
    let a = measurement_matrix(&comp.basis_a, &ops).unwrap();
    assert!((objective27(&cd, &a, &a).unwrap() - 0.5).abs() < 1e-15);
    assert!((dephased_purity(&bell, &comp).unwrap() - 0.5).abs() < 1e-15);

    for seed in 0..30 {
        let (na, nb) = [(2, 2), (2, 3), (3, 3)][seed as usize % 3];
        let s = random_state(na, nb, na * nb, 40 + seed).unwrap();
        let m = ProductMeasurement::new(OrthonormalBasis::random(na, seed), OrthonormalBasis::random(nb, 99 + seed));
        let cd = correlation_matrix(&s).unwrap();
        let a = measurement_matrix(&m.basis_a, &cd.basis_a).unwrap();
        let b = measurement_matrix(&m.basis_b, &cd.basis_b).unwrap();
        let dp = dephased_purity(&s, &m).unwrap();
        assert!((objective27(&cd, &a, &b).unwrap() - dp).abs() < 1e-12);
        assert!((dephase_two_sided(&s, &m).unwrap().purity() - dp).abs() < 1e-12);
        assert!(dp <= s.purity() + 1e-12 && dp >= 1.0 / (na * nb) as f64 - 1e-12);
        assert!(objective27(&cd, &b, &a).is_err() || na == nb);
    }
}

#[test]
fn closed_forms() {
    assert!((werner_geo_closed(2, -1.0).unwrap() - 0.5).abs() < 1e-15);
    assert!((werner_geo_closed(3, 1.0).unwrap() - 4.0 / 96.0).abs() < 1e-15);
    assert!((werner_geo_closed(3, 1.0).unwrap() - 0.0416667).abs() < 1e-7);
    assert!((isotropic_geo_closed(2, 1.0).unwrap() - 0.5).abs() < 1e-15);
    assert!((isotropic_geo_closed(3, 0.0).unwrap() - 1.0 / 96.0).abs() < 1e-15);
    assert!((isotropic_geo_closed(3, 1.0).unwrap() - 2.0 / 3.0).abs() < 1e-15);
    for m in 2..=5 {
        assert!(werner_geo_closed(m, 1.0 / m as f64).unwrap().abs() < 1e-30);
        assert!(isotropic_geo_closed(m, 1.0 / (m * m) as f64).unwrap().abs() < 1e-30);
    }
    assert!(werner_geo_closed(2, 1.5).is_err());
    assert!(werner_geo_closed(1, 0.0).is_err());
    assert!(isotropic_geo_closed(2, -0.1).is_err());
}

#[test]
fn generic_examples() {
    let cfg = quick();
    let w = werner(2, -1.0).unwrap();
    let r = geo_discord_two_sided(&w, &cfg).unwrap();
    assert!((r.value - 0.5).abs() < 1e-6, "{}", r.value);
    assert!(r.value >= r.lower_bound - 1e-8);

    let iso = isotropic(3, 1.0).unwrap();
    let r = geo_discord_two_sided(&iso, &cfg).unwrap();
    assert!((r.value - 2.0 / 3.0).abs() < 1e-6, "{}", r.value);

    let p = ProbabilityTable::from_row_slice(2, 3, &[0.1, 0.2, 0.05, 0.3, 0.15, 0.2]);
    let cc = classical_classical(&p, &OrthonormalBasis::random(2, 3), &OrthonormalBasis::random(3, 4)).unwrap();
    assert!(geo_discord_two_sided(&cc, &cfg).unwrap().value.abs() < 1e-8);

    let bell = bell_phi_plus();
    let one = geo_discord_one_sided(&bell, Subsystem::A, &cfg).unwrap();
    assert!((one.value - 0.5).abs() < 1e-6);
    for x in [-1.0, -0.3, 0.2, 0.5, 0.9] {
        let v = geo_discord_one_sided(&werner(2, x).unwrap(), Subsystem::A, &cfg).unwrap().value;
        assert!((v - (2.0 * x - 1.0).powi(2) / 18.0).abs() < 1e-6, "x = {x}: {v}");
    }

    // Classical on A: Σ p_α |α⟩⟨α| ⊗ ρ_α.
    let basis = OrthonormalBasis::random(2, 8);
    let r0 = DensityMatrix::random(3, 3, 1).unwrap();
    let r1 = DensityMatrix::random(3, 2, 2).unwrap();
    let mut m = CMatrix::zeros(6, 6);
    for (k, (w, r)) in [(0.3, &r0), (0.7, &r1)].into_iter().enumerate() {
        m += basis.projector(k).kronecker(r.matrix()) * num_complex::Complex64::new(w, 0.0);
    }
    let classical = BipartiteState::new(m, 2, 3).unwrap();
    assert!(geo_discord_one_sided(&classical, Subsystem::A, &cfg).unwrap().value.abs() < 1e-8);
    assert!(geo_discord_one_sided(&classical, Subsystem::B, &cfg).unwrap().value > 1e-4);
}

#[test]
fn correlation_route_agrees() {
    let cfg = quick();
    for seed in 0..4 {
        let s = random_state(2, 3, 3, 500 + seed).unwrap();
        let direct = geo_discord_two_sided(&s, &cfg).unwrap();
        for (ba, bb) in [
            (hermitian_operator_basis(2), hermitian_operator_basis(3)),
            (HermitianOperatorBasis::matrix_units(2), HermitianOperatorBasis::matrix_units(3)),
        ] {
            let cd = correlation_matrix_in(&s, &ba, &bb).unwrap();
            let via = geo_discord_from_correlation(&cd, &cfg, &warm_starts::generic(&s)).unwrap();
            assert!((via.value - direct.value).abs() < 1e-8, "{} vs {}", via.value, direct.value);
        }
    }
}

#[test]
fn one_sided_dephasing_purity_matches_objective() {
    for seed in 0..10 {
        let s = random_state(3, 2, 4, seed).unwrap();
        for side in [Subsystem::A, Subsystem::B] {
            let basis = OrthonormalBasis::random(s.dim(side), seed + 7);
            let obj = OneSidedPurity { rho: s.matrix(), na: 3, nb: 2, side };
            let dephased = dephase_one_sided(&s, &basis, side).unwrap();
            assert!((obj.value(basis.unitary()) - dephased.purity()).abs() < 1e-12);
        }
    }
}

#[test]
fn two_qubit_objective_matches_distance() {
    for seed in 0..20 {
        let s = random_state(2, 2, 1 + seed as usize % 4, 700 + seed).unwrap();
        let b = to_bloch(&s).unwrap();
        let a = OrthonormalBasis::random(3, seed).unitary().column(0).map(|z| z.re).normalize();
        let a = Vector3::new(a[0], a[1], a[2]);
        let bv = Vector3::new(0.6, -0.0, 0.8);
        let m = ProductMeasurement::new(bloch_basis(&a).unwrap(), bloch_basis(&bv).unwrap());
        let dist = hs_distance_sq(&s, &dephase_two_sided(&s, &m).unwrap()).unwrap();
        let total = b.x.norm_squared() + b.y.norm_squared() + b.t.norm_squared();
        let via = 0.25 * total - 0.25 * two_qubit_geo_objective(&b, &a, &bv).unwrap();
        assert!((dist - via).abs() < 1e-12);
    }
    let b = to_bloch(&bell_phi_plus()).unwrap();
    assert!((two_qubit_geo_objective(&b, &Vector3::z(), &Vector3::z()).unwrap() - 1.0).abs() < 1e-15);
    assert!(two_qubit_geo_objective(&b, &Vector3::new(1.0, 1.0, 0.0), &Vector3::z()).is_err());
    let only_x = TwoQubitBloch::new(Vector3::z(), Vector3::zeros(), Matrix3::zeros());
    assert!((two_qubit_geo_objective(&only_x, &Vector3::z(), &Vector3::x()).unwrap() - 1.0).abs() < 1e-15);
}

#[test]
fn two_qubit_special_cases() {
    let cfg = quick();
    let t0 = TwoQubitBloch::new(Vector3::new(0.3, 0.0, 0.1), Vector3::new(0.0, -0.5, 0.0), Matrix3::zeros());
    assert_eq!(two_qubit_case(&t0), TwoQubitCase::NoCorrelationTensor);
    assert_eq!(two_qubit_geo(&t0, &cfg).unwrap().value, 0.0);

    let bell = to_bloch(&bell_phi_plus()).unwrap();
    assert_eq!(two_qubit_case(&bell), TwoQubitCase::ZeroMarginals);
    let r = two_qubit_geo(&bell, &cfg).unwrap();
    assert!((r.value - 0.5).abs() < 1e-12);

    let x = Vector3::new(0.0, 0.0, 0.6);
    let y = Vector3::new(0.0, 0.0, 0.8);
    let prod = TwoQubitBloch::new(x, y, x * y.transpose());
    assert_eq!(two_qubit_case(&prod), TwoQubitCase::Product);
    assert_eq!(two_qubit_geo(&prod, &cfg).unwrap().value, 0.0);
    let generic = geo_discord_two_sided(&from_bloch(&prod).unwrap(), &cfg).unwrap();
    assert!(generic.value.abs() < 1e-8);

    let bad = TwoQubitBloch::new(Vector3::zeros(), Vector3::zeros(), Matrix3::identity());
    assert!(matches!(two_qubit_geo(&bad, &cfg), Err(DiscordError::NotPositiveSemidefinite { .. })));
}

#[test]
fn two_qubit_route_matches_generic() {
    let cfg = quick();
    for seed in 0..6 {
        let s = random_state(2, 2, 2, 900 + seed).unwrap();
        let b = to_bloch(&s).unwrap();
        assert_eq!(two_qubit_case(&b), TwoQubitCase::General);
        let fast = two_qubit_geo(&b, &cfg).unwrap();
        let generic = geo_discord_two_sided(&s, &cfg).unwrap();
        assert!((fast.value - generic.value).abs() < 1e-6, "{} vs {}", fast.value, generic.value);
        if let OptimalMeasurement::TwoSided(m) = &fast.optimal_measurement {
            assert!((s.purity() - dephased_purity(&s, m).unwrap() - fast.value).abs() < 1e-12);
        } else {
            panic!("two-sided result expected");
        }
    }
}
