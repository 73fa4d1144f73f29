//! The acceptance table: every check prints one line with measured and expected values.

use std::io::Write;
use std::time::{Duration, Instant};

use discord_core::entropic::{
    discord_two_sided, discord_two_sided_with, loss_split, measured_loss_two_sided, two_sided_grid_oracle,
};
use discord_core::geometric::{
    correlation_matrix, dephased_purity, geo_discord_from_correlation, geo_discord_one_sided, geo_discord_two_sided,
    geo_discord_two_sided_with, hs_distance_sq, isotropic_geo_closed, measurement_matrix, objective27, two_qubit_case,
    two_qubit_geo, TwoQubitCase,
};
use discord_core::measurement::diagonal_distribution;
use discord_core::nalgebra::{Matrix3, Vector3};
use discord_core::optimizer::{alternating_sphere_max, sphere_grid_oracle};
use discord_core::qstate::{
    bell_phi_plus, classical_classical, random_classical_classical, random_distribution,
    random_product_measurement, random_product_state, random_state, random_zero_marginal_qubits, to_bloch,
};
use discord_core::{OptimizerConfig, Result, Subsystem, TwoQubitBloch};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::compute::Family;
use crate::format::sig9;
use crate::sweep::{run_sweep, SweepSpec};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyOptions {
    pub seed: u64,
    pub restarts: usize,
    /// Skip the `m = 4` family sweeps.
    pub quick: bool,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { seed: 0, restarts: OptimizerConfig::default().restarts, quick: false }
    }
}

impl VerifyOptions {
    fn cfg(&self) -> OptimizerConfig {
        OptimizerConfig::default().with_seed(self.seed).with_restarts(self.restarts)
    }

    /// Seed of sample `i` of criterion `k`; distinct streams per criterion.
    fn sample_seed(&self, k: u64, i: u64) -> u64 {
        self.seed.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ (k << 40) ^ i
    }

    fn family_sizes(&self) -> Vec<usize> {
        if self.quick {
            vec![2, 3]
        } else {
            vec![2, 3, 4]
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub criterion: u8,
    pub name: &'static str,
    pub passed: bool,
    pub measured: String,
    pub expected: String,
    pub seconds: f64,
}

impl Check {
    pub fn line(&self) -> String {
        format!(
            "{} [{}] {}: measured {}; expected {} ({:.1} s)",
            if self.passed { "PASS" } else { "FAIL" },
            self.criterion,
            self.name,
            self.measured,
            self.expected,
            self.seconds
        )
    }
}

fn timed(criterion: u8, name: &'static str, expected: &str, body: impl FnOnce() -> Result<(bool, String)>) -> Check {
    let start = Instant::now();
    let (passed, measured) = body().unwrap_or_else(|e| (false, format!("error: {e}")));
    Check {
        criterion,
        name,
        passed,
        measured,
        expected: expected.to_string(),
        seconds: start.elapsed().as_secs_f64(),
    }
}

fn family_check(opts: &VerifyOptions, family: Family) -> Result<(f64, usize, Duration)> {
    let start = Instant::now();
    let mut worst = 0.0f64;
    let mut below_bound = 0;
    for m in opts.family_sizes() {
        let rows = run_sweep(&SweepSpec::full(family, m, 21), &opts.cfg()).map_err(|e| match e {
            crate::error::CliError::Compute(d) => d,
            other => discord_core::DiscordError::Domain(other.to_string()),
        })?;
        for r in rows {
            worst = worst.max(r.abs_gap);
            if r.geo_numeric < r.lower_bound - 1e-8 {
                below_bound += 1;
            }
        }
    }
    Ok((worst, below_bound, start.elapsed()))
}

pub fn criterion_1(opts: &VerifyOptions) -> Check {
    timed(1, "Werner closed form", "max |gap| <= 1e-6, time <= 60 s", || {
        let (worst, below, elapsed) = family_check(opts, Family::Werner)?;
        let secs = elapsed.as_secs_f64();
        Ok((
            worst <= 1e-6 && below == 0 && secs <= 60.0,
            format!("max |gap| {} over m in {:?}, {below} bound violations, {secs:.1} s", sig9(worst), opts.family_sizes()),
        ))
    })
}

pub fn criterion_2(opts: &VerifyOptions) -> Check {
    timed(2, "isotropic closed form", "max |gap| <= 1e-6, closed form at x = 1/m^2 <= 1e-10", || {
        let (worst, below, _) = family_check(opts, Family::Isotropic)?;
        let mut zero = 0.0f64;
        for m in opts.family_sizes() {
            zero = zero.max(isotropic_geo_closed(m, 1.0 / (m * m) as f64)?.abs());
        }
        Ok((
            worst <= 1e-6 && below == 0 && zero <= 1e-10,
            format!("max |gap| {}, {below} bound violations, closed form at threshold {}", sig9(worst), sig9(zero)),
        ))
    })
}

fn qubit_total(b: &TwoQubitBloch) -> f64 {
    b.x.norm_squared() + b.y.norm_squared() + b.t.norm_squared()
}

pub fn criterion_3(opts: &VerifyOptions) -> Check {
    timed(3, "Bell values by independent routes", "geometric 0.5 +- 1e-6 (x4), entropic 1.0 +- 1e-4 (optimizer and grid)", || {
        let cfg = opts.cfg();
        let bell = bell_phi_plus();
        let bloch = to_bloch(&bell)?;
        let dephased = geo_discord_two_sided_with(&bell, &cfg, &[])?.value;
        let correlation = geo_discord_from_correlation(&correlation_matrix(&bell)?, &cfg, &[])?.value;
        let alternating = 0.25 * (qubit_total(&bloch) - alternating_sphere_max(&bloch, &cfg)?.value);
        let tt: Matrix3<f64> = bloch.t * bloch.t.transpose();
        let formula = 0.25 * (tt.trace() - tt.symmetric_eigenvalues().max());
        let entropic = discord_two_sided_with(&bell, &cfg, &[])?.value;
        let grid = two_sided_grid_oracle(&bell, 24)?;
        let geo = [dephased, correlation, alternating, formula];
        let ok = geo.iter().all(|v| (v - 0.5).abs() <= 1e-6)
            && (entropic - 1.0).abs() <= 1e-4
            && (grid - 1.0).abs() <= 1e-4;
        Ok((
            ok,
            format!(
                "geometric {} / {} / {} / {}; entropic {} (grid {})",
                sig9(dephased),
                sig9(correlation),
                sig9(alternating),
                sig9(formula),
                sig9(entropic),
                sig9(grid)
            ),
        ))
    })
}

fn random_unit(rng: &mut ChaCha8Rng) -> Vector3<f64> {
    loop {
        let v = Vector3::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        let n = v.norm();
        if n > 1e-3 && n <= 1.0 {
            return v / n;
        }
    }
}

pub fn criterion_4(opts: &VerifyOptions) -> Check {
    timed(4, "two-qubit special cases", "cases (i), (iii) <= 1e-10; case (ii) vs optimizer <= 1e-6 (20 states each)", || {
        let cfg = opts.cfg();
        let mut rng = ChaCha8Rng::seed_from_u64(opts.sample_seed(4, 0));
        let (mut worst_i, mut worst_iii, mut worst_ii) = (0.0f64, 0.0f64, 0.0f64);
        let mut misclassified = 0;
        for i in 0..20u64 {
            let rx = rng.random_range(0.0..0.95);
            let ry = rng.random_range(0.0..0.95 - rx);
            let b = TwoQubitBloch::new(random_unit(&mut rng) * rx, random_unit(&mut rng) * ry, Matrix3::zeros());
            misclassified += usize::from(two_qubit_case(&b) != TwoQubitCase::NoCorrelationTensor);
            worst_i = worst_i.max(two_qubit_geo(&b, &cfg)?.value.abs());

            let b = to_bloch(&random_product_state(2, 2, opts.sample_seed(4, 100 + i))?)?;
            misclassified += usize::from(two_qubit_case(&b) != TwoQubitCase::Product);
            worst_iii = worst_iii.max(two_qubit_geo(&b, &cfg)?.value.abs());

            let s = random_zero_marginal_qubits(opts.sample_seed(4, 200 + i))?;
            let b = to_bloch(&s)?;
            misclassified += usize::from(two_qubit_case(&b) != TwoQubitCase::ZeroMarginals);
            let formula = two_qubit_geo(&b, &cfg)?.value;
            let generic = geo_discord_two_sided(&s, &cfg)?.value;
            worst_ii = worst_ii.max((formula - generic).abs());
        }
        Ok((
            worst_i <= 1e-10 && worst_iii <= 1e-10 && worst_ii <= 1e-6 && misclassified == 0,
            format!(
                "case (i) max {}, case (iii) max {}, case (ii) max |formula - optimizer| {}, {misclassified} misclassified",
                sig9(worst_i),
                sig9(worst_iii),
                sig9(worst_ii)
            ),
        ))
    })
}

pub fn criterion_5(opts: &VerifyOptions) -> Check {
    timed(5, "mutual-information loss and its split", "loss, both split terms >= -1e-9; split sums to loss within 1e-9", || {
        let (mut min_loss, mut min_part, mut max_sum_err) = (f64::INFINITY, f64::INFINITY, 0.0f64);
        let mut violations = 0;
        for (dims, count) in [((2, 2), 500u64), ((2, 3), 200)] {
            let (na, nb) = dims;
            for i in 0..count {
                let seed = opts.sample_seed(5, (na * 10_000 + nb * 1_000) as u64 + i);
                let s = random_state(na, nb, 1 + i as usize % (na * nb), seed)?;
                let m = random_product_measurement(na, nb, seed ^ 0xABCD);
                let loss = measured_loss_two_sided(&s, &m)?;
                let split = loss_split(&s, &m)?;
                let part = split.loss_a.min(split.loss_b);
                let err = (split.total() - loss).abs();
                min_loss = min_loss.min(loss);
                min_part = min_part.min(part);
                max_sum_err = max_sum_err.max(err);
                violations += usize::from(loss < -1e-9 || part < -1e-9 || err > 1e-9);
            }
        }
        Ok((
            violations == 0,
            format!(
                "700 states: {violations} violations; min loss {}, min split term {}, max |sum error| {}",
                sig9(min_loss),
                sig9(min_part),
                sig9(max_sum_err)
            ),
        ))
    })
}

pub fn criterion_6(opts: &VerifyOptions) -> Check {
    timed(6, "zero set", "classical-classical: geometric <= 1e-8, entropic <= 1e-6; product: both <= 1e-6 (50 each)", || {
        let cfg = opts.cfg();
        let dims = [(2, 2), (2, 3), (3, 2)];
        let (mut cc_geo, mut cc_ent, mut prod_geo, mut prod_ent) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
        for i in 0..50u64 {
            let (na, nb) = dims[i as usize % dims.len()];
            let cc = random_classical_classical(na, nb, opts.sample_seed(6, i))?;
            cc_geo = cc_geo.max(geo_discord_two_sided(&cc, &cfg)?.value);
            cc_ent = cc_ent.max(discord_two_sided(&cc, &cfg)?.value);
            let prod = random_product_state(na, nb, opts.sample_seed(6, 1000 + i))?;
            prod_geo = prod_geo.max(geo_discord_two_sided(&prod, &cfg)?.value.abs());
            prod_ent = prod_ent.max(discord_two_sided(&prod, &cfg)?.value.abs());
        }
        Ok((
            cc_geo <= 1e-8 && cc_ent <= 1e-6 && prod_geo <= 1e-6 && prod_ent <= 1e-6,
            format!(
                "classical-classical max geometric {}, entropic {}; product max geometric {}, entropic {}",
                sig9(cc_geo),
                sig9(cc_ent),
                sig9(prod_geo),
                sig9(prod_ent)
            ),
        ))
    })
}

pub fn criterion_7(opts: &VerifyOptions) -> Check {
    timed(7, "bounds and hierarchy", "0 violations on 200 (2,2) states", || {
        let cfg = opts.cfg();
        let (mut bound_margin, mut hierarchy_margin, mut one_sided_margin) = (f64::INFINITY, f64::INFINITY, f64::INFINITY);
        let mut violations = 0;
        for i in 0..200u64 {
            let s = random_state(2, 2, 1 + i as usize % 4, opts.sample_seed(7, i))?;
            let two = geo_discord_two_sided(&s, &cfg)?;
            let a = geo_discord_one_sided(&s, Subsystem::A, &cfg)?;
            let b = geo_discord_one_sided(&s, Subsystem::B, &cfg)?;
            let m1 = two.value - two.lower_bound;
            let m2 = two.value - a.value.max(b.value);
            let m3 = (a.value - a.lower_bound).min(b.value - b.lower_bound);
            bound_margin = bound_margin.min(m1);
            hierarchy_margin = hierarchy_margin.min(m2);
            one_sided_margin = one_sided_margin.min(m3);
            violations += usize::from(m1 < -1e-8 || m2 < -1e-6 || m3 < -1e-8);
        }
        Ok((
            violations == 0,
            format!(
                "{violations} violations; min margins: two-sided bound {}, hierarchy {}, one-sided bounds {}",
                sig9(bound_margin),
                sig9(hierarchy_margin),
                sig9(one_sided_margin)
            ),
        ))
    })
}

pub fn criterion_8(opts: &VerifyOptions) -> Check {
    timed(8, "identities", "correlation objective = dephased purity, tr CC^T = purity (500), quadratic completion (200), all <= 1e-12", || {
        let dims = [(2, 2), (2, 3), (3, 3)];
        let (mut e27, mut etr, mut e26) = (0.0f64, 0.0f64, 0.0f64);
        for i in 0..500u64 {
            let (na, nb) = dims[i as usize % 3];
            let seed = opts.sample_seed(8, i);
            let s = random_state(na, nb, 1 + i as usize % (na * nb), seed)?;
            let m = random_product_measurement(na, nb, seed ^ 0x5555);
            let cd = correlation_matrix(&s)?;
            let a = measurement_matrix(&m.basis_a, &cd.basis_a)?;
            let b = measurement_matrix(&m.basis_b, &cd.basis_b)?;
            e27 = e27.max((objective27(&cd, &a, &b)? - dephased_purity(&s, &m)?).abs());
            etr = etr.max((cd.frobenius_sq() - s.purity()).abs());
            if i < 200 {
                let diag = diagonal_distribution(&s, &m)?;
                let p = random_distribution(na, nb, seed ^ 0x7777);
                let chi = classical_classical(&p, &m.basis_a, &m.basis_b)?;
                let rhs = s.purity() - diag.norm_squared() + (&p - &diag).norm_squared();
                e26 = e26.max((hs_distance_sq(&s, &chi)? - rhs).abs());
            }
        }
        Ok((
            e27 <= 1e-12 && etr <= 1e-12 && e26 <= 1e-12,
            format!("max errors {} / {} / {}", sig9(e27), sig9(etr), sig9(e26)),
        ))
    })
}

/// Oracle agreement only; [`run_verify`] adds the total-runtime requirement.
pub fn criterion_9(opts: &VerifyOptions) -> Check {
    timed(9, "sphere oracle certification", "|alternating - grid(400)| <= 2e-4 on 50 states", || {
        let cfg = opts.cfg();
        let mut worst = 0.0f64;
        for i in 0..50u64 {
            let s = random_state(2, 2, 1 + i as usize % 4, opts.sample_seed(9, i))?;
            let b = to_bloch(&s)?;
            let alt = alternating_sphere_max(&b, &cfg)?.value;
            let grid = sphere_grid_oracle(&b, 400);
            worst = worst.max((alt - grid).abs());
        }
        Ok((worst <= 2e-4, format!("max |alternating - grid| {}", sig9(worst))))
    })
}

pub const VERIFY_TIME_LIMIT: f64 = 300.0;

/// Runs every check, printing each line as it completes. The last line folds the total
/// runtime into criterion 9.
pub fn run_verify(opts: &VerifyOptions, out: &mut impl Write) -> std::io::Result<Vec<Check>> {
    let start = Instant::now();
    let criteria: [fn(&VerifyOptions) -> Check; 8] = [
        criterion_1,
        criterion_2,
        criterion_3,
        criterion_4,
        criterion_5,
        criterion_6,
        criterion_7,
        criterion_8,
    ];
    let mut checks = Vec::with_capacity(9);
    for f in criteria {
        let c = f(opts);
        writeln!(out, "{}", c.line())?;
        out.flush()?;
        checks.push(c);
    }
    let mut last = criterion_9(opts);
    let total = start.elapsed().as_secs_f64();
    last.passed &= total <= VERIFY_TIME_LIMIT;
    last.measured = format!("{}; full verify {total:.1} s", last.measured);
    last.expected = format!("{}; full verify <= {VERIFY_TIME_LIMIT} s", last.expected);
    writeln!(out, "{}", last.line())?;
    checks.push(last);
    let failed = checks.iter().filter(|c| !c.passed).count();
    writeln!(out, "{} of {} checks passed", checks.len() - failed, checks.len())?;
    Ok(checks)
}
