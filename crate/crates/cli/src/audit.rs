//! Randomized invariant audit over seeded random states.

use discord_core::entropic::{loss_split, measured_loss_two_sided};
use discord_core::geometric::{
    correlation_matrix, dephased_purity, geo_discord_one_sided, geo_discord_two_sided, hs_distance_sq,
    measurement_matrix, objective27,
};
use discord_core::measurement::diagonal_distribution;
use discord_core::qstate::{classical_classical, random_distribution, random_product_measurement, random_state};
use discord_core::{OptimizerConfig, Subsystem};
use serde::Serialize;

use crate::error::CliError;
use crate::format::{opt, sig9};

/// One invariant. `worst` is the largest deviation seen; a sample violates the check when
/// its deviation exceeds `tolerance`. For inequalities the deviation is negative while
/// the inequality holds strictly.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AuditCheck {
    pub name: &'static str,
    pub tolerance: f64,
    pub samples: usize,
    pub violations: usize,
    pub worst: Option<f64>,
}

impl AuditCheck {
    fn new(name: &'static str, tolerance: f64) -> Self {
        AuditCheck { name, tolerance, samples: 0, violations: 0, worst: None }
    }

    fn record(&mut self, deviation: f64) {
        self.samples += 1;
        // NaN counts as a violation and sticks as the worst value.
        if deviation.is_nan() || deviation > self.tolerance {
            self.violations += 1;
        }
        self.worst = Some(match self.worst {
            Some(w) if w.is_nan() || (!deviation.is_nan() && deviation <= w) => w,
            _ => deviation,
        });
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AuditReport {
    pub n_states: usize,
    pub seed: u64,
    pub dim_a: usize,
    pub dim_b: usize,
    pub checks: Vec<AuditCheck>,
    pub violations: usize,
}

impl AuditReport {
    pub fn text(&self) -> String {
        let mut out = format!(
            "audit of {} states, dims ({},{}), seed {}\ncheck,tolerance,samples,violations,worst\n",
            self.n_states, self.dim_a, self.dim_b, self.seed
        );
        for c in &self.checks {
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                c.name,
                sig9(c.tolerance),
                c.samples,
                c.violations,
                opt(c.worst)
            ));
        }
        out.push_str(&format!("violations: {}\n", self.violations));
        out
    }
}

pub fn run_audit(n_states: usize, seed: u64, dims: (usize, usize), cfg: &OptimizerConfig) -> Result<AuditReport, CliError> {
    let (na, nb) = dims;
    if !(2..=3).contains(&na) || !(2..=3).contains(&nb) {
        return Err(CliError::Arguments(format!("audit dims must lie between (2,2) and (3,3), got ({na},{nb})")));
    }
    cfg.validate()?;
    let mut loss = AuditCheck::new("measured loss nonnegative", 1e-9);
    let mut split_terms = AuditCheck::new("loss split terms nonnegative", 1e-9);
    let mut split_sum = AuditCheck::new("loss split sums to loss", 1e-9);
    let mut pinching = AuditCheck::new("dephasing does not raise purity", 1e-12);
    let mut completion = AuditCheck::new("distance quadratic completion", 1e-12);
    let mut objective = AuditCheck::new("correlation objective equals dephased purity", 1e-12);
    let mut norm = AuditCheck::new("correlation norm equals purity", 1e-12);
    let mut bound_two = AuditCheck::new("two-sided geometric above lower bound", 1e-8);
    let mut bound_one = AuditCheck::new("one-sided geometric above lower bounds", 1e-8);
    let mut hierarchy = AuditCheck::new("two-sided geometric above one-sided", 1e-6);

    for i in 0..n_states as u64 {
        let s_seed = seed.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ i;
        let s = random_state(na, nb, 1 + i as usize % (na * nb), s_seed)?;
        let m = random_product_measurement(na, nb, s_seed ^ 0xABCD);

        let l = measured_loss_two_sided(&s, &m)?;
        let split = loss_split(&s, &m)?;
        loss.record(-l);
        split_terms.record(-split.loss_a.min(split.loss_b));
        split_sum.record((split.total() - l).abs());

        let dp = dephased_purity(&s, &m)?;
        pinching.record(dp - s.purity());
        let diag = diagonal_distribution(&s, &m)?;
        let p = random_distribution(na, nb, s_seed ^ 0x7777);
        let chi = classical_classical(&p, &m.basis_a, &m.basis_b)?;
        let rhs = s.purity() - diag.norm_squared() + (&p - &diag).norm_squared();
        completion.record((hs_distance_sq(&s, &chi)? - rhs).abs());

        let cd = correlation_matrix(&s)?;
        let a = measurement_matrix(&m.basis_a, &cd.basis_a)?;
        let b = measurement_matrix(&m.basis_b, &cd.basis_b)?;
        objective.record((objective27(&cd, &a, &b)? - dp).abs());
        norm.record((cd.frobenius_sq() - s.purity()).abs());

        let two = geo_discord_two_sided(&s, cfg)?;
        let ga = geo_discord_one_sided(&s, Subsystem::A, cfg)?;
        let gb = geo_discord_one_sided(&s, Subsystem::B, cfg)?;
        bound_two.record(two.lower_bound - two.value);
        bound_one.record((ga.lower_bound - ga.value).max(gb.lower_bound - gb.value));
        hierarchy.record(ga.value.max(gb.value) - two.value);
    }

    let checks = vec![
        loss, split_terms, split_sum, pinching, completion, objective, norm, bound_two, bound_one, hierarchy,
    ];
    let violations = checks.iter().map(|c| c.violations).sum();
    Ok(AuditReport { n_states, seed, dim_a: na, dim_b: nb, checks, violations })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_audit_has_no_samples() {
        let r = run_audit(0, 3, (2, 2), &OptimizerConfig::default()).unwrap();
        assert_eq!(r.violations, 0);
        assert!(r.checks.iter().all(|c| c.samples == 0 && c.worst.is_none()));
        assert!(r.text().ends_with("violations: 0\n"));
    }

    #[test]
    fn small_audit_is_clean_and_deterministic() {
        let cfg = OptimizerConfig::default().with_restarts(8);
        let r = run_audit(12, 5, (2, 3), &cfg).unwrap();
        assert_eq!(r.violations, 0, "{}", r.text());
        assert_eq!(r, run_audit(12, 5, (2, 3), &cfg).unwrap());
    }

    #[test]
    fn nan_deviation_is_a_violation() {
        let mut c = AuditCheck::new("x", 1e-9);
        c.record(-1.0);
        c.record(f64::NAN);
        c.record(-2.0);
        assert_eq!(c.violations, 1);
        assert!(c.worst.unwrap().is_nan());
    }

    #[test]
    fn oversized_dims_are_rejected() {
        assert!(matches!(
            run_audit(1, 0, (4, 2), &OptimizerConfig::default()),
            Err(CliError::Arguments(_))
        ));
    }
}
