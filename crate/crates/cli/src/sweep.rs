//! Closed form versus numerical optimum along a Werner or isotropic family.

use discord_core::geometric::{geo_discord_two_sided_with, isotropic_geo_closed, werner_geo_closed};
use discord_core::optimizer::warm_starts;
use discord_core::qstate::{isotropic, werner};
use discord_core::OptimizerConfig;

use crate::compute::{Family, BOUND_TOL, CLOSED_FORM_TOL};
use crate::error::CliError;
use crate::format::sig9;

pub const SWEEP_CSV_HEADER: &str = "family,m,x,geo_closed,geo_numeric,lower_bound,abs_gap";

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepSpec {
    pub family: Family,
    pub m: usize,
    pub x_start: f64,
    pub x_end: f64,
    pub points: usize,
}

impl SweepSpec {
    /// The whole parameter domain of `family`.
    pub fn full(family: Family, m: usize, points: usize) -> Self {
        let (x_start, x_end) = family_domain(family);
        SweepSpec { family, m, x_start, x_end, points }
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let (lo, hi) = family_domain(self.family);
        if self.m < 2 {
            return Err(CliError::Arguments(format!("m must be at least 2, got {}", self.m)));
        }
        if self.points < 2 {
            return Err(CliError::Arguments(format!("need at least 2 points, got {}", self.points)));
        }
        for x in [self.x_start, self.x_end] {
            if !(lo..=hi).contains(&x) {
                return Err(CliError::Arguments(format!(
                    "x = {x} outside the {} domain [{lo}, {hi}]",
                    self.family
                )));
            }
        }
        Ok(())
    }

    /// Evenly spaced parameters, endpoints included exactly.
    pub fn xs(&self) -> Vec<f64> {
        let n = self.points - 1;
        (0..=n)
            .map(|i| {
                if i == n {
                    self.x_end
                } else {
                    self.x_start + (self.x_end - self.x_start) * i as f64 / n as f64
                }
            })
            .collect()
    }
}

pub fn family_domain(family: Family) -> (f64, f64) {
    match family {
        Family::Werner => (-1.0, 1.0),
        Family::Isotropic => (0.0, 1.0),
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub family: Family,
    pub m: usize,
    pub x: f64,
    pub geo_closed: f64,
    pub geo_numeric: f64,
    pub lower_bound: f64,
    pub abs_gap: f64,
}

impl SweepRow {
    pub fn csv(&self) -> String {
        format!(
            "{},{},{},{},{},{},{}",
            self.family,
            self.m,
            sig9(self.x),
            sig9(self.geo_closed),
            sig9(self.geo_numeric),
            sig9(self.lower_bound),
            sig9(self.abs_gap)
        )
    }
}

/// One row per parameter, in input order.
pub fn run_sweep(spec: &SweepSpec, cfg: &OptimizerConfig) -> Result<Vec<SweepRow>, CliError> {
    spec.validate()?;
    let mut rows = Vec::with_capacity(spec.points);
    for x in spec.xs() {
        let (state, closed, warm) = match spec.family {
            Family::Werner => (werner(spec.m, x)?, werner_geo_closed(spec.m, x)?, warm_starts::werner(spec.m, cfg.seed)),
            Family::Isotropic => (
                isotropic(spec.m, x)?,
                isotropic_geo_closed(spec.m, x)?,
                warm_starts::isotropic(spec.m, cfg.seed),
            ),
        };
        let r = geo_discord_two_sided_with(&state, cfg, &warm)?;
        rows.push(SweepRow {
            family: spec.family,
            m: spec.m,
            x,
            geo_closed: closed,
            geo_numeric: r.value,
            lower_bound: r.lower_bound,
            abs_gap: (closed - r.value).abs(),
        });
    }
    Ok(rows)
}

pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from(SWEEP_CSV_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&r.csv());
        out.push('\n');
    }
    out
}

/// Rows whose numerical value strays from the closed form or falls below the bound.
pub fn sweep_violations(rows: &[SweepRow]) -> Vec<String> {
    rows.iter()
        .filter_map(|r| {
            if r.abs_gap > CLOSED_FORM_TOL {
                Some(format!("{} m={} x={}: gap {}", r.family, r.m, sig9(r.x), sig9(r.abs_gap)))
            } else if r.geo_numeric < r.lower_bound - BOUND_TOL {
                Some(format!("{} m={} x={}: below lower bound", r.family, r.m, sig9(r.x)))
            } else {
                None
            }
        })
        .collect()
}
