//! Per-state discord report.

use std::path::Path;

use discord_core::entropic::{self, DiscordValue};
use discord_core::geometric::{
    geo_discord_one_sided, geo_discord_two_sided_with, isotropic_geo_closed, two_qubit_case, two_qubit_geo, werner_geo_closed, GeoResult, TwoQubitCase,
};
use discord_core::optimizer::warm_starts;
use discord_core::qstate::{
    io, isotropic, maximally_entangled_projector, swap_operator, to_bloch, werner,
};
use discord_core::{BipartiteState, DiscordError, OptimalMeasurement, OptimizerConfig, Subsystem};
use serde::Serialize;

use crate::error::CliError;
use crate::format::{opt, sig9};

/// Slack allowed when comparing a two-sided value with one-sided ones.
pub const HIERARCHY_TOL: f64 = 1e-6;
/// Slack allowed below a spectral lower bound.
pub const BOUND_TOL: f64 = 1e-8;
/// Allowed distance from a known closed form.
pub const CLOSED_FORM_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComputeOptions {
    pub cfg: OptimizerConfig,
    pub entropic: bool,
}

/// Reads and validates a state file; each failure mode has its own message.
pub fn load_state(path: &Path) -> Result<BipartiteState, CliError> {
    let shown = path.display().to_string();
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Read { path: shown.clone(), reason: e.to_string() })?;
    match io::parse_state(&text) {
        Ok(s) => Ok(s),
        Err(DiscordError::Format(reason)) => Err(CliError::Parse { path: shown, reason }),
        Err(e) => Err(CliError::Invalid { path: shown, reason: e.to_string() }),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Werner,
    Isotropic,
}

impl std::fmt::Display for Family {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Family::Werner => "werner",
            Family::Isotropic => "isotropic",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClosedForm {
    /// `werner`, `isotropic`, or the two-qubit structural case.
    pub source: String,
    pub parameter: Option<f64>,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GeoRecord {
    pub value: f64,
    pub lower_bound: f64,
    pub basis_a: Option<Vec<Vec<[f64; 2]>>>,
    pub basis_b: Option<Vec<Vec<[f64; 2]>>>,
    pub restarts: usize,
    pub iterations: usize,
    pub converged: bool,
}

impl From<&GeoResult> for GeoRecord {
    fn from(r: &GeoResult) -> Self {
        let (basis_a, basis_b) = bases(&r.optimal_measurement);
        GeoRecord {
            value: r.value,
            lower_bound: r.lower_bound,
            basis_a,
            basis_b,
            restarts: r.optimizer_report.restarts_run,
            iterations: r.optimizer_report.iterations_total,
            converged: r.optimizer_report.converged,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EntropicRecord {
    pub value: f64,
    pub basis_a: Option<Vec<Vec<[f64; 2]>>>,
    pub basis_b: Option<Vec<Vec<[f64; 2]>>>,
    pub restarts: usize,
    pub iterations: usize,
    pub converged: bool,
}

impl From<&DiscordValue> for EntropicRecord {
    fn from(r: &DiscordValue) -> Self {
        let (basis_a, basis_b) = bases(&r.optimal_measurement);
        EntropicRecord {
            value: r.value,
            basis_a,
            basis_b,
            restarts: r.optimizer_report.restarts_run,
            iterations: r.optimizer_report.iterations_total,
            converged: r.optimizer_report.converged,
        }
    }
}

type Pairs = Option<Vec<Vec<[f64; 2]>>>;

fn bases(m: &OptimalMeasurement) -> (Pairs, Pairs) {
    match m {
        OptimalMeasurement::TwoSided(pm) => (
            Some(io::matrix_to_pairs(pm.basis_a.unitary())),
            Some(io::matrix_to_pairs(pm.basis_b.unitary())),
        ),
        OptimalMeasurement::OneSided { side: Subsystem::A, basis } => (Some(io::matrix_to_pairs(basis.unitary())), None),
        OptimalMeasurement::OneSided { side: Subsystem::B, basis } => (None, Some(io::matrix_to_pairs(basis.unitary()))),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EntropicDiscords {
    pub d_a: EntropicRecord,
    pub d_b: EntropicRecord,
    pub d_ab: EntropicRecord,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GeometricDiscords {
    pub d_a: GeoRecord,
    pub d_b: GeoRecord,
    pub d_ab: GeoRecord,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub dim_a: usize,
    pub dim_b: usize,
    pub purity: f64,
    pub mutual_information: f64,
    pub entropic: Option<EntropicDiscords>,
    pub geometric: GeometricDiscords,
    pub closed_form: Option<ClosedForm>,
    /// Cross-check failures; an empty list means the record is consistent.
    pub flags: Vec<String>,
}

/// Recognises Werner and isotropic states: `tr(ρF)` and `tr(ρM)` recover their parameter.
pub fn detect_family(state: &BipartiteState) -> Option<(Family, usize, f64)> {
    let (na, nb) = state.dims();
    if na != nb || na < 2 {
        return None;
    }
    let m = na;
    let close = |other: &BipartiteState| {
        (state.matrix() - other.matrix()).iter().map(|z| z.norm()).fold(0.0, f64::max) <= 1e-10
    };
    let x = (state.matrix() * swap_operator(m)).trace().re.clamp(-1.0, 1.0);
    if werner(m, x).is_ok_and(|w| close(&w)) {
        return Some((Family::Werner, m, x));
    }
    let x = (state.matrix() * maximally_entangled_projector(m)).trace().re.clamp(0.0, 1.0);
    if isotropic(m, x).is_ok_and(|s| close(&s)) {
        return Some((Family::Isotropic, m, x));
    }
    None
}

fn closed_form(state: &BipartiteState, cfg: &OptimizerConfig) -> Result<Option<ClosedForm>, CliError> {
    if let Some((family, m, x)) = detect_family(state) {
        let value = match family {
            Family::Werner => werner_geo_closed(m, x)?,
            Family::Isotropic => isotropic_geo_closed(m, x)?,
        };
        return Ok(Some(ClosedForm { source: family.to_string(), parameter: Some(x), value }));
    }
    if state.dims() == (2, 2) {
        let bloch = to_bloch(state)?;
        let case = two_qubit_case(&bloch);
        let source = match case {
            TwoQubitCase::NoCorrelationTensor => "two-qubit, no correlation tensor",
            TwoQubitCase::Product => "two-qubit, product",
            TwoQubitCase::ZeroMarginals => "two-qubit, zero marginals",
            TwoQubitCase::General => return Ok(None),
        };
        let value = two_qubit_geo(&bloch, cfg)?.value;
        return Ok(Some(ClosedForm { source: source.to_string(), parameter: None, value }));
    }
    Ok(None)
}

pub fn compute_report(state: &BipartiteState, opts: &ComputeOptions) -> Result<Report, CliError> {
    let cfg = &opts.cfg;
    let mut warm = warm_starts::generic(state);
    match detect_family(state) {
        Some((Family::Werner, m, _)) => warm.extend(warm_starts::werner(m, cfg.seed)),
        Some((Family::Isotropic, m, _)) => warm.extend(warm_starts::isotropic(m, cfg.seed)),
        None => {}
    }
    let geo_ab = geo_discord_two_sided_with(state, cfg, &warm)?;
    let geo_a = geo_discord_one_sided(state, Subsystem::A, cfg)?;
    let geo_b = geo_discord_one_sided(state, Subsystem::B, cfg)?;
    let closed = closed_form(state, cfg)?;

    let entropic = if opts.entropic {
        let d_ab = entropic::discord_two_sided_with(state, cfg, &warm)?;
        let d_a = entropic::discord_one_sided(state, Subsystem::A, cfg)?;
        let d_b = entropic::discord_one_sided(state, Subsystem::B, cfg)?;
        Some(EntropicDiscords { d_a: (&d_a).into(), d_b: (&d_b).into(), d_ab: (&d_ab).into() })
    } else {
        None
    };

    let mut report = Report {
        dim_a: state.dim_a(),
        dim_b: state.dim_b(),
        purity: state.purity(),
        mutual_information: entropic::mutual_information(state),
        entropic,
        geometric: GeometricDiscords { d_a: (&geo_a).into(), d_b: (&geo_b).into(), d_ab: (&geo_ab).into() },
        closed_form: closed,
        flags: Vec::new(),
    };
    report.flags = cross_checks(&report);
    Ok(report)
}

/// Consistency checks every record must pass before it is reported as clean.
pub fn cross_checks(r: &Report) -> Vec<String> {
    let mut flags = Vec::new();
    let g = &r.geometric;
    let one = g.d_a.value.max(g.d_b.value);
    if g.d_ab.value < one - HIERARCHY_TOL {
        flags.push(format!(
            "two-sided geometric discord {} below one-sided {}",
            sig9(g.d_ab.value),
            sig9(one)
        ));
    }
    for (name, rec) in [("two-sided", &g.d_ab), ("side A", &g.d_a), ("side B", &g.d_b)] {
        if rec.value < rec.lower_bound - BOUND_TOL {
            flags.push(format!(
                "{name} geometric discord {} below its lower bound {}",
                sig9(rec.value),
                sig9(rec.lower_bound)
            ));
        }
    }
    if let Some(cf) = &r.closed_form {
        if (cf.value - g.d_ab.value).abs() > CLOSED_FORM_TOL {
            flags.push(format!(
                "two-sided geometric discord {} differs from closed form {}",
                sig9(g.d_ab.value),
                sig9(cf.value)
            ));
        }
    }
    if let Some(e) = &r.entropic {
        let one = e.d_a.value.max(e.d_b.value);
        if e.d_ab.value < one - HIERARCHY_TOL {
            flags.push(format!(
                "two-sided entropic discord {} below one-sided {}",
                sig9(e.d_ab.value),
                sig9(one)
            ));
        }
    }
    flags
}

pub const REPORT_CSV_HEADER: &str = "dim_a,dim_b,purity,mutual_information,d_a,d_b,d_ab,geo_a,geo_b,geo_ab,\
lower_bound_ab,lower_bound_a,lower_bound_b,closed_form,restarts,iterations,flags";

pub fn report_csv(r: &Report) -> String {
    let g = &r.geometric;
    let e = r.entropic.as_ref();
    let fields = [
        r.dim_a.to_string(),
        r.dim_b.to_string(),
        sig9(r.purity),
        sig9(r.mutual_information),
        opt(e.map(|e| e.d_a.value)),
        opt(e.map(|e| e.d_b.value)),
        opt(e.map(|e| e.d_ab.value)),
        sig9(g.d_a.value),
        sig9(g.d_b.value),
        sig9(g.d_ab.value),
        sig9(g.d_ab.lower_bound),
        sig9(g.d_a.lower_bound),
        sig9(g.d_b.lower_bound),
        opt(r.closed_form.as_ref().map(|c| c.value)),
        g.d_ab.restarts.to_string(),
        g.d_ab.iterations.to_string(),
        r.flags.join("; ").replace(',', " "),
    ];
    format!("{REPORT_CSV_HEADER}\n{}\n", fields.join(","))
}
