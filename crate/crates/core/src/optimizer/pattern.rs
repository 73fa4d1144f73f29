//! Multistart compass search over one or two unitaries.
//!
//! Each start is a seeded random point `unitary_from_params(p)` (or a caller warm start).
//! Local moves right-multiply one unitary by `exp(±h G)` for an elementary generator `G`
//! acting on a pair of columns `(k, l)`: a real rotation or a complex (σ_x-type) rotation.
//! Diagonal phase generators are skipped because they leave every projector unchanged.
//! A poll that improves nothing halves `h`; a successful poll doubles it.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::unitary::{params_from_unitary, unitary_from_params};
use super::{OptimizationResult, OptimizerConfig};
use crate::error::{DiscordError, Result};
use crate::linalg::{self, c, CMatrix};
use crate::measurement::{OrthonormalBasis, ProductMeasurement};
use crate::qstate::Subsystem;

const INITIAL_STEP: f64 = 0.5;
const MAX_STEP: f64 = 1.5;

/// A real objective on pairs of unitaries `(U_A, U_B)` whose columns are the
/// measurement bases. It must be deterministic and bounded.
pub trait ProductObjective: Sync {
    fn dims(&self) -> (usize, usize);

    fn value(&self, ua: &CMatrix, ub: &CMatrix) -> f64;

    /// Evaluator for moves of the `free` side while the other side stays at `fixed`.
    /// Objectives override this to precompute whatever the frozen side determines.
    fn partial<'a>(&'a self, free: Subsystem, fixed: &CMatrix) -> Box<dyn Fn(&CMatrix) -> f64 + 'a> {
        let fixed = fixed.clone();
        match free {
            Subsystem::A => Box::new(move |u| self.value(u, &fixed)),
            Subsystem::B => Box::new(move |u| self.value(&fixed, u)),
        }
    }
}

/// A real objective on a single unitary.
pub trait BasisObjective: Sync {
    fn dim(&self) -> usize;
    fn value(&self, u: &CMatrix) -> f64;
}

/// Adapter for plain closures over [`ProductMeasurement`].
pub struct FnProductObjective<F> {
    dims: (usize, usize),
    f: F,
}

impl<F: Fn(&ProductMeasurement) -> f64 + Sync> FnProductObjective<F> {
    pub fn new(dims: (usize, usize), f: F) -> Self {
        FnProductObjective { dims, f }
    }
}

impl<F: Fn(&ProductMeasurement) -> f64 + Sync> ProductObjective for FnProductObjective<F> {
    fn dims(&self) -> (usize, usize) {
        self.dims
    }

    fn value(&self, ua: &CMatrix, ub: &CMatrix) -> f64 {
        let m = ProductMeasurement::new(
            OrthonormalBasis::from_unitary_unchecked(ua.clone()),
            OrthonormalBasis::from_unitary_unchecked(ub.clone()),
        );
        (self.f)(&m)
    }
}

#[derive(Debug, Clone)]
pub struct ProductSearch {
    pub measurement: ProductMeasurement,
    pub report: OptimizationResult,
}

#[derive(Debug, Clone)]
pub struct BasisSearch {
    pub basis: OrthonormalBasis,
    pub report: OptimizationResult,
}

/// Uniform view over one- and two-block objectives.
trait Blocks: Sync {
    fn dims(&self) -> Vec<usize>;
    fn value(&self, blocks: &[CMatrix]) -> f64;
    fn partial<'a>(&'a self, blocks: &[CMatrix], free: usize) -> Box<dyn Fn(&CMatrix) -> f64 + 'a>;
}

struct ProductBlocks<'o, O>(&'o O);

impl<O: ProductObjective> Blocks for ProductBlocks<'_, O> {
    fn dims(&self) -> Vec<usize> {
        let (a, b) = self.0.dims();
        vec![a, b]
    }

    fn value(&self, blocks: &[CMatrix]) -> f64 {
        self.0.value(&blocks[0], &blocks[1])
    }

    fn partial<'a>(&'a self, blocks: &[CMatrix], free: usize) -> Box<dyn Fn(&CMatrix) -> f64 + 'a> {
        if free == 0 {
            self.0.partial(Subsystem::A, &blocks[1])
        } else {
            self.0.partial(Subsystem::B, &blocks[0])
        }
    }
}

struct SingleBlock<'o, O>(&'o O);

impl<O: BasisObjective> Blocks for SingleBlock<'_, O> {
    fn dims(&self) -> Vec<usize> {
        vec![self.0.dim()]
    }

    fn value(&self, blocks: &[CMatrix]) -> f64 {
        self.0.value(&blocks[0])
    }

    fn partial<'a>(&'a self, _blocks: &[CMatrix], _free: usize) -> Box<dyn Fn(&CMatrix) -> f64 + 'a> {
        Box::new(move |u| self.0.value(u))
    }
}

/// Maximises `objective` over product bases. Warm starts are tried first, then
/// `cfg.restarts` seeded random starts. The best value wins; among values within
/// `cfg.value_tolerance` of each other the lowest start index wins.
pub fn maximize_over_product_bases<O: ProductObjective>(
    objective: &O,
    cfg: &OptimizerConfig,
    warm_starts: &[ProductMeasurement],
) -> Result<ProductSearch> {
    let (na, nb) = objective.dims();
    let mut starts = Vec::with_capacity(warm_starts.len());
    for w in warm_starts {
        if w.dims() != (na, nb) {
            return Err(DiscordError::dims(format!("warm start dims ({na}, {nb})"), format!("{:?}", w.dims())));
        }
        starts.push(vec![w.basis_a.unitary().clone(), w.basis_b.unitary().clone()]);
    }
    let (blocks, report) = run(&ProductBlocks(objective), cfg, starts)?;
    let mut it = blocks.into_iter();
    let ua = it.next().expect("two blocks");
    let ub = it.next().expect("two blocks");
    Ok(ProductSearch {
        measurement: ProductMeasurement::new(
            OrthonormalBasis::from_unitary_unchecked(ua),
            OrthonormalBasis::from_unitary_unchecked(ub),
        ),
        report,
    })
}

/// Single-basis counterpart of [`maximize_over_product_bases`].
pub fn maximize_over_basis<O: BasisObjective>(
    objective: &O,
    cfg: &OptimizerConfig,
    warm_starts: &[OrthonormalBasis],
) -> Result<BasisSearch> {
    let n = objective.dim();
    let mut starts = Vec::with_capacity(warm_starts.len());
    for w in warm_starts {
        if w.dim() != n {
            return Err(DiscordError::dims(format!("warm start dim {n}"), w.dim()));
        }
        starts.push(vec![w.unitary().clone()]);
    }
    let (blocks, report) = run(&SingleBlock(objective), cfg, starts)?;
    let u = blocks.into_iter().next().expect("one block");
    Ok(BasisSearch {
        basis: OrthonormalBasis::from_unitary_unchecked(u),
        report,
    })
}

struct LocalOutcome {
    value: f64,
    blocks: Vec<CMatrix>,
    polls: usize,
    converged: bool,
}

fn run<B: Blocks>(
    engine: &B,
    cfg: &OptimizerConfig,
    warm: Vec<Vec<CMatrix>>,
) -> Result<(Vec<CMatrix>, OptimizationResult)> {
    cfg.validate()?;
    let dims = engine.dims();
    let n_warm = warm.len();
    let total = n_warm + cfg.restarts;

    let outcomes: Vec<LocalOutcome> = (0..total)
        .into_par_iter()
        .map(|i| {
            let start = if i < n_warm {
                warm[i].clone()
            } else {
                random_start(&dims, cfg.seed, (i - n_warm) as u64)
            };
            local_search(engine, start, cfg)
        })
        .collect();

    let mut best: Option<usize> = None;
    for (i, o) in outcomes.iter().enumerate() {
        if !o.value.is_finite() {
            continue;
        }
        match best {
            Some(b) if o.value <= outcomes[b].value + cfg.value_tolerance => {}
            _ => best = Some(i),
        }
    }
    let best = best.ok_or_else(|| DiscordError::OptimizerFailure("objective was never finite".into()))?;
    if !outcomes.iter().any(|o| o.converged) {
        return Err(DiscordError::OptimizerFailure(format!(
            "none of {total} starts converged within {} polls",
            cfg.max_iterations
        )));
    }

    let winner = &outcomes[best];
    let mut blocks = winner.blocks.clone();
    for u in blocks.iter_mut() {
        linalg::reorthonormalize(u);
    }
    let best_value = engine.value(&blocks);
    let mut best_params = Vec::new();
    for u in &blocks {
        best_params.extend(params_from_unitary(u)?);
    }
    let report = OptimizationResult {
        best_value,
        best_params,
        best_restart: best,
        restarts_run: total,
        iterations_total: outcomes.iter().map(|o| o.polls).sum(),
        converged: winner.converged,
    };
    Ok((blocks, report))
}

/// Counter-based stream: start `index` depends only on `(seed, index)`.
fn random_start(dims: &[usize], seed: u64, index: u64) -> Vec<CMatrix> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    dims.iter()
        .map(|&n| {
            let p: Vec<f64> = (0..n * n)
                .map(|_| rng.random_range(-std::f64::consts::PI..std::f64::consts::PI))
                .collect();
            unitary_from_params(&p, n).expect("parameter count matches")
        })
        .collect()
}

#[derive(Clone, Copy)]
enum Rotation {
    Real,
    Complex,
}

fn generators(n: usize) -> Vec<(usize, usize, Rotation)> {
    let mut g = Vec::with_capacity(n * n.saturating_sub(1));
    for k in 0..n {
        for l in k + 1..n {
            g.push((k, l, Rotation::Real));
            g.push((k, l, Rotation::Complex));
        }
    }
    g
}

/// `u · exp(h G_kl)`; only columns `k` and `l` change.
fn rotate(u: &CMatrix, k: usize, l: usize, kind: Rotation, h: f64) -> CMatrix {
    let (s, co) = h.sin_cos();
    let mut out = u.clone();
    for r in 0..u.nrows() {
        let (uk, ul) = (u[(r, k)], u[(r, l)]);
        match kind {
            Rotation::Real => {
                out[(r, k)] = uk * co - ul * s;
                out[(r, l)] = uk * s + ul * co;
            }
            Rotation::Complex => {
                let is = c(0.0, s);
                out[(r, k)] = uk * co + ul * is;
                out[(r, l)] = uk * is + ul * co;
            }
        }
    }
    out
}

fn local_search<B: Blocks>(engine: &B, start: Vec<CMatrix>, cfg: &OptimizerConfig) -> LocalOutcome {
    let dims = engine.dims();
    let gens: Vec<_> = dims.iter().map(|&n| generators(n)).collect();
    let mut blocks = start;
    let mut value = engine.value(&blocks);
    let mut step = INITIAL_STEP;
    // A failed poll at step h leaves at most O(h²) gain near a smooth maximum.
    let stop_step = cfg.step_tolerance.max(cfg.value_tolerance.sqrt());
    let mut polls = 0;
    let mut converged = gens.iter().all(|g| g.is_empty());

    while !converged && polls < cfg.max_iterations {
        polls += 1;
        let mut improved = false;
        for b in 0..blocks.len() {
            if gens[b].is_empty() {
                continue;
            }
            let eval = engine.partial(&blocks, b);
            let mut current = blocks[b].clone();
            for &(k, l, kind) in &gens[b] {
                for h in [step, -step] {
                    let cand = rotate(&current, k, l, kind, h);
                    let v = eval(&cand);
                    if v > value + 4.0 * f64::EPSILON * value.abs().max(1.0) {
                        value = v;
                        current = cand;
                        improved = true;
                        break;
                    }
                }
            }
            blocks[b] = current;
        }
        if improved {
            step = (2.0 * step).min(MAX_STEP);
        } else if step < stop_step {
            converged = true;
        } else {
            step *= 0.5;
        }
    }
    LocalOutcome {
        value,
        blocks,
        polls,
        converged,
    }
}
