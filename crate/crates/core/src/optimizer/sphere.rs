//! The two-qubit Bloch-sphere problem `max (a·x)² + (b·y)² + (aᵗTb)²` over unit `a`, `b`.
//!
//! For fixed `b` the objective is the quadratic form of `xxᵗ + (Tb)(Tb)ᵗ` in `a` (plus a
//! constant), so each half-step of the alternating scheme is an exact top-eigenvector
//! solve and the value sequence never decreases.

use nalgebra::{Matrix3, Vector3};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::{OptimizationResult, OptimizerConfig};
use crate::error::Result;
use crate::qstate::TwoQubitBloch;

/// `(a·x)² + (b·y)² + (aᵗTb)²`.
pub fn bloch_objective(bloch: &TwoQubitBloch, a: &Vector3<f64>, b: &Vector3<f64>) -> f64 {
    let ax = a.dot(&bloch.x);
    let by = b.dot(&bloch.y);
    let atb = a.dot(&(bloch.t * b));
    ax * ax + by * by + atb * atb
}

#[derive(Debug, Clone, PartialEq)]
pub struct SphereMaximum {
    pub a: Vector3<f64>,
    pub b: Vector3<f64>,
    pub value: f64,
    pub report: OptimizationResult,
}

/// Top eigenpair of `uuᵗ + vvᵗ`, computed inside `span{u, v}` through the 2×2 Gram
/// matrix. Returns `None` when the matrix vanishes.
fn top_eigen_rank2(u: &Vector3<f64>, v: &Vector3<f64>) -> Option<(f64, Vector3<f64>)> {
    let (p, q, s) = (u.dot(u), u.dot(v), v.dot(v));
    let lambda = 0.5 * (p + s) + (0.25 * (p - s) * (p - s) + q * q).sqrt();
    if lambda <= 0.0 {
        return None;
    }
    // Two algebraically equivalent eigenvectors of the Gram matrix; take the larger.
    let c1 = (lambda - s, q);
    let c2 = (q, lambda - p);
    let (g0, g1) = if c1.0.hypot(c1.1) >= c2.0.hypot(c2.1) { c1 } else { c2 };
    let (g0, g1) = if g0 == 0.0 && g1 == 0.0 {
        if p >= s { (1.0, 0.0) } else { (0.0, 1.0) }
    } else {
        (g0, g1)
    };
    let w = u * g0 + v * g1;
    let n = w.norm();
    if n == 0.0 || !n.is_finite() {
        return None;
    }
    Some((lambda, w / n))
}

/// Best `a` for fixed `b` (keeps `current` if the quadratic form vanishes).
fn best_a(bloch: &TwoQubitBloch, b: &Vector3<f64>, current: &Vector3<f64>) -> Vector3<f64> {
    top_eigen_rank2(&bloch.x, &(bloch.t * b)).map_or(*current, |(_, v)| v)
}

fn best_b(bloch: &TwoQubitBloch, a: &Vector3<f64>, current: &Vector3<f64>) -> Vector3<f64> {
    top_eigen_rank2(&bloch.y, &(bloch.t.transpose() * a)).map_or(*current, |(_, v)| v)
}

fn normalized_or(v: &Vector3<f64>, fallback: Vector3<f64>) -> Vector3<f64> {
    let n = v.norm();
    if n > 1e-12 {
        v / n
    } else {
        fallback
    }
}

/// Deterministic starting directions for `b`: `ŷ`, the top right singular vector of
/// `T`, the coordinate axes, then `cfg.restarts` seeded random unit vectors.
fn starts(bloch: &TwoQubitBloch, cfg: &OptimizerConfig) -> Vec<Vector3<f64>> {
    let mut out = Vec::with_capacity(cfg.restarts + 5);
    if bloch.y.norm() > 1e-12 {
        out.push(bloch.y.normalize());
    }
    let tt: Matrix3<f64> = bloch.t.transpose() * bloch.t;
    let eig = tt.symmetric_eigen();
    let top = eig.eigenvalues.imax();
    if eig.eigenvalues[top] > 0.0 {
        out.push(normalized_or(&eig.eigenvectors.column(top).into_owned(), Vector3::z()));
    }
    out.extend([Vector3::x(), Vector3::y(), Vector3::z()]);
    for i in 0..cfg.restarts {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        rng.set_stream(i as u64);
        let v = Vector3::from_fn(|_, _| StandardNormal.sample(&mut rng));
        out.push(normalized_or(&v, Vector3::z()));
    }
    out
}

/// Value after each half-step, starting from `b0`; used to exhibit monotonicity.
pub fn alternating_trace(bloch: &TwoQubitBloch, b0: &Vector3<f64>, steps: usize) -> Vec<f64> {
    let mut b = normalized_or(b0, Vector3::z());
    let mut a = Vector3::z();
    let mut values = Vec::with_capacity(2 * steps);
    for _ in 0..steps {
        a = best_a(bloch, &b, &a);
        values.push(bloch_objective(bloch, &a, &b));
        b = best_b(bloch, &a, &b);
        values.push(bloch_objective(bloch, &a, &b));
    }
    values
}

struct Run {
    idx: usize,
    a: Vector3<f64>,
    b: Vector3<f64>,
    value: f64,
    converged: bool,
}

/// Multistart alternating maximisation. The value stops changing by more than
/// `cfg.value_tolerance` or the iteration budget runs out; the best start wins with
/// the same lowest-index tie-break as the basis searches.
pub fn alternating_sphere_max(bloch: &TwoQubitBloch, cfg: &OptimizerConfig) -> Result<SphereMaximum> {
    cfg.validate()?;
    let starts = starts(bloch, cfg);
    let mut best: Option<Run> = None;
    let mut iterations_total = 0;
    for (idx, b0) in starts.iter().enumerate() {
        let mut b = *b0;
        let mut a = Vector3::z();
        let mut value = f64::NEG_INFINITY;
        let mut converged = false;
        for _ in 0..cfg.max_iterations {
            iterations_total += 1;
            a = best_a(bloch, &b, &a);
            b = best_b(bloch, &a, &b);
            let v = bloch_objective(bloch, &a, &b);
            let gain = v - value;
            value = value.max(v);
            if gain <= cfg.value_tolerance {
                converged = true;
                break;
            }
        }
        match &best {
            Some(r) if value <= r.value + cfg.value_tolerance => {}
            _ => best = Some(Run { idx, a, b, value, converged }),
        }
    }
    let Run { idx, a, b, converged, .. } = best.expect("at least the coordinate starts exist");
    let (a, b) = (a.normalize(), b.normalize());
    let value = bloch_objective(bloch, &a, &b);
    Ok(SphereMaximum {
        a,
        b,
        value,
        report: OptimizationResult {
            best_value: value,
            best_params: a.iter().chain(b.iter()).copied().collect(),
            best_restart: idx,
            restarts_run: starts.len(),
            iterations_total,
            converged,
        },
    })
}

/// Latitude–longitude grid with poles included: `θ_i = iπ/r` for `i = 0..=r` and
/// `φ_j = jπ/r` for `j < 2r`. Doubling `r` refines the grid without moving any point.
pub fn sphere_grid(resolution: usize) -> Vec<Vector3<f64>> {
    let r = resolution.max(1);
    let step = std::f64::consts::PI / r as f64;
    let mut pts = Vec::with_capacity((r + 1) * 2 * r);
    for i in 0..=r {
        let (st, ct) = (i as f64 * step).sin_cos();
        for j in 0..2 * r {
            let (sp, cp) = (j as f64 * step).sin_cos();
            pts.push(Vector3::new(st * cp, st * sp, ct));
        }
    }
    pts
}

/// Grid certification of the sphere maximum: `a` ranges over [`sphere_grid`] and the
/// maximum over `b` is taken exactly (`(a·x)² + λ_max(yyᵗ + ccᵗ)` with `c = Tᵗa`).
/// Never exceeds the true maximum and is nondecreasing under resolution doubling.
pub fn sphere_grid_oracle(bloch: &TwoQubitBloch, resolution: usize) -> f64 {
    let tt = bloch.t.transpose();
    sphere_grid(resolution)
        .iter()
        .map(|a| {
            let ax = a.dot(&bloch.x);
            let inner = top_eigen_rank2(&bloch.y, &(tt * a)).map_or(0.0, |(l, _)| l);
            ax * ax + inner
        })
        .fold(0.0, f64::max)
}

/// Fully exhaustive `O(r⁴)` grid over both spheres; only practical for small `r`.
pub fn sphere_grid_oracle_exhaustive(bloch: &TwoQubitBloch, resolution: usize) -> f64 {
    let grid = sphere_grid(resolution);
    let mut best = 0.0f64;
    for a in &grid {
        for b in &grid {
            best = best.max(bloch_objective(bloch, a, b));
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bell() -> TwoQubitBloch {
        TwoQubitBloch::new(Vector3::zeros(), Vector3::zeros(), Matrix3::from_diagonal(&Vector3::new(1.0, -1.0, 1.0)))
    }

    fn random_physical(seed: u64) -> TwoQubitBloch {
        let s = crate::qstate::random_state(2, 2, 4, seed).unwrap();
        crate::qstate::to_bloch(&s).unwrap()
    }

    #[test]
    fn bell_value_is_one() {
        let r = alternating_sphere_max(&bell(), &OptimizerConfig::default()).unwrap();
        assert!((r.value - 1.0).abs() < 1e-12);
        assert!((r.a.norm() - 1.0).abs() < 1e-12 && (r.b.norm() - 1.0).abs() < 1e-12);
        assert!((r.a.dot(&(bell().t * r.b)).abs() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn decoupled_maxima() {
        let b = TwoQubitBloch::new(Vector3::z(), Vector3::x(), Matrix3::zeros());
        let r = alternating_sphere_max(&b, &OptimizerConfig::default()).unwrap();
        assert!((r.value - 2.0).abs() < 1e-12);
        assert!((r.a.dot(&Vector3::z()).abs() - 1.0).abs() < 1e-12);
        assert!((r.b.dot(&Vector3::x()).abs() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn trace_is_nondecreasing() {
        for seed in 0..30 {
            let b = random_physical(seed);
            let trace = alternating_trace(&b, &Vector3::new(0.3, -0.2, 0.9), 25);
            for w in trace.windows(2) {
                assert!(w[1] >= w[0] - 1e-14, "seed {seed}: {w:?}");
            }
        }
    }

    #[test]
    fn zero_data_gives_zero() {
        let z = TwoQubitBloch::new(Vector3::zeros(), Vector3::zeros(), Matrix3::zeros());
        assert_eq!(sphere_grid_oracle(&z, 8), 0.0);
        assert_eq!(sphere_grid_oracle_exhaustive(&z, 8), 0.0);
        assert_eq!(alternating_sphere_max(&z, &OptimizerConfig::default()).unwrap().value, 0.0);
    }

    #[test]
    fn grid_oracle_refines_monotonically() {
        for seed in 0..5 {
            let b = random_physical(100 + seed);
            let v: Vec<f64> = [25, 50, 100, 200].iter().map(|&r| sphere_grid_oracle(&b, r)).collect();
            for w in v.windows(2) {
                assert!(w[1] >= w[0]);
            }
            let exact = alternating_sphere_max(&b, &OptimizerConfig::default()).unwrap().value;
            assert!(v[3] <= exact + 1e-12);
        }
        // Bell: the optimum lies on the grid at every resolution here.
        assert!((sphere_grid_oracle(&bell(), 50) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn exhaustive_grid_bounded_by_semi_exact_grid() {
        for seed in 0..3 {
            let b = random_physical(200 + seed);
            let ex = sphere_grid_oracle_exhaustive(&b, 12);
            let semi = sphere_grid_oracle(&b, 12);
            assert!(ex <= semi + 1e-12);
            assert!(semi - ex < 0.05);
        }
    }

    #[test]
    fn deterministic() {
        let b = random_physical(9);
        let cfg = OptimizerConfig::default().with_seed(4);
        assert_eq!(alternating_sphere_max(&b, &cfg).unwrap(), alternating_sphere_max(&b, &cfg).unwrap());
    }
}
