use crate::error::{DiscordError, Result};
use crate::linalg::{self, c, CMatrix};

/// `n²` real parameters per `n × n` unitary.
pub fn param_count(n: usize) -> usize {
    n * n
}

/// Anti-Hermitian generator. Layout: `n(n-1)/2` real antisymmetric entries for pairs
/// `k < l` in lexicographic order, the same number of imaginary symmetric entries, then
/// `n` diagonal phases.
fn generator(params: &[f64], n: usize) -> CMatrix {
    let pairs = n * (n - 1) / 2;
    let mut g = CMatrix::zeros(n, n);
    let mut idx = 0;
    for k in 0..n {
        for l in k + 1..n {
            let re = params[idx];
            let im = params[pairs + idx];
            g[(k, l)] = c(re, im);
            g[(l, k)] = c(-re, im);
            idx += 1;
        }
    }
    for k in 0..n {
        g[(k, k)] = c(0.0, params[2 * pairs + k]);
    }
    g
}

/// `exp(A(params))` for the anti-Hermitian `A` described above; `params = 0` maps to `I`.
pub fn unitary_from_params(params: &[f64], n: usize) -> Result<CMatrix> {
    if params.len() != param_count(n) {
        return Err(DiscordError::dims(
            format!("{} parameters for n = {n}", param_count(n)),
            params.len(),
        ));
    }
    if n == 0 {
        return Ok(CMatrix::zeros(0, 0));
    }
    // A = iH with H Hermitian, so exp(A) = V diag(e^{iλ}) V†.
    let h = generator(params, n) * c(0.0, -1.0);
    let (lambda, v) = linalg::hermitian_eigen(&h);
    let phases = CMatrix::from_diagonal(&lambda.map(|l| c(l.cos(), l.sin())));
    let mut u = &v * phases * v.adjoint();
    linalg::reorthonormalize(&mut u);
    Ok(u)
}

/// A parameter vector `p` with `unitary_from_params(p) = u` (principal logarithm).
pub fn params_from_unitary(u: &CMatrix) -> Result<Vec<f64>> {
    let n = u.nrows();
    let defect = linalg::unitarity_defect(u);
    if u.ncols() != n || defect > 1e-8 {
        return Err(DiscordError::NotUnitary { deviation: defect });
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    let (q, t) = u.clone().schur().unpack();
    let log_diag = CMatrix::from_diagonal(&t.diagonal().map(|z| c(0.0, z.im.atan2(z.re))));
    let a = &q * log_diag * q.adjoint();
    let pairs = n * (n - 1) / 2;
    let mut params = vec![0.0; n * n];
    let mut idx = 0;
    for k in 0..n {
        for l in k + 1..n {
            // Average the two mirrored entries to absorb round-off asymmetry.
            params[idx] = 0.5 * (a[(k, l)].re - a[(l, k)].re);
            params[pairs + idx] = 0.5 * (a[(k, l)].im + a[(l, k)].im);
            idx += 1;
        }
    }
    for k in 0..n {
        params[2 * pairs + k] = a[(k, k)].im;
    }
    Ok(params)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
        (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    #[test]
    fn zero_params_give_identity() {
        for n in 1..=4 {
            let u = unitary_from_params(&vec![0.0; n * n], n).unwrap();
            assert!(max_abs_diff(&u, &CMatrix::identity(n, n)) < 1e-15);
        }
    }

    #[test]
    fn length_mismatch() {
        assert!(unitary_from_params(&[0.0; 3], 2).is_err());
    }

    #[test]
    fn random_params_give_unitaries_and_invert() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for n in 1..=4 {
            for _ in 0..20 {
                let p: Vec<f64> = (0..n * n).map(|_| rng.random_range(-3.0..3.0)).collect();
                let u = unitary_from_params(&p, n).unwrap();
                assert!(linalg::unitarity_defect(&u) < 1e-12);
                let back = unitary_from_params(&params_from_unitary(&u).unwrap(), n).unwrap();
                assert!(max_abs_diff(&u, &back) < 1e-10);
            }
        }
    }

    #[test]
    fn first_order_expansion() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let n = 3;
        let p: Vec<f64> = (0..n * n).map(|_| rng.random_range(-1.0..1.0)).collect();
        for eps in [1e-3, 1e-4] {
            let scaled: Vec<f64> = p.iter().map(|v| v * eps).collect();
            let u = unitary_from_params(&scaled, n).unwrap();
            let linear = CMatrix::identity(n, n) + generator(&scaled, n);
            let err = max_abs_diff(&u, &linear);
            assert!(err < 4.0 * eps * eps, "eps {eps}: err {err}");
        }
    }
}
