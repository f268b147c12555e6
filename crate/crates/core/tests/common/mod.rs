//! Shared generators and independent oracles for the integration tests and
//! the acceptance suite.
#![allow(dead_code)]

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use solenoid_dim::linalg::Matrix;
use solenoid_dim::trig::TrigPolynomial;
use solenoid_dim::{SolenoidParams, SolenoidSpec, Word};

pub fn fixture(name: &str) -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

pub fn gaussian_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> Matrix {
    let data: Vec<f64> = (0..rows * cols).map(|_| StandardNormal.sample(rng)).collect();
    Matrix::new(rows, cols, data).unwrap()
}

fn random_poly(rng: &mut ChaCha8Rng, l: usize, arity: usize, terms: usize, amp: f64) -> TrigPolynomial {
    let mut p = TrigPolynomial::zero(l, arity);
    for _ in 0..terms {
        let freq: Vec<i64> = (0..l).map(|_| rng.random_range(-2..=2)).collect();
        let c: Vec<f64> = (0..arity).map(|_| rng.random_range(-amp..amp)).collect();
        let s: Vec<f64> = (0..arity).map(|_| rng.random_range(-amp..amp)).collect();
        p.push_term(&freq, &c, &s).unwrap();
    }
    p
}

/// A random valid spec: `l ∈ {1, 2}`, `p ∈ {1, 2}`, `d ∈ {0, 1, 2}`,
/// variable rate and (for `p = 2`) variable rotation.
pub fn random_spec(rng: &mut ChaCha8Rng) -> SolenoidSpec {
    let l = rng.random_range(1..=2);
    let p = rng.random_range(1..=2);
    let d = rng.random_range(0..=2);
    let base: Vec<u32> = (0..l).map(|_| rng.random_range(2..=3)).collect();
    let mean = rng.random_range(0.08..0.35);
    let lambda = TrigPolynomial::constant(l, &[mean])
        .with_term(&vec![1; l], &[rng.random_range(-0.03..0.03)], &[rng.random_range(-0.03..0.03)])
        .unwrap();
    let lambda_bar = lambda.scalar_range_bound().1;
    let lambda_low = lambda.scalar_range_bound().0;
    let theta = (p == 2).then(|| random_poly(rng, l, 1, 2, 0.8));
    let f = random_poly(rng, l, p, 3, 0.3);
    let g = random_poly(rng, l, d, 2, 0.2);
    let lambda_tilde = 0.5 * lambda_low;
    SolenoidSpec::new(SolenoidParams {
        base,
        p,
        d,
        e_radius: (1.1 * f.sup_norm_bound() / (1.0 - lambda_bar)).max(0.1),
        f_radius: (1.1 * g.sup_norm_bound() / (1.0 - lambda_tilde)).max(0.1),
        lambda,
        theta,
        f,
        lambda_tilde,
        g,
    })
    .unwrap()
}

pub fn random_word(rng: &mut ChaCha8Rng, spec: &SolenoidSpec, len: usize) -> Word {
    let n = spec.degree() as u32;
    Word::new((0..len).map(|_| rng.random_range(0..n)).collect())
}

pub fn random_point(rng: &mut ChaCha8Rng, l: usize) -> Vec<f64> {
    (0..l).map(|_| rng.random_range(0.0..1.0)).collect()
}

/// Inverse-branch orbit written out from the definitions: symbols are
/// mixed-radix digits (first coordinate most significant), the last symbol
/// is applied first. Returns `x_1` (shallowest) … `x_n` (deepest).
pub fn orbit(base: &[u32], word: &Word, x: &[f64]) -> Vec<Vec<f64>> {
    let mut cur = x.to_vec();
    let mut out = Vec::new();
    for &sym in word.symbols().iter().rev() {
        let mut rem = sym;
        let mut digits = vec![0u32; base.len()];
        for i in (0..base.len()).rev() {
            digits[i] = rem % base[i];
            rem /= base[i];
        }
        cur = cur
            .iter()
            .zip(base)
            .zip(&digits)
            .map(|((xi, &m), &c)| (xi + f64::from(c)) / f64::from(m))
            .collect();
        out.push(cur.clone());
    }
    out
}

/// `Σ_i (Π_{j<i} D_yν(x_j)) D_xν(x_i, y_i) M^{-i}` with `y_i` the value
/// produced by the levels deeper than `i`.
pub fn rho_derivative_series(spec: &SolenoidSpec, x: &[f64], word: &Word) -> Matrix {
    let xs = orbit(spec.base(), word, x);
    let n = xs.len();
    // y_i for i = 1..n, computed deepest first
    let mut ys = vec![vec![0.0; spec.p()]; n + 1];
    for i in (0..n).rev() {
        ys[i] = spec.nu(&xs[i], &ys[i + 1]);
    }
    let mut total = Matrix::zeros(spec.p(), spec.l());
    let mut prefix = Matrix::identity(spec.p());
    for i in 0..n {
        let m_pow: Vec<f64> = spec.base().iter().map(|&m| f64::from(m).powi(-(i as i32 + 1))).collect();
        let term = &(&prefix * &spec.nu_dx(&xs[i], &ys[i + 1])) * &Matrix::diag(&m_pow);
        total = &total + &term;
        prefix = &prefix * &spec.fiber_linear(&xs[i]);
    }
    total
}

/// Central finite difference of the middle-fiber graph value in `x`.
pub fn rho_derivative_fd(spec: &SolenoidSpec, x: &[f64], word: &Word, h: f64) -> Matrix {
    let mut jac = Matrix::zeros(spec.p(), spec.l());
    for j in 0..spec.l() {
        let mut xp = x.to_vec();
        let mut xm = x.to_vec();
        xp[j] += h;
        xm[j] -= h;
        let (yp, _) = solenoid_dim::manifold::graph_value(spec, &xp, word).unwrap();
        let (ym, _) = solenoid_dim::manifold::graph_value(spec, &xm, word).unwrap();
        for i in 0..spec.p() {
            jac.set(i, j, (yp[i] - ym[i]) / (2.0 * h));
        }
    }
    jac
}

fn unit(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    let v: Vec<f64> = (0..n).map(|_| StandardNormal.sample(rng)).collect();
    let norm = v.iter().map(|a| a * a).sum::<f64>().sqrt();
    v.into_iter().map(|a| a / norm).collect()
}

fn adjoint_norm_sq(a: &Matrix, v: &[f64]) -> f64 {
    (0..a.cols())
        .map(|j| (0..a.rows()).map(|i| a.get(i, j) * v[i]).sum::<f64>().powi(2))
        .sum()
}

/// Brute-force `min_{|v| = 1} |Aᵀv|` for a wide `A`: the best of `samples`
/// random unit vectors, polished by projected gradient descent on the
/// sphere. No eigen-solver involved.
pub fn brute_force_margin(rng: &mut ChaCha8Rng, a: &Matrix, samples: usize) -> f64 {
    let n = a.rows();
    let mut best = unit(rng, n);
    let mut best_val = adjoint_norm_sq(a, &best);
    for _ in 0..samples {
        let v = unit(rng, n);
        let val = adjoint_norm_sq(a, &v);
        if val < best_val {
            best = v;
            best_val = val;
        }
    }
    let scale: f64 = (0..n)
        .map(|i| (0..a.cols()).map(|j| a.get(i, j).powi(2)).sum::<f64>())
        .sum();
    let step = 0.5 / scale.max(1e-300);
    let mut v = best;
    for _ in 0..1_000_000 {
        // gradient of |Aᵀv|² is 2 A Aᵀ v; its tangential part vanishes at
        // the minimizer
        let atv: Vec<f64> = (0..a.cols())
            .map(|j| (0..n).map(|i| a.get(i, j) * v[i]).sum())
            .collect();
        let aatv: Vec<f64> = (0..n)
            .map(|i| (0..a.cols()).map(|j| a.get(i, j) * atv[j]).sum::<f64>())
            .collect();
        let val = atv.iter().map(|t| t * t).sum::<f64>();
        let residual = aatv
            .iter()
            .zip(&v)
            .map(|(g, vi)| (g - val * vi).powi(2))
            .sum::<f64>()
            .sqrt();
        if residual < 1e-13 * scale {
            break;
        }
        let mut w: Vec<f64> = v.iter().zip(&aatv).map(|(vi, gi)| vi - 2.0 * step * gi).collect();
        let norm = w.iter().map(|t| t * t).sum::<f64>().sqrt();
        w.iter_mut().for_each(|t| *t /= norm);
        v = w;
    }
    let val = adjoint_norm_sq(a, &v).min(best_val);
    val.max(0.0).sqrt()
}
