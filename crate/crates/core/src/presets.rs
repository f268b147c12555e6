//! Ready-made members of the solenoid family used throughout the examples
//! and tests.

use crate::model::{SolenoidParams, SolenoidSpec};
use crate::trig::TrigPolynomial;

fn build(params: SolenoidParams) -> SolenoidSpec {
    SolenoidSpec::new(params).expect("preset parameters are valid")
}

/// Radius `R` with `rate * R + translation <= R`, padded by 5%.
fn invariant_radius(rate: f64, translation: f64) -> f64 {
    (1.05 * translation / (1.0 - rate)).max(0.5)
}

/// Constant rate `lambda`, zero translations (`f ≡ 0`, `g ≡ 0`), `d = 1`.
pub fn linear(base: &[u32], lambda: f64, p: usize) -> SolenoidSpec {
    let l = base.len();
    build(SolenoidParams {
        base: base.to_vec(),
        p,
        d: 1,
        lambda: TrigPolynomial::constant(l, &[lambda]),
        theta: None,
        f: TrigPolynomial::zero(l, p),
        lambda_tilde: lambda / 2.0,
        g: TrigPolynomial::zero(l, 1),
        e_radius: 1.0,
        f_radius: 1.0,
    })
}

/// Planar-fiber Smale–Williams type solenoid over the doubling map:
/// `ν = λy + ε(cos 2πx, sin 2πx)`, `ψ = (λ/2)z + (ε/2) sin 2πx`.
pub fn smale_williams(lambda: f64, eps: f64) -> SolenoidSpec {
    let f = TrigPolynomial::zero(1, 2)
        .with_term(&[1], &[eps, 0.0], &[0.0, eps])
        .expect("valid term");
    let g = TrigPolynomial::zero(1, 1)
        .with_term(&[1], &[0.0], &[eps / 2.0])
        .expect("valid term");
    let lambda_tilde = lambda / 2.0;
    build(SolenoidParams {
        base: vec![2],
        p: 2,
        d: 1,
        lambda: TrigPolynomial::constant(1, &[lambda]),
        theta: None,
        e_radius: invariant_radius(lambda, f.sup_norm_bound()),
        f_radius: invariant_radius(lambda_tilde, g.sup_norm_bound()),
        f,
        lambda_tilde,
        g,
    })
}

/// One-dimensional fibers over the doubling map with constant rate and a
/// cosine translation. Unit-diameter middle fiber (`diam E = 1`).
/// Valid for `0 < lambda <= 0.4`.
pub fn interval_constant(lambda: f64) -> SolenoidSpec {
    interval_with_rate(TrigPolynomial::constant(1, &[lambda]), lambda)
}

/// Variable rate `λ(x) = mean + amp·cos 2πx` over the doubling map with
/// one-dimensional fibers and `diam E = 1`.
pub fn variable_rate(mean: f64, amp: f64) -> SolenoidSpec {
    let lambda = TrigPolynomial::constant(1, &[mean])
        .with_term(&[1], &[amp], &[0.0])
        .expect("valid term");
    interval_with_rate(lambda, mean - amp.abs())
}

fn interval_with_rate(lambda: TrigPolynomial, lambda_low: f64) -> SolenoidSpec {
    let f = TrigPolynomial::zero(1, 1)
        .with_term(&[1], &[0.3], &[0.0])
        .expect("valid term");
    let g = TrigPolynomial::zero(1, 1)
        .with_term(&[1], &[0.0], &[0.1])
        .expect("valid term");
    build(SolenoidParams {
        base: vec![2],
        p: 1,
        d: 1,
        lambda,
        theta: None,
        f,
        lambda_tilde: lambda_low / 2.0,
        g,
        e_radius: 0.5,
        f_radius: 0.5,
    })
}

/// Planar fiber with variable rate `mean + amp·cos 2πx` and a variable
/// rotation angle.
pub fn rotating(mean: f64, amp: f64, eps: f64) -> SolenoidSpec {
    let lambda = TrigPolynomial::constant(1, &[mean])
        .with_term(&[1], &[amp], &[0.0])
        .expect("valid term");
    let theta = TrigPolynomial::constant(1, &[0.7])
        .with_term(&[1], &[0.0], &[0.5])
        .expect("valid term");
    let f = TrigPolynomial::zero(1, 2)
        .with_term(&[1], &[eps, 0.0], &[0.0, eps])
        .expect("valid term")
        .with_term(&[2], &[0.0, 0.3 * eps], &[0.2 * eps, 0.0])
        .expect("valid term");
    let lambda_bar = mean + amp.abs();
    build(SolenoidParams {
        base: vec![2],
        p: 2,
        d: 1,
        lambda,
        theta: Some(theta),
        e_radius: invariant_radius(lambda_bar, f.sup_norm_bound()),
        f,
        lambda_tilde: (mean - amp.abs()) / 2.0,
        g: TrigPolynomial::zero(1, 1),
        f_radius: 1.0,
    })
}

/// A spec whose attractor is the graph of `h(x) = amp·cos 2πx`:
/// `ν(x, y) = λy + h(2x) − λh(x)`, so every stable slice is a single point.
pub fn graph_attractor(lambda: f64, amp: f64) -> SolenoidSpec {
    let f = TrigPolynomial::zero(1, 1)
        .with_term(&[2], &[amp], &[0.0])
        .expect("valid term")
        .with_term(&[1], &[-lambda * amp], &[0.0])
        .expect("valid term");
    build(SolenoidParams {
        base: vec![2],
        p: 1,
        d: 1,
        lambda: TrigPolynomial::constant(1, &[lambda]),
        theta: None,
        e_radius: invariant_radius(lambda, f.sup_norm_bound()),
        f,
        lambda_tilde: lambda / 2.0,
        g: TrigPolynomial::zero(1, 1),
        f_radius: 1.0,
    })
}

/// Two-dimensional base `M = diag(2, 2)` with a planar fiber whose
/// translation mixes the frequencies (1,0), (0,1) and (1,1), so that the
/// derivative differences between distinct one-step branches have full rank
/// away from a thin set.
pub fn planar_mixing(lambda: f64, amp: f64) -> SolenoidSpec {
    let f = TrigPolynomial::zero(2, 2)
        .with_term(&[1, 0], &[amp, 0.0], &[0.0, 0.0])
        .expect("valid term")
        .with_term(&[0, 1], &[0.0, amp], &[0.0, 0.0])
        .expect("valid term")
        .with_term(&[1, 1], &[0.0, amp], &[amp, 0.0])
        .expect("valid term");
    build(SolenoidParams {
        base: vec![2, 2],
        p: 2,
        d: 1,
        lambda: TrigPolynomial::constant(2, &[lambda]),
        theta: None,
        e_radius: invariant_radius(lambda, f.sup_norm_bound()),
        f,
        lambda_tilde: lambda / 2.0,
        g: TrigPolynomial::zero(2, 1)
            .with_term(&[1, 0], &[0.0], &[0.2 * amp])
            .expect("valid term"),
        f_radius: 1.0,
    })
}
