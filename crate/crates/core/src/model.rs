//! The supported family of solenoid embeddings
//! `T(x, y, z) = (Mx mod 1, λ(x)R(θ(x))y + f(x), λ̃z + g(x))`
//! together with its rate bounds and the decidable hypothesis checks.

use std::f64::consts::TAU;

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::trig::TrigPolynomial;

/// Tolerance beyond the fiber radii still accepted by [`SolenoidSpec::apply`].
pub const DOMAIN_SLACK: f64 = 1e-12;

/// Raw ingredients of a [`SolenoidSpec`]; validated by [`SolenoidSpec::new`].
#[derive(Debug, Clone)]
pub struct SolenoidParams {
    /// Diagonal of the expanding integer matrix `M`; its length is `l`.
    pub base: Vec<u32>,
    /// Middle-fiber dimension `p` (1 or 2).
    pub p: usize,
    /// Inner-fiber dimension `d`.
    pub d: usize,
    /// Scalar conformal factor `λ(x)`.
    pub lambda: TrigPolynomial,
    /// Rotation angle in radians (`p = 2` only).
    pub theta: Option<TrigPolynomial>,
    /// Translation part of the middle fiber map, `R^p`-valued.
    pub f: TrigPolynomial,
    /// Inner contraction rate `λ̃`.
    pub lambda_tilde: f64,
    /// Translation part of the inner fiber map, `R^d`-valued.
    pub g: TrigPolynomial,
    pub e_radius: f64,
    pub f_radius: f64,
}

/// Rate bounds of a spec. `lambda_*` bound `λ(x)`, `beta_*` bound `Dφ`.
#[derive(Debug, Clone, PartialEq)]
pub struct RateBounds {
    pub lambda_bar: f64,
    pub lambda_low: f64,
    pub beta_bar: f64,
    pub beta_low: f64,
    pub degree: u64,
    pub lambda_tilde: f64,
    /// Grid-scan extremes of `λ`, reported for tightness only.
    pub grid_min: f64,
    pub grid_max: f64,
}

/// A point of `V = T^l × E × F`.
#[derive(Debug, Clone, PartialEq)]
pub struct Point {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub z: Vec<f64>,
}

impl Point {
    pub fn new(x: Vec<f64>, y: Vec<f64>, z: Vec<f64>) -> Self {
        Self { x, y, z }
    }
}

/// A validated, immutable member of the solenoid family.
#[derive(Debug, Clone)]
pub struct SolenoidSpec {
    params: SolenoidParams,
    bounds: RateBounds,
}

pub(crate) fn reduce_mod1(v: f64) -> f64 {
    let r = v.rem_euclid(1.0);
    // rem_euclid may round up to exactly 1.0 for tiny negative inputs
    if r >= 1.0 {
        0.0
    } else {
        r
    }
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|a| a * a).sum::<f64>().sqrt()
}

impl SolenoidSpec {
    pub fn new(params: SolenoidParams) -> Result<Self> {
        let l = params.base.len();
        if l == 0 {
            return Err(Error::InvalidSpec("base dimension l must be >= 1".into()));
        }
        if let Some(m) = params.base.iter().find(|&&m| m < 2) {
            return Err(Error::InvalidSpec(format!(
                "diagonal entries of M must be >= 2, got {m}"
            )));
        }
        if !(1..=2).contains(&params.p) {
            return Err(Error::InvalidSpec(format!(
                "middle-fiber dimension p must be 1 or 2, got {}",
                params.p
            )));
        }
        let dims_ok = params.lambda.dim() == l
            && params.lambda.arity() == 1
            && params.f.dim() == l
            && params.f.arity() == params.p
            && params.g.dim() == l
            && params.g.arity() == params.d;
        if !dims_ok {
            return Err(Error::InvalidSpec(
                "field dimensions disagree with (l, p, d)".into(),
            ));
        }
        match (&params.theta, params.p) {
            (Some(_), 1) => {
                return Err(Error::InvalidSpec(
                    "a rotation field is only meaningful for p = 2".into(),
                ))
            }
            (Some(t), _) if t.dim() != l || t.arity() != 1 => {
                return Err(Error::InvalidSpec("rotation field must be scalar on T^l".into()))
            }
            _ => {}
        }
        if !(params.e_radius > 0.0 && params.f_radius > 0.0)
            || !params.e_radius.is_finite()
            || !params.f_radius.is_finite()
        {
            return Err(Error::InvalidSpec("fiber radii must be positive".into()));
        }
        let bounds = compute_rate_bounds(&params)?;
        if !(params.lambda_tilde > 0.0 && params.lambda_tilde < bounds.lambda_low) {
            return Err(Error::InvalidSpec(format!(
                "inner rate must satisfy 0 < lambda_tilde < inf lambda = {}, got {}",
                bounds.lambda_low, params.lambda_tilde
            )));
        }
        let e_need = bounds.lambda_bar * params.e_radius + params.f.sup_norm_bound();
        if e_need > params.e_radius {
            return Err(Error::InvalidSpec(format!(
                "nu does not map E into E: sup lambda * R_E + sup|f| = {e_need} > R_E = {}",
                params.e_radius
            )));
        }
        let f_need = params.lambda_tilde * params.f_radius + params.g.sup_norm_bound();
        if f_need > params.f_radius {
            return Err(Error::InvalidSpec(format!(
                "psi does not map F into F: lambda_tilde * R_F + sup|g| = {f_need} > R_F = {}",
                params.f_radius
            )));
        }
        Ok(Self { params, bounds })
    }

    pub fn params(&self) -> &SolenoidParams {
        &self.params
    }

    pub fn l(&self) -> usize {
        self.params.base.len()
    }

    pub fn p(&self) -> usize {
        self.params.p
    }

    pub fn d(&self) -> usize {
        self.params.d
    }

    /// Diagonal of `M`.
    pub fn base(&self) -> &[u32] {
        &self.params.base
    }

    /// Degree `N = det M`, the alphabet size of the symbolic coding.
    pub fn degree(&self) -> u64 {
        self.bounds.degree
    }

    pub fn rate_bounds(&self) -> &RateBounds {
        &self.bounds
    }

    pub fn lambda_tilde(&self) -> f64 {
        self.params.lambda_tilde
    }

    pub fn e_diameter(&self) -> f64 {
        2.0 * self.params.e_radius
    }

    pub fn f_diameter(&self) -> f64 {
        2.0 * self.params.f_radius
    }

    /// `λ(x)`
    pub fn lambda_at(&self, x: &[f64]) -> f64 {
        self.params.lambda.eval_scalar(x)
    }

    fn theta_at(&self, x: &[f64]) -> f64 {
        self.params.theta.as_ref().map_or(0.0, |t| t.eval_scalar(x))
    }

    /// `D_yν(x) = λ(x)R(θ(x))`, a `p × p` conformal matrix.
    pub fn fiber_linear(&self, x: &[f64]) -> Matrix {
        let lam = self.lambda_at(x);
        match self.p() {
            1 => Matrix::diag(&[lam]),
            _ => {
                let (s, c) = self.theta_at(x).sin_cos();
                Matrix::new(2, 2, vec![lam * c, -lam * s, lam * s, lam * c])
                    .expect("finite rotation")
            }
        }
    }

    /// `ν(x, y)`
    pub fn nu(&self, x: &[f64], y: &[f64]) -> Vec<f64> {
        let mut out = self.params.f.eval(x);
        let lin = self.fiber_linear(x);
        for (o, v) in out.iter_mut().zip(lin.apply(y)) {
            *o += v;
        }
        out
    }

    /// `ψ(x, y, z)`; independent of `y` in this family.
    pub fn psi(&self, x: &[f64], z: &[f64]) -> Vec<f64> {
        let mut out = self.params.g.eval(x);
        for (o, zi) in out.iter_mut().zip(z) {
            *o += self.params.lambda_tilde * zi;
        }
        out
    }

    /// `D_xν(x, y)`, a `p × l` matrix.
    pub fn nu_dx(&self, x: &[f64], y: &[f64]) -> Matrix {
        let mut jac = self.params.f.jacobian(x);
        let lam = self.lambda_at(x);
        let dlam = self.params.lambda.gradient(x);
        let l = self.l();
        match self.p() {
            1 => {
                for (j, dl) in dlam.iter().enumerate() {
                    jac.set(0, j, jac.get(0, j) + dl * y[0]);
                }
            }
            _ => {
                let (s, c) = self.theta_at(x).sin_cos();
                let ry = [c * y[0] - s * y[1], s * y[0] + c * y[1]];
                // dR/dθ · y
                let dry = [-s * y[0] - c * y[1], c * y[0] - s * y[1]];
                let dtheta = self
                    .params
                    .theta
                    .as_ref()
                    .map_or_else(|| vec![0.0; l], |t| t.gradient(x));
                for j in 0..l {
                    for i in 0..2 {
                        let v = dlam[j] * ry[i] + lam * dtheta[j] * dry[i];
                        jac.set(i, j, jac.get(i, j) + v);
                    }
                }
            }
        }
        jac
    }

    /// Base map `φ(x) = Mx mod 1`.
    pub fn base_map(&self, x: &[f64]) -> Vec<f64> {
        x.iter()
            .zip(&self.params.base)
            .map(|(&xi, &m)| reduce_mod1(f64::from(m) * xi))
            .collect()
    }

    /// Applies `T`; fails when `(y, z)` lies outside `E × F`.
    pub fn apply(&self, point: &Point) -> Result<Point> {
        if point.x.len() != self.l() || point.y.len() != self.p() || point.z.len() != self.d() {
            return Err(Error::Shape("point dimensions disagree with (l, p, d)".into()));
        }
        let ny = norm(&point.y);
        if ny > self.params.e_radius + DOMAIN_SLACK {
            return Err(Error::Domain(format!(
                "|y| = {ny} exceeds E radius {}",
                self.params.e_radius
            )));
        }
        let nz = norm(&point.z);
        if nz > self.params.f_radius + DOMAIN_SLACK {
            return Err(Error::Domain(format!(
                "|z| = {nz} exceeds F radius {}",
                self.params.f_radius
            )));
        }
        Ok(Point {
            x: self.base_map(&point.x),
            y: self.nu(&point.x, &point.y),
            z: self.psi(&point.x, &point.z),
        })
    }

    /// Canonical hash of the spec, stable across runs and platforms.
    pub fn hash(&self) -> String {
        crate::config::spec_hash(self)
    }
}

fn compute_rate_bounds(params: &SolenoidParams) -> Result<RateBounds> {
    let (lambda_low, lambda_bar) = params.lambda.scalar_range_bound();
    if !(lambda_low > 0.0 && lambda_bar < 1.0) {
        return Err(Error::InvalidSpec(format!(
            "lambda bound [{lambda_low}, {lambda_bar}] leaves (0, 1)"
        )));
    }
    let degree = params
        .base
        .iter()
        .try_fold(1u64, |acc, &m| acc.checked_mul(u64::from(m)))
        .ok_or_else(|| Error::InvalidSpec("degree overflows u64".into()))?;
    let (grid_min, grid_max) = grid_scan(&params.lambda);
    Ok(RateBounds {
        lambda_bar,
        lambda_low,
        beta_bar: f64::from(*params.base.iter().max().expect("l >= 1")),
        beta_low: f64::from(*params.base.iter().min().expect("l >= 1")),
        degree,
        lambda_tilde: params.lambda_tilde,
        grid_min,
        grid_max,
    })
}

/// Min/max of a scalar field over a uniform grid of at most 2^16 points.
fn grid_scan(field: &TrigPolynomial) -> (f64, f64) {
    let l = field.dim();
    let per_dim = ((1u64 << 16) as f64).powf(1.0 / l as f64).floor().max(2.0) as u64;
    let per_dim = per_dim.min(4096);
    let total = per_dim.pow(l as u32);
    let mut x = vec![0.0; l];
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for idx in 0..total {
        let mut rem = idx;
        for xi in x.iter_mut() {
            *xi = (rem % per_dim) as f64 / per_dim as f64;
            rem /= per_dim;
        }
        let v = field.eval_scalar(&x);
        lo = lo.min(v);
        hi = hi.max(v);
    }
    (lo, hi)
}

/// Outcome of the hypothesis checks; `*_slack` fields are `rhs - lhs`
/// (positive means the strict inequality holds).
#[derive(Debug, Clone, PartialEq)]
pub struct HypothesisReport {
    /// `0 < λ̃ < λ̲ ≤ λ̄ < 1`
    pub cone_ok: bool,
    /// Fiber derivative conformal; structural for `p ∈ {1, 2}`.
    pub conformal_ok: bool,
    pub tstar_first_ok: bool,
    pub tstar_second_ok: bool,
    pub tstar_ok: bool,
    pub estar_ok: bool,
    pub tstar_first_rhs: f64,
    pub tstar_second_rhs: f64,
    pub estar_lhs: f64,
    pub estar_rhs: f64,
    pub mu0: f64,
    pub mu_upper: f64,
    /// `(μ₀, log λ̄ / (2 log λ̲))` when nonempty.
    pub mu_interval: Option<(f64, f64)>,
}

impl HypothesisReport {
    pub fn tstar_first_slack(&self, bounds: &RateBounds) -> f64 {
        self.tstar_first_rhs - bounds.lambda_bar
    }

    pub fn tstar_second_slack(&self, bounds: &RateBounds) -> f64 {
        self.tstar_second_rhs - bounds.lambda_bar
    }

    pub fn estar_slack(&self) -> f64 {
        self.estar_rhs - self.estar_lhs
    }
}

/// Evaluates the strong-contraction set, the near-conformal set and `μ₀`.
///
/// All logarithms are natural.
pub fn check_hypotheses(bounds: &RateBounds, l: usize, p: usize) -> Result<HypothesisReport> {
    let RateBounds {
        lambda_bar: lb,
        lambda_low: ll,
        beta_bar: bb,
        beta_low: bl,
        degree,
        lambda_tilde,
        ..
    } = *bounds;
    let n = degree as f64;
    let (lf, pf) = (l as f64, p as f64);
    let log_n = n.ln();
    if lb >= 1.0 || ll <= 0.0 || log_n == 0.0 {
        return Err(Error::InvalidSpec("degenerate rates (lambda = 1 or N = 1)".into()));
    }
    let log_bl_over_lb = (bl / lb).ln();
    if log_bl_over_lb == 0.0 {
        return Err(Error::InvalidSpec("beta_low / lambda_bar = 1".into()));
    }

    let tstar_first_rhs = n.powf(-(l.max(2) as f64));
    let inner = bb.powf(lf) * bl.powf(2.0 * log_n / log_bl_over_lb - lf);
    let tstar_second_rhs = inner.powf(2.0 * ll.ln() / log_n);
    let tstar_first_ok = lb < tstar_first_rhs;
    let tstar_second_ok = lb < tstar_second_rhs;

    let estar_lhs = bb.powf(lf);
    let estar_rhs = n.sqrt() * bl.powf(pf);

    let big_l = (bl.powf(-lf) * lb.powf(pf) * n * n).ln();
    let mu_den = 0.5 - 2.0 * log_n / (2.0 * big_l);
    if big_l == 0.0 || mu_den == 0.0 {
        return Err(Error::InvalidSpec("degenerate logarithm in the mu0 formula".into()));
    }
    let mu_num = (lf * bb.ln() - pf * bl.ln()) / (2.0 * log_n) - lf * bb.ln() / big_l;
    let mu0 = mu_num / mu_den;
    let mu_upper = lb.ln() / (2.0 * ll.ln());

    Ok(HypothesisReport {
        cone_ok: 0.0 < lambda_tilde && lambda_tilde < ll && ll <= lb && lb < 1.0,
        conformal_ok: (1..=2).contains(&p),
        tstar_first_ok,
        tstar_second_ok,
        tstar_ok: tstar_first_ok && tstar_second_ok,
        estar_ok: estar_lhs < estar_rhs,
        tstar_first_rhs,
        tstar_second_rhs,
        estar_lhs,
        estar_rhs,
        mu0,
        mu_upper,
        mu_interval: (mu0 < mu_upper).then_some((mu0, mu_upper)),
    })
}

/// Rotation angle helper: a constant rotation by `turns` full turns.
pub fn constant_rotation(l: usize, turns: f64) -> TrigPolynomial {
    TrigPolynomial::constant(l, &[turns * TAU])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets;

    fn bounds(lambda: f64, base: &[u32]) -> RateBounds {
        presets::linear(base, lambda, 2).rate_bounds().clone()
    }

    #[test]
    fn smale_williams_apply_at_origin() {
        let eps = 0.3;
        let spec = presets::smale_williams(0.2, eps);
        let out = spec
            .apply(&Point::new(vec![0.0], vec![0.0, 0.0], vec![0.0]))
            .unwrap();
        assert_eq!(out.x, vec![0.0]);
        assert!((out.y[0] - eps).abs() < 1e-15 && out.y[1].abs() < 1e-15);
        let g0 = spec.params().g.eval(&[0.0]);
        assert_eq!(out.z, g0);
    }

    #[test]
    fn linear_case() {
        let spec = presets::linear(&[2], 0.5, 1);
        let out = spec
            .apply(&Point::new(vec![0.0], vec![0.4], vec![0.2]))
            .unwrap();
        assert!((out.y[0] - 0.2).abs() < 1e-15);
        assert!((out.z[0] - 0.2 * spec.lambda_tilde()).abs() < 1e-15);
    }

    #[test]
    fn base_coordinate_doubles_mod_one() {
        let spec = presets::linear(&[2], 0.5, 1);
        assert_eq!(spec.base_map(&[0.75]), vec![0.5]);
    }

    #[test]
    fn outside_domain_is_rejected() {
        let spec = presets::linear(&[2], 0.5, 1);
        let r = spec.apply(&Point::new(vec![0.0], vec![1.5], vec![0.0]));
        assert!(matches!(r, Err(Error::Domain(_))));
    }

    #[test]
    fn constant_rate_bounds() {
        let b = bounds(0.05, &[2]);
        assert_eq!((b.lambda_bar, b.lambda_low), (0.05, 0.05));
        assert_eq!((b.beta_bar, b.beta_low, b.degree), (2.0, 2.0, 2));
        let b = bounds(0.05, &[2, 3]);
        assert_eq!((b.beta_bar, b.beta_low, b.degree), (3.0, 2.0, 6));
    }

    #[test]
    fn variable_rate_bounds() {
        let spec = presets::variable_rate(0.10, 0.02);
        let b = spec.rate_bounds();
        assert!((b.lambda_bar - 0.12).abs() < 1e-15);
        assert!((b.lambda_low - 0.08).abs() < 1e-15);
        assert!(b.grid_min >= b.lambda_low - 1e-15 && b.grid_max <= b.lambda_bar + 1e-15);
    }

    #[test]
    fn rate_leaving_unit_interval_is_invalid() {
        let mut params = presets::variable_rate(0.10, 0.02).params().clone();
        params.lambda = TrigPolynomial::constant(1, &[0.9])
            .with_term(&[1], &[0.2], &[0.0])
            .unwrap();
        assert!(matches!(SolenoidSpec::new(params), Err(Error::InvalidSpec(_))));
    }

    #[test]
    fn inner_rate_must_be_stronger() {
        let mut params = presets::linear(&[2], 0.2, 1).params().clone();
        params.lambda_tilde = 0.3;
        assert!(matches!(SolenoidSpec::new(params), Err(Error::InvalidSpec(_))));
    }

    #[test]
    fn domain_containment_is_checked() {
        let mut params = presets::smale_williams(0.2, 1.0).params().clone();
        params.e_radius = 1.0;
        assert!(matches!(SolenoidSpec::new(params), Err(Error::InvalidSpec(_))));
    }

    #[test]
    fn hypotheses_strong_contraction_fixture() {
        let r = check_hypotheses(&bounds(0.05, &[2]), 1, 1).unwrap();
        assert!(r.tstar_first_ok && r.tstar_second_ok && r.estar_ok && r.cone_ok);
        assert!((r.tstar_first_rhs - 0.25).abs() < 1e-15);
        assert!((r.estar_rhs - 2.0f64.sqrt() * 2.0).abs() < 1e-15);
        let (lo, hi) = r.mu_interval.unwrap();
        assert!((lo - 0.375_803_649_418_215_2).abs() < 1e-12);
        assert!((hi - 0.5).abs() < 1e-15);
    }

    #[test]
    fn hypotheses_second_inequality_fails_at_lambda_02() {
        let r = check_hypotheses(&bounds(0.2, &[2]), 1, 1).unwrap();
        assert!(r.tstar_first_ok);
        assert!(!r.tstar_second_ok);
        assert!((r.tstar_second_rhs - 0.143_997_930_475_700_2).abs() < 1e-12);
    }

    #[test]
    fn near_conformal_product_base() {
        let r = check_hypotheses(&bounds(0.01, &[2, 3]), 2, 2).unwrap();
        assert!(r.estar_ok);
        assert_eq!(r.estar_lhs, 9.0);
        assert!((r.estar_rhs - 9.797_958_971_132_712).abs() < 1e-12);
    }

    #[test]
    fn fiber_derivative_is_conformal() {
        let spec = presets::rotating(0.15, 0.05, 0.3);
        for i in 0..50 {
            let x = [i as f64 / 50.0];
            let a = spec.fiber_linear(&x);
            let lam = spec.lambda_at(&x);
            let ata = a.gram_cols();
            let diff = &ata - &Matrix::identity(2).scale(lam * lam);
            assert!(diff.max_abs() < 1e-12);
        }
    }
}
