//! Thermodynamic formalism over the symbolic coding: Birkhoff sums of the
//! geometric potential `log λ`, pressure approximants, the Bowen root and
//! the finite-depth exponent `d(x, m)`.

use std::io::Write;

use crate::error::{Error, Result};
use crate::model::SolenoidSpec;
use crate::numerics::log_sum_exp_scaled;
use crate::symbolic::{branch_orbit, inverse_branch_in, word_count, Word, DEFAULT_WORD_BUDGET};

/// Default Bowen-root tolerance.
pub const DEFAULT_TOL: f64 = 1e-10;
/// Default pressure depth for `N = 2`.
pub const DEFAULT_DEPTH: usize = 14;

/// `Σ log λ(x_i)` along the branch orbit of `(word, x)`.
pub fn birkhoff_sum(spec: &SolenoidSpec, word: &Word, x: &[f64]) -> Result<f64> {
    if word.is_empty() {
        return Err(Error::InvalidArgument("Birkhoff sum needs a nonempty word".into()));
    }
    Word::checked(word.symbols().to_vec(), spec.degree())?;
    Ok(branch_orbit(spec.base(), word, x)
        .iter()
        .map(|xi| spec.lambda_at(xi).ln())
        .sum())
}

/// Birkhoff sums of every word of length `n` anchored at `x`, indexed by
/// lexicographic word rank. Shares orbit prefixes through a tree walk.
pub fn birkhoff_table(spec: &SolenoidSpec, n: usize, x: &[f64], budget: u64) -> Result<Vec<f64>> {
    if n == 0 {
        return Err(Error::InvalidArgument("depth must be >= 1".into()));
    }
    let count = word_count(spec.degree(), n, budget)?;
    let mut out = vec![0.0; count as usize];
    fn walk(
        spec: &SolenoidSpec,
        level: usize,
        n: usize,
        xi: &[f64],
        acc: f64,
        index: u64,
        weight: u64,
        out: &mut [f64],
    ) {
        if level == n {
            out[index as usize] = acc;
            return;
        }
        let alphabet = spec.degree();
        for s in 0..alphabet as u32 {
            let child = inverse_branch_in(spec.base(), s, xi);
            let v = acc + spec.lambda_at(&child).ln();
            walk(spec, level + 1, n, &child, v, index + u64::from(s) * weight, weight * alphabet, out);
        }
    }
    walk(spec, 0, n, x, 0.0, 0, 1, &mut out);
    Ok(out)
}

/// Corners of the closed reference cell `Π [0, 1/M_i]` shifted to `x_ref`.
fn corner_anchors(spec: &SolenoidSpec, x_ref: &[f64]) -> Vec<Vec<f64>> {
    let l = spec.l();
    (0..1u32 << l)
        .map(|mask| {
            (0..l)
                .map(|i| {
                    let step = if mask >> i & 1 == 1 { 1.0 / f64::from(spec.base()[i]) } else { 0.0 };
                    x_ref[i] + step
                })
                .collect()
        })
        .collect()
}

/// One point of a pressure approximant with its anchor bracket.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PressureCurve {
    pub s: f64,
    pub n: usize,
    pub value: f64,
    pub lower: f64,
    pub upper: f64,
}

/// Cylinder Birkhoff sums at depth `n`: anchored at `ā(x_ref)` plus the
/// per-cylinder min/max over the corner anchors of the reference cell.
#[derive(Debug, Clone)]
pub struct CylinderSums {
    n: usize,
    anchored: Vec<f64>,
    min: Vec<f64>,
    max: Vec<f64>,
}

impl CylinderSums {
    pub fn new(spec: &SolenoidSpec, n: usize, budget: u64) -> Result<Self> {
        let x_ref = vec![0.0; spec.l()];
        let anchored = birkhoff_table(spec, n, &x_ref, budget)?;
        let mut min = anchored.clone();
        let mut max = anchored.clone();
        if !spec.params().lambda.is_constant() {
            for corner in corner_anchors(spec, &x_ref).iter().skip(1) {
                let t = birkhoff_table(spec, n, corner, budget)?;
                for ((lo, hi), v) in min.iter_mut().zip(max.iter_mut()).zip(&t) {
                    *lo = lo.min(*v);
                    *hi = hi.max(*v);
                }
            }
        }
        Ok(Self { n, anchored, min, max })
    }

    pub fn depth(&self) -> usize {
        self.n
    }

    /// `P_n(s) = (1/n) log Σ exp(s · S_n φ)` at the reference anchor.
    pub fn value(&self, s: f64) -> f64 {
        log_sum_exp_scaled(&self.anchored, s) / self.n as f64
    }

    pub fn pressure(&self, s: f64) -> PressureCurve {
        let value = self.value(s);
        let (lo_sums, hi_sums) = if s >= 0.0 { (&self.min, &self.max) } else { (&self.max, &self.min) };
        let n = self.n as f64;
        PressureCurve {
            s,
            n: self.n,
            value,
            lower: (log_sum_exp_scaled(lo_sums, s) / n).min(value),
            upper: (log_sum_exp_scaled(hi_sums, s) / n).max(value),
        }
    }
}

/// Pressure approximant `P_n(s)` with its anchor bracket.
pub fn pressure_approx(spec: &SolenoidSpec, s: f64, n: usize) -> Result<PressureCurve> {
    Ok(CylinderSums::new(spec, n, DEFAULT_WORD_BUDGET)?.pressure(s))
}

/// Root of a depth-`n` pressure approximant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BowenResult {
    pub d0: f64,
    pub bracket_width: f64,
    pub depth: usize,
    pub iterations: usize,
}

/// Solves `P_n(s) = 0` by bisection, checking strict decrease of `P_n`
/// along the way.
pub fn bowen_root(spec: &SolenoidSpec, tol: f64, n: usize) -> Result<BowenResult> {
    bowen_root_with_budget(spec, tol, n, DEFAULT_WORD_BUDGET)
}

pub fn bowen_root_with_budget(spec: &SolenoidSpec, tol: f64, n: usize, budget: u64) -> Result<BowenResult> {
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument(format!("tolerance must be positive, got {tol}")));
    }
    let sums = CylinderSums::new(spec, n, budget)?;
    let root = bisect_decreasing(|s| sums.value(s), tol, "pressure")?;
    Ok(BowenResult {
        d0: root.mid,
        bracket_width: root.width,
        depth: n,
        iterations: root.iterations,
    })
}

struct Root {
    mid: f64,
    width: f64,
    iterations: usize,
}

/// Root of a strictly decreasing function with `f(0) > 0`.
fn bisect_decreasing(f: impl Fn(f64) -> f64, tol: f64, what: &str) -> Result<Root> {
    let mut lo = 0.0;
    let mut f_lo = f(lo);
    if !(f_lo > 0.0) {
        return Err(Error::InvalidSpec(format!("{what} at s = 0 is {f_lo}, not positive")));
    }
    let mut hi = 1.0;
    let mut f_hi = f(hi);
    let mut iterations = 0;
    while f_hi >= 0.0 {
        if f_hi >= f_lo {
            return Err(Error::Numerical(format!("{what} is not decreasing on [{lo}, {hi}]")));
        }
        lo = hi;
        f_lo = f_hi;
        hi *= 2.0;
        f_hi = f(hi);
        iterations += 1;
        if hi > 1e12 {
            return Err(Error::Numerical(format!("{what} never becomes negative")));
        }
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let f_mid = f(mid);
        iterations += 1;
        if !(f_lo > f_mid && f_mid > f_hi) {
            return Err(Error::Numerical(format!(
                "{what} not strictly decreasing at s = {mid}: {f_lo} / {f_mid} / {f_hi}"
            )));
        }
        if f_mid > 0.0 {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
            f_hi = f_mid;
        }
    }
    Ok(Root {
        mid: 0.5 * (lo + hi),
        width: hi - lo,
        iterations,
    })
}

/// `exp(Birkhoff sum) · diam E`: stands in for the diameter of the image
/// cylinder up to the distortion constant.
pub fn diam_proxy(spec: &SolenoidSpec, x: &[f64], word: &Word) -> Result<f64> {
    Ok(birkhoff_sum(spec, word, x)?.exp() * spec.e_diameter())
}

/// Solves `Σ_{|ā| = m} diam_proxy(x, ā)^t = 1` for `t`.
pub fn finite_m_exponent(spec: &SolenoidSpec, x: &[f64], m: usize, tol: f64) -> Result<f64> {
    finite_m_exponent_with_budget(spec, x, m, tol, DEFAULT_WORD_BUDGET)
}

pub fn finite_m_exponent_with_budget(
    spec: &SolenoidSpec,
    x: &[f64],
    m: usize,
    tol: f64,
    budget: u64,
) -> Result<f64> {
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument(format!("tolerance must be positive, got {tol}")));
    }
    let log_diam = spec.e_diameter().ln();
    let log_proxies: Vec<f64> = birkhoff_table(spec, m, x, budget)?
        .into_iter()
        .map(|b| b + log_diam)
        .collect();
    if let Some(bad) = log_proxies.iter().find(|&&v| v >= 0.0) {
        return Err(Error::InvalidSpec(format!(
            "diameter proxy {} >= 1: no contraction at depth {m}",
            bad.exp()
        )));
    }
    Ok(bisect_decreasing(|t| log_sum_exp_scaled(&log_proxies, t), tol, "cylinder sum")?.mid)
}

/// Rows `s,n,lower,value,upper`.
pub fn write_pressure_csv<W: Write>(mut w: W, rows: &[PressureCurve]) -> Result<()> {
    writeln!(w, "s,n,lower,value,upper")?;
    for r in rows {
        writeln!(w, "{},{},{},{},{}", r.s, r.n, r.lower, r.value, r.upper)?;
    }
    Ok(())
}

/// Rows `m,t`.
pub fn write_exponent_csv<W: Write>(mut w: W, rows: &[(usize, f64)]) -> Result<()> {
    writeln!(w, "m,t")?;
    for (m, t) in rows {
        writeln!(w, "{m},{t}")?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets;
    use crate::symbolic::enumerate_words;

    #[test]
    fn constant_rate_birkhoff_sum() {
        let spec = presets::interval_constant(0.2);
        for w in enumerate_words(&spec, 5, 64).unwrap() {
            let b = birkhoff_sum(&spec, &w, &[0.37]).unwrap();
            assert!((b - 5.0 * 0.2f64.ln()).abs() < 1e-13);
        }
    }

    #[test]
    fn one_step_variable_rate() {
        let spec = presets::variable_rate(0.1, 0.02);
        let b = birkhoff_sum(&spec, &Word::new(vec![0]), &[0.0]).unwrap();
        assert!((b - 0.12f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn birkhoff_sums_are_additive() {
        let spec = presets::variable_rate(0.1, 0.02);
        let x = [0.613];
        let deep = Word::new(vec![1, 1, 0]);
        let shallow = Word::new(vec![0, 1, 0, 0]);
        let whole = birkhoff_sum(&spec, &deep.concat(&shallow), &x).unwrap();
        let mid = crate::symbolic::cylinder_point(&spec, &shallow, &x).unwrap();
        let split = birkhoff_sum(&spec, &shallow, &x).unwrap() + birkhoff_sum(&spec, &deep, &mid).unwrap();
        assert!((whole - split).abs() < 1e-13);
    }

    #[test]
    fn table_matches_direct_sums() {
        let spec = presets::variable_rate(0.1, 0.02);
        let x = [0.29];
        let table = birkhoff_table(&spec, 6, &x, 1 << 10).unwrap();
        for (i, w) in enumerate_words(&spec, 6, 1 << 10).unwrap().enumerate() {
            assert!((table[i] - birkhoff_sum(&spec, &w, &x).unwrap()).abs() < 1e-13);
        }
    }

    #[test]
    fn pressure_at_zero_is_log_degree() {
        let spec = presets::variable_rate(0.1, 0.02);
        let p = pressure_approx(&spec, 0.0, 10).unwrap();
        assert!((p.value - 2f64.ln()).abs() < 1e-12);
        assert!(p.lower <= p.value && p.value <= p.upper);
    }

    #[test]
    fn constant_rate_pressure_is_affine() {
        let spec = presets::interval_constant(0.3);
        for n in [1, 5, 12] {
            for s in [0.0, 0.4, 1.7, -0.5] {
                let p = pressure_approx(&spec, s, n).unwrap();
                assert!((p.value - (2f64.ln() + s * 0.3f64.ln())).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn bracket_contains_value() {
        let spec = presets::variable_rate(0.1, 0.02);
        let sums = CylinderSums::new(&spec, 8, 1 << 10).unwrap();
        for s in [-1.0, 0.1, 0.3, 2.0] {
            let p = sums.pressure(s);
            assert!(p.lower <= p.value && p.value <= p.upper, "{p:?}");
        }
        assert!(sums.pressure(0.3).upper > sums.pressure(0.3).lower);
    }

    #[test]
    fn bowen_root_quarter_rate() {
        let r = bowen_root(&presets::interval_constant(0.25), 1e-10, 14).unwrap();
        assert!((r.d0 - 0.5).abs() < 1e-9);
        assert!(r.bracket_width <= 1e-10);
    }

    #[test]
    fn bowen_root_rejects_bad_tolerance() {
        assert!(bowen_root(&presets::interval_constant(0.25), 0.0, 4).is_err());
    }

    #[test]
    fn proxy_decreases_when_extended() {
        let spec = presets::variable_rate(0.1, 0.02);
        let w = Word::new(vec![0, 1, 1]);
        let a = diam_proxy(&spec, &[0.2], &w).unwrap();
        let b = diam_proxy(&spec, &[0.2], &w.deepen(&[1])).unwrap();
        assert!(b < a);
    }

    #[test]
    fn constant_exponent_closed_form() {
        let spec = presets::interval_constant(0.2);
        for m in [1, 3, 7] {
            let t = finite_m_exponent(&spec, &[0.1], m, 1e-12).unwrap();
            assert!((t - 2f64.ln() / -0.2f64.ln()).abs() < 1e-9);
        }
    }
}
