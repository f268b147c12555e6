//! Real trigonometric polynomials on the torus `R^l / Z^l`.

use std::f64::consts::TAU;

use crate::error::{Error, Result};
use crate::linalg::Matrix;

/// One frequency of a trigonometric polynomial.
///
/// Contributes `cos_coeffs * cos(2π k·x) + sin_coeffs * sin(2π k·x)`.
#[derive(Debug, Clone, PartialEq)]
pub struct TrigTerm {
    pub freq: Vec<i64>,
    pub cos_coeffs: Vec<f64>,
    pub sin_coeffs: Vec<f64>,
}

impl TrigTerm {
    fn is_constant(&self) -> bool {
        self.freq.iter().all(|&k| k == 0)
    }
}

/// Vector-valued trigonometric polynomial, 1-periodic in every coordinate.
#[derive(Debug, Clone, PartialEq)]
pub struct TrigPolynomial {
    dim: usize,
    arity: usize,
    terms: Vec<TrigTerm>,
}

impl TrigPolynomial {
    /// The zero polynomial.
    pub fn zero(dim: usize, arity: usize) -> Self {
        Self {
            dim,
            arity,
            terms: Vec::new(),
        }
    }

    pub fn constant(dim: usize, values: &[f64]) -> Self {
        let mut p = Self::zero(dim, values.len());
        p.terms.push(TrigTerm {
            freq: vec![0; dim],
            cos_coeffs: values.to_vec(),
            sin_coeffs: vec![0.0; values.len()],
        });
        p
    }

    pub fn with_term(mut self, freq: &[i64], cos_coeffs: &[f64], sin_coeffs: &[f64]) -> Result<Self> {
        self.push_term(freq, cos_coeffs, sin_coeffs)?;
        Ok(self)
    }

    pub fn push_term(&mut self, freq: &[i64], cos_coeffs: &[f64], sin_coeffs: &[f64]) -> Result<()> {
        if freq.len() != self.dim {
            return Err(Error::InvalidSpec(format!(
                "frequency vector of length {} for a polynomial on a {}-torus",
                freq.len(),
                self.dim
            )));
        }
        if cos_coeffs.len() != self.arity || sin_coeffs.len() != self.arity {
            return Err(Error::InvalidSpec(format!(
                "coefficient arity mismatch: expected {}",
                self.arity
            )));
        }
        if cos_coeffs.iter().chain(sin_coeffs).any(|c| !c.is_finite()) {
            return Err(Error::InvalidSpec("non-finite coefficient".into()));
        }
        self.terms.push(TrigTerm {
            freq: freq.to_vec(),
            cos_coeffs: cos_coeffs.to_vec(),
            sin_coeffs: sin_coeffs.to_vec(),
        });
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn terms(&self) -> &[TrigTerm] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms
            .iter()
            .all(|t| t.cos_coeffs.iter().all(|&c| c == 0.0) && (t.is_constant() || t.sin_coeffs.iter().all(|&s| s == 0.0)))
    }

    /// True when no term depends on the base point.
    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|t| {
            t.is_constant() || t.cos_coeffs.iter().chain(&t.sin_coeffs).all(|&c| c == 0.0)
        })
    }

    fn phase(freq: &[i64], x: &[f64]) -> f64 {
        TAU * freq.iter().zip(x).map(|(&k, &xi)| k as f64 * xi).sum::<f64>()
    }

    /// Evaluates into `out` (length `arity`).
    pub fn eval_into(&self, x: &[f64], out: &mut [f64]) {
        debug_assert_eq!(x.len(), self.dim);
        out.iter_mut().for_each(|o| *o = 0.0);
        for t in &self.terms {
            let (s, c) = Self::phase(&t.freq, x).sin_cos();
            for (i, o) in out.iter_mut().enumerate() {
                *o += t.cos_coeffs[i] * c + t.sin_coeffs[i] * s;
            }
        }
    }

    pub fn eval(&self, x: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.arity];
        self.eval_into(x, &mut out);
        out
    }

    /// Scalar value; the polynomial must have arity 1.
    pub fn eval_scalar(&self, x: &[f64]) -> f64 {
        debug_assert_eq!(self.arity, 1);
        let mut v = 0.0;
        for t in &self.terms {
            let (s, c) = Self::phase(&t.freq, x).sin_cos();
            v += t.cos_coeffs[0] * c + t.sin_coeffs[0] * s;
        }
        v
    }

    /// Jacobian, `arity × dim`.
    pub fn jacobian(&self, x: &[f64]) -> Matrix {
        let mut jac = Matrix::zeros(self.arity, self.dim);
        for t in &self.terms {
            if t.is_constant() {
                continue;
            }
            let (s, c) = Self::phase(&t.freq, x).sin_cos();
            for i in 0..self.arity {
                let d = TAU * (t.sin_coeffs[i] * c - t.cos_coeffs[i] * s);
                for (j, &k) in t.freq.iter().enumerate() {
                    if k != 0 {
                        jac.set(i, j, jac.get(i, j) + d * k as f64);
                    }
                }
            }
        }
        jac
    }

    /// Gradient of a scalar polynomial.
    pub fn gradient(&self, x: &[f64]) -> Vec<f64> {
        debug_assert_eq!(self.arity, 1);
        self.jacobian(x).as_slice().to_vec()
    }

    /// Constant part of each component.
    pub fn mean(&self) -> Vec<f64> {
        let mut m = vec![0.0; self.arity];
        for t in self.terms.iter().filter(|t| t.is_constant()) {
            for (mi, c) in m.iter_mut().zip(&t.cos_coeffs) {
                *mi += c;
            }
        }
        m
    }

    /// Per-component bound on the oscillating part: the sum of term amplitudes.
    pub fn oscillation_bound(&self) -> Vec<f64> {
        let mut b = vec![0.0; self.arity];
        for t in self.terms.iter().filter(|t| !t.is_constant()) {
            for (i, bi) in b.iter_mut().enumerate() {
                *bi += t.cos_coeffs[i].hypot(t.sin_coeffs[i]);
            }
        }
        b
    }

    /// Rigorous `(inf, sup)` bounds of a scalar polynomial.
    pub fn scalar_range_bound(&self) -> (f64, f64) {
        let mean = self.mean()[0];
        let osc = self.oscillation_bound()[0];
        (mean - osc, mean + osc)
    }

    /// Rigorous upper bound of the operator norm of the Jacobian over the
    /// torus.
    pub fn jacobian_norm_bound(&self) -> f64 {
        self.terms
            .iter()
            .filter(|t| !t.is_constant())
            .map(|t| {
                let k = t.freq.iter().map(|&k| (k as f64).powi(2)).sum::<f64>().sqrt();
                let amp = t
                    .cos_coeffs
                    .iter()
                    .chain(&t.sin_coeffs)
                    .map(|c| c * c)
                    .sum::<f64>()
                    .sqrt();
                TAU * k * amp
            })
            .sum()
    }

    /// Rigorous upper bound of `sup_x |p(x)|` in the Euclidean norm.
    pub fn sup_norm_bound(&self) -> f64 {
        self.mean()
            .iter()
            .zip(self.oscillation_bound())
            .map(|(m, o)| (m.abs() + o).powi(2))
            .sum::<f64>()
            .sqrt()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn jacobian_bound_dominates_samples() {
        let p = TrigPolynomial::zero(2, 2)
            .with_term(&[1, -2], &[0.3, -0.1], &[0.2, 0.05])
            .unwrap()
            .with_term(&[0, 3], &[0.0, 0.1], &[0.07, 0.0])
            .unwrap();
        let bound = p.jacobian_norm_bound();
        for i in 0..50 {
            let x = [i as f64 * 0.0731, i as f64 * 0.0417];
            assert!(p.jacobian(&x).operator_norm() <= bound + 1e-12);
        }
    }

    fn sample() -> TrigPolynomial {
        TrigPolynomial::constant(2, &[0.1, -0.3])
            .with_term(&[1, 0], &[0.02, 0.5], &[0.0, 0.1])
            .unwrap()
            .with_term(&[1, -2], &[0.0, 0.2], &[0.04, 0.0])
            .unwrap()
    }

    #[test]
    fn periodic_in_each_coordinate() {
        let p = sample();
        let x = [0.137, 0.71];
        let a = p.eval(&x);
        for shift in [[1.0, 0.0], [0.0, 1.0], [-1.0, 3.0]] {
            let b = p.eval(&[x[0] + shift[0], x[1] + shift[1]]);
            for (u, v) in a.iter().zip(&b) {
                assert!((u - v).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn jacobian_matches_central_differences() {
        let p = sample();
        let x = [0.3, 0.45];
        let jac = p.jacobian(&x);
        let h = 1e-6;
        for j in 0..2 {
            let mut xp = x;
            let mut xm = x;
            xp[j] += h;
            xm[j] -= h;
            let (fp, fm) = (p.eval(&xp), p.eval(&xm));
            for i in 0..2 {
                let fd = (fp[i] - fm[i]) / (2.0 * h);
                assert!((fd - jac.get(i, j)).abs() < 1e-7, "{fd} vs {}", jac.get(i, j));
            }
        }
    }

    #[test]
    fn range_bound_is_attained_for_single_cosine() {
        let p = TrigPolynomial::constant(1, &[0.1])
            .with_term(&[1], &[0.02], &[0.0])
            .unwrap();
        let (lo, hi) = p.scalar_range_bound();
        assert!((lo - 0.08).abs() < 1e-15 && (hi - 0.12).abs() < 1e-15);
        assert!((p.eval_scalar(&[0.0]) - 0.12).abs() < 1e-15);
        assert!((p.eval_scalar(&[0.5]) - 0.08).abs() < 1e-15);
    }

    #[test]
    fn rejects_wrong_frequency_length() {
        let r = TrigPolynomial::zero(2, 1).with_term(&[1], &[1.0], &[0.0]);
        assert!(matches!(r, Err(Error::InvalidSpec(_))));
    }

    #[test]
    fn zero_and_constant_detection() {
        assert!(TrigPolynomial::zero(1, 2).is_zero());
        assert!(TrigPolynomial::constant(1, &[0.2]).is_constant());
        assert!(!sample().is_constant());
    }
}
