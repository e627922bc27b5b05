//! Chebyshev polynomials of the second kind in the angle coordinate,
//! `U_n(cos θ) = sin((n + 1)θ) / sin θ`.
//!
//! The family is orthonormal for the Sato-Tate measure `(2/π) sin²θ dθ` on
//! `[0, π]`, and products linearize as
//! `U_m U_n = Σ_{k=0}^{min(m,n)} U_{m+n-2k}`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::quadrature::simpson;

/// Below this `|sin θ|` the sine quotient is replaced by the recurrence.
const QUOTIENT_CUTOFF: f64 = 1e-6;

fn check_angle(theta: f64) -> Result<()> {
    if !theta.is_finite() {
        return Err(Error::NonFinite("theta"));
    }
    if !(0.0..=PI).contains(&theta) {
        return Err(invalid("theta", format!("{theta} is outside [0, π]")));
    }
    Ok(())
}

/// `U_n(cos θ)` for `θ ∈ [0, π]`.
pub fn eval_u(n: usize, theta: f64) -> Result<f64> {
    check_angle(theta)?;
    Ok(eval_u_unchecked(n, theta))
}

pub(crate) fn eval_u_unchecked(n: usize, theta: f64) -> f64 {
    if theta == 0.0 {
        return (n + 1) as f64;
    }
    if theta == PI {
        let v = (n + 1) as f64;
        return if n.is_multiple_of(2) { v } else { -v };
    }
    let s = theta.sin();
    if s.abs() < QUOTIENT_CUTOFF {
        recurrence(n, theta.cos())
    } else {
        ((n + 1) as f64 * theta).sin() / s
    }
}

/// Three-term recurrence `U_{k+1} = 2x U_k - U_{k-1}` in the `x = cos θ` coordinate.
pub fn recurrence(n: usize, x: f64) -> f64 {
    let (mut prev, mut cur) = (1.0, 2.0 * x);
    if n == 0 {
        return prev;
    }
    for _ in 1..n {
        let next = 2.0 * x * cur - prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Indices appearing in the linearization of `U_m U_n`, largest first.
pub fn linearize_product(m: usize, n: usize) -> Vec<usize> {
    let (hi, lo) = if m >= n { (m, n) } else { (n, m) };
    (0..=lo).map(|k| hi + lo - 2 * k).collect()
}

/// A finite expansion `Σ_{m=0}^{M} c_m U_m(cos θ)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct ChebyshevSeries {
    coeffs: Vec<f64>,
}

impl TryFrom<Vec<f64>> for ChebyshevSeries {
    type Error = Error;

    fn try_from(coeffs: Vec<f64>) -> Result<Self> {
        Self::new(coeffs)
    }
}

impl From<ChebyshevSeries> for Vec<f64> {
    fn from(s: ChebyshevSeries) -> Self {
        s.coeffs
    }
}

impl ChebyshevSeries {
    /// Builds a series from dense coefficients. An empty vector is the zero series.
    pub fn new(mut coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::NonFinite("chebyshev coefficients"));
        }
        if coeffs.is_empty() {
            coeffs.push(0.0);
        }
        Ok(Self { coeffs })
    }

    pub fn constant(c: f64) -> Self {
        Self { coeffs: vec![c] }
    }

    /// The single basis polynomial `U_n`.
    pub fn basis(n: usize) -> Self {
        let mut coeffs = vec![0.0; n + 1];
        coeffs[n] = 1.0;
        Self { coeffs }
    }

    /// Index of the last stored coefficient.
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// Coefficient of `U_n`; zero past the stored degree. By orthonormality
    /// this is the exact Fourier coefficient `[f • U_n]`.
    pub fn coefficient(&self, n: usize) -> f64 {
        self.coeffs.get(n).copied().unwrap_or(0.0)
    }

    /// Evaluates at `x = cos θ` by Clenshaw's recurrence.
    pub fn eval_x(&self, x: f64) -> f64 {
        let (mut b1, mut b2) = (0.0, 0.0);
        for &c in self.coeffs.iter().rev() {
            let b0 = c + 2.0 * x * b1 - b2;
            b2 = b1;
            b1 = b0;
        }
        b1
    }

    pub fn eval(&self, theta: f64) -> f64 {
        self.eval_x(theta.cos())
    }

    /// Exact product in the `U` basis.
    pub fn product(&self, other: &Self) -> Self {
        series_product(self, other)
    }

    /// Copy with the `U_0` coefficient set to zero.
    pub fn without_constant(&self) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs[0] = 0.0;
        Self { coeffs }
    }
}

/// Exact product of two series via linearization of `U_i U_j`.
///
/// Each pair `(i, j)` contributes `a_i b_j` to every index in
/// `|i-j|, |i-j|+2, …, i+j`; the ranges are accumulated in a stride-2
/// difference array so the cost is `O(deg a · deg b)`.
pub fn series_product(a: &ChebyshevSeries, b: &ChebyshevSeries) -> ChebyshevSeries {
    let deg = a.degree() + b.degree();
    let mut diff = vec![0.0; deg + 3];
    for (i, &ai) in a.coeffs.iter().enumerate() {
        if ai == 0.0 {
            continue;
        }
        for (j, &bj) in b.coeffs.iter().enumerate() {
            if bj == 0.0 {
                continue;
            }
            let v = ai * bj;
            diff[i.abs_diff(j)] += v;
            diff[i + j + 2] -= v;
        }
    }
    let mut out = vec![0.0; deg + 1];
    for k in 0..=deg {
        out[k] = diff[k] + if k >= 2 { out[k - 2] } else { 0.0 };
    }
    ChebyshevSeries { coeffs: out }
}

/// `[f • U_n] = (2/π) ∫_0^π f(θ) U_n(cos θ) sin²θ dθ` by composite Simpson.
pub fn fourier_coefficient<F: Fn(f64) -> f64>(f: F, n: usize, quadrature_points: usize) -> Result<f64> {
    if quadrature_points < 2 {
        return Err(invalid("quadrature_points", "need at least 2 panels"));
    }
    let k = (n + 1) as f64;
    simpson(|t| f(t) * (k * t).sin() * t.sin(), 0.0, PI, quadrature_points)
        .map(|v| 2.0 / PI * v)
        .ok_or(Error::NonFinite("fourier_coefficient integrand"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::DEFAULT_PANELS;

    #[test]
    fn trivial_values() {
        assert_eq!(eval_u(0, 1.234).unwrap(), 1.0);
        assert!((eval_u(2, PI / 2.0).unwrap() + 1.0).abs() < 1e-15);
    }

    #[test]
    fn endpoint_limits_are_exact() {
        for n in 0..200 {
            assert_eq!(eval_u(n, 0.0).unwrap(), (n + 1) as f64);
            let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
            assert_eq!(eval_u(n, PI).unwrap(), sign * (n + 1) as f64);
        }
    }

    #[test]
    fn near_endpoint_uses_recurrence() {
        let v = eval_u(7, 1e-9).unwrap();
        assert!((v - 8.0).abs() < 1e-9);
    }

    #[test]
    fn rejects_bad_angles() {
        assert!(eval_u(1, -0.1).is_err());
        assert!(eval_u(1, 3.5).is_err());
        assert!(matches!(eval_u(1, f64::NAN), Err(Error::NonFinite(_))));
    }

    #[test]
    fn linearization_indices() {
        assert_eq!(linearize_product(2, 2), vec![4, 2, 0]);
        assert_eq!(linearize_product(9, 0), vec![9]);
        assert_eq!(linearize_product(2, 3), vec![5, 3, 1]);
    }

    #[test]
    fn u1_squared() {
        let s = ChebyshevSeries::basis(1);
        let p = series_product(&s, &s);
        assert_eq!(p.coeffs(), &[1.0, 0.0, 1.0]);
    }

    #[test]
    fn constant_is_identity() {
        let s = ChebyshevSeries::new(vec![0.5, -1.0, 2.0, 0.25]).unwrap();
        assert_eq!(series_product(&ChebyshevSeries::constant(1.0), &s), s);
    }

    #[test]
    fn orthonormality_of_basis() {
        let u3 = |t: f64| eval_u_unchecked(3, t);
        assert!((fourier_coefficient(u3, 3, DEFAULT_PANELS).unwrap() - 1.0).abs() < 1e-8);
        assert!(fourier_coefficient(u3, 2, DEFAULT_PANELS).unwrap().abs() < 1e-8);
    }

    #[test]
    fn fourier_coefficient_rejects_nan() {
        let r = fourier_coefficient(|t| if t > 1.0 { f64::NAN } else { 0.0 }, 1, 64);
        assert!(matches!(r, Err(Error::NonFinite(_))));
        assert!(fourier_coefficient(|_| 1.0, 1, 1).is_err());
    }

    #[test]
    fn clenshaw_matches_direct_sum() {
        let s = ChebyshevSeries::new(vec![0.3, -0.7, 1.1, 0.0, 0.2]).unwrap();
        for i in 1..50 {
            let t = PI * i as f64 / 50.0;
            let direct: f64 = s
                .coeffs()
                .iter()
                .enumerate()
                .map(|(n, c)| c * eval_u_unchecked(n, t))
                .sum();
            assert!((s.eval(t) - direct).abs() < 1e-13);
        }
    }

    #[test]
    fn rejects_non_finite_coefficients() {
        assert!(ChebyshevSeries::new(vec![1.0, f64::INFINITY]).is_err());
        assert_eq!(ChebyshevSeries::new(vec![]).unwrap().degree(), 0);
    }
}
