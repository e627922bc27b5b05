//! Beurling-Selberg majorants and minorants of interval indicators.
//!
//! For `J = [α, β]` on the circle and `δ = M + 1`,
//!
//! ```text
//! S⁺(x) = ½ Σ_ν [B(δ(x - α + ν)) + B(δ(β - x + ν))]
//! S⁻(x) = -½ Σ_ν [B(δ(α - x + ν)) + B(δ(x - β + ν))]
//! ```
//!
//! are trigonometric polynomials of degree at most `M` with
//! `S⁻ ≤ χ_J ≤ S⁺`. The ν-sums are taken symmetrically over `|ν| ≤ 100`
//! and closed with the asymptotic tail of `B - sgn`, summed through Hurwitz
//! zeta values. Coefficients are read off an equispaced grid by an exact DFT.
//!
//! Folding `S±(θ/2π) + S±(-θ/2π)` gives the Chebyshev-basis pair
//! `F±(θ) = Σ_{m=0}^M F̂±(m) U_m(cos θ)` that sandwiches `χ_I` on `[0, π]`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::chebyshev::ChebyshevSeries;
use crate::error::{invalid, Error, Result};
use crate::special::{beurling_b_unchecked, excess_tail, sin_pi_sq, DEFAULT_TAIL_TERMS};

/// Periodization is summed explicitly over `|ν| ≤ PERIOD_TERMS`.
pub const PERIOD_TERMS: usize = 100;

/// Coefficients past the degree must be below this before they are zeroed.
pub const DEGREE_RESIDUAL_LIMIT: f64 = 1e-6;

/// `J = [α, β] ⊆ [-1/2, 1/2]`; serialized as `[α, β]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[f64; 2]", into = "[f64; 2]")]
pub struct CircleInterval {
    alpha: f64,
    beta: f64,
}

impl CircleInterval {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        if !(alpha.is_finite() && beta.is_finite()) {
            return Err(Error::NonFinite("circle interval"));
        }
        if !(-0.5..=0.5).contains(&alpha) || !(-0.5..=0.5).contains(&beta) {
            return Err(invalid("interval", "endpoints must lie in [-1/2, 1/2]"));
        }
        if alpha >= beta {
            return Err(invalid("interval", "need alpha < beta"));
        }
        Ok(Self { alpha, beta })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn length(&self) -> f64 {
        self.beta - self.alpha
    }

    pub fn contains(&self, x: f64) -> bool {
        self.alpha <= x && x <= self.beta
    }
}

/// `I = [a, b] ⊆ [0, π]` in radians. A zero-width interval is accepted here
/// (it has measure zero) but cannot be approximated. Serialized as `[a, b]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[f64; 2]", into = "[f64; 2]")]
pub struct ArcInterval {
    a: f64,
    b: f64,
}

impl ArcInterval {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if !(a.is_finite() && b.is_finite()) {
            return Err(Error::NonFinite("arc interval"));
        }
        if a < 0.0 || b > PI {
            return Err(invalid("interval", format!("[{a}, {b}] is not inside [0, π]")));
        }
        if a > b {
            return Err(invalid("interval", "need a <= b"));
        }
        Ok(Self { a, b })
    }

    pub fn full() -> Self {
        Self { a: 0.0, b: PI }
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn contains(&self, theta: f64) -> bool {
        self.a <= theta && theta <= self.b
    }

    /// `[a/2π, b/2π]`.
    pub fn to_circle(&self) -> Result<CircleInterval> {
        CircleInterval::new(self.a / (2.0 * PI), self.b / (2.0 * PI))
    }
}

impl TryFrom<[f64; 2]> for CircleInterval {
    type Error = Error;

    fn try_from(v: [f64; 2]) -> Result<Self> {
        Self::new(v[0], v[1])
    }
}

impl From<CircleInterval> for [f64; 2] {
    fn from(j: CircleInterval) -> Self {
        [j.alpha, j.beta]
    }
}

impl TryFrom<[f64; 2]> for ArcInterval {
    type Error = Error;

    fn try_from(v: [f64; 2]) -> Result<Self> {
        Self::new(v[0], v[1])
    }
}

impl From<ArcInterval> for [f64; 2] {
    fn from(i: ArcInterval) -> Self {
        [i.a, i.b]
    }
}

/// `χ̂_J(m) = ∫_J e(-mt) dt`.
pub fn chi_hat(j: &CircleInterval, m: i64) -> Complex64 {
    if m == 0 {
        return Complex64::new(j.length(), 0.0);
    }
    let e = |t: f64| Complex64::from_polar(1.0, -2.0 * PI * m as f64 * t);
    (e(j.alpha) - e(j.beta)) / Complex64::new(0.0, 2.0 * PI * m as f64)
}

/// `μ_∞(I) = (b - a)/π - (sin 2b - sin 2a)/(2π)`.
pub fn mu_infty_interval(i: &ArcInterval) -> f64 {
    let (a, b) = (i.a, i.b);
    ((b - a) / PI - ((2.0 * b).sin() - (2.0 * a).sin()) / (2.0 * PI)).clamp(0.0, 1.0)
}

/// `Σ_ν B(δ(u + ν))`, symmetric in ν.
fn periodized_beurling(u: f64, delta: f64) -> f64 {
    let mut acc = 0.0;
    for k in 0..=2 * PERIOD_TERMS {
        let nu = k as f64 - PERIOD_TERMS as f64;
        acc += beurling_b_unchecked(delta * (u + nu), DEFAULT_TAIL_TERMS);
    }
    acc + sin_pi_sq(delta * u) / (PI * PI) * excess_tail(u, delta, PERIOD_TERMS)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Plus,
    Minus,
}

/// Direct (non-Fourier) evaluation of the Selberg functions.
#[derive(Debug, Clone, Copy)]
pub struct SelbergFunctions {
    interval: CircleInterval,
    delta: f64,
}

impl SelbergFunctions {
    pub fn new(interval: CircleInterval, degree: usize) -> Self {
        Self {
            interval,
            delta: (degree + 1) as f64,
        }
    }

    /// `S±(x)` for any real `x` (reduced into `[-1/2, 1/2)` first).
    pub fn eval(&self, side: Side, x: f64) -> f64 {
        let x = x - x.round();
        let (alpha, beta, d) = (self.interval.alpha, self.interval.beta, self.delta);
        match side {
            Side::Plus => 0.5 * (periodized_beurling(x - alpha, d) + periodized_beurling(beta - x, d)),
            Side::Minus => -0.5 * (periodized_beurling(alpha - x, d) + periodized_beurling(x - beta, d)),
        }
    }
}

/// Fourier coefficients `Ŝ±(m)` for `0 ≤ m ≤ M`; negative indices follow
/// from `Ŝ(-m) = conj Ŝ(m)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelbergCoefficients {
    pub interval: CircleInterval,
    pub degree: usize,
    pub plus: Vec<Complex64>,
    pub minus: Vec<Complex64>,
    /// Largest `|Ŝ±(m)|` seen for `M < |m| ≤ 2M` before truncation.
    pub truncation_residual: f64,
}

impl SelbergCoefficients {
    fn side(&self, side: Side) -> &[Complex64] {
        match side {
            Side::Plus => &self.plus,
            Side::Minus => &self.minus,
        }
    }

    /// `Ŝ±(m)` for any integer `m`; zero for `|m| > M`.
    pub fn coefficient(&self, side: Side, m: i64) -> Complex64 {
        let k = m.unsigned_abs() as usize;
        match self.side(side).get(k) {
            None => Complex64::new(0.0, 0.0),
            Some(c) if m < 0 => c.conj(),
            Some(c) => *c,
        }
    }

    /// Evaluates the trigonometric polynomial `Σ Ŝ(m) e(mx)`.
    pub fn eval(&self, side: Side, x: f64) -> f64 {
        let c = self.side(side);
        let mut acc = c[0].re;
        for (m, cm) in c.iter().enumerate().skip(1) {
            acc += 2.0 * (cm * Complex64::from_polar(1.0, 2.0 * PI * m as f64 * x)).re;
        }
        acc
    }

    /// `(Ŝ⁺(0) - |J|, |J| - Ŝ⁻(0))`; both equal `1/(M+1)` for Selberg's functions.
    pub fn mass_defect(&self) -> (f64, f64) {
        let len = self.interval.length();
        (self.plus[0].re - len, len - self.minus[0].re)
    }
}

/// Builds `Ŝ±(m)` for `|m| ≤ M`.
pub fn selberg_coefficients(j: &CircleInterval, degree: usize) -> Result<SelbergCoefficients> {
    if degree < 1 {
        return Err(invalid("M", "degree must be at least 1"));
    }
    let funcs = SelbergFunctions::new(*j, degree);
    let points = 4 * (degree + 1);
    let grid: Vec<f64> = (0..points).map(|k| -0.5 + k as f64 / points as f64).collect();
    let plus_samples: Vec<f64> = grid.iter().map(|&x| funcs.eval(Side::Plus, x)).collect();
    let minus_samples: Vec<f64> = grid.iter().map(|&x| funcs.eval(Side::Minus, x)).collect();

    let (cos_t, sin_t): (Vec<f64>, Vec<f64>) = (0..points)
        .map(|k| {
            let a = 2.0 * PI * k as f64 / points as f64;
            (a.cos(), a.sin())
        })
        .unzip();
    let dft = |samples: &[f64], m: usize| -> Complex64 {
        // x_k = -1/2 + k/P, so e(-m x_k) = (-1)^m e(-mk/P).
        let (mut re, mut im) = (0.0, 0.0);
        for (k, &s) in samples.iter().enumerate() {
            let idx = (m * k) % points;
            re += s * cos_t[idx];
            im -= s * sin_t[idx];
        }
        let sign = if m.is_multiple_of(2) { 1.0 } else { -1.0 };
        Complex64::new(re, im) * (sign / points as f64)
    };

    let mut plus = Vec::with_capacity(degree + 1);
    let mut minus = Vec::with_capacity(degree + 1);
    for m in 0..=degree {
        plus.push(dft(&plus_samples, m));
        minus.push(dft(&minus_samples, m));
    }
    let mut residual = 0.0f64;
    for m in degree + 1..=2 * degree {
        residual = residual
            .max(dft(&plus_samples, m).norm())
            .max(dft(&minus_samples, m).norm());
    }
    if residual > DEGREE_RESIDUAL_LIMIT {
        return Err(Error::DegreeResidual { degree, residual });
    }
    // S± are real, so Ŝ(0) is real up to rounding.
    plus[0].im = 0.0;
    minus[0].im = 0.0;
    Ok(SelbergCoefficients {
        interval: *j,
        degree,
        plus,
        minus,
        truncation_residual: residual,
    })
}

/// Majorant/minorant pair in both the circle and Chebyshev bases.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExtremalPair {
    pub interval: ArcInterval,
    pub degree: usize,
    pub selberg: SelbergCoefficients,
    pub f_plus: ChebyshevSeries,
    pub f_minus: ChebyshevSeries,
}

/// `𝒮̂(m) = Ŝ(m) + Ŝ(-m)` for `0 ≤ m ≤ M`.
pub fn folded_coefficients(s: &SelbergCoefficients, side: Side) -> Vec<f64> {
    (0..=s.degree).map(|m| 2.0 * s.coefficient(side, m as i64).re).collect()
}

fn chebyshev_from_folded(folded: &[f64]) -> Result<ChebyshevSeries> {
    let at = |m: usize| folded.get(m).copied().unwrap_or(0.0);
    ChebyshevSeries::new((0..folded.len()).map(|m| at(m) - at(m + 2)).collect())
}

/// Chebyshev-basis majorant and minorant of `χ_I` of degree `M ≥ 3`.
pub fn to_chebyshev(i: &ArcInterval, degree: usize) -> Result<ExtremalPair> {
    if degree < 3 {
        return Err(invalid("M", "degree must be at least 3"));
    }
    let j = i.to_circle()?;
    let selberg = selberg_coefficients(&j, degree)?;
    let f_plus = chebyshev_from_folded(&folded_coefficients(&selberg, Side::Plus))?;
    let f_minus = chebyshev_from_folded(&folded_coefficients(&selberg, Side::Minus))?;
    Ok(ExtremalPair {
        interval: *i,
        degree,
        selberg,
        f_plus,
        f_minus,
    })
}

impl ExtremalPair {
    pub fn series(&self, side: Side) -> &ChebyshevSeries {
        match side {
            Side::Plus => &self.f_plus,
            Side::Minus => &self.f_minus,
        }
    }

    /// `F±(θ)` via the Chebyshev expansion.
    pub fn eval(&self, side: Side, theta: f64) -> f64 {
        self.series(side).eval(theta)
    }

    /// `S±(θ/2π) + S±(-θ/2π)` via the circle coefficients.
    pub fn eval_folded(&self, side: Side, theta: f64) -> f64 {
        let x = theta / (2.0 * PI);
        self.selberg.eval(side, x) + self.selberg.eval(side, -x)
    }

    pub fn mass_defect(&self) -> (f64, f64) {
        self.selberg.mass_defect()
    }

    /// Largest amount by which `F⁻ ≤ χ_I ≤ F⁺` fails on an equispaced grid of
    /// `points` angles. Grid points sitting exactly on a jump of `χ_I` are skipped.
    pub fn max_sandwich_violation(&self, points: usize) -> f64 {
        let (a, b) = (self.interval.a, self.interval.b);
        let mut worst = 0.0f64;
        for k in 0..points {
            let t = PI * k as f64 / (points - 1).max(1) as f64;
            let at_jump = ((t - a).abs() < 1e-12 && a > 0.0) || ((t - b).abs() < 1e-12 && b < PI);
            if at_jump {
                continue;
            }
            let chi = if self.interval.contains(t) { 1.0 } else { 0.0 };
            worst = worst
                .max(self.eval(Side::Minus, t) - chi)
                .max(chi - self.eval(Side::Plus, t));
        }
        worst
    }
}

/// `Σ_{m=1}^M F̂±(m)²` as `(plus, minus)`.
pub fn variance_sum(pair: &ExtremalPair) -> (f64, f64) {
    let sq = |s: &ChebyshevSeries| s.coeffs().iter().skip(1).map(|c| c * c).sum::<f64>();
    (sq(&pair.f_plus), sq(&pair.f_minus))
}
