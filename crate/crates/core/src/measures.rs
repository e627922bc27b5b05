//! The Sato-Tate measure `dμ_∞ = (2/π) sin²θ dθ` and the local (p-adic
//! Plancherel) measures
//!
//! ```text
//! dμ_q(θ) = (q + 1) / ((q^{1/2} + q^{-1/2})² - 4cos²θ) dμ_∞(θ)
//! ```
//!
//! on `[0, π]`. The density factor expands as `Σ_n q^{-n} U_{2n}(cos θ)`, so
//! `∫ U_m dμ_q = q^{-m/2}` for even `m` and 0 for odd `m`, and the CDF is a
//! geometric series of closed-form terms.

use std::f64::consts::PI;

use rand_chacha::rand_core::RngCore;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::rng::unit_open;
use crate::selberg::ArcInterval;

/// CDF series terms are dropped once `q^{-n}` falls below this.
pub const CDF_SERIES_CUTOFF: f64 = 1e-14;

/// Angle tolerance for the CDF inversion before polishing.
pub const INVERSION_TOLERANCE: f64 = 1e-12;

fn check_angle(theta: f64) -> Result<()> {
    if !theta.is_finite() {
        return Err(Error::NonFinite("theta"));
    }
    if !(0.0..=PI).contains(&theta) {
        return Err(invalid("theta", format!("{theta} is outside [0, π]")));
    }
    Ok(())
}

/// A probability measure on `[0, π]` with a closed-form CDF.
pub trait AngleMeasure {
    /// Density with respect to Lebesgue measure; caller guarantees the range.
    fn density_unchecked(&self, theta: f64) -> f64;

    /// CDF; caller guarantees the range.
    fn cdf_unchecked(&self, theta: f64) -> f64;

    fn density(&self, theta: f64) -> Result<f64> {
        check_angle(theta)?;
        Ok(self.density_unchecked(theta))
    }

    fn cdf(&self, theta: f64) -> Result<f64> {
        check_angle(theta)?;
        Ok(self.cdf_unchecked(theta))
    }

    /// `μ(I) = F(b) - F(a)`.
    fn interval_mass(&self, i: &ArcInterval) -> f64 {
        (self.cdf_unchecked(i.b()) - self.cdf_unchecked(i.a())).max(0.0)
    }

    /// Solves `F(θ) = u` for `u ∈ (0, 1)`.
    ///
    /// Newton steps are taken inside a shrinking bisection bracket and
    /// replaced by bisection whenever they leave it; iteration stops once the
    /// bracket (or the step) is below 1e-12, and two more Newton steps polish
    /// the result.
    fn invert_cdf(&self, u: f64) -> f64 {
        invert_with_bracket(self, u, 0.0, PI, 0.5 * PI)
    }

    /// Inverse-transform draw; consumes exactly one 64-bit word.
    fn sample<R: RngCore + ?Sized>(&self, rng: &mut R) -> f64 {
        self.invert_cdf(unit_open(rng.next_u64()))
    }
}

pub(crate) fn invert_with_bracket<M: AngleMeasure + ?Sized>(
    m: &M,
    u: f64,
    mut lo: f64,
    mut hi: f64,
    start: f64,
) -> f64 {
    let mut x = start.clamp(lo, hi);
    for _ in 0..200 {
        if hi - lo <= INVERSION_TOLERANCE {
            break;
        }
        let f = m.cdf_unchecked(x) - u;
        if f > 0.0 {
            hi = x;
        } else {
            lo = x;
        }
        let d = m.density_unchecked(x);
        let newton = if d > 0.0 { x - f / d } else { f64::NAN };
        let step_small = (newton - x).abs() < 0.1 * INVERSION_TOLERANCE;
        x = if newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
        if step_small {
            break;
        }
    }
    for _ in 0..2 {
        let d = m.density_unchecked(x);
        if d > 0.0 {
            let next = x - (m.cdf_unchecked(x) - u) / d;
            if next.is_finite() {
                x = next.clamp(lo, hi);
            }
        }
    }
    x.clamp(0.0, PI)
}

/// `μ_∞`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct SatoTate;

impl AngleMeasure for SatoTate {
    fn density_unchecked(&self, theta: f64) -> f64 {
        let s = theta.sin();
        2.0 / PI * s * s
    }

    fn cdf_unchecked(&self, theta: f64) -> f64 {
        (theta / PI - (2.0 * theta).sin() / (2.0 * PI)).clamp(0.0, 1.0)
    }
}

/// Local measure at a prime ideal of norm `q ≥ 2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LocalMeasure {
    q: f64,
    terms: usize,
}

impl LocalMeasure {
    pub fn new(q: f64) -> Result<Self> {
        if !q.is_finite() {
            return Err(Error::NonFinite("q"));
        }
        if q < 2.0 {
            return Err(invalid("q", format!("norm {q} is below 2")));
        }
        // smallest n with q^{-n} < cutoff
        let terms = (-CDF_SERIES_CUTOFF.ln() / q.ln()).floor() as usize + 1;
        Ok(Self { q, terms })
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    /// `(q + 1) / ((q^{1/2} + q^{-1/2})² - 4cos²θ)`, the density relative to `μ_∞`.
    pub fn density_ratio(&self, theta: f64) -> f64 {
        let c = theta.cos();
        let q = self.q;
        (q + 1.0) / (q + 2.0 + 1.0 / q - 4.0 * c * c)
    }

    /// `∫_0^π U_m dμ_q`.
    pub fn chebyshev_moment(&self, m: usize) -> f64 {
        chebyshev_moment(self.q, m)
    }
}

/// `q^{-m/2}` for even `m`, zero for odd `m`.
pub fn chebyshev_moment(q: f64, m: usize) -> f64 {
    if m % 2 == 1 {
        0.0
    } else {
        q.powi(-((m / 2) as i32))
    }
}

/// `∫_0^θ U_m dμ_∞ = (1/π)[sin(mθ)/m - sin((m+2)θ)/(m+2)]` (with the `m = 0`
/// term `θ/π - sin 2θ/(2π)`).
pub fn sato_tate_partial_moment(m: usize, theta: f64) -> f64 {
    if m == 0 {
        return theta / PI - (2.0 * theta).sin() / (2.0 * PI);
    }
    let (a, b) = (m as f64, (m + 2) as f64);
    ((a * theta).sin() / a - (b * theta).sin() / b) / PI
}

impl AngleMeasure for LocalMeasure {
    fn density_unchecked(&self, theta: f64) -> f64 {
        SatoTate.density_unchecked(theta) * self.density_ratio(theta)
    }

    fn cdf_unchecked(&self, theta: f64) -> f64 {
        // Σ_n q^{-n} G_{2n}(θ); sin(2kθ) by the recurrence s_{k+1} = 2cos(2θ) s_k - s_{k-1}.
        let (s2, c2) = (2.0 * theta).sin_cos();
        let two_c = 2.0 * c2;
        let mut acc = theta / PI - s2 / (2.0 * PI);
        let inv_q = 1.0 / self.q;
        let mut weight = 1.0;
        let (mut s_prev, mut s_cur) = (s2, two_c * s2); // sin 2θ, sin 4θ
        for n in 1..self.terms {
            weight *= inv_q;
            let k = 2.0 * n as f64;
            acc += weight * (s_prev / k - s_cur / (k + 2.0)) / PI;
            let next = two_c * s_cur - s_prev;
            s_prev = s_cur;
            s_cur = next;
        }
        acc.clamp(0.0, 1.0)
    }
}

/// CDF values on a uniform angle grid, used to bracket the inversion.
#[derive(Debug, Clone)]
pub struct TabulatedInverse<M> {
    measure: M,
    grid: Vec<f64>,
}

impl<M: AngleMeasure> TabulatedInverse<M> {
    pub const NODES: usize = 64;

    pub fn new(measure: M) -> Self {
        let grid = (0..=Self::NODES)
            .map(|k| measure.cdf_unchecked(Self::node(k)))
            .collect();
        Self { measure, grid }
    }

    fn node(k: usize) -> f64 {
        PI * k as f64 / Self::NODES as f64
    }

    pub fn measure(&self) -> &M {
        &self.measure
    }

    /// Same contract as [`AngleMeasure::invert_cdf`].
    pub fn invert(&self, u: f64) -> f64 {
        // first node with grid[k] >= u
        let k = self.grid.partition_point(|&g| g < u).clamp(1, Self::NODES);
        let (g0, g1) = (self.grid[k - 1], self.grid[k]);
        let (lo, hi) = (Self::node(k - 1), Self::node(k));
        let start = if g1 > g0 {
            lo + (hi - lo) * (u - g0) / (g1 - g0)
        } else {
            0.5 * (lo + hi)
        };
        invert_with_bracket(&self.measure, u, lo, hi, start)
    }

    pub fn sample<R: RngCore + ?Sized>(&self, rng: &mut R) -> f64 {
        self.invert(unit_open(rng.next_u64()))
    }
}
