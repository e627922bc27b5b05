//! Special functions: Hurwitz zeta tails, Beurling's entire majorant of
//! `sgn`, and the standard normal CDF.

use std::f64::consts::{PI, SQRT_2};

use crate::error::{invalid, Result};

/// Default number of explicit terms before the Euler-Maclaurin tail.
pub const DEFAULT_TAIL_TERMS: usize = 16;

/// Beyond this `|z|` the Beurling excess is evaluated from its asymptotic series.
const ASYMPTOTIC_CUTOFF: f64 = 20.0;

/// `B_{2k} / (2k)!` for k = 1..=7.
const BERNOULLI_OVER_FACT: [f64; 7] = [
    1.0 / 12.0,
    -1.0 / 720.0,
    1.0 / 30_240.0,
    -1.0 / 1_209_600.0,
    1.0 / 47_900_160.0,
    -691.0 / 1_307_674_368_000.0,
    1.0 / 74_724_249_600.0,
];

/// Coefficients `g_k` of `G(z) = Σ g_k z^{-k}` where
/// `B(z) - sgn(z) = sin²(πz)/π² · G(z)`, valid for large `|z|` of either sign.
const EXCESS_SERIES: [(i32, f64); 8] = [
    (2, 1.0),
    (3, -1.0 / 3.0),
    (5, 1.0 / 15.0),
    (7, -1.0 / 21.0),
    (9, 1.0 / 15.0),
    (11, -5.0 / 33.0),
    (13, 691.0 / 1365.0),
    (15, -7.0 / 3.0),
];

/// Hurwitz zeta `ζ(s, a) = Σ_{n≥0} (n + a)^{-s}` for integer `s ≥ 2`, `a > 0`.
///
/// Sums directly until the shifted argument reaches 12, then closes with
/// the Euler-Maclaurin tail.
pub fn hurwitz_zeta(s: u32, a: f64) -> f64 {
    debug_assert!(s >= 2 && a > 0.0);
    let si = s as i32;
    let mut acc = 0.0;
    let mut base = a;
    while base < 12.0 {
        acc += base.powi(-si);
        base += 1.0;
    }
    acc + euler_maclaurin_tail(s, base)
}

fn euler_maclaurin_tail(s: u32, a: f64) -> f64 {
    let sf = s as f64;
    let si = s as i32;
    let mut tail = a.powi(1 - si) / (sf - 1.0) + 0.5 * a.powi(-si);
    // rising factorial s (s+1) ... (s+2k-2) times a^{-s-2k+1}
    let mut rising = sf;
    let mut power = a.powi(-si - 1);
    let inv_a2 = 1.0 / (a * a);
    for (k, b) in BERNOULLI_OVER_FACT.iter().enumerate() {
        if k > 0 {
            let j = 2.0 * k as f64;
            rising *= (sf + j - 1.0) * (sf + j);
            power *= inv_a2;
        }
        tail += b * rising * power;
    }
    tail
}

/// Trigamma at `z + 1` for `z ≥ 0`, with `tail_terms` explicit terms.
fn trigamma_shifted(z: f64, tail_terms: usize) -> f64 {
    let mut acc = 0.0;
    for n in 1..=tail_terms {
        let d = z + n as f64;
        acc += 1.0 / (d * d);
    }
    acc + euler_maclaurin_tail(2, z + tail_terms as f64 + 1.0)
}

fn sinc(w: f64) -> f64 {
    if w == 0.0 {
        1.0
    } else {
        (PI * w).sin() / (PI * w)
    }
}

/// `sin²(πz)`, reduced modulo 1 first so large arguments keep full accuracy.
pub(crate) fn sin_pi_sq(z: f64) -> f64 {
    let r = z - z.round();
    let s = (PI * r).sin();
    s * s
}

/// Asymptotic `G(z)` for `|z| ≥ 20`.
pub(crate) fn excess_series(z: f64) -> f64 {
    let inv = 1.0 / z;
    EXCESS_SERIES.iter().map(|&(k, g)| g * inv.powi(k)).sum()
}

/// Σ over `ν > n_max` and `ν < -n_max` of `G(δ(u + ν))`, summed termwise
/// through Hurwitz zeta values.
pub(crate) fn excess_tail(u: f64, delta: f64, n_max: usize) -> f64 {
    let right = u + n_max as f64 + 1.0;
    let left = n_max as f64 + 1.0 - u;
    EXCESS_SERIES
        .iter()
        .map(|&(k, g)| {
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            let kk = k as u32;
            g * delta.powi(-k) * (hurwitz_zeta(kk, right) + sign * hurwitz_zeta(kk, left))
        })
        .sum()
}

/// Beurling's function
/// `B(z) = (sin πz / π)² (Σ_{n≥0} (z-n)^{-2} - Σ_{n≥1} (z+n)^{-2} + 2/z)`,
/// an entire majorant of `sgn` of exponential type `2π` with
/// `∫ (B - sgn) = 1`. Integer arguments use the removable limit.
pub fn beurling_b(x: f64, tail_terms: usize) -> Result<f64> {
    if tail_terms < 10 {
        return Err(invalid("tail_terms", "need at least 10 explicit terms"));
    }
    if !x.is_finite() {
        return Err(invalid("x", "must be finite"));
    }
    Ok(beurling_b_unchecked(x, tail_terms))
}

pub(crate) fn beurling_b_unchecked(z: f64, tail_terms: usize) -> f64 {
    if z.abs() >= ASYMPTOTIC_CUTOFF {
        return z.signum() + sin_pi_sq(z) / (PI * PI) * excess_series(z);
    }
    if z >= 0.0 {
        let s = sinc(z);
        1.0 + s * s * (2.0 * z - 2.0 * z * z * trigamma_shifted(z, tail_terms))
    } else {
        let w = -z;
        let s = sinc(w);
        -1.0 + s * s * (2.0 + 2.0 * w * w * trigamma_shifted(w, tail_terms) - 2.0 * w)
    }
}

/// Standard normal CDF.
pub fn normal_cdf(z: f64) -> f64 {
    0.5 * libm::erfc(-z / SQRT_2)
}
