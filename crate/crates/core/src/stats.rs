//! Sample statistics for ensemble reports.

use serde::{Deserialize, Serialize};

use crate::quadrature::pairwise_sum;
use crate::special::normal_cdf;

/// `E[Z^r]` for a standard normal: 0 for odd `r`, `(r-1)!!` for even `r`.
pub fn gaussian_moment(r: u32) -> f64 {
    if r % 2 == 1 {
        return 0.0;
    }
    (1..r).step_by(2).map(|k| k as f64).product()
}

/// Delete-one jackknife estimate and standard error of the mean of `values`.
pub fn jackknife_mean(values: &[f64]) -> (f64, f64) {
    let n = values.len();
    if n < 2 {
        return (values.first().copied().unwrap_or(f64::NAN), f64::NAN);
    }
    let total = pairwise_sum(values);
    let nf = n as f64;
    let loo: Vec<f64> = values.iter().map(|v| (total - v) / (nf - 1.0)).collect();
    let loo_mean = pairwise_sum(&loo) / nf;
    let dev: Vec<f64> = loo.iter().map(|l| (l - loo_mean) * (l - loo_mean)).collect();
    (total / nf, ((nf - 1.0) / nf * pairwise_sum(&dev)).sqrt())
}

/// `sup_z |F_n(z) - Φ(z)|`. Tied values are a single jump of the empirical CDF.
pub fn ks_normal(values: &[f64]) -> f64 {
    ks_against(values, |z, _| (normal_cdf(z), normal_cdf(z)))
}

/// KS distance for data on a lattice of spacing `step`, comparing the empirical
/// CDF just below and just after each atom with `Φ` at the half-step midpoints.
/// A diagnostic for integer-valued counts; equals [`ks_normal`] as `step → 0`.
pub fn ks_normal_lattice(values: &[f64], step: f64) -> f64 {
    ks_against(values, |z, _| (normal_cdf(z - 0.5 * step), normal_cdf(z + 0.5 * step)))
}

/// `target(z)` returns the reference CDF to compare before and after the atom at `z`.
fn ks_against<F: Fn(f64, usize) -> (f64, f64)>(values: &[f64], target: F) -> f64 {
    let mut sorted: Vec<f64> = values.iter().copied().filter(|v| !v.is_nan()).collect();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    let mut d: f64 = 0.0;
    let mut i = 0;
    while i < sorted.len() {
        let z = sorted[i];
        let mut j = i;
        while j < sorted.len() && sorted[j] == z {
            j += 1;
        }
        let (before, after) = target(z, i);
        d = d.max((before - i as f64 / n).abs()).max((j as f64 / n - after).abs());
        i = j;
    }
    d
}

/// Fixed-range histogram with separate underflow and overflow counts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Histogram {
    pub edges: Vec<f64>,
    pub counts: Vec<u64>,
    pub underflow: u64,
    pub overflow: u64,
}

impl Histogram {
    pub const BINS: usize = 60;
    pub const RANGE: (f64, f64) = (-5.0, 5.0);

    /// Bins are half-open `[left, right)`; values `≥ 5` overflow.
    pub fn standard(values: &[f64]) -> Self {
        let (lo, hi) = Self::RANGE;
        let width = (hi - lo) / Self::BINS as f64;
        let edges = (0..=Self::BINS).map(|k| lo + width * k as f64).collect();
        let mut h = Self {
            edges,
            counts: vec![0; Self::BINS],
            underflow: 0,
            overflow: 0,
        };
        for &v in values {
            if v < lo {
                h.underflow += 1;
            } else if v >= hi || v.is_nan() {
                h.overflow += 1;
            } else {
                let k = (((v - lo) / width) as usize).min(Self::BINS - 1);
                h.counts[k] += 1;
            }
        }
        h
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum::<u64>() + self.underflow + self.overflow
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaussian_moments() {
        let expect = [1.0, 0.0, 1.0, 0.0, 3.0, 0.0, 15.0, 0.0, 105.0];
        for (r, e) in expect.iter().enumerate() {
            assert_eq!(gaussian_moment(r as u32), *e);
        }
        // r!/(2^{r/2}(r/2)!)
        assert_eq!(gaussian_moment(12), 479_001_600.0 / (64.0 * 720.0));
    }

    #[test]
    fn jackknife_of_mean_is_classical_se() {
        let v: Vec<f64> = (0..100).map(|i| ((i * 37) % 11) as f64).collect();
        let (m, se) = jackknife_mean(&v);
        let n = v.len() as f64;
        let mean = v.iter().sum::<f64>() / n;
        let s2 = v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
        assert!((m - mean).abs() < 1e-12);
        assert!((se - (s2 / n).sqrt()).abs() < 1e-12);
    }

    #[test]
    fn ks_single_point_and_ties() {
        assert!((ks_normal(&[0.0]) - 0.5).abs() < 1e-15);
        // two tied points at 0: the empirical CDF jumps 0 -> 1
        assert!((ks_normal(&[0.0, 0.0]) - 0.5).abs() < 1e-15);
        let d = ks_normal(&[-1.0, 1.0]);
        assert!((d - normal_cdf(-1.0).max(0.5 - normal_cdf(-1.0))).abs() < 1e-15);
    }

    #[test]
    fn ks_matches_brute_force_sup() {
        let v: Vec<f64> = (0..200).map(|i| ((i as f64 * 0.618_034) % 1.0) * 4.0 - 2.0).collect();
        let mut sorted = v.clone();
        sorted.sort_by(f64::total_cmp);
        let n = v.len() as f64;
        let mut brute: f64 = 0.0;
        for (i, &z) in sorted.iter().enumerate() {
            let f = normal_cdf(z);
            brute = brute.max((f - i as f64 / n).abs()).max(((i + 1) as f64 / n - f).abs());
        }
        assert!((ks_normal(&v) - brute).abs() < 1e-15);
    }

    #[test]
    fn histogram_accounts_for_everything() {
        let v = [-6.0, -5.0, 0.0, 4.99, 5.0, 7.0];
        let h = Histogram::standard(&v);
        assert_eq!(h.total(), 6);
        assert_eq!((h.underflow, h.overflow), (1, 2));
        assert_eq!(h.counts[0], 1);
        assert_eq!(h.counts[30], 1);
        assert_eq!(h.counts[59], 1);
        assert_eq!(h.edges.len(), 61);
    }
}
