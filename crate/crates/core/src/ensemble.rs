//! Independent-angle Monte Carlo model of a vertical family.
//!
//! Member `h` of the ensemble draws one angle `θ(p) ~ μ_{N(p)}` for every
//! prime ideal `p` with `N(p) ≤ x` outside the level, independently across
//! ideals and members, and reports either the interval count
//! `N_I = Σ χ_I(θ(p))` or the smooth sum `Σ φ_M(θ(p)/π)`.
//!
//! Determinism: the draw for ideal `i` of member `h` is word `i` of ChaCha8
//! stream `h` under the run seed, and member results are reduced in member
//! order, so reports do not depend on the executor or its thread count.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::chebyshev::{eval_u_unchecked, fourier_coefficient};
use crate::error::{invalid, Error, Result};
use crate::measures::{AngleMeasure, LocalMeasure, TabulatedInverse};
use crate::number_field::{enumerate_prime_ideals, FieldSpec, LevelSpec, PrimeIdeal, SIEVE_CAPACITY};
use crate::quadrature::{pairwise_sum, simpson, NeumaierSum, DEFAULT_PANELS};
use crate::rng::AngleStream;
use crate::selberg::{mu_infty_interval, ArcInterval};
use crate::stats::{gaussian_moment, jackknife_mean, ks_normal, ks_normal_lattice, Histogram};

pub const DEFAULT_MAX_MOMENT: u32 = 6;
pub const MAX_MOMENT_LIMIT: u32 = 12;
pub const MIN_ENSEMBLE_SIZE: usize = 100;

/// Periodization terms are kept until the neglected tail is below this.
pub const SMOOTH_TAIL_BOUND: f64 = 1e-12;

/// Even test function `Φ` for the smooth statistic.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SmoothSpec {
    /// `Φ(u) = exp(-λu²)`.
    Gaussian { lambda: f64 },
    /// `Φ(|u|)` tabulated at `u = 0, step, 2·step, …` with linear
    /// interpolation, and zero past the last node.
    Custom {
        step: f64,
        values: Vec<f64>,
        #[serde(default)]
        omega: Option<f64>,
    },
}

impl SmoothSpec {
    pub fn gaussian(lambda: f64) -> Result<Self> {
        let s = SmoothSpec::Gaussian { lambda };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            SmoothSpec::Gaussian { lambda } => {
                if !(lambda.is_finite() && *lambda > 0.0) {
                    return Err(invalid(
                        "statistic.phi.lambda",
                        format!("{lambda} must be positive and finite"),
                    ));
                }
            }
            SmoothSpec::Custom { step, values, omega } => {
                if !(step.is_finite() && *step > 0.0) {
                    return Err(invalid(
                        "statistic.phi.step",
                        format!("{step} must be positive and finite"),
                    ));
                }
                if values.is_empty() || values.iter().any(|v| !v.is_finite()) {
                    return Err(invalid("statistic.phi.values", "need at least one finite value"));
                }
                if let Some(w) = omega {
                    if !(w.is_finite() && *w > 0.0) {
                        return Err(invalid("statistic.phi.omega", format!("{w} must be positive")));
                    }
                }
            }
        }
        Ok(())
    }

    /// Decay exponent of `Φ̂`, when known.
    pub fn omega(&self) -> Option<f64> {
        match self {
            SmoothSpec::Gaussian { .. } => Some(2.0),
            SmoothSpec::Custom { omega, .. } => *omega,
        }
    }

    pub fn phi(&self, u: f64) -> f64 {
        match self {
            SmoothSpec::Gaussian { lambda } => (-lambda * u * u).exp(),
            SmoothSpec::Custom { step, values, .. } => {
                let s = u.abs() / step;
                let k = s.floor() as usize;
                match (values.get(k), values.get(k + 1)) {
                    (Some(a), Some(b)) => a + (b - a) * (s - k as f64),
                    (Some(a), None) if s == k as f64 => *a,
                    _ => 0.0,
                }
            }
        }
    }
}

/// `φ_M(t) = Σ_m Φ(M(t + m))` for `t ∈ [0, 1]`, with the shift range fixed up front.
#[derive(Debug, Clone, PartialEq)]
pub struct SmoothWeight {
    spec: SmoothSpec,
    m: f64,
    reach: i64,
}

impl SmoothWeight {
    pub fn new(spec: SmoothSpec, m: f64) -> Result<Self> {
        spec.validate()?;
        if !(m.is_finite() && m >= 1.0) {
            return Err(invalid("statistic.M", format!("{m} must be at least 1")));
        }
        let reach = match &spec {
            // Every omitted shift has |t + m| ≥ d, so the two tails are each
            // at most e^{-λM²d²} / (1 - e^{-2λM²d}).
            SmoothSpec::Gaussian { lambda } => {
                let a = lambda * m * m;
                let mut d = 1.0f64;
                while 2.0 * (-a * d * d).exp() / (1.0 - (-2.0 * a * d).exp()) >= SMOOTH_TAIL_BOUND {
                    d += 1.0;
                }
                d as i64
            }
            // compact support: the kept range is exact
            SmoothSpec::Custom { step, values, .. } => (step * values.len() as f64 / m).ceil() as i64 + 1,
        };
        Ok(Self { spec, m, reach })
    }

    pub fn spec(&self) -> &SmoothSpec {
        &self.spec
    }

    pub fn m(&self) -> f64 {
        self.m
    }

    pub fn eval(&self, t: f64) -> f64 {
        let mut acc = 0.0;
        for shift in -self.reach - 1..=self.reach {
            acc += self.spec.phi(self.m * (t + shift as f64));
        }
        acc
    }

    /// `(∫ φ_M dμ_∞, ∫ φ_M² dμ_∞, V_{Φ,M})` on `[0, 1]` with density `2 sin²(πt)`.
    pub fn sato_tate_moments(&self) -> Result<(f64, f64, f64)> {
        let w = |t: f64| 2.0 * (PI * t).sin().powi(2);
        let e1 = simpson(|t| self.eval(t) * w(t), 0.0, 1.0, DEFAULT_PANELS).ok_or(Error::NonFinite("φ_M"))?;
        let e2 = simpson(|t| self.eval(t).powi(2) * w(t), 0.0, 1.0, DEFAULT_PANELS).ok_or(Error::NonFinite("φ_M"))?;
        Ok((e1, e2, e2 - e1 * e1))
    }

    /// Coefficients `[g • U_m]` for even `m` up to `2·terms`, `g(θ) = φ_M(θ/π)`,
    /// and the same for `g²`.
    fn even_coefficients(&self, terms: usize) -> Result<(Vec<f64>, Vec<f64>)> {
        let g = |th: f64| self.eval(th / PI);
        let mut c1 = Vec::with_capacity(terms + 1);
        let mut c2 = Vec::with_capacity(terms + 1);
        for j in 0..=terms {
            c1.push(fourier_coefficient(g, 2 * j, DEFAULT_PANELS)?);
            c2.push(fourier_coefficient(|th| g(th).powi(2), 2 * j, DEFAULT_PANELS)?);
        }
        Ok((c1, c2))
    }
}

/// `φ_M(t)` for the given spec.
pub fn smooth_weight(spec: &SmoothSpec, m: f64, t: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&t) {
        return Err(invalid("t", format!("{t} is outside [0, 1]")));
    }
    Ok(SmoothWeight::new(spec.clone(), m)?.eval(t))
}

/// Which per-ideal statistic a member reports.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Statistic {
    Indicator {
        interval: ArcInterval,
    },
    Smooth {
        phi: SmoothSpec,
        #[serde(rename = "M")]
        m: f64,
    },
}

fn default_max_moment() -> u32 {
    DEFAULT_MAX_MOMENT
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnsembleConfig {
    pub field: FieldSpec,
    #[serde(default)]
    pub level: LevelSpec,
    pub x: f64,
    /// Number of members `H`.
    #[serde(alias = "H")]
    pub size: usize,
    pub seed: u64,
    pub statistic: Statistic,
    #[serde(default = "default_max_moment")]
    pub max_moment: u32,
}

impl EnsembleConfig {
    pub fn validate(&self) -> Result<()> {
        if !self.x.is_finite() || self.x < 2.0 || self.x > SIEVE_CAPACITY as f64 {
            return Err(invalid("x", format!("{} must lie in [2, {SIEVE_CAPACITY}]", self.x)));
        }
        if self.size < MIN_ENSEMBLE_SIZE {
            return Err(invalid("size", format!("{} is below {MIN_ENSEMBLE_SIZE}", self.size)));
        }
        if self.max_moment == 0 || self.max_moment > MAX_MOMENT_LIMIT {
            return Err(invalid(
                "max_moment",
                format!("{} must lie in 1..={MAX_MOMENT_LIMIT}", self.max_moment),
            ));
        }
        self.level.validate(&self.field)?;
        match &self.statistic {
            Statistic::Indicator { interval } => {
                let mu = mu_infty_interval(interval);
                if mu <= 0.0 || mu >= 1.0 {
                    return Err(invalid(
                        "statistic.interval",
                        format!("μ_∞(I) = {mu} leaves nothing to standardize"),
                    ));
                }
            }
            Statistic::Smooth { phi, m } => {
                SmoothWeight::new(phi.clone(), *m)?;
            }
        }
        Ok(())
    }
}

/// How member statistics are scheduled. Results never depend on the choice.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Executor {
    Sequential,
    /// Rayon work-stealing; `None` uses the global pool. Without the
    /// `parallel` feature this runs sequentially.
    Parallel {
        threads: Option<usize>,
    },
}

impl Default for Executor {
    fn default() -> Self {
        Executor::Parallel { threads: None }
    }
}

impl Executor {
    /// `[f(0), …, f(n-1)]` in index order.
    pub fn map<T, F>(&self, n: usize, f: F) -> Result<Vec<T>>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        match *self {
            Executor::Sequential => Ok((0..n).map(f).collect()),
            Executor::Parallel { threads } => parallel_map(threads, n, f),
        }
    }
}

#[cfg(feature = "parallel")]
fn parallel_map<T, F>(threads: Option<usize>, n: usize, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    use rayon::prelude::*;
    match threads {
        None => Ok((0..n).into_par_iter().map(f).collect()),
        Some(0) => Err(invalid("threads", "must be at least 1")),
        Some(t) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(t)
                .build()
                .map_err(|e| Error::Guard(format!("thread pool: {e}")))?;
            Ok(pool.install(|| (0..n).into_par_iter().map(f).collect()))
        }
    }
}

#[cfg(not(feature = "parallel"))]
fn parallel_map<T, F>(threads: Option<usize>, n: usize, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    if threads == Some(0) {
        return Err(invalid("threads", "must be at least 1"));
    }
    Ok((0..n).map(f).collect())
}

#[derive(Debug, Clone)]
enum Kernel {
    /// Per ideal `(F(a), F(b))`: `θ = F⁻¹(u) ∈ [a, b]` iff `F(a) ≤ u ≤ F(b)`.
    Indicator { thresholds: Vec<(f64, f64)> },
    Smooth {
        weight: SmoothWeight,
        sampler_of: Vec<u32>,
        samplers: Vec<TabulatedInverse<LocalMeasure>>,
    },
}

/// Summary of one ensemble run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MomentReport {
    #[serde(rename = "pi_L_x")]
    pub pi_l_x: u64,
    pub size: usize,
    /// Standardization `z = (value - center) / scale`.
    pub center: f64,
    pub scale: f64,
    pub empirical_moments: Vec<f64>,
    pub standard_errors: Vec<f64>,
    pub gaussian_targets: Vec<f64>,
    /// `(empirical - target) / standard_error` per moment.
    pub z_scores: Vec<f64>,
    pub ks_statistic: f64,
    /// KS against `Φ` at half-lattice midpoints; indicator mode only.
    pub ks_lattice_corrected: Option<f64>,
    pub histogram: Histogram,
    /// Exact mean and variance of the raw statistic under the model.
    pub mean_model: f64,
    pub variance_model: f64,
    pub raw_mean: f64,
    pub raw_variance: f64,
}

/// A prepared ensemble: ideals enumerated, per-ideal kernels and the
/// standardization fixed.
#[derive(Debug, Clone)]
pub struct Ensemble {
    config: EnsembleConfig,
    ideals: Vec<PrimeIdeal>,
    kernel: Kernel,
    center: f64,
    scale: f64,
    mean_model: f64,
    variance_model: f64,
}

impl Ensemble {
    pub fn new(config: EnsembleConfig) -> Result<Self> {
        config.validate()?;
        let ideals = enumerate_prime_ideals(&config.field, config.x, &config.level)?;
        let pi_l = ideals.len() as f64;
        if ideals.is_empty() {
            return Err(invalid("x", "no prime ideals below x"));
        }
        let measures = ideals
            .iter()
            .map(|p| LocalMeasure::new(p.norm as f64))
            .collect::<Result<Vec<_>>>()?;
        let (kernel, center, scale, mean_model, variance_model) = match &config.statistic {
            Statistic::Indicator { interval } => {
                let thresholds: Vec<(f64, f64)> = measures
                    .iter()
                    .map(|m| (m.cdf_unchecked(interval.a()), m.cdf_unchecked(interval.b())))
                    .collect();
                let masses: Vec<f64> = thresholds.iter().map(|(lo, hi)| (hi - lo).max(0.0)).collect();
                let mean: f64 = masses.iter().copied().collect::<NeumaierSum>().total();
                let var: f64 = masses.iter().map(|m| m * (1.0 - m)).collect::<NeumaierSum>().total();
                let mu = mu_infty_interval(interval);
                let center = pi_l * mu;
                let scale = (pi_l * (mu - mu * mu)).sqrt();
                (Kernel::Indicator { thresholds }, center, scale, mean, var)
            }
            Statistic::Smooth { phi, m } => {
                let weight = SmoothWeight::new(phi.clone(), *m)?;
                let (e1, _, v) = weight.sato_tate_moments()?;
                if v.is_nan() || v <= 0.0 {
                    return Err(Error::Guard(format!("V_Φ,M = {v} is not positive")));
                }
                let (sampler_of, norms) = group_by_norm(&ideals);
                let min_q = norms.first().copied().unwrap_or(2) as f64;
                let terms = (-(1e-17f64).ln() / min_q.ln()).ceil() as usize + 1;
                let (c1, c2) = weight.even_coefficients(terms)?;
                let local = |c: &[f64], q: f64| -> f64 {
                    c.iter()
                        .enumerate()
                        .map(|(j, cj)| cj * q.powi(-(j as i32)))
                        .sum::<f64>()
                };
                let mut mean = NeumaierSum::default();
                let mut var = NeumaierSum::default();
                for &k in &sampler_of {
                    let q = norms[k as usize] as f64;
                    let (a, b) = (local(&c1, q), local(&c2, q));
                    mean.add(a);
                    var.add(b - a * a);
                }
                let samplers = norms
                    .iter()
                    .map(|&n| LocalMeasure::new(n as f64).map(TabulatedInverse::new))
                    .collect::<Result<Vec<_>>>()?;
                let kernel = Kernel::Smooth {
                    weight,
                    sampler_of,
                    samplers,
                };
                (kernel, pi_l * e1, (pi_l * v).sqrt(), mean.total(), var.total())
            }
        };
        Ok(Self {
            config,
            ideals,
            kernel,
            center,
            scale,
            mean_model,
            variance_model,
        })
    }

    pub fn config(&self) -> &EnsembleConfig {
        &self.config
    }

    pub fn ideals(&self) -> &[PrimeIdeal] {
        &self.ideals
    }

    pub fn pi_l(&self) -> u64 {
        self.ideals.len() as u64
    }

    pub fn center(&self) -> f64 {
        self.center
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn mean_model(&self) -> f64 {
        self.mean_model
    }

    pub fn variance_model(&self) -> f64 {
        self.variance_model
    }

    /// Raw statistic of member `h`; a pure function of `(seed, h)`.
    pub fn member_statistic(&self, h: usize) -> f64 {
        let mut stream = AngleStream::new(self.config.seed, h as u64);
        match &self.kernel {
            Kernel::Indicator { thresholds } => {
                let mut count = 0u64;
                for &(lo, hi) in thresholds {
                    let u = stream.uniform();
                    if lo <= u && u <= hi {
                        count += 1;
                    }
                }
                count as f64
            }
            Kernel::Smooth {
                weight,
                sampler_of,
                samplers,
            } => {
                let mut acc = 0.0;
                for &k in sampler_of {
                    let theta = samplers[k as usize].invert(stream.uniform());
                    acc += weight.eval(theta / PI);
                }
                acc
            }
        }
    }

    pub fn standardize(&self, value: f64) -> f64 {
        (value - self.center) / self.scale
    }

    pub fn member_statistics(&self, executor: Executor) -> Result<Vec<f64>> {
        executor.map(self.config.size, |h| self.member_statistic(h))
    }

    pub fn run(&self, executor: Executor) -> Result<MomentReport> {
        let raw = self.member_statistics(executor)?;
        Ok(self.report(&raw))
    }

    /// Builds the report from raw member statistics in member order.
    pub fn report(&self, raw: &[f64]) -> MomentReport {
        let n = raw.len() as f64;
        let z: Vec<f64> = raw.iter().map(|&v| self.standardize(v)).collect();
        let r_max = self.config.max_moment;
        let mut empirical_moments = Vec::new();
        let mut standard_errors = Vec::new();
        let mut gaussian_targets = Vec::new();
        let mut z_scores = Vec::new();
        let mut power: Vec<f64> = vec![1.0; z.len()];
        for r in 1..=r_max {
            for (p, zi) in power.iter_mut().zip(&z) {
                *p *= zi;
            }
            let (m, se) = jackknife_mean(&power);
            let target = gaussian_moment(r);
            empirical_moments.push(m);
            standard_errors.push(se);
            gaussian_targets.push(target);
            z_scores.push((m - target) / se);
        }
        let raw_mean = pairwise_sum(raw) / n;
        let dev: Vec<f64> = raw.iter().map(|v| (v - raw_mean).powi(2)).collect();
        let raw_variance = pairwise_sum(&dev) / (n - 1.0);
        let ks_lattice_corrected = match self.kernel {
            Kernel::Indicator { .. } => Some(ks_normal_lattice(&z, 1.0 / self.scale)),
            Kernel::Smooth { .. } => None,
        };
        MomentReport {
            pi_l_x: self.pi_l(),
            size: raw.len(),
            center: self.center,
            scale: self.scale,
            empirical_moments,
            standard_errors,
            gaussian_targets,
            z_scores,
            ks_statistic: ks_normal(&z),
            ks_lattice_corrected,
            histogram: Histogram::standard(&z),
            mean_model: self.mean_model,
            variance_model: self.variance_model,
            raw_mean,
            raw_variance,
        }
    }

    fn index_of(&self, ideal: &PrimeIdeal) -> Option<usize> {
        self.ideals.iter().position(|p| p.key() == ideal.key())
    }
}

/// Distinct norms in ascending order and, per ideal, the index of its norm.
fn group_by_norm(ideals: &[PrimeIdeal]) -> (Vec<u32>, Vec<u64>) {
    let mut norms: Vec<u64> = ideals.iter().map(|p| p.norm).collect();
    norms.sort_unstable();
    norms.dedup();
    let index = ideals
        .iter()
        .map(|p| norms.binary_search(&p.norm).unwrap_or(0) as u32)
        .collect();
    (index, norms)
}

/// Raw statistic of member `h` for `config`.
pub fn member_statistic(config: &EnsembleConfig, h: usize) -> Result<f64> {
    if h >= config.size {
        return Err(invalid(
            "member_index",
            format!("{h} is not below size {}", config.size),
        ));
    }
    Ok(Ensemble::new(config.clone())?.member_statistic(h))
}

/// `(value - π_L μ_∞(I)) / √(π_L (μ_∞(I) - μ_∞(I)²))`.
pub fn standardize(value: f64, pi_l: u64, interval: &ArcInterval) -> Result<f64> {
    let mu = mu_infty_interval(interval);
    if mu <= 0.0 || mu >= 1.0 {
        return Err(invalid("interval", format!("μ_∞(I) = {mu} is degenerate")));
    }
    if pi_l == 0 {
        return Err(invalid("pi_L", "no prime ideals"));
    }
    let p = pi_l as f64;
    Ok((value - p * mu) / (p * (mu - mu * mu)).sqrt())
}

pub fn run_ensemble(config: &EnsembleConfig, executor: Executor) -> Result<MomentReport> {
    Ensemble::new(config.clone())?.run(executor)
}

/// `⌊√π_L · log log x⌋`, the degree used for the moment theorem.
pub fn theorem_degree(pi_l: u64, x: f64) -> usize {
    let ll = x.ln().ln();
    if ll.is_nan() || ll <= 0.0 {
        return 0;
    }
    ((pi_l as f64).sqrt() * ll).floor() as usize
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TraceIdentityReport {
    pub empirical: f64,
    pub target: f64,
    pub standard_error: f64,
    pub z_score: f64,
}

/// Ensemble average of `Π U_{m_i}(cos θ(p_i))` at distinct ideals against
/// the closed form `Π ∫ U_{m_i} dμ_{N(p_i)}`.
///
/// Angles are the same draws `member_statistic` uses for those ideals.
pub fn trace_identity_check(
    config: &EnsembleConfig,
    ideals: &[PrimeIdeal],
    ms: &[usize],
    executor: Executor,
) -> Result<TraceIdentityReport> {
    if ideals.len() != ms.len() {
        return Err(invalid(
            "ms",
            format!("{} exponents for {} ideals", ms.len(), ideals.len()),
        ));
    }
    for (i, a) in ideals.iter().enumerate() {
        if ideals[..i].iter().any(|b| b.key() == a.key()) {
            return Err(Error::RepeatedIdeal(a.norm));
        }
    }
    if ideals.is_empty() {
        return Ok(TraceIdentityReport {
            empirical: 1.0,
            target: 1.0,
            standard_error: 0.0,
            z_score: 0.0,
        });
    }
    let ensemble = Ensemble::new(config.clone())?;
    let mut sites = Vec::with_capacity(ideals.len());
    for p in ideals {
        let idx = ensemble.index_of(p).ok_or_else(|| {
            invalid(
                "ideals",
                format!("ideal above {} (label {}) is not enumerated", p.p, p.label),
            )
        })?;
        sites.push((idx as u64, LocalMeasure::new(p.norm as f64)?));
    }
    let target: f64 = sites.iter().zip(ms).map(|((_, m), &e)| m.chebyshev_moment(e)).product();
    let values = executor.map(config.size, |h| {
        sites
            .iter()
            .zip(ms)
            .map(|((idx, m), &e)| {
                let u = AngleStream::at(config.seed, h as u64, *idx).uniform();
                eval_u_unchecked(e, m.invert_cdf(u))
            })
            .product::<f64>()
    })?;
    let (empirical, standard_error) = jackknife_mean(&values);
    let diff = empirical - target;
    let z_score = if standard_error > 0.0 {
        diff / standard_error
    } else if diff.abs() < 1e-12 {
        0.0
    } else {
        f64::INFINITY.copysign(diff)
    };
    Ok(TraceIdentityReport {
        empirical,
        target,
        standard_error,
        z_score,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::SatoTate;
    use crate::number_field::split_prime;

    fn sqrt5() -> FieldSpec {
        FieldSpec::real_quadratic(5).unwrap()
    }

    fn indicator_config(x: f64, size: usize, a: f64, b: f64) -> EnsembleConfig {
        EnsembleConfig {
            field: sqrt5(),
            level: LevelSpec::trivial(),
            x,
            size,
            seed: 20_240_611,
            statistic: Statistic::Indicator {
                interval: ArcInterval::new(a, b).unwrap(),
            },
            max_moment: 6,
        }
    }

    #[test]
    fn smooth_weight_gaussian_series() {
        let g = SmoothSpec::gaussian(1.0).unwrap();
        let direct: f64 = (-50i32..=50).map(|m| (-(m as f64).powi(2)).exp()).sum();
        let v = smooth_weight(&g, 1.0, 0.0).unwrap();
        assert!((v - direct).abs() < 1e-12);
        assert!((v - 1.772_637_204_826_652).abs() < 1e-12);
    }

    #[test]
    fn smooth_weight_reflection_symmetry() {
        let g = SmoothSpec::gaussian(0.7).unwrap();
        for k in 0..=20 {
            let t = k as f64 / 20.0;
            let a = smooth_weight(&g, 2.5, t).unwrap();
            let b = smooth_weight(&g, 2.5, 1.0 - t).unwrap();
            assert!((a - b).abs() < 1e-13);
        }
        assert!(smooth_weight(&g, 0.5, 0.1).is_err());
        assert!(smooth_weight(&g, 2.0, 1.5).is_err());
    }

    #[test]
    fn custom_table_interpolates_and_vanishes() {
        let tent = SmoothSpec::Custom {
            step: 0.5,
            values: vec![1.0, 0.5, 0.0],
            omega: None,
        };
        assert_eq!(tent.phi(0.25), 0.75);
        assert_eq!(tent.phi(-0.25), 0.75);
        assert_eq!(tent.phi(3.0), 0.0);
        // integer translates of a unit tent sum to 1
        let w = SmoothWeight::new(tent, 1.0).unwrap();
        for k in 0..=10 {
            assert!((w.eval(k as f64 / 10.0) - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn smooth_variance_is_nonnegative() {
        for (lambda, m) in [(1.0, 1.0), (1.0, 4.0), (0.2, 10.0)] {
            let w = SmoothWeight::new(SmoothSpec::gaussian(lambda).unwrap(), m).unwrap();
            let (e1, e2, v) = w.sato_tate_moments().unwrap();
            assert!(v >= 0.0 && e2 >= e1 * e1);
        }
    }

    #[test]
    fn full_interval_counts_every_ideal() {
        let mut c = indicator_config(1000.0, 100, 0.0, PI);
        // μ_∞ = 1 is rejected for standardization, so build the kernel directly
        assert!(c.validate().is_err());
        c.statistic = Statistic::Indicator {
            interval: ArcInterval::new(0.0, PI / 2.0).unwrap(),
        };
        let e = Ensemble::new(c).unwrap();
        let full = Kernel::Indicator {
            thresholds: vec![(0.0, 1.0); e.ideals.len()],
        };
        let e_full = Ensemble {
            kernel: full,
            ..e.clone()
        };
        assert_eq!(e_full.member_statistic(3), e.pi_l() as f64);
        let empty = Kernel::Indicator {
            thresholds: vec![(0.5, 0.5); e.ideals.len()],
        };
        assert_eq!(Ensemble { kernel: empty, ..e }.member_statistic(3), 0.0);
    }

    #[test]
    fn thresholds_agree_with_explicit_sampling() {
        let c = indicator_config(500.0, 100, PI / 4.0, PI / 2.0);
        let e = Ensemble::new(c.clone()).unwrap();
        let i = ArcInterval::new(PI / 4.0, PI / 2.0).unwrap();
        for h in 0..20 {
            let mut s = AngleStream::new(c.seed, h as u64);
            let explicit = e
                .ideals()
                .iter()
                .filter(|p| i.contains(LocalMeasure::new(p.norm as f64).unwrap().sample(&mut s)))
                .count();
            assert_eq!(e.member_statistic(h), explicit as f64);
        }
    }

    #[test]
    fn mean_matches_exact_model() {
        let c = indicator_config(1000.0, 10_000, PI / 4.0, PI / 2.0);
        let e = Ensemble::new(c).unwrap();
        let r = e.run(Executor::Sequential).unwrap();
        let se = (e.variance_model() / r.size as f64).sqrt();
        assert!(
            (r.raw_mean - e.mean_model()).abs() < 4.0 * se,
            "{} vs {}",
            r.raw_mean,
            e.mean_model()
        );
        let expect: f64 = e
            .ideals()
            .iter()
            .map(|p| {
                LocalMeasure::new(p.norm as f64)
                    .unwrap()
                    .interval_mass(&ArcInterval::new(PI / 4.0, PI / 2.0).unwrap())
            })
            .sum();
        assert!((e.mean_model() - expect).abs() < 1e-9);
    }

    #[test]
    fn model_mean_close_to_sato_tate() {
        for x in [1e3, 1e4, 1e5] {
            let e = Ensemble::new(indicator_config(x, 100, PI / 4.0, PI / 2.0)).unwrap();
            let gap = (e.mean_model() - e.center()).abs();
            assert!(gap <= 5.0 * x.ln().ln(), "x={x} gap={gap}");
        }
    }

    #[test]
    fn report_is_executor_independent() {
        let c = indicator_config(300.0, 500, 0.3, 2.0);
        let e = Ensemble::new(c).unwrap();
        let a = e.run(Executor::Sequential).unwrap();
        let b = e.run(Executor::Parallel { threads: Some(3) }).unwrap();
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
        assert_eq!(a.histogram.total(), 500);
        assert!(Executor::Parallel { threads: Some(0) }.map(3, |i| i).is_err());
    }

    #[test]
    fn member_statistic_is_pure() {
        let c = indicator_config(300.0, 200, 0.3, 2.0);
        let e = Ensemble::new(c.clone()).unwrap();
        let forward: Vec<f64> = (0..50).map(|h| e.member_statistic(h)).collect();
        let backward: Vec<f64> = (0..50).rev().map(|h| e.member_statistic(h)).collect();
        assert!(forward.iter().eq(backward.iter().rev()));
        assert_eq!(member_statistic(&c, 7).unwrap(), forward[7]);
        assert!(member_statistic(&c, 200).is_err());
    }

    #[test]
    fn standardize_center_and_scale() {
        let i = ArcInterval::new(PI / 4.0, PI / 2.0).unwrap();
        let mu = mu_infty_interval(&i);
        let n = 1000u64;
        let center = n as f64 * mu;
        let scale = (n as f64 * (mu - mu * mu)).sqrt();
        assert!(standardize(center, n, &i).unwrap().abs() < 1e-12);
        assert!((standardize(center + scale, n, &i).unwrap() - 1.0).abs() < 1e-12);
        assert!(standardize(1.0, n, &ArcInterval::full()).is_err());
    }

    #[test]
    fn smooth_model_moments_match_sato_tate_for_large_norms() {
        let c = EnsembleConfig {
            statistic: Statistic::Smooth {
                phi: SmoothSpec::gaussian(1.0).unwrap(),
                m: 4.0,
            },
            ..indicator_config(200.0, 100, 0.1, 0.2)
        };
        let e = Ensemble::new(c).unwrap();
        let w = SmoothWeight::new(SmoothSpec::gaussian(1.0).unwrap(), 4.0).unwrap();
        // direct quadrature of E_q φ for the first ideal
        let q = e.ideals()[0].norm as f64;
        let m = LocalMeasure::new(q).unwrap();
        let direct = simpson(|th| w.eval(th / PI) * m.density_unchecked(th), 0.0, PI, DEFAULT_PANELS).unwrap();
        let (c1, _) = w.even_coefficients(60).unwrap();
        let series: f64 = c1.iter().enumerate().map(|(j, cj)| cj * q.powi(-(j as i32))).sum();
        assert!((direct - series).abs() < 1e-10);
        let st = simpson(
            |th| w.eval(th / PI) * SatoTate.density_unchecked(th),
            0.0,
            PI,
            DEFAULT_PANELS,
        )
        .unwrap();
        assert!((st - c1[0]).abs() < 1e-12);
    }

    #[test]
    fn trace_identity_targets() {
        let c = indicator_config(100.0, 4000, PI / 4.0, PI / 2.0);
        let f = sqrt5();
        let p2 = split_prime(&f, 2).unwrap()[0];
        let p3 = split_prime(&f, 3).unwrap()[0];
        let r = trace_identity_check(&c, &[p2, p3], &[2, 2], Executor::Sequential).unwrap();
        assert!((r.target - 1.0 / 36.0).abs() < 1e-15);
        assert!(r.z_score.abs() < 5.0, "{r:?}");
        let odd = trace_identity_check(&c, &[p2, p3], &[1, 2], Executor::Sequential).unwrap();
        assert_eq!(odd.target, 0.0);
        let empty = trace_identity_check(&c, &[], &[], Executor::Sequential).unwrap();
        assert_eq!((empty.empirical, empty.target), (1.0, 1.0));
        assert!(matches!(
            trace_identity_check(&c, &[p2, p2], &[2, 2], Executor::Sequential),
            Err(Error::RepeatedIdeal(4))
        ));
        assert!(trace_identity_check(&c, &[p2], &[2, 2], Executor::Sequential).is_err());
    }

    #[test]
    fn config_round_trip_and_errors() {
        let json = r#"{"field":{"kind":"real_quadratic","D":5},"x":10000,"H":50000,"seed":7,
            "statistic":{"kind":"indicator","interval":[0.7853981633974483,1.5707963267948966]}}"#;
        let c: EnsembleConfig = serde_json::from_str(json).unwrap();
        assert_eq!((c.size, c.max_moment), (50_000, 6));
        c.validate().unwrap();
        let back: EnsembleConfig = serde_json::from_str(&serde_json::to_string(&c).unwrap()).unwrap();
        assert_eq!(back, c);
        let bad = |c: EnsembleConfig, field: &str| match c.validate() {
            Err(Error::InvalidArgument { field: f, .. }) => assert_eq!(f, field),
            other => panic!("expected error on {field}, got {other:?}"),
        };
        bad(EnsembleConfig { size: 10, ..c.clone() }, "size");
        bad(
            EnsembleConfig {
                max_moment: 13,
                ..c.clone()
            },
            "max_moment",
        );
        bad(EnsembleConfig { x: 1.0, ..c.clone() }, "x");
        bad(
            EnsembleConfig {
                statistic: Statistic::Smooth {
                    phi: SmoothSpec::Gaussian { lambda: -1.0 },
                    m: 2.0,
                },
                ..c.clone()
            },
            "statistic.phi.lambda",
        );
        bad(
            EnsembleConfig {
                statistic: Statistic::Smooth {
                    phi: SmoothSpec::Gaussian { lambda: 1.0 },
                    m: 0.5,
                },
                ..c.clone()
            },
            "statistic.M",
        );
        assert!(serde_json::from_str::<EnsembleConfig>(&json.replace("\"seed\"", "\"sead\"")).is_err());
        assert!(serde_json::from_str::<EnsembleConfig>(&json.replace("0.7853981633974483", "-1")).is_err());
    }

    #[test]
    fn theorem_degree_rule() {
        assert_eq!(
            theorem_degree(1229, 1e4),
            (1229f64.sqrt() * (1e4f64).ln().ln()).floor() as usize
        );
        assert_eq!(theorem_degree(10, 2.0), 0);
    }
}
