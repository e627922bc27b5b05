//! Deterministic moment pipeline for the centred extremal statistic
//! `Z_M(θ) = Σ_{m=1}^M F̂(m) U_m(cos θ)` summed over prime ideals.
//!
//! The `n`-th moment's main term is
//!
//! ```text
//! π_L^{-n/2} Σ_λ w(λ) Σ_{distinct p_1..p_u} Π_i ∫ Z^{r_i} dμ_{N(p_i)}
//! ```
//!
//! over partitions `λ = (r_1, …, r_u)` of `n`, where `∫ Z^r dμ_q` is exact
//! through the Chebyshev coefficients of `Z^r`.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::chebyshev::{series_product, ChebyshevSeries};
use crate::ensemble::theorem_degree;
use crate::error::{invalid, Error, Result};
use crate::number_field::{enumerate_prime_ideals, FieldSpec, LevelSpec, PrimeIdeal, SIEVE_CAPACITY};
use crate::quadrature::NeumaierSum;
use crate::selberg::{to_chebyshev, variance_sum, ArcInterval, ExtremalPair, Side};
use crate::stats::gaussian_moment;

/// Largest `r · M` for which `Z^r` is expanded.
pub const POWER_DEGREE_LIMIT: usize = 10_000;

/// Largest partition size enumerated.
pub const PARTITION_LIMIT: usize = 12;

/// Largest moment order for the main term (Bell(10) set partitions per term).
pub const MAIN_TERM_LIMIT: usize = 10;

/// Budget below which the trace-formula error is considered negligible.
pub const BUDGET_THRESHOLD: f64 = 1e-3;

/// `Z_M = F_M - F̂_M(0)` in the `U` basis; the `U_0` coefficient is exactly 0.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZSeries {
    series: ChebyshevSeries,
    side: Side,
}

impl ZSeries {
    pub fn from_pair(pair: &ExtremalPair, side: Side) -> Self {
        Self {
            series: pair.series(side).without_constant(),
            side,
        }
    }

    pub fn new(series: ChebyshevSeries, side: Side) -> Result<Self> {
        if series.coefficient(0) != 0.0 {
            return Err(invalid("z", "U_0 coefficient must be zero"));
        }
        Ok(Self { series, side })
    }

    pub fn series(&self) -> &ChebyshevSeries {
        &self.series
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn degree(&self) -> usize {
        self.series.degree()
    }
}

/// Chebyshev coefficients of `Z^r`, by repeated exact products.
pub fn z_power_coeffs(z: &ZSeries, r: usize) -> Result<ChebyshevSeries> {
    if r == 0 {
        return Err(invalid("r", "must be at least 1"));
    }
    if r.saturating_mul(z.degree()) > POWER_DEGREE_LIMIT {
        return Err(Error::Guard(format!(
            "r·M = {}·{} exceeds {POWER_DEGREE_LIMIT}",
            r,
            z.degree()
        )));
    }
    let mut acc = z.series.clone();
    for _ in 1..r {
        acc = series_product(&acc, &z.series);
    }
    Ok(acc)
}

/// `∫ f dμ_q = Σ_{m even} c_m q^{-m/2}` for `f = Σ c_m U_m`.
pub fn local_integral(f: &ChebyshevSeries, q: f64) -> f64 {
    let coeffs = f.coeffs();
    let mut tail: f64 = coeffs.iter().step_by(2).map(|c| c.abs()).sum();
    let inv_q = 1.0 / q;
    let mut w = 1.0;
    let mut acc = NeumaierSum::default();
    for c in coeffs.iter().step_by(2) {
        if w * tail < 1e-17 * acc.total().abs().max(1e-300) {
            break;
        }
        acc.add(c * w);
        tail -= c.abs();
        w *= inv_q;
    }
    acc.total()
}

/// `∫ Z^r dμ_q`.
pub fn integral_z_power_local(z: &ZSeries, r: usize, q: f64) -> Result<f64> {
    if !(q.is_finite() && q >= 2.0) {
        return Err(invalid("q", format!("{q} must be at least 2")));
    }
    Ok(local_integral(&z_power_coeffs(z, r)?, q))
}

/// Labels for the three partition shapes in the moment expansion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PartitionCase {
    /// Every part equals 2.
    Pairing,
    /// At least one part equals 1.
    HasSingleton,
    /// All parts at least 2, some part at least 3.
    HigherPart,
}

/// A partition of `n` with parts in nonincreasing order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Partition {
    pub parts: Vec<usize>,
    /// `n! / (Π r_i! · Π mult_j!)`: the coefficient of the ordered
    /// distinct-site sum `Σ_{p_1..p_u distinct} Π z_{p_i}^{r_i}` in `(Σ z_p)^n`.
    pub weight: u64,
    pub case: PartitionCase,
}

impl Partition {
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }
}

fn factorial(n: usize) -> u64 {
    (1..=n as u64).product()
}

fn classify(parts: &[usize]) -> PartitionCase {
    if parts.contains(&1) {
        PartitionCase::HasSingleton
    } else if parts.iter().all(|&r| r == 2) {
        PartitionCase::Pairing
    } else {
        PartitionCase::HigherPart
    }
}

fn partition_weight(n: usize, parts: &[usize]) -> u64 {
    let mut denom: u64 = parts.iter().map(|&r| factorial(r)).product();
    let mut i = 0;
    while i < parts.len() {
        let j = parts[i..].iter().take_while(|&&r| r == parts[i]).count();
        denom *= factorial(j);
        i += j;
    }
    factorial(n) / denom
}

/// All partitions of `n`, in reverse lexicographic order of parts.
pub fn partitions_of(n: usize) -> Result<Vec<Partition>> {
    if n == 0 || n > PARTITION_LIMIT {
        return Err(invalid("n", format!("{n} must lie in 1..={PARTITION_LIMIT}")));
    }
    let mut out = Vec::new();
    let mut stack = Vec::new();
    fn rec(n: usize, remaining: usize, max: usize, stack: &mut Vec<usize>, out: &mut Vec<Partition>) {
        if remaining == 0 {
            out.push(Partition {
                parts: stack.clone(),
                weight: partition_weight(n, stack),
                case: classify(stack),
            });
            return;
        }
        for r in (1..=max.min(remaining)).rev() {
            stack.push(r);
            rec(n, remaining - r, r, stack, out);
            stack.pop();
        }
    }
    rec(n, n, n, &mut stack, &mut out);
    Ok(out)
}

/// Visits every set partition of `{0, …, u-1}` as a block label per element.
fn for_each_set_partition<F: FnMut(&[usize], usize)>(u: usize, mut f: F) {
    if u == 0 {
        f(&[], 0);
        return;
    }
    let mut labels = vec![0usize; u];
    let mut maxes = vec![0usize; u];
    loop {
        let blocks = maxes[u - 1] + 1;
        f(&labels, blocks);
        // next restricted growth string
        let mut i = u - 1;
        loop {
            if i == 0 {
                return;
            }
            let bound = maxes[i - 1] + 1;
            if labels[i] < bound {
                labels[i] += 1;
                maxes[i] = maxes[i - 1].max(labels[i]);
                for j in i + 1..u {
                    labels[j] = 0;
                    maxes[j] = maxes[i];
                }
                break;
            }
            i -= 1;
        }
    }
}

/// `Σ_{p_1..p_u distinct} Π_i v_{r_i}(p_i)` by Möbius inversion over set
/// partitions: `Σ_σ Π_B (-1)^{|B|-1}(|B|-1)! · P_B`, where
/// `P_B = Σ_p Π_{i∈B} v_{r_i}(p)` is supplied by `power_sum` for the sorted
/// exponents of a block.
pub fn distinct_tuple_sum<F: FnMut(&[usize]) -> f64>(exponents: &[usize], mut power_sum: F) -> f64 {
    let u = exponents.len();
    let mut cache: HashMap<Vec<usize>, f64> = HashMap::new();
    let mut total = NeumaierSum::default();
    for_each_set_partition(u, |labels, blocks| {
        let mut term = 1.0;
        for b in 0..blocks {
            let mut block: Vec<usize> = (0..u).filter(|&i| labels[i] == b).map(|i| exponents[i]).collect();
            block.sort_unstable();
            let size = block.len();
            let p = *cache.entry(block).or_insert_with_key(|k| power_sum(k));
            let sign = if size % 2 == 1 { 1.0 } else { -1.0 };
            term *= sign * factorial(size - 1) as f64 * p;
        }
        total.add(term);
    });
    total.total()
}

/// Main-term contributions split by partition case.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct CaseBreakdown {
    pub pairing: f64,
    pub has_singleton: f64,
    pub higher_part: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MainTerm {
    pub n: usize,
    /// Normalized by `π_L^{n/2}`.
    pub main_term: f64,
    /// `gaussian_moment(n) · V^{n/2}` with `V = Σ_{m=1}^M F̂(m)²`.
    pub gaussian_target: f64,
    /// `main_term / gaussian_target`; absent for odd `n`.
    pub ratio: Option<f64>,
    pub variance_sum: f64,
    pub case_breakdown: CaseBreakdown,
    #[serde(rename = "M_used")]
    pub m_used: usize,
    #[serde(rename = "pi_L")]
    pub pi_l: u64,
}

/// Prime ideals of a field below `x` grouped by norm, with one extremal pair.
#[derive(Debug, Clone)]
pub struct MomentEngine {
    norms: Vec<(f64, f64)>,
    pi_l: u64,
    pair: ExtremalPair,
    z: ZSeries,
}

impl MomentEngine {
    /// With `degree = None` the degree is `⌊√π_L · log log x⌋`.
    pub fn new(
        field: &FieldSpec,
        x: f64,
        level: &LevelSpec,
        interval: &ArcInterval,
        side: Side,
        degree: Option<usize>,
    ) -> Result<Self> {
        let ideals = enumerate_prime_ideals(field, x, level)?;
        let m = match degree {
            Some(m) => m,
            None => theorem_degree(ideals.len() as u64, x),
        };
        let pair = to_chebyshev(interval, m)?;
        Ok(Self::from_parts(&ideals, pair, side))
    }

    pub fn from_parts(ideals: &[PrimeIdeal], pair: ExtremalPair, side: Side) -> Self {
        let mut norms: Vec<(f64, f64)> = Vec::new();
        let mut sorted: Vec<u64> = ideals.iter().map(|p| p.norm).collect();
        sorted.sort_unstable();
        for n in sorted {
            match norms.last_mut() {
                Some((q, c)) if *q == n as f64 => *c += 1.0,
                _ => norms.push((n as f64, 1.0)),
            }
        }
        let z = ZSeries::from_pair(&pair, side);
        Self {
            norms,
            pi_l: ideals.len() as u64,
            pair,
            z,
        }
    }

    pub fn degree(&self) -> usize {
        self.pair.degree
    }

    pub fn pi_l(&self) -> u64 {
        self.pi_l
    }

    pub fn z(&self) -> &ZSeries {
        &self.z
    }

    pub fn variance_sum(&self) -> f64 {
        let (plus, minus) = variance_sum(&self.pair);
        match self.z.side {
            Side::Plus => plus,
            Side::Minus => minus,
        }
    }

    /// `∫ Z^r dμ_q` for every distinct norm, `r = 1..=n`.
    fn local_table(&self, n: usize) -> Result<Vec<Vec<f64>>> {
        let mut table = Vec::with_capacity(n);
        let mut power = self.z.series.clone();
        for r in 1..=n {
            if r > 1 {
                power = series_product(&power, &self.z.series);
            }
            if power.degree() > POWER_DEGREE_LIMIT {
                return Err(Error::Guard(format!(
                    "r·M = {} exceeds {POWER_DEGREE_LIMIT}",
                    power.degree()
                )));
            }
            table.push(self.norms.iter().map(|&(q, _)| local_integral(&power, q)).collect());
        }
        Ok(table)
    }

    pub fn main_term(&self, n: usize) -> Result<MainTerm> {
        if n == 0 || n > MAIN_TERM_LIMIT {
            return Err(invalid("n", format!("{n} must lie in 1..={MAIN_TERM_LIMIT}")));
        }
        let table = self.local_table(n)?;
        let power_sum = |block: &[usize]| -> f64 {
            self.norms
                .iter()
                .enumerate()
                .map(|(k, &(_, mult))| mult * block.iter().map(|&r| table[r - 1][k]).product::<f64>())
                .collect::<NeumaierSum>()
                .total()
        };
        let scale = (self.pi_l as f64).powf(-(n as f64) / 2.0);
        let mut cases = CaseBreakdown::default();
        for part in partitions_of(n)? {
            let v = part.weight as f64 * distinct_tuple_sum(&part.parts, power_sum) * scale;
            match part.case {
                PartitionCase::Pairing => cases.pairing += v,
                PartitionCase::HasSingleton => cases.has_singleton += v,
                PartitionCase::HigherPart => cases.higher_part += v,
            }
        }
        let main_term = cases.pairing + cases.has_singleton + cases.higher_part;
        let v = self.variance_sum();
        let gaussian_target = gaussian_moment(n as u32) * v.powf(n as f64 / 2.0);
        let ratio = n.is_multiple_of(2).then(|| main_term / gaussian_target);
        Ok(MainTerm {
            n,
            main_term,
            gaussian_target,
            ratio,
            variance_sum: v,
            case_breakdown: cases,
            m_used: self.degree(),
            pi_l: self.pi_l,
        })
    }
}

/// Main term of the `n`-th moment over all prime ideals of `field` below `x`.
pub fn moment_main_term(n: usize, field: &FieldSpec, x: f64, pair: &ExtremalPair, side: Side) -> Result<MainTerm> {
    let ideals = enumerate_prime_ideals(field, x, &LevelSpec::trivial())?;
    MomentEngine::from_parts(&ideals, pair.clone(), side).main_term(n)
}

/// Weight vector `(k_1, …, k_d)`, stored as natural logarithms so that
/// astronomically large weights can be described.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightVector {
    log_k: Vec<f64>,
}

impl WeightVector {
    /// Explicit weights: even integers at least 4.
    pub fn new(k: &[u64]) -> Result<Self> {
        if k.is_empty() {
            return Err(invalid("k", "need at least one weight"));
        }
        for &ki in k {
            if ki < 4 || ki % 2 == 1 {
                return Err(invalid("k", format!("{ki} is not an even integer ≥ 4")));
            }
        }
        Ok(Self {
            log_k: k.iter().map(|&ki| (ki as f64).ln()).collect(),
        })
    }

    /// Weights given by `log k_i`; parity cannot be checked in this form.
    pub fn from_logs(log_k: Vec<f64>) -> Result<Self> {
        if log_k.is_empty() {
            return Err(invalid("k", "need at least one weight"));
        }
        if log_k.iter().any(|l| !l.is_finite() || *l < 4f64.ln()) {
            return Err(invalid("k", "each log k_i must be finite and at least log 4"));
        }
        Ok(Self { log_k })
    }

    pub fn log_k(&self) -> &[f64] {
        &self.log_k
    }

    pub fn len(&self) -> usize {
        self.log_k.len()
    }

    pub fn is_empty(&self) -> bool {
        self.log_k.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GrowthReport {
    pub x: f64,
    pub n: usize,
    #[serde(rename = "pi_L")]
    pub pi_l: f64,
    /// True when `π_L(x)` came from `li(x)` rather than enumeration.
    pub pi_l_estimated: bool,
    /// `⌊2d Σ_{i≤d} log k_i / (3 log x)⌋`.
    pub m_first_moment_d: f64,
    /// `⌊2d Σ_{i≤d-1} log k_i / (3 log x)⌋`.
    pub m_first_moment_d_minus_1: f64,
    /// `⌊√π_L · log log x⌋`.
    pub m_theorem: f64,
    /// `Σ log k_i / (√x log x)`; the moment theorem needs this to diverge.
    pub growth_ratio: f64,
    /// `log` of `x^{3M/2} π_L^{n/2} M^{2n} / Π k_i` at `M = m_theorem`.
    pub log_budget: f64,
    pub budget: f64,
    pub level_norm: f64,
    pub budget_ok: bool,
}

/// `li(x)` by its asymptotic series; adequate where the sieve cannot reach.
fn li_estimate(x: f64) -> f64 {
    let l = x.ln();
    x / l * (1.0 + 1.0 / l + 2.0 / (l * l) + 6.0 / (l * l * l))
}

/// Degree choices and the trace-formula error budget for weight `k` at `x`.
pub fn growth_bookkeeping(
    field: &FieldSpec,
    x: f64,
    k: &WeightVector,
    level: &LevelSpec,
    n: usize,
) -> Result<GrowthReport> {
    if !(x.is_finite() && x > std::f64::consts::E) {
        return Err(invalid("x", format!("{x} must exceed e")));
    }
    let d = field.degree() as usize;
    if k.len() != d {
        return Err(invalid("k", format!("{} weights for a degree-{d} field", k.len())));
    }
    level.validate(field)?;
    let (pi_l, pi_l_estimated) = if x <= SIEVE_CAPACITY as f64 {
        (enumerate_prime_ideals(field, x, level)?.len() as f64, false)
    } else {
        (li_estimate(x), true)
    };
    let lx = x.ln();
    let sum_all: f64 = k.log_k.iter().sum();
    let sum_head: f64 = k.log_k[..d - 1].iter().sum();
    let m_theorem = (pi_l.sqrt() * lx.ln()).floor();
    let log_budget =
        1.5 * m_theorem * lx - sum_all + 0.5 * n as f64 * pi_l.ln() + 2.0 * n as f64 * m_theorem.max(1.0).ln();
    let level_norm = level
        .excluded()
        .iter()
        .map(|r| {
            crate::number_field::split_prime(field, r.p)
                .ok()
                .and_then(|v| v.into_iter().find(|i| i.label == r.label))
                .map_or(1.0, |i| i.norm as f64)
        })
        .product();
    Ok(GrowthReport {
        x,
        n,
        pi_l,
        pi_l_estimated,
        m_first_moment_d: (2.0 * d as f64 * sum_all / (3.0 * lx)).floor(),
        m_first_moment_d_minus_1: (2.0 * d as f64 * sum_head / (3.0 * lx)).floor(),
        m_theorem,
        growth_ratio: sum_all / (x.sqrt() * lx),
        log_budget,
        budget: log_budget.exp(),
        level_norm,
        budget_ok: log_budget < BUDGET_THRESHOLD.ln(),
    })
}
