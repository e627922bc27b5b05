//! Prime ideals of `Q` and of real quadratic fields `Q(√D)`.
//!
//! Splitting of a rational prime `p` in `Q(√D)` is read off the Kronecker
//! symbol `(disc / p)`: `+1` split, `-1` inert, `0` ramified.

use std::collections::{BTreeMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::quadrature::NeumaierSum;

/// Largest `x` the sieve will enumerate to.
pub const SIEVE_CAPACITY: u64 = 100_000_000;

const SEGMENT: u64 = 1 << 18;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
enum RawField {
    Rationals,
    RealQuadratic {
        #[serde(rename = "D")]
        d: u64,
    },
    Degree {
        degree: u32,
    },
}

/// `Q` or a real quadratic field `Q(√D)` with `D > 1` squarefree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawField", into = "RawField")]
pub struct FieldSpec {
    d: Option<u64>,
}

impl TryFrom<RawField> for FieldSpec {
    type Error = Error;

    fn try_from(raw: RawField) -> Result<Self> {
        match raw {
            RawField::Rationals => Ok(Self::rationals()),
            RawField::RealQuadratic { d } => Self::real_quadratic(d),
            RawField::Degree { degree } => Self::of_degree(degree),
        }
    }
}

impl From<FieldSpec> for RawField {
    fn from(f: FieldSpec) -> Self {
        match f.d {
            None => RawField::Rationals,
            Some(d) => RawField::RealQuadratic { d },
        }
    }
}

impl FieldSpec {
    pub fn rationals() -> Self {
        Self { d: None }
    }

    pub fn real_quadratic(d: u64) -> Result<Self> {
        if d < 2 {
            return Err(invalid("D", format!("{d} must exceed 1")));
        }
        if !is_squarefree(d) {
            return Err(invalid("D", format!("{d} is not squarefree")));
        }
        if d > SIEVE_CAPACITY {
            return Err(invalid("D", format!("{d} exceeds {SIEVE_CAPACITY}")));
        }
        Ok(Self { d: Some(d) })
    }

    /// Only degrees 1 and 2 are implemented; higher degrees need a general
    /// Dedekind factorization in `split_prime`.
    pub fn of_degree(degree: u32) -> Result<Self> {
        match degree {
            1 => Ok(Self::rationals()),
            2 => Self::real_quadratic(5),
            _ => Err(Error::UnsupportedDegree(degree)),
        }
    }

    /// Parses `q`, `rationals`, or `sqrtD` (e.g. `sqrt5`).
    pub fn parse(s: &str) -> Result<Self> {
        let t = s.trim().to_ascii_lowercase();
        if t == "q" || t == "rationals" {
            return Ok(Self::rationals());
        }
        let digits = t
            .strip_prefix("sqrt")
            .or_else(|| t.strip_prefix("q(sqrt").and_then(|r| r.strip_suffix(')')));
        match digits.and_then(|d| d.parse::<u64>().ok()) {
            Some(d) => Self::real_quadratic(d),
            None => Err(invalid("field", format!("unrecognized field {s:?}; use q or sqrtD"))),
        }
    }

    pub fn degree(&self) -> u32 {
        if self.d.is_some() {
            2
        } else {
            1
        }
    }

    pub fn radicand(&self) -> Option<u64> {
        self.d
    }

    /// Field discriminant; 1 for the rationals.
    pub fn discriminant(&self) -> u64 {
        match self.d {
            None => 1,
            Some(d) if d % 4 == 1 => d,
            Some(d) => 4 * d,
        }
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.d {
            None => write!(f, "Q"),
            Some(d) => write!(f, "Q(sqrt{d})"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SplitType {
    Rational,
    Split,
    Inert,
    Ramified,
}

impl SplitType {
    pub fn as_str(&self) -> &'static str {
        match self {
            SplitType::Rational => "rational",
            SplitType::Split => "split",
            SplitType::Inert => "inert",
            SplitType::Ramified => "ramified",
        }
    }
}

/// A prime ideal, identified by the rational prime below it and a label
/// (0 or 1) separating the two conjugates of a split prime.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PrimeIdeal {
    pub p: u64,
    pub f: u32,
    pub norm: u64,
    pub split_type: SplitType,
    pub label: u8,
}

impl PrimeIdeal {
    pub fn key(&self) -> IdealRef {
        IdealRef {
            p: self.p,
            label: self.label,
        }
    }

    fn sort_key(&self) -> (u64, u64, u8) {
        (self.norm, self.p, self.label)
    }
}

/// Names a prime ideal without its arithmetic data.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct IdealRef {
    pub p: u64,
    #[serde(default)]
    pub label: u8,
}

/// Prime ideals dividing the level; all entries distinct, so the level is squarefree.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawLevel", into = "RawLevel")]
pub struct LevelSpec {
    excluded: Vec<IdealRef>,
}

#[derive(Serialize, Deserialize)]
struct RawLevel {
    #[serde(default)]
    excluded: Vec<IdealRef>,
}

impl TryFrom<RawLevel> for LevelSpec {
    type Error = Error;

    fn try_from(raw: RawLevel) -> Result<Self> {
        Self::new(raw.excluded)
    }
}

impl From<LevelSpec> for RawLevel {
    fn from(l: LevelSpec) -> Self {
        RawLevel { excluded: l.excluded }
    }
}

impl LevelSpec {
    pub fn new(excluded: Vec<IdealRef>) -> Result<Self> {
        let mut seen = HashSet::new();
        for r in &excluded {
            if !seen.insert(*r) {
                return Err(Error::RepeatedIdeal(r.p));
            }
        }
        Ok(Self { excluded })
    }

    pub fn trivial() -> Self {
        Self::default()
    }

    pub fn excluded(&self) -> &[IdealRef] {
        &self.excluded
    }

    pub fn is_squarefree(&self) -> bool {
        true
    }

    /// Checks that every excluded entry names a prime ideal of `field`.
    pub fn validate(&self, field: &FieldSpec) -> Result<()> {
        for r in &self.excluded {
            let ideals =
                split_prime(field, r.p).map_err(|_| invalid("level.excluded", format!("{} is not prime", r.p)))?;
            if !ideals.iter().any(|i| i.label == r.label) {
                return Err(invalid(
                    "level.excluded",
                    format!("no prime ideal with label {} above {} in {field}", r.label, r.p),
                ));
            }
        }
        Ok(())
    }

    pub fn excludes(&self, ideal: &PrimeIdeal) -> bool {
        self.excluded.contains(&ideal.key())
    }
}

fn is_squarefree(n: u64) -> bool {
    let mut m = n;
    let mut p = 2u64;
    while p * p <= m {
        if m.is_multiple_of(p) {
            m /= p;
            if m.is_multiple_of(p) {
                return false;
            }
        }
        p += 1;
    }
    true
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    r
}

/// Deterministic Miller-Rabin; the first twelve prime bases suffice below 2^64.
pub fn is_prime(n: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &b in &BASES {
        if n.is_multiple_of(b) {
            return n == b;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Kronecker symbol `(a / p)` for a prime `p`.
pub fn kronecker(a: u64, p: u64) -> i32 {
    if p == 2 {
        return match a % 8 {
            1 | 7 => 1,
            3 | 5 => -1,
            _ => 0,
        };
    }
    let r = a % p;
    if r == 0 {
        return 0;
    }
    if pow_mod(r, (p - 1) / 2, p) == 1 {
        1
    } else {
        -1
    }
}

/// Prime ideals above the rational prime `p`, ordered by label.
pub fn split_prime(field: &FieldSpec, p: u64) -> Result<Vec<PrimeIdeal>> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let ideal = |f: u32, split_type, label| PrimeIdeal {
        p,
        f,
        norm: if f == 1 { p } else { p * p },
        split_type,
        label,
    };
    Ok(match field.d {
        None => vec![ideal(1, SplitType::Rational, 0)],
        Some(_) => match kronecker(field.discriminant(), p) {
            1 => vec![ideal(1, SplitType::Split, 0), ideal(1, SplitType::Split, 1)],
            -1 => vec![ideal(2, SplitType::Inert, 0)],
            _ => vec![ideal(1, SplitType::Ramified, 0)],
        },
    })
}

fn isqrt(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

/// All primes `≤ n` by a segmented sieve of Eratosthenes.
pub fn primes_up_to(n: u64) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    let root = isqrt(n);
    let mut small = vec![true; root as usize + 1];
    let mut base = Vec::new();
    for i in 2..=root as usize {
        if small[i] {
            base.push(i as u64);
            let mut j = i * i;
            while j <= root as usize {
                small[j] = false;
                j += i;
            }
        }
    }
    let mut out = Vec::with_capacity((1.2 * n as f64 / (n as f64).ln()) as usize + 8);
    let mut seg = vec![true; SEGMENT as usize];
    let mut lo = 2u64;
    while lo <= n {
        let hi = (lo + SEGMENT - 1).min(n);
        let len = (hi - lo + 1) as usize;
        seg[..len].fill(true);
        for &p in &base {
            if p * p > hi {
                break;
            }
            let start = (p * p).max(lo.div_ceil(p) * p);
            let mut j = start;
            while j <= hi {
                seg[(j - lo) as usize] = false;
                j += p;
            }
        }
        out.extend((0..len).filter(|&k| seg[k]).map(|k| lo + k as u64));
        lo = hi + 1;
    }
    out
}

fn norm_bound(x: f64) -> Result<u64> {
    if !x.is_finite() {
        return Err(Error::NonFinite("x"));
    }
    if x < 2.0 {
        return Err(invalid("x", format!("{x} is below 2")));
    }
    if x > SIEVE_CAPACITY as f64 {
        return Err(invalid("x", format!("{x} exceeds sieve capacity {SIEVE_CAPACITY}")));
    }
    Ok(x.floor() as u64)
}

/// Prime ideals with norm `≤ x` not dividing the level, sorted by `(norm, p, label)`.
pub fn enumerate_prime_ideals(field: &FieldSpec, x: f64, level: &LevelSpec) -> Result<Vec<PrimeIdeal>> {
    let n = norm_bound(x)?;
    let root = isqrt(n);
    let mut out = Vec::new();
    for p in primes_up_to(n) {
        for ideal in split_prime(field, p)? {
            if ideal.f == 2 && p > root {
                continue;
            }
            if !level.excludes(&ideal) {
                out.push(ideal);
            }
        }
    }
    out.sort_by_key(PrimeIdeal::sort_key);
    Ok(out)
}

/// Counts of rational primes by splitting behaviour.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct SplitCounts {
    /// Split primes `≤ x` (rational primes for `Q`).
    pub split: u64,
    /// Ramified primes `≤ x`.
    pub ramified: u64,
    /// Inert primes `≤ √x`.
    pub inert: u64,
}

impl SplitCounts {
    /// Number of prime ideals of norm `≤ x`.
    pub fn ideal_count(&self, degree: u32) -> u64 {
        if degree == 1 {
            self.split
        } else {
            2 * self.split + self.ramified + self.inert
        }
    }
}

pub fn split_counts(field: &FieldSpec, x: f64) -> Result<SplitCounts> {
    let n = norm_bound(x)?;
    let root = isqrt(n);
    let mut c = SplitCounts::default();
    for p in primes_up_to(n) {
        match split_prime(field, p)?[0].split_type {
            SplitType::Rational | SplitType::Split => c.split += 1,
            SplitType::Ramified => c.ramified += 1,
            SplitType::Inert if p <= root => c.inert += 1,
            SplitType::Inert => {}
        }
    }
    Ok(c)
}

fn check_sum_range(x: f64) -> Result<()> {
    if x < 16.0 {
        return Err(invalid("x", format!("{x} is below 16")));
    }
    Ok(())
}

/// `Σ_{N(p) ≤ x} 1/N(p)`.
pub fn mertens_sum(field: &FieldSpec, x: f64) -> Result<f64> {
    check_sum_range(x)?;
    let ideals = enumerate_prime_ideals(field, x, &LevelSpec::trivial())?;
    Ok(ideals
        .iter()
        .map(|i| 1.0 / i.norm as f64)
        .collect::<NeumaierSum>()
        .total())
}

/// `Σ_{r≥2} Σ_{N(p) ≤ x} N(p)^{-r} = Σ_{N(p) ≤ x} 1/(N(p)(N(p) - 1))`.
pub fn higher_power_sum(field: &FieldSpec, x: f64) -> Result<f64> {
    check_sum_range(x)?;
    let ideals = enumerate_prime_ideals(field, x, &LevelSpec::trivial())?;
    Ok(ideals
        .iter()
        .map(|i| {
            let n = i.norm as f64;
            1.0 / (n * (n - 1.0))
        })
        .collect::<NeumaierSum>()
        .total())
}

/// Number of ideals of each norm in an enumeration.
pub fn norm_multiplicities(ideals: &[PrimeIdeal]) -> BTreeMap<u64, usize> {
    let mut m = BTreeMap::new();
    for i in ideals {
        *m.entry(i.norm).or_insert(0) += 1;
    }
    m
}
