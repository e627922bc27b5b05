//! `satolab primes`: prime ideal enumeration and norm sums.

use clap::Args as ClapArgs;
use serde::{Deserialize, Serialize};

use satolab::number_field::{
    enumerate_prime_ideals, higher_power_sum, mertens_sum, split_counts, FieldSpec, IdealRef, LevelSpec, SplitCounts,
};

use crate::error::{CliError, CliResult};
use crate::output::Common;

#[derive(Debug, ClapArgs)]
pub struct Args {
    #[command(flatten)]
    pub common: Common,
    /// `q` for the rationals or `sqrtD` for Q(√D).
    #[arg(long)]
    pub field: Option<String>,
    /// Norm bound.
    #[arg(long)]
    pub x: Option<f64>,
    /// Level divisors as `P` or `P:LABEL`.
    #[arg(long, num_args = 1..)]
    pub exclude: Option<Vec<String>>,
}

#[derive(Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Params {
    pub field: Option<FieldSpec>,
    pub x: Option<f64>,
    pub level: Option<LevelSpec>,
}

#[derive(Debug, Serialize)]
struct Summary {
    field: String,
    x: f64,
    #[serde(rename = "pi_L")]
    pi_l: usize,
    split_counts: SplitCounts,
    mertens: Option<f64>,
    mertens_minus_loglog: Option<f64>,
    higher_power_sum: Option<f64>,
}

pub fn parse_field(s: &str) -> CliResult<FieldSpec> {
    FieldSpec::parse(s).map_err(|e| CliError::config("field", e.to_string()))
}

pub fn parse_level(specs: &[String]) -> CliResult<LevelSpec> {
    let refs = specs
        .iter()
        .map(|s| {
            let (p, label) = s.split_once(':').unwrap_or((s, "0"));
            match (p.trim().parse::<u64>(), label.trim().parse::<u8>()) {
                (Ok(p), Ok(label)) => Ok(IdealRef { p, label }),
                _ => Err(CliError::config("exclude", format!("{s:?} is not P or P:LABEL"))),
            }
        })
        .collect::<CliResult<Vec<_>>>()?;
    Ok(LevelSpec::new(refs)?)
}

pub fn run(args: Args) -> CliResult<String> {
    let file: Params = args.common.load()?;
    let params = Params {
        field: args.field.as_deref().map(parse_field).transpose()?.or(file.field),
        x: args.x.or(file.x),
        level: args
            .exclude
            .as_deref()
            .map(parse_level)
            .transpose()?
            .or(file.level)
            .or(Some(LevelSpec::trivial())),
    };
    let field = params.field.ok_or_else(|| CliError::missing("field"))?;
    let x = params.x.ok_or_else(|| CliError::missing("x"))?;
    let level = params.level.clone().unwrap_or_default();
    level.validate(&field)?;
    let ideals = enumerate_prime_ideals(&field, x, &level)?;
    let counts = split_counts(&field, x)?;
    let (mertens, higher) = if x >= 16.0 {
        (Some(mertens_sum(&field, x)?), Some(higher_power_sum(&field, x)?))
    } else {
        (None, None)
    };
    let summary = Summary {
        field: field.to_string(),
        x,
        pi_l: ideals.len(),
        split_counts: counts,
        mertens,
        mertens_minus_loglog: mertens.map(|m| m - x.ln().ln()),
        higher_power_sum: higher,
    };
    args.common.write_json("primes.resolved.json", &params)?;
    let mut w = args.common.csv("primes.csv")?;
    w.write_record(["p", "f", "norm", "type", "label"])?;
    for i in &ideals {
        w.write_record([
            i.p.to_string(),
            i.f.to_string(),
            i.norm.to_string(),
            i.split_type.as_str().to_string(),
            i.label.to_string(),
        ])?;
    }
    w.flush()?;
    args.common.write_json("primes.json", &summary)?;
    Ok(format!(
        "primes: {field} x={x} pi_L={} mertens={}",
        ideals.len(),
        mertens.map_or("n/a".to_string(), |m| format!("{m:.10}"))
    ))
}
