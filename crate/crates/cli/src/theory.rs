//! `satolab theory`: deterministic main terms of the moments.

use clap::{Args as ClapArgs, ValueEnum};
use serde::{Deserialize, Serialize};

use satolab::moments_engine::{
    growth_bookkeeping, GrowthReport, MainTerm, MomentEngine, WeightVector, POWER_DEGREE_LIMIT,
};
use satolab::number_field::{FieldSpec, LevelSpec};
use satolab::selberg::{ArcInterval, Side};

use crate::error::{CliError, CliResult};
use crate::output::{interval_from_flag, Common};
use crate::primes::{parse_field, parse_level};

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum SideArg {
    Plus,
    Minus,
}

#[derive(Debug, ClapArgs)]
pub struct Args {
    #[command(flatten)]
    pub common: Common,
    /// Moment order.
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub x: Option<f64>,
    #[arg(long, num_args = 2, value_names = ["A", "B"], allow_negative_numbers = true)]
    pub interval: Option<Vec<f64>>,
    #[arg(long)]
    pub degrees: bool,
    #[arg(long)]
    pub field: Option<String>,
    #[arg(long, num_args = 1..)]
    pub exclude: Option<Vec<String>>,
    /// Majorant (plus) or minorant (minus).
    #[arg(long, value_enum)]
    pub side: Option<SideArg>,
    /// Degree override; default ⌊√π_L log log x⌋.
    #[arg(long = "M")]
    pub m: Option<usize>,
    /// Weight vector (even integers ≥ 4) for the growth report.
    #[arg(long, num_args = 1.., conflicts_with = "log_k")]
    pub k: Option<Vec<u64>>,
    /// Weight vector given as natural logarithms.
    #[arg(long, num_args = 1..)]
    pub log_k: Option<Vec<f64>>,
}

#[derive(Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Params {
    pub n: Option<usize>,
    pub x: Option<f64>,
    pub interval: Option<[f64; 2]>,
    pub field: Option<FieldSpec>,
    pub level: Option<LevelSpec>,
    pub side: Option<Side>,
    #[serde(rename = "M")]
    pub m: Option<usize>,
    pub log_k: Option<Vec<f64>>,
}

#[derive(Debug, Serialize)]
struct Report {
    #[serde(flatten)]
    main: MainTerm,
    side: Side,
    growth_report: Option<GrowthReport>,
}

pub fn run(args: Args) -> CliResult<String> {
    let file: Params = args.common.load()?;
    let log_k = match (&args.k, &args.log_k) {
        (Some(k), _) => Some(WeightVector::new(k)?.log_k().to_vec()),
        (None, Some(l)) => Some(l.clone()),
        (None, None) => file.log_k,
    };
    let params = Params {
        n: args.n.or(file.n),
        x: args.x.or(file.x),
        interval: interval_from_flag(&args.interval, args.degrees).or(file.interval),
        field: args.field.as_deref().map(parse_field).transpose()?.or(file.field),
        level: args
            .exclude
            .as_deref()
            .map(parse_level)
            .transpose()?
            .or(file.level)
            .or(Some(LevelSpec::trivial())),
        side: args
            .side
            .map(|s| match s {
                SideArg::Plus => Side::Plus,
                SideArg::Minus => Side::Minus,
            })
            .or(file.side)
            .or(Some(Side::Plus)),
        m: args.m.or(file.m),
        log_k,
    };
    let n = params.n.ok_or_else(|| CliError::missing("n"))?;
    let x = params.x.ok_or_else(|| CliError::missing("x"))?;
    let [a, b] = params.interval.ok_or_else(|| CliError::missing("interval"))?;
    let field = params.field.ok_or_else(|| CliError::missing("field"))?;
    let level = params.level.clone().unwrap_or_default();
    let side = params.side.unwrap_or(Side::Plus);
    if !(x.is_finite() && x > std::f64::consts::E) {
        return Err(CliError::config("x", format!("{x} must exceed e")));
    }
    level.validate(&field)?;
    let interval = ArcInterval::new(a, b)?;
    let engine = MomentEngine::new(&field, x, &level, &interval, side, params.m)?;
    if n.saturating_mul(engine.degree()) > POWER_DEGREE_LIMIT {
        return Err(CliError::config(
            "n",
            format!("n·M = {n}·{} exceeds {POWER_DEGREE_LIMIT}", engine.degree()),
        ));
    }
    let main = engine.main_term(n)?;
    let growth_report = match &params.log_k {
        Some(l) => Some(growth_bookkeeping(
            &field,
            x,
            &WeightVector::from_logs(l.clone())?,
            &level,
            n,
        )?),
        None => None,
    };
    let summary = format!(
        "theory: n={n} M={} main_term={:.10} gaussian_target={:.10}",
        main.m_used, main.main_term, main.gaussian_target
    );
    args.common.write_json("theory.resolved.json", &params)?;
    args.common.write_json(
        "theory.json",
        &Report {
            main,
            side,
            growth_report,
        },
    )?;
    Ok(summary)
}
