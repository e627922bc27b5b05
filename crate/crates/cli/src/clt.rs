//! `satolab clt`: Monte Carlo ensemble and its standardized moments.

use clap::Args as ClapArgs;
use serde::{Deserialize, Serialize};

use satolab::ensemble::{Ensemble, EnsembleConfig, Executor, SmoothSpec, Statistic, DEFAULT_MAX_MOMENT};
use satolab::number_field::{FieldSpec, LevelSpec};
use satolab::selberg::ArcInterval;

use crate::error::{CliError, CliResult};
use crate::output::{interval_from_flag, num, resolve_threads, Common};
use crate::primes::{parse_field, parse_level};

#[derive(Debug, ClapArgs)]
pub struct Args {
    #[command(flatten)]
    pub common: Common,
    /// Worker threads (default: SATOLAB_THREADS, then all cores).
    #[arg(long)]
    pub threads: Option<usize>,
    /// Run members on the calling thread only.
    #[arg(long)]
    pub sequential: bool,
    #[arg(long)]
    pub field: Option<String>,
    #[arg(long, num_args = 1..)]
    pub exclude: Option<Vec<String>>,
    #[arg(long)]
    pub x: Option<f64>,
    /// Ensemble size H.
    #[arg(long)]
    pub size: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Indicator statistic on [A, B] (radians).
    #[arg(long, num_args = 2, value_names = ["A", "B"], allow_negative_numbers = true, conflicts_with = "lambda")]
    pub interval: Option<Vec<f64>>,
    #[arg(long)]
    pub degrees: bool,
    /// Smooth statistic with Gaussian Φ(u) = exp(-λu²); needs --M.
    #[arg(long, requires = "m")]
    pub lambda: Option<f64>,
    #[arg(long = "M")]
    pub m: Option<f64>,
    #[arg(long)]
    pub max_moment: Option<u32>,
}

/// `EnsembleConfig` with every field optional.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Params {
    field: Option<FieldSpec>,
    level: Option<LevelSpec>,
    x: Option<f64>,
    #[serde(alias = "H")]
    size: Option<usize>,
    seed: Option<u64>,
    statistic: Option<Statistic>,
    max_moment: Option<u32>,
}

#[derive(Debug, Serialize)]
struct HistogramRow {
    bin_left: String,
    bin_right: String,
    count: u64,
}

fn resolve(args: &Args, file: Params) -> CliResult<EnsembleConfig> {
    let statistic = if let Some(iv) = interval_from_flag(&args.interval, args.degrees) {
        Some(Statistic::Indicator {
            interval: ArcInterval::new(iv[0], iv[1]).map_err(|e| CliError::config("interval", e.to_string()))?,
        })
    } else if let Some(lambda) = args.lambda {
        Some(Statistic::Smooth {
            phi: SmoothSpec::Gaussian { lambda },
            m: args.m.unwrap_or(f64::NAN),
        })
    } else {
        match (file.statistic, args.m) {
            (Some(Statistic::Smooth { phi, .. }), Some(m)) => Some(Statistic::Smooth { phi, m }),
            (s, _) => s,
        }
    };
    Ok(EnsembleConfig {
        field: args
            .field
            .as_deref()
            .map(parse_field)
            .transpose()?
            .or(file.field)
            .ok_or_else(|| CliError::missing("field"))?,
        level: args
            .exclude
            .as_deref()
            .map(parse_level)
            .transpose()?
            .or(file.level)
            .unwrap_or_default(),
        x: args.x.or(file.x).ok_or_else(|| CliError::missing("x"))?,
        size: args.size.or(file.size).ok_or_else(|| CliError::missing("size"))?,
        seed: args.seed.or(file.seed).ok_or_else(|| CliError::missing("seed"))?,
        statistic: statistic.ok_or_else(|| CliError::missing("statistic"))?,
        max_moment: args.max_moment.or(file.max_moment).unwrap_or(DEFAULT_MAX_MOMENT),
    })
}

pub fn run(args: Args) -> CliResult<String> {
    let file: Params = args.common.load()?;
    let config = resolve(&args, file)?;
    let executor = if args.sequential {
        Executor::Sequential
    } else {
        Executor::Parallel {
            threads: resolve_threads(args.threads)?,
        }
    };
    let ensemble = Ensemble::new(config.clone())?;
    let report = ensemble.run(executor)?;

    args.common.write_json("clt.resolved.json", &config)?;
    args.common.write_json("report.json", &report)?;
    let mut w = args.common.csv("histogram.csv")?;
    let h = &report.histogram;
    for (k, &count) in h.counts.iter().enumerate() {
        w.serialize(HistogramRow {
            bin_left: num(h.edges[k]),
            bin_right: num(h.edges[k + 1]),
            count,
        })?;
    }
    w.flush()?;

    if report.standard_errors.iter().any(|se| !(se.is_finite() && *se > 0.0)) {
        return Err(CliError::Numerical(
            "a moment has a non-positive or non-finite standard error".into(),
        ));
    }
    let worst = report.z_scores.iter().fold(0.0f64, |m, z| m.max(z.abs()));
    Ok(format!(
        "clt: H={} pi_L={} ks={:.5} max|z|={:.3} (moments {:?})",
        report.size,
        report.pi_l_x,
        report.ks_statistic,
        worst,
        report
            .empirical_moments
            .iter()
            .map(|m| format!("{m:.4}"))
            .collect::<Vec<_>>()
    ))
}
