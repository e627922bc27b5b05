//! `satolab approx`: extremal majorant/minorant of an interval indicator.

use clap::Args as ClapArgs;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use satolab::selberg::{mu_infty_interval, to_chebyshev, variance_sum, ArcInterval, Side};

use crate::error::{CliError, CliResult};
use crate::output::{interval_from_flag, num, Common};

/// Contract tolerance for the sandwich and the mass defects.
const TOLERANCE: f64 = 1e-9;

#[derive(Debug, ClapArgs)]
pub struct Args {
    #[command(flatten)]
    pub common: Common,
    /// Interval endpoints in radians inside [0, π].
    #[arg(long, num_args = 2, value_names = ["A", "B"], allow_negative_numbers = true)]
    pub interval: Option<Vec<f64>>,
    /// Read --interval in degrees.
    #[arg(long)]
    pub degrees: bool,
    /// Polynomial degree.
    #[arg(long = "M")]
    pub m: Option<usize>,
    /// Grid size for the sandwich check.
    #[arg(long)]
    pub points: Option<usize>,
}

#[derive(Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Params {
    pub interval: Option<[f64; 2]>,
    #[serde(rename = "M")]
    pub m: Option<usize>,
    pub points: Option<usize>,
}

#[derive(Debug, Serialize)]
struct Defect {
    plus: f64,
    minus: f64,
    expected: f64,
}

#[derive(Debug, Serialize)]
struct Report<'a> {
    interval: [f64; 2],
    degree: usize,
    mu_infty: f64,
    /// Circle coefficients `Ŝ±(m)` for `0 ≤ m ≤ M` as `[re, im]`.
    s_plus: &'a [Complex64],
    s_minus: &'a [Complex64],
    /// Chebyshev coefficients `F̂±(m)` for `0 ≤ m ≤ M`.
    f_plus: &'a [f64],
    f_minus: &'a [f64],
    mass_defect: Defect,
    variance_sum_plus: f64,
    variance_sum_minus: f64,
    variance_target: f64,
    max_sandwich_violation: f64,
    truncation_residual: f64,
    points: usize,
}

pub fn run(args: Args) -> CliResult<String> {
    let file: Params = args.common.load()?;
    let params = Params {
        interval: interval_from_flag(&args.interval, args.degrees).or(file.interval),
        m: args.m.or(file.m),
        points: args.points.or(file.points).or(Some(10_000)),
    };
    let [a, b] = params.interval.ok_or_else(|| CliError::missing("interval"))?;
    let m = params.m.ok_or_else(|| CliError::missing("M"))?;
    let points = params.points.unwrap_or(10_000);
    if points < 2 {
        return Err(CliError::config("points", "must be at least 2"));
    }
    let interval = ArcInterval::new(a, b)?;
    let pair = to_chebyshev(&interval, m)?;
    let (dp, dm) = pair.mass_defect();
    let (vp, vm) = variance_sum(&pair);
    let mu = mu_infty_interval(&interval);
    let expected = 1.0 / (m + 1) as f64;
    let report = Report {
        interval: [a, b],
        degree: m,
        mu_infty: mu,
        s_plus: &pair.selberg.plus,
        s_minus: &pair.selberg.minus,
        f_plus: pair.f_plus.coeffs(),
        f_minus: pair.f_minus.coeffs(),
        mass_defect: Defect {
            plus: dp,
            minus: dm,
            expected,
        },
        variance_sum_plus: vp,
        variance_sum_minus: vm,
        variance_target: mu - mu * mu,
        max_sandwich_violation: pair.max_sandwich_violation(points),
        truncation_residual: pair.selberg.truncation_residual,
        points,
    };
    args.common.write_json("approx.resolved.json", &params)?;
    args.common.write_json("approx.json", &report)?;
    let mut w = args.common.csv("approx_coefficients.csv")?;
    w.write_record(["m", "f_plus", "f_minus"])?;
    for k in 0..=m {
        w.write_record([
            k.to_string(),
            num(pair.series(Side::Plus).coefficient(k)),
            num(pair.series(Side::Minus).coefficient(k)),
        ])?;
    }
    w.flush()?;

    let defect_err = (dp - expected).abs().max((dm - expected).abs());
    if report.max_sandwich_violation > TOLERANCE || defect_err > TOLERANCE {
        return Err(CliError::Numerical(format!(
            "sandwich violation {:e}, mass defect error {:e} (tolerance {TOLERANCE:e})",
            report.max_sandwich_violation, defect_err
        )));
    }
    Ok(format!(
        "approx: M={m} defects=(+{dp:.12}, -{dm:.12}) expected {expected:.12} sandwich_violation={:.3e}",
        report.max_sandwich_violation
    ))
}
