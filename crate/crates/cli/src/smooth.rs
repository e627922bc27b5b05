//! `satolab smooth`: the periodized test function and its variance.

use clap::Args as ClapArgs;
use serde::{Deserialize, Serialize};

use satolab::ensemble::{SmoothSpec, SmoothWeight};

use crate::error::{CliError, CliResult};
use crate::output::{num, Common};

#[derive(Debug, ClapArgs)]
pub struct Args {
    #[command(flatten)]
    pub common: Common,
    /// Gaussian Φ(u) = exp(-λu²).
    #[arg(long)]
    pub lambda: Option<f64>,
    #[arg(long = "M")]
    pub m: Option<f64>,
    /// Number of t samples in [0, 1] written to the CSV.
    #[arg(long)]
    pub points: Option<usize>,
}

#[derive(Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Params {
    pub phi: Option<SmoothSpec>,
    #[serde(rename = "M")]
    pub m: Option<f64>,
    pub points: Option<usize>,
}

#[derive(Debug, Serialize)]
struct Report {
    phi: SmoothSpec,
    #[serde(rename = "M")]
    m: f64,
    omega: Option<f64>,
    mean: f64,
    second_moment: f64,
    variance: f64,
}

pub fn run(args: Args) -> CliResult<String> {
    let file: Params = args.common.load()?;
    let params = Params {
        phi: args.lambda.map(|lambda| SmoothSpec::Gaussian { lambda }).or(file.phi),
        m: args.m.or(file.m),
        points: args.points.or(file.points).or(Some(101)),
    };
    let phi = params.phi.clone().ok_or_else(|| CliError::missing("phi"))?;
    let m = params.m.ok_or_else(|| CliError::missing("M"))?;
    let points = params.points.unwrap_or(101);
    if points < 2 {
        return Err(CliError::config("points", "must be at least 2"));
    }
    let weight = SmoothWeight::new(phi.clone(), m)?;
    let (mean, second_moment, variance) = weight.sato_tate_moments()?;

    args.common.write_json("smooth.resolved.json", &params)?;
    let mut w = args.common.csv("smooth.csv")?;
    w.write_record(["t", "phi_M"])?;
    for k in 0..points {
        let t = k as f64 / (points - 1) as f64;
        w.write_record([num(t), num(weight.eval(t))])?;
    }
    w.flush()?;
    args.common.write_json(
        "smooth.json",
        &Report {
            omega: phi.omega(),
            phi,
            m,
            mean,
            second_moment,
            variance,
        },
    )?;
    if variance.is_nan() || variance < 0.0 {
        return Err(CliError::Numerical(format!("V_Φ,M = {variance:e} is negative")));
    }
    Ok(format!("smooth: M={m} mean={mean:.12} V={variance:.12}"))
}
