//! `satolab measures`: Chebyshev moments of the local measures.

use std::f64::consts::PI;

use clap::Args as ClapArgs;
use serde::{Deserialize, Serialize};

use satolab::chebyshev::eval_u;
use satolab::measures::{AngleMeasure, LocalMeasure};
use satolab::quadrature::{simpson, DEFAULT_PANELS};

use crate::error::{CliError, CliResult};
use crate::output::{num, Common};

const TOLERANCE: f64 = 1e-9;

#[derive(Debug, ClapArgs)]
pub struct Args {
    #[command(flatten)]
    pub common: Common,
    /// Prime-power norms.
    #[arg(long, num_args = 1..)]
    pub q: Option<Vec<f64>>,
    /// Largest Chebyshev index.
    #[arg(long)]
    pub max_m: Option<usize>,
    /// Simpson panels for the quadrature check.
    #[arg(long)]
    pub panels: Option<usize>,
}

#[derive(Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Params {
    pub q: Option<Vec<f64>>,
    pub max_m: Option<usize>,
    pub panels: Option<usize>,
}

#[derive(Debug, Serialize)]
struct Summary {
    q: Vec<f64>,
    max_m: usize,
    panels: usize,
    max_abs_error: f64,
}

pub fn run(args: Args) -> CliResult<String> {
    let file: Params = args.common.load()?;
    let params = Params {
        q: args.q.or(file.q),
        max_m: args.max_m.or(file.max_m),
        panels: args.panels.or(file.panels).or(Some(DEFAULT_PANELS)),
    };
    let qs = params.q.clone().ok_or_else(|| CliError::missing("q"))?;
    if qs.is_empty() {
        return Err(CliError::missing("q"));
    }
    let max_m = params.max_m.ok_or_else(|| CliError::missing("max_m"))?;
    let panels = params.panels.unwrap_or(DEFAULT_PANELS);
    if panels < 2 {
        return Err(CliError::config("panels", "must be at least 2"));
    }
    let measures = qs
        .iter()
        .map(|&q| LocalMeasure::new(q))
        .collect::<Result<Vec<_>, _>>()?;

    args.common.write_json("measures.resolved.json", &params)?;
    let mut w = args.common.csv("measures.csv")?;
    w.write_record(["q", "m", "closed_form", "quadrature", "abs_error"])?;
    let mut worst = 0.0f64;
    for (q, mu) in qs.iter().zip(&measures) {
        for m in 0..=max_m {
            let quad = simpson(
                |t| eval_u(m, t).unwrap_or(f64::NAN) * mu.density_unchecked(t),
                0.0,
                PI,
                panels,
            )
            .ok_or_else(|| CliError::Numerical(format!("non-finite integrand at q={q}, m={m}")))?;
            let exact = mu.chebyshev_moment(m);
            let err = (quad - exact).abs();
            worst = worst.max(err);
            w.write_record([num(*q), m.to_string(), num(exact), num(quad), num(err)])?;
        }
    }
    w.flush()?;
    args.common.write_json(
        "measures.json",
        &Summary {
            q: qs.clone(),
            max_m,
            panels,
            max_abs_error: worst,
        },
    )?;
    if worst > TOLERANCE {
        return Err(CliError::Numerical(format!(
            "moment quadrature error {worst:e} exceeds {TOLERANCE:e}"
        )));
    }
    Ok(format!(
        "measures: {} norms, m ≤ {max_m}, max |quadrature - closed form| = {worst:.3e}",
        qs.len()
    ))
}
