//! `satolab`: reproducible experiments on Sato-Tate angle statistics.
//!
//! Exit codes: 0 success, 1 numerical contract failure or i/o error,
//! 2 configuration error.

mod approx;
mod clt;
mod error;
mod measures;
mod output;
mod primes;
mod smooth;
mod theory;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

use error::CliResult;

#[derive(Debug, Parser)]
#[command(
    name = "satolab",
    version,
    about = "Sato-Tate angle statistics for Q and real quadratic fields"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Extremal trigonometric approximation of an interval indicator.
    Approx(approx::Args),
    /// Chebyshev moments of local Plancherel measures.
    Measures(measures::Args),
    /// Prime ideals up to a norm bound and their Mertens sums.
    Primes(primes::Args),
    /// Monte Carlo ensemble moments, KS distance and histogram.
    Clt(clt::Args),
    /// Deterministic main terms of the moments.
    Theory(theory::Args),
    /// Periodized smooth test function and its variance.
    Smooth(smooth::Args),
}

fn dispatch(cli: Cli) -> CliResult<String> {
    match cli.command {
        Command::Approx(a) => approx::run(a),
        Command::Measures(a) => measures::run(a),
        Command::Primes(a) => primes::run(a),
        Command::Clt(a) => clt::run(a),
        Command::Theory(a) => theory::run(a),
        Command::Smooth(a) => smooth::run(a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    match std::panic::catch_unwind(|| dispatch(cli)) {
        Ok(Ok(summary)) => {
            println!("{summary}");
            ExitCode::SUCCESS
        }
        Ok(Err(e)) => {
            eprintln!("satolab: {e}");
            e.exit_code()
        }
        Err(_) => {
            eprintln!("satolab: internal error");
            ExitCode::from(1)
        }
    }
}
