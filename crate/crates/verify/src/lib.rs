//! Shared fixtures for the acceptance checks.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

use satolab::ensemble::{EnsembleConfig, Statistic};
use satolab::number_field::{FieldSpec, LevelSpec};
use satolab::selberg::ArcInterval;

/// The one seed used by every randomized check.
pub const SEED: u64 = 20240611;

/// Prints `criterion N: PASS|FAIL detail`, then fails the test on FAIL.
pub fn verdict(n: u32, pass: bool, detail: String) {
    println!("criterion {n}: {} {detail}", if pass { "PASS" } else { "FAIL" });
    assert!(pass, "criterion {n} failed: {detail}");
}

/// `[π/4, π/2]`.
pub fn quarter() -> ArcInterval {
    ArcInterval::new(FRAC_PI_4, FRAC_PI_2).expect("valid arc")
}

pub fn sqrt5() -> FieldSpec {
    FieldSpec::real_quadratic(5).expect("5 is squarefree")
}

/// `Q(√5)`, `x = 10⁴`, `H = 5·10⁴`.
pub fn clt_config(statistic: Statistic, max_moment: u32) -> EnsembleConfig {
    EnsembleConfig {
        field: sqrt5(),
        level: LevelSpec::trivial(),
        x: 1e4,
        size: 50_000,
        seed: SEED,
        statistic,
        max_moment,
    }
}
