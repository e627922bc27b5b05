use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

const BIN: &str = env!("CARGO_BIN_EXE_satolab");

fn run(args: &[&str], out: &Path) -> Output {
    Command::new(BIN)
        .args(args)
        .arg("--out")
        .arg(out)
        .env_remove("SATOLAB_THREADS")
        .output()
        .expect("spawn satolab")
}

fn json(path: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

const INDICATOR: &[&str] = &[
    "clt",
    "--field",
    "sqrt5",
    "--x",
    "2000",
    "--size",
    "400",
    "--seed",
    "7",
    "--interval",
    "45",
    "90",
    "--degrees",
];

#[test]
fn approx_reports_unit_mass_defects() {
    let dir = TempDir::new().unwrap();
    let o = run(
        &["approx", "--interval", "0", "3.14159265358979", "--M", "20"],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let r = json(&dir.path().join("approx.json"));
    let plus = r["mass_defect"]["plus"].as_f64().unwrap();
    let minus = r["mass_defect"]["minus"].as_f64().unwrap();
    assert_eq!(r["s_plus"].as_array().unwrap().len(), 21);
    assert_eq!(r["f_minus"].as_array().unwrap().len(), 21);
    assert!((plus - 1.0 / 21.0).abs() < 1e-12);
    assert!((minus - 1.0 / 21.0).abs() < 1e-12);
    assert!(r["max_sandwich_violation"].as_f64().unwrap() <= 1e-9);
    let csv = fs::read_to_string(dir.path().join("approx_coefficients.csv")).unwrap();
    assert_eq!(csv.lines().count(), 22);
}

#[test]
fn measures_row_matches_closed_form() {
    let dir = TempDir::new().unwrap();
    let o = run(&["measures", "--q", "4", "--max-m", "4"], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let mut rdr = csv::Reader::from_path(dir.path().join("measures.csv")).unwrap();
    let row = rdr
        .records()
        .map(|r| r.unwrap())
        .find(|r| r[1].parse::<usize>().unwrap() == 2)
        .unwrap();
    let closed: f64 = row[2].parse().unwrap();
    // Even moments are q^{-m/2}.
    assert!((closed - 0.25).abs() < 1e-14);
    let err: f64 = row[4].parse().unwrap();
    assert!(err < 1e-9);
}

#[test]
fn primes_lists_ideals_and_counts() {
    let dir = TempDir::new().unwrap();
    let o = run(&["primes", "--field", "q", "--x", "100"], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let r = json(&dir.path().join("primes.json"));
    assert_eq!(r["pi_L"].as_u64(), Some(25));
    let csv = fs::read_to_string(dir.path().join("primes.csv")).unwrap();
    assert_eq!(csv.lines().count(), 26);
    assert!(csv.starts_with("p,f,norm,type,label\n2,1,2,rational,0\n"));
}

#[test]
fn primes_below_sixteen_has_null_sums() {
    let dir = TempDir::new().unwrap();
    let o = run(&["primes", "--field", "q", "--x", "10"], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(json(&dir.path().join("primes.json"))["mertens"].is_null());
}

#[test]
fn missing_field_exits_two_and_names_it() {
    let dir = TempDir::new().unwrap();
    let o = run(&["approx", "--M", "10"], dir.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("interval"));
}

#[test]
fn invalid_value_exits_two_and_names_it() {
    let dir = TempDir::new().unwrap();
    let o = run(&["measures", "--q", "1", "--max-m", "3"], dir.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains('q'));

    let o = run(
        &[
            "clt",
            "--field",
            "sqrt5",
            "--x",
            "2000",
            "--size",
            "10",
            "--seed",
            "1",
            "--interval",
            "0.5",
            "1.0",
        ],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("size"));
}

#[test]
fn unknown_config_key_is_a_config_error() {
    let dir = TempDir::new().unwrap();
    let cfg = dir.path().join("bad.json");
    fs::write(&cfg, r#"{"field": {"kind": "rationals"}, "x": 100, "bogus": 1}"#).unwrap();
    let o = run(&["primes", "--config", cfg.to_str().unwrap()], dir.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("config"));
}

#[test]
fn coarse_quadrature_breaks_contract_and_exits_one() {
    let dir = TempDir::new().unwrap();
    let o = run(&["measures", "--q", "2", "--max-m", "20", "--panels", "4"], dir.path());
    assert_eq!(o.status.code(), Some(1), "{}", stderr(&o));
    assert!(stderr(&o).contains("exceeds"));
    // Outputs are still written for inspection.
    assert!(dir.path().join("measures.csv").exists());
}

#[test]
fn oversized_power_is_refused_naming_n() {
    let dir = TempDir::new().unwrap();
    let o = run(
        &[
            "theory",
            "--n",
            "200",
            "--x",
            "10000",
            "--interval",
            "0.5",
            "1.0",
            "--field",
            "q",
        ],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("`n`"));
}

#[test]
fn bad_thread_env_is_a_config_error() {
    let dir = TempDir::new().unwrap();
    let o = Command::new(BIN)
        .args(INDICATOR)
        .arg("--out")
        .arg(dir.path())
        .env("SATOLAB_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("SATOLAB_THREADS"));
}

#[test]
fn clt_is_identical_across_thread_counts() {
    let one = TempDir::new().unwrap();
    let eight = TempDir::new().unwrap();
    let seq = TempDir::new().unwrap();
    let mut a = INDICATOR.to_vec();
    a.extend(["--threads", "1"]);
    let mut b = INDICATOR.to_vec();
    b.extend(["--threads", "8"]);
    let mut c = INDICATOR.to_vec();
    c.push("--sequential");
    for (args, dir) in [(&a, &one), (&b, &eight), (&c, &seq)] {
        let o = run(args, dir.path());
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    }
    let r1 = fs::read(one.path().join("report.json")).unwrap();
    assert_eq!(r1, fs::read(eight.path().join("report.json")).unwrap());
    assert_eq!(r1, fs::read(seq.path().join("report.json")).unwrap());
    let h = fs::read_to_string(one.path().join("histogram.csv")).unwrap();
    assert_eq!(h.lines().count(), 61);
}

#[test]
fn resolved_echo_reproduces_outputs() {
    let cases: &[(&[&str], &str, &[&str])] = &[
        (INDICATOR, "clt.resolved.json", &["report.json", "histogram.csv"]),
        (
            &[
                "clt",
                "--field",
                "sqrt5",
                "--x",
                "500",
                "--size",
                "200",
                "--seed",
                "3",
                "--lambda",
                "1",
                "--M",
                "4",
                "--max-moment",
                "4",
            ],
            "clt.resolved.json",
            &["report.json"],
        ),
        (
            &["approx", "--interval", "0.3", "2.0", "--M", "12"],
            "approx.resolved.json",
            &["approx.json", "approx_coefficients.csv"],
        ),
        (
            &["measures", "--q", "2", "9", "--max-m", "3"],
            "measures.resolved.json",
            &["measures.csv"],
        ),
        (
            &["primes", "--field", "sqrt2", "--x", "200", "--exclude", "7:1"],
            "primes.resolved.json",
            &["primes.csv", "primes.json"],
        ),
        (
            &[
                "theory",
                "--n",
                "3",
                "--x",
                "3000",
                "--interval",
                "1.0",
                "2.14",
                "--field",
                "q",
                "--k",
                "12",
            ],
            "theory.resolved.json",
            &["theory.json"],
        ),
        (
            &["smooth", "--lambda", "2", "--M", "6"],
            "smooth.resolved.json",
            &["smooth.csv", "smooth.json"],
        ),
    ];
    for (args, echo, outputs) in cases {
        let first = TempDir::new().unwrap();
        let second = TempDir::new().unwrap();
        let o = run(args, first.path());
        assert_eq!(o.status.code(), Some(0), "{args:?}: {}", stderr(&o));
        let cfg = first.path().join(echo);
        let o = run(&[args[0], "--config", cfg.to_str().unwrap()], second.path());
        assert_eq!(o.status.code(), Some(0), "{args:?} replay: {}", stderr(&o));
        for name in *outputs {
            let a = fs::read(first.path().join(name)).unwrap();
            let b = fs::read(second.path().join(name)).unwrap();
            assert!(a == b, "{args:?}: {name} differs on replay");
        }
    }
}

#[test]
fn json_floats_carry_seventeen_digits() {
    let dir = TempDir::new().unwrap();
    let o = run(&["smooth", "--lambda", "1", "--M", "4"], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = fs::read_to_string(dir.path().join("smooth.json")).unwrap();
    let v: Value = serde_json::from_str(&text).unwrap();
    let mean = v["mean"].as_f64().unwrap();
    assert!(text.contains(&format!("{mean:.16e}")));
}
