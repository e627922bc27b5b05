use satolab::number_field::{
    enumerate_prime_ideals, higher_power_sum, kronecker, mertens_sum, primes_up_to, split_counts, FieldSpec, LevelSpec,
};

fn centred(field: &FieldSpec, x: f64) -> f64 {
    mertens_sum(field, x).unwrap() - x.ln().ln()
}

#[test]
fn mertens_sum_stabilizes_over_rationals() {
    let q = FieldSpec::rationals();
    let values: Vec<f64> = [1e4, 1e5, 1e6].iter().map(|&x| centred(&q, x)).collect();
    let spread = values.iter().cloned().fold(f64::MIN, f64::max) - values.iter().cloned().fold(f64::MAX, f64::min);
    assert!(spread <= 0.05, "{values:?}");
    // Meissel-Mertens constant
    assert!((values[2] - 0.261_497_212_847_642_8).abs() < 0.01, "{values:?}");
}

#[test]
fn mertens_sum_stabilizes_over_sqrt5() {
    let k = FieldSpec::real_quadratic(5).unwrap();
    let values: Vec<f64> = [1e4, 1e5, 1e6].iter().map(|&x| centred(&k, x)).collect();
    let spread = values.iter().cloned().fold(f64::MIN, f64::max) - values.iter().cloned().fold(f64::MAX, f64::min);
    assert!(spread <= 0.2, "{values:?}");
}

#[test]
fn higher_power_sum_converges() {
    for field in [FieldSpec::rationals(), FieldSpec::real_quadratic(5).unwrap()] {
        let a = higher_power_sum(&field, 1e4).unwrap();
        let b = higher_power_sum(&field, 1e6).unwrap();
        assert!(b >= a && b - a <= 0.01, "{field}: {a} -> {b}");
    }
}

#[test]
fn ideal_count_matches_split_counts() {
    for d in [2u64, 3, 5, 13] {
        let field = FieldSpec::real_quadratic(d).unwrap();
        let ideals = enumerate_prime_ideals(&field, 5e4, &LevelSpec::trivial()).unwrap();
        let counts = split_counts(&field, 5e4).unwrap();
        assert_eq!(ideals.len() as u64, counts.ideal_count(2));
        // Chebotarev: half of the rational primes split
        let ratio = counts.split as f64 / primes_up_to(50_000).len() as f64;
        assert!((ratio - 0.5).abs() < 0.02, "d={d}: {counts:?}");
        let inert = primes_up_to(223)
            .into_iter()
            .filter(|&p| kronecker(field.discriminant(), p) == -1)
            .count();
        assert_eq!(counts.inert, inert as u64);
    }
}

#[test]
fn ideals_are_sorted_by_norm() {
    let field = FieldSpec::real_quadratic(5).unwrap();
    let ideals = enumerate_prime_ideals(&field, 1e4, &LevelSpec::trivial()).unwrap();
    assert!(ideals
        .windows(2)
        .all(|w| (w[0].norm, w[0].p, w[0].label) < (w[1].norm, w[1].p, w[1].label)));
    assert!(ideals.iter().all(|p| p.norm <= 10_000));
}
