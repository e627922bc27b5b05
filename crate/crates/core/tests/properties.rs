use std::f64::consts::PI;

use proptest::prelude::*;

use satolab::chebyshev::{series_product, ChebyshevSeries};
use satolab::measures::{AngleMeasure, LocalMeasure, SatoTate};
use satolab::moments_engine::{distinct_tuple_sum, partitions_of, PartitionCase};
use satolab::selberg::{to_chebyshev, ArcInterval, Side};

fn series(max_len: usize) -> impl Strategy<Value = ChebyshevSeries> {
    prop::collection::vec(-2.0f64..2.0, 1..max_len).prop_map(|c| ChebyshevSeries::new(c).unwrap())
}

fn expansion(values: &[f64], n: usize) -> f64 {
    partitions_of(n)
        .unwrap()
        .iter()
        .map(|p| {
            p.weight as f64
                * distinct_tuple_sum(&p.parts, |block| {
                    values
                        .iter()
                        .map(|v| block.iter().map(|&r| v.powi(r as i32)).product::<f64>())
                        .sum()
                })
        })
        .sum()
}

proptest! {
    #[test]
    fn product_commutes_and_evaluates(a in series(12), b in series(12), theta in 0.01f64..3.13) {
        let ab = series_product(&a, &b);
        let ba = series_product(&b, &a);
        prop_assert_eq!(ab.degree(), a.degree() + b.degree());
        for (x, y) in ab.coeffs().iter().zip(ba.coeffs()) {
            prop_assert!((x - y).abs() <= 1e-12);
        }
        let direct = a.eval(theta) * b.eval(theta);
        prop_assert!((ab.eval(theta) - direct).abs() <= 1e-9 * (1.0 + direct.abs()));
    }

    #[test]
    fn product_associates(a in series(6), b in series(6), c in series(6)) {
        let left = series_product(&series_product(&a, &b), &c);
        let right = series_product(&a, &series_product(&b, &c));
        for (x, y) in left.coeffs().iter().zip(right.coeffs()) {
            prop_assert!((x - y).abs() <= 1e-10 * (1.0 + x.abs()));
        }
    }

    #[test]
    fn local_cdf_is_monotone_and_inverts(q in 2.0f64..200.0, t1 in 0.0f64..PI, t2 in 0.0f64..PI) {
        let mu = LocalMeasure::new(q).unwrap();
        let (lo, hi) = if t1 <= t2 { (t1, t2) } else { (t2, t1) };
        let (flo, fhi) = (mu.cdf(lo).unwrap(), mu.cdf(hi).unwrap());
        prop_assert!(flo <= fhi + 1e-15);
        prop_assert!((0.0..=1.0).contains(&flo) && (0.0..=1.0).contains(&fhi));
        let back = mu.invert_cdf(fhi);
        prop_assert!((mu.cdf(back).unwrap() - fhi).abs() <= 1e-11);
    }

    #[test]
    fn local_density_tends_to_sato_tate(theta in 0.0f64..PI) {
        let far = LocalMeasure::new(1e12).unwrap();
        let st = SatoTate.density(theta).unwrap();
        prop_assert!((far.density(theta).unwrap() - st).abs() <= 1e-9);
    }

    #[test]
    fn multinomial_oracle(z in prop::collection::vec(-8i32..=8, 1..=4), n in 1usize..=5) {
        let values: Vec<f64> = z.iter().map(|&v| v as f64 / 4.0).collect();
        let exact = values.iter().sum::<f64>().powi(n as i32);
        let got = expansion(&values, n);
        prop_assert!((got - exact).abs() <= 1e-9 * (1.0 + exact.abs()), "{} vs {}", got, exact);
    }

    #[test]
    fn extremal_pair_sandwiches_indicator(a in 0.0f64..3.0, len in 0.05f64..3.0, m in 3usize..40) {
        let b = (a + len).min(PI);
        let interval = ArcInterval::new(a, b).unwrap();
        let pair = to_chebyshev(&interval, m).unwrap();
        prop_assert!(pair.max_sandwich_violation(2_000) <= 1e-9);
        let (dp, dm) = pair.mass_defect();
        let expected = 1.0 / (m + 1) as f64;
        prop_assert!((dp - expected).abs() <= 1e-9 && (dm - expected).abs() <= 1e-9);
        prop_assert!(pair.eval(Side::Plus, 0.5 * (a + b)) >= pair.eval(Side::Minus, 0.5 * (a + b)));
    }
}

#[test]
fn partition_cases_are_disjoint_and_exhaustive() {
    // p(n) for n = 1..=12
    let counts = [1, 2, 3, 5, 7, 11, 15, 22, 30, 42, 56, 77];
    for n in 1..=12 {
        let parts = partitions_of(n).unwrap();
        assert_eq!(parts.len(), counts[n - 1]);
        for p in &parts {
            assert_eq!(p.parts.iter().sum::<usize>(), n);
            let expected = if p.parts.contains(&1) {
                PartitionCase::HasSingleton
            } else if p.parts.iter().all(|&r| r == 2) {
                PartitionCase::Pairing
            } else {
                PartitionCase::HigherPart
            };
            assert_eq!(p.case, expected);
        }
        let pairings = parts.iter().filter(|p| p.case == PartitionCase::Pairing).count();
        assert_eq!(pairings, usize::from(n % 2 == 0));
    }
}
