mod common;

use cesaro::reversion::{density_expansion, lagrange_burmann_cj, q_coefficients, LaurentSeries};
use cesaro::scalar::{rat, Rational};
use cesaro::Error;
use num_rational::Rational64;
use num_traits::Zero;
use proptest::prelude::*;

fn rational_symbol() -> impl Strategy<Value = Vec<Rational>> {
    (1i64..20, prop::collection::vec(-20i64..20, 0..5)).prop_map(|(lead, rest)| {
        std::iter::once(rat(lead, 7))
            .chain(rest.into_iter().map(|c| rat(c, 11)))
            .collect()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn vanishing_theorem(coeffs in rational_symbol(), n in 1u32..=5) {
        let p = LaurentSeries::from_symbol(coeffs, true).unwrap();
        prop_assert!(lagrange_burmann_cj(&p, n, n).unwrap().is_zero());
    }

    #[test]
    fn series_extraction_matches_numerical_reversion(p0 in -1.0f64..1.0, pm1 in -1.0f64..1.0, n in 1u32..5) {
        let coeffs = vec![1.0, p0, pm1];
        let p = LaurentSeries::from_symbol(coeffs.clone(), true).unwrap();
        let oracle = common::reversion_oracle(&coeffs, n, 3, 0.05);
        let scale = oracle.iter().fold(0.0f64, |m, c| m.max(c.abs()));
        for j in 0..=3u32 {
            let c = lagrange_burmann_cj(&p, n, j).unwrap();
            let o = oracle[j as usize];
            prop_assert!((c - o).abs() <= 1e-6 * o.abs().max(1e-3 * scale), "j={}: {} vs {}", j, c, o);
        }
    }

    #[test]
    fn exponents_step_by_one_over_d(coeffs in rational_symbol(), n in 1u32..6, d in 1u32..4) {
        let p = LaurentSeries::from_symbol(coeffs, true).unwrap();
        let e = density_expansion(&p, n, d, 6).unwrap();
        for w in e.exponents.windows(2) {
            prop_assert_eq!(w[0] - w[1], Rational64::new(1, d as i64));
        }
    }

    #[test]
    fn commuting_symbols_have_no_q(s in -50.0f64..50.0) {
        let (q2, q3) = q_coefficients(s, s * s, s * s * s);
        prop_assert!(q2.abs() <= 1e-12 * s.abs().powi(2).max(1.0));
        prop_assert!(q3.abs() <= 1e-12 * s.abs().powi(3).max(1.0));
    }
}

#[test]
fn truncated_symbols_report_missing_orders() {
    let p = LaurentSeries::from_symbol(vec![rat(1, 1), rat(1, 2)], false).unwrap();
    assert!(lagrange_burmann_cj(&p, 2, 1).is_ok());
    assert!(lagrange_burmann_cj(&p, 2, 2).unwrap().is_zero());
    assert!(lagrange_burmann_cj(&p, 3, 1).is_ok());
    assert!(matches!(
        lagrange_burmann_cj(&p, 3, 2),
        Err(Error::Order { .. })
    ));
    assert!(matches!(
        LaurentSeries::from_symbol(vec![rat(-1, 1)], true),
        Err(Error::Ellipticity(_))
    ));
}

#[test]
fn free_symbol_density() {
    // p = z in three dimensions: the density is 4πλ²/(2π)³ and nothing else.
    let p = LaurentSeries::from_symbol(vec![rat(1, 1)], true).unwrap();
    let e = density_expansion(&p, 3, 1, 4).unwrap();
    assert!(
        (e.eval(2.0) - 4.0 * std::f64::consts::PI * 4.0 / (2.0 * std::f64::consts::PI).powi(3))
            .abs()
            < 1e-14
    );
    assert!(e.c[1..].iter().all(|c| c.to_f64() == 0.0));
}
