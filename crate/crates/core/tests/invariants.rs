mod common;

use common::GOLDEN;
use num_bigint::BigUint;
use num_complex::Complex64;
use proptest::prelude::*;
use torus2c_core::{
    birkhoff_lift, cf_expand, circle_dist, convergents, Alpha, CirclePoint, FlFunction, FourierSeries, FourierTerm,
    SkewProduct, TorusPoint,
};

fn wavy(l: i64) -> FlFunction {
    let s = FourierSeries::new(vec![
        FourierTerm::new(1u32.into(), Complex64::new(0.1, 0.05)).unwrap(),
        FourierTerm::new(3u32.into(), Complex64::new(-0.02, 0.04)).unwrap(),
    ])
    .unwrap();
    FlFunction::fourier(l, s)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn cocycle(x in 0.0f64..1.0, m in 0usize..400, n in 0usize..400, l in -3i64..=3) {
        let f = wavy(l);
        let whole = birkhoff_lift(&f, GOLDEN, x, m + n);
        let split = birkhoff_lift(&f, GOLDEN, x, n) + birkhoff_lift(&f, GOLDEN, x + n as f64 * GOLDEN, m);
        prop_assert!((whole - split).abs() < 1e-9);
    }

    #[test]
    fn telescoping(x in 0.0f64..1.0, n in 0usize..400, l in -3i64..=3) {
        let f = wavy(l);
        let d = birkhoff_lift(&f, GOLDEN, x + 1.0, n) - birkhoff_lift(&f, GOLDEN, x, n);
        prop_assert!((d - (n as i64 * l) as f64).abs() < 1e-9);
    }

    #[test]
    fn circle_metric_axioms(a in -5.0f64..5.0, b in -5.0f64..5.0, c in -5.0f64..5.0) {
        let (a, b, c) = (CirclePoint::new(a), CirclePoint::new(b), CirclePoint::new(c));
        prop_assert_eq!(circle_dist(a, a), 0.0);
        prop_assert_eq!(circle_dist(a, b), circle_dist(b, a));
        prop_assert!(circle_dist(a, b) <= 0.5);
        prop_assert!(circle_dist(a, c) <= circle_dist(a, b) + circle_dist(b, c) + 1e-15);
    }

    #[test]
    fn bowen_metric_is_monotone(px in 0.0f64..1.0, py in 0.0f64..1.0, qx in 0.0f64..1.0, qy in 0.0f64..1.0, n in 1usize..60) {
        let t = SkewProduct::new(GOLDEN, wavy(1)).unwrap();
        let (p, q) = (TorusPoint::new(px, py), TorusPoint::new(qx, qy));
        let (d, d1) = (t.dn_dist(p, q, n), t.dn_dist(p, q, n + 1));
        prop_assert!(d <= d1);
        for eps in [0.05, 0.2, 0.4] {
            prop_assert_eq!(t.separated(p, q, n, eps), d > eps);
        }
    }

    #[test]
    fn function_files_round_trip(l in -5i64..=5, re in -1.0f64..1.0, im in -1.0f64..1.0, k in 1u32..200) {
        let n = BigUint::from(7u32).pow(k);
        let f = FlFunction::fourier(l, FourierSeries::new(vec![FourierTerm::new(n, Complex64::new(re, im)).unwrap()]).unwrap());
        let back = FlFunction::from_json(&f.to_json()).unwrap();
        prop_assert_eq!(back, f);
    }

    #[test]
    fn rational_expansions_end_at_alpha(p in 0u64..10_000, q in 1u64..10_000) {
        let alpha = Alpha::parse(&format!("{p}/{q}")).unwrap();
        let cf = cf_expand(&alpha, 64).unwrap();
        prop_assert!(cf.terminated);
        let last = convergents(&cf).pop().unwrap();
        prop_assert_eq!(&last.as_ratio(), alpha.value());
    }
}
