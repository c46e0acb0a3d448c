mod common;

use num_bigint::BigUint;
use num_traits::One;
use torus2c_core::order2::coboundary_residual;
use torus2c_core::{
    build_counterexample, coboundary_coeffs, complexity_report, find_nk, order2_verdict, synthesize_phi, Alpha, Error,
    FlFunction, FourierSeries, FourierTerm, Order2Class, SkewProduct, Verdict,
};

fn cap() -> BigUint {
    BigUint::one() << 256u32
}

#[test]
fn counterexample_survives_a_file_round_trip() {
    let alpha = Alpha::parse("liouville:6").unwrap();
    let ce = build_counterexample(1, &alpha, 3, &cap()).unwrap();
    let f = FlFunction::from_json(&ce.function.to_json()).unwrap();
    assert_eq!(f, ce.function);
    let r = coboundary_coeffs(&f, &alpha, &cap()).unwrap();
    assert_eq!(r.verdict, Verdict::Diverges);
    let sums: Vec<f64> = r.partial_sums.iter().map(|p| p.1).collect();
    assert_eq!(sums, vec![2.0, 4.0, 6.0]);
    assert_eq!(order2_verdict(&r).class, Order2Class::NotOrder2);
}

#[test]
fn counterexample_complexity_is_linear_in_n() {
    let alpha = Alpha::liouville(6).unwrap();
    let f = build_counterexample(1, &alpha, 3, &cap()).unwrap().function;
    let t = SkewProduct::new(alpha.to_f64(), f).unwrap();
    for n in [5, 10, 20] {
        let r = complexity_report(&t, n, 0.1, 256).unwrap();
        assert!(r.span_verified);
        assert!(r.sep_construct as f64 >= r.bound_lower - 1.0);
        assert!(r.span_construct as f64 <= r.bound_upper);
        assert!(r.sep_greedy <= r.span_construct);
    }
}

#[test]
fn badly_approximable_alpha_has_no_resonances() {
    let r = find_nk(&Alpha::golden(), 3, &cap()).unwrap();
    assert!(r.exhausted && r.is_empty());
    assert!(matches!(r.require_complete(), Err(Error::Exhausted { .. })));
}

#[test]
fn coboundary_reconstruction() {
    let alpha = Alpha::golden();
    let n = BigUint::from(5u32);
    let a = alpha.small_divisor(&n) * 0.3;
    let f = FlFunction::fourier(
        -1,
        FourierSeries::new(vec![FourierTerm::new(n, a).unwrap()])
            .unwrap()
            .with_constant(0.7),
    );
    let r = coboundary_coeffs(&f, &alpha, &BigUint::from(1000u32)).unwrap();
    assert!((r.b_terms[0].b_abs() - 0.3).abs() < 1e-12);
    assert_eq!(r.c, 0.7);
    let phi = synthesize_phi(&r).unwrap();
    assert!(coboundary_residual(&f, alpha.to_f64(), &phi, r.c, 1 << 12) < 1e-8);
}
