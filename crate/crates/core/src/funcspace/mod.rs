//! Functions of the class `F_l`: continuous lifts `h: R -> R` with
//! `h(x + 1) - h(x) = l`, stored as `l * x` plus a 1-periodic part.
//!
//! Two concrete periodic parts are supported: finite real Fourier series
//! (positive frequencies only, conjugate symmetry implied) and piecewise
//! linear interpolants with wrap-around.

pub(crate) mod analysis;
mod io;

pub use analysis::{
    jordan, modulus, variation, variation_refined, JordanDecomposition, ModulusEstimate, VariationEstimate,
};
pub use io::{FunctionFile, JsonBigUint, PeriodicSpec, TermSpec};

use std::f64::consts::TAU;

use num_bigint::BigUint;
use num_complex::Complex64;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::torus::frac;

/// One Fourier mode `2 Re(coeff * e^{2 pi i n x})` with `n >= 1`.
///
/// Frequencies may exceed 64 bits (resonant frequencies of Liouville-type
/// rotation numbers do); the phase `n x mod 1` is evaluated exactly for the
/// binary value of `x`.
#[derive(Clone, Debug, PartialEq)]
pub struct FourierTerm {
    n: BigUint,
    low: u64,
    coeff: Complex64,
}

impl FourierTerm {
    pub fn new(n: BigUint, coeff: Complex64) -> Result<Self> {
        if n.is_zero() {
            return Err(Error::InvalidArgument("Fourier frequencies must be positive".into()));
        }
        if !(coeff.re.is_finite() && coeff.im.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "non-finite Fourier coefficient at n = {n}"
            )));
        }
        let low = n.iter_u64_digits().next().unwrap_or(0);
        Ok(FourierTerm { n, low, coeff })
    }

    pub fn frequency(&self) -> &BigUint {
        &self.n
    }

    pub fn frequency_f64(&self) -> f64 {
        self.n.to_f64().unwrap_or(f64::INFINITY)
    }

    pub fn coeff(&self) -> Complex64 {
        self.coeff
    }

    /// `n * x mod 1` computed exactly from the binary expansion of `x`, then
    /// rounded once.
    pub fn phase(&self, x: f64) -> f64 {
        exact_phase(&self.n, self.low, x)
    }

    #[inline]
    fn eval(&self, x: f64) -> f64 {
        let (s, c) = (TAU * self.phase(x)).sin_cos();
        2.0 * (self.coeff.re * c - self.coeff.im * s)
    }
}

fn exact_phase(n: &BigUint, low: u64, x: f64) -> f64 {
    let x = frac(x);
    if x == 0.0 {
        return 0.0;
    }
    let bits = x.to_bits();
    let biased = ((bits >> 52) & 0x7ff) as i64;
    let frac_bits = bits & ((1u64 << 52) - 1);
    let (mut m, mut e) = if biased == 0 {
        (frac_bits, -1074i64)
    } else {
        (frac_bits | (1u64 << 52), biased - 1075)
    };
    let tz = m.trailing_zeros() as i64;
    m >>= tz;
    e += tz;
    if e >= 0 {
        return 0.0;
    }
    let k = (-e) as u32;
    if k <= 64 {
        let prod = (low as u128).wrapping_mul(m as u128);
        let masked = prod & ((1u128 << k) - 1);
        masked as f64 / 2f64.powi(k as i32)
    } else {
        let modulus = BigUint::from(1u32) << k;
        let r = (n * BigUint::from(m)) % &modulus;
        let r = num_rational::BigRational::new(r.into(), modulus.into());
        crate::numeric::ratio_to_f64(&r)
    }
}

/// Finite real trigonometric polynomial
/// `c0 + sum_terms 2 Re(coeff e^{2 pi i n x})`.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct FourierSeries {
    terms: Vec<FourierTerm>,
    constant: f64,
}

impl FourierSeries {
    /// Builds a series from terms; frequencies must be distinct and are
    /// sorted ascending.
    pub fn new(mut terms: Vec<FourierTerm>) -> Result<Self> {
        terms.sort_by(|a, b| a.n.cmp(&b.n));
        if terms.windows(2).any(|w| w[0].n == w[1].n) {
            return Err(Error::InvalidArgument("duplicate Fourier frequency".into()));
        }
        Ok(FourierSeries { terms, constant: 0.0 })
    }

    pub fn with_constant(mut self, c0: f64) -> Self {
        self.constant = c0;
        self
    }

    pub fn terms(&self) -> &[FourierTerm] {
        &self.terms
    }

    /// Zero mode.
    pub fn constant(&self) -> f64 {
        self.constant
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.constant + self.terms.iter().map(|t| t.eval(x)).sum::<f64>()
    }

    /// Same value as [`eval`](Self::eval), computed as the real part of the
    /// full complex sum over `n` and `-n`.
    pub fn eval_complex(&self, x: f64) -> Complex64 {
        let mut acc = Complex64::new(self.constant, 0.0);
        for t in &self.terms {
            let e = Complex64::from_polar(1.0, TAU * t.phase(x));
            acc += t.coeff * e + t.coeff.conj() * e.conj();
        }
        acc
    }

    /// `sum 4 pi n |coeff|`, an upper bound for the sup of the derivative.
    pub fn derivative_bound(&self) -> f64 {
        self.terms
            .iter()
            .map(|t| 2.0 * TAU * t.frequency_f64() * t.coeff.norm())
            .sum()
    }
}

/// Piecewise-linear 1-periodic function through `(x_i, y_i)`, closed by
/// the wrap segment from the last knot to the first knot shifted by one.
#[derive(Clone, Debug, PartialEq)]
pub struct PiecewiseLinear {
    knots: Vec<(f64, f64)>,
}

impl PiecewiseLinear {
    pub fn new(knots: Vec<(f64, f64)>) -> Result<Self> {
        if knots.is_empty() {
            return Err(Error::InvalidArgument("at least one knot required".into()));
        }
        for &(x, y) in &knots {
            if !(0.0..1.0).contains(&x) || !y.is_finite() {
                return Err(Error::InvalidArgument(format!("knot ({x}, {y}) outside [0,1) x R")));
            }
        }
        if knots.windows(2).any(|w| w[0].0 >= w[1].0) {
            return Err(Error::InvalidArgument(
                "knot abscissae must be strictly increasing".into(),
            ));
        }
        Ok(PiecewiseLinear { knots })
    }

    pub fn knots(&self) -> &[(f64, f64)] {
        &self.knots
    }

    fn segments(&self) -> impl Iterator<Item = ((f64, f64), (f64, f64))> + '_ {
        let n = self.knots.len();
        (0..n).map(move |i| {
            let a = self.knots[i];
            let b = if i + 1 < n {
                self.knots[i + 1]
            } else {
                (self.knots[0].0 + 1.0, self.knots[0].1)
            };
            (a, b)
        })
    }

    pub fn eval(&self, x: f64) -> f64 {
        let t = frac(x);
        let k = &self.knots;
        if k.len() == 1 {
            return k[0].1;
        }
        let idx = k.partition_point(|&(kx, _)| kx <= t);
        let (a, b) = if idx == 0 {
            let last = k[k.len() - 1];
            ((last.0 - 1.0, last.1), k[0])
        } else if idx == k.len() {
            (k[k.len() - 1], (k[0].0 + 1.0, k[0].1))
        } else {
            (k[idx - 1], k[idx])
        };
        let w = (t - a.0) / (b.0 - a.0);
        a.1 + w * (b.1 - a.1)
    }

    /// Exact integral over one period.
    pub fn mean(&self) -> f64 {
        self.segments().map(|(a, b)| 0.5 * (b.0 - a.0) * (a.1 + b.1)).sum()
    }

    /// Largest absolute slope.
    pub fn max_slope(&self) -> f64 {
        if self.knots.len() == 1 {
            return 0.0;
        }
        self.segments()
            .map(|(a, b)| ((b.1 - a.1) / (b.0 - a.0)).abs())
            .fold(0.0, f64::max)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum PeriodicPart {
    Fourier(FourierSeries),
    PiecewiseLinear(PiecewiseLinear),
}

impl PeriodicPart {
    #[inline]
    pub fn eval(&self, x: f64) -> f64 {
        match self {
            PeriodicPart::Fourier(s) => s.eval(x),
            PeriodicPart::PiecewiseLinear(p) => p.eval(x),
        }
    }

    /// Integral over one period.
    pub fn mean(&self) -> f64 {
        match self {
            PeriodicPart::Fourier(s) => s.constant(),
            PeriodicPart::PiecewiseLinear(p) => p.mean(),
        }
    }
}

/// A member of `F_l`: `f(x) = l x + p(x)` with `p` 1-periodic.
#[derive(Clone, Debug, PartialEq)]
pub struct FlFunction {
    degree: i64,
    periodic: PeriodicPart,
    derivative_bound: Option<f64>,
}

impl FlFunction {
    pub fn new(degree: i64, periodic: PeriodicPart) -> Self {
        let derivative_bound = match &periodic {
            PeriodicPart::Fourier(s) => Some(degree.unsigned_abs() as f64 + s.derivative_bound()),
            PeriodicPart::PiecewiseLinear(p) => Some(degree.unsigned_abs() as f64 + p.max_slope()),
        };
        FlFunction {
            degree,
            periodic,
            derivative_bound,
        }
    }

    /// `f(x) = l x`.
    pub fn linear(degree: i64) -> Self {
        FlFunction::new(degree, PeriodicPart::Fourier(FourierSeries::default()))
    }

    pub fn fourier(degree: i64, series: FourierSeries) -> Self {
        FlFunction::new(degree, PeriodicPart::Fourier(series))
    }

    pub fn piecewise_linear(degree: i64, knots: Vec<(f64, f64)>) -> Result<Self> {
        Ok(FlFunction::new(
            degree,
            PeriodicPart::PiecewiseLinear(PiecewiseLinear::new(knots)?),
        ))
    }

    /// Overrides the stored bound on `sup |f'|`.
    pub fn with_derivative_bound(mut self, bound: Option<f64>) -> Self {
        self.derivative_bound = bound;
        self
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn periodic(&self) -> &PeriodicPart {
        &self.periodic
    }

    pub fn derivative_bound(&self) -> Option<f64> {
        self.derivative_bound
    }

    /// The lift `l x + p(x)`.
    #[inline]
    pub fn eval_lift(&self, x: f64) -> f64 {
        self.degree as f64 * x + self.periodic.eval(x)
    }

    /// The periodic part `p(x) = f(x) - l x`.
    #[inline]
    pub fn eval_periodic(&self, x: f64) -> f64 {
        self.periodic.eval(x)
    }

    /// `int_0^1 p(x) dx`.
    pub fn periodic_mean(&self) -> f64 {
        self.periodic.mean()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn zigzag(l: i64) -> FlFunction {
        FlFunction::piecewise_linear(l, vec![(0.0, 0.0), (0.5, 1.0)]).unwrap()
    }

    fn sample_series() -> FourierSeries {
        FourierSeries::new(vec![
            FourierTerm::new(3u32.into(), Complex64::new(0.1, -0.2)).unwrap(),
            FourierTerm::new(1u32.into(), Complex64::new(0.25, 0.05)).unwrap(),
            FourierTerm::new(BigUint::from(1u32) << 90u32, Complex64::new(1e-3, 0.0)).unwrap(),
        ])
        .unwrap()
    }

    #[test]
    fn lift_examples() {
        assert_eq!(FlFunction::linear(1).eval_lift(2.25), 2.25);
        assert!((zigzag(0).eval_lift(0.25) - 0.5).abs() < 1e-15);
        assert!((zigzag(0).eval_lift(0.75) - 0.5).abs() < 1e-15);
        let f = FlFunction::fourier(3, sample_series());
        assert!((f.eval_lift(1.3) - f.eval_lift(0.3) - 3.0).abs() < 1e-10);
    }

    #[test]
    fn periodicity_on_random_points() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let fs = [
            FlFunction::fourier(2, sample_series()),
            FlFunction::fourier(-1, sample_series()),
            zigzag(5),
            FlFunction::piecewise_linear(-3, vec![(0.1, 0.3), (0.4, -1.0), (0.9, 2.0)]).unwrap(),
        ];
        for f in &fs {
            for _ in 0..10_000 {
                let x: f64 = rng.gen_range(-2.0..2.0);
                let d = f.eval_lift(x + 1.0) - f.eval_lift(x) - f.degree() as f64;
                // exactness is limited only by the rounding of x + 1
                assert!(d.abs() < 1e-10, "{d}");
            }
        }
    }

    #[test]
    fn fourier_evaluation_orders_agree() {
        let s = sample_series();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..1000 {
            let x: f64 = rng.gen();
            let z = s.eval_complex(x);
            assert!((z.re - s.eval(x)).abs() < 1e-12);
            assert!(z.im.abs() < 1e-12);
        }
    }

    #[test]
    fn frequencies_sorted_and_distinct() {
        let s = sample_series();
        let ns: Vec<_> = s.terms().iter().map(|t| t.frequency().clone()).collect();
        assert!(ns.windows(2).all(|w| w[0] < w[1]));
        let dup = FourierSeries::new(vec![
            FourierTerm::new(2u32.into(), Complex64::new(1.0, 0.0)).unwrap(),
            FourierTerm::new(2u32.into(), Complex64::new(1.0, 0.0)).unwrap(),
        ]);
        assert!(dup.is_err());
        assert!(FourierTerm::new(0u32.into(), Complex64::new(1.0, 0.0)).is_err());
    }

    #[test]
    fn exact_phase_matches_direct_product_for_small_frequencies() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..1000 {
            let n: u32 = rng.gen_range(1..1000);
            let x: f64 = rng.gen();
            let t = FourierTerm::new(n.into(), Complex64::new(1.0, 0.0)).unwrap();
            let direct = (n as f64 * x).fract();
            let d = (t.phase(x) - direct).abs();
            assert!(d.min(1.0 - d) < 1e-12);
        }
    }

    #[test]
    fn exact_phase_for_huge_frequencies() {
        // 2^90 * 2^-3 is an integer; (2^90 + 1) * 2^-3 has phase 1/8
        let t = FourierTerm::new(BigUint::from(1u32) << 90u32, Complex64::new(1.0, 0.0)).unwrap();
        assert_eq!(t.phase(0.125), 0.0);
        let t = FourierTerm::new((BigUint::from(1u32) << 90u32) + 1u32, Complex64::ONE).unwrap();
        assert_eq!(t.phase(0.125), 0.125);
        // slow path: x = 2^-70
        let x = 2f64.powi(-70);
        let t = FourierTerm::new((BigUint::from(1u32) << 69u32) + 1u32, Complex64::ONE).unwrap();
        assert_eq!(t.phase(x), 0.5 + x);
    }

    #[test]
    fn piecewise_mean_and_slope() {
        let z = zigzag(0);
        assert!((z.periodic_mean() - 0.5).abs() < 1e-15);
        assert_eq!(z.derivative_bound(), Some(2.0));
        let single = FlFunction::piecewise_linear(0, vec![(0.3, 4.0)]).unwrap();
        assert_eq!(single.eval_lift(0.9), 4.0);
        assert_eq!(single.periodic_mean(), 4.0);
        assert!(FlFunction::piecewise_linear(0, vec![]).is_err());
        assert!(FlFunction::piecewise_linear(0, vec![(0.5, 0.0), (0.2, 1.0)]).is_err());
        assert!(FlFunction::piecewise_linear(0, vec![(1.0, 0.0)]).is_err());
    }

    #[test]
    fn fourier_derivative_bound_formula() {
        let s = FourierSeries::new(vec![FourierTerm::new(2u32.into(), Complex64::new(0.3, 0.4)).unwrap()]).unwrap();
        let f = FlFunction::fourier(-2, s);
        let expected = 2.0 + 4.0 * std::f64::consts::PI * 2.0 * 0.5;
        assert!((f.derivative_bound().unwrap() - expected).abs() < 1e-12);
    }
}
