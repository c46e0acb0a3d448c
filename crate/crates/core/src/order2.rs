//! The lacunary counterexample `f(x) = l x + sum_k 2 Re((e^{2 pi i n_k alpha} - 1) e^{2 pi i n_k x})`
//! and the Fourier test for `f(x) = l x + phi(x + alpha) - phi(x) + c`.

use num_bigint::BigUint;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::diophantine::{find_nk, Alpha, ResonantSequence};
use crate::error::{Error, Result};
use crate::funcspace::{FlFunction, FourierSeries, FourierTerm, PeriodicPart};

/// Divisors below this magnitude make the coefficient infinite.
pub const TINY_DIVISOR: f64 = 1e-300;
/// Partial sum at which persistent unit-size coefficients count as
/// divergence.
pub const DIVERGENCE_THRESHOLD: f64 = 6.0;
/// Coefficients at least this large count as unit-size.
pub const UNIT_COEFF: f64 = 0.5;
/// Largest last increment of the partial sums still read as a settled tail.
pub const CAUCHY_TOL: f64 = 1e-4;

#[derive(Clone, Debug, PartialEq)]
pub struct Counterexample {
    pub function: FlFunction,
    pub resonances: ResonantSequence,
}

/// Degree `l` plus Fourier terms at the resonant frequencies `n_k` with
/// coefficients `e^{2 pi i n_k alpha} - 1`.
pub fn build_counterexample(l: i64, alpha: &Alpha, k_max: usize, n_cap: &BigUint) -> Result<Counterexample> {
    if l == 0 {
        return Err(Error::ZeroDegree);
    }
    let resonances = find_nk(alpha, k_max, n_cap)?.require_complete()?;
    let terms = resonances
        .n_k
        .iter()
        .map(|n| FourierTerm::new(n.clone(), alpha.small_divisor(n)))
        .collect::<Result<Vec<_>>>()?;
    let function = FlFunction::fourier(l, FourierSeries::new(terms)?);
    Ok(Counterexample { function, resonances })
}

#[derive(Clone, Debug, PartialEq)]
pub struct BTerm {
    pub n: BigUint,
    /// `a_n / (e^{2 pi i n alpha} - 1)`; infinite when the divisor vanishes
    /// to working precision.
    pub b: Complex64,
}

impl BTerm {
    pub fn b_abs(&self) -> f64 {
        if self.b.re.is_finite() && self.b.im.is_finite() {
            self.b.norm()
        } else {
            f64::INFINITY
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    CoboundaryPlausible,
    Diverges,
    Inconclusive,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::CoboundaryPlausible => "coboundary-plausible",
            Verdict::Diverges => "diverges",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CoboundaryReport {
    pub degree: i64,
    /// Zero mode of `f - l x`.
    pub c: f64,
    pub b_terms: Vec<BTerm>,
    /// `(N, sum_{0 < |n| <= N} |b_n|^2)` after each stored frequency.
    pub partial_sums: Vec<(BigUint, f64)>,
    pub verdict: Verdict,
}

/// `a / d` with the divisor rescaled first, so divisors near the bottom of
/// the double range do not underflow `|d|^2`.
fn divide(a: Complex64, d: Complex64) -> Complex64 {
    let s = d.re.abs().max(d.im.abs());
    (a / s) / (d / s)
}

pub fn coboundary_coeffs(f: &FlFunction, alpha: &Alpha, n_max: &BigUint) -> Result<CoboundaryReport> {
    let PeriodicPart::Fourier(series) = f.periodic() else {
        return Err(Error::NotFourier);
    };
    let mut b_terms = Vec::new();
    let mut partial_sums = Vec::new();
    let mut sum = 0.0;
    for t in series.terms().iter().filter(|t| t.frequency() <= n_max) {
        let d = alpha.small_divisor(t.frequency());
        let b = if d.norm() < TINY_DIVISOR {
            Complex64::new(f64::INFINITY, 0.0)
        } else {
            divide(t.coeff(), d)
        };
        let term = BTerm {
            n: t.frequency().clone(),
            b,
        };
        sum += 2.0 * term.b_abs().powi(2);
        partial_sums.push((term.n.clone(), sum));
        b_terms.push(term);
    }
    let verdict = classify(&b_terms, &partial_sums);
    Ok(CoboundaryReport {
        degree: f.degree(),
        c: series.constant(),
        b_terms,
        partial_sums,
        verdict,
    })
}

fn classify(b_terms: &[BTerm], partial_sums: &[(BigUint, f64)]) -> Verdict {
    if b_terms.iter().any(|t| !t.b_abs().is_finite()) {
        return Verdict::Diverges;
    }
    let (Some(last), Some(&(_, total))) = (b_terms.last(), partial_sums.last()) else {
        return Verdict::CoboundaryPlausible;
    };
    if total >= DIVERGENCE_THRESHOLD && last.b_abs() >= UNIT_COEFF {
        return Verdict::Diverges;
    }
    let settled = match partial_sums {
        [.., (_, prev), (_, cur)] => cur - prev <= CAUCHY_TOL,
        _ => true,
    };
    if settled {
        Verdict::CoboundaryPlausible
    } else {
        Verdict::Inconclusive
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Order2Class {
    NotOrder2,
    CriterionSatisfied,
    Undetermined,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Order2Classification {
    pub class: Order2Class,
    pub label: String,
    pub annotation: String,
}

pub fn order2_verdict(report: &CoboundaryReport) -> Order2Classification {
    let note = "finite Fourier data: divergence of sum |b_n|^2 rules out any L2 (hence continuous) \
                transfer function; plausibility is not a proof, since the criterion needs a \
                continuous phi";
    let (class, label) = match report.verdict {
        Verdict::Diverges => (
            Order2Class::NotOrder2,
            "not order 2 (no continuous/L2 transfer function phi)",
        ),
        Verdict::CoboundaryPlausible => (
            Order2Class::CriterionSatisfied,
            "order-2 criterion satisfied at tested resolution",
        ),
        Verdict::Inconclusive => (Order2Class::Undetermined, "undetermined"),
    };
    Order2Classification {
        class,
        label: label.into(),
        annotation: note.into(),
    }
}

/// The transfer function `phi(x) = sum 2 Re(b_n e^{2 pi i n x})`.
pub fn synthesize_phi(report: &CoboundaryReport) -> Result<FourierSeries> {
    let terms = report
        .b_terms
        .iter()
        .map(|t| FourierTerm::new(t.n.clone(), t.b))
        .collect::<Result<Vec<_>>>()?;
    FourierSeries::new(terms)
}

/// `max |phi(x + alpha) - phi(x) + l x + c - f(x)|` over `grid` nodes of `[0, 1)`.
pub fn coboundary_residual(f: &FlFunction, alpha: f64, phi: &FourierSeries, c: f64, grid: usize) -> f64 {
    let l = f.degree() as f64;
    (0..grid)
        .map(|i| {
            let x = i as f64 / grid as f64;
            (phi.eval(x + alpha) - phi.eval(x) + l * x + c - f.eval_lift(x)).abs()
        })
        .fold(0.0, f64::max)
}
