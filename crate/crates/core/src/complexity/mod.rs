//! Topological complexity: certified separated and spanning witnesses, the
//! closed-form linear bounds, and linear-growth fitting.

mod construct;
mod greedy;

pub use construct::{
    eps_star, separated_construct, spanning_construct, PartitionPlan, SeparatedConstruction, SpanningConstruction,
};
pub use greedy::{certify_separated, greedy_separated, SeparatedSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::funcspace::{modulus, variation_refined, FlFunction};
use crate::skew::SkewProduct;

/// Grid for the `eta(2 eps)` estimate inside [`bound_formulas`]; a multiple
/// of 10^3 so decimal eps land on nodes.
pub const BOUND_MODULUS_GRID: usize = 64_000;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundFormulas {
    pub bound_lower: f64,
    pub bound_upper: f64,
    pub c1: f64,
    pub c2: f64,
    /// `eta(2 eps)` estimate.
    pub eta_2eps: f64,
    /// Padded variation estimate.
    pub variation: f64,
    pub modulus_grid: usize,
}

/// `c1 = |l| / (3 (2 eps + eta(2 eps)))`, `c2 = 20 (V + 1) / eps^2` and the
/// bounds `n c1 <= r(n, eps) <= n c2`.
pub fn bound_formulas(f: &FlFunction, n: usize, eps: f64) -> Result<BoundFormulas> {
    if !eps.is_finite() || eps <= 0.0 {
        return Err(Error::InvalidArgument(format!("eps must be positive, got {eps}")));
    }
    let grid = BOUND_MODULUS_GRID.max((2.0 / eps).ceil() as usize);
    let eta = modulus(f, 2.0 * eps, grid)?.eta;
    let v = variation_refined(f).padded();
    let c1 = f.degree().unsigned_abs() as f64 / (3.0 * (2.0 * eps + eta));
    let c2 = 20.0 * (v + 1.0) / (eps * eps);
    Ok(BoundFormulas {
        bound_lower: n as f64 * c1,
        bound_upper: n as f64 * c2,
        c1,
        c2,
        eta_2eps: eta,
        variation: v,
        modulus_grid: grid,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GrowthFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
}

/// Least-squares line through `(n, count)`.
pub fn growth_fit(series: &[(f64, f64)]) -> Result<GrowthFit> {
    let mut xs: Vec<f64> = series.iter().map(|p| p.0).collect();
    xs.sort_by(f64::total_cmp);
    xs.dedup();
    if xs.len() < 3 {
        return Err(Error::InvalidArgument(format!(
            "growth fit needs at least 3 distinct n, got {}",
            xs.len()
        )));
    }
    let k = series.len() as f64;
    let mx = series.iter().map(|p| p.0).sum::<f64>() / k;
    let my = series.iter().map(|p| p.1).sum::<f64>() / k;
    let sxx: f64 = series.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = series.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let syy: f64 = series.iter().map(|p| (p.1 - my).powi(2)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let sse: f64 = series.iter().map(|p| (p.1 - intercept - slope * p.0).powi(2)).sum();
    // a constant series is fitted exactly by the flat line
    let r_squared = if syy == 0.0 { 1.0 } else { 1.0 - sse / syy };
    Ok(GrowthFit {
        slope,
        intercept,
        r_squared,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComplexityReport {
    pub n: usize,
    pub eps: f64,
    pub sep_greedy: usize,
    pub sep_construct: usize,
    pub span_construct: usize,
    pub span_verified: bool,
    /// `n |l| / (3 (eps + eta(eps)))`.
    pub bound_lower: f64,
    /// `20 (V + 1) n / eps^2`.
    pub bound_upper: f64,
    pub eta: f64,
    pub variation: f64,
}

/// All witnesses and bounds at one `(n, eps)`, on the given lattice.
pub fn complexity_report(t: &SkewProduct, n: usize, eps: f64, grid: usize) -> Result<ComplexityReport> {
    let greedy = greedy_separated(t, n, eps, grid)?;
    let sep = separated_construct(t, n, eps, grid)?;
    let span = spanning_construct(t, n, eps, grid)?;
    let l = t.function().degree().unsigned_abs() as f64;
    let variation = variation_refined(t.function()).padded();
    Ok(ComplexityReport {
        n,
        eps,
        sep_greedy: greedy.count(),
        sep_construct: sep.count(),
        span_construct: span.count,
        span_verified: span.verified,
        bound_lower: n as f64 * l / (3.0 * (eps + sep.eta)),
        bound_upper: 20.0 * (variation + 1.0) * n as f64 / (eps * eps),
        eta: sep.eta,
        variation,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bound_examples() {
        let f = FlFunction::linear(1);
        let b = bound_formulas(&f, 100, 0.1).unwrap();
        assert!((b.eta_2eps - 0.2).abs() < 1e-12);
        assert!((b.bound_lower - 100.0 / 1.2).abs() < 1e-9);
        assert!((b.bound_upper - 400_000.0).abs() <= 1e-3 * 400_000.0);
        let small = bound_formulas(&f, 1, 0.01).unwrap();
        assert!((small.c1 / b.c1 - 10.0).abs() < 1e-9);
        let zero = bound_formulas(&f, 0, 0.1).unwrap();
        assert_eq!((zero.bound_lower, zero.bound_upper), (0.0, 0.0));
        assert!(bound_formulas(&f, 1, 0.0).is_err());
    }

    #[test]
    fn fit_examples() {
        let g = growth_fit(&[(10.0, 30.0), (20.0, 60.0), (30.0, 90.0)]).unwrap();
        assert!((g.slope - 3.0).abs() < 1e-12 && g.intercept.abs() < 1e-9);
        assert!((g.r_squared - 1.0).abs() < 1e-12);
        let g = growth_fit(&[(10.0, 5.0), (20.0, 5.0), (30.0, 5.0)]).unwrap();
        assert_eq!(g.slope, 0.0);
        assert!(growth_fit(&[(10.0, 5.0), (10.0, 6.0), (20.0, 5.0)]).is_err());
    }

    #[test]
    fn report_is_consistent() {
        let t = SkewProduct::new(0.618_033_988_749_894_8, FlFunction::linear(1)).unwrap();
        let r = complexity_report(&t, 10, 0.1, 256).unwrap();
        assert!(r.sep_greedy >= 1 && r.span_construct >= 1 && r.span_verified);
        assert!(r.sep_construct as f64 + 1.0 >= r.bound_lower);
        assert!((r.span_construct as f64) <= r.bound_upper);
    }
}
