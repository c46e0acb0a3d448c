//! Finite-horizon evidence for minimality, unique ergodicity, bounded
//! Birkhoff deviations and the regionally proximal relation. Every report
//! is evidence at the tested horizon, never a proof.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;

use crate::error::{Error, Result};
use crate::funcspace::FlFunction;
use crate::numeric::CompensatedSum;
use crate::skew::{birkhoff_lift, birkhoff_prefix, SkewProduct};
use crate::torus::{circle_dist, frac, torus_dist, CirclePoint, TorusPoint};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoverageReport {
    pub cells: usize,
    pub horizon: usize,
    pub coverage_fraction: f64,
    /// First iterate landing in cell `(i, j)`, stored at `i * cells + j`
    /// (`i` indexes x).
    pub first_hit: Vec<Option<usize>>,
    pub evidence_only: bool,
}

impl CoverageReport {
    pub fn hit_count(&self) -> usize {
        self.first_hit.iter().filter(|h| h.is_some()).count()
    }
}

fn cell_index(v: f64, cells: usize) -> usize {
    ((v * cells as f64) as usize).min(cells - 1)
}

/// Marks the `cells x cells` grid cells visited by `T^i start`, `i < horizon`.
pub fn minimality_probe(t: &SkewProduct, start: TorusPoint, cells: usize, horizon: usize) -> Result<CoverageReport> {
    if cells < 2 || horizon < 1 {
        return Err(Error::InvalidArgument(format!(
            "need cells >= 2 and horizon >= 1, got {cells} and {horizon}"
        )));
    }
    let total = cells * cells;
    let mut first_hit = vec![None; total];
    let mut hit = 0;
    let mut y = start.y;
    for i in 0..horizon {
        let x = t.base_point(start.x, i);
        let k = cell_index(x.value(), cells) * cells + cell_index(y.value(), cells);
        if first_hit[k].is_none() {
            first_hit[k] = Some(i);
            hit += 1;
            if hit == total {
                break;
            }
        }
        y = y.shift(t.function().eval_lift(x.value()));
    }
    Ok(CoverageReport {
        cells,
        horizon,
        coverage_fraction: hit as f64 / total as f64,
        first_hit,
        evidence_only: true,
    })
}

/// Test function for Birkhoff averages on the circle.
#[derive(Clone, Debug)]
pub enum Observable<'a> {
    /// The periodic part of an `F_l` function.
    Periodic(&'a FlFunction),
    /// `e^{2 pi i k x}`.
    Mode(i64),
    Constant(f64),
}

impl Observable<'_> {
    fn eval(&self, x: f64) -> Complex64 {
        match self {
            Observable::Periodic(f) => f.eval_periodic(x).into(),
            Observable::Mode(k) => {
                let (s, c) = (TAU * frac(*k as f64 * x)).sin_cos();
                Complex64::new(c, s)
            }
            Observable::Constant(c) => (*c).into(),
        }
    }

    fn mean(&self) -> Complex64 {
        match self {
            Observable::Periodic(f) => f.periodic_mean().into(),
            Observable::Mode(0) => Complex64::new(1.0, 0.0),
            Observable::Mode(_) => Complex64::new(0.0, 0.0),
            Observable::Constant(c) => (*c).into(),
        }
    }
}

/// `(1/n) sum_{i<n} g(x + i alpha) - int g`.
pub fn ergodic_average(g: &Observable<'_>, alpha: f64, x: f64, n: usize) -> Result<Complex64> {
    if n < 1 {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    let rot = SkewProduct::new(alpha, FlFunction::linear(0))?;
    let x0 = CirclePoint::new(x);
    let (mut re, mut im) = (CompensatedSum::new(), CompensatedSum::new());
    for i in 0..n {
        let v = g.eval(rot.base_point(x0, i).value());
        re.add(v.re);
        im.add(v.im);
    }
    Ok(Complex64::new(re.value(), im.value()) / n as f64 - g.mean())
}

/// `(1/n) sum_{i<n} e^{2 pi i k (x + i alpha)}` by the geometric-series
/// formula.
pub fn mode_average_closed_form(k: i64, alpha: f64, x: f64, n: usize) -> Complex64 {
    let phase = |t: f64| {
        let (s, c) = (TAU * t).sin_cos();
        Complex64::new(c, s)
    };
    let ka = frac(k as f64 * alpha);
    if ka == 0.0 {
        return phase(frac(k as f64 * x));
    }
    // (z^n - 1) / (z - 1) with z = e^{2 pi i k alpha}
    let num = phase(frac(n as f64 * ka)) - 1.0;
    let den = phase(ka) - 1.0;
    phase(frac(k as f64 * x)) * num / den / n as f64
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DeviationReport {
    pub x_star: f64,
    pub horizon: usize,
    /// `max_{1 <= n <= horizon} (g_n(x*) - n int g)`.
    pub sup_dev: f64,
    pub inf_dev: f64,
    pub mean: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DeviationSearch {
    /// Scanned point with the smallest `sup_dev`.
    pub best_upper: DeviationReport,
    /// Scanned point with the largest `inf_dev`.
    pub best_lower: DeviationReport,
    pub upper_within_2: bool,
    pub lower_within_2: bool,
    pub grid: usize,
    pub evidence_only: bool,
}

/// `g_n(x) - n int g` for `n = 1..=horizon`.
pub fn deviation_series(g: &FlFunction, alpha: f64, x: f64, horizon: usize) -> Vec<f64> {
    let mean = g.periodic_mean();
    birkhoff_prefix(g, alpha, x, horizon + 1)
        .into_iter()
        .enumerate()
        .skip(1)
        .map(|(n, s)| s - n as f64 * mean)
        .collect()
}

pub fn deviation_at(g: &FlFunction, alpha: f64, x: f64, horizon: usize) -> DeviationReport {
    let s = deviation_series(g, alpha, x, horizon);
    DeviationReport {
        x_star: x,
        horizon,
        sup_dev: s.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        inf_dev: s.iter().copied().fold(f64::INFINITY, f64::min),
        mean: g.periodic_mean(),
    }
}

/// Scans `x = i / grid` for points with small upper or large lower Birkhoff
/// deviations of a degree-zero function.
pub fn deviation_search(g: &FlFunction, alpha: f64, horizon: usize, grid: usize) -> Result<DeviationSearch> {
    if g.degree() != 0 {
        return Err(Error::NonZeroDegree(g.degree()));
    }
    if horizon < 1 || grid < 1 {
        return Err(Error::InvalidArgument(format!(
            "need horizon >= 1 and grid >= 1, got {horizon} and {grid}"
        )));
    }
    let reports: Vec<DeviationReport> = (0..grid)
        .into_par_iter()
        .map(|i| deviation_at(g, alpha, i as f64 / grid as f64, horizon))
        .collect();
    // strict comparisons keep the first, i.e. smallest x, on ties
    let mut up = 0;
    let mut lo = 0;
    for (i, r) in reports.iter().enumerate() {
        if r.sup_dev < reports[up].sup_dev {
            up = i;
        }
        if r.inf_dev > reports[lo].inf_dev {
            lo = i;
        }
    }
    Ok(DeviationSearch {
        upper_within_2: reports[up].sup_dev <= 2.0,
        lower_within_2: reports[lo].inf_dev >= -2.0,
        best_upper: reports[up].clone(),
        best_lower: reports[lo].clone(),
        grid,
        evidence_only: true,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QPairWitness {
    pub x: f64,
    pub y1: f64,
    pub y2: f64,
    pub eps: f64,
    pub delta: f64,
    pub x_prime: f64,
    pub x_zero: f64,
    /// Witness time, or the time of the best attempt when `found` is false.
    pub n_witness: usize,
    /// `d(T^n (x_zero, y1), T^n (x_prime, y2))`, recomputed from orbits.
    pub achieved: f64,
    pub found: bool,
    pub evidence_only: bool,
}

/// Looks for `x_zero`, `x_prime` within `delta` of `x` and `n <= horizon` with
/// `d(T^n (x_zero, y1), T^n (x_prime, y2)) < eps`.
///
/// `x_prime = x + 3 delta / 8` is fixed and `x'' = x - 3 delta / 8`. Once
/// `|f_n(x') - f_n(x'')| > 1` the fiber gap `y1 - y2 + f_n(z) - f_n(x')` sweeps
/// an integer for `z` in `[x'', x']`; the crossing is bracketed on `grid`
/// samples and bisected.
#[allow(clippy::too_many_arguments)]
pub fn qpair_witness(
    t: &SkewProduct,
    x: f64,
    y1: f64,
    y2: f64,
    eps: f64,
    delta: f64,
    horizon: usize,
    grid: usize,
) -> Result<QPairWitness> {
    if eps.is_nan() || eps <= 0.0 || delta.is_nan() || delta <= 0.0 || delta >= eps {
        return Err(Error::InvalidArgument(format!(
            "need 0 < delta < eps, got delta={delta}, eps={eps}"
        )));
    }
    if grid < 1 {
        return Err(Error::InvalidArgument("grid must be at least 1".into()));
    }
    let x = frac(x);
    let mut out = QPairWitness {
        x,
        y1,
        y2,
        eps,
        delta,
        x_prime: x,
        x_zero: x,
        n_witness: 0,
        achieved: torus_dist(TorusPoint::new(x, y1), TorusPoint::new(x, y2)),
        found: false,
        evidence_only: true,
    };
    if out.achieved < eps {
        out.found = true;
        return Ok(out);
    }
    let f = t.function();
    let alpha = t.alpha();
    let xp = x + 3.0 * delta / 8.0;
    let xpp = x - 3.0 * delta / 8.0;
    let fp = birkhoff_prefix(f, alpha, xp, horizon + 1);
    let fpp = birkhoff_prefix(f, alpha, xpp, horizon + 1);

    let verify = |x0: f64, n: usize| {
        let a = t.iterate(TorusPoint::new(x0, y1), n);
        let b = t.iterate(TorusPoint::new(xp, y2), n);
        torus_dist(a, b)
    };
    let mut attempted = false;
    let mut consider = |x0: f64, n: usize, d: f64, out: &mut QPairWitness| {
        if d < out.achieved || !attempted {
            attempted = true;
            out.achieved = d;
            out.n_witness = n;
            out.x_zero = frac(x0);
            out.x_prime = frac(xp);
        }
    };

    for n in 1..=horizon {
        let gap = fp[n] - fpp[n];
        if gap.abs() <= 1.0 {
            continue;
        }
        // h(z) = y1 - y2 + f_n(z) - f_n(x'); h(x') = y1 - y2, h(x'') = h(x') - gap
        let h0 = y1 - y2;
        let h = |z: f64| h0 + birkhoff_lift(f, alpha, z, n) - fp[n];
        let m = if gap > 0.0 {
            (h0 - gap).ceil()
        } else {
            (h0 - gap).floor()
        };
        let below = |v: f64| if gap > 0.0 { v < m } else { v > m };
        // bracket from x'' (where h is past m) toward x'
        let mut prev = xpp;
        let mut bracket = None;
        for j in 1..=grid {
            let z = xpp + (xp - xpp) * j as f64 / grid as f64;
            if below(h(z)) {
                bracket = Some((prev, z));
                break;
            }
            prev = z;
        }
        let Some((mut lo, mut hi)) = bracket else {
            // no sign change at this sampling; the end point still serves
            let d = verify(xpp, n);
            consider(xpp, n, d, &mut out);
            continue;
        };
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            if below(h(mid)) {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        let x0 = 0.5 * (lo + hi);
        let d = verify(x0, n);
        consider(x0, n, d, &mut out);
        if d < eps {
            out.found = true;
            return Ok(out);
        }
    }
    if !attempted {
        // the gap never exceeded one; report the closest approach from x''
        out.x_prime = frac(xp);
        out.x_zero = frac(xpp);
        let mut p = TorusPoint::new(xpp, y1);
        let mut q = TorusPoint::new(xp, y2);
        out.achieved = torus_dist(p, q);
        out.n_witness = 0;
        for n in 1..=horizon {
            p = t.step(p);
            q = t.step(q);
            let d = torus_dist(p, q);
            if d < out.achieved {
                out.achieved = d;
                out.n_witness = n;
            }
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DistalDiagnostic {
    pub base_distance: f64,
    /// `min_{n <= horizon} d(T^n p, T^n q)`.
    pub best: f64,
    pub best_n: usize,
    pub horizon: usize,
    pub evidence_only: bool,
}

/// Closest approach of two orbits. With distinct base points this never
/// drops below the base distance, since the rotation is an isometry.
pub fn distal_diagnostic(t: &SkewProduct, p: TorusPoint, q: TorusPoint, horizon: usize) -> DistalDiagnostic {
    let (mut a, mut b) = (p, q);
    let mut best = torus_dist(a, b);
    let mut best_n = 0;
    for n in 1..=horizon {
        a = t.step(a);
        b = t.step(b);
        let d = torus_dist(a, b);
        if d < best {
            best = d;
            best_n = n;
        }
    }
    DistalDiagnostic {
        base_distance: circle_dist(p.x, q.x),
        best,
        best_n,
        horizon,
        evidence_only: true,
    }
}
