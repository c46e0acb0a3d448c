//! The two explicit constructions behind the linear complexity bounds:
//! crossing points of `f_n` (a separated set) and a product partition driven
//! by the Jordan decomposition (a spanning set).

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::funcspace::{jordan, modulus, variation_refined, FlFunction};
use crate::skew::{birkhoff_lift, birkhoff_prefix, SkewProduct};
use crate::torus::{dist_to_integer, frac, TorusPoint};

const BISECTION_STEPS: usize = 60;
const MIN_JORDAN_GRID: usize = 1 << 14;
const MAX_SCAN_GRID: usize = 1 << 22;
/// Scan points per smallest admissible partition interval.
const SCAN_RESOLUTION: f64 = 16.0;

fn check_common(n: usize, eps: f64) -> Result<()> {
    if n < 1 {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    if !eps.is_finite() || eps <= 0.0 {
        return Err(Error::InvalidArgument(format!("eps must be positive, got {eps}")));
    }
    Ok(())
}

/// Sampled Lipschitz constant of the lift on a fine grid, or the analytic
/// derivative bound when one is stored.
fn slope_bound(f: &FlFunction) -> f64 {
    if let Some(b) = f.derivative_bound() {
        return b;
    }
    let g = MIN_JORDAN_GRID;
    let h = 1.0 / g as f64;
    (0..g)
        .map(|i| (f.eval_lift((i + 1) as f64 * h) - f.eval_lift(i as f64 * h)).abs() * g as f64)
        .fold(0.0, f64::max)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeparatedConstruction {
    /// Verified crossing points `x_1 < x_2 < ...`, each paired with `y = 0`.
    pub xs: Vec<f64>,
    /// Crossings emitted before verification.
    pub emitted: usize,
    /// Left end of the half of the circle that was walked.
    pub start: f64,
    pub eta: f64,
}

impl SeparatedConstruction {
    pub fn count(&self) -> usize {
        self.xs.len()
    }

    pub fn points(&self) -> Vec<TorusPoint> {
        self.xs.iter().map(|&x| TorusPoint::new(x, 0.0)).collect()
    }
}

/// Walks the half of `[0, 1]` on which `f_n` grows by at least `n|l|/2`,
/// emitting `x_{i+1}` where `|f_n(x) - f_n(x_i)|` first reaches `eta + eps`,
/// then keeps the emitted points `(x_i, 0)`, `i >= 1`, that are pairwise
/// `d_n`-separated.
pub fn separated_construct(t: &SkewProduct, n: usize, eps: f64, grid: usize) -> Result<SeparatedConstruction> {
    check_common(n, eps)?;
    let f = t.function();
    if f.degree() == 0 {
        return Err(Error::ZeroDegree);
    }
    let eta = modulus(f, eps, grid)?.eta;
    if eps + eta >= 1.0 / 3.0 {
        return Err(Error::EpsilonNotSmallEnough { eps, eta });
    }
    let alpha = t.alpha();
    let fnx = |x: f64| birkhoff_lift(f, alpha, x, n);
    let (f0, fh, f1) = (fnx(0.0), fnx(0.5), fnx(1.0));
    let start = if (fh - f0).abs() >= (f1 - fh).abs() { 0.0 } else { 0.5 };
    let end = start + 0.5;

    let threshold = eta + eps;
    let h = (1.0 / grid as f64).min(threshold / (8.0 * n as f64 * slope_bound(f).max(1e-12)));
    let mut emitted = Vec::new();
    let mut base_val = fnx(start);
    let mut x = start;
    loop {
        let next = (x + h).min(end);
        if (fnx(next) - base_val).abs() >= threshold {
            // bisect the first crossing inside (x, next]
            let (mut lo, mut hi) = (x, next);
            for _ in 0..BISECTION_STEPS {
                let mid = 0.5 * (lo + hi);
                if (fnx(mid) - base_val).abs() >= threshold {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            emitted.push(hi);
            base_val = fnx(hi);
            x = hi;
        } else {
            if next >= end {
                break;
            }
            x = next;
        }
    }

    let mut kept: Vec<TorusPoint> = Vec::new();
    let mut xs = Vec::new();
    for &xi in &emitted {
        let p = TorusPoint::new(xi, 0.0);
        if kept.par_iter().all(|&q| t.separated(p, q, n, eps)) {
            kept.push(p);
            xs.push(xi);
        }
    }
    Ok(SeparatedConstruction {
        xs,
        emitted: emitted.len(),
        start,
        eta,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PartitionPlan {
    /// Join of the uniform cuts and the Jordan-driven cuts; starts at 0 and
    /// ends at 1.
    pub x_cuts: Vec<f64>,
    pub y_cuts: Vec<f64>,
    /// Intervals of the uniform base partition.
    pub m: usize,
    /// Intervals of the partition driven by `g_n`, `h_n`.
    pub r: usize,
    /// Intervals of the joined base partition.
    pub p: usize,
    /// Intervals of the fiber partition.
    pub q: usize,
    /// Resolution of the walk that placed the Jordan-driven cuts.
    pub scan_grid: usize,
    /// Cuts that had to be placed after a single scan step already exceeded
    /// the increment budget.
    pub forced_cuts: usize,
}

impl PartitionPlan {
    pub fn cells(&self) -> usize {
        self.p * self.q
    }

    fn x_interval(&self, x: f64) -> usize {
        (self.x_cuts.partition_point(|&c| c <= x).max(1) - 1).min(self.p - 1)
    }

    fn y_interval(&self, y: f64) -> usize {
        ((y * self.q as f64).floor() as usize).min(self.q - 1)
    }

    fn x_center(&self, i: usize) -> f64 {
        0.5 * (self.x_cuts[i] + self.x_cuts[i + 1])
    }

    fn y_center(&self, j: usize) -> f64 {
        (j as f64 + 0.5) / self.q as f64
    }

    /// Cell-center representatives, x-major.
    pub fn representatives(&self) -> impl Iterator<Item = TorusPoint> + '_ {
        (0..self.p).flat_map(move |i| (0..self.q).map(move |j| TorusPoint::new(self.x_center(i), self.y_center(j))))
    }

    /// The representative of the cell containing `p`.
    pub fn representative_of(&self, p: TorusPoint) -> TorusPoint {
        let (i, j) = (self.x_interval(p.x.value()), self.y_interval(p.y.value()));
        TorusPoint::new(self.x_center(i), self.y_center(j))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpanningConstruction {
    pub count: usize,
    pub plan: PartitionPlan,
    /// Every point of the audit lattice is within `d_n <= eps` of a
    /// representative.
    pub verified: bool,
    /// First audit point (column-major order) that no nearby representative
    /// covers.
    pub offending: Option<TorusPoint>,
    pub audit_grid: usize,
    /// Largest eps (at most 1/2) for which the a priori cell count of this
    /// construction stays below the closed-form upper bound.
    pub eps_star: f64,
    /// Padded total variation used for `eps_star`.
    pub variation: f64,
}

/// A priori cell count of the construction: uniform cuts, at most
/// `nV / (eps/4 - step)` Jordan cuts, and the fiber cuts.
fn a_priori_cells(v: f64, n: f64, eps: f64) -> f64 {
    let m = (2.0 / eps).floor() + 1.0;
    let r = n * v / (eps / 4.0 - eps / (4.0 * SCAN_RESOLUTION)) + 1.0;
    let q = (3.0 / eps).floor() + 1.0;
    (m + r) * q
}

/// Largest eps on the ladder `0.5 * 0.99^k` below which the a priori count
/// never exceeds `20 (V + 1) n / eps^2` (checked at `n = 1` and in the
/// large-n limit, the two extremes of an affine-in-n comparison).
pub fn eps_star(variation: f64) -> f64 {
    let ok = |eps: f64| {
        let formula = 20.0 * (variation + 1.0) / (eps * eps);
        let at_one = a_priori_cells(variation, 1.0, eps) <= formula;
        let slope = a_priori_cells(variation, 2.0, eps) - a_priori_cells(variation, 1.0, eps);
        at_one && slope <= formula
    };
    let ladder: Vec<f64> = (0..1000).map(|k| 0.5 * 0.99f64.powi(k)).collect();
    // the answer is the top of the longest run of passing values ending at
    // the smallest ladder entry
    let mut best = 0.0;
    for &e in ladder.iter().rev() {
        if !ok(e) {
            break;
        }
        best = e;
    }
    best
}

/// Product-partition spanning set: uniform base cuts with gaps `<= eps/2`, joined
/// with cuts keeping every increment of `g_n` and `h_n` within `eps/4`, crossed
/// with fiber cuts of gap `< eps/3`. The representatives (cell centers) are
/// audited on a `(4 grid)^2` lattice.
pub fn spanning_construct(t: &SkewProduct, n: usize, eps: f64, grid: usize) -> Result<SpanningConstruction> {
    check_common(n, eps)?;
    if eps >= 0.5 {
        return Err(Error::InvalidArgument(format!("eps must be below 1/2, got {eps}")));
    }
    if grid < 2 {
        return Err(Error::InvalidArgument(format!("grid {grid} < 2")));
    }
    let f = t.function();
    let alpha = t.alpha();
    let v = variation_refined(f);

    let m = (2.0 / eps).floor() as usize + 1;
    let jd = jordan(f, grid.max(MIN_JORDAN_GRID))?;
    let jg = jd.grid() as f64;
    let steepest = jd
        .g_samples
        .windows(2)
        .chain(jd.h_samples.windows(2))
        .map(|w| (w[1] - w[0]) * jg)
        .fold(0.0, f64::max);
    let needed = (SCAN_RESOLUTION * 4.0 * n as f64 * steepest.max(1e-9) / eps).ceil() as usize;
    let scan_grid = needed
        .next_power_of_two()
        .clamp(grid.next_power_of_two(), MAX_SCAN_GRID);

    let sums: Vec<(f64, f64)> = (0..=scan_grid)
        .into_par_iter()
        .map(|j| {
            let x = j as f64 / scan_grid as f64;
            (0..n).fold((0.0, 0.0), |(g, h), i| {
                let xi = x + i as f64 * alpha;
                (g + jd.g_at(xi), h + jd.h_at(xi))
            })
        })
        .collect();
    let budget = eps / 4.0;
    let mut jordan_cuts = vec![0usize];
    let mut forced = 0;
    let mut a = 0usize;
    for j in 1..=scan_grid {
        let (g0, h0) = sums[a];
        let (gj, hj) = sums[j];
        if gj - g0 > budget || hj - h0 > budget {
            let cut = if j - 1 > a {
                j - 1
            } else {
                forced += 1;
                j
            };
            jordan_cuts.push(cut);
            a = cut;
        }
    }
    if *jordan_cuts.last().unwrap() != scan_grid {
        jordan_cuts.push(scan_grid);
    }
    let r = jordan_cuts.len() - 1;

    let mut x_cuts: Vec<f64> = (0..=m).map(|i| i as f64 / m as f64).collect();
    x_cuts.extend(jordan_cuts.iter().map(|&j| j as f64 / scan_grid as f64));
    x_cuts.sort_by(f64::total_cmp);
    x_cuts.dedup_by(|b, a| (*b - *a).abs() < 1e-15);
    let p = x_cuts.len() - 1;
    let q = (3.0 / eps).floor() as usize + 1;
    let y_cuts = (0..=q).map(|j| j as f64 / q as f64).collect();
    let plan = PartitionPlan {
        x_cuts,
        y_cuts,
        m,
        r,
        p,
        q,
        scan_grid,
        forced_cuts: forced,
    };

    let audit_grid = 4 * grid;
    let offending = audit(t, &plan, n, eps, audit_grid);
    Ok(SpanningConstruction {
        count: plan.cells(),
        verified: offending.is_none(),
        offending,
        audit_grid,
        eps_star: eps_star(v.padded()),
        variation: v.padded(),
        plan,
    })
}

/// Checks every audit point against its own cell representative through the
/// range of `f_i(x) - f_i(x_c)`, falling back to direct `d_n` against the
/// representatives of neighbouring cells.
fn audit(t: &SkewProduct, plan: &PartitionPlan, n: usize, eps: f64, audit_grid: usize) -> Option<TorusPoint> {
    let f = t.function();
    let alpha = t.alpha();
    let step = 1.0 / audit_grid as f64;
    (0..audit_grid).into_par_iter().find_map_first(|a| {
        let x = a as f64 * step;
        let i = plan.x_interval(x);
        let xc = plan.x_center(i);
        let base_ok = dist_to_integer(x - xc) <= eps;
        let fx = birkhoff_prefix(f, alpha, x, n);
        let fc = birkhoff_prefix(f, alpha, xc, n);
        let (dmin, dmax) = fx
            .iter()
            .zip(&fc)
            .map(|(u, v)| u - v)
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), d| (lo.min(d), hi.max(d)));
        (0..audit_grid).find_map(|b| {
            let y = b as f64 * step;
            let j = plan.y_interval(y);
            let off = y - plan.y_center(j);
            if base_ok && (off + dmin).abs().max((off + dmax).abs()) <= eps {
                return None;
            }
            let pt = TorusPoint::new(x, y);
            let covered = neighbours(plan, i, j).any(|rep| t.dn_dist(pt, rep, n) <= eps);
            (!covered).then_some(pt)
        })
    })
}

fn neighbours(plan: &PartitionPlan, i: usize, j: usize) -> impl Iterator<Item = TorusPoint> + '_ {
    let (p, q) = (plan.p, plan.q);
    [p - 1, 0, 1].into_iter().flat_map(move |di| {
        [q - 1, 0, 1].into_iter().map(move |dj| {
            let (ii, jj) = ((i + di) % p, (j + dj) % q);
            TorusPoint::new(frac(plan.x_center(ii)), plan.y_center(jj))
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funcspace::{FourierSeries, FourierTerm};
    use num_complex::Complex64;

    const GOLDEN: f64 = 0.618_033_988_749_894_8;

    fn linear(l: i64) -> SkewProduct {
        SkewProduct::new(GOLDEN, FlFunction::linear(l)).unwrap()
    }

    fn wavy(l: i64) -> SkewProduct {
        let s = FourierSeries::new(vec![
            FourierTerm::new(1u32.into(), Complex64::new(0.1, 0.05)).unwrap(),
            FourierTerm::new(3u32.into(), Complex64::new(-0.02, 0.01)).unwrap(),
        ])
        .unwrap();
        SkewProduct::new(GOLDEN, FlFunction::fourier(l, s)).unwrap()
    }

    #[test]
    fn crossings_for_the_identity_at_n_one() {
        let c = separated_construct(&linear(1), 1, 0.1, 1000).unwrap();
        assert_eq!(c.count(), 2);
        assert!((c.eta - 0.1).abs() < 1e-12);
        assert!((c.xs[0] - 0.2).abs() < 1e-9 && (c.xs[1] - 0.4).abs() < 1e-9);
    }

    #[test]
    fn separated_count_meets_lower_bound() {
        let c = separated_construct(&linear(1), 60, 0.1, 1000).unwrap();
        assert!(c.count() >= 99, "{}", c.count());
        for l in [-2, 1, 3] {
            let t = wavy(l);
            let (n, eps) = (40, 0.03);
            let c = separated_construct(&t, n, eps, 1024).unwrap();
            let bound = n as f64 * l.abs() as f64 / (3.0 * (eps + c.eta));
            assert!(c.count() as f64 + 1.0 >= bound, "l={l}: {} vs {bound}", c.count());
            let pts = c.points();
            for a in 0..pts.len() {
                for b in a + 1..pts.len() {
                    assert!(t.dn_dist(pts[a], pts[b], n) > eps);
                }
            }
        }
    }

    #[test]
    fn separated_preconditions() {
        assert!(matches!(
            separated_construct(&linear(0), 10, 0.1, 1000),
            Err(Error::ZeroDegree)
        ));
        assert!(matches!(
            separated_construct(&linear(1), 10, 0.2, 1000),
            Err(Error::EpsilonNotSmallEnough { .. })
        ));
        assert!(separated_construct(&linear(1), 0, 0.1, 1000).is_err());
    }

    #[test]
    fn spanning_small_cases_verify() {
        let s = spanning_construct(&linear(1), 1, 0.4, 64).unwrap();
        assert!(s.verified, "{:?}", s.offending);
        assert_eq!(s.plan.m, 6);
        assert!(s.count <= 250);
        let s = spanning_construct(&linear(1), 1, 0.49, 64).unwrap();
        assert!(s.verified);
        assert_eq!(s.audit_grid, 256);
        assert_eq!(s.eps_star, 0.5);
    }

    #[test]
    fn spanning_plan_invariants() {
        for t in [linear(1), linear(-2), wavy(1), wavy(0)] {
            let (n, eps) = (12, 0.1);
            let s = spanning_construct(&t, n, eps, 256).unwrap();
            assert!(s.verified, "{:?}", s.offending);
            let plan = &s.plan;
            assert_eq!(plan.x_cuts[0], 0.0);
            assert_eq!(*plan.x_cuts.last().unwrap(), 1.0);
            assert!(plan.x_cuts.windows(2).all(|w| w[1] > w[0] && w[1] - w[0] <= eps / 2.0));
            assert!(plan.y_cuts.windows(2).all(|w| w[1] - w[0] < eps / 3.0));
            assert_eq!(plan.forced_cuts, 0);
            assert_eq!(s.count, plan.p * plan.q);
            assert_eq!(plan.representatives().count(), s.count);
            let bound = 20.0 * (s.variation + 1.0) * n as f64 / (eps * eps);
            assert!((s.count as f64) <= bound);
        }
    }

    #[test]
    fn representatives_cover_random_points() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let t = wavy(2);
        let (n, eps) = (8, 0.15);
        let s = spanning_construct(&t, n, eps, 128).unwrap();
        for _ in 0..2000 {
            let p = TorusPoint::new(rng.gen(), rng.gen());
            assert!(t.dn_dist(p, s.plan.representative_of(p), n) <= eps);
        }
    }

    #[test]
    fn audit_reports_uncovered_points() {
        let t = linear(1);
        let mut s = spanning_construct(&t, 5, 0.2, 64).unwrap();
        // collapse the base partition to a single interval
        s.plan.x_cuts = vec![0.0, 1.0];
        s.plan.p = 1;
        let bad = audit(&t, &s.plan, 5, 0.2, 256);
        assert!(bad.is_some());
    }

    #[test]
    fn eps_star_is_computed() {
        assert_eq!(eps_star(2.0), 0.5);
        assert!(a_priori_cells(2.0, 1.0, 0.4) <= 20.0 * 3.0 / 0.16);
    }
}
