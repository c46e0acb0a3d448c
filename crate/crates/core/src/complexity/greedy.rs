//! Greedy `(n, eps)`-separated sets on the uniform lattice, and an independent
//! pairwise certification.
//!
//! Candidates are scanned column by column (x outer, y inner). Two lattice
//! points in columns `c`, `c'` are `d_n`-close iff their y-offset `t = y' - y`
//! lies in the intersection over `i < n` of the arcs `[D_i - eps, D_i + eps]`,
//! `D_i = f_i(x_c) - f_i(x_c')`. For `eps < 1/4` that intersection is a single
//! arc, so each column pair is summarised by one interval and a query is a
//! binary search in the sorted kept list of the other column.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::funcspace::analysis::steps_within;
use crate::skew::{birkhoff_prefix, SkewProduct};
use crate::torus::{dist_to_integer, frac, TorusPoint};

/// Arc endpoints closer than this to a kept point trigger a full recheck.
const SLACK: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq)]
pub struct SeparatedSet {
    /// Kept points in scan order.
    pub points: Vec<TorusPoint>,
    pub n: usize,
    pub eps: f64,
    pub grid: usize,
}

impl SeparatedSet {
    pub fn count(&self) -> usize {
        self.points.len()
    }
}

/// Greedy separated set on the `grid x grid` lattice `(i/grid, j/grid)`,
/// scanned row-major from `(0, 0)`: a point is kept iff its `d_n` distance
/// to every kept point exceeds `eps`. The count is a lower bound for
/// `s(n, eps)`.
pub fn greedy_separated(t: &SkewProduct, n: usize, eps: f64, grid: usize) -> Result<SeparatedSet> {
    if n < 1 {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    if !eps.is_finite() || eps <= 0.0 {
        return Err(Error::InvalidArgument(format!("eps must be positive, got {eps}")));
    }
    if grid < 8 {
        return Err(Error::InvalidArgument(format!("grid {grid} < 8")));
    }
    let required = (4.0 / eps).ceil() as usize;
    if grid < required {
        return Err(Error::GridTooCoarse { grid, eps, required });
    }
    Ok(scan(t, n, eps, grid))
}

struct Scanner<'a> {
    n: usize,
    eps: f64,
    grid: usize,
    /// `f_i(c / grid)` for `i < n`, row `c`.
    table: &'a [f64],
    kept: Vec<Vec<f64>>,
}

impl Scanner<'_> {
    fn sums(&self, c: usize) -> &[f64] {
        &self.table[c * self.n..(c + 1) * self.n]
    }

    /// Fiber condition for two points whose base distance is within eps.
    fn close(&self, c: usize, y: f64, c2: usize, y2: f64) -> bool {
        let (a, b) = (self.sums(c), self.sums(c2));
        let dy = y - y2;
        a.iter()
            .zip(b)
            .all(|(fa, fb)| dist_to_integer(dy + fa - fb) <= self.eps)
    }

    /// Admissible offsets `y' - y` for column `c2` seen from column `c`.
    fn arc(&self, c: usize, c2: usize) -> Option<(f64, f64)> {
        let (a, b) = (self.sums(c), self.sums(c2));
        let (mut lo, mut hi) = (-self.eps, self.eps);
        for (fa, fb) in a.iter().zip(b).skip(1) {
            let d = fa - fb;
            let d = d - (d - 0.5 * (lo + hi)).round();
            lo = lo.max(d - self.eps);
            hi = hi.min(d + self.eps);
            if lo > hi {
                return None;
            }
        }
        Some((lo, hi))
    }

    fn blocked_by(&self, c: usize, y: f64, c2: usize, arc: Option<(f64, f64)>) -> bool {
        let list = &self.kept[c2];
        let Some((lo, hi)) = arc else {
            return list.iter().any(|&y2| self.close(c, y, c2, y2));
        };
        let center = 0.5 * (lo + hi);
        let start = frac(y + lo - SLACK);
        let end = start + (hi - lo) + 2.0 * SLACK;
        let test = |y2: f64| {
            let mut off = y2 - y;
            off -= (off - center).round();
            (off >= lo + SLACK && off <= hi - SLACK) || self.close(c, y, c2, y2)
        };
        let from = list.partition_point(|&v| v < start);
        let upto = list.partition_point(|&v| v <= end.min(1.0));
        if list[from..upto].iter().any(|&v| test(v)) {
            return true;
        }
        if end > 1.0 {
            let upto = list.partition_point(|&v| v <= end - 1.0);
            return list[..upto].iter().any(|&v| test(v));
        }
        false
    }
}

/// The scan itself, without the lattice-coarseness precondition.
pub(crate) fn scan(t: &SkewProduct, n: usize, eps: f64, grid: usize) -> SeparatedSet {
    let mut out = SeparatedSet {
        points: Vec::new(),
        n,
        eps,
        grid,
    };
    if eps >= 0.5 {
        // no two points of the torus are more than 1/2 apart
        out.points.push(TorusPoint::new(0.0, 0.0));
        return out;
    }
    let table: Vec<f64> = (0..grid)
        .into_par_iter()
        .flat_map_iter(|c| birkhoff_prefix(t.function(), t.alpha(), c as f64 / grid as f64, n))
        .collect();
    let mut s = Scanner {
        n,
        eps,
        grid,
        table: &table,
        kept: vec![Vec::new(); grid],
    };
    let w = steps_within(eps, grid);
    let use_arcs = eps < 0.25;

    for c in 0..s.grid {
        let mut others: Vec<(usize, Option<(f64, f64)>)> = Vec::new();
        for dc in 1..=w {
            for c2 in [(c + dc) % s.grid, (c + s.grid - dc) % s.grid] {
                if s.kept[c2].is_empty() || others.iter().any(|o| o.0 == c2) {
                    continue;
                }
                if use_arcs {
                    if let Some(a) = s.arc(c, c2) {
                        others.push((c2, Some(a)));
                    }
                } else {
                    others.push((c2, None));
                }
            }
        }
        let blocked: Vec<bool> = (0..s.grid)
            .into_par_iter()
            .map(|r| {
                let y = r as f64 / s.grid as f64;
                others.iter().any(|&(c2, a)| s.blocked_by(c, y, c2, a))
            })
            .collect();
        let own = use_arcs.then_some((-eps, eps));
        for (r, b) in blocked.into_iter().enumerate() {
            let y = r as f64 / s.grid as f64;
            if !b && !s.blocked_by(c, y, c, own) {
                s.kept[c].push(y);
                out.points.push(TorusPoint::new(c as f64 / s.grid as f64, y));
            }
        }
    }
    out
}

/// Rechecks pairwise `d_n > eps` from orbits generated by stepping the map.
/// Returns the first offending pair of indices, if any.
pub fn certify_separated(t: &SkewProduct, points: &[TorusPoint], n: usize, eps: f64) -> Option<(usize, usize)> {
    if points.len() < 2 || n == 0 {
        return None;
    }
    let mut order: Vec<usize> = (0..points.len()).collect();
    order.sort_by(|&a, &b| points[a].x.value().total_cmp(&points[b].x.value()).then(a.cmp(&b)));
    // fiber offsets of T^i(x, 0), one row per distinct base coordinate
    let mut row_of = vec![0usize; points.len()];
    let mut bases: Vec<f64> = Vec::new();
    for &i in &order {
        let x = points[i].x.value();
        if bases.last() != Some(&x) {
            bases.push(x);
        }
        row_of[i] = bases.len() - 1;
    }
    let offsets: Vec<Vec<f64>> = bases
        .par_iter()
        .map(|&x| {
            t.orbit(TorusPoint::new(x, 0.0), n)
                .into_iter()
                .map(|p| p.y.value())
                .collect()
        })
        .collect();

    let close = |a: usize, b: usize| {
        let (p, q) = (points[a], points[b]);
        let dy = p.y.value() - q.y.value();
        let (ya, yb) = (&offsets[row_of[a]], &offsets[row_of[b]]);
        ya.iter().zip(yb).all(|(u, v)| dist_to_integer(dy + u - v) <= eps)
    };
    let xs: Vec<f64> = order.iter().map(|&i| points[i].x.value()).collect();
    (0..order.len()).into_par_iter().find_map_first(|a| {
        let xa = xs[a];
        let forward = (a + 1..order.len()).take_while(|&b| xs[b] - xa <= eps);
        let wrapped = (0..a).take_while(|&b| xs[b] + 1.0 - xa <= eps);
        forward
            .chain(wrapped)
            .find(|&b| close(order[a], order[b]))
            .map(|b| (order[a].min(order[b]), order[a].max(order[b])))
    })
}
