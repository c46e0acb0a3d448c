//! The skew product `T(x, y) = (x + alpha, f(x) + y)` on the two-torus.
//!
//! Two Birkhoff-sum views are kept apart: [`birkhoff_lift`] is the real-valued
//! sum `f_n(x) = sum_{i<n} f(x + i alpha)` of the lift (it grows like `n l`),
//! while [`SkewProduct::orbit`] reduces modulo one at every step.

use crate::error::{Error, Result};
use crate::funcspace::FlFunction;
use crate::numeric::CompensatedSum;
use crate::torus::{circle_dist, dist_to_integer, frac, torus_dist, CirclePoint, TorusPoint};

const RATIONAL_TOL: f64 = 1e-12;
const RATIONAL_MAX_DENOM: u32 = 1000;

#[derive(Clone, Debug, PartialEq)]
pub struct SkewProduct {
    alpha: f64,
    f: FlFunction,
    near_rational: Option<(i64, u32)>,
}

/// `p/q` with `q <= 1000` and `|alpha - p/q| <= 1e-12`, if any.
fn rational_neighbour(alpha: f64) -> Option<(i64, u32)> {
    (1..=RATIONAL_MAX_DENOM).find_map(|q| {
        let qa = alpha * q as f64;
        (dist_to_integer(qa) <= RATIONAL_TOL * q as f64).then(|| (qa.round() as i64, q))
    })
}

impl SkewProduct {
    /// Builds the system; `alpha` is stored reduced modulo one. Rotation
    /// numbers close to a rational with small denominator are accepted but
    /// flagged (see [`near_rational`](Self::near_rational)).
    pub fn new(alpha: f64, f: FlFunction) -> Result<Self> {
        if !alpha.is_finite() {
            return Err(Error::NonFinite(alpha));
        }
        let alpha = frac(alpha);
        Ok(SkewProduct {
            alpha,
            near_rational: rational_neighbour(alpha),
            f,
        })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn function(&self) -> &FlFunction {
        &self.f
    }

    /// The rational `p/q` (q <= 1000) within 1e-12 of alpha, when one exists.
    pub fn near_rational(&self) -> Option<(i64, u32)> {
        self.near_rational
    }

    /// Base rotation `x -> x + alpha`.
    #[inline]
    pub fn rotate(&self, x: CirclePoint) -> CirclePoint {
        x.shift(self.alpha)
    }

    #[inline]
    pub fn step(&self, p: TorusPoint) -> TorusPoint {
        TorusPoint {
            x: self.rotate(p.x),
            y: p.y.shift(self.f.eval_lift(p.x.value())),
        }
    }

    #[inline]
    pub fn step_inverse(&self, p: TorusPoint) -> TorusPoint {
        let x = p.x.shift(-self.alpha);
        TorusPoint {
            x,
            y: p.y.shift(-self.f.eval_lift(x.value())),
        }
    }

    /// `x + k alpha` reduced, with the product `k alpha` split exactly so the
    /// base coordinate does not drift over long orbits.
    #[inline]
    pub fn base_point(&self, x: CirclePoint, k: usize) -> CirclePoint {
        let kf = k as f64;
        let hi = kf * self.alpha;
        let lo = kf.mul_add(self.alpha, -hi);
        CirclePoint::new(frac(hi) + lo + x.value())
    }

    /// `T^n p`. Same as stepping `n` times, up to rounding.
    pub fn iterate(&self, p: TorusPoint, n: usize) -> TorusPoint {
        let mut y = p.y;
        for k in 0..n {
            y = y.shift(self.f.eval_lift(self.base_point(p.x, k).value()));
        }
        TorusPoint {
            x: self.base_point(p.x, n),
            y,
        }
    }

    /// `[p, Tp, ..., T^{n-1} p]`.
    pub fn orbit(&self, p: TorusPoint, n: usize) -> Vec<TorusPoint> {
        let mut out = Vec::with_capacity(n);
        let mut y = p.y;
        for k in 0..n {
            let x = if k == 0 { p.x } else { self.base_point(p.x, k) };
            out.push(TorusPoint { x, y });
            y = y.shift(self.f.eval_lift(x.value()));
        }
        out
    }

    /// Bowen metric `d_n(p, q) = max_{0 <= i < n} d(T^i p, T^i q)`.
    pub fn dn_dist(&self, mut p: TorusPoint, mut q: TorusPoint, n: usize) -> f64 {
        let mut best = 0.0f64;
        for i in 0..n {
            best = best.max(torus_dist(p, q));
            if best >= 0.5 || i + 1 == n {
                break;
            }
            p = self.step(p);
            q = self.step(q);
        }
        best
    }

    /// `d_n(p, q) > eps`, stopping at the first iterate that separates.
    pub fn separated(&self, mut p: TorusPoint, mut q: TorusPoint, n: usize, eps: f64) -> bool {
        // base distance is invariant, so check it once
        if circle_dist(p.x, q.x) > eps {
            return n > 0;
        }
        for i in 0..n {
            if circle_dist(p.y, q.y) > eps {
                return true;
            }
            if i + 1 < n {
                p = self.step(p);
                q = self.step(q);
            }
        }
        false
    }

    pub fn birkhoff_lift(&self, x: f64, n: usize) -> f64 {
        birkhoff_lift(&self.f, self.alpha, x, n)
    }
}

/// `f_n(x) = sum_{i=0}^{n-1} f(x + i alpha)` for the lift of `f`, with
/// compensated summation. Each argument is formed as `x + i * alpha` so that
/// rounding does not accumulate along the orbit.
pub fn birkhoff_lift(f: &FlFunction, alpha: f64, x: f64, n: usize) -> f64 {
    (0..n)
        .map(|i| f.eval_lift(x + i as f64 * alpha))
        .collect::<CompensatedSum>()
        .value()
}

/// All partial sums `f_0(x), ..., f_{n-1}(x)` (with `f_0 = 0`), each lifted.
pub fn birkhoff_prefix(f: &FlFunction, alpha: f64, x: f64, n: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(n);
    let mut s = CompensatedSum::new();
    for i in 0..n {
        out.push(s.value());
        s.add(f.eval_lift(x + i as f64 * alpha));
    }
    out
}
