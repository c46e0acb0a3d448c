//! Circle and torus arithmetic.
//!
//! Points are stored by their canonical representative in `[0, 1)` and all
//! distances are computed on those representatives.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Canonical representative of a point of `R/Z`.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CirclePoint(f64);

impl CirclePoint {
    pub const ZERO: CirclePoint = CirclePoint(0.0);

    /// Reduces `x` modulo one. Panics on non-finite input; use [`reduce`]
    /// for a checked variant.
    #[inline]
    pub fn new(x: f64) -> Self {
        debug_assert!(x.is_finite(), "non-finite circle coordinate {x}");
        CirclePoint(frac(x))
    }

    #[inline]
    pub fn value(self) -> f64 {
        self.0
    }

    /// Rotation by `t`.
    #[inline]
    pub fn shift(self, t: f64) -> Self {
        CirclePoint::new(self.0 + t)
    }
}

impl fmt::Display for CirclePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Point of the two-torus with the max-metric.
#[derive(Clone, Copy, Debug, PartialEq, Default, Serialize, Deserialize)]
pub struct TorusPoint {
    pub x: CirclePoint,
    pub y: CirclePoint,
}

impl TorusPoint {
    #[inline]
    pub fn new(x: f64, y: f64) -> Self {
        TorusPoint {
            x: CirclePoint::new(x),
            y: CirclePoint::new(y),
        }
    }
}

/// `x - floor(x)`, clamped so that rounding never yields exactly 1.
#[inline]
pub(crate) fn frac(x: f64) -> f64 {
    let r = x - x.floor();
    if r >= 1.0 {
        0.0
    } else {
        r
    }
}

/// Checked reduction modulo one.
pub fn reduce(x: f64) -> Result<CirclePoint> {
    if !x.is_finite() {
        return Err(Error::NonFinite(x));
    }
    Ok(CirclePoint(frac(x)))
}

/// `min_m |a - b + m|`, always in `[0, 0.5]`.
#[inline]
pub fn circle_dist(a: CirclePoint, b: CirclePoint) -> f64 {
    let d = (a.0 - b.0).abs();
    d.min(1.0 - d)
}

/// Distance from a real number to the nearest integer.
#[inline]
pub fn dist_to_integer(t: f64) -> f64 {
    let d = t - t.round();
    d.abs()
}

#[inline]
pub fn torus_dist(p: TorusPoint, q: TorusPoint) -> f64 {
    circle_dist(p.x, q.x).max(circle_dist(p.y, q.y))
}
