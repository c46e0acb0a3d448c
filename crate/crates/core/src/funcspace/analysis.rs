//! Grid approximants of total variation, modulus of continuity and the
//! Jordan decomposition `f = g - h` into nondecreasing lifts.

use std::collections::VecDeque;

use rayon::prelude::*;

use super::FlFunction;
use crate::error::{Error, Result};

/// Relative change below which a doubled grid counts as converged.
pub const REFINEMENT_TOL: f64 = 1e-3;

const FIRST_VARIATION_GRID: usize = 1 << 10;
const MAX_VARIATION_GRID: usize = 1 << 22;

fn lift_samples(f: &FlFunction, grid: usize, extra: usize) -> Vec<f64> {
    (0..=grid + extra)
        .into_par_iter()
        .map(|i| f.eval_lift(i as f64 / grid as f64))
        .collect()
}

/// `sum |f(x_{i+1}) - f(x_i)|` over the uniform grid of `[0, 1]` with
/// `grid + 1` nodes. A lower approximant of the total variation that never
/// decreases when the grid is refined by an integer factor.
pub fn variation(f: &FlFunction, grid: usize) -> Result<f64> {
    if grid < 2 {
        return Err(Error::InvalidArgument(format!("grid {grid} < 2")));
    }
    let s = lift_samples(f, grid, 0);
    Ok(s.windows(2).map(|w| (w[1] - w[0]).abs()).sum())
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct VariationEstimate {
    pub value: f64,
    pub grid: usize,
    /// False when the doubling protocol hit its grid ceiling without the
    /// relative change dropping below [`REFINEMENT_TOL`]; the input is then
    /// possibly not of bounded variation and bounds built on it are not
    /// certified.
    pub converged: bool,
}

impl VariationEstimate {
    /// Value padded by the refinement tolerance, for use inside upper-bound
    /// formulas.
    pub fn padded(&self) -> f64 {
        self.value * (1.0 + REFINEMENT_TOL)
    }
}

/// Doubles the grid from 2^10 until two successive variation estimates agree
/// to [`REFINEMENT_TOL`] relative.
pub fn variation_refined(f: &FlFunction) -> VariationEstimate {
    let mut grid = FIRST_VARIATION_GRID;
    let mut prev = variation(f, grid).expect("grid >= 2");
    while grid < MAX_VARIATION_GRID {
        let next = variation(f, grid * 2).expect("grid >= 2");
        grid *= 2;
        let change = (next - prev).abs();
        prev = next;
        if change <= REFINEMENT_TOL * next.abs().max(f64::MIN_POSITIVE) {
            return VariationEstimate {
                value: next,
                grid,
                converged: true,
            };
        }
    }
    VariationEstimate {
        value: prev,
        grid,
        converged: false,
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ModulusEstimate {
    pub eps: f64,
    pub eta: f64,
    pub grid_size: usize,
    /// Whether the estimate on the doubled grid agrees to [`REFINEMENT_TOL`].
    pub refined: bool,
}

/// Number of grid steps whose length does not exceed `eps`.
pub(crate) fn steps_within(eps: f64, grid: usize) -> usize {
    (eps * grid as f64 + 1e-9).floor() as usize
}

fn window_oscillation(samples: &[f64], starts: usize, width: usize) -> f64 {
    // max over windows [i, i + width] of (max - min), via monotone deques
    let mut maxq: VecDeque<usize> = VecDeque::new();
    let mut minq: VecDeque<usize> = VecDeque::new();
    let mut best = 0.0f64;
    for j in 0..starts + width {
        while maxq.back().is_some_and(|&b| samples[b] <= samples[j]) {
            maxq.pop_back();
        }
        maxq.push_back(j);
        while minq.back().is_some_and(|&b| samples[b] >= samples[j]) {
            minq.pop_back();
        }
        minq.push_back(j);
        if j >= width {
            let i = j - width;
            while maxq.front().is_some_and(|&f| f < i) {
                maxq.pop_front();
            }
            while minq.front().is_some_and(|&f| f < i) {
                minq.pop_front();
            }
            best = best.max(samples[*maxq.front().unwrap()] - samples[*minq.front().unwrap()]);
        }
    }
    best
}

fn eta_on_grid(f: &FlFunction, eps: f64, grid: usize) -> f64 {
    let width = steps_within(eps, grid);
    if width == 0 {
        return 0.0;
    }
    let s = lift_samples(f, grid, width);
    window_oscillation(&s, grid, width)
}

/// Grid estimate of `sup_{|x-y| <= eps} |f(x) - f(y)|`, taken over node
/// pairs of the uniform grid with `grid_size` steps per unit, with lift values
/// extended past 1 so windows straddling the wrap are included.
pub fn modulus(f: &FlFunction, eps: f64, grid_size: usize) -> Result<ModulusEstimate> {
    if !eps.is_finite() || eps <= 0.0 {
        return Err(Error::InvalidArgument(format!("eps must be positive, got {eps}")));
    }
    let required = (4.0 / eps).ceil() as usize;
    if grid_size < required {
        return Err(Error::GridTooCoarse {
            grid: grid_size,
            eps,
            required,
        });
    }
    let eta = eta_on_grid(f, eps, grid_size);
    let finer = eta_on_grid(f, eps, grid_size * 2);
    let refined = (finer - eta).abs() <= REFINEMENT_TOL * eta.max(f64::MIN_POSITIVE);
    Ok(ModulusEstimate {
        eps,
        eta,
        grid_size,
        refined,
    })
}

/// Sampled Jordan decomposition `f = g - h` with
/// `g = (V_0^x f + f) / 2`, `h = (V_0^x f - f) / 2`.
#[derive(Clone, Debug, PartialEq)]
pub struct JordanDecomposition {
    pub g_samples: Vec<f64>,
    pub h_samples: Vec<f64>,
    /// Period increment of `g`; `h` increases by `m - l` per period.
    pub m: f64,
    pub degree: i64,
    pub variation: f64,
}

impl JordanDecomposition {
    pub fn grid(&self) -> usize {
        self.g_samples.len() - 1
    }

    fn interp(samples: &[f64], increment: f64, x: f64) -> f64 {
        let grid = samples.len() - 1;
        let k = x.floor();
        let t = (x - k) * grid as f64;
        let i = (t.floor() as usize).min(grid - 1);
        let w = t - i as f64;
        samples[i] + w * (samples[i + 1] - samples[i]) + k * increment
    }

    /// Linear interpolant of `g`, extended by `g(x + 1) = g(x) + M`.
    #[inline]
    pub fn g_at(&self, x: f64) -> f64 {
        Self::interp(&self.g_samples, self.m, x)
    }

    /// Linear interpolant of `h`, extended by `h(x + 1) = h(x) + M - l`.
    #[inline]
    pub fn h_at(&self, x: f64) -> f64 {
        Self::interp(&self.h_samples, self.m - self.degree as f64, x)
    }
}

pub fn jordan(f: &FlFunction, grid: usize) -> Result<JordanDecomposition> {
    if grid < 2 {
        return Err(Error::InvalidArgument(format!("grid {grid} < 2")));
    }
    let s = lift_samples(f, grid, 0);
    let mut cumulative = Vec::with_capacity(s.len());
    let mut v = 0.0;
    cumulative.push(0.0);
    for w in s.windows(2) {
        v += (w[1] - w[0]).abs();
        cumulative.push(v);
    }
    let g_samples = cumulative.iter().zip(&s).map(|(v, y)| 0.5 * (v + y)).collect();
    let h_samples = cumulative.iter().zip(&s).map(|(v, y)| 0.5 * (v - y)).collect();
    Ok(JordanDecomposition {
        g_samples,
        h_samples,
        m: 0.5 * (v + f.degree() as f64),
        degree: f.degree(),
        variation: v,
    })
}
