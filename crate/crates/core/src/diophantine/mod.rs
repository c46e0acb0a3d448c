//! Continued fractions, convergents, the quantity `v(alpha) = liminf n ||n alpha||`
//! and resonant denominators `n` with `n |e^{2 pi i n alpha} - 1| < 1/k^2`.

mod alpha;

pub use alpha::{Alpha, NAMED_PRECISION_BITS};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::ratio_to_f64;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Convergent {
    pub p: BigInt,
    pub q: BigUint,
}

impl Convergent {
    pub fn as_ratio(&self) -> BigRational {
        BigRational::new(self.p.clone(), BigInt::from(self.q.clone()))
    }

    /// `|alpha - p/q|`.
    pub fn abs_err(&self, alpha: &Alpha) -> f64 {
        ratio_to_f64(&(alpha.value() - self.as_ratio()).abs())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ContinuedFraction {
    pub a0: BigInt,
    /// `a_1, ..., a_K`, all at least one.
    pub partial_quotients: Vec<BigUint>,
    /// The input value when it was exact.
    pub exact_input: Option<BigRational>,
    /// The expansion ended because the input is rational.
    pub terminated: bool,
    /// The expansion stopped early because the next convergent would resolve
    /// the input more finely than its stated resolution.
    pub truncated: bool,
}

impl ContinuedFraction {
    pub fn len(&self) -> usize {
        self.partial_quotients.len()
    }

    pub fn is_empty(&self) -> bool {
        self.partial_quotients.is_empty()
    }
}

/// Walks the expansion one quotient at a time, carrying the convergent
/// recurrence along.
struct Expansion {
    num: BigInt,
    den: BigInt,
    resolution: Option<BigRational>,
    p: (BigInt, BigInt),
    q: (BigUint, BigUint),
    started: bool,
    truncated: bool,
}

impl Expansion {
    fn new(alpha: &Alpha) -> Self {
        let v = alpha.value();
        Expansion {
            num: v.numer().clone(),
            den: v.denom().clone(),
            resolution: alpha.resolution().cloned(),
            // seeds p_{-1}, p_{-2} and q_{-1}, q_{-2}
            p: (BigInt::one(), BigInt::zero()),
            q: (BigUint::zero(), BigUint::one()),
            started: false,
            truncated: false,
        }
    }

    fn terminated(&self) -> bool {
        self.started && self.den.is_zero()
    }
}

impl Iterator for Expansion {
    /// `(a_k, p_k/q_k)`
    type Item = (BigInt, Convergent);

    fn next(&mut self) -> Option<Self::Item> {
        if self.truncated || self.den.is_zero() {
            return None;
        }
        let a = if self.started {
            &self.num / &self.den
        } else {
            self.num.div_floor(&self.den)
        };
        let ua = a.magnitude().clone();
        let q = &ua * &self.q.0 + &self.q.1;
        if let Some(res) = &self.resolution {
            let qq = BigRational::from_integer(BigInt::from(&q * &q));
            if &qq * res >= BigRational::one() {
                self.truncated = true;
                return None;
            }
        }
        let p = &a * &self.p.0 + &self.p.1;
        let rem = &self.num - &a * &self.den;
        self.num = std::mem::replace(&mut self.den, rem);
        self.started = true;
        self.p = (p.clone(), std::mem::take(&mut self.p.0));
        self.q = (q.clone(), std::mem::take(&mut self.q.0));
        Some((a, Convergent { p, q }))
    }
}

/// Expansion to at most `depth` partial quotients after `a_0`. Exact inputs
/// use integer arithmetic throughout; inputs with a resolution stop (flagged)
/// once `q_k^2` would exceed its reciprocal.
pub fn cf_expand(alpha: &Alpha, depth: usize) -> Result<ContinuedFraction> {
    if depth < 1 {
        return Err(Error::InvalidArgument("depth must be at least 1".into()));
    }
    let mut it = Expansion::new(alpha);
    let (a0, _) = it.next().expect("a0 always exists");
    let partial_quotients: Vec<BigUint> = it.by_ref().take(depth).map(|(a, _)| a.magnitude().clone()).collect();
    let terminated = it.terminated();
    let truncated = partial_quotients.len() < depth && !terminated;
    Ok(ContinuedFraction {
        a0,
        partial_quotients,
        exact_input: alpha.is_exact().then(|| alpha.value().clone()),
        terminated,
        truncated,
    })
}

pub fn convergents(cf: &ContinuedFraction) -> Vec<Convergent> {
    let mut out = Vec::with_capacity(cf.len() + 1);
    let (mut p1, mut p2) = (BigInt::one(), BigInt::zero());
    let (mut q1, mut q2) = (BigUint::zero(), BigUint::one());
    let quotients = std::iter::once(cf.a0.clone()).chain(cf.partial_quotients.iter().map(|a| BigInt::from(a.clone())));
    for a in quotients {
        let p = &a * &p1 + &p2;
        let q = a.magnitude() * &q1 + &q2;
        p2 = std::mem::replace(&mut p1, p.clone());
        q2 = std::mem::replace(&mut q1, q.clone());
        out.push(Convergent { p, q });
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Approximability {
    Yes,
    NoEvidence,
    Undecided,
}

impl Approximability {
    pub fn as_str(self) -> &'static str {
        match self {
            Approximability::Yes => "yes",
            Approximability::NoEvidence => "no-evidence",
            Approximability::Undecided => "undecided",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DiophantineReport {
    /// Minimum of `q_k ||q_k alpha||` over the second half of the examined
    /// convergents; the liminf estimate.
    pub v_estimate: f64,
    /// Minimum over every examined convergent. Nonincreasing in depth.
    pub running_min: f64,
    pub badly_approximable: Approximability,
    /// Largest partial quotient seen, reported with a `Yes` verdict.
    pub max_quotient: Option<BigUint>,
    pub depth: usize,
    /// `q_k ||q_k alpha||` for `k = 0..=depth`.
    pub products: Vec<f64>,
    pub terminated: bool,
    pub truncated: bool,
}

const TINY_PRODUCT: f64 = 1e-6;

pub fn v_estimate(alpha: &Alpha, depth: usize) -> Result<DiophantineReport> {
    if depth < 2 {
        return Err(Error::InvalidArgument("depth must be at least 2".into()));
    }
    let cf = cf_expand(alpha, depth)?;
    let products: Vec<f64> = convergents(&cf)
        .iter()
        .map(|c| c.q.to_f64().unwrap_or(f64::INFINITY) * alpha.dist_to_integer(&c.q))
        .collect();
    let running_min = products.iter().copied().fold(f64::INFINITY, f64::min);
    let tail_start = products.len() / 2;
    let v = products[tail_start..].iter().copied().fold(f64::INFINITY, f64::min);

    let quotients = &cf.partial_quotients;
    let (badly, max_quotient) = if cf.truncated {
        (Approximability::Undecided, None)
    } else if cf.terminated {
        (Approximability::NoEvidence, None)
    } else {
        let half = quotients.len() / 2;
        let head_max = quotients[..half].iter().max().cloned().unwrap_or_else(BigUint::one);
        let tail_max = quotients[half..].iter().max().cloned().unwrap_or_else(BigUint::one);
        if tail_max <= head_max * 2u32 + 2u32 && v >= TINY_PRODUCT {
            (Approximability::Yes, quotients.iter().max().cloned())
        } else {
            (Approximability::NoEvidence, None)
        }
    };
    Ok(DiophantineReport {
        v_estimate: v,
        running_min,
        badly_approximable: badly,
        max_quotient,
        depth: quotients.len(),
        products,
        terminated: cf.terminated,
        truncated: cf.truncated,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct ResonantSequence {
    pub n_k: Vec<BigUint>,
    /// `n_k |e^{2 pi i n_k alpha} - 1|`.
    pub witnesses: Vec<f64>,
    pub requested: usize,
    pub exhausted: bool,
    pub reason: Option<String>,
}

impl ResonantSequence {
    pub fn len(&self) -> usize {
        self.n_k.len()
    }

    pub fn is_empty(&self) -> bool {
        self.n_k.is_empty()
    }

    /// Turns a short sequence into [`Error::Exhausted`].
    pub fn require_complete(self) -> Result<Self> {
        if self.exhausted {
            return Err(Error::Exhausted {
                found: self.len(),
                requested: self.requested,
                reason: self.reason.unwrap_or_default(),
            });
        }
        Ok(self)
    }
}

/// `n |e^{2 pi i n alpha} - 1| = 2 n sin(pi ||n alpha||)`.
pub fn resonance_witness(alpha: &Alpha, n: &BigUint) -> f64 {
    let d = alpha.dist_to_integer(n);
    n.to_f64().unwrap_or(f64::INFINITY) * 2.0 * (std::f64::consts::PI * d).sin()
}

/// Scans convergent denominators `q <= n_cap` in ascending order and accepts
/// `q` as the next `n_k` when its witness is below `1/k^2`.
pub fn find_nk(alpha: &Alpha, k_max: usize, n_cap: &BigUint) -> Result<ResonantSequence> {
    if k_max < 1 {
        return Err(Error::InvalidArgument("k_max must be at least 1".into()));
    }
    let mut seq = ResonantSequence {
        n_k: Vec::new(),
        witnesses: Vec::new(),
        requested: k_max,
        exhausted: false,
        reason: None,
    };
    let mut it = Expansion::new(alpha);
    let mut last = BigUint::zero();
    while seq.len() < k_max {
        let Some((_, c)) = it.next() else {
            seq.exhausted = true;
            seq.reason = Some(if it.truncated {
                "expansion reached the precision of alpha".into()
            } else {
                "alpha is rational".into()
            });
            break;
        };
        if &c.q > n_cap {
            seq.exhausted = true;
            seq.reason = Some(format!("no further candidate below n_cap = {n_cap}"));
            break;
        }
        if c.q <= last {
            continue;
        }
        last = c.q.clone();
        let k = seq.len() + 1;
        let w = resonance_witness(alpha, &c.q);
        if w * ((k * k) as f64) < 1.0 {
            seq.n_k.push(c.q);
            seq.witnesses.push(w);
        }
    }
    Ok(seq)
}
