//! Small numeric helpers shared across modules.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

/// Neumaier's variant of compensated summation.
#[derive(Clone, Copy, Debug, Default)]
pub struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.comp += (self.sum - t) + v;
        } else {
            self.comp += (v - t) + self.sum;
        }
        self.sum = t;
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

impl FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut s = CompensatedSum::new();
        for v in iter {
            s.add(v);
        }
        s
    }
}

/// Correctly scaled conversion of an arbitrary-precision rational to `f64`.
///
/// Works for magnitudes far outside the range where numerator and
/// denominator are individually representable (e.g. `2^-600`).
pub fn ratio_to_f64(r: &BigRational) -> f64 {
    if r.is_zero() {
        return 0.0;
    }
    let neg = r.is_negative();
    let num = r.numer().abs();
    let den = r.denom().abs();
    let shift = den.bits() as i64 - num.bits() as i64 + 64;
    // q = floor(num * 2^shift / den) has 64 or 65 significant bits
    let q: BigInt = if shift >= 0 {
        (num << shift as u64) / den
    } else {
        num / (den << (-shift) as u64)
    };
    let (_, digits) = q.to_u64_digits();
    let mut mant = 0.0f64;
    for d in digits.iter().rev() {
        mant = mant * 18446744073709551616.0 + *d as f64;
    }
    let v = ldexp(mant, -shift);
    if neg {
        -v
    } else {
        v
    }
}

/// `x * 2^e` without intermediate overflow or underflow.
pub fn ldexp(mut x: f64, mut e: i64) -> f64 {
    while e > 1000 {
        x *= 2f64.powi(1000);
        e -= 1000;
    }
    while e < -1000 {
        x *= 2f64.powi(-1000);
        e += 1000;
    }
    x * 2f64.powi(e as i32)
}
