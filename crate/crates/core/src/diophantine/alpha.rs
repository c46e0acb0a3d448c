//! Rotation numbers held as exact rationals, optionally with a resolution
//! below which the stored value is not meaningful (named irrationals, floats).

use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::numeric::ratio_to_f64;

/// Bits of precision carried by the named irrational constants.
pub const NAMED_PRECISION_BITS: u64 = 256;

#[derive(Clone, Debug, PartialEq)]
pub struct Alpha {
    value: BigRational,
    resolution: Option<BigRational>,
    label: String,
}

fn pow2_inv(bits: u64) -> BigRational {
    BigRational::new(BigInt::one(), BigInt::one() << bits)
}

impl Alpha {
    /// An exactly known rational.
    pub fn exact(value: BigRational) -> Self {
        let label = value.to_string();
        Alpha {
            value,
            resolution: None,
            label,
        }
    }

    /// A double, taken as the dyadic rational it encodes, with resolution of
    /// half an ulp.
    pub fn from_f64(x: f64) -> Result<Self> {
        if !x.is_finite() {
            return Err(Error::NonFinite(x));
        }
        let value = BigRational::from_float(x).expect("finite");
        let ulp = if x == 0.0 {
            f64::MIN_POSITIVE
        } else {
            (f64::from_bits(x.abs().to_bits() + 1) - x.abs()).max(f64::MIN_POSITIVE)
        };
        let resolution = BigRational::from_float(ulp / 2.0).expect("finite");
        Ok(Alpha {
            value,
            resolution: Some(resolution),
            label: format!("{x:?}"),
        })
    }

    /// `(sqrt 5 - 1) / 2` as a ratio of consecutive Fibonacci numbers, accurate
    /// well beyond 2^-256.
    pub fn golden() -> Self {
        let (mut a, mut b) = (BigUint::one(), BigUint::one());
        while (&b * &b).bits() <= NAMED_PRECISION_BITS + 4 {
            let c = &a + &b;
            a = b;
            b = c;
        }
        Alpha {
            value: BigRational::new(a.into(), b.into()),
            resolution: Some(pow2_inv(NAMED_PRECISION_BITS)),
            label: "golden".into(),
        }
    }

    /// The exact partial sum `sum_{j=0}^{jmax} 2^{-j!}`.
    pub fn liouville(jmax: u32) -> Result<Self> {
        if jmax > 10 {
            return Err(Error::InvalidArgument(format!(
                "liouville:{jmax} needs 2^{{{jmax}!}} denominators; at most 10 supported"
            )));
        }
        let mut sum = BigRational::zero();
        let mut fact = 1u64;
        for j in 0..=jmax as u64 {
            if j > 0 {
                fact *= j;
            }
            sum += pow2_inv(fact);
        }
        Ok(Alpha {
            value: sum,
            resolution: None,
            label: format!("liouville:{jmax}"),
        })
    }

    /// Accepts `golden`, `liouville:J`, `p/q` and plain decimals such as
    /// `0.25` or `-1.5e-3` (decimals are read exactly).
    pub fn parse(spec: &str) -> Result<Self> {
        let s = spec.trim();
        let bad = || Error::Format(format!("cannot parse alpha {spec:?}"));
        if s == "golden" {
            return Ok(Alpha::golden());
        }
        if let Some(j) = s.strip_prefix("liouville:") {
            return Alpha::liouville(j.parse().map_err(|_| bad())?);
        }
        let value = if let Some((p, q)) = s.split_once('/') {
            let p = BigInt::from_str(p.trim()).map_err(|_| bad())?;
            let q = BigInt::from_str(q.trim()).map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            BigRational::new(p, q)
        } else {
            parse_decimal(s).ok_or_else(bad)?
        };
        let mut a = Alpha::exact(value);
        a.label = s.to_string();
        Ok(a)
    }

    pub fn value(&self) -> &BigRational {
        &self.value
    }

    pub fn resolution(&self) -> Option<&BigRational> {
        self.resolution.as_ref()
    }

    pub fn is_exact(&self) -> bool {
        self.resolution.is_none()
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn to_f64(&self) -> f64 {
        ratio_to_f64(&self.value)
    }

    /// `n alpha - round(n alpha)`, in `(-1/2, 1/2]`, exactly.
    pub fn signed_distance(&self, n: &BigUint) -> BigRational {
        let r = &self.value * BigRational::from_integer(BigInt::from(n.clone()));
        let fr = &r - r.floor();
        if fr > BigRational::new(1.into(), 2.into()) {
            fr - BigRational::one()
        } else {
            fr
        }
    }

    /// `||n alpha||` as a double, computed from the exact rational.
    pub fn dist_to_integer(&self, n: &BigUint) -> f64 {
        ratio_to_f64(&self.signed_distance(n)).abs()
    }

    /// The small divisor `e^{2 pi i n alpha} - 1`, formed from the exact
    /// fractional part so that tiny phases keep full relative accuracy.
    pub fn small_divisor(&self, n: &BigUint) -> Complex64 {
        let s = ratio_to_f64(&self.signed_distance(n));
        let h = (std::f64::consts::PI * s).sin();
        Complex64::new(-2.0 * h * h, (std::f64::consts::TAU * s).sin())
    }
}

impl fmt::Display for Alpha {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label)
    }
}

impl FromStr for Alpha {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Alpha::parse(s)
    }
}

fn parse_decimal(s: &str) -> Option<BigRational> {
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (neg, mantissa) = match mantissa.strip_prefix('-') {
        Some(m) => (true, m),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int, frac) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if int.is_empty() && frac.is_empty() {
        return None;
    }
    if !int.bytes().chain(frac.bytes()).all(|b| b.is_ascii_digit()) {
        return None;
    }
    let digits = BigInt::from_str(&format!("{int}{frac}0")).ok()? / 10;
    let scale = exp - frac.len() as i32;
    let ten = BigInt::from(10);
    let mut r = if scale >= 0 {
        BigRational::from_integer(digits * num_traits::pow(ten, scale as usize))
    } else {
        BigRational::new(digits, num_traits::pow(ten, (-scale) as usize))
    };
    if neg {
        r = -r;
    }
    Some(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Signed;

    fn rat(p: i64, q: i64) -> BigRational {
        BigRational::new(p.into(), q.into())
    }

    #[test]
    fn parses_spec_forms() {
        assert_eq!(Alpha::parse("0.5").unwrap().value(), &rat(1, 2));
        assert_eq!(Alpha::parse("2.25").unwrap().value(), &rat(9, 4));
        assert_eq!(Alpha::parse("-1.5e-3").unwrap().value(), &rat(-3, 2000));
        assert_eq!(Alpha::parse("0.1").unwrap().value(), &rat(1, 10));
        assert_eq!(Alpha::parse(".75").unwrap().value(), &rat(3, 4));
        assert_eq!(Alpha::parse("3/12").unwrap().value(), &rat(1, 4));
        assert!(Alpha::parse("1/0").is_err());
        assert!(Alpha::parse("abc").is_err());
        assert!(Alpha::parse("1.2.3").is_err());
        assert!(Alpha::parse(".").is_err());
        assert_eq!(Alpha::parse("golden").unwrap().label(), "golden");
        assert!(Alpha::parse("liouville:x").is_err());
    }

    #[test]
    fn golden_is_accurate() {
        let g = Alpha::golden();
        assert!((g.to_f64() - (5f64.sqrt() - 1.0) / 2.0).abs() < 1e-16);
        // x^2 + x - 1 = 0 up to the stored precision
        let v = g.value();
        let resid = v * v + v - BigRational::one();
        assert!(resid.abs() < pow2_inv(NAMED_PRECISION_BITS));
    }

    #[test]
    fn liouville_partial_sums() {
        // 0! = 1! so the first two terms coincide
        let a = Alpha::liouville(3).unwrap();
        assert_eq!(a.value(), &(rat(1, 1) + rat(1, 4) + rat(1, 64)));
        assert!(a.is_exact());
        assert!(Alpha::liouville(11).is_err());
    }

    #[test]
    fn float_input_is_dyadic() {
        let a = Alpha::from_f64(0.1).unwrap();
        assert_ne!(a.value(), &rat(1, 10));
        assert_eq!(a.to_f64(), 0.1);
        assert!(a.resolution().is_some());
        assert!(Alpha::from_f64(f64::NAN).is_err());
    }

    #[test]
    fn distances_and_divisors() {
        let a = Alpha::parse("3/8").unwrap();
        assert_eq!(a.signed_distance(&3u32.into()), rat(1, 8));
        assert_eq!(a.signed_distance(&2u32.into()), rat(-1, 4));
        assert_eq!(a.signed_distance(&4u32.into()), rat(1, 2));
        assert_eq!(a.dist_to_integer(&8u32.into()), 0.0);

        let l = Alpha::liouville(6).unwrap();
        let n = BigUint::one() << 24u32;
        let d = l.small_divisor(&n);
        let s = l.dist_to_integer(&n);
        assert!(s > 0.0 && s < 1e-28);
        let expect = std::f64::consts::TAU * s;
        assert!((d.norm() - expect).abs() <= 1e-12 * expect);
        for k in 1..50u32 {
            let d = a.small_divisor(&k.into());
            let th = std::f64::consts::TAU * 0.375 * k as f64;
            let direct = Complex64::new(th.cos() - 1.0, th.sin());
            assert!((d - direct).norm() < 1e-12);
        }
    }
}
