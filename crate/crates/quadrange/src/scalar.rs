//! Scalars: exact rationals and binary64 floats.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::QrError;

pub type Rat = BigRational;

pub fn ri(v: i64) -> Rat {
    Rat::from_integer(BigInt::from(v))
}

pub fn rq(p: i64, q: i64) -> Rat {
    Rat::new(BigInt::from(p), BigInt::from(q))
}

pub fn to_f64(r: &Rat) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        if r.is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        }
    })
}

/// Exact dyadic value of a finite float.
pub fn from_f64_exact(x: f64) -> Option<Rat> {
    Rat::from_float(x)
}

/// Best rational approximation with denominator at most `max_den` (continued fractions).
pub fn rationalize(x: f64, max_den: u64) -> Rat {
    if !x.is_finite() {
        return Rat::zero();
    }
    let neg = x < 0.0;
    let mut v = x.abs();
    let (mut p0, mut q0, mut p1, mut q1) = (0u128, 1u128, 1u128, 0u128);
    for _ in 0..64 {
        let a = v.floor();
        if a > 1e18 {
            break;
        }
        let ai = a as u128;
        let p2 = ai * p1 + p0;
        let q2 = ai * q1 + q0;
        if q2 > max_den as u128 {
            break;
        }
        p0 = p1;
        q0 = q1;
        p1 = p2;
        q1 = q2;
        let frac = v - a;
        if frac < 1e-15 {
            break;
        }
        v = 1.0 / frac;
    }
    if q1 == 0 {
        return Rat::zero();
    }
    let r = Rat::new(BigInt::from(p1), BigInt::from(q1));
    if neg {
        -r
    } else {
        r
    }
}

/// Parses "p/q", integers and decimal literals ("1.25", "-3e-2") exactly.
pub fn parse_rat(s: &str) -> Result<Rat, QrError> {
    let s = s.trim();
    let bad = || QrError::Parse(format!("not a rational number: {s:?}"));
    if let Some((p, q)) = s.split_once('/') {
        let p = BigInt::from_str(p.trim()).map_err(|_| bad())?;
        let q = BigInt::from_str(q.trim()).map_err(|_| bad())?;
        if q.is_zero() {
            return Err(QrError::Parse(format!("zero denominator in {s:?}")));
        }
        return Ok(Rat::new(p, q));
    }
    let (mant, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (s, 0),
    };
    let (neg, mant) = match mant.strip_prefix('-') {
        Some(m) => (true, m),
        None => (false, mant.strip_prefix('+').unwrap_or(mant)),
    };
    let (ip, fp) = mant.split_once('.').unwrap_or((mant, ""));
    if ip.is_empty() && fp.is_empty() {
        return Err(bad());
    }
    if !ip.chars().chain(fp.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let digits = format!("{ip}{fp}");
    let num = BigInt::from_str(if digits.is_empty() { "0" } else { &digits }).map_err(|_| bad())?;
    let scale = exp - fp.len() as i32;
    let ten = BigInt::from(10);
    let mut r = Rat::from_integer(num);
    if scale >= 0 {
        r *= Rat::from_integer(num_traits::pow(ten, scale as usize));
    } else {
        r /= Rat::from_integer(num_traits::pow(ten, (-scale) as usize));
    }
    Ok(if neg { -r } else { r })
}

pub fn fmt_rat(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Exact square root when `r` is the square of a rational.
pub fn rat_sqrt(r: &Rat) -> Option<Rat> {
    if r.is_negative() {
        return None;
    }
    let p = r.numer().sqrt();
    let q = r.denom().sqrt();
    if &(&p * &p) == r.numer() && &(&q * &q) == r.denom() {
        Some(Rat::new(p, q))
    } else {
        None
    }
}

pub fn sign(r: &Rat) -> i32 {
    if r.is_positive() {
        1
    } else if r.is_negative() {
        -1
    } else {
        0
    }
}

/// Least common multiple of the denominators.
pub fn common_denom<'a>(it: impl IntoIterator<Item = &'a Rat>) -> BigInt {
    it.into_iter()
        .fold(BigInt::one(), |acc, r| acc.lcm(r.denom()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exact,
    Float,
}

/// A scalar carrying its arithmetic mode. Mixing modes is an error.
#[derive(Clone, Debug, PartialEq)]
pub enum Scalar {
    Exact(Rat),
    Float(f64),
}

impl Scalar {
    pub fn mode(&self) -> Mode {
        match self {
            Scalar::Exact(_) => Mode::Exact,
            Scalar::Float(_) => Mode::Float,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Scalar::Exact(r) => to_f64(r),
            Scalar::Float(x) => *x,
        }
    }

    pub fn as_exact(&self) -> Option<&Rat> {
        match self {
            Scalar::Exact(r) => Some(r),
            Scalar::Float(_) => None,
        }
    }

    fn combine(
        &self,
        other: &Scalar,
        fr: impl Fn(&Rat, &Rat) -> Rat,
        ff: impl Fn(f64, f64) -> f64,
    ) -> Result<Scalar, QrError> {
        match (self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => Ok(Scalar::Exact(fr(a, b))),
            (Scalar::Float(a), Scalar::Float(b)) => Ok(Scalar::Float(ff(*a, *b))),
            _ => Err(QrError::MixedMode),
        }
    }

    pub fn add(&self, o: &Scalar) -> Result<Scalar, QrError> {
        self.combine(o, |a, b| a + b, |a, b| a + b)
    }

    pub fn sub(&self, o: &Scalar) -> Result<Scalar, QrError> {
        self.combine(o, |a, b| a - b, |a, b| a - b)
    }

    pub fn mul(&self, o: &Scalar) -> Result<Scalar, QrError> {
        self.combine(o, |a, b| a * b, |a, b| a * b)
    }

    pub fn div(&self, o: &Scalar) -> Result<Scalar, QrError> {
        match (self, o) {
            (Scalar::Exact(_), Scalar::Exact(b)) if b.is_zero() => {
                Err(QrError::Precondition("division by zero".into()))
            }
            _ => self.combine(o, |a, b| a / b, |a, b| a / b),
        }
    }

    pub fn neg(&self) -> Scalar {
        match self {
            Scalar::Exact(r) => Scalar::Exact(-r),
            Scalar::Float(x) => Scalar::Float(-x),
        }
    }
}

impl serde::Serialize for Scalar {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Scalar::Exact(r) => s.serialize_str(&fmt_rat(r)),
            Scalar::Float(x) => crate::report::ser_ext(x, s),
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Exact(r) => write!(f, "{}", fmt_rat(r)),
            Scalar::Float(x) => write!(f, "{x}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_rationals_and_decimals() {
        assert_eq!(parse_rat("3/6").unwrap(), rq(1, 2));
        assert_eq!(parse_rat("-1.25").unwrap(), rq(-5, 4));
        assert_eq!(parse_rat("2e-1").unwrap(), rq(1, 5));
        assert_eq!(parse_rat("7").unwrap(), ri(7));
        assert!(parse_rat("1/0").is_err());
        assert!(parse_rat("abc").is_err());
    }

    #[test]
    fn continued_fraction_recovers_simple_fractions() {
        assert_eq!(rationalize(1.0 / 3.0, 1_000_000), rq(1, 3));
        assert_eq!(rationalize(-0.7071067811865476, 100), rq(-70, 99));
        assert_eq!(rationalize(2.0, 10), ri(2));
    }

    #[test]
    fn sqrt_only_for_squares() {
        assert_eq!(rat_sqrt(&rq(9, 4)), Some(rq(3, 2)));
        assert_eq!(rat_sqrt(&ri(2)), None);
        assert_eq!(rat_sqrt(&ri(-1)), None);
    }

    #[test]
    fn mixed_mode_is_an_error() {
        let a = Scalar::Exact(ri(1));
        let b = Scalar::Float(1.0);
        assert!(matches!(a.add(&b), Err(QrError::MixedMode)));
        assert_eq!(a.add(&a).unwrap(), Scalar::Exact(ri(2)));
    }
}
