//! Number types the calculus engine runs on.
//!
//! Everything in the crate is generic over [`Scalar`], which is implemented
//! for `f64` and for [`Rational`] (arbitrary precision). Purely scattered
//! windows evaluated in `Rational` are exact; dense segments always go
//! through `f64` quadrature and are converted back.

use std::fmt::Debug;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Num, Signed, ToPrimitive, Zero};

/// Arbitrary precision rational used for exact evaluation.
pub type Rational = BigRational;

pub trait Scalar: Num + Signed + Clone + PartialOrd + Debug + Send + Sync + 'static {
    /// True when arithmetic on this type is exact.
    const EXACT: bool;

    /// Exact conversion for `Rational`; panics on non-finite input.
    fn from_f64(x: f64) -> Self;
    fn from_i64(x: i64) -> Self;
    fn to_f64(&self) -> f64;

    /// Parses an integer, decimal (`1.25`), fraction (`3/7`) or scientific
    /// literal. Decimals and fractions are exact for `Rational`.
    fn parse_literal(s: &str) -> Option<Self>;

    fn two() -> Self {
        Self::one() + Self::one()
    }

    fn half() -> Self {
        Self::one() / Self::two()
    }

    fn min_of(a: &Self, b: &Self) -> Self {
        if a <= b {
            a.clone()
        } else {
            b.clone()
        }
    }

    fn max_of(a: &Self, b: &Self) -> Self {
        if a >= b {
            a.clone()
        } else {
            b.clone()
        }
    }

    /// Integer power by repeated multiplication (exact for `Rational`).
    fn powi(&self, n: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..n {
            acc = acc * self.clone();
        }
        acc
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn from_f64(x: f64) -> Self {
        x
    }

    fn from_i64(x: i64) -> Self {
        x as f64
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn parse_literal(s: &str) -> Option<Self> {
        let s = s.trim();
        if let Some((n, d)) = s.split_once('/') {
            let n: f64 = n.trim().parse().ok()?;
            let d: f64 = d.trim().parse().ok()?;
            if d == 0.0 {
                return None;
            }
            return Some(n / d);
        }
        let v: f64 = s.parse().ok()?;
        v.is_finite().then_some(v)
    }
}

impl Scalar for Rational {
    const EXACT: bool = true;

    fn from_f64(x: f64) -> Self {
        BigRational::from_float(x).expect("non-finite value has no rational representation")
    }

    fn from_i64(x: i64) -> Self {
        <BigRational as FromPrimitive>::from_i64(x).expect("i64 always converts")
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or_else(|| {
            // numerator or denominator too large for a direct conversion
            let n = self.numer().to_f64().unwrap_or(f64::NAN);
            let d = self.denom().to_f64().unwrap_or(f64::NAN);
            n / d
        })
    }

    fn parse_literal(s: &str) -> Option<Self> {
        parse_rational(s.trim())
    }
}

fn parse_rational(s: &str) -> Option<Rational> {
    if s.is_empty() {
        return None;
    }
    if let Some((n, d)) = s.split_once('/') {
        let n = parse_rational(n.trim())?;
        let d = parse_rational(d.trim())?;
        if d.is_zero() {
            return None;
        }
        return Some(n / d);
    }
    if s.contains(['e', 'E']) || s.eq_ignore_ascii_case("inf") || s.eq_ignore_ascii_case("nan") {
        let v: f64 = s.parse().ok()?;
        return BigRational::from_float(v);
    }
    let (neg, body) = match s.as_bytes()[0] {
        b'-' => (true, &s[1..]),
        b'+' => (false, &s[1..]),
        _ => (false, s),
    };
    let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.bytes().chain(frac_part.bytes()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits = format!("{int_part}{frac_part}");
    let numer = BigInt::from_str_radix(if digits.is_empty() { "0" } else { &digits }, 10).ok()?;
    let denom = num_traits::pow(BigInt::from(10), frac_part.len());
    let r = BigRational::new(numer, denom);
    Some(if neg { -r } else { r })
}

/// Formats a float with 12 significant digits, locale independent.
pub fn format_sig12(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let exp = x.abs().log10().floor() as i32;
    if (-5..12).contains(&exp) {
        let decimals = (11 - exp).max(0) as usize;
        let s = format!("{x:.decimals$}");
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s
        }
    } else {
        let s = format!("{x:.11e}");
        match s.split_once('e') {
            Some((mant, e)) if mant.contains('.') => {
                format!("{}e{}", mant.trim_end_matches('0').trim_end_matches('.'), e)
            }
            _ => s,
        }
    }
}

/// Rounds to 12 significant digits (the value [`format_sig12`] prints).
pub fn round_sig12(x: f64) -> f64 {
    format_sig12(x).parse().unwrap_or(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_exact_decimals() {
        let r = Rational::parse_literal("1.1").unwrap();
        assert_eq!(r, Rational::new(11.into(), 10.into()));
        let r = Rational::parse_literal("-3/4").unwrap();
        assert_eq!(r, Rational::new((-3).into(), 4.into()));
        assert_eq!(Rational::parse_literal(".5").unwrap(), Rational::half());
        assert!(Rational::parse_literal("abc").is_none());
        assert!(Rational::parse_literal("1/0").is_none());
        assert_eq!(f64::parse_literal("1/4"), Some(0.25));
    }

    #[test]
    fn from_f64_is_exact() {
        let r = <Rational as Scalar>::from_f64(0.1);
        assert_eq!(Scalar::to_f64(&r), 0.1);
        assert_ne!(r, Rational::parse_literal("0.1").unwrap());
    }

    #[test]
    fn sig12_formatting() {
        assert_eq!(format_sig12(1.0 / 12.0), "0.0833333333333");
        assert_eq!(format_sig12(7.0 / 48.0), "0.145833333333");
        assert_eq!(format_sig12(2.0), "2");
        assert_eq!(format_sig12(-1.5e-9), "-1.5e-9");
        assert_eq!(format_sig12(0.0), "0");
    }
}
