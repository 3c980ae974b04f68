//! Exact arithmetic helpers: the rational type used for thresholds and bounds,
//! thresholds extended with `+∞`, parsing, and decimal rendering.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::{BigRational, Ratio};
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = Ratio<i128>;

pub fn int(v: u64) -> Rational {
    Rational::from_integer(v as i128)
}

pub fn ratio(num: i128, den: i128) -> Rational {
    Rational::new(num, den)
}

pub fn to_big(r: &Rational) -> BigRational {
    BigRational::new(BigInt::from(*r.numer()), BigInt::from(*r.denom()))
}

pub fn to_f64(r: &Rational) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// Smallest integer `n` with `n >= r`.
pub fn ceil(r: &Rational) -> i128 {
    r.ceil().to_integer()
}

/// A purchase threshold. `Infinite` is never reached.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Threshold {
    Finite(Rational),
    Infinite,
}

impl Threshold {
    pub fn from_int(v: u64) -> Self {
        Threshold::Finite(int(v))
    }

    /// `value / divisor`, with division by zero mapped to `+∞`.
    pub fn divide(value: Rational, divisor: Rational) -> Self {
        if divisor.is_zero() {
            Threshold::Infinite
        } else {
            Threshold::Finite(value / divisor)
        }
    }

    pub fn is_reached_by(&self, value: &Rational) -> bool {
        match self {
            Threshold::Finite(t) => value >= t,
            Threshold::Infinite => false,
        }
    }

    /// `min{value, self}`; `min{x, +∞} = x`.
    pub fn cap(&self, value: Rational) -> Rational {
        match self {
            Threshold::Finite(t) if *t < value => *t,
            _ => value,
        }
    }

    pub fn finite(&self) -> Option<Rational> {
        match self {
            Threshold::Finite(t) => Some(*t),
            Threshold::Infinite => None,
        }
    }
}

impl PartialOrd for Threshold {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Threshold {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Threshold::Finite(a), Threshold::Finite(b)) => a.cmp(b),
            (Threshold::Finite(_), Threshold::Infinite) => Ordering::Less,
            (Threshold::Infinite, Threshold::Finite(_)) => Ordering::Greater,
            (Threshold::Infinite, Threshold::Infinite) => Ordering::Equal,
        }
    }
}

impl fmt::Display for Threshold {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Threshold::Finite(t) => write!(f, "{t}"),
            Threshold::Infinite => f.write_str("inf"),
        }
    }
}

/// Parses `"3"`, `"-2"`, `"1/4"` or `"0.25"` exactly.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let s = text.trim();
    let bad = || {
        Error::Config(format!(
            "`{text}` is not a rational number (use e.g. 1/4 or 0.25)"
        ))
    };
    if let Some((n, d)) = s.split_once('/') {
        let n: i128 = n.trim().parse().map_err(|_| bad())?;
        let d: i128 = d.trim().parse().map_err(|_| bad())?;
        if d == 0 {
            return Err(Error::Config(format!("`{text}` has a zero denominator")));
        }
        return Ok(Rational::new(n, d));
    }
    if let Some((whole, frac)) = s.split_once('.') {
        if frac.is_empty() || frac.len() > 18 || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let negative = whole.starts_with('-');
        let whole_digits = whole.trim_start_matches(['-', '+']);
        let w: i128 = if whole_digits.is_empty() {
            0
        } else {
            whole_digits.parse().map_err(|_| bad())?
        };
        let f: i128 = frac.parse().map_err(|_| bad())?;
        let scale = 10i128.pow(frac.len() as u32);
        let magnitude = Rational::new(w * scale + f, scale);
        return Ok(if negative { -magnitude } else { magnitude });
    }
    s.parse::<i128>()
        .map(Rational::from_integer)
        .map_err(|_| bad())
}

/// Renders `value` with exactly `digits` significant digits in plain decimal
/// notation, rounding half away from zero. Exact: no float conversion.
pub fn format_significant(value: &BigRational, digits: u32) -> String {
    assert!(digits > 0);
    if value.is_zero() {
        return format!("{:.*}", (digits - 1) as usize, 0.0);
    }
    let negative = value.is_negative();
    let abs = value.abs();
    let (num, den) = (abs.numer().clone(), abs.denom().clone());

    // exponent e with 10^e <= abs < 10^(e+1)
    let mut e: i64 = num.to_string().len() as i64 - den.to_string().len() as i64;
    let ten = BigInt::from(10);
    let pow10 = |k: i64| -> BigInt { num_traits::pow(ten.clone(), k as usize) };
    let ge_pow = |e: i64| -> bool {
        if e >= 0 {
            num >= &den * pow10(e)
        } else {
            &num * pow10(-e) >= den
        }
    };
    while !ge_pow(e) {
        e -= 1;
    }
    while ge_pow(e + 1) {
        e += 1;
    }

    // scaled = round(abs * 10^(digits-1-e))
    let shift = digits as i64 - 1 - e;
    let (sn, sd) = if shift >= 0 {
        (&num * pow10(shift), den.clone())
    } else {
        (num.clone(), &den * pow10(-shift))
    };
    let (q, r) = sn.div_rem(&sd);
    let mut scaled = q;
    if BigInt::from(2) * r >= sd {
        scaled += 1;
    }
    // rounding may carry into a new digit (e.g. 9.999.. -> 10.00..)
    let mut shift = shift;
    if scaled.to_string().len() as u32 > digits {
        scaled /= 10;
        shift -= 1;
    }

    let mut s = scaled.to_string();
    if shift > 0 {
        let shift = shift as usize;
        if s.len() <= shift {
            s = format!("{}{}", "0".repeat(shift - s.len() + 1), s);
        }
        s.insert(s.len() - shift, '.');
    } else if shift < 0 {
        s.push_str(&"0".repeat((-shift) as usize));
    }
    if negative && scaled.sign() != Sign::NoSign {
        s.insert(0, '-');
    }
    s
}

pub fn big_to_f64(value: &BigRational) -> f64 {
    value.to_f64().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn parses_fractions_and_decimals() {
        assert_eq!(parse_rational("1/4").unwrap(), ratio(1, 4));
        assert_eq!(parse_rational("0.25").unwrap(), ratio(1, 4));
        assert_eq!(parse_rational(".5").unwrap(), ratio(1, 2));
        assert_eq!(parse_rational("-0.5").unwrap(), ratio(-1, 2));
        assert_eq!(parse_rational("3").unwrap(), int(3));
        assert_eq!(parse_rational(" 6/8 ").unwrap(), ratio(3, 4));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational("1.").is_err());
    }

    #[test]
    fn significant_digits() {
        assert_eq!(format_significant(&big(763, 270), 12), "2.82592592593");
        assert_eq!(format_significant(&big(1, 1), 12), "1.00000000000");
        assert_eq!(format_significant(&big(6, 1), 4), "6.000");
        assert_eq!(format_significant(&big(1, 3), 3), "0.333");
        assert_eq!(format_significant(&big(2, 3), 3), "0.667");
        assert_eq!(format_significant(&big(1, 800), 2), "0.0013");
        assert_eq!(format_significant(&big(12345, 1), 3), "12300");
        assert_eq!(format_significant(&big(9999, 1000), 3), "10.0");
        assert_eq!(format_significant(&big(-7, 4), 3), "-1.75");
        assert_eq!(format_significant(&big(0, 1), 3), "0.00");
    }

    #[test]
    fn threshold_ordering_and_cap() {
        let t = Threshold::Finite(ratio(9, 4));
        assert!(t.is_reached_by(&int(3)));
        assert!(!t.is_reached_by(&int(2)));
        assert!(!Threshold::Infinite.is_reached_by(&int(1_000_000)));
        assert_eq!(Threshold::Infinite.cap(int(7)), int(7));
        assert_eq!(t.cap(int(7)), ratio(9, 4));
        assert_eq!(
            Threshold::divide(int(9), Rational::zero()),
            Threshold::Infinite
        );
        assert!(t < Threshold::Infinite);
    }
}
