//! Exact rationals and their text form.
//!
//! A rational is written `p/q` with `q > 0` and `gcd(p, q) = 1`, or just `p`
//! when `q = 1`. This is the form every report and coefficient dump uses.

use num::{BigInt, BigRational, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

pub fn ratio(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

/// Canonical `p/q` form. `BigRational` is always stored reduced with a
/// positive denominator, so its `Display` already is canonical.
pub fn format(q: &Rational) -> String {
    q.to_string()
}

pub fn parse(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    let (num, den) = match s.split_once('/') {
        Some((p, q)) => (p.trim(), q.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(num, den))
}

/// Nearest `f64`. Only the numeric oracle calls this.
pub fn to_f64(q: &Rational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_text_form() {
        assert_eq!(format(&ratio(6, -4)), "-3/2");
        assert_eq!(format(&ratio(10, 5)), "2");
        assert_eq!(format(&int(0)), "0");
    }

    #[test]
    fn parse_accepts_integers_and_fractions() {
        assert_eq!(parse("3/2").unwrap(), ratio(3, 2));
        assert_eq!(parse(" -5/4 ").unwrap(), ratio(-5, 4));
        assert_eq!(parse("7").unwrap(), int(7));
        assert_eq!(parse("4/-6").unwrap(), ratio(-2, 3));
    }

    #[test]
    fn parse_rejects_garbage() {
        assert!(parse("1/0").is_err());
        assert!(parse("x").is_err());
        assert!(parse("1.5").is_err());
        assert!(parse("").is_err());
    }

    #[test]
    fn float_conversion() {
        assert_eq!(to_f64(&ratio(3, 2)), 1.5);
        assert_eq!(to_f64(&ratio(-1, 4)), -0.25);
    }
}
