//! Arbitrary-precision rationals: the scalar substrate.
//!
//! `Rational` is a reduced fraction with positive denominator; the backing
//! type guarantees canonical form on construction, so equality is structural.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

pub type Rational = num_rational::BigRational;

/// Parses "p" or "p/q" with optional leading sign; the result is reduced.
pub fn parse_rational(s: &str) -> Result<Rational, String> {
    let s = s.trim();
    if s.is_empty() {
        return Err("empty rational".to_string());
    }
    let (num_str, den_str) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num_str
        .parse()
        .map_err(|_| format!("bad integer {num_str:?}"))?;
    let den: BigInt = den_str
        .parse()
        .map_err(|_| format!("bad integer {den_str:?}"))?;
    if den.is_zero() {
        return Err("zero denominator".to_string());
    }
    Ok(Rational::new(num, den))
}

/// Formats as "p" for integers and "p/q" otherwise.
pub fn format_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Exact square root when the value is a square of a rational.
pub fn rational_sqrt(r: &Rational) -> Option<Rational> {
    if r.is_negative() {
        return None;
    }
    let sn = r.numer().sqrt();
    let sd = r.denom().sqrt();
    if &(&sn * &sn) == r.numer() && &(&sd * &sd) == r.denom() {
        Some(Rational::new(sn, sd))
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    #[test]
    fn parse_reduces_to_canonical_form() {
        assert_eq!(parse_rational("2/4").unwrap(), parse_rational("1/2").unwrap());
        assert_eq!(format_rational(&parse_rational("2/4").unwrap()), "1/2");
        assert_eq!(format_rational(&parse_rational("-6/3").unwrap()), "-2");
        assert_eq!(format_rational(&parse_rational("5/-10").unwrap()), "-1/2");
        assert_eq!(parse_rational("7").unwrap(), Rational::from(BigInt::from(7)));
    }

    #[test]
    fn parse_rejects_garbage() {
        assert!(parse_rational("").is_err());
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("a/b").is_err());
        assert!(parse_rational("1/2/3").is_err());
    }

    #[test]
    fn sqrt_of_squares() {
        let r = Rational::new(BigInt::from(9), BigInt::from(4));
        assert_eq!(rational_sqrt(&r), Some(Rational::new(BigInt::from(3), BigInt::from(2))));
        assert_eq!(rational_sqrt(&Rational::one()), Some(Rational::one()));
        assert_eq!(rational_sqrt(&Rational::new(BigInt::from(2), BigInt::one())), None);
        assert_eq!(rational_sqrt(&Rational::new(BigInt::from(-4), BigInt::one())), None);
    }
}
