//! Exact rationals and their canonical `"a/b"` string form.

use num_rational::Rational64;
use num_traits::{Signed, Zero};

pub type Q = Rational64;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("malformed rational {0:?}")]
pub struct ParseRationalError(pub String);

/// Parses `"a/b"` or a bare integer `"a"`. The value is normalised, so
/// `"2/4"` reads as one half.
pub fn parse_q(s: &str) -> Result<Q, ParseRationalError> {
    let bad = || ParseRationalError(s.to_string());
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s.trim(), "1"),
    };
    let num: i64 = num.parse().map_err(|_| bad())?;
    let den: i64 = den.parse().map_err(|_| bad())?;
    if den == 0 {
        return Err(bad());
    }
    Ok(Q::new(num, den))
}

/// Lowest terms with a positive denominator, always written with a slash.
pub fn fmt_q(q: &Q) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

/// Representative in `[0, 1)`.
pub fn frac(q: Q) -> Q {
    q - q.floor()
}

pub fn is_integer(q: &Q) -> bool {
    q.is_integer()
}

pub fn abs(q: &Q) -> Q {
    q.abs()
}

pub fn zero() -> Q {
    Q::zero()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format() {
        assert_eq!(fmt_q(&parse_q("2/4").unwrap()), "1/2");
        assert_eq!(fmt_q(&parse_q("-3").unwrap()), "-3/1");
        assert_eq!(fmt_q(&parse_q("0").unwrap()), "0/1");
        assert_eq!(fmt_q(&parse_q("3/-6").unwrap()), "-1/2");
        assert!(parse_q("1/0").is_err());
        assert!(parse_q("x").is_err());
    }

    #[test]
    fn frac_wraps_into_unit_interval() {
        assert_eq!(frac(Q::new(-1, 3)), Q::new(2, 3));
        assert_eq!(frac(Q::new(7, 3)), Q::new(1, 3));
        assert_eq!(frac(Q::from_integer(2)), Q::zero());
    }
}
