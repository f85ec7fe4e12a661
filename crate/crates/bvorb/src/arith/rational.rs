//! Helpers around `BigRational`: construction, fractional parts, and the
//! `"p/q"` wire format.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::ArithError;

pub type Q = BigRational;

pub fn q(n: i64, d: i64) -> Q {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn qi(n: i64) -> Q {
    BigRational::from_integer(BigInt::from(n))
}

/// Fractional part in `[0, 1)`.
pub fn frac(x: &Q) -> Q {
    x - x.floor()
}

/// Representative of `x` mod 1 in `(0, 1]`.
pub fn frac_upper(x: &Q) -> Q {
    let f = frac(x);
    if f.is_zero() {
        Q::one()
    } else {
        f
    }
}

pub fn floor_i64(x: &Q) -> i64 {
    x.floor().to_integer().to_i64().expect("floor fits in i64")
}

pub fn ceil_i64(x: &Q) -> i64 {
    x.ceil().to_integer().to_i64().expect("ceil fits in i64")
}

pub fn is_integer(x: &Q) -> bool {
    x.is_integer()
}

/// Exact conversion to an `i64`, if `x` is an integer in range.
pub fn to_i64(x: &Q) -> Option<i64> {
    if x.is_integer() {
        x.to_integer().to_i64()
    } else {
        None
    }
}

/// Renders as `p/q`, always with an explicit denominator.
pub fn fmt_q(x: &Q) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

/// Short form for labels and tables: `p` for integers, `p/q` otherwise.
pub fn fmt_q_short(x: &Q) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        fmt_q(x)
    }
}

/// Parses `p`, `-p`, `p/q` (whitespace around the parts is tolerated).
pub fn parse_q(s: &str) -> Result<Q, ArithError> {
    let bad = || ArithError::Parse(s.chars().take(64).collect());
    let s = s.trim();
    if s.is_empty() || s.len() > 4096 {
        return Err(bad());
    }
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let ok = |t: &str, signed: bool| {
        let body = if signed { t.strip_prefix('-').or_else(|| t.strip_prefix('+')).unwrap_or(t) } else { t };
        !body.is_empty() && body.bytes().all(|b| b.is_ascii_digit())
    };
    if !ok(n, true) || !ok(d, false) {
        return Err(bad());
    }
    let n: BigInt = n.parse().map_err(|_| bad())?;
    let d: BigInt = d.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(ArithError::ZeroDivision);
    }
    Ok(BigRational::new(n, d))
}

pub fn lcm_denoms<'a>(xs: impl IntoIterator<Item = &'a Q>) -> BigInt {
    xs.into_iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
}

pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

pub fn abs_q(x: &Q) -> Q {
    x.abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format_roundtrip() {
        assert!(parse_q("6/-4").is_err());
        assert_eq!(parse_q(" -6/4 ").unwrap(), q(-3, 2));
        assert_eq!(fmt_q(&q(13824, 1)), "13824/1");
        assert_eq!(fmt_q_short(&q(-3, 2)), "-3/2");
        assert!(matches!(parse_q("1/0"), Err(ArithError::ZeroDivision)));
        assert!(parse_q("1/2/3").is_err());
        assert!(parse_q("").is_err());
    }

    #[test]
    fn fractional_parts() {
        assert_eq!(frac(&q(-1, 4)), q(3, 4));
        assert_eq!(frac_upper(&qi(2)), qi(1));
        assert_eq!(frac_upper(&q(-1, 2)), q(1, 2));
        assert_eq!(ceil_i64(&q(-1, 2)), 0);
        assert_eq!(floor_i64(&q(-1, 2)), -1);
    }
}
