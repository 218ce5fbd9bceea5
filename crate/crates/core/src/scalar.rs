//! The integer backend every exact rational in the crate is built on.
//!
//! All geometry here is decided by exact inequalities and congruences, so the
//! only admissible scalars are integer types; rationals are `Ratio<T>` over
//! them. `i64` is the default (see the aliases at the crate root), `i128` and
//! `BigInt` work unchanged when coefficients grow.

use std::fmt::{Debug, Display};
use std::hash::Hash;
use std::str::FromStr;

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{FromPrimitive, Signed, ToPrimitive};

/// Signed integer type usable as the numerator/denominator of exact classes.
pub trait Scalar:
    Integer
    + Signed
    + Clone
    + Hash
    + Debug
    + Display
    + FromStr
    + FromPrimitive
    + ToPrimitive
    + Send
    + Sync
    + 'static
{
}

impl<T> Scalar for T where
    T: Integer
        + Signed
        + Clone
        + Hash
        + Debug
        + Display
        + FromStr
        + FromPrimitive
        + ToPrimitive
        + Send
        + Sync
        + 'static
{
}

/// Exact rational over the backend `T`.
pub type Q<T> = Ratio<T>;

/// Embeds a machine integer into the backend.
///
/// Every call site passes ranks, small counters or fiber degrees, all of which
/// fit in any supported backend.
pub fn lift<T: Scalar>(n: i64) -> T {
    T::from_i64(n).expect("small integer must fit the scalar backend")
}

pub fn lift_u<T: Scalar>(n: u64) -> T {
    T::from_u64(n).expect("small integer must fit the scalar backend")
}

pub fn q_int<T: Scalar>(n: i64) -> Q<T> {
    Ratio::from_integer(lift(n))
}

pub fn q_from<T: Scalar>(numer: i64, denom: i64) -> Q<T> {
    Ratio::new(lift(numer), lift(denom))
}

/// Formats as `p` or `p/q`; never a decimal.
pub fn fmt_q<T: Scalar>(q: &Q<T>) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Parses `p` or `p/q` (whitespace tolerated around the parts).
pub fn parse_q<T: Scalar>(s: &str) -> Option<Q<T>> {
    let s = s.trim();
    match s.split_once('/') {
        None => s.parse::<T>().ok().map(Ratio::from_integer),
        Some((p, q)) => {
            let p = p.trim().parse::<T>().ok()?;
            let q = q.trim().parse::<T>().ok()?;
            if q.is_zero() {
                None
            } else {
                Some(Ratio::new(p, q))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    #[test]
    fn parse_and_format_agree() {
        let q: Q<i64> = parse_q("-6/4").unwrap();
        assert_eq!(fmt_q(&q), "-3/2");
        let q: Q<i64> = parse_q(" 7 ").unwrap();
        assert_eq!(fmt_q(&q), "7");
        assert!(parse_q::<i64>("1/0").is_none());
        assert!(parse_q::<i64>("0.5").is_none());
        let big: Q<BigInt> = parse_q("123456789012345678901234567890/3").unwrap();
        assert_eq!(fmt_q(&big), "41152263004115226300411522630");
    }
}
