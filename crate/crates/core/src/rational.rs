//! Exact rationals, extended with `∞`, and their string encodings.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

pub type Q = BigRational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("invalid rational {0:?}")]
pub struct ParseRationalError(pub String);

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn frac(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// Accepts `"3/2"`, `"-7"`, `" 1 / 4 "`.
pub fn parse_q(s: &str) -> Result<Q, ParseRationalError> {
    let bad = || ParseRationalError(s.to_string());
    let t = s.trim();
    let (n, d) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let n: BigInt = n.parse().map_err(|_| bad())?;
    let d: BigInt = d.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(bad());
    }
    Ok(Q::new(n, d))
}

pub fn fmt_q(x: &Q) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Decimal rendering for display only; certified fields stay exact.
pub fn approx(x: &Q) -> f64 {
    use num_traits::ToPrimitive;
    x.to_f64().unwrap_or(f64::NAN)
}

/// Least common multiple of the denominators.
pub fn denominator_lcm<'a>(xs: impl IntoIterator<Item = &'a Q>) -> BigInt {
    use num_integer::Integer;
    xs.into_iter()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
}

/// Serde adapter storing a rational as its string form.
pub mod qstr {
    use super::*;

    pub fn serialize<S: Serializer>(x: &Q, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&fmt_q(x))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Q, D::Error> {
        let raw = RawNumber::deserialize(d)?;
        raw.into_q().map_err(serde::de::Error::custom)
    }

    /// Also tolerates bare JSON integers.
    #[derive(Deserialize)]
    #[serde(untagged)]
    pub(crate) enum RawNumber {
        Str(String),
        Int(i64),
    }

    impl RawNumber {
        pub(crate) fn into_q(self) -> Result<Q, ParseRationalError> {
            match self {
                RawNumber::Str(s) => parse_q(&s),
                RawNumber::Int(i) => Ok(q(i)),
            }
        }
    }
}

/// A nonnegative-or-signed rational with a top element `∞`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ExtQ {
    Finite(Q),
    Infinite,
}

impl ExtQ {
    pub fn zero() -> Self {
        ExtQ::Finite(Q::zero())
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, ExtQ::Finite(_))
    }

    pub fn finite(&self) -> Option<&Q> {
        match self {
            ExtQ::Finite(x) => Some(x),
            ExtQ::Infinite => None,
        }
    }

    pub fn parse(s: &str) -> Result<Self, ParseRationalError> {
        match s.trim() {
            "inf" | "infinity" | "∞" => Ok(ExtQ::Infinite),
            t => parse_q(t).map(ExtQ::Finite),
        }
    }

    pub fn is_negative(&self) -> bool {
        matches!(self, ExtQ::Finite(x) if x.is_negative())
    }
}

impl std::ops::Add for &ExtQ {
    type Output = ExtQ;
    /// Saturates at `∞`.
    fn add(self, rhs: &ExtQ) -> ExtQ {
        match (self, rhs) {
            (ExtQ::Finite(a), ExtQ::Finite(b)) => ExtQ::Finite(a + b),
            _ => ExtQ::Infinite,
        }
    }
}

impl Ord for ExtQ {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (ExtQ::Finite(a), ExtQ::Finite(b)) => a.cmp(b),
            (ExtQ::Finite(_), ExtQ::Infinite) => Ordering::Less,
            (ExtQ::Infinite, ExtQ::Finite(_)) => Ordering::Greater,
            (ExtQ::Infinite, ExtQ::Infinite) => Ordering::Equal,
        }
    }
}

impl PartialOrd for ExtQ {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl From<Q> for ExtQ {
    fn from(x: Q) -> Self {
        ExtQ::Finite(x)
    }
}

impl fmt::Display for ExtQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtQ::Finite(x) => f.write_str(&fmt_q(x)),
            ExtQ::Infinite => f.write_str("inf"),
        }
    }
}

impl Serialize for ExtQ {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for ExtQ {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        match qstr::RawNumber::deserialize(d)? {
            qstr::RawNumber::Str(s) => ExtQ::parse(&s).map_err(serde::de::Error::custom),
            qstr::RawNumber::Int(i) => Ok(ExtQ::Finite(q(i))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_q("3/2").unwrap(), frac(3, 2));
        assert_eq!(parse_q(" -6 / 4").unwrap(), frac(-3, 2));
        assert_eq!(parse_q("5").unwrap(), q(5));
        assert!(parse_q("1/0").is_err());
        assert!(parse_q("x").is_err());
        assert_eq!(fmt_q(&frac(6, 4)), "3/2");
        assert_eq!(fmt_q(&q(-2)), "-2");
    }

    #[test]
    fn extended_order_and_sum() {
        let half = ExtQ::Finite(frac(1, 2));
        assert!(half < ExtQ::Infinite);
        assert_eq!(&half + &ExtQ::Infinite, ExtQ::Infinite);
        assert_eq!(&half + &half, ExtQ::Finite(q(1)));
        assert_eq!(ExtQ::parse("inf").unwrap(), ExtQ::Infinite);
        assert_eq!(serde_json::to_string(&half).unwrap(), "\"1/2\"");
    }

    #[test]
    fn lcm_of_denominators() {
        let xs = [frac(1, 4), frac(5, 6), q(3)];
        assert_eq!(denominator_lcm(xs.iter()), BigInt::from(12));
    }
}
