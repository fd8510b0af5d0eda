//! Exact rational quantities.
//!
//! Capacities, storage amounts and bandwidths are all kept as exact
//! fractions. On the wire they are `"p/q"` strings (or plain integers).

use std::fmt;
use std::ops::{Add, Mul};
use std::str::FromStr;

use num_rational::Ratio;
use num_traits::Zero;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Exact rational number used for every capacity in the crate.
pub type Q = Ratio<i128>;

pub fn q(n: i128, d: i128) -> Q {
    Q::new(n, d)
}

pub fn qi(n: i128) -> Q {
    Q::from_integer(n)
}

/// Parses `"p/q"`, `"p"` or `"-p/q"`.
pub fn parse_q(s: &str) -> Result<Q> {
    let t = s.trim();
    let bad = || Error::ParseFraction(s.to_string());
    match t.split_once('/') {
        Some((n, d)) => {
            let n: i128 = n.trim().parse().map_err(|_| bad())?;
            let d: i128 = d.trim().parse().map_err(|_| bad())?;
            if d == 0 {
                return Err(bad());
            }
            Ok(Q::new(n, d))
        }
        None => t.parse::<i128>().map(Q::from_integer).map_err(|_| bad()),
    }
}

pub fn format_q(v: &Q) -> String {
    v.to_string()
}

/// Decimal rendering with 12 significant digits, trailing zeros trimmed.
pub fn decimal(v: &Q) -> String {
    let x = *v.numer() as f64 / *v.denom() as f64;
    if x == 0.0 {
        return "0".into();
    }
    let mag = x.abs().log10().floor() as i32;
    let places = (11 - mag).max(0) as usize;
    let s = format!("{x:.places$}");
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

/// Serde adapter for `Q` as a fraction string.
pub mod serde_q {
    use super::*;

    pub fn serialize<S: Serializer>(v: &Q, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format_q(v))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Q, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Str(String),
            Int(i64),
        }
        match Raw::deserialize(d)? {
            Raw::Str(s) => parse_q(&s).map_err(serde::de::Error::custom),
            Raw::Int(i) => Ok(Q::from_integer(i as i128)),
        }
    }
}

/// A nonnegative capacity or the infinity sentinel.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Capacity {
    Finite(Q),
    Infinite,
}

impl Capacity {
    pub const ZERO: Capacity = Capacity::Finite(Q::new_raw(0, 1));

    pub fn is_infinite(&self) -> bool {
        matches!(self, Capacity::Infinite)
    }

    pub fn finite(&self) -> Option<Q> {
        match self {
            Capacity::Finite(v) => Some(*v),
            Capacity::Infinite => None,
        }
    }
}

impl Default for Capacity {
    fn default() -> Self {
        Capacity::Finite(Q::zero())
    }
}

impl From<Q> for Capacity {
    fn from(v: Q) -> Self {
        Capacity::Finite(v)
    }
}

impl Add for Capacity {
    type Output = Capacity;
    fn add(self, rhs: Capacity) -> Capacity {
        match (self, rhs) {
            (Capacity::Finite(a), Capacity::Finite(b)) => Capacity::Finite(a + b),
            _ => Capacity::Infinite,
        }
    }
}

impl std::iter::Sum for Capacity {
    fn sum<I: Iterator<Item = Capacity>>(iter: I) -> Capacity {
        iter.fold(Capacity::default(), Add::add)
    }
}

impl fmt::Display for Capacity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Capacity::Finite(v) => write!(f, "{v}"),
            Capacity::Infinite => f.write_str("inf"),
        }
    }
}

impl FromStr for Capacity {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        if s.trim() == "inf" {
            Ok(Capacity::Infinite)
        } else {
            parse_q(s).map(Capacity::Finite)
        }
    }
}

impl Serialize for Capacity {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Capacity {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// `a·α + b·β` with nonnegative integer coefficients.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
pub struct LinearForm {
    pub a: u64,
    pub b: u64,
}

impl LinearForm {
    pub fn new(a: u64, b: u64) -> Self {
        LinearForm { a, b }
    }

    pub fn eval(&self, alpha: Q, beta: Q) -> Q {
        alpha * qi(self.a as i128) + beta * qi(self.b as i128)
    }

    /// True if `self` is at least as large as `other` for every nonnegative (α, β).
    pub fn dominates(&self, other: &LinearForm) -> bool {
        self.a >= other.a && self.b >= other.b
    }
}

impl Add for LinearForm {
    type Output = LinearForm;
    fn add(self, rhs: Self) -> Self {
        LinearForm::new(self.a + rhs.a, self.b + rhs.b)
    }
}

impl Mul<u64> for LinearForm {
    type Output = LinearForm;
    fn mul(self, rhs: u64) -> Self {
        LinearForm::new(self.a * rhs, self.b * rhs)
    }
}

impl fmt::Display for LinearForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}α + {}β", self.a, self.b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_q("1/14").unwrap(), q(1, 14));
        assert_eq!(parse_q(" 6/4 ").unwrap(), q(3, 2));
        assert_eq!(parse_q("3").unwrap(), qi(3));
        assert!(parse_q("1/0").is_err());
        assert!(parse_q("x").is_err());
        assert_eq!(format_q(&q(9, 28)), "9/28");
        assert_eq!(format_q(&qi(3)), "3");
    }

    #[test]
    fn decimal_rendering() {
        assert_eq!(decimal(&q(1, 4)), "0.25");
        assert_eq!(decimal(&q(1, 3)), "0.333333333333");
        assert_eq!(decimal(&qi(0)), "0");
        assert_eq!(decimal(&q(9, 28)), "0.321428571429");
    }

    #[test]
    fn capacity_arithmetic() {
        let a = Capacity::Finite(q(1, 2));
        assert_eq!(a + a, Capacity::Finite(qi(1)));
        assert_eq!(a + Capacity::Infinite, Capacity::Infinite);
        assert_eq!("inf".parse::<Capacity>().unwrap(), Capacity::Infinite);
        assert!(Capacity::Finite(qi(1000)) < Capacity::Infinite);
    }
}
