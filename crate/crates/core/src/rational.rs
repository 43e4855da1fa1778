//! Exact rationals and their canonical `"num/den"` text form.

use std::str::FromStr;

use num::{BigInt, BigRational, Signed, Zero};

use crate::error::{Error, Result};

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn q_frac(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// Canonical text form: lowest terms, sign on the numerator, denominator
/// always written (`"3/1"`, `"-1/2"`, `"0/1"`).
pub fn format_q(x: &Q) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

/// Parses `"n/d"` or a bare integer `"n"`. A zero denominator is an error.
pub fn parse_q(s: &str) -> Result<Q> {
    let s = s.trim();
    let bad = || Error::Parse(format!("malformed rational {s:?}"));
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num = BigInt::from_str(num).map_err(|_| bad())?;
    let den = BigInt::from_str(den).map_err(|_| bad())?;
    if den.is_zero() {
        return Err(Error::Parse(format!("zero denominator in {s:?}")));
    }
    Ok(Q::new(num, den))
}

/// Smallest integer `>= x`, for nonnegative `x`.
pub fn ceil_to_u64(x: &Q) -> Option<u64> {
    let c = x.ceil().to_integer();
    if c.is_negative() {
        return Some(0);
    }
    u64::try_from(c).ok()
}

/// serde adapters so that every rational in a report is a `"num/den"` string.
pub mod serde_q {
    use serde::{Deserialize, Deserializer, Serializer};

    use super::{format_q, parse_q, Q};

    pub fn serialize<S: Serializer>(x: &Q, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_q(x))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Q, D::Error> {
        let s = String::deserialize(d)?;
        parse_q(&s).map_err(serde::de::Error::custom)
    }
}

pub mod serde_q_opt {
    use serde::Serializer;

    use super::{format_q, Q};

    pub fn serialize<S: Serializer>(x: &Option<Q>, s: S) -> Result<S::Ok, S::Error> {
        match x {
            Some(x) => s.serialize_some(&format_q(x)),
            None => s.serialize_none(),
        }
    }
}

pub mod serde_q_vec {
    use serde::ser::SerializeSeq;
    use serde::Serializer;

    use super::{format_q, Q};

    pub fn serialize<S: Serializer>(xs: &[Q], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(xs.len()))?;
        for x in xs {
            seq.serialize_element(&format_q(x))?;
        }
        seq.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_form() {
        assert_eq!(format_q(&q_frac(4, -6)), "-2/3");
        assert_eq!(format_q(&q(3)), "3/1");
        assert_eq!(format_q(&q(0)), "0/1");
    }

    #[test]
    fn parse_accepts_fractions_and_integers() {
        assert_eq!(parse_q("-2/4").unwrap(), q_frac(-1, 2));
        assert_eq!(parse_q("7").unwrap(), q(7));
        assert_eq!(parse_q(" 3 / 9 ").unwrap(), q_frac(1, 3));
    }

    #[test]
    fn parse_rejects_garbage() {
        assert!(matches!(parse_q("1/0"), Err(Error::Parse(_))));
        assert!(parse_q("one").is_err());
        assert!(parse_q("1.5").is_err());
        assert!(parse_q("").is_err());
    }

    #[test]
    fn ceil() {
        assert_eq!(ceil_to_u64(&q_frac(7, 2)), Some(4));
        assert_eq!(ceil_to_u64(&q(3)), Some(3));
    }
}
