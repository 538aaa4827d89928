//! Exact rational helpers: decimal parsing, floors, conversions, continued fractions.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{Integer, One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn frac(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `"1.4142"`, `"-3"`, `"7/5"` or `"1e-7"` exactly.
pub fn parse_rational(s: &str) -> Result<Q> {
    let s = s.trim();
    let bad = || Error::InvalidInput(format!("not a rational number: {s:?}"));
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(Q::new(n, d));
    }
    let (mantissa, exp) = match s.split_once(['e', 'E']) {
        Some((m, e)) => (m, e.parse::<i32>().map_err(|_| bad())?),
        None => (s, 0),
    };
    let (neg, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let all: BigInt = format!("{int_part}{frac_part}0").parse().map_err(|_| bad())?;
    let ten = BigInt::from(10);
    let scale = exp - i32::try_from(frac_part.len()).map_err(|_| bad())? - 1;
    let mut value = Q::from_integer(all);
    let factor = Q::from_integer(num::pow(ten, scale.unsigned_abs() as usize));
    if scale >= 0 {
        value *= factor;
    } else {
        value /= factor;
    }
    Ok(if neg { -value } else { value })
}

pub fn floor_i64(x: &Q) -> i64 {
    x.floor().to_integer().to_i64().expect("floor fits in i64")
}

pub fn to_f64(x: &Q) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// Exact conversion of a finite float.
pub fn from_f64(x: f64) -> Result<Q> {
    Q::from_float(x).ok_or_else(|| Error::InvalidInput(format!("non-finite number {x}")))
}

/// Continued-fraction convergents of a positive rational, in order.
pub fn convergents(x: &Q) -> Vec<(BigInt, BigInt)> {
    let mut out = Vec::new();
    let (mut p0, mut q0) = (BigInt::one(), BigInt::zero());
    let (mut p1, mut q1) = (BigInt::zero(), BigInt::one());
    let mut num = x.numer().clone();
    let mut den = x.denom().clone();
    while !den.is_zero() {
        let (a, r) = num.div_mod_floor(&den);
        let p = &a * &p0 + &p1;
        let qq = &a * &q0 + &q1;
        out.push((p.clone(), qq.clone()));
        p1 = std::mem::replace(&mut p0, p);
        q1 = std::mem::replace(&mut q0, qq);
        num = std::mem::replace(&mut den, r);
    }
    out
}

pub fn abs(x: &Q) -> Q {
    x.abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_decimals_exactly() {
        assert_eq!(parse_rational("1.4142").unwrap(), frac(14142, 10000));
        assert_eq!(parse_rational("-3").unwrap(), q(-3));
        assert_eq!(parse_rational("7/5").unwrap(), frac(7, 5));
        assert_eq!(parse_rational("1e-7").unwrap(), frac(1, 10_000_000));
        assert_eq!(parse_rational(".5").unwrap(), frac(1, 2));
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational("1/0").is_err());
    }

    #[test]
    fn convergents_of_seven_fifths() {
        let c = convergents(&frac(7, 5));
        let pairs: Vec<(i64, i64)> = c
            .iter()
            .map(|(p, q)| (p.to_i64().unwrap(), q.to_i64().unwrap()))
            .collect();
        assert_eq!(pairs, vec![(1, 1), (3, 2), (7, 5)]);
    }
}
