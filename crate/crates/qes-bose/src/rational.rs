//! Exact rational scalars.
//!
//! Cutoff conditions are exact linear relations between Hamiltonian
//! coefficients, so coefficients are stored as arbitrary-precision rationals
//! and only lowered to `f64` when a spectrum is actually computed. This
//! module wraps `num::BigRational` with the parsing/formatting conventions
//! used across the crate: integer, `p/q`, and exact decimal (with optional
//! exponent) literals.

use num::bigint::{BigInt, Sign};
use num::{BigRational, One, Signed, ToPrimitive, Zero};

use crate::error::{QesError, Result};

pub type Rational = BigRational;

/// Integer literal as an exact rational.
pub fn rat_int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `n/d` as an exact rational. Panics on a zero denominator; intended for
/// literals in code and tests, not for user input (use [`parse_rational`]).
pub fn rat(n: i64, d: i64) -> Rational {
    assert!(d != 0, "zero denominator in rational literal");
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Parse an exact rational from text.
///
/// Accepted forms: `-3`, `3/4`, `-0.125`, `2.5e-3`. Decimal and exponent
/// forms are converted exactly (no float round-trip).
pub fn parse_rational(text: &str) -> Result<Rational> {
    let s = text.trim();
    let err = || QesError::ParseRational(text.to_owned());
    if s.is_empty() {
        return Err(err());
    }
    if let Some((num, den)) = s.split_once('/') {
        let n: BigInt = num.trim().parse().map_err(|_| err())?;
        let d: BigInt = den.trim().parse().map_err(|_| err())?;
        if d.is_zero() {
            return Err(err());
        }
        return Ok(Rational::new(n, d));
    }

    // Decimal form: [sign] digits [ "." digits ] [ (e|E) [sign] digits ]
    let (mantissa, exp10) = match s.find(['e', 'E']) {
        Some(pos) => {
            let e: i64 = s[pos + 1..].parse().map_err(|_| err())?;
            (&s[..pos], e)
        }
        None => (s, 0i64),
    };
    let (int_part, frac_part) = match mantissa.split_once('.') {
        Some((i, f)) => (i, f),
        None => (mantissa, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(err());
    }
    let (negative, unsigned_int) = match int_part.as_bytes().first() {
        Some(b'-') => (true, &int_part[1..]),
        Some(b'+') => (false, &int_part[1..]),
        _ => (false, int_part),
    };
    let digits = format!("{unsigned_int}{frac_part}");
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(err());
    }
    let mut n: BigInt = digits.parse().map_err(|_| err())?;
    if negative {
        n = -n;
    }
    let shift = exp10 - frac_part.len() as i64;
    let ten = BigInt::from(10);
    Ok(if shift >= 0 {
        Rational::from_integer(n * ten.pow(shift as u32))
    } else {
        Rational::new(n, ten.pow((-shift) as u32))
    })
}

/// Shortest exact text form: `p` when the denominator is one, else `p/q`.
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Nearest `f64`. Values beyond the double range saturate to infinity.
pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        if r.is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        }
    })
}

/// Clear denominators and common integer factors from a vector, keeping its
/// direction. The sign convention keeps the last nonzero entry's sign if
/// `keep` is `None`, otherwise the entry at `keep` is made positive.
pub fn integer_clear(v: &[Rational], keep_positive: Option<usize>) -> Vec<Rational> {
    if v.iter().all(|x| x.is_zero()) {
        return v.to_vec();
    }
    let mut lcm = BigInt::one();
    for x in v {
        lcm = num::integer::lcm(lcm, x.denom().clone());
    }
    let ints: Vec<BigInt> = v.iter().map(|x| x.numer() * (&lcm / x.denom())).collect();
    let mut gcd = BigInt::zero();
    for x in &ints {
        gcd = num::integer::gcd(gcd, x.clone());
    }
    let mut sign = Sign::Plus;
    if let Some(i) = keep_positive {
        if ints[i].is_negative() {
            sign = Sign::Minus;
        }
    }
    ints.into_iter()
        .map(|x| {
            let reduced = &x / &gcd;
            Rational::from_integer(if sign == Sign::Minus {
                -reduced
            } else {
                reduced
            })
        })
        .collect()
}
