//! Exact rational numbers and their text syntax.

use num_rational::Ratio;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = Ratio<i128>;

pub fn int(v: i128) -> Rational {
    Rational::from_integer(v)
}

pub fn frac(num: i128, den: i128) -> Rational {
    Rational::new(num, den)
}

/// Parses `"-0.88"`, `"22/25"`, `"3"` exactly. Scientific notation is rejected.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let s = text.trim();
    if s.is_empty() {
        return Err(Error::parse(0, "empty number"));
    }
    if let Some((num, den)) = s.split_once('/') {
        let n = parse_decimal(num, 0)?;
        let d = parse_decimal(den, num.len() + 1)?;
        if d.is_zero() {
            return Err(Error::parse(num.len() + 1, "zero denominator"));
        }
        return Ok(n / d);
    }
    parse_decimal(s, 0)
}

fn parse_decimal(s: &str, base: usize) -> Result<Rational> {
    let bytes = s.as_bytes();
    let mut pos = 0;
    let negative = match bytes.first() {
        Some(b'-') => {
            pos = 1;
            true
        }
        Some(b'+') => {
            pos = 1;
            false
        }
        _ => false,
    };
    let mut mantissa: i128 = 0;
    let mut scale: i128 = 1;
    let mut digits = 0;
    let mut seen_point = false;
    for (k, &b) in bytes.iter().enumerate().skip(pos) {
        match b {
            b'0'..=b'9' => {
                mantissa = mantissa
                    .checked_mul(10)
                    .and_then(|m| m.checked_add((b - b'0') as i128))
                    .ok_or_else(|| Error::parse(base + k, "too many digits"))?;
                if seen_point {
                    scale = scale
                        .checked_mul(10)
                        .ok_or_else(|| Error::parse(base + k, "too many decimals"))?;
                }
                digits += 1;
            }
            b'.' if !seen_point => seen_point = true,
            _ => {
                return Err(Error::parse(
                    base + k,
                    format!("unexpected character {:?} in number", b as char),
                ))
            }
        }
    }
    if digits == 0 {
        return Err(Error::parse(base + pos, "expected digits"));
    }
    let value = Rational::new(mantissa, scale);
    Ok(if negative { -value } else { value })
}

/// Shortest exact text: integer, terminating decimal, or `p/q`.
pub fn format_rational(r: &Rational) -> String {
    if r.is_integer() {
        return r.numer().to_string();
    }
    let mut den = *r.denom();
    let (mut twos, mut fives) = (0u32, 0u32);
    while den % 2 == 0 {
        den /= 2;
        twos += 1;
    }
    while den % 5 == 0 {
        den /= 5;
        fives += 1;
    }
    if den != 1 {
        return format!("{}/{}", r.numer(), r.denom());
    }
    let places = twos.max(fives);
    let scaled = r * int(10i128.pow(places));
    let mag = scaled.numer().abs();
    let p = 10i128.pow(places);
    let sign = if r.is_negative() { "-" } else { "" };
    format!(
        "{sign}{}.{:0width$}",
        mag / p,
        mag % p,
        width = places as usize
    )
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}
