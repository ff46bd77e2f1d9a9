//! Decimal formatting and exact decimal parsing.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::str::FromStr;

use crate::error::{Error, Result};

/// Formats `v` as a plain decimal with 17 significant digits, dropping trailing zeros.
///
/// Values outside `[1e-6, 1e17)` in magnitude fall back to scientific notation.
/// Non-finite values print as `nan`, `inf` or `-inf`.
pub fn fmt17(v: f64) -> String {
    if v.is_nan() {
        return "nan".into();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if v == 0.0 {
        return "0".into();
    }
    let sci = format!("{:.16e}", v);
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("exponent");
    if !(-6..17).contains(&exp) {
        let mantissa = mantissa.trim_end_matches('0').trim_end_matches('.');
        return format!("{mantissa}e{exp}");
    }
    let negative = mantissa.starts_with('-');
    let mut digits: String = mantissa.chars().filter(|c| c.is_ascii_digit()).collect();
    let keep = if exp < 0 { 1 } else { exp as usize + 1 };
    while digits.len() > keep && digits.ends_with('0') {
        digits.pop();
    }
    let mut out = String::with_capacity(24);
    if negative {
        out.push('-');
    }
    if exp < 0 {
        out.push_str("0.");
        for _ in 0..(-exp - 1) {
            out.push('0');
        }
        out.push_str(&digits);
    } else {
        let int_len = exp as usize + 1;
        out.push_str(&digits[..int_len]);
        if int_len < digits.len() {
            out.push('.');
            out.push_str(&digits[int_len..]);
        }
    }
    out
}

/// Parses `a/b`, an integer, or a decimal literal (optionally with exponent) exactly.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::InvalidInput(format!("not a rational number: {s:?}"));
    if s.contains('/') {
        let r = BigRational::from_str(s).map_err(|_| bad())?;
        return Ok(r);
    }
    let (body, exp) = match s.find(['e', 'E']) {
        Some(pos) => (&s[..pos], s[pos + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (s, 0),
    };
    let (negative, body) = match body.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, body.strip_prefix('+').unwrap_or(body)),
    };
    let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let digits = format!("{int_part}{frac_part}");
    let numer = BigInt::from_str(if digits.is_empty() { "0" } else { &digits }).map_err(|_| bad())?;
    let scale_pow = exp - frac_part.len() as i32;
    let ten = BigInt::from(10);
    let mut value = BigRational::from_integer(numer);
    if scale_pow >= 0 {
        value *= BigRational::from_integer(num_traits::pow(ten, scale_pow as usize));
    } else {
        value /= BigRational::from_integer(num_traits::pow(ten, (-scale_pow) as usize));
    }
    if negative {
        value = -value;
    }
    Ok(value)
}

/// Nearest `f64` to an exact rational.
pub fn rational_to_f64(r: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    if r.is_zero() {
        return 0.0;
    }
    if let (Some(n), Some(d)) = (r.numer().to_f64(), r.denom().to_f64()) {
        if n.is_finite() && d.is_finite() && d != 0.0 && n.abs() < 9.0e15 && d < 9.0e15 {
            return n / d;
        }
    }
    // Fall back to a scaled integer division to keep 64 bits of precision.
    let shift = 64usize;
    let scaled = (r.numer() << shift) / r.denom();
    scaled.to_f64().unwrap_or(f64::NAN) / 2f64.powi(shift as i32)
}

/// Writes `r` as `num/den` using the requested denominator when that is exact.
pub fn over_denominator(r: &BigRational, den: i64) -> Option<String> {
    let scaled = r * BigRational::from_integer(BigInt::from(den));
    if scaled.denom().is_one() {
        Some(format!("{}/{}", scaled.numer(), den))
    } else {
        None
    }
}
