//! Exact parsing of numeric command-line values.

use std::str::FromStr;

use rug::{Integer, Rational};

/// Parses `p`, `p/q` or a decimal such as `-0.125` or `1.5e-3` into an exact rational.
pub fn rational(s: &str) -> Result<Rational, String> {
    let s = s.trim();
    if s.is_empty() {
        return Err("empty number".into());
    }
    if s.contains('/') {
        let r = Rational::from_str(s).map_err(|e| format!("{s}: {e}"))?;
        return Ok(r);
    }
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().map_err(|_| format!("{s}: bad exponent"))?),
        None => (s, 0),
    };
    let (neg, body) = match mantissa.strip_prefix('-') {
        Some(b) => (true, b),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int, frac) = body.split_once('.').unwrap_or((body, ""));
    if int.is_empty() && frac.is_empty() || !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return Err(format!("{s}: not a number"));
    }
    let digits = Integer::from_str(&format!("{int}{frac}")).map_err(|e| format!("{s}: {e}"))?;
    let shift = exp - frac.len() as i32;
    let ten = Integer::from(Integer::u_pow_u(10, shift.unsigned_abs()));
    let mut r = if shift >= 0 { Rational::from(digits * ten) } else { Rational::from((digits, ten)) };
    if neg {
        r = -r;
    }
    Ok(r)
}

/// Parses `a`, `a+bi`, `a-bi`, `bi` or `i` with rational or decimal parts.
pub fn complex(s: &str) -> Result<(Rational, Rational), String> {
    let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let Some(body) = s.strip_suffix('i') else {
        return Ok((rational(&s)?, Rational::new()));
    };
    // split before the last sign that does not belong to an exponent
    let bytes = body.as_bytes();
    let split = (1..bytes.len()).rev().find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(k) => (rational(&body[..k])?, &body[k..]),
        None => (Rational::new(), body),
    };
    let im = match im {
        "" | "+" => Rational::from(1),
        "-" => Rational::from(-1),
        other => rational(other)?,
    };
    Ok((re, im))
}

/// Parses a comma-separated list of rationals.
pub fn rational_list(s: &str) -> Result<Vec<Rational>, String> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',').map(rational).collect()
}
