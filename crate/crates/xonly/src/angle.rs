//! Angle tokens accepted on the command line.
//!
//! A plain float is taken as radians. Besides that: `pi`, `2pi`, `pi/2`,
//! `2pi/3`, `-pi/4`, `acos(1/4)`, `acos(0.25)`.

use std::f64::consts::PI;

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
#[error("cannot read {0:?} as an angle")]
pub struct AngleError(pub String);

pub fn parse_angle(text: &str) -> Result<f64, AngleError> {
    let err = || AngleError(text.to_string());
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect::<String>().to_ascii_lowercase();
    if s.is_empty() {
        return Err(err());
    }
    if let Ok(x) = s.parse::<f64>() {
        return if x.is_finite() { Ok(x) } else { Err(err()) };
    }
    if let Some(inner) = s.strip_prefix("acos(").and_then(|r| r.strip_suffix(')')) {
        let x = ratio(inner).ok_or_else(err)?;
        if !(-1.0..=1.0).contains(&x) {
            return Err(err());
        }
        return Ok(x.acos());
    }
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s.as_str()),
    };
    let (num, den) = match body.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (body, None),
    };
    let coeff = num.strip_suffix("pi").ok_or_else(err)?;
    let coeff = match coeff.strip_suffix('*').unwrap_or(coeff) {
        "" => 1.0,
        c => c.parse::<f64>().map_err(|_| err())?,
    };
    let den = match den {
        Some(d) => d.parse::<f64>().map_err(|_| err())?,
        None => 1.0,
    };
    let value = coeff * PI / den;
    if !value.is_finite() {
        return Err(err());
    }
    Ok(if neg { -value } else { value })
}

/// `a/b` or a float.
fn ratio(s: &str) -> Option<f64> {
    match s.split_once('/') {
        Some((a, b)) => Some(a.parse::<f64>().ok()? / b.parse::<f64>().ok()?),
        None => s.parse().ok(),
    }
}
