//! Command-line value syntax: angles, complex weights and grid sizes.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Parses an angle in radians.
///
/// Accepts plain decimals (`0.785`) and rational multiples of pi such as
/// `pi`, `pi/4`, `3pi/2`, `-pi/8`, `2*pi/3` or `0.5pi`. Multiples of pi are
/// evaluated as `k * PI / m` from the parsed integers, so `pi/4` yields
/// exactly `FRAC_PI_4`.
pub fn parse_angle(text: &str) -> Result<f64> {
    let s: String = text.chars().filter(|ch| !ch.is_whitespace()).collect();
    let s = s.replace('π', "pi");
    let Some(at) = s.find("pi") else {
        return s
            .parse::<f64>()
            .ok()
            .filter(|v| v.is_finite())
            .ok_or_else(|| Error::parse("angle", text));
    };

    let (head, tail) = (&s[..at], &s[at + 2..]);
    let head = head.strip_suffix('*').unwrap_or(head);
    let coefficient = match head {
        "" | "+" => 1.0,
        "-" => -1.0,
        other => other.parse::<f64>().map_err(|_| Error::parse("angle", text))?,
    };
    let divisor = match tail {
        "" => 1.0,
        _ => tail
            .strip_prefix('/')
            .and_then(|d| d.parse::<f64>().ok())
            .filter(|d| *d != 0.0)
            .ok_or_else(|| Error::parse("angle", text))?,
    };
    let value = coefficient * PI / divisor;
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::parse("angle", text))
    }
}

/// Parses a complex number written as `re+imi`, e.g. `0.6+0.8i`, `-i`, `1`.
pub fn parse_complex(text: &str) -> Result<Complex64> {
    let s: String = text.chars().filter(|ch| !ch.is_whitespace()).collect();
    s.parse::<Complex64>()
        .ok()
        .filter(|z| z.is_finite())
        .ok_or_else(|| Error::parse("complex number", text))
}

/// Grid resolution: a single count (`64`) or one count per axis (`64x32`).
pub fn parse_grid(text: &str) -> Result<Vec<usize>> {
    let counts = text
        .split(['x', 'X', ','])
        .map(|part| part.trim().parse::<usize>())
        .collect::<std::result::Result<Vec<_>, _>>()
        .map_err(|_| Error::parse("grid", text))?;
    if counts.is_empty() || counts.len() > 2 || counts.iter().any(|&n| n < 2) {
        return Err(Error::Spec(format!(
            "grid {text:?} must give one or two counts, each at least 2"
        )));
    }
    Ok(counts)
}
