use std::f64::consts::PI;

use crate::error::{CliError, Result};

fn coefficient(s: &str) -> Option<f64> {
    let s = s.trim().trim_end_matches('*').trim();
    match s {
        "" | "+" => Some(1.0),
        "-" => Some(-1.0),
        _ => s.parse().ok(),
    }
}

/// Parses angles such as `0.5`, `pi`, `-pi/2`, `3pi/8`, `2*pi` or `π/4`.
pub fn parse_angle(text: &str) -> Result<f64> {
    let err = || CliError::Angle(text.to_string());
    let s = text.trim().to_ascii_lowercase().replace('π', "pi");
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), Some(d.trim())),
        None => (s.as_str(), None),
    };
    let value = match num.strip_suffix("pi") {
        Some(c) => coefficient(c).ok_or_else(err)? * PI,
        None => num.parse::<f64>().map_err(|_| err())?,
    };
    let value = match den {
        Some(d) => {
            let d: f64 = d.parse().map_err(|_| err())?;
            if d == 0.0 {
                return Err(err());
            }
            value / d
        }
        None => value,
    };
    if value.is_finite() {
        Ok(value)
    } else {
        Err(err())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn forms() {
        assert_eq!(parse_angle("0.5").unwrap(), 0.5);
        assert_eq!(parse_angle("pi").unwrap(), PI);
        assert_eq!(parse_angle("-pi/2").unwrap(), -PI / 2.0);
        assert_eq!(parse_angle("3pi/8").unwrap(), 3.0 * PI / 8.0);
        assert_eq!(parse_angle("2*pi").unwrap(), 2.0 * PI);
        assert_eq!(parse_angle(" π/4 ").unwrap(), PI / 4.0);
        assert_eq!(parse_angle("1e-3").unwrap(), 1e-3);
        assert_eq!(parse_angle("1.5/3").unwrap(), 0.5);
    }

    #[test]
    fn rejects_garbage() {
        for bad in ["", "p", "x/2", "pi/0", "pi/", "3ppi", "inf"] {
            assert!(parse_angle(bad).is_err(), "{bad}");
        }
    }
}
