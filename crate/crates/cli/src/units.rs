//! Quantities with SI suffixes: durations ("640ns", "2 us", "1e-6") and
//! frequencies ("30MHz", "2.5e9"). Frequencies are cyclic; callers multiply
//! by 2π where an angular rate is needed.

use anyhow::{bail, Context, Result};

fn split(s: &str) -> (&str, &str) {
    let s = s.trim();
    let idx = s
        .char_indices()
        .find(|&(i, c)| c.is_ascii_alphabetic() && !is_exponent(s, i))
        .map_or(s.len(), |(i, _)| i);
    (s[..idx].trim(), s[idx..].trim())
}

/// `e`/`E` followed by a digit or sign is part of the number.
fn is_exponent(s: &str, i: usize) -> bool {
    let b = s.as_bytes();
    matches!(b[i], b'e' | b'E') && i > 0 && b[i - 1].is_ascii_digit() && b.get(i + 1).is_some_and(|c| c.is_ascii_digit() || *c == b'-' || *c == b'+')
}

pub fn parse_duration(s: &str) -> Result<f64> {
    let (num, unit) = split(s);
    let x: f64 = num.parse().with_context(|| format!("bad duration `{s}`"))?;
    // Dividing by an exact power of ten rounds once, so "640ns" == 640e-9.
    let per_second = match unit {
        "" | "s" => 1.0,
        "ms" => 1e3,
        "us" | "µs" => 1e6,
        "ns" => 1e9,
        "ps" => 1e12,
        _ => bail!("unknown time unit `{unit}` in `{s}`"),
    };
    let v = x / per_second;
    if !(v > 0.0 && v.is_finite()) {
        bail!("duration must be positive, got `{s}`");
    }
    Ok(v)
}

pub fn parse_frequency(s: &str) -> Result<f64> {
    let (num, unit) = split(s);
    let x: f64 = num.parse().with_context(|| format!("bad frequency `{s}`"))?;
    let scale = match unit.to_ascii_lowercase().as_str() {
        "" | "hz" => 1.0,
        "khz" => 1e3,
        "mhz" => 1e6,
        "ghz" => 1e9,
        _ => bail!("unknown frequency unit `{unit}` in `{s}`"),
    };
    if !x.is_finite() {
        bail!("frequency must be finite, got `{s}`");
    }
    Ok(x * scale)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn durations() {
        assert_eq!(parse_duration("640ns").unwrap(), 640e-9);
        assert_eq!(parse_duration("2 us").unwrap(), 2e-6);
        assert_eq!(parse_duration("1e-6").unwrap(), 1e-6);
        assert_eq!(parse_duration("1.5e2ns").unwrap(), 150e-9);
        assert!(parse_duration("-3ns").is_err());
        assert!(parse_duration("3 fortnights").is_err());
    }

    #[test]
    fn frequencies() {
        assert_eq!(parse_frequency("30MHz").unwrap(), 30e6);
        assert_eq!(parse_frequency("-400 MHz").unwrap(), -400e6);
        assert_eq!(parse_frequency("2.5e9").unwrap(), 2.5e9);
        assert!(parse_frequency("1 THz").is_err());
    }
}
