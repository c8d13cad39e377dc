//! Literal syntax for command-line values.

use anyhow::{anyhow, bail, Result};
use num_complex::Complex64;

/// `0.5`, `2i`, `-i`, `0.5+2i`, `1.5-1e-3i`.
pub fn complex(text: &str) -> Result<Complex64> {
    let t: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if t.is_empty() {
        bail!("empty complex literal");
    }
    let bad = || anyhow!("malformed complex literal {text:?}");
    let Some(body) = t.strip_suffix('i') else {
        return Ok(Complex64::new(t.parse().map_err(|_| bad())?, 0.0));
    };
    // split at the last sign that is not the leading sign or part of an exponent
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&i| (bytes[i] == b'+' || bytes[i] == b'-') && !matches!(bytes[i - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(i) => (&body[..i], &body[i..]),
        None => ("0", body),
    };
    let im = match im {
        "" | "+" => 1.0,
        "-" => -1.0,
        s => s.parse().map_err(|_| bad())?,
    };
    Ok(Complex64::new(re.parse().map_err(|_| bad())?, im))
}

pub fn complex_list(text: &str) -> Result<Vec<Complex64>> {
    let v = text.split(',').map(complex).collect::<Result<Vec<_>>>()?;
    Ok(v)
}

pub fn float_list(text: &str) -> Result<Vec<f64>> {
    text.split(',')
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .map_err(|_| anyhow!("malformed number {s:?}"))
        })
        .collect()
}

pub fn u64_list(text: &str) -> Result<Vec<u64>> {
    text.split(',')
        .map(|s| {
            s.trim()
                .parse::<u64>()
                .map_err(|_| anyhow!("malformed integer {s:?}"))
        })
        .collect()
}
