//! Line-oriented coefficient files.
//!
//! ```text
//! # k=12 N=1 chi=1.0 X=3 C=1.0
//! 1 1 0
//! 2 -24 0
//! 3 252 0
//! ```
//!
//! Floats are written in shortest round-trip form, so `save` followed by `load` reproduces the
//! values bit for bit.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

use num_complex::Complex64;

use crate::chargroup::DirichletCharacter;
use crate::cyclo::Cyclotomic;

use super::{CoeffError, CoefficientSequence};

struct Header {
    weight: u32,
    level: u64,
    chi: DirichletCharacter,
    x: usize,
    growth: f64,
}

fn parse_header(line: &str) -> Result<Header, CoeffError> {
    let bad = |why: &str| CoeffError::MalformedHeader(format!("{why}: {line:?}"));
    let body = line.strip_prefix('#').ok_or_else(|| bad("missing '#'"))?;
    let (mut k, mut n, mut chi, mut x, mut c) = (None, None, None, None, None);
    for field in body.split_whitespace() {
        let (key, value) = field
            .split_once('=')
            .ok_or_else(|| bad("expected key=value"))?;
        match key {
            "k" => k = Some(value.parse::<u32>().map_err(|_| bad("bad k"))?),
            "N" => n = Some(value.parse::<u64>().map_err(|_| bad("bad N"))?),
            "chi" => {
                chi = Some(
                    value
                        .parse::<DirichletCharacter>()
                        .map_err(|_| bad("bad chi"))?,
                )
            }
            "X" => x = Some(value.parse::<usize>().map_err(|_| bad("bad X"))?),
            "C" => c = Some(value.parse::<f64>().map_err(|_| bad("bad C"))?),
            _ => return Err(bad("unknown key")),
        }
    }
    let growth = c.ok_or_else(|| bad("missing C"))?;
    if !(growth.is_finite() && growth > 0.0) {
        return Err(bad("C must be positive"));
    }
    Ok(Header {
        weight: k.ok_or_else(|| bad("missing k"))?,
        level: n.ok_or_else(|| bad("missing N"))?,
        chi: chi.ok_or_else(|| bad("missing chi"))?,
        x: x.ok_or_else(|| bad("missing X"))?,
        growth,
    })
}

/// Integer values recovered exactly when every coefficient is a real integer below `2^53`.
fn integral_values(values: &[Complex64]) -> Option<Vec<Cyclotomic>> {
    const LIMIT: f64 = 9_007_199_254_740_992.0;
    values
        .iter()
        .map(|v| {
            (v.im == 0.0 && v.re.fract() == 0.0 && v.re.abs() < LIMIT)
                .then(|| Cyclotomic::from_int(v.re as i128))
        })
        .collect()
}

/// Parses a coefficient file from any reader.
pub fn read_coefficients<R: Read>(source: R) -> Result<CoefficientSequence, CoeffError> {
    let mut lines = BufReader::new(source).lines();
    let header_line = loop {
        match lines.next() {
            Some(line) => {
                let line = line?;
                if !line.trim().is_empty() {
                    break line;
                }
            }
            None => return Err(CoeffError::MalformedHeader("empty file".into())),
        }
    };
    let header = parse_header(header_line.trim())?;

    let mut values = Vec::with_capacity(header.x);
    for (i, line) in lines.enumerate() {
        let line = line?;
        let line_no = i + 2;
        let text = line.trim();
        if text.is_empty() {
            continue;
        }
        let malformed = || CoeffError::MalformedLine {
            line: line_no,
            text: text.to_string(),
        };
        let fields: Vec<&str> = text.split_whitespace().collect();
        if fields.len() != 3 {
            return Err(malformed());
        }
        let n: usize = fields[0].parse().map_err(|_| malformed())?;
        let re: f64 = fields[1].parse().map_err(|_| malformed())?;
        let im: f64 = fields[2].parse().map_err(|_| malformed())?;
        let expected = values.len() + 1;
        if n != expected {
            if values.is_empty() && n > 1 {
                return Err(CoeffError::MissingFirst);
            }
            return Err(CoeffError::NonMonotoneIndex {
                line: line_no,
                expected,
                found: n,
            });
        }
        values.push(Complex64::new(re, im));
    }
    if values.is_empty() {
        return Err(CoeffError::MissingFirst);
    }
    if values.len() != header.x {
        return Err(CoeffError::LengthMismatch {
            declared: header.x,
            found: values.len(),
        });
    }
    let exact = integral_values(&values);
    let seq = CoefficientSequence::new(
        header.weight,
        header.level,
        header.chi,
        values,
        Some(header.growth),
    )?;
    Ok(match exact {
        Some(e) => {
            let mut s = seq;
            s.exact = Some(e);
            s
        }
        None => seq,
    })
}

/// Writes `seq` in the coefficient file format.
pub fn write_coefficients<W: Write>(seq: &CoefficientSequence, sink: W) -> Result<(), CoeffError> {
    let mut w = BufWriter::new(sink);
    writeln!(
        w,
        "# k={} N={} chi={} X={} C={:?}",
        seq.weight(),
        seq.level(),
        seq.nebentypus().label(),
        seq.len(),
        seq.growth_constant()
    )?;
    for (i, a) in seq.values().iter().enumerate() {
        writeln!(w, "{} {:?} {:?}", i + 1, a.re, a.im)?;
    }
    w.flush()?;
    Ok(())
}

pub fn load_coefficients(path: impl AsRef<Path>) -> Result<CoefficientSequence, CoeffError> {
    read_coefficients(File::open(path)?)
}

pub fn save_coefficients(
    seq: &CoefficientSequence,
    path: impl AsRef<Path>,
) -> Result<(), CoeffError> {
    write_coefficients(seq, File::create(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffs::{eta_product_expansion, parse_eta_spec};

    fn read(s: &str) -> Result<CoefficientSequence, CoeffError> {
        read_coefficients(s.as_bytes())
    }

    #[test]
    fn minimal_file() {
        let seq = read("# k=12 N=1 chi=1.0 X=1 C=1.0\n1 1 0\n").unwrap();
        assert_eq!(seq.len(), 1);
        assert_eq!(seq.weight(), 12);
    }

    #[test]
    fn distinct_errors() {
        assert!(matches!(
            read("# k=12 N=1 chi=1.0 X=1 C=1.0\n1 2 0\n"),
            Err(CoeffError::NotNormalized(_))
        ));
        assert!(matches!(
            read("k=12 N=1\n1 1 0\n"),
            Err(CoeffError::MalformedHeader(_))
        ));
        assert!(matches!(
            read("# k=12 N=1 chi=1.0 X=1\n1 1 0\n"),
            Err(CoeffError::MalformedHeader(_))
        ));
        assert!(matches!(
            read("# k=12 N=1 chi=1.0 X=2 C=1.0\n1 1 0\n3 0 0\n"),
            Err(CoeffError::NonMonotoneIndex {
                line: 3,
                expected: 2,
                found: 3
            })
        ));
        assert_eq!(
            read("# k=12 N=1 chi=1.0 X=1 C=1.0\n2 1 0\n").unwrap_err(),
            CoeffError::MissingFirst
        );
        assert_eq!(
            read("# k=12 N=1 chi=1.0 X=1 C=1.0\n").unwrap_err(),
            CoeffError::MissingFirst
        );
        assert!(matches!(
            read("# k=12 N=1 chi=1.0 X=1 C=1.0\n1 1\n"),
            Err(CoeffError::MalformedLine { line: 2, .. })
        ));
        assert_eq!(
            read("# k=12 N=1 chi=1.0 X=3 C=1.0\n1 1 0\n").unwrap_err(),
            CoeffError::LengthMismatch {
                declared: 3,
                found: 1
            }
        );
    }

    #[test]
    fn delta_round_trips_bit_exactly() {
        let d = eta_product_expansion(&parse_eta_spec("1^24").unwrap(), 1000)
            .unwrap()
            .to_sequence()
            .unwrap();
        let mut buf = Vec::new();
        write_coefficients(&d, &mut buf).unwrap();
        let back = read_coefficients(buf.as_slice()).unwrap();
        assert_eq!(back.values().len(), 1000);
        for (a, b) in d.values().iter().zip(back.values()) {
            assert_eq!(a.re.to_bits(), b.re.to_bits());
            assert_eq!(a.im.to_bits(), b.im.to_bits());
        }
        assert_eq!(
            back.growth_constant().to_bits(),
            d.growth_constant().to_bits()
        );
        // τ(n) passes 2^53 below n = 1000, so only a shorter prefix comes back exact
        assert!(back.exact_values().is_none());
        let short = d.truncated(200);
        let mut buf_short = Vec::new();
        write_coefficients(&short, &mut buf_short).unwrap();
        let back_short = read_coefficients(buf_short.as_slice()).unwrap();
        assert_eq!(back_short.exact_values(), short.exact_values());
        let mut again = Vec::new();
        write_coefficients(&back, &mut again).unwrap();
        assert_eq!(buf, again);
    }

    #[test]
    fn irrational_values_round_trip() {
        let triv = DirichletCharacter::trivial(1).unwrap();
        let chi = "7.1".parse::<DirichletCharacter>().unwrap();
        let e = crate::coeffs::eisenstein_coefficients(&triv, &chi, 3, 50).unwrap();
        let mut buf = Vec::new();
        write_coefficients(&e, &mut buf).unwrap();
        let back = read_coefficients(buf.as_slice()).unwrap();
        assert_eq!(back.values(), e.values());
        assert_eq!(back.nebentypus(), e.nebentypus());
        assert!(back.exact_values().is_none());
    }
}
