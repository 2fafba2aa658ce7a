//! Plain-text matrix format.
//!
//! ```text
//! 2
//! 1.0+0.0i 0.0+0.0i
//! 0.0+0.0i 0.5-0.25i
//! ```
//!
//! Entries may also be pure real (`3`, `-1.5e-3`) or pure imaginary (`2i`, `-i`).

use std::fmt::Write as _;
use std::path::Path;

use num_complex::Complex64;

use super::ComplexMatrix;
use crate::error::{Error, Result};

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn parse_real(s: &str, line: usize) -> Result<f64> {
    s.parse::<f64>()
        .map_err(|_| parse_err(line, format!("bad number `{s}`")))
}

fn parse_imag_part(s: &str, line: usize) -> Result<f64> {
    match s {
        "" | "+" => Ok(1.0),
        "-" => Ok(-1.0),
        _ => parse_real(s, line),
    }
}

pub(crate) fn parse_complex(tok: &str, line: usize) -> Result<Complex64> {
    let z = if let Some(body) = tok.strip_suffix(['i', 'j']) {
        let bytes = body.as_bytes();
        let split = (1..bytes.len())
            .rev()
            .find(|&p| (bytes[p] == b'+' || bytes[p] == b'-') && !matches!(bytes[p - 1], b'e' | b'E'));
        match split {
            Some(p) => Complex64::new(parse_real(&body[..p], line)?, parse_imag_part(&body[p..], line)?),
            None => Complex64::new(0.0, parse_imag_part(body, line)?),
        }
    } else {
        Complex64::new(parse_real(tok, line)?, 0.0)
    };
    if !z.re.is_finite() || !z.im.is_finite() {
        return Err(parse_err(line, format!("non-finite entry `{tok}`")));
    }
    Ok(z)
}

pub fn parse_matrix(text: &str) -> Result<ComplexMatrix> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (first, header) = lines.next().ok_or_else(|| parse_err(1, "empty input"))?;
    let d: usize = header
        .parse()
        .map_err(|_| parse_err(first, format!("expected dimension, found `{header}`")))?;
    if d == 0 {
        return Err(parse_err(first, "dimension must be positive"));
    }
    let mut m = ComplexMatrix::zeros(d, d);
    for row in 0..d {
        let (ln, l) = lines
            .next()
            .ok_or_else(|| parse_err(first + row + 1, format!("expected {d} rows, found {row}")))?;
        let toks: Vec<&str> = l.split_whitespace().collect();
        if toks.len() != d {
            return Err(parse_err(ln, format!("expected {d} entries, found {}", toks.len())));
        }
        for (col, t) in toks.iter().enumerate() {
            m[(row, col)] = parse_complex(t, ln)?;
        }
    }
    if let Some((ln, _)) = lines.next() {
        return Err(parse_err(ln, "trailing data after matrix"));
    }
    Ok(m)
}

fn fmt_entry(out: &mut String, z: Complex64) {
    let sign = if z.im.is_sign_negative() { '-' } else { '+' };
    let _ = write!(out, "{:?}{}{:?}i", z.re, sign, z.im.abs());
}

/// Serializes with shortest round-trip formatting of each float.
pub fn format_matrix(m: &ComplexMatrix) -> String {
    let d = m.nrows();
    let mut out = String::with_capacity(d * d * 24 + 8);
    let _ = writeln!(out, "{d}");
    for i in 0..d {
        for j in 0..d {
            if j > 0 {
                out.push(' ');
            }
            fmt_entry(&mut out, m[(i, j)]);
        }
        out.push('\n');
    }
    out
}

pub fn read_matrix(path: impl AsRef<Path>) -> Result<ComplexMatrix> {
    parse_matrix(&std::fs::read_to_string(path)?)
}

pub fn write_matrix(path: impl AsRef<Path>, m: &ComplexMatrix) -> Result<()> {
    std::fs::write(path, format_matrix(m))?;
    Ok(())
}
