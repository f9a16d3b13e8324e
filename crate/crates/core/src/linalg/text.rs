//! Plain-text matrix format.
//!
//! ```text
//! rows cols
//! e00 e01 ...
//! e10 e11 ...
//! ```
//!
//! Entries are whitespace separated in row-major order. Real entries may be
//! integers, fractions `p/q` or decimals (`-0.25`, `1e-3`); all are read
//! exactly. Complex entries are written `a+bi`, `a-bi`, `bi` or `a`.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{ComplexMatrix, Entries, RealMatrix};
use crate::error::{MascError, Result};

fn header<'a>(tokens: &mut impl Iterator<Item = &'a str>) -> Result<(usize, usize)> {
    let mut dim = || -> Result<usize> {
        let t = tokens.next().ok_or_else(|| MascError::input("missing matrix header"))?;
        t.parse().map_err(|_| MascError::input(format!("bad dimension `{t}`")))
    };
    Ok((dim()?, dim()?))
}

/// Parses a real number token exactly.
pub fn parse_rational(token: &str) -> Result<BigRational> {
    let bad = || MascError::input(format!("bad real entry `{token}`"));
    if let Some((p, q)) = token.split_once('/') {
        let p: BigInt = p.parse().map_err(|_| bad())?;
        let q: BigInt = q.parse().map_err(|_| bad())?;
        if q.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(p, q));
    }
    let (mantissa, exp) = match token.find(['e', 'E']) {
        Some(pos) => {
            let e: i32 = token[pos + 1..].parse().map_err(|_| bad())?;
            (&token[..pos], e)
        }
        None => (token, 0),
    };
    let (neg, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let all: BigInt = format!("{int_part}{frac_part}0").parse::<BigInt>().map_err(|_| bad())? / 10;
    let scale = exp - frac_part.len() as i32;
    let ten = BigInt::from(10);
    let mut q = BigRational::from_integer(all);
    if scale >= 0 {
        q *= BigRational::from_integer(num_traits::pow(ten, scale as usize));
    } else {
        q /= BigRational::from_integer(num_traits::pow(ten, (-scale) as usize));
    }
    Ok(if neg { -q } else { q })
}

pub fn parse_real_matrix(text: &str) -> Result<RealMatrix> {
    let mut tokens = text.split_whitespace();
    let (rows, cols) = header(&mut tokens)?;
    let entries = tokens.map(parse_rational).collect::<Result<Vec<_>>>()?;
    RealMatrix::from_rationals(rows, cols, entries)
}

/// Reads a vector stored as a `1 × n` or `n × 1` matrix.
pub fn parse_real_vector(text: &str) -> Result<Vec<BigRational>> {
    let m = parse_real_matrix(text)?;
    if m.rows() != 1 && m.cols() != 1 {
        return Err(MascError::input("a vector file must hold a single row or column"));
    }
    Ok((0..m.rows()).flat_map(|i| (0..m.cols()).map(move |j| (i, j))).map(|(i, j)| m.rational(i, j)).collect())
}

fn format_rational(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn format_real_matrix(m: &RealMatrix) -> String {
    let mut out = format!("{} {}\n", m.rows(), m.cols());
    for i in 0..m.rows() {
        let row: Vec<String> = (0..m.cols())
            .map(|j| match m.entries() {
                Entries::Exact(v) => format_rational(&v[i * m.cols() + j]),
                Entries::Float(v) => format!("{}", v[i * m.cols() + j]),
            })
            .collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

/// Exact rational string (`p/q` or an integer), as used in JSON witnesses.
pub fn rational_string(q: &BigRational) -> String {
    format_rational(q)
}

pub fn parse_complex(token: &str) -> Result<Complex64> {
    let bad = || MascError::input(format!("bad complex entry `{token}`"));
    let num = |s: &str| -> Result<f64> {
        match s {
            "" | "+" => Ok(1.0),
            "-" => Ok(-1.0),
            _ => s.parse::<f64>().map_err(|_| bad()),
        }
    };
    let Some(body) = token.strip_suffix('i') else {
        let re: f64 = token.parse().map_err(|_| bad())?;
        return Ok(Complex64::new(re, 0.0));
    };
    // split at the last sign that is not part of an exponent
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let z = match split {
        Some(k) => Complex64::new(body[..k].parse().map_err(|_| bad())?, num(&body[k..])?),
        None => Complex64::new(0.0, num(body)?),
    };
    if !z.re.is_finite() || !z.im.is_finite() {
        return Err(bad());
    }
    Ok(z)
}

pub fn parse_complex_matrix(text: &str) -> Result<ComplexMatrix> {
    let mut tokens = text.split_whitespace();
    let (rows, cols) = header(&mut tokens)?;
    let entries = tokens.map(parse_complex).collect::<Result<Vec<_>>>()?;
    ComplexMatrix::new(rows, cols, entries)
}

pub fn format_complex(z: Complex64) -> String {
    if z.im.is_sign_negative() {
        format!("{}-{}i", z.re, -z.im)
    } else {
        format!("{}+{}i", z.re, z.im)
    }
}

pub fn format_complex_matrix(m: &ComplexMatrix) -> String {
    let mut out = format!("{} {}\n", m.rows(), m.cols());
    for i in 0..m.rows() {
        let row: Vec<String> = (0..m.cols()).map(|j| format_complex(m.get(i, j))).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}
