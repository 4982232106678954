//! Plain-text matrices: a line with `n`, then `n` rows of scalars.
//! Assignment files repeat `name` lines each followed by a matrix block.
//! Blank lines and `#` comments are ignored.

use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;

use super::{Assignment, Matrix};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Scalars with a textual form.
pub trait TextScalar: Scalar {
    fn parse_text(s: &str) -> Result<Self>;
    fn format_text(&self) -> String;
}

impl TextScalar for f64 {
    fn parse_text(s: &str) -> Result<Self> {
        f64::from_str(s).map_err(|_| Error::Parse(format!("bad real scalar '{s}'")))
    }

    fn format_text(&self) -> String {
        format!("{self}")
    }
}

impl TextScalar for Complex64 {
    /// Accepts `a`, `bi`, `a+bi`, `a-bi`, and `i`.
    fn parse_text(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("bad complex scalar '{s}'"));
        let Some(body) = s.strip_suffix('i') else {
            return Ok(Complex64::new(f64::parse_text(s).map_err(|_| bad())?, 0.0));
        };
        let bytes = body.as_bytes();
        let split = (1..bytes.len())
            .rev()
            .find(|&p| (bytes[p] == b'+' || bytes[p] == b'-') && !matches!(bytes[p - 1], b'e' | b'E'));
        let (re, im) = match split {
            Some(p) => (&body[..p], &body[p..]),
            None => ("0", body),
        };
        let im = match im {
            "" | "+" => 1.0,
            "-" => -1.0,
            t => f64::from_str(t).map_err(|_| bad())?,
        };
        let re = f64::from_str(re).map_err(|_| bad())?;
        Ok(Complex64::new(re, im))
    }

    fn format_text(&self) -> String {
        if self.im.is_sign_negative() {
            format!("{}-{}i", self.re, -self.im)
        } else {
            format!("{}+{}i", self.re, self.im)
        }
    }
}

impl TextScalar for BigRational {
    /// Accepts `p`, `p/q`, and finite decimals such as `-0.25`.
    fn parse_text(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("bad rational scalar '{s}'"));
        if let Some((p, q)) = s.split_once('/') {
            let p = BigInt::from_str(p).map_err(|_| bad())?;
            let q = BigInt::from_str(q).map_err(|_| bad())?;
            if q == BigInt::from(0) {
                return Err(bad());
            }
            return Ok(BigRational::new(p, q));
        }
        if let Some((int, frac)) = s.split_once('.') {
            if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
                return Err(bad());
            }
            let negative = int.starts_with('-');
            let digits = format!("{}{}", int.trim_start_matches(['-', '+']), frac);
            let mut num = BigInt::from_str(&digits).map_err(|_| bad())?;
            if negative {
                num = -num;
            }
            let den = num_traits::pow(BigInt::from(10), frac.len());
            return Ok(BigRational::new(num, den));
        }
        Ok(BigRational::from_integer(
            BigInt::from_str(s).map_err(|_| bad())?,
        ))
    }

    fn format_text(&self) -> String {
        format!("{self}")
    }
}

fn content_lines(text: &str) -> impl Iterator<Item = &str> {
    text.lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .filter(|l| !l.is_empty())
}

fn read_block<'a, T: TextScalar>(lines: &mut impl Iterator<Item = &'a str>) -> Result<Matrix<T>> {
    let header = lines
        .next()
        .ok_or_else(|| Error::Parse("missing matrix dimension".into()))?;
    let n: usize = header
        .parse()
        .map_err(|_| Error::Parse(format!("bad matrix dimension '{header}'")))?;
    if n == 0 {
        return Err(Error::Parse("matrix dimension must be positive".into()));
    }
    let mut rows = Vec::with_capacity(n);
    for r in 0..n {
        let line = lines
            .next()
            .ok_or_else(|| Error::Parse(format!("expected {n} rows, found {r}")))?;
        let row = line
            .split_whitespace()
            .map(T::parse_text)
            .collect::<Result<Vec<T>>>()?;
        if row.len() != n {
            return Err(Error::Parse(format!(
                "row {} has {} entries, expected {n}",
                r + 1,
                row.len()
            )));
        }
        rows.push(row);
    }
    Ok(Matrix::from_rows(rows))
}

pub fn parse_matrix<T: TextScalar>(text: &str) -> Result<Matrix<T>> {
    let mut lines = content_lines(text);
    let m = read_block(&mut lines)?;
    if let Some(extra) = lines.next() {
        return Err(Error::Parse(format!("trailing input '{extra}'")));
    }
    Ok(m)
}

pub fn format_matrix<T: TextScalar>(m: &Matrix<T>) -> String {
    let mut out = format!("{}\n", m.n());
    for i in 0..m.n() {
        let row: Vec<String> = m.row(i).iter().map(TextScalar::format_text).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

pub fn parse_assignment<T: TextScalar>(text: &str) -> Result<Assignment<T>> {
    let mut lines = content_lines(text).peekable();
    let mut out = Assignment::new();
    while let Some(name) = lines.next() {
        if name.split_whitespace().count() != 1 || name.parse::<usize>().is_ok() {
            return Err(Error::Parse(format!("expected a variable name, found '{name}'")));
        }
        let m = read_block(&mut lines)?;
        if out.insert(name.to_string(), m).is_some() {
            return Err(Error::Parse(format!("variable '{name}' bound twice")));
        }
    }
    Ok(out)
}

pub fn format_assignment<T: TextScalar>(a: &Assignment<T>) -> String {
    a.iter()
        .map(|(name, m)| format!("{name}\n{}", format_matrix(m)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_forms() {
        let c = |s| Complex64::parse_text(s).unwrap();
        assert_eq!(c("1+2i"), Complex64::new(1.0, 2.0));
        assert_eq!(c("-1.5e-3-2i"), Complex64::new(-1.5e-3, -2.0));
        assert_eq!(c("3"), Complex64::new(3.0, 0.0));
        assert_eq!(c("-i"), Complex64::new(0.0, -1.0));
        assert_eq!(c("2.5i"), Complex64::new(0.0, 2.5));
        assert_eq!(c("1e-3+1e+2i"), Complex64::new(1e-3, 100.0));
        assert!(Complex64::parse_text("1+2j").is_err());
    }

    #[test]
    fn rational_forms() {
        let q = |s| BigRational::parse_text(s).unwrap();
        assert_eq!(q("3/6"), BigRational::new(1.into(), 2.into()));
        assert_eq!(q("-0.25"), BigRational::new((-1).into(), 4.into()));
        assert_eq!(q("7"), BigRational::from_integer(7.into()));
        assert!(BigRational::parse_text("1/0").is_err());
    }

    #[test]
    fn matrix_round_trip() {
        let m = Matrix::from_rows(vec![vec![1.0, -0.5], vec![1e-20, 3.0]]);
        assert_eq!(parse_matrix::<f64>(&format_matrix(&m)).unwrap(), m);
        let z = Matrix::from_rows(vec![
            vec![Complex64::new(1.0, -2.0), Complex64::new(0.0, 0.0)],
            vec![Complex64::new(-0.0, 1.0), Complex64::new(3.0, 0.5)],
        ]);
        assert_eq!(parse_matrix::<Complex64>(&format_matrix(&z)).unwrap(), z);
    }

    #[test]
    fn assignment_round_trip() {
        let text = "# test\nA\n2\n1 0\n0 1\n\nB\n2\n0 1\n1 0\n";
        let a = parse_assignment::<f64>(text).unwrap();
        assert_eq!(a.len(), 2);
        assert_eq!(parse_assignment::<f64>(&format_assignment(&a)).unwrap(), a);
    }

    #[test]
    fn malformed_blocks() {
        assert!(parse_matrix::<f64>("2\n1 0\n").is_err());
        assert!(parse_matrix::<f64>("2\n1 0 0\n0 1\n").is_err());
        assert!(parse_assignment::<f64>("A\n1\n1\nA\n1\n2\n").is_err());
    }
}
