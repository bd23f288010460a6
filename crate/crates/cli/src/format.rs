//! The `polymat` text format.
//!
//! ```text
//! polymat 1 p=7 rows=2 cols=2
//! # comment
//! 0 0 : 1 0 3
//! 1 1 : 2
//! ```
//!
//! The header gives the format version, the prime and the shape. Each entry
//! line lists 0-based indices and the coefficients in ascending order. Entries
//! that are not listed are zero. Blank lines and lines starting with `#` are
//! ignored.

use std::collections::HashMap;
use std::fmt::Write;

use polyrank::{Poly, PolyMatrix, PrimeField};
use thiserror::Error;

pub const FORMAT_VERSION: u32 = 1;

/// A rejected matrix file. Line numbers are 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("line {line}: malformed header: {reason}")]
    MalformedHeader { line: usize, reason: String },
    #[error("line {line}: unsupported format version {version}")]
    UnsupportedVersion { line: usize, version: String },
    #[error("line {line}: {p} is not a supported prime")]
    BadPrime { line: usize, p: u64 },
    #[error("line {line}: malformed entry: {reason}")]
    MalformedEntry { line: usize, reason: String },
    #[error("line {line}: entry ({i}, {j}) is outside a {rows}x{cols} matrix")]
    IndexOutOfRange {
        line: usize,
        i: usize,
        j: usize,
        rows: usize,
        cols: usize,
    },
    #[error("line {line}: coefficient {value} is not below p = {p}")]
    CoefficientOutOfRange { line: usize, value: u64, p: u64 },
    #[error("line {line}: duplicate entry ({i}, {j}), first given on line {first}")]
    DuplicateEntry {
        line: usize,
        i: usize,
        j: usize,
        first: usize,
    },
    #[error("empty input: missing header")]
    MissingHeader,
}

struct Header {
    p: u64,
    rows: usize,
    cols: usize,
}

fn parse_header(line: usize, text: &str) -> Result<Header, ParseError> {
    let bad = |reason: &str| ParseError::MalformedHeader {
        line,
        reason: reason.to_string(),
    };
    let mut words = text.split_whitespace();
    if words.next() != Some("polymat") {
        return Err(bad("expected `polymat <version> p=<prime> rows=<m> cols=<n>`"));
    }
    let version = words.next().ok_or_else(|| bad("missing format version"))?;
    if version != FORMAT_VERSION.to_string() {
        return Err(ParseError::UnsupportedVersion {
            line,
            version: version.to_string(),
        });
    }
    let mut field = |key: &str| -> Result<u64, ParseError> {
        let word = words.next().ok_or_else(|| bad(&format!("missing `{key}=`")))?;
        let value = word
            .strip_prefix(key)
            .and_then(|w| w.strip_prefix('='))
            .ok_or_else(|| bad(&format!("expected `{key}=<value>`, found `{word}`")))?;
        value
            .parse()
            .map_err(|_| bad(&format!("`{value}` is not a valid {key}")))
    };
    let p = field("p")?;
    let rows = field("rows")?;
    let cols = field("cols")?;
    if words.next().is_some() {
        return Err(bad("trailing fields"));
    }
    Ok(Header {
        p,
        rows: rows as usize,
        cols: cols as usize,
    })
}

/// Parses a matrix. `prime` replaces the header prime when given.
pub fn parse_matrix(text: &str, prime: Option<PrimeField>) -> Result<PolyMatrix, ParseError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(k, l)| (k + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (hline, htext) = lines.next().ok_or(ParseError::MissingHeader)?;
    let header = parse_header(hline, htext)?;
    let f = match prime {
        Some(f) => f,
        None => PrimeField::new(header.p).map_err(|_| ParseError::BadPrime {
            line: hline,
            p: header.p,
        })?,
    };
    let p = f.modulus();
    let mut m = PolyMatrix::zeros(f, header.rows, header.cols);
    let mut first_line = HashMap::new();
    for (line, text) in lines {
        let bad = |reason: String| ParseError::MalformedEntry { line, reason };
        let (idx, coeffs) = text
            .split_once(':')
            .ok_or_else(|| bad("expected `i j : c0 c1 ...`".to_string()))?;
        let idx: Vec<&str> = idx.split_whitespace().collect();
        let [i, j] = idx[..] else {
            return Err(bad(format!("expected two indices, found {}", idx.len())));
        };
        let index = |w: &str| w.parse::<usize>().map_err(|_| bad(format!("`{w}` is not an index")));
        let (i, j) = (index(i)?, index(j)?);
        if i >= header.rows || j >= header.cols {
            return Err(ParseError::IndexOutOfRange {
                line,
                i,
                j,
                rows: header.rows,
                cols: header.cols,
            });
        }
        if let Some(&first) = first_line.get(&(i, j)) {
            return Err(ParseError::DuplicateEntry { line, i, j, first });
        }
        first_line.insert((i, j), line);
        let mut cs = Vec::new();
        for w in coeffs.split_whitespace() {
            let value: u64 = w.parse().map_err(|_| bad(format!("`{w}` is not a coefficient")))?;
            if value >= p {
                return Err(ParseError::CoefficientOutOfRange { line, value, p });
            }
            cs.push(value);
        }
        m.set(i, j, Poly::from_coeffs(f, cs));
    }
    Ok(m)
}

/// Serializes a matrix, listing only its nonzero entries.
pub fn write_matrix(m: &PolyMatrix) -> String {
    let mut out = format!(
        "polymat {FORMAT_VERSION} p={} rows={} cols={}\n",
        m.field().modulus(),
        m.rows(),
        m.cols()
    );
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            let e = m.get(i, j);
            if e.is_zero() {
                continue;
            }
            let _ = write!(out, "{i} {j} :");
            for c in e.coeffs() {
                let _ = write!(out, " {c}");
            }
            out.push('\n');
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f7() -> PrimeField {
        PrimeField::new(7).unwrap()
    }

    #[test]
    fn header_only_is_zero() {
        let m = parse_matrix("polymat 1 p=7 rows=2 cols=2\n", None).unwrap();
        assert_eq!(m, PolyMatrix::zeros(f7(), 2, 2));
    }

    #[test]
    fn round_trip() {
        let f = f7();
        let mut m = PolyMatrix::zeros(f, 2, 3);
        m.set(0, 1, Poly::from_coeffs(f, vec![1, 0, 6]));
        m.set(1, 2, Poly::from_coeffs(f, vec![0, 3]));
        let text = write_matrix(&m);
        assert_eq!(parse_matrix(&text, None).unwrap(), m);
    }

    #[test]
    fn comments_and_trailing_zeros() {
        let text = "# header follows\npolymat 1 p=7 rows=1 cols=1\n\n0 0 : 2 5 0 0\n";
        let m = parse_matrix(text, None).unwrap();
        assert_eq!(m.get(0, 0), &Poly::from_coeffs(f7(), vec![2, 5]));
    }

    #[test]
    fn errors_carry_line_numbers() {
        let cases = [
            (
                "polymat 1 p=7 rows=1 cols=1\n0 0 : 7\n",
                ParseError::CoefficientOutOfRange {
                    line: 2,
                    value: 7,
                    p: 7,
                },
            ),
            (
                "polymat 1 p=7 rows=1 cols=1\n0 0 : 1\n\n0 0 : 2\n",
                ParseError::DuplicateEntry {
                    line: 4,
                    i: 0,
                    j: 0,
                    first: 2,
                },
            ),
            (
                "polymat 1 p=7 rows=1 cols=2\n0 2 : 1\n",
                ParseError::IndexOutOfRange {
                    line: 2,
                    i: 0,
                    j: 2,
                    rows: 1,
                    cols: 2,
                },
            ),
            ("polymat 1 p=8 rows=1 cols=1\n", ParseError::BadPrime { line: 1, p: 8 }),
            (
                "polymat 2 p=7 rows=1 cols=1\n",
                ParseError::UnsupportedVersion {
                    line: 1,
                    version: "2".into(),
                },
            ),
            ("", ParseError::MissingHeader),
        ];
        for (text, expected) in cases {
            assert_eq!(parse_matrix(text, None).unwrap_err(), expected);
        }
        assert!(matches!(
            parse_matrix("polymat 1 p=7 rows=x cols=1\n", None),
            Err(ParseError::MalformedHeader { line: 1, .. })
        ));
        assert!(matches!(
            parse_matrix("polymat 1 p=7 rows=1 cols=1\n0 0 1\n", None),
            Err(ParseError::MalformedEntry { line: 2, .. })
        ));
    }

    #[test]
    fn prime_override_rechecks_coefficients() {
        let text = "polymat 1 p=11 rows=1 cols=1\n0 0 : 9\n";
        assert!(parse_matrix(text, None).is_ok());
        assert_eq!(
            parse_matrix(text, Some(f7())).unwrap_err(),
            ParseError::CoefficientOutOfRange {
                line: 2,
                value: 9,
                p: 7
            }
        );
    }
}
