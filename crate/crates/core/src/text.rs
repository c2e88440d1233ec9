//! Shared pieces of the line-oriented file formats.

use thiserror::Error;

use crate::field::Field;
use crate::matrix::Matrix;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {msg}")]
pub struct TextError {
    pub line: usize,
    pub msg: String,
}

impl TextError {
    pub fn new(line: usize, msg: impl Into<String>) -> Self {
        TextError { line, msg: msg.into() }
    }
}

/// Non-empty lines with comments stripped, paired with 1-based line numbers.
pub fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(k, line)| {
        let body = line.split('#').next().unwrap_or("").trim();
        (!body.is_empty()).then_some((k + 1, body))
    })
}

/// Largest dimension a file may declare at one vertex or block.
pub const MAX_DIM: usize = 256;
/// Largest total dimension a module or bimodule file may declare.
pub const MAX_TOTAL_DIM: usize = 1024;

pub fn parse_dim(line: usize, rhs: &str) -> Result<usize, TextError> {
    let d: usize = rhs.parse().map_err(|_| TextError::new(line, format!("`{rhs}` is not a dimension")))?;
    if d > MAX_DIM {
        return Err(TextError::new(line, format!("dimension {d} exceeds {MAX_DIM}")));
    }
    Ok(d)
}

pub fn check_total_dim(total: usize) -> Result<(), TextError> {
    if total > MAX_TOTAL_DIM {
        return Err(TextError::new(0, format!("total dimension {total} exceeds {MAX_TOTAL_DIM}")));
    }
    Ok(())
}

/// Reads `[[a,b],[c,d]]`. Whitespace is ignored; `[]` is a matrix with no
/// rows.
pub fn parse_matrix<F: Field>(text: &str) -> Result<Vec<Vec<F>>, String> {
    let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let inner = compact
        .strip_prefix('[')
        .and_then(|s| s.strip_suffix(']'))
        .ok_or_else(|| format!("`{text}` is not a bracketed matrix"))?;
    let mut rows = Vec::new();
    let mut rest = inner;
    while !rest.is_empty() {
        let body = rest.strip_prefix('[').ok_or_else(|| format!("expected `[` in `{text}`"))?;
        let end = body.find(']').ok_or_else(|| format!("unclosed row in `{text}`"))?;
        let row = &body[..end];
        let entries = if row.is_empty() {
            Vec::new()
        } else {
            row.split(',').map(|e| F::parse_scalar(e).map_err(|err| err.to_string())).collect::<Result<Vec<_>, _>>()?
        };
        rows.push(entries);
        rest = &body[end + 1..];
        if let Some(r) = rest.strip_prefix(',') {
            if r.is_empty() {
                return Err(format!("trailing comma in `{text}`"));
            }
            rest = r;
        } else if !rest.is_empty() {
            return Err(format!("expected `,` between rows in `{text}`"));
        }
    }
    if rows.windows(2).any(|w| w[0].len() != w[1].len()) {
        return Err(format!("ragged rows in `{text}`"));
    }
    Ok(rows)
}

/// Builds a matrix of the expected shape from parsed rows.
pub fn shaped<F: Field>(rows: Vec<Vec<F>>, r: usize, c: usize) -> Result<Matrix<F>, String> {
    let got_c = rows.first().map_or(0, Vec::len);
    if rows.len() == r && (got_c == c || r == 0) {
        return Ok(Matrix::from_rows(rows, c));
    }
    if r * c == 0 && rows.iter().all(Vec::is_empty) {
        return Ok(Matrix::zeros(r, c));
    }
    Err(format!("expected a {r}x{c} matrix, got {}x{got_c}", rows.len()))
}

/// Splits `<lhs> = <rhs>` around the first `=`.
pub fn split_assignment(line: &str) -> Option<(&str, &str)> {
    line.split_once('=').map(|(l, r)| (l.trim(), r.trim()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Rational;

    #[test]
    fn matrices() {
        let m: Vec<Vec<Rational>> = parse_matrix("[[1, 2], [3, -1/2]]").unwrap();
        assert_eq!(m.len(), 2);
        assert_eq!(m[1][1], Rational::new(-1, 2));
        assert!(parse_matrix::<Rational>("[]").unwrap().is_empty());
        assert_eq!(parse_matrix::<Rational>("[[],[]]").unwrap().len(), 2);
        assert!(parse_matrix::<Rational>("[[1],[2,3]]").is_err());
        assert!(parse_matrix::<Rational>("[[1]").is_err());
        assert!(shaped::<Rational>(Vec::new(), 0, 3).is_ok());
        assert!(shaped::<Rational>(vec![vec![], vec![]], 2, 0).is_ok());
    }
}
