//! Text formats shared by the CLI and the experiment drivers.

use crate::error::{Error, Result};
use crate::linalg::DenseMatrix;
use std::fmt::Write as _;
use std::path::Path;

/// Parse the matrix text format: first line `rows cols`, then `rows` lines
/// of `cols` whitespace-separated decimal floats. NaN and infinities are
/// rejected, as are zero dimensions.
pub fn parse_matrix(text: &str) -> Result<DenseMatrix> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header = lines
        .next()
        .ok_or_else(|| Error::Parse("empty matrix file".into()))?;
    let mut parts = header.split_whitespace();
    let rows: usize = parts
        .next()
        .ok_or_else(|| Error::Parse("missing row count".into()))?
        .parse()
        .map_err(|e| Error::Parse(format!("bad row count: {e}")))?;
    let cols: usize = parts
        .next()
        .ok_or_else(|| Error::Parse("missing column count".into()))?
        .parse()
        .map_err(|e| Error::Parse(format!("bad column count: {e}")))?;
    if parts.next().is_some() {
        return Err(Error::Parse("header must be exactly `rows cols`".into()));
    }
    if rows == 0 || cols == 0 {
        return Err(Error::Parse("dimensions must be positive".into()));
    }
    let mut entries = Vec::with_capacity(rows * cols);
    for (i, line) in lines.enumerate() {
        if i >= rows {
            return Err(Error::Parse(format!("more than {rows} data lines")));
        }
        let mut count = 0usize;
        for tok in line.split_whitespace() {
            let v: f64 = tok
                .parse()
                .map_err(|e| Error::Parse(format!("line {}: bad float `{tok}`: {e}", i + 2)))?;
            if !v.is_finite() {
                return Err(Error::Parse(format!(
                    "line {}: non-finite entry `{tok}`",
                    i + 2
                )));
            }
            entries.push(v);
            count += 1;
        }
        if count != cols {
            return Err(Error::Parse(format!(
                "line {}: expected {cols} entries, got {count}",
                i + 2
            )));
        }
    }
    if entries.len() != rows * cols {
        return Err(Error::Parse(format!(
            "expected {rows} data lines, got {}",
            entries.len() / cols
        )));
    }
    DenseMatrix::new(rows, cols, entries)
}

/// Render the matrix text format with shortest exact decimal entries, so a
/// write/read round trip is bit-identical.
pub fn format_matrix(m: &DenseMatrix) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{} {}", m.rows(), m.cols());
    for i in 0..m.rows() {
        let row = m.row(i);
        for (j, v) in row.iter().enumerate() {
            if j > 0 {
                out.push(' ');
            }
            let _ = write!(out, "{v}");
        }
        out.push('\n');
    }
    out
}

pub fn read_matrix(path: &Path) -> Result<DenseMatrix> {
    parse_matrix(&std::fs::read_to_string(path)?)
}

pub fn write_matrix(path: &Path, m: &DenseMatrix) -> Result<()> {
    Ok(std::fs::write(path, format_matrix(m))?)
}

/// Vectors are stored as single-column matrices.
pub fn read_vector(path: &Path) -> Result<Vec<f64>> {
    let m = read_matrix(path)?;
    if m.cols() != 1 {
        return Err(Error::Parse(format!(
            "expected a column vector (n 1), got {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    Ok(m.entries().to_vec())
}

pub fn write_vector(path: &Path, v: &[f64]) -> Result<()> {
    let m = DenseMatrix::column(v)?;
    write_matrix(path, &m)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_is_exact() {
        let m = DenseMatrix::new(
            2,
            3,
            vec![1.0, -0.5, 1.0 / 3.0, std::f64::consts::PI, 1e-300, -2.5e17],
        )
        .unwrap();
        let text = format_matrix(&m);
        let back = parse_matrix(&text).unwrap();
        assert_eq!(m.entries(), back.entries());
    }

    #[test]
    fn rejects_non_finite_tokens() {
        assert!(parse_matrix("1 2\nNaN 1.0\n").is_err());
        assert!(parse_matrix("1 2\ninf 1.0\n").is_err());
    }

    #[test]
    fn rejects_shape_mismatches() {
        assert!(parse_matrix("2 2\n1 2\n3\n").is_err());
        assert!(parse_matrix("2 2\n1 2\n").is_err());
        assert!(parse_matrix("0 2\n").is_err());
        assert!(parse_matrix("1 1 1\n5\n").is_err());
    }
}
