//! Plain-text matrix format.
//!
//! The first line holds `<rows> <cols>`; the remaining whitespace-separated
//! tokens are the entries in row-major order, written with 17 significant
//! digits so `f64` values survive a round trip unchanged. Vectors are stored
//! as single-column matrices.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::linalg::{DenseMatrix, Vector};
use crate::scalar::Real;

/// 17-significant-digit decimal rendering of `v`.
pub fn format_real<T: Real>(v: T) -> String {
    format!("{:.16e}", v.as_f64())
}

pub fn format_matrix<T: Real>(m: &DenseMatrix<T>) -> String {
    let mut out = String::with_capacity(24 * m.len() + 16);
    let _ = writeln!(out, "{} {}", m.nrows(), m.ncols());
    for i in 0..m.nrows() {
        let row: Vec<String> = (0..m.ncols()).map(|j| format_real(m[(i, j)])).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

pub fn parse_matrix<T: Real>(text: &str) -> Result<DenseMatrix<T>> {
    let mut lines = text.lines();
    let header = lines
        .by_ref()
        .find(|l| !l.trim().is_empty())
        .ok_or_else(|| Error::Format("empty file".into()))?;
    let dims: Vec<&str> = header.split_whitespace().collect();
    if dims.len() != 2 {
        return Err(Error::Format(format!("header must be '<rows> <cols>', got '{header}'")));
    }
    let parse_dim = |s: &str| {
        s.parse::<usize>()
            .map_err(|_| Error::Format(format!("bad dimension '{s}' in header")))
    };
    let rows = parse_dim(dims[0])?;
    let cols = parse_dim(dims[1])?;
    if rows == 0 || cols == 0 {
        return Err(Error::Format(format!("dimensions must be positive, got {rows} x {cols}")));
    }
    let values = lines
        .flat_map(str::split_whitespace)
        .map(|tok| {
            let v: f64 = tok
                .parse()
                .map_err(|_| Error::Format(format!("bad entry '{tok}'")))?;
            if !v.is_finite() {
                return Err(Error::Format(format!("non-finite entry '{tok}'")));
            }
            Ok(T::lit(v))
        })
        .collect::<Result<Vec<T>>>()?;
    if values.len() != rows * cols {
        return Err(Error::Format(format!(
            "header declares {rows} x {cols} = {} entries but found {}",
            rows * cols,
            values.len()
        )));
    }
    Ok(DenseMatrix::from_row_slice(rows, cols, &values))
}

pub fn save_matrix<T: Real>(m: &DenseMatrix<T>, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, format_matrix(m)).map_err(|e| Error::io(path, e))
}

pub fn load_matrix<T: Real>(path: impl AsRef<Path>) -> Result<DenseMatrix<T>> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_matrix(&text)
}

pub fn save_vector<T: Real>(v: &Vector<T>, path: impl AsRef<Path>) -> Result<()> {
    let m = DenseMatrix::from_column_slice(v.len(), 1, v.as_slice());
    save_matrix(&m, path)
}

pub fn load_vector<T: Real>(path: impl AsRef<Path>) -> Result<Vector<T>> {
    let m = load_matrix::<T>(path)?;
    if m.ncols() != 1 {
        return Err(Error::Format(format!(
            "expected a column vector, got {} x {}",
            m.nrows(),
            m.ncols()
        )));
    }
    Ok(m.column(0).into_owned())
}
