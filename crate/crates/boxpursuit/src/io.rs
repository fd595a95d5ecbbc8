//! Matrix and vector file formats.
//!
//! CSV: row-major, no header, one row per line, values at full precision
//! (17 significant digits). JSON: `{"rows": m, "cols": N, "data": [...]}`
//! with row-major data. Vectors are matrices with a single column (or a
//! single row, accepted on read).

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};
use std::io::{BufRead, BufReader, Write};
use std::path::Path;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("{path}:{line}:{column}: invalid number `{token}`")]
    BadNumber {
        path: String,
        line: usize,
        column: usize,
        token: String,
    },
    #[error("{path}:{line}: row has {got} fields, expected {expected}")]
    RaggedRow {
        path: String,
        line: usize,
        got: usize,
        expected: usize,
    },
    #[error("{path}: empty file")]
    Empty { path: String },
    #[error("{path}: expected a vector, got a {rows}x{cols} matrix")]
    NotAVector {
        path: String,
        rows: usize,
        cols: usize,
    },
    #[error("{path}: JSON dimensions {rows}x{cols} do not match {len} data values")]
    JsonShape {
        path: String,
        rows: usize,
        cols: usize,
        len: usize,
    },
    #[error("{path}: {source}")]
    Json {
        path: String,
        source: serde_json::Error,
    },
    #[error("{0}")]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Serialize, Deserialize)]
pub struct MatrixJson {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<f64>,
}

pub fn read_matrix_csv(path: &Path) -> Result<DMatrix<f64>, FormatError> {
    let display = path.display().to_string();
    let file = std::fs::File::open(path)?;
    let reader = BufReader::new(file);
    let mut data: Vec<f64> = Vec::new();
    let mut cols: Option<usize> = None;
    let mut rows = 0usize;
    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        let fields: Vec<&str> = trimmed.split(',').collect();
        match cols {
            None => cols = Some(fields.len()),
            Some(c) if c != fields.len() => {
                return Err(FormatError::RaggedRow {
                    path: display,
                    line: idx + 1,
                    got: fields.len(),
                    expected: c,
                })
            }
            _ => {}
        }
        for (col, field) in fields.iter().enumerate() {
            let v: f64 = field.trim().parse().map_err(|_| FormatError::BadNumber {
                path: display.clone(),
                line: idx + 1,
                column: col + 1,
                token: field.trim().to_string(),
            })?;
            data.push(v);
        }
        rows += 1;
    }
    let cols = cols.ok_or(FormatError::Empty { path: display })?;
    Ok(DMatrix::from_row_slice(rows, cols, &data))
}

pub fn write_matrix_csv(path: &Path, a: &DMatrix<f64>) -> Result<(), FormatError> {
    let mut out = std::io::BufWriter::new(std::fs::File::create(path)?);
    write_matrix_csv_to(&mut out, a)?;
    Ok(())
}

pub fn write_matrix_csv_to<W: Write>(out: &mut W, a: &DMatrix<f64>) -> std::io::Result<()> {
    for i in 0..a.nrows() {
        let row: Vec<String> = (0..a.ncols()).map(|j| format_full(a[(i, j)])).collect();
        writeln!(out, "{}", row.join(","))?;
    }
    Ok(())
}

/// 17 significant digits: enough to round-trip any f64 exactly.
pub fn format_full(v: f64) -> String {
    format!("{:.16e}", v)
}

pub fn read_vector_csv(path: &Path) -> Result<DVector<f64>, FormatError> {
    let m = read_matrix_csv(path)?;
    if m.ncols() == 1 {
        Ok(DVector::from_column_slice(m.column(0).as_slice()))
    } else if m.nrows() == 1 {
        Ok(DVector::from_iterator(m.ncols(), m.row(0).iter().copied()))
    } else {
        Err(FormatError::NotAVector {
            path: path.display().to_string(),
            rows: m.nrows(),
            cols: m.ncols(),
        })
    }
}

pub fn write_vector_csv(path: &Path, v: &DVector<f64>) -> Result<(), FormatError> {
    let m = DMatrix::from_column_slice(v.len(), 1, v.as_slice());
    write_matrix_csv(path, &m)
}

pub fn read_matrix_json(path: &Path) -> Result<DMatrix<f64>, FormatError> {
    let display = path.display().to_string();
    let text = std::fs::read_to_string(path)?;
    let wrapper: MatrixJson = serde_json::from_str(&text).map_err(|source| FormatError::Json {
        path: display.clone(),
        source,
    })?;
    if wrapper.rows * wrapper.cols != wrapper.data.len() {
        return Err(FormatError::JsonShape {
            path: display,
            rows: wrapper.rows,
            cols: wrapper.cols,
            len: wrapper.data.len(),
        });
    }
    Ok(DMatrix::from_row_slice(
        wrapper.rows,
        wrapper.cols,
        &wrapper.data,
    ))
}

pub fn write_matrix_json(path: &Path, a: &DMatrix<f64>) -> Result<(), FormatError> {
    let wrapper = MatrixJson {
        rows: a.nrows(),
        cols: a.ncols(),
        data: a.transpose().as_slice().to_vec(), // nalgebra stores column-major
    };
    let text = serde_json::to_string(&wrapper).expect("matrix serialization cannot fail");
    std::fs::write(path, text)?;
    Ok(())
}

/// Reads a matrix, dispatching on the `.json` extension.
pub fn read_matrix_auto(path: &Path) -> Result<DMatrix<f64>, FormatError> {
    if path.extension().is_some_and(|e| e == "json") {
        read_matrix_json(path)
    } else {
        read_matrix_csv(path)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tmpfile(name: &str) -> std::path::PathBuf {
        let dir = std::env::temp_dir().join("boxpursuit-io-tests");
        std::fs::create_dir_all(&dir).unwrap();
        dir.join(name)
    }

    #[test]
    fn csv_round_trip_preserves_bits() {
        let a = DMatrix::from_row_slice(
            2,
            3,
            &[1.0, -0.5, 1.0 / 3.0, 2.2250738585072014e-308, 1e300, -0.0],
        );
        let p = tmpfile("rt.csv");
        write_matrix_csv(&p, &a).unwrap();
        let b = read_matrix_csv(&p).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn json_round_trip() {
        let a = DMatrix::from_row_slice(2, 2, &[1.5, 2.5, -3.5, 4.25]);
        let p = tmpfile("rt.json");
        write_matrix_json(&p, &a).unwrap();
        let b = read_matrix_json(&p).unwrap();
        assert_eq!(a, b);
        assert_eq!(read_matrix_auto(&p).unwrap(), a);
    }

    #[test]
    fn bad_number_names_line_and_column() {
        let p = tmpfile("bad.csv");
        std::fs::write(&p, "1.0,2.0\n3.0,oops\n").unwrap();
        let err = read_matrix_csv(&p).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains(":2:2:"), "got {msg}");
        assert!(msg.contains("oops"));
    }

    #[test]
    fn ragged_row_reports_line() {
        let p = tmpfile("ragged.csv");
        std::fs::write(&p, "1.0,2.0\n3.0\n").unwrap();
        let msg = read_matrix_csv(&p).unwrap_err().to_string();
        assert!(msg.contains(":2:"), "got {msg}");
    }

    #[test]
    fn vector_accepts_row_or_column() {
        let p = tmpfile("vec.csv");
        std::fs::write(&p, "1.0\n2.0\n3.0\n").unwrap();
        assert_eq!(read_vector_csv(&p).unwrap().len(), 3);
        std::fs::write(&p, "1.0,2.0,3.0\n").unwrap();
        assert_eq!(read_vector_csv(&p).unwrap().len(), 3);
        std::fs::write(&p, "1.0,2.0\n3.0,4.0\n").unwrap();
        assert!(read_vector_csv(&p).is_err());
    }
}
