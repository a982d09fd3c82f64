//! Time-ordered multivariate series storage.

use crate::error::{Error, Result};
use std::fmt::Write as _;
use std::path::Path;

/// A time-ordered real-valued matrix: rows are time steps, columns variables.
///
/// Missing observations (empty CSV cells) are stored as NaN until
/// [`crate::dataio::linear_interpolate_missing`] fills them; every numeric
/// operation downstream of preprocessing requires a fully observed matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct SeriesMatrix {
    rows: usize,
    cols: usize,
    names: Vec<String>,
    values: Vec<f64>, // row-major
}

impl SeriesMatrix {
    pub fn new(rows: usize, cols: usize, names: Vec<String>, values: Vec<f64>) -> Result<Self> {
        if names.len() != cols {
            return Err(Error::Data(format!(
                "{} column names for {} columns",
                names.len(),
                cols
            )));
        }
        if values.len() != rows * cols {
            return Err(Error::dim("SeriesMatrix::new", &[rows, cols], &[values.len()]));
        }
        Ok(SeriesMatrix {
            rows,
            cols,
            names,
            values,
        })
    }

    /// Matrix with default column names `v1..vK`.
    pub fn from_values(rows: usize, cols: usize, values: Vec<f64>) -> Result<Self> {
        let names = (1..=cols).map(|k| format!("v{k}")).collect();
        SeriesMatrix::new(rows, cols, names, values)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn at(&self, row: usize, col: usize) -> f64 {
        self.values[row * self.cols + col]
    }

    pub fn set(&mut self, row: usize, col: usize, v: f64) {
        self.values[row * self.cols + col] = v;
    }

    pub fn row(&self, row: usize) -> &[f64] {
        &self.values[row * self.cols..(row + 1) * self.cols]
    }

    pub fn column(&self, col: usize) -> Vec<f64> {
        (0..self.rows).map(|r| self.at(r, col)).collect()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// True if any cell is a missing-value marker (NaN).
    pub fn has_missing(&self) -> bool {
        self.values.iter().any(|v| v.is_nan())
    }

    /// Keep only the given columns, in the given order.
    pub fn select_columns(&self, keep: &[usize]) -> Result<SeriesMatrix> {
        for &c in keep {
            if c >= self.cols {
                return Err(Error::Data(format!(
                    "column index {c} out of range for {} columns",
                    self.cols
                )));
            }
        }
        let names = keep.iter().map(|&c| self.names[c].clone()).collect();
        let mut values = Vec::with_capacity(self.rows * keep.len());
        for r in 0..self.rows {
            for &c in keep {
                values.push(self.at(r, c));
            }
        }
        SeriesMatrix::new(self.rows, keep.len(), names, values)
    }

    /// Write as CSV: header row of column names, one row per time step.
    /// Floats are printed in shortest round-trip form, so a write/read cycle
    /// reproduces values bit for bit.
    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let mut out = String::new();
        out.push_str(&self.names.join(","));
        out.push('\n');
        for r in 0..self.rows {
            let row = self.row(r);
            for (i, v) in row.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                if v.is_nan() {
                    // empty cell = missing
                } else {
                    let _ = write!(out, "{v}");
                }
            }
            out.push('\n');
        }
        std::fs::write(path, out)?;
        Ok(())
    }
}
