//! CSV ingestion, preprocessing, chronological splitting and sliding-window
//! sample construction.
//!
//! The pipeline is leakage-free by construction: normalization statistics
//! come from training rows only, the moving average is causal (trailing), and
//! windows never cross a split boundary.

use crate::error::{Error, Result};
use crate::series::SeriesMatrix;
use crate::tensor::Tensor;
use std::ops::Range;
use std::path::Path;

/// Load a CSV file: UTF-8, header row, comma separated, decimal point,
/// empty cell = missing. Rows are kept in file order (time ascending).
pub fn load_csv(path: &Path) -> Result<SeriesMatrix> {
    let text = std::fs::read_to_string(path)?;
    parse_csv(&text)
}

/// Parse CSV text; see [`load_csv`].
pub fn parse_csv(text: &str) -> Result<SeriesMatrix> {
    let mut lines = text.lines().enumerate();
    let (_, header) = lines.next().ok_or_else(|| Error::Parse {
        row: 0,
        col: 0,
        msg: "empty file".into(),
    })?;
    let names: Vec<String> = header.split(',').map(|s| s.trim().to_string()).collect();
    let cols = names.len();
    let mut values = Vec::new();
    let mut rows = 0;
    for (line_idx, line) in lines {
        if line.is_empty() {
            continue;
        }
        let cells: Vec<&str> = line.split(',').collect();
        if cells.len() != cols {
            return Err(Error::Parse {
                row: line_idx,
                col: cells.len(),
                msg: format!("expected {cols} cells, found {}", cells.len()),
            });
        }
        for (c, cell) in cells.iter().enumerate() {
            let cell = cell.trim();
            if cell.is_empty() {
                values.push(f64::NAN); // missing marker
            } else {
                let v: f64 = cell.parse().map_err(|_| Error::Parse {
                    row: line_idx,
                    col: c,
                    msg: format!("not a number: '{cell}'"),
                })?;
                values.push(v);
            }
        }
        rows += 1;
    }
    SeriesMatrix::new(rows, cols, names, values)
}

/// Fill missing cells per column: interior gaps by linear interpolation
/// between the nearest observed neighbors, leading/trailing gaps by the
/// nearest observed value.
pub fn linear_interpolate_missing(series: &SeriesMatrix) -> Result<SeriesMatrix> {
    let mut out = series.clone();
    for c in 0..series.cols() {
        let col = series.column(c);
        let observed: Vec<usize> = (0..col.len()).filter(|&r| !col[r].is_nan()).collect();
        if observed.is_empty() {
            return Err(Error::Data(format!(
                "column '{}' has no observed values",
                series.names()[c]
            )));
        }
        if observed.len() == col.len() {
            continue;
        }
        for r in 0..col.len() {
            if !col[r].is_nan() {
                continue;
            }
            let next = observed.partition_point(|&o| o < r);
            let filled = if next == 0 {
                col[observed[0]] // leading gap
            } else if next == observed.len() {
                col[observed[observed.len() - 1]] // trailing gap
            } else {
                let (lo, hi) = (observed[next - 1], observed[next]);
                let frac = (r - lo) as f64 / (hi - lo) as f64;
                col[lo] + frac * (col[hi] - col[lo])
            };
            out.set(r, c, filled);
        }
    }
    Ok(out)
}

/// Drop input columns that are sparse (more than `max_zeros` zeros) or
/// constant over the whole series. Columns listed in `protected` (targets)
/// are never dropped. Returns the surviving series and the surviving
/// original column indices.
pub fn drop_sparse_or_constant(
    series: &SeriesMatrix,
    max_zeros: usize,
    protected: &[usize],
) -> Result<(SeriesMatrix, Vec<usize>)> {
    let mut keep = Vec::new();
    for c in 0..series.cols() {
        if protected.contains(&c) {
            keep.push(c);
            continue;
        }
        let col = series.column(c);
        let zeros = col.iter().filter(|&&v| v == 0.0).count();
        if zeros > max_zeros {
            continue;
        }
        let constant = col.windows(2).all(|w| w[0] == w[1]);
        if constant {
            continue;
        }
        keep.push(c);
    }
    if keep.is_empty() {
        return Err(Error::Data("all columns were dropped".into()));
    }
    Ok((series.select_columns(&keep)?, keep))
}

/// Trailing (causal) moving average of the last `order` values; the first
/// `order - 1` rows average over the history available so far.
pub fn moving_average(series: &SeriesMatrix, order: usize) -> Result<SeriesMatrix> {
    if order == 0 {
        return Err(Error::Contract("moving average order must be >= 1".into()));
    }
    if series.rows() < order {
        return Err(Error::Data(format!(
            "series of {} rows is shorter than filter order {order}",
            series.rows()
        )));
    }
    let mut out = series.clone();
    for c in 0..series.cols() {
        let col = series.column(c);
        for r in 0..col.len() {
            let start = r + 1 - order.min(r + 1);
            let window = &col[start..=r];
            let mean = window.iter().sum::<f64>() / window.len() as f64;
            out.set(r, c, mean);
        }
    }
    Ok(out)
}

/// Chronological train/validation/test boundaries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitBounds {
    pub train: Range<usize>,
    pub val: Range<usize>,
    pub test: Range<usize>,
}

impl SplitBounds {
    pub fn ranges(&self) -> [&Range<usize>; 3] {
        [&self.train, &self.val, &self.test]
    }
}

/// Per-column normalization statistics, computed on training rows only.
#[derive(Debug, Clone, PartialEq)]
pub struct ColumnStats {
    pub mean: f64,
    pub std: f64,
}

/// A series with split boundaries and, once z-scored, the training-set
/// statistics needed to undo the transform.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub series: SeriesMatrix,
    pub split: SplitBounds,
    pub norm: Option<Vec<ColumnStats>>,
}

/// Fractional split: train and validation sizes round down, the test split
/// takes the remainder.
pub fn split_fractions(series: SeriesMatrix, fractions: (f64, f64, f64)) -> Result<Dataset> {
    let (ft, fv, fe) = fractions;
    if (ft + fv + fe - 1.0).abs() > 1e-9 || ft < 0.0 || fv < 0.0 || fe < 0.0 {
        return Err(Error::Contract(format!(
            "fractions {fractions:?} must be nonnegative and sum to 1"
        )));
    }
    let len = series.rows();
    let n_train = (ft * len as f64).floor() as usize;
    let n_val = (fv * len as f64).floor() as usize;
    let n_test = len - n_train - n_val;
    split_counts(series, (n_train, n_val, n_test))
}

/// Explicit row counts; must sum to the series length.
pub fn split_counts(series: SeriesMatrix, counts: (usize, usize, usize)) -> Result<Dataset> {
    let (n_train, n_val, n_test) = counts;
    if n_train + n_val + n_test != series.rows() {
        return Err(Error::Data(format!(
            "split counts {counts:?} do not sum to series length {}",
            series.rows()
        )));
    }
    if n_train == 0 || n_val == 0 || n_test == 0 {
        return Err(Error::Data(format!("empty split in {counts:?}")));
    }
    let split = SplitBounds {
        train: 0..n_train,
        val: n_train..n_train + n_val,
        test: n_train + n_val..series.rows(),
    };
    Ok(Dataset {
        series,
        split,
        norm: None,
    })
}

/// Z-score every column using mean/std of the training rows only; the
/// statistics are retained for the inverse transform of predictions.
pub fn zscore(dataset: &Dataset) -> Result<Dataset> {
    let series = &dataset.series;
    if series.has_missing() {
        return Err(Error::Data("z-score requires a fully observed series".into()));
    }
    let train = &dataset.split.train;
    let n_train = train.len() as f64;
    let mut stats = Vec::with_capacity(series.cols());
    for c in 0..series.cols() {
        let mut sum = 0.0;
        for r in train.clone() {
            sum += series.at(r, c);
        }
        let mean = sum / n_train;
        let mut ss = 0.0;
        for r in train.clone() {
            let d = series.at(r, c) - mean;
            ss += d * d;
        }
        let std = (ss / n_train).sqrt();
        if std == 0.0 {
            return Err(Error::Data(format!(
                "column '{}' is constant on the training split",
                series.names()[c]
            )));
        }
        stats.push(ColumnStats { mean, std });
    }
    let mut out = series.clone();
    for c in 0..series.cols() {
        let ColumnStats { mean, std } = stats[c];
        for r in 0..series.rows() {
            out.set(r, c, (series.at(r, c) - mean) / std);
        }
    }
    Ok(Dataset {
        series: out,
        split: dataset.split.clone(),
        norm: Some(stats),
    })
}

/// Undo the z-score for one column's value.
pub fn denormalize(stats: &ColumnStats, v: f64) -> f64 {
    v * stats.std + stats.mean
}

/// One training example: an input window and the next step's target values.
#[derive(Debug, Clone, PartialEq)]
pub struct WindowSample {
    /// `t_steps x k_vars` input block.
    pub input: Tensor,
    /// Target values, one per target column.
    pub target: Vec<f64>,
    /// Absolute series row of the target (the first row after the window).
    pub target_row: usize,
}

/// The window samples of the three splits.
#[derive(Debug, Clone)]
pub struct WindowSet {
    pub train: Vec<WindowSample>,
    pub val: Vec<WindowSample>,
    pub test: Vec<WindowSample>,
    pub t_steps: usize,
    /// Column indices of the targets within the dataset series.
    pub targets: Vec<usize>,
}

/// Build sliding windows within each split independently: sample `i` of a
/// split takes input rows `i .. i + t_steps` (relative to the split start)
/// and its target from row `i + t_steps`, restricted to the target columns.
/// No window crosses a split boundary.
pub fn make_windows(dataset: &Dataset, t_steps: usize, targets: &[usize]) -> Result<WindowSet> {
    if t_steps == 0 {
        return Err(Error::Contract("t_steps must be >= 1".into()));
    }
    if targets.is_empty() {
        return Err(Error::Contract("at least one target column".into()));
    }
    let series = &dataset.series;
    for &c in targets {
        if c >= series.cols() {
            return Err(Error::Data(format!(
                "target column {c} out of range for {} columns",
                series.cols()
            )));
        }
    }
    if series.has_missing() {
        return Err(Error::Data("windows require a fully observed series".into()));
    }
    let build = |range: &Range<usize>, name: &str| -> Result<Vec<WindowSample>> {
        if range.len() < t_steps + 1 {
            return Err(Error::Data(format!(
                "{name} split of {} rows cannot fit a window of {t_steps} steps plus target",
                range.len()
            )));
        }
        let mut out = Vec::with_capacity(range.len() - t_steps);
        for start in range.start..=range.end - t_steps - 1 {
            let mut vals = Vec::with_capacity(t_steps * series.cols());
            for r in start..start + t_steps {
                vals.extend_from_slice(series.row(r));
            }
            let target_row = start + t_steps;
            let target = targets.iter().map(|&c| series.at(target_row, c)).collect();
            out.push(WindowSample {
                input: Tensor::matrix(t_steps, series.cols(), vals)?,
                target,
                target_row,
            });
        }
        Ok(out)
    };
    Ok(WindowSet {
        train: build(&dataset.split.train, "train")?,
        val: build(&dataset.split.val, "validation")?,
        test: build(&dataset.split.test, "test")?,
        t_steps,
        targets: targets.to_vec(),
    })
}

/// Index-arithmetic leakage audit: every sample's input window must lie
/// strictly before its target row and inside its split.
pub fn audit_windows(set: &WindowSet, split: &SplitBounds) -> Result<()> {
    let audit = |samples: &[WindowSample], range: &Range<usize>, name: &str| -> Result<()> {
        for s in samples {
            let first_input_row = s.target_row - set.t_steps;
            if s.target_row >= range.end || first_input_row < range.start {
                return Err(Error::Data(format!(
                    "{name} sample with target row {} escapes split {range:?}",
                    s.target_row
                )));
            }
        }
        Ok(())
    };
    audit(&set.train, &split.train, "train")?;
    audit(&set.val, &split.val, "validation")?;
    audit(&set.test, &split.test, "test")
}
