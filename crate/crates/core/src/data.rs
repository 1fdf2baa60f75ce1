//! CSV ingest with mean imputation and angle scaling, and atomic file output.

use std::f64::consts::TAU;
use std::io::Write;
use std::path::Path;

use crate::error::{Error, Result};

/// Numeric table read from a CSV file.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let c = self.columns.iter().position(|n| n == name)?;
        Some(self.rows.iter().map(|r| r[c]).collect())
    }
}

fn is_missing(cell: &str) -> bool {
    let t = cell.trim();
    t.is_empty() || t.eq_ignore_ascii_case("nan") || t.eq_ignore_ascii_case("na")
}

/// Column names from the header row.
pub fn csv_header(path: impl AsRef<Path>) -> Result<Vec<String>> {
    let path = path.as_ref();
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| csv_error(path, e))?;
    Ok(reader
        .headers()
        .map_err(|e| csv_error(path, e))?
        .iter()
        .map(str::to_string)
        .collect())
}

/// Reads the named columns (all columns when `columns` is empty). Missing
/// cells (empty, `NA`, `NaN`) are replaced by their column mean; with `scale`,
/// each column is min-max mapped onto `[0, 2π]`.
pub fn ingest_csv(path: impl AsRef<Path>, columns: &[String], scale: bool) -> Result<Table> {
    let path = path.as_ref();
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| csv_error(path, e))?;
    let header = csv_header(path)?;
    let wanted: Vec<String> = if columns.is_empty() {
        header.clone()
    } else {
        columns.to_vec()
    };
    let idx = wanted
        .iter()
        .map(|name| {
            header.iter().position(|h| h == name).ok_or_else(|| {
                Error::Schema(format!(
                    "{}: missing column '{name}' (have {})",
                    path.display(),
                    header.join(", ")
                ))
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let mut cells: Vec<Vec<Option<f64>>> = Vec::new();
    for (r, record) in reader.records().enumerate() {
        let record = record.map_err(|e| csv_error(path, e))?;
        // header is line 1
        let line = r + 2;
        let row = idx
            .iter()
            .zip(&wanted)
            .map(|(&c, name)| {
                let cell = record.get(c).unwrap_or("");
                if is_missing(cell) {
                    return Ok(None);
                }
                cell.trim().parse::<f64>().map(Some).map_err(|_| Error::Parse {
                    line,
                    message: format!(
                        "{}: column '{name}': '{cell}' is not a number",
                        path.display()
                    ),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        cells.push(row);
    }

    let n_cols = wanted.len();
    let mut rows = vec![vec![0.0; n_cols]; cells.len()];
    for c in 0..n_cols {
        let present: Vec<f64> = cells.iter().filter_map(|r| r[c]).collect();
        if present.is_empty() && !cells.is_empty() {
            return Err(Error::Schema(format!(
                "{}: column '{}' has no numeric values",
                path.display(),
                wanted[c]
            )));
        }
        let mean = present.iter().sum::<f64>() / present.len().max(1) as f64;
        for (r, row) in cells.iter().enumerate() {
            rows[r][c] = row[c].unwrap_or(mean);
        }
        if scale {
            scale_column(&mut rows, c);
        }
    }
    Ok(Table {
        columns: wanted,
        rows,
    })
}

/// Min-max onto `[0, 2π]`; a constant column becomes all zeros.
fn scale_column(rows: &mut [Vec<f64>], c: usize) {
    let (lo, hi) = rows
        .iter()
        .map(|r| r[c])
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
    let range = hi - lo;
    for r in rows.iter_mut() {
        r[c] = if range > 0.0 { TAU * (r[c] - lo) / range } else { 0.0 };
    }
}

fn csv_error(path: &Path, source: csv::Error) -> Error {
    Error::Csv {
        path: path.to_path_buf(),
        source,
    }
}

/// Writes `bytes` to a temporary file beside `path`, then renames it into place.
pub fn write_atomic(path: impl AsRef<Path>, bytes: &[u8]) -> Result<()> {
    let path = path.as_ref();
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| Error::io(path, e))?;
    tmp.write_all(bytes).map_err(|e| Error::io(path, e))?;
    tmp.persist(path).map_err(|e| Error::io(path, e.error))?;
    Ok(())
}

/// Header-less CSV of a real matrix, using shortest round-trip formatting.
pub fn matrix_to_csv(matrix: &[Vec<f64>]) -> String {
    let mut out = String::new();
    for row in matrix {
        let cells: Vec<String> = row.iter().map(|v| format!("{v:?}")).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

pub fn write_matrix_csv(path: impl AsRef<Path>, matrix: &[Vec<f64>]) -> Result<()> {
    write_atomic(path, matrix_to_csv(matrix).as_bytes())
}
