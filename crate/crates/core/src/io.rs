//! Text formats: distance-matrix CSV and point-cloud CSV.

use crate::metric::{FiniteMetricSpace, MetricError};
use std::io::Read;
use std::path::Path;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum InputError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("line {line}: {source}")]
    Csv { line: u64, source: csv::Error },
    #[error("row {row}, column {col}: cannot parse {text:?} as a number")]
    Parse {
        row: usize,
        col: usize,
        text: String,
    },
    #[error("input contains no rows")]
    Empty,
    #[error(transparent)]
    Metric(#[from] MetricError),
}

fn read_rows<R: Read>(reader: R) -> Result<Vec<Vec<f64>>, InputError> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(reader);
    let mut rows = Vec::new();
    for (row, record) in rdr.records().enumerate() {
        let record = record.map_err(|e| InputError::Csv {
            line: e.position().map_or(0, |p| p.line()),
            source: e,
        })?;
        if record.iter().all(str::is_empty) {
            continue;
        }
        let parsed = record
            .iter()
            .enumerate()
            .map(|(col, text)| {
                text.parse::<f64>().map_err(|_| InputError::Parse {
                    row,
                    col,
                    text: text.to_string(),
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        rows.push(parsed);
    }
    if rows.is_empty() {
        return Err(InputError::Empty);
    }
    Ok(rows)
}

/// Square distance matrix, one row per line. Validation errors name the
/// offending (zero-based) row and column.
pub fn parse_distance_matrix<R: Read>(
    reader: R,
    check_triangle: bool,
) -> Result<FiniteMetricSpace, InputError> {
    let rows = read_rows(reader)?;
    Ok(FiniteMetricSpace::with_options(rows, None, check_triangle)?)
}

/// One point per line, comma-separated coordinates; Euclidean metric.
pub fn parse_point_cloud<R: Read>(reader: R) -> Result<FiniteMetricSpace, InputError> {
    let rows = read_rows(reader)?;
    Ok(FiniteMetricSpace::from_points(&rows)?)
}

fn open(path: &Path) -> Result<std::fs::File, InputError> {
    std::fs::File::open(path).map_err(|source| InputError::Io {
        path: path.display().to_string(),
        source,
    })
}

pub fn read_distance_matrix(
    path: &Path,
    check_triangle: bool,
) -> Result<FiniteMetricSpace, InputError> {
    parse_distance_matrix(open(path)?, check_triangle)
}

pub fn read_point_cloud(path: &Path) -> Result<FiniteMetricSpace, InputError> {
    parse_point_cloud(open(path)?)
}
