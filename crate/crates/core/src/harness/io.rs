//! Dataset files: headerless numeric CSV, one sample per row, plus an
//! optional `<file>.meta.json` sidecar describing where the rows came from.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::output::format_float;
use crate::estimators::Dataset;
use crate::models::Family;
use crate::neighbors::PointSet;

#[derive(Debug, Error)]
pub enum TableError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("row {row}, column {column}: '{text}' is not a finite number")]
    Parse { row: usize, column: usize, text: String },
    #[error("row {row} has {found} columns, expected {expected}")]
    Ragged { row: usize, found: usize, expected: usize },
    #[error("file has no rows")]
    Empty,
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("sidecar {path}: {message}")]
    Meta { path: String, message: String },
}

/// Sidecar metadata of a generated dataset. Column indices are 0-based.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetMeta {
    pub family: Family,
    pub alpha: f64,
    pub n: usize,
    pub seed: u64,
    pub x_cols: Vec<usize>,
    pub y_cols: Vec<usize>,
    #[serde(default)]
    pub basin_restarts: usize,
}

pub fn meta_path(data_path: &Path) -> PathBuf {
    let mut s = data_path.as_os_str().to_owned();
    s.push(".meta.json");
    PathBuf::from(s)
}

/// Rows as `{:.16e}` floats joined by commas, LF line endings.
pub fn points_to_csv(points: &PointSet) -> String {
    let mut out = String::new();
    for p in points.iter() {
        let row: Vec<String> = p.iter().map(|&v| format_float(v)).collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

pub fn write_dataset(path: &Path, data: &Dataset, meta: Option<&DatasetMeta>) -> Result<(), TableError> {
    let io = |p: &Path| {
        let path = p.display().to_string();
        move |source| TableError::Io { path, source }
    };
    fs::write(path, points_to_csv(data.points())).map_err(io(path))?;
    if let Some(meta) = meta {
        let mp = meta_path(path);
        let text = serde_json::to_string_pretty(meta).expect("metadata serializes") + "\n";
        fs::write(&mp, text).map_err(io(&mp))?;
    }
    Ok(())
}

/// Parses headerless numeric CSV text. Row numbers in errors are 0-based.
pub fn parse_table(text: &str) -> Result<PointSet, TableError> {
    let mut reader = csv::ReaderBuilder::new().has_headers(false).flexible(true).from_reader(text.as_bytes());
    let mut coords = Vec::new();
    let mut width = None;
    for (row, record) in reader.records().enumerate() {
        let record = record?;
        let expected = *width.get_or_insert(record.len());
        if record.len() != expected {
            return Err(TableError::Ragged { row, found: record.len(), expected });
        }
        for (column, field) in record.iter().enumerate() {
            let v: f64 = field
                .trim()
                .parse()
                .ok()
                .filter(|v: &f64| v.is_finite())
                .ok_or_else(|| TableError::Parse { row, column, text: field.to_string() })?;
            coords.push(v);
        }
    }
    let d = width.ok_or(TableError::Empty)?;
    PointSet::new(d, coords).map_err(|e| TableError::Parse { row: 0, column: 0, text: e.to_string() })
}

pub fn read_table(path: &Path) -> Result<PointSet, TableError> {
    let text = fs::read_to_string(path).map_err(|source| TableError::Io { path: path.display().to_string(), source })?;
    parse_table(&text)
}

/// Reads the sidecar of `data_path` if there is one.
pub fn read_meta(data_path: &Path) -> Result<Option<DatasetMeta>, TableError> {
    let mp = meta_path(data_path);
    if !mp.exists() {
        return Ok(None);
    }
    let path = mp.display().to_string();
    let text = fs::read_to_string(&mp).map_err(|source| TableError::Io { path: path.clone(), source })?;
    serde_json::from_str(&text).map(Some).map_err(|e| TableError::Meta { path, message: e.to_string() })
}
