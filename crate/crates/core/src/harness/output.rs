use std::fs;
use std::path::{Path, PathBuf};

use csv::{Terminator, WriterBuilder};

use super::{summarize, HarnessError, SummaryRow, SweepRecord};

pub const RECORD_HEADER: [&str; 13] = [
    "family",
    "alpha",
    "n",
    "seed",
    "method",
    "k",
    "estimate",
    "truth",
    "error",
    "fallbacks",
    "sigma_floors",
    "wall_ms",
    "dataset_hash",
];

pub const SUMMARY_HEADER: [&str; 12] =
    ["family", "alpha", "n", "method", "k", "runs", "failures", "mean", "sd", "truth", "mean_error", "mean_abs_error"];

/// 17 significant digits, round-trip exact.
pub fn format_float(v: f64) -> String {
    format!("{v:.16e}")
}

fn opt(v: Option<f64>) -> String {
    v.map(format_float).unwrap_or_default()
}

fn writer() -> csv::Writer<Vec<u8>> {
    WriterBuilder::new().terminator(Terminator::Any(b'\n')).from_writer(Vec::new())
}

fn finish(w: csv::Writer<Vec<u8>>) -> Result<String, HarnessError> {
    let bytes = w.into_inner().map_err(|e| HarnessError::Io { path: "<memory>".into(), source: e.into_error() })?;
    Ok(String::from_utf8(bytes).expect("csv output is built from UTF-8 strings"))
}

/// Records as CSV. A failed run has an empty estimate and `ERR: <message>`
/// in the error column.
pub fn records_to_csv(records: &[SweepRecord]) -> Result<String, HarnessError> {
    let mut w = writer();
    w.write_record(RECORD_HEADER)?;
    for r in records {
        let error = match &r.failure {
            Some(msg) => format!("ERR: {msg}"),
            None => opt(r.error),
        };
        w.write_record([
            r.family.name().to_string(),
            format_float(r.alpha),
            r.n.to_string(),
            r.seed.to_string(),
            r.method.name().to_string(),
            r.k.to_string(),
            opt(r.estimate),
            opt(r.truth),
            error,
            r.fallbacks.to_string(),
            r.sigma_floors.to_string(),
            format_float(r.wall_ms),
            r.dataset_hash.clone(),
        ])?;
    }
    finish(w)
}

/// One JSON object per line, same field names as the CSV plus `failure`.
pub fn records_to_jsonl(records: &[SweepRecord]) -> String {
    let mut out = String::new();
    for r in records {
        out.push_str(&serde_json::to_string(r).expect("records serialize"));
        out.push('\n');
    }
    out
}

pub fn summary_to_csv(rows: &[SummaryRow]) -> Result<String, HarnessError> {
    let mut w = writer();
    w.write_record(SUMMARY_HEADER)?;
    for s in rows {
        w.write_record([
            s.family.name().to_string(),
            format_float(s.alpha),
            s.n.to_string(),
            s.method.name().to_string(),
            s.k.to_string(),
            s.runs.to_string(),
            s.failures.to_string(),
            opt(s.mean),
            opt(s.sd),
            opt(s.truth),
            opt(s.mean_error),
            opt(s.mean_abs_error),
        ])?;
    }
    finish(w)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OutputPaths {
    pub records_csv: PathBuf,
    pub records_jsonl: PathBuf,
    pub summary_csv: PathBuf,
}

/// Writes `<name>.csv`, `<name>.jsonl` and `<name>_summary.csv` into `dir`.
pub fn write_outputs(dir: &Path, name: &str, records: &[SweepRecord]) -> Result<OutputPaths, HarnessError> {
    let io = |path: &Path| {
        let path = path.display().to_string();
        move |source| HarnessError::Io { path, source }
    };
    fs::create_dir_all(dir).map_err(io(dir))?;
    let paths = OutputPaths {
        records_csv: dir.join(format!("{name}.csv")),
        records_jsonl: dir.join(format!("{name}.jsonl")),
        summary_csv: dir.join(format!("{name}_summary.csv")),
    };
    fs::write(&paths.records_csv, records_to_csv(records)?).map_err(io(&paths.records_csv))?;
    fs::write(&paths.records_jsonl, records_to_jsonl(records)).map_err(io(&paths.records_jsonl))?;
    fs::write(&paths.summary_csv, summary_to_csv(&summarize(records))?).map_err(io(&paths.summary_csv))?;
    Ok(paths)
}
