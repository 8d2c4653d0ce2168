//! Declarative sweeps over a family parameter or the sample size, with
//! several estimators evaluated on one shared dataset per (cell, seed).

pub mod io;
mod output;
mod preset;

pub use output::{
    format_float, records_to_csv, records_to_jsonl, summary_to_csv, write_outputs, OutputPaths, RECORD_HEADER,
    SUMMARY_HEADER,
};
pub use preset::{parse_seeds, preset, preset_names, PRESETS};

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::estimators::{estimate, Dataset, EstimatorConfig, Method};
use crate::models::{generate, true_mi, Family, FamilySpec, ModelError};

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("invalid sweep spec: {0}")]
    InvalidSpec(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("unknown preset '{name}' (available: {available})")]
    UnknownPreset { name: String, available: String },
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    Alpha,
    N,
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Axis::Alpha => "alpha",
            Axis::N => "n",
        })
    }
}

impl FromStr for Axis {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "alpha" => Ok(Axis::Alpha),
            "n" => Ok(Axis::N),
            other => Err(HarnessError::InvalidSpec(format!("axis must be alpha or n, got '{other}'"))),
        }
    }
}

/// A sweep: one family, one varying axis, fixed value of the other
/// parameter, a seed list and a list of estimators.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepSpec {
    pub name: String,
    pub family: Family,
    pub axis: Axis,
    /// Values of the varying parameter, in output order.
    pub grid: Vec<f64>,
    /// Fixed alpha when sweeping n.
    pub alpha: Option<f64>,
    /// Fixed n when sweeping alpha.
    pub n: Option<usize>,
    pub seeds: Vec<u64>,
    pub estimators: Vec<EstimatorConfig>,
    /// Record wall-clock times. Off by default so that reruns are
    /// byte-identical; when off `wall_ms` is written as 0.
    pub timing: bool,
}

impl SweepSpec {
    /// Cells in grid order, seed left at 0.
    pub fn cells(&self) -> Result<Vec<FamilySpec>, HarnessError> {
        self.grid
            .iter()
            .map(|&v| match self.axis {
                Axis::Alpha => {
                    let n = self.n.ok_or_else(|| HarnessError::InvalidSpec("alpha sweep needs n".into()))?;
                    Ok(FamilySpec::new(self.family, v, n, 0))
                }
                Axis::N => {
                    let alpha =
                        self.alpha.ok_or_else(|| HarnessError::InvalidSpec("n sweep needs alpha".into()))?;
                    if !(v >= 1.0 && v.fract() == 0.0 && v <= usize::MAX as f64) {
                        return Err(HarnessError::InvalidSpec(format!("sample size {v} is not a positive integer")));
                    }
                    Ok(FamilySpec::new(self.family, alpha, v as usize, 0))
                }
            })
            .collect()
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        if self.grid.is_empty() {
            return Err(HarnessError::InvalidSpec("grid is empty".into()));
        }
        if self.seeds.is_empty() {
            return Err(HarnessError::InvalidSpec("no seeds".into()));
        }
        if self.estimators.is_empty() {
            return Err(HarnessError::InvalidSpec("no estimators".into()));
        }
        if let Some(e) = self.estimators.iter().find(|e| !e.method.is_mutual_information()) {
            return Err(HarnessError::InvalidSpec(format!("{} is not a mutual information estimator", e.method)));
        }
        for cell in self.cells()? {
            cell.validate()?;
        }
        Ok(())
    }

    pub fn with_seeds(mut self, seeds: Vec<u64>) -> Self {
        self.seeds = seeds;
        self
    }

    /// Replaces the fixed sample size of an alpha sweep, or the grid of an
    /// n sweep with the single value.
    pub fn with_n(mut self, n: usize) -> Self {
        match self.axis {
            Axis::Alpha => self.n = Some(n),
            Axis::N => self.grid = vec![n as f64],
        }
        self
    }
}

/// One (cell, seed, estimator) result.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRecord {
    pub family: Family,
    pub alpha: f64,
    pub n: usize,
    pub seed: u64,
    pub method: Method,
    pub k: usize,
    /// Nats; `None` when this run failed.
    pub estimate: Option<f64>,
    pub truth: Option<f64>,
    /// estimate - truth
    pub error: Option<f64>,
    pub fallbacks: usize,
    pub sigma_floors: usize,
    pub wall_ms: f64,
    /// Hex prefix of SHA-256 over the dataset; equal within a (cell, seed).
    pub dataset_hash: String,
    /// Generation or estimation failure message.
    pub failure: Option<String>,
}

impl SweepRecord {
    pub fn failed(&self) -> bool {
        self.failure.is_some()
    }
}

/// Hex of the first 8 bytes of SHA-256 over (n, d, d_x, coordinates), all
/// little endian.
pub fn dataset_hash(data: &Dataset) -> String {
    let mut h = Sha256::new();
    h.update((data.len() as u64).to_le_bytes());
    h.update((data.dim() as u64).to_le_bytes());
    h.update((data.d_x() as u64).to_le_bytes());
    for v in data.points().coords() {
        h.update(v.to_bits().to_le_bytes());
    }
    h.finalize()[..8].iter().map(|b| format!("{b:02x}")).collect()
}

/// Runs every (cell, seed) work item and returns records cell-major, then
/// seed, then estimator. Failures become records with `failure` set.
pub fn run_sweep(spec: &SweepSpec) -> Result<Vec<SweepRecord>, HarnessError> {
    spec.validate()?;
    let cells = spec.cells()?;
    let items: Vec<FamilySpec> =
        cells.iter().flat_map(|c| spec.seeds.iter().map(move |&seed| FamilySpec { seed, ..*c })).collect();
    let chunks: Vec<Vec<SweepRecord>> = items.par_iter().map(|item| run_item(spec, item)).collect();
    Ok(chunks.into_iter().flatten().collect())
}

fn run_item(spec: &SweepSpec, item: &FamilySpec) -> Vec<SweepRecord> {
    let truth = true_mi(item.family, item.alpha).ok().and_then(|t| t.value);
    let blank = |config: &EstimatorConfig| SweepRecord {
        family: item.family,
        alpha: item.alpha,
        n: item.n,
        seed: item.seed,
        method: config.method,
        k: config.k,
        estimate: None,
        truth,
        error: None,
        fallbacks: 0,
        sigma_floors: 0,
        wall_ms: 0.0,
        dataset_hash: String::new(),
        failure: None,
    };
    let data = match generate(item) {
        Ok(g) => g.dataset,
        Err(e) => {
            let msg = format!("generation failed: {e}");
            return spec.estimators.iter().map(|c| SweepRecord { failure: Some(msg.clone()), ..blank(c) }).collect();
        }
    };
    let hash = dataset_hash(&data);
    spec.estimators
        .iter()
        .map(|config| {
            let started = Instant::now();
            let outcome = estimate(&data, config);
            let wall_ms = if spec.timing { started.elapsed().as_secs_f64() * 1e3 } else { 0.0 };
            let base = SweepRecord { dataset_hash: hash.clone(), wall_ms, ..blank(config) };
            match outcome {
                Ok(r) => SweepRecord {
                    estimate: Some(r.value),
                    error: truth.map(|t| r.value - t),
                    fallbacks: r.diagnostics.inlier_fallbacks,
                    sigma_floors: r.diagnostics.sigma_floor_hits,
                    ..base
                },
                Err(e) => SweepRecord { failure: Some(format!("estimation failed: {e}")), ..base },
            }
        })
        .collect()
}

/// Aggregate over seeds for one (cell, estimator).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SummaryRow {
    pub family: Family,
    pub alpha: f64,
    pub n: usize,
    pub method: Method,
    pub k: usize,
    /// Successful runs.
    pub runs: usize,
    pub failures: usize,
    pub mean: Option<f64>,
    /// Sample standard deviation; 0 for a single run.
    pub sd: Option<f64>,
    pub truth: Option<f64>,
    pub mean_error: Option<f64>,
    pub mean_abs_error: Option<f64>,
}

/// Groups records by (family, alpha, n, method, k) in first-seen order.
pub fn summarize(records: &[SweepRecord]) -> Vec<SummaryRow> {
    let mut groups: Vec<(SummaryKey, Vec<&SweepRecord>)> = Vec::new();
    for r in records {
        let key = SummaryKey::of(r);
        match groups.iter_mut().find(|(k, _)| *k == key) {
            Some((_, members)) => members.push(r),
            None => groups.push((key, vec![r])),
        }
    }
    groups
        .into_iter()
        .map(|(_, members)| {
            let first = members[0];
            let values: Vec<f64> = members.iter().filter_map(|r| r.estimate).collect();
            let errors: Vec<f64> = members.iter().filter_map(|r| r.error).collect();
            let mean_of = |v: &[f64]| (!v.is_empty()).then(|| v.iter().sum::<f64>() / v.len() as f64);
            let mean = mean_of(&values);
            let sd = mean.map(|m| {
                if values.len() < 2 {
                    0.0
                } else {
                    (values.iter().map(|v| (v - m).powi(2)).sum::<f64>() / (values.len() - 1) as f64).sqrt()
                }
            });
            let abs: Vec<f64> = errors.iter().map(|e| e.abs()).collect();
            SummaryRow {
                family: first.family,
                alpha: first.alpha,
                n: first.n,
                method: first.method,
                k: first.k,
                runs: values.len(),
                failures: members.len() - values.len(),
                mean,
                sd,
                truth: first.truth,
                mean_error: mean_of(&errors),
                mean_abs_error: mean_of(&abs),
            }
        })
        .collect()
}

#[derive(PartialEq)]
struct SummaryKey {
    family: Family,
    alpha: u64,
    n: usize,
    method: Method,
    k: usize,
}

impl SummaryKey {
    fn of(r: &SweepRecord) -> Self {
        Self { family: r.family, alpha: r.alpha.to_bits(), n: r.n, method: r.method, k: r.k }
    }
}
