//! Entropy and mutual information estimators.
//!
//! * [`gknn_entropy`] / [`gknn_mi`]: geometric knn estimators built on
//!   SVD-fitted local ellipsoids centered at each sample point.
//! * [`kl_entropy`]: Kozachenko-Leonenko entropy with Euclidean spheres.
//! * [`ksg_mi`]: KSG mutual information (first variant, max-norm spheres).
//!
//! All values are in nats. Per-point work runs in parallel when the config
//! asks for it, but every reduction is a sequential sum in ascending point
//! order, so serial and parallel runs agree bit for bit.

mod dataset;
mod ellipsoid;
mod gknn;
mod kl;
mod ksg;

pub use dataset::{Dataset, Provenance};
pub use ellipsoid::{fit_local_ellipsoid, LocalEllipsoid};
pub use gknn::{gknn_entropy, gknn_entropy_points, gknn_mi, EntropyTerms};
pub use kl::{kl_entropy, kl_entropy_points};
pub use ksg::ksg_mi;

use std::fmt;
use std::str::FromStr;
use std::time::Duration;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::mathcore::MathError;
use crate::neighbors::{NeighborError, DEFAULT_BOUNDARY_TOL};

/// Default neighbor count for the g-knn estimators.
pub const DEFAULT_GKNN_K: usize = 20;
/// Default neighbor count for the KL and KSG baselines.
pub const DEFAULT_BASELINE_K: usize = 4;
/// Default floor on the singular value ratios sigma_l / sigma_1.
pub const DEFAULT_SIGMA_RATIO_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EstimatorError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("need at least k + 1 = {} samples, got {n}", k + 1)]
    InsufficientSamples { n: usize, k: usize },
    #[error("point {index} coincides with its k nearest neighbors (k-th neighbor distance is 0)")]
    CoincidentPoints { index: usize },
    #[error("degenerate neighborhood at point {index}: the fitted ellipsoid has zero extent")]
    DegenerateNeighborhood { index: usize },
    #[error("estimate is not finite: {0}")]
    NonFinite(f64),
    #[error(transparent)]
    Neighbor(#[from] NeighborError),
    #[error(transparent)]
    Math(#[from] MathError),
}

impl EstimatorError {
    /// Row index of the sample that triggered the error, when there is one.
    pub fn point_index(&self) -> Option<usize> {
        match self {
            Self::CoincidentPoints { index } | Self::DegenerateNeighborhood { index } => Some(*index),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    GknnEntropy,
    GknnMi,
    KlEntropy,
    KsgMi,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::GknnEntropy => "gknn_entropy",
            Method::GknnMi => "gknn_mi",
            Method::KlEntropy => "kl_entropy",
            Method::KsgMi => "ksg_mi",
        }
    }

    pub fn is_mutual_information(self) -> bool {
        matches!(self, Method::GknnMi | Method::KsgMi)
    }

    pub fn default_k(self) -> usize {
        match self {
            Method::GknnEntropy | Method::GknnMi => DEFAULT_GKNN_K,
            Method::KlEntropy | Method::KsgMi => DEFAULT_BASELINE_K,
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = EstimatorError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "gknn_entropy" => Ok(Method::GknnEntropy),
            "gknn_mi" => Ok(Method::GknnMi),
            "kl_entropy" | "kl" => Ok(Method::KlEntropy),
            "ksg_mi" | "ksg" => Ok(Method::KsgMi),
            other => Err(EstimatorError::Config(format!("unknown method '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Execution {
    Serial,
    #[default]
    Parallel,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EstimatorConfig {
    pub method: Method,
    pub k: usize,
    pub sigma_ratio_floor: f64,
    pub boundary_tol: f64,
    pub execution: Execution,
}

impl EstimatorConfig {
    pub fn new(method: Method, k: usize) -> Self {
        Self {
            method,
            k,
            sigma_ratio_floor: DEFAULT_SIGMA_RATIO_FLOOR,
            boundary_tol: DEFAULT_BOUNDARY_TOL,
            execution: Execution::default(),
        }
    }

    pub fn gknn_entropy(k: usize) -> Self {
        Self::new(Method::GknnEntropy, k)
    }

    pub fn gknn_mi(k: usize) -> Self {
        Self::new(Method::GknnMi, k)
    }

    pub fn kl_entropy(k: usize) -> Self {
        Self::new(Method::KlEntropy, k)
    }

    pub fn ksg_mi(k: usize) -> Self {
        Self::new(Method::KsgMi, k)
    }

    pub fn serial(mut self) -> Self {
        self.execution = Execution::Serial;
        self
    }

    pub(crate) fn validate(&self, n: usize, d: usize) -> Result<(), EstimatorError> {
        if self.k == 0 {
            return Err(EstimatorError::Config("k must be at least 1".into()));
        }
        if matches!(self.method, Method::GknnEntropy | Method::GknnMi) && self.k < d {
            return Err(EstimatorError::Config(format!(
                "g-knn needs k >= d to span the space, got k = {} for d = {d}",
                self.k
            )));
        }
        if !(self.sigma_ratio_floor >= 0.0 && self.sigma_ratio_floor <= 1.0) {
            return Err(EstimatorError::Config(format!(
                "sigma_ratio_floor must lie in [0, 1], got {}",
                self.sigma_ratio_floor
            )));
        }
        if !(self.boundary_tol >= 0.0) || !self.boundary_tol.is_finite() {
            return Err(EstimatorError::Config(format!(
                "boundary_tol must be finite and nonnegative, got {}",
                self.boundary_tol
            )));
        }
        if n < self.k + 1 {
            return Err(EstimatorError::InsufficientSamples { n, k: self.k });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Diagnostics {
    /// Number of (point, axis) pairs whose sigma ratio was raised to the floor.
    pub sigma_floor_hits: usize,
    /// Number of points whose ellipsoid held no neighbor and was clamped to 1.
    pub inlier_fallbacks: usize,
    /// The mean log sigma-ratio term of each g-knn entropy evaluated
    /// (X, Y, joint for mutual information). Never positive.
    pub correction_terms: Vec<f64>,
    #[serde(serialize_with = "serialize_ms")]
    pub wall_time: Duration,
}

fn serialize_ms<S: serde::Serializer>(d: &Duration, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_f64(d.as_secs_f64() * 1e3)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EstimateResult {
    /// Estimate in nats.
    pub value: f64,
    pub config: EstimatorConfig,
    pub n: usize,
    pub d_x: usize,
    pub d_y: usize,
    pub diagnostics: Diagnostics,
}

/// Runs a method on a dataset.
pub fn estimate(data: &Dataset, config: &EstimatorConfig) -> Result<EstimateResult, EstimatorError> {
    match config.method {
        Method::GknnEntropy => gknn_entropy(data, config),
        Method::GknnMi => gknn_mi(data, config),
        Method::KlEntropy => kl_entropy(data, config),
        Method::KsgMi => ksg_mi(data, config),
    }
}

/// Evaluates `f` for every point index, in parallel or serially, returning
/// results in index order. On failure the error of the lowest index wins.
pub(crate) fn per_point<T, F>(n: usize, execution: Execution, f: F) -> Result<Vec<T>, EstimatorError>
where
    T: Send,
    F: Fn(usize) -> Result<T, EstimatorError> + Sync + Send,
{
    let results: Vec<Result<T, EstimatorError>> = match execution {
        Execution::Serial => (0..n).map(f).collect(),
        Execution::Parallel => (0..n).into_par_iter().with_min_len(64).map(f).collect(),
    };
    results.into_iter().collect()
}

pub(crate) fn finite(value: f64) -> Result<f64, EstimatorError> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(EstimatorError::NonFinite(value))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn method_names_round_trip() {
        for m in [Method::GknnEntropy, Method::GknnMi, Method::KlEntropy, Method::KsgMi] {
            assert_eq!(m.name().parse::<Method>().unwrap(), m);
        }
        assert!("nope".parse::<Method>().is_err());
    }

    #[test]
    fn config_validation() {
        assert!(EstimatorConfig::gknn_entropy(0).validate(10, 1).is_err());
        assert!(matches!(
            EstimatorConfig::gknn_entropy(1).validate(10, 2),
            Err(EstimatorError::Config(_))
        ));
        assert_eq!(
            EstimatorConfig::kl_entropy(4).validate(4, 1),
            Err(EstimatorError::InsufficientSamples { n: 4, k: 4 })
        );
        let mut c = EstimatorConfig::gknn_entropy(2);
        c.sigma_ratio_floor = -1.0;
        assert!(c.validate(10, 2).is_err());
        assert!(EstimatorConfig::ksg_mi(1).validate(2, 5).is_ok());
    }
}
