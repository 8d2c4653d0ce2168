//! Exact nearest-neighbor search and range counting.
//!
//! [`NeighborIndex`] is a static median-split kd-tree. Every query has a
//! brute-force twin in [`brute`] that computes distances with the same
//! arithmetic, so the two paths agree bit for bit and the brute-force path
//! can act as an oracle.

pub mod brute;
mod points;
mod tree;

pub use points::PointSet;
pub use tree::NeighborIndex;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Default tolerance on the normalized ellipsoid coordinate.
pub const DEFAULT_BOUNDARY_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NeighborError {
    #[error("invalid point set: {0}")]
    InvalidPoints(String),
    #[error("neighbor queries need at least 2 points, got {0}")]
    TooFewPoints(usize),
    #[error("k = {k} is outside 1..={max}")]
    KOutOfRange { k: usize, max: usize },
    #[error("point index {index} out of range for {n} points")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("radius must be positive, got {0}")]
    InvalidRadius(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Norm {
    Euclidean,
    Max,
}

impl Norm {
    /// Comparison key between two points: squared distance for the Euclidean
    /// norm, the distance itself for the max norm. Monotone in the distance.
    #[inline]
    pub(crate) fn key(self, a: &[f64], b: &[f64]) -> f64 {
        match self {
            Norm::Euclidean => a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum(),
            Norm::Max => a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max),
        }
    }

    #[inline]
    pub(crate) fn key_to_distance(self, key: f64) -> f64 {
        match self {
            Norm::Euclidean => key.sqrt(),
            Norm::Max => key,
        }
    }

    /// Distance between two points under this norm.
    pub fn distance(self, a: &[f64], b: &[f64]) -> f64 {
        self.key_to_distance(self.key(a, b))
    }
}

/// The k nearest neighbors of one point, nearest first.
#[derive(Debug, Clone, PartialEq)]
pub struct NeighborList {
    pub query_index: usize,
    pub neighbor_indices: Vec<usize>,
    /// Nondecreasing; the last entry is the distance to the k-th neighbor.
    pub distances: Vec<f64>,
}

impl NeighborList {
    /// Distance to the k-th (farthest returned) neighbor.
    pub fn kth_distance(&self) -> f64 {
        *self.distances.last().expect("neighbor lists are never empty")
    }
}

/// Counts candidates inside the ellipsoid
/// `sum_l (<x_j - center, axis_l> / radius_l)^2 <= 1 + boundary_tol`.
///
/// `axes` must be orthonormal and `radii` positive; the candidate list should
/// not contain the center's own index.
pub fn count_in_ellipsoid(
    points: &PointSet,
    candidate_indices: &[usize],
    center: &[f64],
    axes: &[Vec<f64>],
    radii: &[f64],
    boundary_tol: f64,
) -> usize {
    let limit = 1.0 + boundary_tol;
    candidate_indices
        .iter()
        .filter(|&&j| {
            let p = points.point(j);
            let mut q = 0.0;
            for (axis, r) in axes.iter().zip(radii) {
                let proj: f64 = p.iter().zip(center).zip(axis).map(|((x, c), a)| (x - c) * a).sum();
                let t = proj / r;
                q += t * t;
            }
            q <= limit
        })
        .count()
}
