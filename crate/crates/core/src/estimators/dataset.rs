use std::ops::Range;

use serde::{Deserialize, Serialize};

use super::EstimatorError;
use crate::neighbors::PointSet;

/// Where a dataset came from.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub source: String,
    pub seed: Option<u64>,
}

/// Joint samples of (X, Y). The first `d_x` coordinates are X, the remaining
/// ones Y. `d_y` may be 0 for pure entropy estimation.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    points: PointSet,
    d_x: usize,
    pub provenance: Provenance,
}

impl Dataset {
    pub fn new(points: PointSet, d_x: usize) -> Result<Self, EstimatorError> {
        if d_x == 0 || d_x > points.dim() {
            return Err(EstimatorError::Config(format!(
                "X dimension {d_x} must lie in 1..={}",
                points.dim()
            )));
        }
        Ok(Self { points, d_x, provenance: Provenance::default() })
    }

    /// Single-variable dataset (d_Y = 0).
    pub fn entropy_only(points: PointSet) -> Self {
        let d_x = points.dim();
        Self { points, d_x, provenance: Provenance::default() }
    }

    /// Builds a dataset from arbitrary disjoint column lists of a table.
    pub fn from_columns(table: &PointSet, x_cols: &[usize], y_cols: &[usize]) -> Result<Self, EstimatorError> {
        if x_cols.is_empty() {
            return Err(EstimatorError::Config("no X columns given".into()));
        }
        if let Some(c) = x_cols.iter().find(|c| y_cols.contains(c)) {
            return Err(EstimatorError::Config(format!("column {c} is assigned to both X and Y")));
        }
        let mut all = x_cols.to_vec();
        all.extend_from_slice(y_cols);
        let mut sorted = all.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != all.len() {
            return Err(EstimatorError::Config("duplicate column in column list".into()));
        }
        let points = table.select_columns(&all)?;
        Self::new(points, x_cols.len())
    }

    pub fn with_provenance(mut self, source: impl Into<String>, seed: Option<u64>) -> Self {
        self.provenance = Provenance { source: source.into(), seed };
        self
    }

    pub fn points(&self) -> &PointSet {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn d_x(&self) -> usize {
        self.d_x
    }

    pub fn d_y(&self) -> usize {
        self.points.dim() - self.d_x
    }

    pub fn dim(&self) -> usize {
        self.points.dim()
    }

    pub fn x_columns(&self) -> Range<usize> {
        0..self.d_x
    }

    pub fn y_columns(&self) -> Range<usize> {
        self.d_x..self.points.dim()
    }

    pub fn marginal_x(&self) -> Result<PointSet, EstimatorError> {
        Ok(self.points.select_columns(&self.x_columns().collect::<Vec<_>>())?)
    }

    pub fn marginal_y(&self) -> Result<PointSet, EstimatorError> {
        if self.d_y() == 0 {
            return Err(EstimatorError::Config("dataset has no Y variable".into()));
        }
        Ok(self.points.select_columns(&self.y_columns().collect::<Vec<_>>())?)
    }

    /// Same split and provenance, with every point transformed.
    pub fn map_points<F: FnMut(&[f64]) -> Vec<f64>>(&self, f: F) -> Result<Self, EstimatorError> {
        let points = self.points.map_points(f)?;
        if points.dim() != self.points.dim() {
            return Err(EstimatorError::Config("point map changed the dimension".into()));
        }
        Ok(Self { points, d_x: self.d_x, provenance: self.provenance.clone() })
    }
}
