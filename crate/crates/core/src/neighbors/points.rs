use super::NeighborError;

/// N points in R^d, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct PointSet {
    n: usize,
    d: usize,
    coords: Vec<f64>,
}

impl PointSet {
    pub fn new(d: usize, coords: Vec<f64>) -> Result<Self, NeighborError> {
        if d == 0 {
            return Err(NeighborError::InvalidPoints("dimension must be at least 1".into()));
        }
        if coords.len() % d != 0 {
            return Err(NeighborError::InvalidPoints(format!(
                "{} coordinates do not divide into rows of {d}",
                coords.len()
            )));
        }
        if let Some(pos) = coords.iter().position(|v| !v.is_finite()) {
            return Err(NeighborError::InvalidPoints(format!(
                "coordinate {} of point {} is not finite",
                pos % d,
                pos / d
            )));
        }
        Ok(Self { n: coords.len() / d, d, coords })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self, NeighborError> {
        let d = rows.first().map_or(0, Vec::len);
        if let Some(i) = rows.iter().position(|r| r.len() != d) {
            return Err(NeighborError::InvalidPoints(format!(
                "point {i} has {} coordinates, expected {d}",
                rows[i].len()
            )));
        }
        Self::new(d, rows.iter().flatten().copied().collect())
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    #[inline]
    pub fn point(&self, i: usize) -> &[f64] {
        &self.coords[i * self.d..(i + 1) * self.d]
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn iter(&self) -> impl Iterator<Item = &[f64]> {
        self.coords.chunks_exact(self.d)
    }

    /// New point set made of the given columns, in the given order.
    pub fn select_columns(&self, columns: &[usize]) -> Result<Self, NeighborError> {
        if let Some(&c) = columns.iter().find(|&&c| c >= self.d) {
            return Err(NeighborError::InvalidPoints(format!(
                "column {c} out of range for dimension {}",
                self.d
            )));
        }
        let coords = self
            .iter()
            .flat_map(|p| columns.iter().map(move |&c| p[c]))
            .collect();
        Self::new(columns.len(), coords)
    }

    /// Applies `f` to every point, producing a point set of the same shape.
    pub fn map_points<F: FnMut(&[f64]) -> Vec<f64>>(&self, mut f: F) -> Result<Self, NeighborError> {
        let rows: Vec<Vec<f64>> = self.iter().map(|p| f(p)).collect();
        Self::from_rows(&rows)
    }

    pub fn scaled(&self, s: f64) -> Result<Self, NeighborError> {
        Self::new(self.d, self.coords.iter().map(|v| v * s).collect())
    }
}
