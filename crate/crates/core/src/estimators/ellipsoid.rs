use super::EstimatorError;
use crate::mathcore::{svd_thin, SmallMatrix};
use crate::neighbors::{count_in_ellipsoid, NeighborIndex, NeighborList, Norm, PointSet};

/// Volume element fitted to the k-neighborhood of one sample point.
///
/// The axes come from the SVD of the neighborhood centered at its centroid,
/// but the ellipsoid itself is centered at the sample point, with its major
/// radius equal to the distance to the k-th neighbor.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalEllipsoid {
    pub center_index: usize,
    /// Euclidean distance to the k-th nearest neighbor.
    pub epsilon_k: f64,
    /// Raw singular values of the centered neighborhood, nonincreasing.
    pub singular_values: Vec<f64>,
    pub axes: Vec<Vec<f64>>,
    /// sigma_l / sigma_1 after flooring; the first entry is exactly 1.
    pub sigma_ratios: Vec<f64>,
    /// epsilon_k * sigma_ratios[l].
    pub radii: Vec<f64>,
    /// Neighbors (excluding the center) inside the ellipsoid, at least 1.
    pub inlier_count: usize,
    /// Set when no neighbor fell inside and the count was clamped to 1.
    pub fallback_applied: bool,
    /// How many sigma ratios were raised to the floor.
    pub floored_axes: usize,
}

impl LocalEllipsoid {
    /// Sum over axes of ln(sigma_l / sigma_1), with floored ratios. At most 0.
    pub fn log_ratio_sum(&self) -> f64 {
        self.sigma_ratios.iter().map(|r| r.ln()).sum()
    }
}

/// Fits the local ellipsoid of point `i` from its k Euclidean nearest
/// neighbors.
pub fn fit_local_ellipsoid(
    index: &NeighborIndex<'_>,
    i: usize,
    k: usize,
    floor: f64,
    boundary_tol: f64,
) -> Result<LocalEllipsoid, EstimatorError> {
    if index.norm() != Norm::Euclidean {
        return Err(EstimatorError::Config("local ellipsoids need a Euclidean index".into()));
    }
    let points = index.points();
    let d = points.dim();
    if k < d {
        return Err(EstimatorError::Config(format!("k = {k} is smaller than the dimension {d}")));
    }
    if points.len() < k + 1 {
        return Err(EstimatorError::InsufficientSamples { n: points.len(), k });
    }
    let neighbors = index.knn(i, k)?;
    fit_from_neighbors(points, &neighbors, floor, boundary_tol)
}

pub(crate) fn fit_from_neighbors(
    points: &PointSet,
    neighbors: &NeighborList,
    floor: f64,
    boundary_tol: f64,
) -> Result<LocalEllipsoid, EstimatorError> {
    let i = neighbors.query_index;
    let d = points.dim();
    let epsilon_k = neighbors.kth_distance();
    let degenerate = EstimatorError::DegenerateNeighborhood { index: i };
    if epsilon_k == 0.0 {
        return Err(degenerate);
    }

    let members: Vec<&[f64]> = std::iter::once(points.point(i))
        .chain(neighbors.neighbor_indices.iter().map(|&j| points.point(j)))
        .collect();
    let count = members.len() as f64;
    let mut centroid = vec![0.0; d];
    for p in &members {
        for (c, v) in centroid.iter_mut().zip(*p) {
            *c += v;
        }
    }
    centroid.iter_mut().for_each(|c| *c /= count);

    let centered: Vec<f64> = members
        .iter()
        .flat_map(|p| p.iter().zip(&centroid).map(|(v, c)| v - c))
        .collect();
    let y = SmallMatrix::new(members.len(), d, centered)?;
    let svd = svd_thin(&y)?;
    let sigma_1 = svd.singular_values[0];
    if sigma_1 == 0.0 {
        return Err(degenerate);
    }

    let mut floored_axes = 0;
    let sigma_ratios: Vec<f64> = svd
        .singular_values
        .iter()
        .map(|&s| {
            if s < floor * sigma_1 {
                floored_axes += 1;
                floor
            } else {
                s / sigma_1
            }
        })
        .collect();
    if sigma_ratios.iter().any(|&r| r <= 0.0) {
        // only reachable with a zero floor
        return Err(degenerate);
    }
    let radii: Vec<f64> = sigma_ratios.iter().map(|r| epsilon_k * r).collect();

    let inside = count_in_ellipsoid(
        points,
        &neighbors.neighbor_indices,
        points.point(i),
        &svd.right_singular_vectors,
        &radii,
        boundary_tol,
    );
    let fallback_applied = inside == 0;

    Ok(LocalEllipsoid {
        center_index: i,
        epsilon_k,
        singular_values: svd.singular_values,
        axes: svd.right_singular_vectors,
        sigma_ratios,
        radii,
        inlier_count: inside.max(1),
        fallback_applied,
        floored_axes,
    })
}
