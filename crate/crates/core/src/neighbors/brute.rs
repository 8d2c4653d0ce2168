//! O(N) per query reference implementations of the index queries.

use super::{NeighborError, NeighborList, Norm, PointSet};

pub fn knn(points: &PointSet, norm: Norm, i: usize, k: usize) -> Result<NeighborList, NeighborError> {
    let n = points.len();
    if n < 2 {
        return Err(NeighborError::TooFewPoints(n));
    }
    if i >= n {
        return Err(NeighborError::IndexOutOfRange { index: i, n });
    }
    if k == 0 || k > n - 1 {
        return Err(NeighborError::KOutOfRange { k, max: n - 1 });
    }
    let q = points.point(i);
    let mut all: Vec<(f64, usize)> = (0..n)
        .filter(|&j| j != i)
        .map(|j| (norm.key(q, points.point(j)), j))
        .collect();
    all.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    all.truncate(k);
    Ok(NeighborList {
        query_index: i,
        neighbor_indices: all.iter().map(|&(_, j)| j).collect(),
        distances: all.iter().map(|&(key, _)| norm.key_to_distance(key)).collect(),
    })
}

pub fn count_within(
    points: &PointSet,
    norm: Norm,
    i: usize,
    radius: f64,
    strict: bool,
) -> Result<usize, NeighborError> {
    let n = points.len();
    if i >= n {
        return Err(NeighborError::IndexOutOfRange { index: i, n });
    }
    if !(radius > 0.0) {
        return Err(NeighborError::InvalidRadius(radius));
    }
    let q = points.point(i);
    Ok((0..n)
        .filter(|&j| j != i)
        .filter(|&j| {
            let dist = norm.distance(q, points.point(j));
            if strict {
                dist < radius
            } else {
                dist <= radius
            }
        })
        .count())
}
