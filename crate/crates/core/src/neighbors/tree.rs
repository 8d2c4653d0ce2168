use super::{NeighborError, NeighborList, Norm, PointSet};

const LEAF_SIZE: usize = 8;

#[derive(Debug, Clone)]
struct Node {
    /// Range into `order`.
    start: usize,
    end: usize,
    /// Children, or `None` for a leaf.
    children: Option<(usize, usize)>,
}

/// Static median-split kd-tree over a borrowed point set.
///
/// Queries are exact. Ties in distance are broken by ascending point index,
/// which makes every answer identical to the brute-force path.
#[derive(Debug, Clone)]
pub struct NeighborIndex<'a> {
    points: &'a PointSet,
    norm: Norm,
    nodes: Vec<Node>,
    /// Point indices, permuted so that each node owns a contiguous range.
    order: Vec<usize>,
    /// position of point i inside `order`
    position: Vec<usize>,
    /// Per node bounding boxes, `d` entries each.
    lower: Vec<f64>,
    upper: Vec<f64>,
}

impl<'a> NeighborIndex<'a> {
    pub fn build(points: &'a PointSet, norm: Norm) -> Result<Self, NeighborError> {
        if points.len() < 2 {
            return Err(NeighborError::TooFewPoints(points.len()));
        }
        let mut index = Self {
            points,
            norm,
            nodes: Vec::new(),
            order: (0..points.len()).collect(),
            position: vec![0; points.len()],
            lower: Vec::new(),
            upper: Vec::new(),
        };
        index.build_node(0, points.len());
        for (pos, &i) in index.order.iter().enumerate() {
            index.position[i] = pos;
        }
        Ok(index)
    }

    pub fn points(&self) -> &'a PointSet {
        self.points
    }

    pub fn norm(&self) -> Norm {
        self.norm
    }

    fn build_node(&mut self, start: usize, end: usize) -> usize {
        let d = self.points.dim();
        let mut lo = vec![f64::INFINITY; d];
        let mut hi = vec![f64::NEG_INFINITY; d];
        for &i in &self.order[start..end] {
            for (c, &v) in self.points.point(i).iter().enumerate() {
                lo[c] = lo[c].min(v);
                hi[c] = hi[c].max(v);
            }
        }
        let id = self.nodes.len();
        self.nodes.push(Node { start, end, children: None });

        let widest = (0..d)
            .max_by(|&a, &b| (hi[a] - lo[a]).total_cmp(&(hi[b] - lo[b])))
            .unwrap_or(0);
        let spread = hi[widest] - lo[widest];
        self.lower.extend_from_slice(&lo);
        self.upper.extend_from_slice(&hi);

        if end - start > LEAF_SIZE && spread > 0.0 {
            let mid = start + (end - start) / 2;
            let points = self.points;
            self.order[start..end].select_nth_unstable_by(mid - start, |&a, &b| {
                points.point(a)[widest]
                    .total_cmp(&points.point(b)[widest])
                    .then(a.cmp(&b))
            });
            let left = self.build_node(start, mid);
            let right = self.build_node(mid, end);
            self.nodes[id].children = Some((left, right));
        }
        id
    }

    /// Lower bound on the comparison key from `q` to anything in node `id`.
    #[inline]
    fn min_key(&self, id: usize, q: &[f64]) -> f64 {
        let d = q.len();
        let lo = &self.lower[id * d..(id + 1) * d];
        let hi = &self.upper[id * d..(id + 1) * d];
        let mut acc = 0.0;
        for c in 0..d {
            let gap = if q[c] < lo[c] {
                lo[c] - q[c]
            } else if q[c] > hi[c] {
                q[c] - hi[c]
            } else {
                0.0
            };
            acc = match self.norm {
                Norm::Euclidean => acc + gap * gap,
                Norm::Max => f64::max(acc, gap),
            };
        }
        acc
    }

    /// Upper bound on the comparison key from `q` to anything in node `id`.
    #[inline]
    fn max_key(&self, id: usize, q: &[f64]) -> f64 {
        let d = q.len();
        let lo = &self.lower[id * d..(id + 1) * d];
        let hi = &self.upper[id * d..(id + 1) * d];
        let mut acc = 0.0;
        for c in 0..d {
            let gap = f64::max((q[c] - lo[c]).abs(), (q[c] - hi[c]).abs());
            acc = match self.norm {
                Norm::Euclidean => acc + gap * gap,
                Norm::Max => f64::max(acc, gap),
            };
        }
        acc
    }

    fn check_index(&self, i: usize) -> Result<(), NeighborError> {
        if i >= self.points.len() {
            return Err(NeighborError::IndexOutOfRange { index: i, n: self.points.len() });
        }
        Ok(())
    }

    /// The k nearest neighbors of point `i`, excluding `i` itself.
    pub fn knn(&self, i: usize, k: usize) -> Result<NeighborList, NeighborError> {
        self.check_index(i)?;
        let max = self.points.len() - 1;
        if k == 0 || k > max {
            return Err(NeighborError::KOutOfRange { k, max });
        }
        let q = self.points.point(i);
        let mut best: Vec<(f64, usize)> = Vec::with_capacity(k + 1);
        self.knn_node(0, q, i, k, &mut best);
        Ok(NeighborList {
            query_index: i,
            neighbor_indices: best.iter().map(|&(_, j)| j).collect(),
            distances: best.iter().map(|&(key, _)| self.norm.key_to_distance(key)).collect(),
        })
    }

    fn knn_node(&self, id: usize, q: &[f64], query: usize, k: usize, best: &mut Vec<(f64, usize)>) {
        let node = &self.nodes[id];
        match node.children {
            None => {
                for &j in &self.order[node.start..node.end] {
                    if j == query {
                        continue;
                    }
                    let key = self.norm.key(q, self.points.point(j));
                    insert_candidate(best, k, key, j);
                }
            }
            Some((left, right)) => {
                let (kl, kr) = (self.min_key(left, q), self.min_key(right, q));
                let order = if kl <= kr { [(left, kl), (right, kr)] } else { [(right, kr), (left, kl)] };
                for (child, bound) in order {
                    // equal keys may still win on index, so only prune strictly
                    if best.len() == k && bound > best[k - 1].0 {
                        continue;
                    }
                    self.knn_node(child, q, query, k, best);
                }
            }
        }
    }

    /// Number of points j != i with distance(x_j, x_i) < radius (strict) or
    /// <= radius (non-strict).
    pub fn count_within(&self, i: usize, radius: f64, strict: bool) -> Result<usize, NeighborError> {
        self.check_index(i)?;
        if !(radius > 0.0) {
            return Err(NeighborError::InvalidRadius(radius));
        }
        let q = self.points.point(i);
        Ok(self.count_node(0, q, i, radius, strict))
    }

    fn count_node(&self, id: usize, q: &[f64], query: usize, radius: f64, strict: bool) -> usize {
        let inside = |dist: f64| if strict { dist < radius } else { dist <= radius };
        let node = &self.nodes[id];
        if !inside(self.norm.key_to_distance(self.min_key(id, q))) {
            return 0;
        }
        if inside(self.norm.key_to_distance(self.max_key(id, q))) {
            let pos = self.position[query];
            let own = usize::from(pos >= node.start && pos < node.end);
            return node.end - node.start - own;
        }
        match node.children {
            None => self.order[node.start..node.end]
                .iter()
                .filter(|&&j| j != query && inside(self.norm.distance(q, self.points.point(j))))
                .count(),
            Some((left, right)) => {
                self.count_node(left, q, query, radius, strict) + self.count_node(right, q, query, radius, strict)
            }
        }
    }
}

/// Keeps `best` sorted by (key, index) and at most `k` long.
#[inline]
pub(crate) fn insert_candidate(best: &mut Vec<(f64, usize)>, k: usize, key: f64, j: usize) {
    let less = |a: &(f64, usize)| a.0 < key || (a.0 == key && a.1 < j);
    if best.len() == k {
        let last = best[k - 1];
        if !(key < last.0 || (key == last.0 && j < last.1)) {
            return;
        }
        best.pop();
    }
    let pos = best.partition_point(less);
    best.insert(pos, (key, j));
}

#[cfg(test)]
mod tests {
    use super::super::brute;
    use super::*;

    fn lcg_points(n: usize, d: usize, seed: u64) -> PointSet {
        let mut s = seed;
        let coords = (0..n * d)
            .map(|_| {
                s = s.wrapping_mul(6_364_136_223_846_793_005).wrapping_add(1_442_695_040_888_963_407);
                (s >> 11) as f64 / (1u64 << 53) as f64
            })
            .collect();
        PointSet::new(d, coords).unwrap()
    }

    #[test]
    fn two_points_are_mutual_neighbors() {
        let pts = PointSet::from_rows(&[vec![0.0, 0.0], vec![3.0, 4.0]]).unwrap();
        let idx = NeighborIndex::build(&pts, Norm::Euclidean).unwrap();
        let a = idx.knn(0, 1).unwrap();
        let b = idx.knn(1, 1).unwrap();
        assert_eq!((a.neighbor_indices[0], a.distances[0]), (1, 5.0));
        assert_eq!((b.neighbor_indices[0], b.distances[0]), (0, 5.0));
    }

    #[test]
    fn build_rejects_single_point() {
        let pts = PointSet::from_rows(&[vec![1.0]]).unwrap();
        assert_eq!(NeighborIndex::build(&pts, Norm::Max).unwrap_err(), NeighborError::TooFewPoints(1));
    }

    #[test]
    fn collinear_hand_example() {
        let pts = PointSet::from_rows(&[vec![0.0], vec![1.0], vec![2.0], vec![4.0]]).unwrap();
        let idx = NeighborIndex::build(&pts, Norm::Euclidean).unwrap();
        let nl = idx.knn(1, 2).unwrap();
        assert_eq!(nl.neighbor_indices, vec![0, 2]);
        assert_eq!(nl.distances, vec![1.0, 1.0]);
    }

    #[test]
    fn duplicate_of_query_comes_first() {
        let pts = PointSet::from_rows(&[vec![0.5, 0.5], vec![0.0, 0.0], vec![0.5, 0.5], vec![1.0, 1.0]]).unwrap();
        let idx = NeighborIndex::build(&pts, Norm::Euclidean).unwrap();
        let nl = idx.knn(0, 1).unwrap();
        assert_eq!(nl.neighbor_indices, vec![2]);
        assert_eq!(nl.distances, vec![0.0]);
    }

    #[test]
    fn k_out_of_range() {
        let pts = lcg_points(5, 2, 1);
        let idx = NeighborIndex::build(&pts, Norm::Euclidean).unwrap();
        assert_eq!(idx.knn(0, 0).unwrap_err(), NeighborError::KOutOfRange { k: 0, max: 4 });
        assert!(idx.knn(0, 5).is_err());
        assert!(idx.knn(9, 1).is_err());
        assert!(idx.count_within(0, 0.0, true).is_err());
    }

    #[test]
    fn matches_brute_force_2d_euclidean() {
        let pts = lcg_points(200, 2, 7);
        let idx = NeighborIndex::build(&pts, Norm::Euclidean).unwrap();
        for i in 0..pts.len() {
            for k in [1, 5, 20] {
                assert_eq!(idx.knn(i, k).unwrap(), brute::knn(&pts, Norm::Euclidean, i, k).unwrap());
            }
        }
    }

    #[test]
    fn range_counts_match_brute_force_4d_max() {
        let pts = lcg_points(200, 4, 11);
        let idx = NeighborIndex::build(&pts, Norm::Max).unwrap();
        for i in 0..pts.len() {
            for r in [0.05, 0.2, 0.5] {
                for strict in [true, false] {
                    assert_eq!(
                        idx.count_within(i, r, strict).unwrap(),
                        brute::count_within(&pts, Norm::Max, i, r, strict).unwrap()
                    );
                }
            }
        }
    }

    #[test]
    fn range_count_extremes() {
        let pts = lcg_points(50, 3, 3);
        let idx = NeighborIndex::build(&pts, Norm::Euclidean).unwrap();
        let nn = idx.knn(4, 1).unwrap().distances[0];
        assert_eq!(idx.count_within(4, nn * 0.5, false).unwrap(), 0);
        assert_eq!(idx.count_within(4, 1e300, true).unwrap(), 49);
    }

    #[test]
    fn heavy_ties_are_resolved_by_index() {
        // integer grid: many equal distances
        let rows: Vec<Vec<f64>> = (0..100).map(|i| vec![(i % 10) as f64, (i / 10) as f64]).collect();
        let pts = PointSet::from_rows(&rows).unwrap();
        for norm in [Norm::Euclidean, Norm::Max] {
            let idx = NeighborIndex::build(&pts, norm).unwrap();
            for i in 0..100 {
                assert_eq!(idx.knn(i, 12).unwrap(), brute::knn(&pts, norm, i, 12).unwrap());
                for strict in [true, false] {
                    assert_eq!(
                        idx.count_within(i, 2.0, strict).unwrap(),
                        brute::count_within(&pts, norm, i, 2.0, strict).unwrap()
                    );
                }
            }
        }
    }
}
