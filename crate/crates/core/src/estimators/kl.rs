use std::time::Instant;

use super::{finite, per_point, Dataset, Diagnostics, EstimateResult, EstimatorConfig, EstimatorError, Method};
use crate::mathcore::{digamma, ln_unit_ball_volume};
use crate::neighbors::{NeighborIndex, Norm, PointSet};

/// Kozachenko-Leonenko entropy of a point set with Euclidean spheres:
/// `-psi(k) + psi(N) + ln V_d + (d/N) sum_i ln eps_i`.
pub fn kl_entropy_points(points: &PointSet, config: &EstimatorConfig) -> Result<f64, EstimatorError> {
    let n = points.len();
    let d = points.dim();
    config.validate(n, d)?;
    let index = NeighborIndex::build(points, Norm::Euclidean)?;
    let log_eps = per_point(n, config.execution, |i| {
        let eps = index.knn(i, config.k)?.kth_distance();
        if eps == 0.0 {
            return Err(EstimatorError::CoincidentPoints { index: i });
        }
        Ok(eps.ln())
    })?;
    let mut sum = 0.0;
    for v in &log_eps {
        sum += v;
    }
    let value = -digamma(config.k as f64)? + digamma(n as f64)? + ln_unit_ball_volume(d)? + d as f64 * sum / n as f64;
    finite(value)
}

/// Kozachenko-Leonenko entropy of the full (joint) variable of a dataset.
pub fn kl_entropy(data: &Dataset, config: &EstimatorConfig) -> Result<EstimateResult, EstimatorError> {
    let started = Instant::now();
    let value = kl_entropy_points(data.points(), config)?;
    Ok(EstimateResult {
        value,
        config: EstimatorConfig { method: Method::KlEntropy, ..*config },
        n: data.len(),
        d_x: data.d_x(),
        d_y: data.d_y(),
        diagnostics: Diagnostics { wall_time: started.elapsed(), ..Diagnostics::default() },
    })
}
