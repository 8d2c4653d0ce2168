use std::time::Instant;

use super::{finite, per_point, Dataset, Diagnostics, EstimateResult, EstimatorConfig, EstimatorError, Method};
use crate::mathcore::digamma;
use crate::neighbors::{NeighborIndex, Norm};

/// KSG mutual information, first variant:
/// `psi(k) + psi(N) - < psi(n_x + 1) + psi(n_y + 1) >`, where n_x and n_y
/// count marginal points strictly closer than the max-norm distance to the
/// k-th joint neighbor.
pub fn ksg_mi(data: &Dataset, config: &EstimatorConfig) -> Result<EstimateResult, EstimatorError> {
    let started = Instant::now();
    if data.d_y() == 0 {
        return Err(EstimatorError::Config("mutual information needs a Y variable".into()));
    }
    let n = data.len();
    config.validate(n, data.dim())?;
    let xs = data.marginal_x()?;
    let ys = data.marginal_y()?;
    let joint = NeighborIndex::build(data.points(), Norm::Max)?;
    let x_index = NeighborIndex::build(&xs, Norm::Max)?;
    let y_index = NeighborIndex::build(&ys, Norm::Max)?;

    let terms = per_point(n, config.execution, |i| {
        let eps = joint.knn(i, config.k)?.kth_distance();
        if eps == 0.0 {
            return Err(EstimatorError::CoincidentPoints { index: i });
        }
        let nx = x_index.count_within(i, eps, true)?;
        let ny = y_index.count_within(i, eps, true)?;
        Ok(digamma(nx as f64 + 1.0)? + digamma(ny as f64 + 1.0)?)
    })?;
    let mut sum = 0.0;
    for t in &terms {
        sum += t;
    }
    let value = digamma(config.k as f64)? + digamma(n as f64)? - sum / n as f64;
    Ok(EstimateResult {
        value: finite(value)?,
        config: EstimatorConfig { method: Method::KsgMi, ..*config },
        n,
        d_x: data.d_x(),
        d_y: data.d_y(),
        diagnostics: Diagnostics { wall_time: started.elapsed(), ..Diagnostics::default() },
    })
}
