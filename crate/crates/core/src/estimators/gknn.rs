use std::time::Instant;

use super::ellipsoid::fit_from_neighbors;
use super::{
    finite, per_point, Dataset, Diagnostics, EstimateResult, EstimatorConfig, EstimatorError, Method,
};
use crate::mathcore::ln_unit_ball_volume;
use crate::neighbors::{NeighborIndex, Norm, PointSet};

/// The pieces of one g-knn entropy evaluation.
///
/// `value = ln N + ln V_d - mean_log_inliers + d * mean_log_epsilon + correction`
#[derive(Debug, Clone, PartialEq)]
pub struct EntropyTerms {
    pub value: f64,
    pub n: usize,
    pub d: usize,
    pub mean_log_inliers: f64,
    pub mean_log_epsilon: f64,
    /// Mean over points of sum_l ln(sigma_l / sigma_1). Never positive.
    pub correction: f64,
    pub sigma_floor_hits: usize,
    pub inlier_fallbacks: usize,
}

struct PointTerm {
    log_inliers: f64,
    log_epsilon: f64,
    log_ratios: f64,
    floored: usize,
    fallback: bool,
}

/// g-knn entropy of a bare point set.
pub fn gknn_entropy_points(points: &PointSet, config: &EstimatorConfig) -> Result<EntropyTerms, EstimatorError> {
    let n = points.len();
    let d = points.dim();
    config.validate(n, d)?;
    let index = NeighborIndex::build(points, Norm::Euclidean)?;
    let k = config.k;

    let terms = per_point(n, config.execution, |i| {
        let neighbors = index.knn(i, k)?;
        if neighbors.kth_distance() == 0.0 {
            return Err(EstimatorError::CoincidentPoints { index: i });
        }
        let e = fit_from_neighbors(points, &neighbors, config.sigma_ratio_floor, config.boundary_tol)?;
        Ok(PointTerm {
            log_inliers: (e.inlier_count as f64).ln(),
            log_epsilon: e.epsilon_k.ln(),
            log_ratios: e.log_ratio_sum(),
            floored: e.floored_axes,
            fallback: e.fallback_applied,
        })
    })?;

    // fixed ascending-index reduction
    let mut sum_inliers = 0.0;
    let mut sum_epsilon = 0.0;
    let mut sum_ratios = 0.0;
    let mut sigma_floor_hits = 0;
    let mut inlier_fallbacks = 0;
    for t in &terms {
        sum_inliers += t.log_inliers;
        sum_epsilon += t.log_epsilon;
        sum_ratios += t.log_ratios;
        sigma_floor_hits += t.floored;
        inlier_fallbacks += usize::from(t.fallback);
    }
    let nf = n as f64;
    let mean_log_inliers = sum_inliers / nf;
    let mean_log_epsilon = sum_epsilon / nf;
    let correction = sum_ratios / nf;
    debug_assert!(correction <= 0.0, "log sigma-ratio term must not be positive");

    let value = nf.ln() + ln_unit_ball_volume(d)? - mean_log_inliers + d as f64 * mean_log_epsilon + correction;
    Ok(EntropyTerms {
        value: finite(value)?,
        n,
        d,
        mean_log_inliers,
        mean_log_epsilon,
        correction,
        sigma_floor_hits,
        inlier_fallbacks,
    })
}

/// g-knn entropy of the full (joint) variable of a dataset.
pub fn gknn_entropy(data: &Dataset, config: &EstimatorConfig) -> Result<EstimateResult, EstimatorError> {
    let started = Instant::now();
    let terms = gknn_entropy_points(data.points(), config)?;
    Ok(EstimateResult {
        value: terms.value,
        config: EstimatorConfig { method: Method::GknnEntropy, ..*config },
        n: data.len(),
        d_x: data.d_x(),
        d_y: data.d_y(),
        diagnostics: Diagnostics {
            sigma_floor_hits: terms.sigma_floor_hits,
            inlier_fallbacks: terms.inlier_fallbacks,
            correction_terms: vec![terms.correction],
            wall_time: started.elapsed(),
        },
    })
}

/// g-knn mutual information, H(X) + H(Y) - H(X, Y), with the same k in every
/// term.
pub fn gknn_mi(data: &Dataset, config: &EstimatorConfig) -> Result<EstimateResult, EstimatorError> {
    let started = Instant::now();
    if data.d_y() == 0 {
        return Err(EstimatorError::Config("mutual information needs a Y variable".into()));
    }
    config.validate(data.len(), data.dim())?;
    let hx = gknn_entropy_points(&data.marginal_x()?, config)?;
    let hy = gknn_entropy_points(&data.marginal_y()?, config)?;
    let hxy = gknn_entropy_points(data.points(), config)?;
    let value = finite(hx.value + hy.value - hxy.value)?;
    Ok(EstimateResult {
        value,
        config: EstimatorConfig { method: Method::GknnMi, ..*config },
        n: data.len(),
        d_x: data.d_x(),
        d_y: data.d_y(),
        diagnostics: Diagnostics {
            sigma_floor_hits: hx.sigma_floor_hits + hy.sigma_floor_hits + hxy.sigma_floor_hits,
            inlier_fallbacks: hx.inlier_fallbacks + hy.inlier_fallbacks + hxy.inlier_fallbacks,
            correction_terms: vec![hx.correction, hy.correction, hxy.correction],
            wall_time: started.elapsed(),
        },
    })
}
