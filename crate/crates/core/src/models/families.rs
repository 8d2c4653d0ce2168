use serde::{Deserialize, Serialize};

use super::truth::family3_covariance;
use super::{Family, FamilySpec, ModelError, StreamRng};
use crate::estimators::Dataset;
use crate::mathcore::svd_thin;
use crate::neighbors::PointSet;

/// A generated dataset plus generator diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct Generated {
    pub dataset: Dataset,
    /// Hénon trajectories restarted after leaving the basin.
    pub basin_restarts: usize,
}

/// Generates the dataset for any family.
pub fn generate(spec: &FamilySpec) -> Result<Generated, ModelError> {
    let plain = |dataset| Ok(Generated { dataset, basin_restarts: 0 });
    match spec.family {
        Family::UniformRidge => plain(sample_family1(spec)?),
        Family::GaussianRidge => plain(sample_family2(spec)?),
        Family::Gaussian4d => plain(sample_family3(spec)?),
        Family::HenonCoupled => sample_family4_with(spec, &HenonParams::default()),
        Family::CorrGaussian => plain(sample_corr_gaussian(spec)?),
    }
}

fn expect_family(spec: &FamilySpec, family: Family) -> Result<(), ModelError> {
    if spec.family != family {
        return Err(ModelError::InvalidParameter {
            family,
            message: format!("spec is for {}", spec.family),
        });
    }
    spec.validate()
}

fn finish(spec: &FamilySpec, coords: Vec<f64>) -> Result<Dataset, ModelError> {
    let (d_x, d_y) = spec.family.dims();
    let points = PointSet::new(d_x + d_y, coords).map_err(crate::estimators::EstimatorError::from)?;
    Ok(Dataset::new(points, d_x)?.with_provenance(
        format!("{} alpha={:e} n={}", spec.family, spec.alpha, spec.n),
        Some(spec.seed),
    ))
}

/// Y = X + alpha V with X, V iid Unif(0, 1). Draw order per sample: X, V.
pub fn sample_family1(spec: &FamilySpec) -> Result<Dataset, ModelError> {
    expect_family(spec, Family::UniformRidge)?;
    let mut rng = spec.rng();
    let mut coords = Vec::with_capacity(2 * spec.n);
    for _ in 0..spec.n {
        let x = rng.uniform();
        let v = rng.uniform();
        coords.extend([x, x + spec.alpha * v]);
    }
    finish(spec, coords)
}

/// Y = X + alpha V with X ~ Unif(0, 1), V ~ N(0, 1).
pub fn sample_family2(spec: &FamilySpec) -> Result<Dataset, ModelError> {
    expect_family(spec, Family::GaussianRidge)?;
    let mut rng = spec.rng();
    let mut coords = Vec::with_capacity(2 * spec.n);
    for _ in 0..spec.n {
        let x = rng.uniform();
        let v = rng.standard_normal();
        coords.extend([x, x + spec.alpha * v]);
    }
    finish(spec, coords)
}

/// N(0, Sigma(alpha)) via the symmetric square root of Sigma.
pub fn sample_family3(spec: &FamilySpec) -> Result<Dataset, ModelError> {
    expect_family(spec, Family::Gaussian4d)?;
    let sigma = family3_covariance(spec.alpha)?;
    // Sigma is symmetric positive definite, so its SVD is its eigendecomposition
    let svd = svd_thin(&sigma)?;
    let mut root = [[0.0; 4]; 4];
    for (s, v) in svd.singular_values.iter().zip(&svd.right_singular_vectors) {
        let w = s.sqrt();
        for a in 0..4 {
            for b in 0..4 {
                root[a][b] += w * v[a] * v[b];
            }
        }
    }
    let mut rng = spec.rng();
    let mut coords = Vec::with_capacity(4 * spec.n);
    for _ in 0..spec.n {
        let z = [rng.standard_normal(), rng.standard_normal(), rng.standard_normal(), rng.standard_normal()];
        for row in &root {
            coords.push(row.iter().zip(&z).map(|(r, z)| r * z).sum());
        }
    }
    finish(spec, coords)
}

/// Parameters of the noisy coupled Hénon system. Only `a`, `b` and `c` come
/// from the model; the rest are simulation choices.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HenonParams {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub initial: [f64; 4],
    /// Half-width of the uniform jitter added to `initial` on each (re)start.
    pub jitter: f64,
    /// Iterations discarded before collecting samples.
    pub transient: usize,
    /// A coordinate beyond this magnitude counts as leaving the basin.
    pub escape_bound: f64,
    pub max_restarts: usize,
}

impl Default for HenonParams {
    fn default() -> Self {
        Self {
            a: 1.2,
            b: 0.3,
            c: 0.8,
            initial: [0.1, 0.1, 0.11, 0.11],
            jitter: 0.01,
            transient: 1000,
            escape_bound: 10.0,
            max_restarts: 100,
        }
    }
}

impl HenonParams {
    /// One step of the map. Noise enters the two X equations only.
    #[inline]
    pub fn step(&self, s: [f64; 4], eta1: f64, eta2: f64) -> [f64; 4] {
        let [x1, x2, y1, y2] = s;
        [
            self.a - x1 * x1 + self.b * x2 + eta1,
            x1 + eta2,
            self.a - (self.c * x1 * y1 + (1.0 - self.c) * y1 * y1) + self.b * y2,
            y1,
        ]
    }
}

/// Coupled Hénon samples (X1, X2, Y1, Y2) with default simulation settings.
pub fn sample_family4(spec: &FamilySpec) -> Result<Dataset, ModelError> {
    sample_family4_with(spec, &HenonParams::default()).map(|g| g.dataset)
}

pub fn sample_family4_with(spec: &FamilySpec, params: &HenonParams) -> Result<Generated, ModelError> {
    expect_family(spec, Family::HenonCoupled)?;
    let mut rng = spec.rng();
    let mut restarts = 0;
    'attempt: loop {
        if restarts > params.max_restarts {
            return Err(ModelError::BasinEscape { alpha: spec.alpha, restarts });
        }
        let mut state = params.initial;
        for v in state.iter_mut() {
            *v += rng.uniform_in(-params.jitter, params.jitter);
        }
        let mut coords = Vec::with_capacity(4 * spec.n);
        for t in 0..params.transient + spec.n {
            state = noisy_step(params, state, spec.alpha, &mut rng);
            if state.iter().any(|v| !(v.abs() <= params.escape_bound)) {
                restarts += 1;
                continue 'attempt;
            }
            if t >= params.transient {
                coords.extend_from_slice(&state);
            }
        }
        return Ok(Generated { dataset: finish(spec, coords)?, basin_restarts: restarts });
    }
}

fn noisy_step(params: &HenonParams, s: [f64; 4], alpha: f64, rng: &mut StreamRng) -> [f64; 4] {
    let eta1 = rng.uniform_in(-alpha, alpha);
    let eta2 = rng.uniform_in(-alpha, alpha);
    params.step(s, eta1, eta2)
}

/// Bivariate normal, unit variances, correlation 1 - alpha.
pub fn sample_corr_gaussian(spec: &FamilySpec) -> Result<Dataset, ModelError> {
    expect_family(spec, Family::CorrGaussian)?;
    let rho = 1.0 - spec.alpha;
    // sqrt(1 - rho^2) without cancellation
    let transverse = (spec.alpha * (2.0 - spec.alpha)).sqrt();
    let mut rng = spec.rng();
    let mut coords = Vec::with_capacity(2 * spec.n);
    for _ in 0..spec.n {
        let z1 = rng.standard_normal();
        let z2 = rng.standard_normal();
        coords.extend([z1, rho * z1 + transverse * z2]);
    }
    finish(spec, coords)
}
