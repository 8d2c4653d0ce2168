use std::f64::consts::{E, PI};

use serde::{Deserialize, Serialize};

use super::{Family, ModelError};
use crate::mathcore::{determinant, integrate_1d, normal_cdf, SmallMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TruthMethod {
    ClosedForm,
    Quadrature,
    Unknown,
}

/// Ground-truth mutual information in nats. `value` is `None` when no closed
/// form or numerical oracle exists.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GroundTruth {
    pub value: Option<f64>,
    pub method: TruthMethod,
}

impl GroundTruth {
    fn closed(value: f64) -> Self {
        Self { value: Some(value), method: TruthMethod::ClosedForm }
    }

    pub fn unknown() -> Self {
        Self { value: None, method: TruthMethod::Unknown }
    }
}

pub fn true_mi(family: Family, alpha: f64) -> Result<GroundTruth, ModelError> {
    match family {
        Family::UniformRidge => true_mi_family1(alpha),
        Family::GaussianRidge => true_mi_family2(alpha),
        Family::Gaussian4d => true_mi_family3(alpha),
        Family::HenonCoupled => {
            family.check_alpha(alpha)?;
            Ok(GroundTruth::unknown())
        }
        Family::CorrGaussian => true_mi_corr_gaussian(alpha),
    }
}

/// `-ln(alpha) + alpha/2`, for 0 < alpha <= 1.
///
/// Y has the trapezoidal density with ramps of width alpha, whose entropy is
/// alpha/2, and h(Y | X) = ln(alpha).
pub fn true_mi_family1(alpha: f64) -> Result<GroundTruth, ModelError> {
    Family::UniformRidge.check_alpha(alpha)?;
    if alpha > 1.0 {
        return Err(ModelError::OutOfValidatedRange { family: Family::UniformRidge, alpha });
    }
    Ok(GroundTruth::closed(-alpha.ln() + 0.5 * alpha))
}

const FAMILY2_TOL: f64 = 1e-8;

/// Density of Y = X + alpha V, X ~ Unif(0, 1), V ~ N(0, 1). The density is
/// symmetric about 1/2; evaluating on the left half keeps both CDF terms in
/// their accurate lower tail.
fn family2_density(y: f64, alpha: f64) -> f64 {
    let y = if y > 0.5 { 1.0 - y } else { y };
    normal_cdf(y / alpha) - normal_cdf((y - 1.0) / alpha)
}

/// Differential entropy of Y in the ridge model, by quadrature over
/// [-10 alpha, 1 + 10 alpha] split at the edges of the two transition zones.
pub fn family2_output_entropy(alpha: f64) -> Result<f64, ModelError> {
    Family::GaussianRidge.check_alpha(alpha)?;
    let w = 10.0 * alpha;
    let mut cuts = vec![-w, w.min(0.5), (1.0 - w).max(0.5), 1.0 + w];
    cuts.dedup();
    let panels = (cuts.len() - 1) as f64;
    let integrand = |y: f64| {
        let f = family2_density(y, alpha);
        if f > 0.0 {
            -f * f.ln()
        } else {
            0.0
        }
    };
    let mut h = 0.0;
    for pair in cuts.windows(2) {
        h += integrate_1d(integrand, pair[0], pair[1], FAMILY2_TOL / panels)?;
    }
    Ok(h)
}

/// `h(Y) - ln(alpha) - ln(2 pi e)/2`, with h(Y) from quadrature.
pub fn true_mi_family2(alpha: f64) -> Result<GroundTruth, ModelError> {
    let h = family2_output_entropy(alpha)?;
    Ok(GroundTruth {
        value: Some(h - alpha.ln() - 0.5 * (2.0 * PI * E).ln()),
        method: TruthMethod::Quadrature,
    })
}

/// Covariance of the 4-D Gaussian family. X is the upper-left 2x2 block.
pub fn family3_covariance(alpha: f64) -> Result<SmallMatrix, ModelError> {
    Family::Gaussian4d.check_alpha(alpha)?;
    Ok(SmallMatrix::new(
        4,
        4,
        vec![
            7.0, -5.0, -1.0, -3.0, //
            -5.0, 5.0, -1.0, 3.0, //
            -1.0, -1.0, 3.0, -1.0, //
            -3.0, 3.0, -1.0, 2.0 + alpha,
        ],
    )?)
}

/// `ln(|S_X| |S_Y| / |S|) / 2`.
pub fn true_mi_family3(alpha: f64) -> Result<GroundTruth, ModelError> {
    let sigma = family3_covariance(alpha)?;
    let block = |r: usize| -> Result<f64, ModelError> {
        let m = SmallMatrix::new(
            2,
            2,
            vec![sigma.get(r, r), sigma.get(r, r + 1), sigma.get(r + 1, r), sigma.get(r + 1, r + 1)],
        )?;
        Ok(determinant(&m)?)
    };
    let det_x = block(0)?;
    let det_y = block(2)?;
    let det = determinant(&sigma)?;
    Ok(GroundTruth::closed(0.5 * (det_x * det_y / det).ln()))
}

/// `-ln(1 - rho^2)/2` with rho = 1 - alpha.
pub fn true_mi_corr_gaussian(alpha: f64) -> Result<GroundTruth, ModelError> {
    Family::CorrGaussian.check_alpha(alpha)?;
    // 1 - rho^2 = alpha (2 - alpha), exact for tiny alpha
    Ok(GroundTruth::closed(-0.5 * (alpha * (2.0 - alpha)).ln()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn family1_values() {
        // alpha = 1: triangular Y on [0, 2], entropy 1/2
        assert!((true_mi_family1(1.0).unwrap().value.unwrap() - 0.5).abs() < 1e-15);
        assert!((true_mi_family1(0.01).unwrap().value.unwrap() - 4.6102).abs() < 1e-4);
        assert!(matches!(true_mi_family1(1.5), Err(ModelError::OutOfValidatedRange { .. })));
        assert!(true_mi_family1(0.0).is_err());
    }

    /// MI of the uniform ridge as a double integral of the joint density
    /// f(x, y) = 1/alpha over 0 <= x <= 1, x <= y <= x + alpha.
    fn family1_mi_by_2d_quadrature(alpha: f64) -> f64 {
        let f_y = |y: f64| (y.min(1.0) - (y - alpha).max(0.0)) / alpha;
        let integrand = |y: f64| (1.0 / alpha) * ((1.0 / alpha) / f_y(y)).ln();
        let inner = |x: f64| {
            let (lo, hi) = (x, x + alpha);
            let mut cuts = vec![lo];
            for c in [alpha, 1.0] {
                if c > lo && c < hi {
                    cuts.push(c);
                }
            }
            cuts.push(hi);
            cuts.windows(2).map(|w| integrate_1d(integrand, w[0], w[1], 1e-10).unwrap()).sum::<f64>()
        };
        let mut outer_cuts = vec![0.0, 1.0];
        for c in [alpha, 1.0 - alpha] {
            if c > 0.0 && c < 1.0 {
                outer_cuts.push(c);
            }
        }
        outer_cuts.sort_by(f64::total_cmp);
        outer_cuts.dedup();
        outer_cuts.windows(2).map(|w| integrate_1d(inner, w[0], w[1], 1e-8).unwrap()).sum()
    }

    #[test]
    fn family1_matches_2d_quadrature() {
        for alpha in [0.5, 0.1, 0.05] {
            let oracle = family1_mi_by_2d_quadrature(alpha);
            let truth = true_mi_family1(alpha).unwrap().value.unwrap();
            assert!((oracle - truth).abs() <= 1e-3, "alpha={alpha}: {oracle} vs {truth}");
        }
    }

    #[test]
    fn family2_output_entropy_vanishes_for_thin_ridges() {
        assert!(family2_output_entropy(1e-4).unwrap().abs() <= 1e-3);
    }

    #[test]
    fn family2_against_simpson() {
        // composite Simpson on a fine grid as an independent oracle
        for alpha in [0.3, 0.01] {
            let (a, b) = (-10.0 * alpha, 1.0 + 10.0 * alpha);
            let m = 400_000;
            let h = (b - a) / m as f64;
            let g = |y: f64| {
                let f = normal_cdf(y / alpha) - normal_cdf((y - 1.0) / alpha);
                if f > 0.0 {
                    -f * f.ln()
                } else {
                    0.0
                }
            };
            let mut s = g(a) + g(b);
            for i in 1..m {
                s += g(a + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
            }
            let oracle = s * h / 3.0;
            let got = family2_output_entropy(alpha).unwrap();
            assert!((got - oracle).abs() < 1e-7, "alpha={alpha}: {got} vs {oracle}");
        }
    }

    #[test]
    fn family2_approaches_family1_shape() {
        // thin ridge: MI ~ -ln(alpha) - ln(2 pi e)/2
        let v = true_mi_family2(0.01).unwrap();
        assert_eq!(v.method, TruthMethod::Quadrature);
        let approx = -(0.01f64).ln() - 0.5 * (2.0 * PI * E).ln();
        assert!((v.value.unwrap() - approx).abs() < 0.05);
    }

    #[test]
    fn family3_determinants_and_monotonicity() {
        let s = family3_covariance(1.0).unwrap();
        assert!((determinant(&s).unwrap() - 8.0).abs() < 1e-12);
        for (alpha, expected) in [(1.0, 1.1513), (0.1, 2.0967), (0.01, 3.2219), (0.001, 4.3705)] {
            let v = true_mi_family3(alpha).unwrap().value.unwrap();
            // |S_X| = 10, |S_Y| = 5 + 3 alpha, |S| = 8 alpha
            let closed = 0.5 * (10.0 * (5.0 + 3.0 * alpha) / (8.0 * alpha)).ln();
            assert!((v - closed).abs() < 1e-12);
            assert!((v - expected).abs() < 1e-4);
        }
        let grid: Vec<f64> = (0..20).map(|j| 10f64.powf(-0.25 * j as f64)).collect();
        let values: Vec<f64> = grid.iter().map(|&a| true_mi_family3(a).unwrap().value.unwrap()).collect();
        assert!(values.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn corr_gaussian_values() {
        assert!(true_mi_corr_gaussian(1.0).unwrap().value.unwrap().abs() < 1e-15);
        assert!((true_mi_corr_gaussian(0.1).unwrap().value.unwrap() - 0.8304).abs() < 1e-4);
        let a = 2f64.powi(-18);
        let v = true_mi_corr_gaussian(a).unwrap().value.unwrap();
        assert!((v + 0.5 * (2.0 * a).ln()).abs() < 1e-5);
        assert!(true_mi_corr_gaussian(2.0).is_err());
    }

    #[test]
    fn henon_truth_is_unknown() {
        assert_eq!(true_mi(Family::HenonCoupled, 0.01).unwrap(), GroundTruth::unknown());
    }
}
