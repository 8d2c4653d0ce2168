//! Seedable generators for the benchmark families and their ground-truth
//! mutual information.
//!
//! | family           | alias     | X   | Y   | truth       |
//! |------------------|-----------|-----|-----|-------------|
//! | `uniform_ridge`  | `family1` | 1-D | 1-D | closed form |
//! | `gaussian_ridge` | `family2` | 1-D | 1-D | quadrature  |
//! | `gaussian4d`     | `family3` | 2-D | 2-D | closed form |
//! | `henon_coupled`  | `family4` | 2-D | 2-D | unknown     |
//! | `corr_gaussian`  | `fig1`    | 1-D | 1-D | closed form |

mod families;
mod rng;
mod truth;

pub use families::{
    generate, sample_corr_gaussian, sample_family1, sample_family2, sample_family3, sample_family4,
    sample_family4_with, Generated, HenonParams,
};
pub use rng::{inverse_normal_cdf, StreamRng};
pub use truth::{
    family2_output_entropy, family3_covariance, true_mi, true_mi_corr_gaussian, true_mi_family1,
    true_mi_family2, true_mi_family3, GroundTruth, TruthMethod,
};

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::estimators::EstimatorError;
use crate::mathcore::MathError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("unknown family '{0}' (expected uniform_ridge, gaussian_ridge, gaussian4d, henon_coupled or corr_gaussian)")]
    UnknownFamily(String),
    #[error("invalid parameter for {family}: {message}")]
    InvalidParameter { family: Family, message: String },
    #[error("alpha = {alpha} is outside the range where the {family} formula is established")]
    OutOfValidatedRange { family: Family, alpha: f64 },
    #[error("trajectory left the basin {restarts} times in a row (alpha = {alpha} too large?)")]
    BasinEscape { alpha: f64, restarts: usize },
    #[error(transparent)]
    Math(#[from] MathError),
    #[error(transparent)]
    Data(#[from] EstimatorError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    /// Y = X + alpha V, X and V iid Unif(0, 1).
    UniformRidge,
    /// Y = X + alpha V, X ~ Unif(0, 1), V ~ N(0, 1).
    GaussianRidge,
    /// 4-D Gaussian whose covariance degenerates as alpha -> 0.
    Gaussian4d,
    /// Noisy coupled Hénon maps, X driving Y.
    HenonCoupled,
    /// Bivariate normal with unit variances and correlation 1 - alpha.
    CorrGaussian,
}

impl Family {
    pub const ALL: [Family; 5] = [
        Family::UniformRidge,
        Family::GaussianRidge,
        Family::Gaussian4d,
        Family::HenonCoupled,
        Family::CorrGaussian,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::UniformRidge => "uniform_ridge",
            Family::GaussianRidge => "gaussian_ridge",
            Family::Gaussian4d => "gaussian4d",
            Family::HenonCoupled => "henon_coupled",
            Family::CorrGaussian => "corr_gaussian",
        }
    }

    /// (d_X, d_Y)
    pub fn dims(self) -> (usize, usize) {
        match self {
            Family::Gaussian4d | Family::HenonCoupled => (2, 2),
            _ => (1, 1),
        }
    }

    /// Checks alpha against the family's parameter domain.
    pub fn check_alpha(self, alpha: f64) -> Result<(), ModelError> {
        let ok = match self {
            Family::HenonCoupled => alpha >= 0.0 && alpha.is_finite(),
            Family::CorrGaussian => alpha > 0.0 && alpha < 2.0,
            _ => alpha > 0.0 && alpha.is_finite(),
        };
        if ok {
            Ok(())
        } else {
            Err(ModelError::InvalidParameter {
                family: self,
                message: format!("alpha = {alpha} is outside the family's domain"),
            })
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "uniform_ridge" | "family1" => Ok(Family::UniformRidge),
            "gaussian_ridge" | "family2" => Ok(Family::GaussianRidge),
            "gaussian4d" | "family3" => Ok(Family::Gaussian4d),
            "henon_coupled" | "family4" | "henon" => Ok(Family::HenonCoupled),
            "corr_gaussian" | "fig1" => Ok(Family::CorrGaussian),
            other => Err(ModelError::UnknownFamily(other.to_string())),
        }
    }
}

/// One generator cell: family, thickness parameter, sample size and seed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FamilySpec {
    pub family: Family,
    pub alpha: f64,
    pub n: usize,
    pub seed: u64,
}

impl FamilySpec {
    pub fn new(family: Family, alpha: f64, n: usize, seed: u64) -> Self {
        Self { family, alpha, n, seed }
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        self.family.check_alpha(self.alpha)?;
        if self.n < 2 {
            return Err(ModelError::InvalidParameter {
                family: self.family,
                message: format!("n = {} must be at least 2", self.n),
            });
        }
        Ok(())
    }

    /// Stream id of this cell: the first eight bytes (little endian) of
    /// SHA-256 over the family name, alpha's IEEE bits and n, both little
    /// endian. Different cells sharing a seed draw independent streams.
    pub fn stream_id(&self) -> u64 {
        let mut h = Sha256::new();
        h.update(self.family.name().as_bytes());
        h.update(self.alpha.to_bits().to_le_bytes());
        h.update((self.n as u64).to_le_bytes());
        let digest = h.finalize();
        u64::from_le_bytes(digest[..8].try_into().expect("digest has 32 bytes"))
    }

    pub fn rng(&self) -> StreamRng {
        StreamRng::new(self.seed, self.stream_id())
    }
}
