//! Self-contained numerical kernels.
//!
//! Everything here is a pure function of its inputs: small dense matrices and
//! their singular values, the gamma-family special functions, ellipsoid
//! volumes, determinants and adaptive quadrature. Nothing in this module
//! depends on the rest of the crate.

mod linalg;
mod quadrature;
mod special;
mod svd;

pub use linalg::{determinant, SmallMatrix};
pub use quadrature::{integrate_1d, QUADRATURE_INTERVAL_BUDGET};
pub use special::{
    digamma, ellipsoid_volume, ln_unit_ball_volume, log_gamma, normal_cdf, unit_ball_volume,
    MAX_DIMENSION,
};
pub use svd::{svd_thin, SvdResult};

use thiserror::Error;

/// Errors raised by the numerical kernels.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum MathError {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("{function} is undefined at x = {x}")]
    Domain { function: &'static str, x: f64 },
    #[error("degenerate ellipsoid: radius {index} is {value}")]
    DegenerateVolume { index: usize, value: f64 },
    #[error("quadrature did not converge: partial value {partial}, error estimate {error_estimate}")]
    QuadratureFailure { partial: f64, error_estimate: f64 },
}
