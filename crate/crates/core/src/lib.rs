//! Geometric k-nearest-neighbor (g-knn) estimators of differential entropy
//! and mutual information.
//!
//! Each sample point gets a local ellipsoid fitted to its k-neighborhood by a
//! singular value decomposition; the ellipsoid volumes replace the spheres of
//! classical knn estimators. The Kozachenko-Leonenko entropy estimator and the
//! Kraskov-Stögbauer-Grassberger (KSG) mutual information estimator are
//! provided as baselines, together with generators for synthetic benchmark
//! families and a sweep harness that writes CSV result tables.

pub mod mathcore;
pub mod neighbors;
pub mod estimators;
pub mod models;
pub mod harness;
