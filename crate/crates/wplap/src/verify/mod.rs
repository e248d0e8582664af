//! Independent discrete verification harness.
//!
//! Everything here is deliberately disjoint from the shooting machinery: a
//! one-dimensional Bakry–Émery manifold is discretized as a weighted segment
//! (grid, potential samples, certified `f'' ≥ κ`), the first nonzero
//! eigenvalue is obtained by direct minimization of the weighted p-Rayleigh
//! quotient
//!
//! ```text
//! λ_{p,f} = inf  ∫ |u'|^p e^{-f} / ∫ |u|^p e^{-f}   over  ∫ |u|^{p-2} u e^{-f} = 0,
//! ```
//!
//! and the theorem-level claims (`λ_h ≥ μ_p(κ, D)`, sharpness of the model
//! weight, the gradient comparison `|u'| ≤ φ'(Ψ(u))`, and the
//! Lichnerowicz-type bound for `κ > 0`) are checked numerically with
//! mesh-calibrated tolerances. A tridiagonal Sturm-sequence eigensolver
//! provides the exactly-solvable `p = 2` route used both as a cross-check of
//! the minimizer and to calibrate the mesh tolerance `ε_h`.

mod campaign;
mod checks;
mod rayleigh;
mod segment;
mod sturm;

pub use campaign::{
    run_campaign, write_csv_summary, write_jsonl, CampaignOutcome, CampaignRecord, CampaignSpec,
    PerturbationSpec,
};
pub use checks::{
    calibrate_gradient_tolerance, check_gradient_comparison, check_lichnerowicz,
    check_lower_bound, epsilon_h, gradient_model, margin_report, GradientReport,
    LichnerowiczReport, MarginReport,
};
pub use rayleigh::{
    discrete_first_eigenvalue, discrete_first_eigenvalue_with, restart_eigenvalues,
    DiscreteEigenResult, RayleighOptions,
};
pub use segment::{make_segment, Bump, BumpSpec, Topology, WeightedSegment};
pub use sturm::{tridiag_eigenvalue, weighted_neumann_eigenvalue_p2};

use thiserror::Error;

use crate::eigensolve::EigenError;
use crate::prufer::ModelError;

/// Errors from segment construction, the discrete solver, and the checks.
#[derive(Debug, Error)]
pub enum VerifyError {
    #[error(transparent)]
    Eigen(#[from] EigenError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(
        "Bakry-Émery certificate violated at node {index}: second difference {second_diff:.6e} < required {required:.6e}"
    )]
    CertificateViolation { index: usize, second_diff: f64, required: f64 },
    #[error("grid too small: {0} cells (need at least 32)")]
    GridTooSmall(usize),
    #[error("invalid segment: {0}")]
    InvalidSegment(String),
    #[error(
        "minimizer did not converge after {iterations} iterations (best λ_h = {lambda:.9e}, residual {residual:.3e})"
    )]
    NoConvergence { lambda: f64, residual: f64, iterations: usize },
    #[error(
        "eigenfunction range [{u_min:.6}, {u_max:.6}] not contained in model range [{model_lo:.6}, {model_hi:.6}]; re-select [a, b(a)] via geometry_scan (m(a) sweeps (0, 1])"
    )]
    RangeNotContained { u_min: f64, u_max: f64, model_lo: f64, model_hi: f64 },
    #[error("regime violation: {0}")]
    RegimeViolation(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("serialization error: {0}")]
    Json(#[from] serde_json::Error),
}
