//! Sharp first-eigenvalue machinery for the weighted p-Laplacian in one
//! dimension.
//!
//! A compact Bakry–Émery manifold `(M, g, f)` with `Ric + ∇²f ≥ κ g` and
//! diameter `D` has its first nonzero Neumann eigenvalue of the weighted
//! p-Laplacian bounded below by `μ_p(κ, D)`, the first nonzero Neumann
//! eigenvalue of the one-dimensional model problem
//!
//! ```text
//! (p-1)|φ'|^{p-2} φ'' - κ t |φ'|^{p-2} φ' = -μ |φ|^{p-2} φ   on [-D/2, D/2],
//! ```
//!
//! valid whenever `1 < p ≤ 2` or `κ ≤ 0`. This crate computes that model
//! value and everything around it:
//!
//! - [`ptrig`] — p-trigonometric special functions (`sin_p`, `cos_p`,
//!   `arctan_p`, the half-period `π_p`) with exact-identity contracts;
//! - [`ode`] — an adaptive Dormand–Prince 5(4) integrator with dense output
//!   and event detection;
//! - [`prufer`] — the model equation in generalized Prüfer coordinates:
//!   trajectories, the interval geometry `b(a)`, `m(a)`, `δ(a)`, the odd
//!   solution's abscissa `ā`, and monotone profile inversion;
//! - [`eigensolve`] — `μ_p(κ, D)` by shooting in `λ` on the half interval;
//! - [`bounds`] — theorem-level bound evaluators with regime guards
//!   (sharp model bound, Lichnerowicz-type bound for `p ≥ 2, κ > 0`, and the
//!   Wang–Li comparison value);
//! - [`verify`] — an independent discrete verification harness: certified 1D
//!   weighted segments, Rayleigh-quotient minimization of the discrete
//!   eigenvalue, and bound / sharpness / gradient-comparison checks;
//! - [`cli`] — the command-line front end behind the `wplap` binary.
//!
//! The `examples/` directory has one runnable example per capability; start
//! with `cargo run --example shoot_mu`.

pub mod bounds;
pub mod cli;
pub mod eigensolve;
pub mod ode;
pub mod prufer;
pub mod ptrig;
pub mod roots;
pub mod verify;

pub use ptrig::{odd_power, PExponent};
