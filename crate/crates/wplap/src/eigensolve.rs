//! The model eigenvalue `μ_p(κ, D)` by shooting in `λ`.
//!
//! The governing formulation is the half-interval problem: `μ_p(κ, D)` is the
//! smallest `λ` whose solution with `φ(0) = 0`, `φ' > 0` satisfies the Neumann
//! condition `φ'(D/2) = 0`. In Prüfer variables that reads: the phase started
//! at `θ(0) = 0` first reaches `π_p/2` exactly at `t = D/2`. The hitting time
//! `T(λ)` equals `δ̄(λ)/2 = ā(λ)`, which is strictly decreasing in `λ` for
//! `κ ≤ 0`; the solver brackets `T(λ) = D/2` by a geometric scan around the
//! `κ = 0` closed form and bisects. For `κ > 0` the monotonicity of the
//! shooting map is not established, so the bracket is first refined on a
//! finer `λ` grid and the lowest sign-change subinterval wins.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ode::ToleranceSpec;
use crate::prufer::{
    self, find_abar, odd_trajectory, ModelError, ModelParams, PruferTrajectory, SolveOptions,
};
use crate::ptrig::PExponent;

/// Errors from the shooting eigensolver.
#[derive(Debug, Error)]
pub enum EigenError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("diameter must be a finite positive real, got {0}")]
    InvalidDiameter(f64),
    #[error("tolerance must be a positive real, got {0}")]
    InvalidTolerance(f64),
    #[error("no bracket for the shooting map found in [{lo:.3e}, {hi:.3e}] after {scanned} scan points")]
    BracketNotFound { lo: f64, hi: f64, scanned: usize },
}

/// A model eigenvalue query `(p, κ, D)`.
#[derive(Debug, Clone)]
pub struct EigenQuery {
    pub p: PExponent,
    pub kappa: f64,
    pub diameter: f64,
}

impl EigenQuery {
    pub fn new(p: PExponent, kappa: f64, diameter: f64) -> Result<Self, EigenError> {
        if !(diameter.is_finite() && diameter > 0.0) {
            return Err(EigenError::InvalidDiameter(diameter));
        }
        Ok(Self { p, kappa, diameter })
    }
}

/// Outcome of a shooting solve.
#[derive(Debug, Clone)]
pub struct EigenResult {
    /// The model eigenvalue `μ_p(κ, D)`.
    pub mu: f64,
    /// Final bisection bracket `lo ≤ μ ≤ hi`.
    pub lambda_bracket: (f64, f64),
    /// Half-interval hitting time at `μ` (equals `ā(μ)` for `κ ≤ 0`).
    pub abar: f64,
    /// `|θ(D/2) - π_p/2|` for the phase shot at `μ`: the Neumann defect.
    pub neumann_residual: f64,
    /// Shooting-map evaluations spent in scan plus bisection.
    pub iterations: usize,
}

/// Serializable record of a solve; this is the JSON wire format.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct EigenRecord {
    pub p: f64,
    pub kappa: f64,
    #[serde(rename = "D")]
    pub diameter: f64,
    pub mu: f64,
    pub bracket: [f64; 2],
    pub iterations: usize,
    pub method: String,
}

impl EigenRecord {
    pub fn new(query: &EigenQuery, result: &EigenResult) -> Self {
        Self {
            p: query.p.p(),
            kappa: query.kappa,
            diameter: query.diameter,
            mu: result.mu,
            bracket: [result.lambda_bracket.0, result.lambda_bracket.1],
            iterations: result.iterations,
            method: "prufer-shooting".to_string(),
        }
    }
}

/// Closed form `μ_p(0, D) = (p-1) (π_p / D)^p`.
pub fn mu_closed_form_kappa0(p: &PExponent, diameter: f64) -> f64 {
    (p.p() - 1.0) * (p.pi_p() / diameter).powf(p.p())
}

/// Closed form for `δ̄(λ)` at `κ = 0`: `π_p ((p-1)/λ)^{1/p}`.
pub fn delta_bar_kappa0(p: &PExponent, lambda: f64) -> f64 {
    p.pi_p() * ((p.p() - 1.0) / lambda).powf(1.0 / p.p())
}

/// `δ̄(λ) = δ(-ā) = 2ā`, the Neumann interval length of the odd model
/// solution; strictly decreasing in `λ`. Requires `κ ≤ 0`.
pub fn delta_bar(params: &ModelParams) -> Result<f64, ModelError> {
    if params.kappa() == 0.0 {
        return Ok(delta_bar_kappa0(params.p(), params.lambda()));
    }
    Ok(2.0 * find_abar(params)?)
}

/// Shooting-map evaluation: hitting time of the half phase, `None` when the
/// phase stalls before the horizon (possible for `κ > 0`).
fn hitting_time(
    p: &PExponent,
    kappa: f64,
    lambda: f64,
    horizon: f64,
    tol: &ToleranceSpec,
) -> Result<Option<f64>, ModelError> {
    let params = ModelParams::new(p.clone(), kappa, lambda)?;
    prufer::phase_half_time(&params, horizon, tol)
}

/// Compute `μ_p(κ, D)` by bracketing and bisecting the shooting map
/// `T(λ) = D/2`, to relative bracket width `tol`.
pub fn mu_shoot(query: &EigenQuery, tol: f64) -> Result<EigenResult, EigenError> {
    mu_shoot_with(query, tol, &ToleranceSpec::default())
}

/// [`mu_shoot`] with explicit integration tolerances.
pub fn mu_shoot_with(
    query: &EigenQuery,
    tol: f64,
    ode_tol: &ToleranceSpec,
) -> Result<EigenResult, EigenError> {
    if !(tol.is_finite() && tol > 0.0) {
        return Err(EigenError::InvalidTolerance(tol));
    }
    let target = 0.5 * query.diameter;
    let horizon = 8.0 * target;
    let mut evals = 0usize;
    // T(λ) - target, with None ("phase never arrived") meaning λ too small.
    let mut shoot = |lambda: f64| -> Result<Option<f64>, EigenError> {
        evals += 1;
        Ok(hitting_time(&query.p, query.kappa, lambda, horizon, ode_tol)?.map(|t| t - target))
    };
    let is_low = |g: &Option<f64>| g.map(|v| v > 0.0).unwrap_or(true);

    let lambda0 = mu_closed_form_kappa0(&query.p, query.diameter);
    let g0 = shoot(lambda0)?;

    // Geometric scan (ratio 2) for a sign-change bracket around λ0.
    let (mut lo, mut hi);
    if is_low(&g0) {
        lo = lambda0;
        hi = lambda0;
        let mut bracketed = false;
        for _ in 0..200 {
            hi *= 2.0;
            if !is_low(&shoot(hi)?) {
                bracketed = true;
                break;
            }
            lo = hi;
        }
        if !bracketed {
            return Err(EigenError::BracketNotFound { lo: lambda0, hi, scanned: evals });
        }
    } else {
        hi = lambda0;
        lo = lambda0;
        let mut bracketed = false;
        for _ in 0..200 {
            lo *= 0.5;
            if is_low(&shoot(lo)?) {
                bracketed = true;
                break;
            }
            hi = lo;
        }
        if !bracketed {
            return Err(EigenError::BracketNotFound { lo, hi: lambda0, scanned: evals });
        }
    }

    // For κ > 0 the monotonicity of T(λ) is not proven: refine on a finer
    // geometric grid and keep the lowest sign-change subinterval.
    if query.kappa > 0.0 {
        let subdivisions = 8u32;
        let ratio = (hi / lo).powf(1.0 / subdivisions as f64);
        let mut grid_lo = lo;
        let mut low_side = true; // T(lo) > target by construction
        for i in 1..=subdivisions {
            let grid_hi = if i == subdivisions { hi } else { lo * ratio.powi(i as i32) };
            let hi_low_side = if i == subdivisions {
                false
            } else {
                is_low(&shoot(grid_hi)?)
            };
            if low_side && !hi_low_side {
                lo = grid_lo;
                hi = grid_hi;
                break;
            }
            grid_lo = grid_hi;
            low_side = hi_low_side;
        }
    }

    // Bisection to relative bracket width `tol`.
    while hi - lo > tol * 0.5 * (hi + lo) {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break; // bracket at floating-point resolution
        }
        if is_low(&shoot(mid)?) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let mu = 0.5 * (lo + hi);

    // Diagnostics at the final value.
    let params = ModelParams::new(query.p.clone(), query.kappa, mu)?;
    let abar = prufer::phase_half_time(&params, horizon, ode_tol)?.unwrap_or(f64::NAN);
    let theta_end = prufer::phase_at(&params, target, ode_tol)?;
    let neumann_residual = (theta_end - query.p.half_pi_p()).abs();

    Ok(EigenResult {
        mu,
        lambda_bracket: (lo, hi),
        abar,
        neumann_residual,
        iterations: evals,
    })
}

/// The odd model eigenfunction profile on `[-D/2, D/2]` at the computed
/// eigenvalue: `φ(0) = 0`, `φ' > 0` inside, `φ'(±D/2) = 0`, `φ(±D/2) = ±1`.
pub fn model_eigenfunction(
    query: &EigenQuery,
    result: &EigenResult,
) -> Result<PruferTrajectory, EigenError> {
    let params = ModelParams::new(query.p.clone(), query.kappa, result.mu)?;
    let opts = SolveOptions { horizon: Some(query.diameter), ..SolveOptions::default() };
    let (traj, _abar) = odd_trajectory(&params, &opts)?;
    Ok(traj)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pexp(p: f64) -> PExponent {
        PExponent::new(p).unwrap()
    }

    #[test]
    fn closed_form_values() {
        // p=2, D=π: the classical interval eigenvalue 1.
        let p2 = pexp(2.0);
        assert!((mu_closed_form_kappa0(&p2, std::f64::consts::PI) - 1.0).abs() < 1e-14);
        assert!((mu_closed_form_kappa0(&p2, 1.0) - std::f64::consts::PI.powi(2)).abs() < 1e-12);
        // p=3, D=1: 2 π_3^3 ≈ 28.289.
        let p3 = pexp(3.0);
        let expect = 2.0 * p3.pi_p().powi(3);
        assert!((mu_closed_form_kappa0(&p3, 1.0) - expect).abs() < 1e-12);
        assert!((mu_closed_form_kappa0(&p3, 1.0) - 28.289).abs() < 1e-2);
    }

    #[test]
    fn shoot_matches_closed_form_at_kappa_zero() {
        for &p in &[1.5, 2.0, 3.0] {
            for &d in &[0.5, 2.0] {
                let q = EigenQuery::new(pexp(p), 0.0, d).unwrap();
                let r = mu_shoot(&q, 1e-10).unwrap();
                let exact = mu_closed_form_kappa0(&q.p, d);
                assert!(
                    (r.mu - exact).abs() < 1e-8 * exact,
                    "p={p} D={d}: {} vs {exact}",
                    r.mu
                );
                assert!(r.lambda_bracket.0 <= r.mu && r.mu <= r.lambda_bracket.1);
                assert!(r.neumann_residual < 1e-8);
            }
        }
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(EigenQuery::new(pexp(2.0), 0.0, -1.0).is_err());
        assert!(EigenQuery::new(pexp(2.0), 0.0, f64::NAN).is_err());
        let q = EigenQuery::new(pexp(2.0), 0.0, 1.0).unwrap();
        assert!(matches!(mu_shoot(&q, 0.0), Err(EigenError::InvalidTolerance(_))));
    }

    #[test]
    fn abar_route_consistency() {
        // 2 ā(μ) = D for κ < 0 (the Prop 4.5 inversion through the odd solution).
        let q = EigenQuery::new(pexp(2.0), -1.0, 2.0).unwrap();
        let r = mu_shoot(&q, 1e-12).unwrap();
        let params = ModelParams::new(q.p.clone(), q.kappa, r.mu).unwrap();
        let abar = find_abar(&params).unwrap();
        assert!((2.0 * abar - q.diameter).abs() < 1e-8, "2ā = {}", 2.0 * abar);
        assert!((r.abar - abar).abs() < 1e-9);
    }

    #[test]
    fn delta_bar_monotone_in_lambda() {
        let p = pexp(2.0);
        let d2 = delta_bar(&ModelParams::new(p.clone(), -1.0, 2.0).unwrap()).unwrap();
        let d4 = delta_bar(&ModelParams::new(p.clone(), -1.0, 4.0).unwrap()).unwrap();
        assert!(d2 > d4, "δ̄ must decrease in λ: {d2} vs {d4}");
        // κ=0 closed form.
        let m = ModelParams::new(p, 0.0, 2.0).unwrap();
        let expect = delta_bar_kappa0(m.p(), 2.0);
        assert!((delta_bar(&m).unwrap() - expect).abs() < 1e-13);
    }

    #[test]
    fn model_eigenfunction_is_odd_neumann_profile() {
        let q = EigenQuery::new(pexp(3.0), -1.0, 1.0).unwrap();
        let r = mu_shoot(&q, 1e-10).unwrap();
        let traj = model_eigenfunction(&q, &r).unwrap();
        let (lo, hi) = traj.span();
        assert!((lo + 0.5 * q.diameter).abs() < 1e-7, "left end {lo}");
        assert!((hi - 0.5 * q.diameter).abs() < 1e-7, "right end {hi}");
        assert!(traj.w(0.0).abs() < 1e-9);
        for i in 1..10 {
            let t = hi * (i as f64) / 10.0;
            assert!((traj.w(t) + traj.w(-t)).abs() < 1e-8, "odd symmetry at {t}");
            assert!(traj.dw(t) > 0.0);
        }
        // w' vanishes like a (p-1)-root at the end, so phase error is the
        // right metric for the Neumann condition there.
        assert!((traj.theta(hi) - q.p.half_pi_p()).abs() < 1e-8);
        assert!(traj.dw(hi).abs() < 1e-4);
        assert!((traj.w(hi) - 1.0).abs() < 1e-8);
    }

    #[test]
    fn positive_kappa_query_solves() {
        // Sharp regime 1 < p ≤ 2 admits κ > 0; the phase must still hit.
        let q = EigenQuery::new(pexp(2.0), 1.0, 2.0).unwrap();
        let r = mu_shoot(&q, 1e-10).unwrap();
        // Monotonicity in κ: μ(κ=1) ≥ μ(κ=0) = (π/2)².
        assert!(r.mu > (std::f64::consts::PI / 2.0).powi(2));
        assert!(r.neumann_residual < 1e-8);
    }

    #[test]
    fn eigen_record_round_trip() {
        let q = EigenQuery::new(pexp(2.0), 0.0, 1.0).unwrap();
        let r = mu_shoot(&q, 1e-8).unwrap();
        let rec = EigenRecord::new(&q, &r);
        let json = serde_json::to_string(&rec).unwrap();
        let back: EigenRecord = serde_json::from_str(&json).unwrap();
        assert_eq!(rec, back);
        assert!(json.contains("\"method\":\"prufer-shooting\""));
        assert!(json.contains("\"D\":"));
    }
}
