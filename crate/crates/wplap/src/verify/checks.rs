//! Theorem checks on discrete eigenresults, with mesh-calibrated tolerances.
//!
//! A discrete eigenvalue carries discretization error, so raw comparisons
//! against continuum bounds would flag spurious violations at the sharpness
//! edge. The mesh tolerance `ε_h` is therefore *measured*, not guessed: at
//! each grid size the exactly-solvable `p = 2` model case is solved by the
//! tridiagonal route and compared against `μ_2(κ, D)` from the shooting
//! solver; three times that relative error (floored) is used as `ε_h` for
//! every `p` at the same grid. The gradient-comparison tolerance is
//! calibrated the same way, on the model segment where the comparison is an
//! equality.

use serde::{Deserialize, Serialize};

use super::rayleigh::DiscreteEigenResult;
use super::segment::{make_segment, BumpSpec, Topology, WeightedSegment};
use super::sturm::weighted_neumann_eigenvalue_p2;
use super::VerifyError;
use crate::bounds;
use crate::eigensolve::{mu_shoot, EigenQuery};
use crate::prufer::{inverse_profile, odd_trajectory, ModelParams, PruferTrajectory, SolveOptions};
use crate::ptrig::PExponent;

/// Lower-bound check outcome.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MarginReport {
    pub lambda_h: f64,
    pub mu: f64,
    /// Raw margin `λ_h - μ` (may be slightly negative at sharpness).
    pub margin: f64,
    pub rel_margin: f64,
    /// Mesh tolerance used for the verdict.
    pub epsilon_h: f64,
    /// True only if `λ_h < μ (1 - ε_h)`: a mesh-adjusted violation.
    pub violation: bool,
}

/// Gradient-comparison check outcome.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GradientReport {
    /// Largest value of `|u'_h| - φ'(Ψ(u))` over interior nodes.
    pub max_excess: f64,
    pub tolerance_h: f64,
    pub checked: usize,
    /// Nodes with excess above `tolerance_h`.
    pub violations: usize,
}

/// Lichnerowicz-type check outcome.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LichnerowiczReport {
    pub lambda_h: f64,
    pub bound: f64,
    pub wang_li: f64,
    pub epsilon_h: f64,
    pub ok: bool,
}

/// Mesh tolerance at `(κ, D, n)`: three times the measured relative error of
/// the exactly-solvable `p = 2` model case at this grid.
pub fn epsilon_h(kappa: f64, d: f64, n: usize) -> Result<f64, VerifyError> {
    let seg = make_segment(kappa, d, &BumpSpec::none(), n)?;
    let discrete = weighted_neumann_eigenvalue_p2(&seg);
    let p2 = PExponent::new(2.0).map_err(crate::prufer::ModelError::from)?;
    let query = EigenQuery::new(p2, kappa, d)?;
    let mu2 = mu_shoot(&query, 1e-10)?.mu;
    let measured = ((discrete - mu2) / mu2).abs();
    Ok(3.0 * measured.max(1e-12))
}

/// Check `λ_h ≥ μ_p(κ, D)` (the theorem-level lower bound) with the
/// mesh-adjusted verdict. Requires the sharp-proved regime.
pub fn check_lower_bound(
    seg: &WeightedSegment,
    p: &PExponent,
    result: &DiscreteEigenResult,
) -> Result<MarginReport, VerifyError> {
    if !bounds::sharp_regime(p.p(), seg.kappa()) {
        return Err(VerifyError::RegimeViolation(format!(
            "sharp bound is only proved for 1 < p <= 2 or kappa <= 0 (got p = {}, kappa = {})",
            p.p(),
            seg.kappa()
        )));
    }
    let query = EigenQuery::new(p.clone(), seg.kappa(), seg.diameter())?;
    let mu = mu_shoot(&query, 1e-10)?.mu;
    let eps = epsilon_h(seg.kappa(), seg.diameter(), seg.n_cells())?;
    Ok(margin_report(result.lambda_h, mu, eps))
}

/// Assemble a [`MarginReport`] from precomputed pieces (used by campaigns,
/// which cache `μ` and `ε_h`).
pub fn margin_report(lambda_h: f64, mu: f64, epsilon_h: f64) -> MarginReport {
    let margin = lambda_h - mu;
    MarginReport {
        lambda_h,
        mu,
        margin,
        rel_margin: margin / mu,
        epsilon_h,
        violation: lambda_h < mu * (1.0 - epsilon_h),
    }
}

/// Normalize eigenfunction samples per the sharpness argument: flip sign so
/// the minimum has the larger magnitude, then scale to `u_min = -1`,
/// `u_max ∈ (0, 1]`.
fn normalize_height(u: &[f64]) -> Result<Vec<f64>, VerifyError> {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for &v in u {
        lo = lo.min(v);
        hi = hi.max(v);
    }
    if !(lo < 0.0 && hi > 0.0) {
        return Err(VerifyError::RegimeViolation(
            "eigenfunction must change sign (first nonzero mode required)".into(),
        ));
    }
    let values: Vec<f64> = if hi > -lo {
        u.iter().map(|&v| -v / hi).collect()
    } else {
        u.iter().map(|&v| v / -lo).collect()
    };
    Ok(values)
}

/// Raw gradient-comparison excess: max over interior nodes of
/// `|u'_h| - φ'(Ψ(u))` for the height-normalized `u` against the model
/// profile, plus the number of nodes checked and their count above a given
/// threshold.
fn gradient_excess(
    seg: &WeightedSegment,
    result: &DiscreteEigenResult,
    model: &PruferTrajectory,
    threshold: f64,
) -> Result<(f64, usize, usize), VerifyError> {
    let u = normalize_height(&result.u_values)?;
    let inv = inverse_profile(model)?;
    let (w_lo, w_hi) = inv.height_range();
    let u_min = u.iter().cloned().fold(f64::INFINITY, f64::min);
    let u_max = u.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let slack = 1e-9;
    if u_min < w_lo - slack || u_max > w_hi + slack {
        return Err(VerifyError::RangeNotContained {
            u_min,
            u_max,
            model_lo: w_lo,
            model_hi: w_hi,
        });
    }
    let h = seg.h();
    let n = u.len();
    let mut max_excess = f64::NEG_INFINITY;
    let mut checked = 0usize;
    let mut violations = 0usize;
    for i in 1..n - 1 {
        let slope = (u[i + 1] - u[i - 1]) / (2.0 * h);
        let bound = inv.slope_at_height(u[i].clamp(w_lo, w_hi))?;
        let excess = slope.abs() - bound;
        max_excess = max_excess.max(excess);
        if excess > threshold {
            violations += 1;
        }
        checked += 1;
    }
    Ok((max_excess, checked, violations))
}

/// Pointwise gradient comparison `|u'_h| ≤ φ'(Ψ(u)) + tolerance_h` at all
/// interior nodes (Neumann interval, `κ ≤ 0`).
///
/// `model` must be an increasing model solution at the *same* eigenvalue as
/// `result`, with range containing the normalized range of `u`; the odd
/// solution (`m = 1`) always qualifies. A containment failure reports which
/// range was missed so the caller can re-select `[a, b(a)]` by a geometry
/// scan (`m(a)` sweeps `(0, 1]`).
pub fn check_gradient_comparison(
    seg: &WeightedSegment,
    p: &PExponent,
    result: &DiscreteEigenResult,
    model: &PruferTrajectory,
    tolerance_h: f64,
) -> Result<GradientReport, VerifyError> {
    if seg.topology() != Topology::Interval {
        return Err(VerifyError::RegimeViolation(
            "gradient comparison is defined on interval segments".into(),
        ));
    }
    if seg.kappa() > 0.0 {
        return Err(VerifyError::RegimeViolation(
            "gradient comparison requires kappa <= 0".into(),
        ));
    }
    debug_assert!((model.params().p().p() - p.p()).abs() < 1e-12);
    let (max_excess, checked, violations) = gradient_excess(seg, result, model, tolerance_h)?;
    Ok(GradientReport { max_excess, tolerance_h, checked, violations })
}

/// The odd model profile at the *discrete* eigenvalue, for gradient checks.
pub fn gradient_model(
    p: &PExponent,
    kappa: f64,
    lambda_h: f64,
) -> Result<PruferTrajectory, VerifyError> {
    let params = ModelParams::new(p.clone(), kappa, lambda_h)?;
    let (traj, _abar) = odd_trajectory(&params, &SolveOptions::default())?;
    Ok(traj)
}

/// Calibrate `tolerance_h` for the gradient comparison at `(κ, D, n, p)`:
/// three times the measured max excess on the model segment, where the
/// comparison is an equality and any excess is pure discretization error.
pub fn calibrate_gradient_tolerance(
    kappa: f64,
    d: f64,
    n: usize,
    p: &PExponent,
) -> Result<f64, VerifyError> {
    let seg = make_segment(kappa, d, &BumpSpec::none(), n)?;
    let result = super::rayleigh::discrete_first_eigenvalue(&seg, p, 3e-8)?;
    let model = gradient_model(p, kappa, result.lambda_h)?;
    let (max_excess, _, _) = gradient_excess(&seg, &result, &model, f64::INFINITY)?;
    Ok(3.0 * max_excess.max(1e-8))
}

/// Check the Lichnerowicz-type bound `λ_h ≥ (κ/(p-1))^{p/2} (1 - ε_h)` for a
/// positively curved segment with `p ≥ 2`.
pub fn check_lichnerowicz(
    seg: &WeightedSegment,
    p: &PExponent,
    result: &DiscreteEigenResult,
) -> Result<LichnerowiczReport, VerifyError> {
    if p.p() < 2.0 || seg.kappa() <= 0.0 {
        return Err(VerifyError::RegimeViolation(format!(
            "Lichnerowicz-type bound needs p >= 2 and kappa > 0 (got p = {}, kappa = {})",
            p.p(),
            seg.kappa()
        )));
    }
    let bound = bounds::lichnerowicz_bound(p, seg.kappa())
        .map_err(|e| VerifyError::RegimeViolation(e.to_string()))?;
    let wang_li = bounds::wang_li_bound(p, seg.kappa())
        .map_err(|e| VerifyError::RegimeViolation(e.to_string()))?;
    let eps = epsilon_h(seg.kappa(), seg.diameter(), seg.n_cells())?;
    Ok(LichnerowiczReport {
        lambda_h: result.lambda_h,
        bound,
        wang_li,
        epsilon_h: eps,
        ok: result.lambda_h >= bound * (1.0 - eps),
    })
}
