//! The one-dimensional model equation in generalized Prüfer coordinates.
//!
//! The model equation for the first Neumann eigenvalue of the weighted
//! p-Laplacian on an interval is
//!
//! ```text
//! (p-1) |w'|^{p-2} w'' - κ t |w'|^{p-2} w' + λ |w|^{p-2} w = 0.
//! ```
//!
//! Writing `α w = r sin_p θ`, `w' = r cos_p θ` with `α = (λ/(p-1))^{1/p}`
//! decouples the phase from the amplitude:
//!
//! ```text
//! θ'        = α - (κ t / (p-1)) · cos_p^{p-1}(θ) sin_p(θ),
//! (log r)'  = (κ t / (p-1)) · |cos_p(θ)|^p,
//! ```
//!
//! where `cos_p^{p-1}` is the signed power. The phase equation alone decides
//! all oscillation structure: `w' = 0` exactly at `θ ∈ π_p/2 + π_p Z`, and
//! `θ' = α > 0` there, so Neumann events are transversal. This module
//! integrates the system with dense output, extracts the interval geometry
//! `b(a)`, `m(a) = w(b(a))`, `δ(a) = b(a) - a`, locates the odd solution's
//! start abscissa `ā`, and inverts monotone solution profiles.

use thiserror::Error;

use crate::ode::{self, DenseSolution, Integration, OdeError, ToleranceSpec};
use crate::ptrig::{odd_power, PExponent, PtrigError};
use crate::roots::brent;

/// Errors from model-equation integration and geometry extraction.
#[derive(Debug, Error)]
pub enum ModelError {
    #[error(transparent)]
    Ptrig(#[from] PtrigError),
    #[error("lambda must be a finite positive real, got {0}")]
    InvalidLambda(f64),
    #[error("kappa must be finite, got {0}")]
    InvalidKappa(f64),
    #[error("integration failed: {error} (last state: t={last_t}, theta={last_theta})")]
    Integration { error: OdeError, last_t: f64, last_theta: f64 },
    #[error("phase did not reach the target before the horizon t = {horizon} (theta = {last_theta})")]
    Unreached { horizon: f64, last_theta: f64 },
    #[error("find_abar requires kappa <= 0 (got kappa = {0})")]
    PositiveKappa(f64),
    #[error("trajectory is not a single monotone branch (theta range [{theta_min}, {theta_max}])")]
    NonMonotone { theta_min: f64, theta_max: f64 },
    #[error("height {x} outside profile range [{lo}, {hi}]")]
    HeightOutOfRange { x: f64, lo: f64, hi: f64 },
}

/// Parameter bundle `(p, κ, λ)` with the derived Prüfer amplitude
/// `α = (λ/(p-1))^{1/p}`.
#[derive(Debug, Clone)]
pub struct ModelParams {
    p: PExponent,
    kappa: f64,
    lambda: f64,
    alpha: f64,
}

impl ModelParams {
    pub fn new(p: PExponent, kappa: f64, lambda: f64) -> Result<Self, ModelError> {
        if !(lambda.is_finite() && lambda > 0.0) {
            return Err(ModelError::InvalidLambda(lambda));
        }
        if !kappa.is_finite() {
            return Err(ModelError::InvalidKappa(kappa));
        }
        let alpha = (lambda / (p.p() - 1.0)).powf(1.0 / p.p());
        Ok(Self { p, kappa, lambda, alpha })
    }

    pub fn p(&self) -> &PExponent {
        &self.p
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    /// Phase speed `α = (λ/(p-1))^{1/p}`; also the common scale of `r`.
    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    fn rhs(&self) -> PruferRhs<'_> {
        PruferRhs { p: &self.p, kappa: self.kappa, alpha: self.alpha }
    }
}

struct PruferRhs<'a> {
    p: &'a PExponent,
    kappa: f64,
    alpha: f64,
}

impl ode::OdeSystem<2> for PruferRhs<'_> {
    fn rhs(&self, t: f64, y: &[f64; 2]) -> [f64; 2] {
        let (s, c) = self.p.sin_cos_p(y[0]);
        let drift = self.kappa * t / (self.p.p() - 1.0);
        [
            self.alpha - drift * odd_power(c, self.p.p() - 1.0) * s,
            drift * c.abs().powf(self.p.p()),
        ]
    }
}

/// One reconstructed point of a Prüfer trajectory.
#[derive(Debug, Clone, Copy)]
pub struct PruferSample {
    pub t: f64,
    pub theta: f64,
    pub log_r: f64,
    /// `w = (r/α) sin_p θ`
    pub w: f64,
    /// `w' = r cos_p θ`
    pub dw: f64,
}

/// A dense phase/amplitude path `(t, θ, log r)` with reconstruction back to
/// `(w, w')`.
#[derive(Debug, Clone)]
pub struct PruferTrajectory {
    params: ModelParams,
    a: f64,
    sol: DenseSolution<2>,
}

impl PruferTrajectory {
    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    /// Start abscissa of the underlying IVP.
    pub fn a(&self) -> f64 {
        self.a
    }

    /// Covered `t` interval as `(lo, hi)`.
    pub fn span(&self) -> (f64, f64) {
        self.sol.span()
    }

    pub fn theta(&self, t: f64) -> f64 {
        self.sol.eval(t)[0]
    }

    pub fn log_r(&self, t: f64) -> f64 {
        self.sol.eval(t)[1]
    }

    /// Full reconstructed state at `t`.
    pub fn sample(&self, t: f64) -> PruferSample {
        let [theta, log_r] = self.sol.eval(t);
        let r = log_r.exp();
        let (s, c) = self.params.p.sin_cos_p(theta);
        PruferSample { t, theta, log_r, w: r * s / self.params.alpha, dw: r * c }
    }

    /// `w(t)` alone.
    pub fn w(&self, t: f64) -> f64 {
        self.sample(t).w
    }

    /// `w'(t)` alone.
    pub fn dw(&self, t: f64) -> f64 {
        self.sample(t).dw
    }

    /// Reconstructed states at the integrator's accepted step nodes.
    pub fn samples(&self) -> Vec<PruferSample> {
        self.sol.step_nodes().iter().map(|&t| self.sample(t)).collect()
    }

    /// Residual of the model equation at `t`, with `w''` from a central
    /// difference of the reconstructed `w'` over `±dt` of dense output.
    ///
    /// Meaningful away from phase-critical points (`cos_p θ` not too small);
    /// for `p < 2` the factor `|w'|^{p-2}` is singular exactly there.
    pub fn ode_residual_fd(&self, t: f64, dt: f64) -> f64 {
        let s = self.sample(t);
        let ddw = (self.dw(t + dt) - self.dw(t - dt)) / (2.0 * dt);
        let p = self.params.p.p();
        (p - 1.0) * s.dw.abs().powf(p - 2.0) * ddw - self.params.kappa * t * odd_power(s.dw, p - 1.0)
            + self.params.lambda * odd_power(s.w, p - 1.0)
    }
}

/// Interval geometry of a solution started at `a`: the first Neumann point
/// `b(a)`, the maximum `m(a) = w(b(a))`, and the length `δ(a) = b(a) - a`.
#[derive(Debug, Clone, Copy)]
pub struct ModelGeometry {
    pub a: f64,
    pub b_of_a: f64,
    pub m_of_a: f64,
    pub delta_of_a: f64,
}

/// Tuning knobs for model-IVP solves.
#[derive(Debug, Clone, Copy)]
pub struct SolveOptions {
    pub tol: ToleranceSpec,
    /// Event-search horizon measured from `a`; `None` uses `10 π_p/α + |a|`.
    pub horizon: Option<f64>,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self { tol: ToleranceSpec::default(), horizon: None }
    }
}

fn integration_error(failure: ode::OdeFailure<2>) -> ModelError {
    let (last_t, last_theta) = failure
        .partial
        .as_ref()
        .map(|sol| (sol.t_end(), sol.y_end()[0]))
        .unwrap_or((f64::NAN, f64::NAN));
    ModelError::Integration { error: failure.error, last_t, last_theta }
}

fn run(
    params: &ModelParams,
    t0: f64,
    theta0: f64,
    log_r0: f64,
    t_end: f64,
    tol: &ToleranceSpec,
    target: Option<f64>,
) -> Result<Integration<2>, ModelError> {
    let rhs = params.rhs();
    match target {
        Some(theta_target) => {
            let mut ev = move |_t: f64, y: &[f64; 2]| y[0] - theta_target;
            ode::integrate(&rhs, t0, [theta0, log_r0], t_end, tol, Some(&mut ev))
                .map_err(integration_error)
        }
        None => ode::integrate(&rhs, t0, [theta0, log_r0], t_end, tol, None)
            .map_err(integration_error),
    }
}

/// Integrate the Prüfer system from phase `theta0` at `a` up to `t_end`
/// (either direction), with amplitude started at the standard `r(a) = α`.
pub fn integrate_prufer(
    params: &ModelParams,
    a: f64,
    theta0: f64,
    t_end: f64,
    step_control: &ToleranceSpec,
) -> Result<PruferTrajectory, ModelError> {
    let log_r0 = params.alpha.ln();
    let out = run(params, a, theta0, log_r0, t_end, step_control, None)?;
    Ok(PruferTrajectory { params: params.clone(), a, sol: out.solution })
}

/// Solve the standard model IVP `w(a) = -1`, `w'(a) = 0` (i.e.
/// `θ(a) = -π_p/2`, `r(a) = α`), integrating forward until the phase first
/// reaches `π_p/2`, and extract the interval geometry.
///
/// Fails with [`ModelError::Unreached`] if the Neumann phase is not attained
/// before the horizon, which can happen for `κ > 0` with small `λ`.
pub fn solve_model_ivp(
    params: &ModelParams,
    a: f64,
) -> Result<(PruferTrajectory, ModelGeometry), ModelError> {
    solve_model_ivp_with(params, a, &SolveOptions::default())
}

/// [`solve_model_ivp`] with explicit tolerances and horizon.
pub fn solve_model_ivp_with(
    params: &ModelParams,
    a: f64,
    opts: &SolveOptions,
) -> Result<(PruferTrajectory, ModelGeometry), ModelError> {
    let half_pi_p = params.p.half_pi_p();
    let horizon = opts
        .horizon
        .unwrap_or_else(|| 10.0 * params.p.pi_p() / params.alpha + a.abs());
    let out = run(
        params,
        a,
        -half_pi_p,
        params.alpha.ln(),
        a + horizon,
        &opts.tol,
        Some(half_pi_p),
    )?;
    let hit = out.event.ok_or(ModelError::Unreached {
        horizon: a + horizon,
        last_theta: out.solution.y_end()[0],
    })?;
    let b = hit.t;
    let m = (hit.y[1].exp()) / params.alpha;
    let geom = ModelGeometry { a, b_of_a: b, m_of_a: m, delta_of_a: b - a };
    Ok((PruferTrajectory { params: params.clone(), a, sol: out.solution }, geom))
}

/// The unique `ā > 0` for which the model IVP solution started at `-ā` is
/// odd, computed by integrating the phase backward from `θ(0) = 0` until it
/// reaches `-π_p/2`.
///
/// Requires `κ ≤ 0`. For `κ < 0` the phase speed satisfies `θ' ≥ α` along the
/// way, so `ā < π_p/(2α)`; for `κ = 0` this returns the closed form
/// `π_p/(2α)` that the constant-speed phase gives directly.
pub fn find_abar(params: &ModelParams) -> Result<f64, ModelError> {
    find_abar_with(params, &ToleranceSpec::default())
}

/// [`find_abar`] with explicit tolerances.
pub fn find_abar_with(params: &ModelParams, tol: &ToleranceSpec) -> Result<f64, ModelError> {
    if params.kappa > 0.0 {
        return Err(ModelError::PositiveKappa(params.kappa));
    }
    if params.kappa == 0.0 {
        return Ok(params.p.half_pi_p() / params.alpha);
    }
    let half_pi_p = params.p.half_pi_p();
    // θ' ≥ α on the way down, so the hit lies within π_p/(2α); integrate a
    // little past it so the event bracket is safely interior.
    let horizon = -1.25 * half_pi_p / params.alpha;
    let out = run(params, 0.0, 0.0, 0.0, horizon, tol, Some(-half_pi_p))?;
    let hit = out.event.ok_or(ModelError::Unreached {
        horizon,
        last_theta: out.solution.y_end()[0],
    })?;
    Ok(-hit.t)
}

/// The odd solution through `θ(0) = 0` on `[-ā, ā]`, normalized so that
/// `r(±ā) = α`, i.e. `w(-ā) = -1` and `w(ā) = 1`.
///
/// The right-hand side of the phase equation is even in `(t, θ)`, so this
/// solution is odd for every `κ`; only the existence of the half-phase hit
/// needs care (for `κ > 0` with small `λ` it may not occur, yielding
/// [`ModelError::Unreached`]). Both halves are integrated numerically (no
/// mirroring), so the odd/even symmetry of `(θ, r)` is a checkable property
/// of the result rather than an assumption. Returns the trajectory together
/// with `ā`.
pub fn odd_trajectory(
    params: &ModelParams,
    opts: &SolveOptions,
) -> Result<(PruferTrajectory, f64), ModelError> {
    let tol = &opts.tol;
    let half_pi_p = params.p.half_pi_p();
    let probe_end = opts.horizon.unwrap_or_else(|| {
        if params.kappa <= 0.0 {
            // θ' ≥ α along the forward half for κ ≤ 0.
            1.25 * half_pi_p / params.alpha
        } else {
            20.0 * half_pi_p / params.alpha
        }
    });
    // Pass 1: unnormalized amplitude to learn log r(ā) - log r(0).
    let probe = run(params, 0.0, 0.0, 0.0, probe_end, tol, Some(half_pi_p))?;
    let hit = probe.event.ok_or(ModelError::Unreached {
        horizon: probe_end,
        last_theta: probe.solution.y_end()[0],
    })?;
    let abar = hit.t;
    let log_r0 = params.alpha.ln() - hit.y[1];
    // Pass 2: both directions with the calibrated amplitude.
    let fwd = run(params, 0.0, 0.0, log_r0, abar, tol, None)?;
    let bwd = run(params, 0.0, 0.0, log_r0, -abar, tol, None)?;
    let sol = fwd.solution.merged_with_backward(&bwd.solution);
    Ok((PruferTrajectory { params: params.clone(), a: -abar, sol }, abar))
}

/// First `t > 0` at which the phase started from `θ(0) = 0` reaches
/// `π_p/2`, or `None` if it does not happen before `horizon`.
///
/// This is the half-interval Neumann hitting time: the shooting map that
/// [`crate::eigensolve::mu_shoot`] inverts. For `κ ≤ 0` it equals `ā` by
/// oddness of the phase solution.
pub fn phase_half_time(
    params: &ModelParams,
    horizon: f64,
    tol: &ToleranceSpec,
) -> Result<Option<f64>, ModelError> {
    let out = run(params, 0.0, 0.0, 0.0, horizon, tol, Some(params.p.half_pi_p()))?;
    Ok(out.event.map(|hit| hit.t))
}

/// Phase value at `t_end` for the solution with `θ(0) = 0` (no event).
pub fn phase_at(params: &ModelParams, t_end: f64, tol: &ToleranceSpec) -> Result<f64, ModelError> {
    let out = run(params, 0.0, 0.0, 0.0, t_end, tol, None)?;
    Ok(out.solution.y_end()[0])
}

/// Batch interval geometry over start abscissas; entries fail independently.
pub fn geometry_scan(
    params: &ModelParams,
    a_values: &[f64],
) -> Vec<Result<ModelGeometry, ModelError>> {
    a_values
        .iter()
        .map(|&a| solve_model_ivp(params, a).map(|(_, g)| g))
        .collect()
}

/// Monotone inverse `Ψ` of a strictly increasing solution profile `w` on a
/// single phase branch, with the slope evaluator `x ↦ w'(Ψ(x))` used by
/// gradient-comparison checks.
#[derive(Debug)]
pub struct InverseProfile<'a> {
    traj: &'a PruferTrajectory,
    t_lo: f64,
    t_hi: f64,
    w_lo: f64,
    w_hi: f64,
}

/// Build the inverse of `w` over the trajectory's full span.
///
/// The span must be one monotone branch: `θ ∈ [-π_p/2, π_p/2]` throughout
/// (endpoints allowed, so Neumann ends with `w' = 0` are fine).
pub fn inverse_profile(traj: &PruferTrajectory) -> Result<InverseProfile<'_>, ModelError> {
    let (t_lo, t_hi) = traj.span();
    let half_pi_p = traj.params.p.half_pi_p();
    let slack = 1e-9 * (1.0 + half_pi_p);
    let mut theta_min = f64::INFINITY;
    let mut theta_max = f64::NEG_INFINITY;
    for s in traj.samples() {
        theta_min = theta_min.min(s.theta);
        theta_max = theta_max.max(s.theta);
    }
    if theta_min < -half_pi_p - slack || theta_max > half_pi_p + slack {
        return Err(ModelError::NonMonotone { theta_min, theta_max });
    }
    let w_lo = traj.w(t_lo);
    let w_hi = traj.w(t_hi);
    if w_lo >= w_hi {
        return Err(ModelError::NonMonotone { theta_min, theta_max });
    }
    Ok(InverseProfile { traj, t_lo, t_hi, w_lo, w_hi })
}

impl InverseProfile<'_> {
    pub fn t_range(&self) -> (f64, f64) {
        (self.t_lo, self.t_hi)
    }

    pub fn height_range(&self) -> (f64, f64) {
        (self.w_lo, self.w_hi)
    }

    /// `Ψ(x)`: the abscissa with `w(Ψ(x)) = x`.
    pub fn psi(&self, x: f64) -> Result<f64, ModelError> {
        let pad = 1e-9 * (1.0 + self.w_hi.abs().max(self.w_lo.abs()));
        if x < self.w_lo - pad || x > self.w_hi + pad {
            return Err(ModelError::HeightOutOfRange { x, lo: self.w_lo, hi: self.w_hi });
        }
        if x <= self.w_lo {
            return Ok(self.t_lo);
        }
        if x >= self.w_hi {
            return Ok(self.t_hi);
        }
        let traj = self.traj;
        Ok(brent(
            |t| traj.w(t) - x,
            self.t_lo,
            self.t_hi,
            1e-13 * (1.0 + self.t_hi.abs().max(self.t_lo.abs())),
            200,
        ))
    }

    /// The gradient-comparison right-hand side `x ↦ w'(Ψ(x))`.
    pub fn slope_at_height(&self, x: f64) -> Result<f64, ModelError> {
        Ok(self.traj.dw(self.psi(x)?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(p: f64, kappa: f64, lambda: f64) -> ModelParams {
        ModelParams::new(PExponent::new(p).unwrap(), kappa, lambda).unwrap()
    }

    #[test]
    fn rejects_bad_lambda() {
        let p = PExponent::new(2.0).unwrap();
        assert!(ModelParams::new(p.clone(), 0.0, 0.0).is_err());
        assert!(ModelParams::new(p.clone(), 0.0, -1.0).is_err());
        assert!(ModelParams::new(p, f64::NAN, 1.0).is_err());
    }

    #[test]
    fn alpha_specializes_at_p2() {
        // p=2, κ=0: w = sin(√λ t) forces phase speed √λ.
        let m = params(2.0, 0.0, 4.0);
        assert!((m.alpha() - 2.0).abs() < 1e-15);
    }

    #[test]
    fn kappa_zero_phase_is_linear() {
        let m = params(3.0, 0.0, 2.0);
        let tol = ToleranceSpec::default();
        let traj = integrate_prufer(&m, 0.5, 0.2, 4.0, &tol).unwrap();
        for i in 0..40 {
            let t = 0.5 + 3.5 * (i as f64) / 39.0;
            let expect = 0.2 + m.alpha() * (t - 0.5);
            assert!((traj.theta(t) - expect).abs() < 1e-9, "t={t}");
            assert!((traj.log_r(t) - m.alpha().ln()).abs() < 1e-11);
        }
    }

    #[test]
    fn kappa_zero_geometry_closed_form() {
        for &(p, lambda) in &[(1.5, 0.7), (2.0, 2.0), (3.0, 5.0)] {
            let m = params(p, 0.0, lambda);
            let (_traj, geom) = solve_model_ivp(&m, -0.3).unwrap();
            let delta_expect = m.p().pi_p() * ((p - 1.0) / lambda).powf(1.0 / p);
            assert!((geom.delta_of_a - delta_expect).abs() < 1e-9, "p={p}");
            assert!((geom.m_of_a - 1.0).abs() < 1e-10);
            assert!((geom.b_of_a - (-0.3 + m.p().pi_p() / m.alpha())).abs() < 1e-9);
        }
    }

    #[test]
    fn find_abar_kappa_zero_closed_form() {
        let m = params(2.5, 0.0, 1.3);
        let abar = find_abar(&m).unwrap();
        assert!((abar - m.p().half_pi_p() / m.alpha()).abs() < 1e-12);
    }

    #[test]
    fn find_abar_rejects_positive_kappa() {
        let m = params(2.0, 0.5, 1.0);
        assert!(matches!(find_abar(&m), Err(ModelError::PositiveKappa(_))));
    }

    #[test]
    fn abar_below_quarter_period_for_negative_kappa() {
        for &(p, kappa, lambda) in &[(1.5, -1.0, 2.0), (2.0, -1.0, 2.0), (3.0, -0.5, 4.0)] {
            let m = params(p, kappa, lambda);
            let abar = find_abar(&m).unwrap();
            assert!(abar > 0.0);
            assert!(
                abar < m.p().half_pi_p() / m.alpha(),
                "Prop 4.2 bound violated: p={p} κ={kappa}"
            );
        }
    }

    #[test]
    fn unreached_for_positive_kappa_small_lambda() {
        let m = params(3.0, 2.0, 0.05);
        match solve_model_ivp(&m, 0.0) {
            Err(ModelError::Unreached { .. }) => {}
            other => panic!("expected Unreached, got {other:?}"),
        }
    }

    #[test]
    fn prufer_reconstruction_identity() {
        // α w = r sin_p θ and w' = r cos_p θ at every sample (bookkeeping).
        let m = params(2.5, -1.0, 3.0);
        let (traj, geom) = solve_model_ivp(&m, -0.7).unwrap();
        for s in traj.samples() {
            let r = s.log_r.exp();
            let (sp, cp) = m.p().sin_cos_p(s.theta);
            assert!((m.alpha() * s.w - r * sp).abs() < 1e-9 * (1.0 + r));
            assert!((s.dw - r * cp).abs() < 1e-9 * (1.0 + r));
        }
        assert!(geom.m_of_a > 0.0 && geom.m_of_a <= 1.0 + 1e-9);
    }

    #[test]
    fn odd_trajectory_is_normalized() {
        let m = params(3.0, -1.0, 6.0);
        let (traj, abar) = odd_trajectory(&m, &SolveOptions::default()).unwrap();
        let (lo, hi) = traj.span();
        assert!((lo + abar).abs() < 1e-10 && (hi - abar).abs() < 1e-10);
        assert!((traj.w(-abar) + 1.0).abs() < 1e-9);
        assert!((traj.w(abar) - 1.0).abs() < 1e-9);
        assert!(traj.w(0.0).abs() < 1e-10);
    }

    #[test]
    fn inverse_profile_round_trip() {
        let m = params(2.0, -1.0, 2.0);
        let (traj, geom) = solve_model_ivp(&m, 0.0).unwrap();
        let inv = inverse_profile(&traj).unwrap();
        assert!((inv.psi(traj.w(geom.a)).unwrap() - geom.a).abs() < 1e-9);
        assert!((inv.psi(traj.w(geom.b_of_a)).unwrap() - geom.b_of_a).abs() < 1e-9);
        for i in 1..20 {
            let t = geom.a + geom.delta_of_a * (i as f64) / 20.0;
            let psi = inv.psi(traj.w(t)).unwrap();
            assert!((psi - t).abs() < 1e-8, "round trip at t={t}: {psi}");
        }
        let (wlo, whi) = inv.height_range();
        assert!(inv.psi(wlo - 1.0).is_err());
        assert!(inv.psi(whi + 1.0).is_err());
    }

    #[test]
    fn inverse_profile_rejects_multi_branch() {
        let m = params(2.0, 0.0, 1.0);
        let tol = ToleranceSpec::default();
        // Spans θ from -π/2 past +π/2: two monotone branches.
        let traj = integrate_prufer(&m, 0.0, -m.p().half_pi_p(), 1.5 * m.p().pi_p(), &tol).unwrap();
        assert!(matches!(
            inverse_profile(&traj),
            Err(ModelError::NonMonotone { .. })
        ));
    }

    #[test]
    fn circular_case_inverse_matches_arcsin() {
        // p=2, κ=0, start at θ(0) = -π/2: w = sin(α t - π/2),
        // so Ψ(x) = (arcsin x + π/2)/α.
        let m = params(2.0, 0.0, 2.0);
        let (traj, _) = solve_model_ivp(&m, 0.0).unwrap();
        let inv = inverse_profile(&traj).unwrap();
        for &x in &[-0.9f64, -0.4, 0.0, 0.3, 0.8] {
            let expect = (x.asin() + std::f64::consts::FRAC_PI_2) / m.alpha();
            assert!((inv.psi(x).unwrap() - expect).abs() < 1e-9, "x={x}");
        }
    }
}
