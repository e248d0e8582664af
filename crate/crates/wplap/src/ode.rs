//! Adaptive Dormand–Prince 5(4) integration with dense output and event
//! detection.
//!
//! The integrator is deliberately small: a fixed 7-stage FSAL tableau, a
//! standard PI-free step controller, the classical quartic dense-output
//! interpolant (continuous and C¹ across steps, since it matches value and
//! slope at both step ends), and first-crossing event location by bisection
//! on the dense interpolant. Both integration directions are supported;
//! internally everything is phrased in the signed step.

use thiserror::Error;

/// Relative/absolute tolerance pair plus a step budget.
#[derive(Debug, Clone, Copy)]
pub struct ToleranceSpec {
    pub rel: f64,
    pub abs: f64,
    pub max_steps: usize,
}

impl ToleranceSpec {
    pub fn new(rel: f64, abs: f64) -> Self {
        Self { rel, abs, max_steps: 1_000_000 }
    }
}

impl Default for ToleranceSpec {
    /// Defaults used for all phase-plane integrations: rel 1e-10, abs 1e-12.
    fn default() -> Self {
        Self::new(1e-10, 1e-12)
    }
}

/// Integration failures.
#[derive(Debug, Clone, Error)]
pub enum OdeError {
    #[error("step size underflow at t = {t} (|h| = {h:.3e})")]
    StepUnderflow { t: f64, h: f64 },
    #[error("step budget exhausted after {steps} steps at t = {t}")]
    StepBudget { t: f64, steps: usize },
    #[error("invalid integration span: t0 = {t0}, t_end = {t_end}")]
    BadSpan { t0: f64, t_end: f64 },
}

/// An integration failure together with the dense solution accumulated up to
/// the last accepted step, when any step was accepted.
#[derive(Debug, Clone)]
pub struct OdeFailure<const N: usize> {
    pub error: OdeError,
    pub partial: Option<DenseSolution<N>>,
}

impl<const N: usize> std::fmt::Display for OdeFailure<N> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.error.fmt(f)
    }
}

impl<const N: usize> std::error::Error for OdeFailure<N> {}

/// A right-hand side `y' = f(t, y)` of fixed dimension `N`.
pub trait OdeSystem<const N: usize> {
    fn rhs(&self, t: f64, y: &[f64; N]) -> [f64; N];
}

impl<F, const N: usize> OdeSystem<N> for F
where
    F: Fn(f64, &[f64; N]) -> [f64; N],
{
    fn rhs(&self, t: f64, y: &[f64; N]) -> [f64; N] {
        self(t, y)
    }
}

/// One accepted step with its dense-output coefficients.
#[derive(Debug, Clone)]
struct DenseStep<const N: usize> {
    t0: f64,
    h: f64,
    cont: [[f64; N]; 5],
}

impl<const N: usize> DenseStep<N> {
    /// Evaluate the quartic interpolant at fraction `sigma ∈ [0, 1]`.
    fn eval(&self, sigma: f64) -> [f64; N] {
        let s1 = 1.0 - sigma;
        let mut y = [0.0; N];
        for i in 0..N {
            let c = &self.cont;
            y[i] = c[0][i] + sigma * (c[1][i] + s1 * (c[2][i] + sigma * (c[3][i] + s1 * c[4][i])));
        }
        y
    }
}

/// Piecewise dense solution over an integration span.
///
/// Steps are stored in integration order; `eval` accepts any `t` in the
/// covered span regardless of direction. Merging a backward and a forward
/// solution from a common anchor yields a single evaluable object.
#[derive(Debug, Clone)]
pub struct DenseSolution<const N: usize> {
    steps: Vec<DenseStep<N>>,
    t0: f64,
    t_end: f64,
    y_end: [f64; N],
}

impl<const N: usize> DenseSolution<N> {
    pub fn t_start(&self) -> f64 {
        self.t0
    }

    pub fn t_end(&self) -> f64 {
        self.t_end
    }

    pub fn y_end(&self) -> [f64; N] {
        self.y_end
    }

    /// Lower/upper bounds of the covered `t` interval.
    pub fn span(&self) -> (f64, f64) {
        (self.t0.min(self.t_end), self.t0.max(self.t_end))
    }

    /// Endpoints of every accepted step, in integration order (includes both
    /// span ends).
    pub fn step_nodes(&self) -> Vec<f64> {
        let mut nodes: Vec<f64> = self.steps.iter().map(|s| s.t0).collect();
        nodes.push(self.t_end);
        nodes
    }

    /// Dense evaluation at `t` (clamped to the covered span).
    pub fn eval(&self, t: f64) -> [f64; N] {
        debug_assert!(!self.steps.is_empty());
        let forward = self.t_end >= self.t0;
        // Binary search for the step containing t.
        let (mut lo, mut hi) = (0usize, self.steps.len() - 1);
        while lo < hi {
            let mid = (lo + hi + 1) / 2;
            let starts_before = if forward {
                self.steps[mid].t0 <= t
            } else {
                self.steps[mid].t0 >= t
            };
            if starts_before {
                lo = mid;
            } else {
                hi = mid - 1;
            }
        }
        let step = &self.steps[lo];
        let sigma = ((t - step.t0) / step.h).clamp(0.0, 1.0);
        step.eval(sigma)
    }

    /// Truncate the solution at `t_cut` (must lie inside the span), fixing the
    /// final state to the dense value there.
    fn truncate(&mut self, t_cut: f64) {
        let forward = self.t_end >= self.t0;
        self.steps.retain(|s| {
            if forward {
                s.t0 < t_cut
            } else {
                s.t0 > t_cut
            }
        });
        if self.steps.is_empty() {
            // Degenerate: event inside the very first step; keep one step.
            // (Handled by caller never truncating before the first node.)
        }
        self.y_end = self.eval_last(t_cut);
        self.t_end = t_cut;
    }

    fn eval_last(&self, t: f64) -> [f64; N] {
        match self.steps.last() {
            Some(step) => {
                let sigma = ((t - step.t0) / step.h).clamp(0.0, 1.0);
                step.eval(sigma)
            }
            None => self.y_end,
        }
    }

    /// Concatenate two solutions that share an anchor point, producing one
    /// solution ordered from `other`'s far end to `self`'s far end.
    ///
    /// Intended use: `forward.merged_with_backward(backward)` where both were
    /// integrated from the same `t0`. The result spans the union and keeps
    /// each side's interpolant.
    pub fn merged_with_backward(&self, backward: &DenseSolution<N>) -> DenseSolution<N> {
        assert!(
            (self.t0 - backward.t0).abs() <= 1e-12 * (1.0 + self.t0.abs()),
            "merge requires a common anchor"
        );
        // Reverse the backward steps into forward order.
        let mut steps: Vec<DenseStep<N>> = backward
            .steps
            .iter()
            .rev()
            .map(|s| DenseStep { t0: s.t0 + s.h, h: -s.h, cont: flip_cont(&s.cont) })
            .collect();
        steps.extend(self.steps.iter().cloned());
        DenseSolution {
            steps,
            t0: backward.t_end,
            t_end: self.t_end,
            y_end: self.y_end,
        }
    }
}

/// Rewrites dense coefficients so the interpolant runs in the opposite
/// direction: q(σ) = p(1-σ).
fn flip_cont<const N: usize>(c: &[[f64; N]; 5]) -> [[f64; N]; 5] {
    // p(σ)  = c0 + σ c1 + σ(1-σ) c2 + σ²(1-σ) c3 + σ²(1-σ)² c4
    // p(1-σ) = (c0+c1) - σ c1 + σ(1-σ)(c2 + c3) - σ(1-σ)σ c3 + σ²(1-σ)² c4
    let mut out = [[0.0; N]; 5];
    for i in 0..N {
        out[0][i] = c[0][i] + c[1][i];
        out[1][i] = -c[1][i];
        out[2][i] = c[2][i] + c[3][i];
        out[3][i] = -c[3][i];
        out[4][i] = c[4][i];
    }
    out
}

/// A located zero crossing of the event function.
#[derive(Debug, Clone, Copy)]
pub struct EventHit<const N: usize> {
    pub t: f64,
    pub y: [f64; N],
}

/// Integration outcome: the dense solution plus the terminating event, if an
/// event function was supplied and fired.
#[derive(Debug, Clone)]
pub struct Integration<const N: usize> {
    pub solution: DenseSolution<N>,
    pub event: Option<EventHit<N>>,
}

// Dormand–Prince 5(4) tableau.
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;
const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
// Error coefficients b5 - b4.
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;
// Dense-output weights for the quartic interpolant.
const D1: f64 = -12715105075.0 / 11282082432.0;
const D3: f64 = 87487479700.0 / 32700410799.0;
const D4: f64 = -10690763975.0 / 1880347072.0;
const D5: f64 = 701980252875.0 / 199316789632.0;
const D6: f64 = -1453857185.0 / 822651844.0;
const D7: f64 = 69997945.0 / 29380423.0;

/// Integrate `y' = f(t, y)` from `t0` to `t_end` (either direction), keeping
/// dense output for the whole span.
///
/// If `event` is supplied, integration stops at the first sign change of the
/// event function along the trajectory; the returned solution is truncated at
/// the located crossing. Event roots are resolved on the dense interpolant by
/// bisection to ~1e-14 of the step length.
pub fn integrate<S: OdeSystem<N>, const N: usize>(
    system: &S,
    t0: f64,
    y0: [f64; N],
    t_end: f64,
    tol: &ToleranceSpec,
    mut event: Option<&mut dyn FnMut(f64, &[f64; N]) -> f64>,
) -> Result<Integration<N>, OdeFailure<N>> {
    let fail = |error: OdeError, steps: Vec<DenseStep<N>>, t: f64, y: [f64; N]| {
        let partial = (!steps.is_empty())
            .then(|| DenseSolution { steps, t0, t_end: t, y_end: y });
        OdeFailure { error, partial }
    };
    if !(t_end - t0).is_finite() || t_end == t0 {
        return Err(fail(OdeError::BadSpan { t0, t_end }, Vec::new(), t0, y0));
    }
    let dir = (t_end - t0).signum();
    let span = (t_end - t0).abs();

    let mut t = t0;
    let mut y = y0;
    let mut k1 = system.rhs(t, &y);

    // Initial step: conservative fraction of the span, bounded by the scale
    // suggested by the initial slope.
    let mut h = {
        let mut scale: f64 = 1e-4;
        for i in 0..N {
            let s = (tol.abs + tol.rel * y[i].abs()) / (k1[i].abs() + 1e-30);
            scale = scale.max(1e-8).min(s);
        }
        dir * (span * 1e-3).min(scale.max(1e-10))
    };

    let mut steps = Vec::new();
    let mut g_prev = event.as_mut().map(|g| g(t, &y));
    let mut n_steps = 0usize;

    loop {
        if n_steps >= tol.max_steps {
            return Err(fail(OdeError::StepBudget { t, steps: n_steps }, steps, t, y));
        }
        // Do not overshoot the endpoint.
        if (t_end - (t + h)) * dir < 0.0 {
            h = t_end - t;
        }
        if h.abs() < 1e-14 * (1.0 + t.abs()) {
            return Err(fail(OdeError::StepUnderflow { t, h }, steps, t, y));
        }

        // Seven stages (FSAL: k7 is the slope at the candidate endpoint).
        let at = |y: &[f64; N], coeffs: &[(f64, &[f64; N])]| {
            let mut out = *y;
            for i in 0..N {
                for (a, k) in coeffs {
                    out[i] += h * a * k[i];
                }
            }
            out
        };
        let k2 = system.rhs(t + C2 * h, &at(&y, &[(A21, &k1)]));
        let k3 = system.rhs(t + C3 * h, &at(&y, &[(A31, &k1), (A32, &k2)]));
        let k4 = system.rhs(t + C4 * h, &at(&y, &[(A41, &k1), (A42, &k2), (A43, &k3)]));
        let k5 = system.rhs(
            t + C5 * h,
            &at(&y, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)]),
        );
        let k6 = system.rhs(
            t + h,
            &at(&y, &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)]),
        );
        let y_new = at(
            &y,
            &[(A71, &k1), (A73, &k3), (A74, &k4), (A75, &k5), (A76, &k6)],
        );
        let k7 = system.rhs(t + h, &y_new);

        // Scaled error norm.
        let mut err_sq = 0.0;
        for i in 0..N {
            let e = h
                * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
            let sk = tol.abs + tol.rel * y[i].abs().max(y_new[i].abs());
            err_sq += (e / sk) * (e / sk);
        }
        let err = (err_sq / N as f64).sqrt();

        if err <= 1.0 {
            // Accept: build dense coefficients.
            let mut cont = [[0.0; N]; 5];
            for i in 0..N {
                let ydiff = y_new[i] - y[i];
                let bspl = h * k1[i] - ydiff;
                cont[0][i] = y[i];
                cont[1][i] = ydiff;
                cont[2][i] = bspl;
                cont[3][i] = ydiff - h * k7[i] - bspl;
                cont[4][i] = h
                    * (D1 * k1[i] + D3 * k3[i] + D4 * k4[i] + D5 * k5[i] + D6 * k6[i]
                        + D7 * k7[i]);
            }
            let step = DenseStep { t0: t, h, cont };

            // Event check across the accepted step.
            if let Some(g) = event.as_mut() {
                let g_new = g(t + h, &y_new);
                let g_old = g_prev.expect("event state initialized");
                if g_old == 0.0 && n_steps == 0 {
                    // Starting exactly on the event is not a crossing.
                } else if g_old * g_new <= 0.0 && (g_old != 0.0 || g_new != 0.0) {
                    let hit = locate_event(&step, g, g_old, g_new);
                    steps.push(step);
                    let mut solution = DenseSolution {
                        steps,
                        t0,
                        t_end: t + h,
                        y_end: y_new,
                    };
                    solution.truncate(hit.t);
                    return Ok(Integration { solution, event: Some(hit) });
                }
                g_prev = Some(g_new);
            }

            steps.push(step);
            t += h;
            y = y_new;
            k1 = k7;
            n_steps += 1;

            if (t_end - t) * dir <= 0.0 || (t_end - t).abs() < 1e-14 * (1.0 + t.abs()) {
                return Ok(Integration {
                    solution: DenseSolution { steps, t0, t_end: t, y_end: y },
                    event: None,
                });
            }
            let fac = (0.9 * err.max(1e-10).powf(-0.2)).clamp(0.2, 5.0);
            h *= fac;
        } else {
            let fac = (0.9 * err.powf(-0.2)).clamp(0.2, 1.0);
            h *= fac;
        }
    }
}

/// Bisection for the event root inside one accepted step.
fn locate_event<const N: usize>(
    step: &DenseStep<N>,
    g: &mut dyn FnMut(f64, &[f64; N]) -> f64,
    g_lo: f64,
    g_hi: f64,
) -> EventHit<N> {
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    let (mut glo, _ghi) = (g_lo, g_hi);
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        let y = step.eval(mid);
        let gm = g(step.t0 + mid * step.h, &y);
        if gm == 0.0 {
            lo = mid;
            hi = mid;
            break;
        }
        if gm * glo > 0.0 {
            lo = mid;
            glo = gm;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-15 {
            break;
        }
    }
    let sigma = 0.5 * (lo + hi);
    EventHit { t: step.t0 + sigma * step.h, y: step.eval(sigma) }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential_decay_forward_and_backward() {
        let sys = |_t: f64, y: &[f64; 1]| [-y[0]];
        let tol = ToleranceSpec::default();
        let fwd = integrate(&sys, 0.0, [1.0], 3.0, &tol, None).unwrap();
        assert!((fwd.solution.y_end()[0] - (-3.0f64).exp()).abs() < 1e-9);
        let bwd = integrate(&sys, 0.0, [1.0], -2.0, &tol, None).unwrap();
        assert!((bwd.solution.y_end()[0] - 2.0f64.exp()).abs() < 1e-8);
    }

    #[test]
    fn dense_output_matches_solution_interior() {
        let sys = |t: f64, y: &[f64; 2]| [y[1], -y[0] + 0.1 * t];
        let tol = ToleranceSpec::default();
        let run = integrate(&sys, 0.0, [1.0, 0.0], 8.0, &tol, None).unwrap();
        // Exact: y = cos t + 0.1 (t - sin t), y' = -sin t + 0.1(1 - cos t)
        for i in 0..200 {
            let t = 8.0 * (i as f64 + 0.5) / 200.0;
            let y = run.solution.eval(t);
            let exact = t.cos() + 0.1 * (t - t.sin());
            assert!((y[0] - exact).abs() < 1e-8, "t={t}: {} vs {exact}", y[0]);
        }
    }

    #[test]
    fn event_detection_locates_first_crossing() {
        // y' = cos t from y(0)=0 crosses y = 0.5 first at t = π/6.
        let sys = |t: f64, _y: &[f64; 1]| [t.cos()];
        let tol = ToleranceSpec::default();
        let mut ev = |_t: f64, y: &[f64; 1]| y[0] - 0.5;
        let run = integrate(&sys, 0.0, [0.0], 10.0, &tol, Some(&mut ev)).unwrap();
        let hit = run.event.expect("event fires");
        assert!((hit.t - std::f64::consts::PI / 6.0).abs() < 1e-8);
        assert!((run.solution.t_end() - hit.t).abs() < 1e-12);
    }

    #[test]
    fn backward_event() {
        let sys = |_t: f64, _y: &[f64; 1]| [1.0];
        let tol = ToleranceSpec::default();
        let mut ev = |_t: f64, y: &[f64; 1]| y[0] + 1.5;
        let run = integrate(&sys, 0.0, [0.0], -10.0, &tol, Some(&mut ev)).unwrap();
        let hit = run.event.expect("event fires");
        assert!((hit.t + 1.5).abs() < 1e-12);
    }

    #[test]
    fn merged_solution_covers_both_sides() {
        let sys = |t: f64, _y: &[f64; 1]| [t.cos()];
        let tol = ToleranceSpec::default();
        let fwd = integrate(&sys, 0.0, [0.0], 2.0, &tol, None).unwrap().solution;
        let bwd = integrate(&sys, 0.0, [0.0], -2.0, &tol, None).unwrap().solution;
        let merged = fwd.merged_with_backward(&bwd);
        assert_eq!(merged.span(), (-2.0, 2.0));
        for i in 0..100 {
            let t = -2.0 + 4.0 * (i as f64) / 99.0;
            assert!((merged.eval(t)[0] - t.sin()).abs() < 1e-9, "t={t}");
        }
    }
}
