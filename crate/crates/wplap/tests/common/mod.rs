//! Shared test oracles, independent of the library's solution paths.
//!
//! - `tanh_sinh`: double-exponential quadrature (handles the endpoint
//!   singularities of the p-trig defining integrals), used to cross-check
//!   π_p and arcsin_p against their integral definitions.
//! - `rk4` / `rk4_path`: fixed-step classical Runge–Kutta, used as the
//!   integration oracle for the Prüfer system and the p = 2 classical ODE.

#![allow(dead_code)]

/// Double-exponential (tanh-sinh) quadrature of `f` over `[a, b]`.
///
/// The integrand receives `(x, x - a, b - x)` with the endpoint distances
/// computed cancellation-free, so integrable endpoint singularities like
/// `(1 - x)^{-1/p}` can be evaluated stably from the distance argument.
pub fn tanh_sinh<F: Fn(f64, f64, f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> f64 {
    use std::f64::consts::FRAC_PI_2;
    let c = 0.5 * (a + b);
    let d = 0.5 * (b - a);
    // Node at parameter u: x = c + d tanh(z), z = (π/2) sinh u, with the
    // distances to the endpoints b - x = d (1 - tanh z) = 2d / (1 + e^{2z}).
    let eval = |u: f64| -> f64 {
        let z = FRAC_PI_2 * u.sinh();
        let w = FRAC_PI_2 * u.cosh() / z.cosh().powi(2);
        if !(w > 0.0) {
            return 0.0;
        }
        let dist_hi = 2.0 * d / (1.0 + (2.0 * z).exp());
        let dist_lo = 2.0 * d / (1.0 + (-2.0 * z).exp());
        if dist_hi <= 0.0 || dist_lo <= 0.0 {
            return 0.0;
        }
        let x = c + d * z.tanh();
        let v = f(x, dist_lo, dist_hi) * w;
        if v.is_finite() {
            v
        } else {
            0.0
        }
    };
    // Trapezoid in u with level doubling: T(h/2) reuses T(h) and adds the
    // odd nodes.
    let u_max = 5.0;
    let mut h = 1.0f64;
    let mut trap = eval(0.0);
    let mut k = 1;
    while (k as f64) * h <= u_max {
        trap += eval(k as f64 * h) + eval(-(k as f64) * h);
        k += 1;
    }
    trap *= h;
    let mut prev = f64::INFINITY;
    for _level in 0..10 {
        h *= 0.5;
        let mut sum = 0.0;
        let mut k = 1;
        while (k as f64) * h <= u_max {
            sum += eval(k as f64 * h) + eval(-(k as f64) * h);
            k += 2;
        }
        trap = 0.5 * trap + h * sum;
        let integral = d * trap;
        if (integral - prev).abs() <= tol * integral.abs().max(1e-300) {
            return integral;
        }
        prev = integral;
    }
    d * trap
}

/// Classical RK4 with `n` fixed steps from `t0` to `t1`.
pub fn rk4<F: Fn(f64, &[f64]) -> Vec<f64>>(f: &F, t0: f64, y0: &[f64], t1: f64, n: usize) -> Vec<f64> {
    let mut y = y0.to_vec();
    rk4_path(f, t0, &mut y, t1, n, |_, _| {});
    y
}

/// RK4 visiting every accepted node (including the start).
pub fn rk4_path<F: Fn(f64, &[f64]) -> Vec<f64>, V: FnMut(f64, &[f64])>(
    f: &F,
    t0: f64,
    y: &mut Vec<f64>,
    t1: f64,
    n: usize,
    mut visit: V,
) {
    let h = (t1 - t0) / n as f64;
    let mut t = t0;
    visit(t, y);
    let dim = y.len();
    for _ in 0..n {
        let k1 = f(t, y);
        let mut y2 = vec![0.0; dim];
        for i in 0..dim {
            y2[i] = y[i] + 0.5 * h * k1[i];
        }
        let k2 = f(t + 0.5 * h, &y2);
        for i in 0..dim {
            y2[i] = y[i] + 0.5 * h * k2[i];
        }
        let k3 = f(t + 0.5 * h, &y2);
        for i in 0..dim {
            y2[i] = y[i] + h * k3[i];
        }
        let k4 = f(t + h, &y2);
        for i in 0..dim {
            y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        t += h;
        visit(t, y);
    }
}

/// FD step for the model-equation residual check: balances dense-output
/// noise against the |cos_p θ|^{-k(p)} growth of the fourth derivative near
/// phase-critical points (stronger for larger p).
pub fn residual_step(alpha: f64, p: f64, lambda: f64, cos_theta: f64) -> f64 {
    let ex = (2.0f64 / 3.0).max((p - 1.0) / 2.0);
    3e-5 * cos_theta.abs().powf(ex)
        / alpha.max(1.0)
        / (lambda * (p - 1.0)).powf(1.0 / 3.0).max(1.0)
}
