//! Generalized (p-)trigonometric functions.
//!
//! For `1 < p < ∞` the p-sine is defined implicitly on `[-π_p/2, π_p/2]` by
//!
//! ```text
//! t = ∫_0^{sin_p t} (1 - s^p)^{-1/p} ds,
//! ```
//!
//! extended by the reflection `sin_p(t) = sin_p(π_p - t)` and `2π_p`-periodicity,
//! where the half-period is
//!
//! ```text
//! π_p = ∫_{-1}^{1} (1 - s^p)^{-1/p} ds = 2π / (p sin(π/p)).
//! ```
//!
//! Its derivative `cos_p = sin_p'` satisfies the Pythagorean-type identity
//! `|sin_p|^p + |cos_p|^p = 1`, and `arctan_p` inverts `tan_p = sin_p/cos_p`
//! with `d/dx arctan_p(x) = 1/(1 + |x|^p)`.
//!
//! Evaluation inverts the defining integral (an incomplete-beta-type integral)
//! with a bracketed Newton iteration. The integral itself is evaluated through
//! its exact binomial-series expansion, split at `x^p = 1/2` between the sine
//! side and the complementary cosine side so that both series are geometric
//! with ratio ≤ 1/2. All functions are pure; `PExponent` carries the per-p
//! constants and series coefficients so repeated calls are cheap.

use std::f64::consts::PI;

use thiserror::Error;

/// Errors from p-trigonometric constructors and helpers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum PtrigError {
    /// The exponent must satisfy `1 < p < ∞`.
    #[error("exponent p must be a finite real > 1, got {0}")]
    InvalidExponent(f64),
}

const SERIES_TERMS: usize = 72;
const NEWTON_MAX_ITERS: usize = 90;

/// A validated exponent `p > 1` together with derived constants.
///
/// Construction precomputes the half-period `π_p` and the series
/// coefficients used to evaluate the defining integral, so cloning is cheap
/// relative to rebuilding and evaluation does no allocation.
#[derive(Debug, Clone)]
pub struct PExponent {
    p: f64,
    pi_p: f64,
    half_pi_p: f64,
    /// Split abscissa `2^{-1/p}`: for `|x| ≤ x_split` the sine-side series is
    /// used, beyond it the complementary cosine-side series.
    x_split: f64,
    /// `arcsin_p(x_split)`, the phase at which the two series sides meet.
    t_split: f64,
    /// Coefficients of `F(x) = x Σ_k fc[k] (x^p)^k` with `F = arcsin_p`.
    f_coeffs: [f64; SERIES_TERMS],
    /// Coefficients of `G(y) = y^{p-1} Σ_k gc[k] (y^p)^k` with
    /// `G(y) = π_p/2 - arcsin_p((1-y^p)^{1/p})`.
    g_coeffs: [f64; SERIES_TERMS],
}

impl PExponent {
    /// Validates `p` and precomputes the derived constants.
    pub fn new(p: f64) -> Result<Self, PtrigError> {
        if !(p.is_finite() && p > 1.0) {
            return Err(PtrigError::InvalidExponent(p));
        }
        let pi_p = 2.0 * PI / (p * (PI / p).sin());

        // (1 - z)^{-a} = Σ_k (a)_k / k! z^k with a = 1/p (sine side) and
        // a = (p-1)/p (cosine side); termwise integration gives the 1/(pk+1)
        // and 1/(pk+p-1) denominators.
        let mut f_coeffs = [0.0; SERIES_TERMS];
        let mut g_coeffs = [0.0; SERIES_TERMS];
        let (mut cf, mut cg) = (1.0, 1.0);
        for k in 0..SERIES_TERMS {
            let kf = k as f64;
            f_coeffs[k] = cf / (p * kf + 1.0);
            g_coeffs[k] = cg / (p * kf + p - 1.0);
            cf *= (1.0 / p + kf) / (kf + 1.0);
            cg *= ((p - 1.0) / p + kf) / (kf + 1.0);
        }

        let x_split = 2f64.powf(-1.0 / p);
        let mut out = Self {
            p,
            pi_p,
            half_pi_p: 0.5 * pi_p,
            x_split,
            t_split: 0.0,
            f_coeffs,
            g_coeffs,
        };
        out.t_split = out.arcsin_principal(x_split);
        out
            .t_split
            .is_finite()
            .then_some(out)
            .ok_or(PtrigError::InvalidExponent(p))
    }

    /// The exponent value.
    #[inline]
    pub fn p(&self) -> f64 {
        self.p
    }

    /// The generalized half-period `π_p = 2π / (p sin(π/p))`.
    #[inline]
    pub fn pi_p(&self) -> f64 {
        self.pi_p
    }

    /// `π_p / 2`, the quarter-period where `sin_p = 1`.
    #[inline]
    pub fn half_pi_p(&self) -> f64 {
        self.half_pi_p
    }

    /// `arcsin_p(x)` for `x ∈ [0, 1]`: the defining integral
    /// `∫_0^x (1-s^p)^{-1/p} ds` evaluated by series, using the
    /// complementary side for `x > 2^{-1/p}`.
    fn arcsin_principal(&self, x: f64) -> f64 {
        debug_assert!((0.0..=1.0).contains(&x));
        if x <= self.x_split {
            self.f_series(x)
        } else {
            // t_split fallback path during construction: half_pi_p is set.
            let y = (1.0 - x.powf(self.p)).max(0.0).powf(1.0 / self.p);
            self.half_pi_p - self.g_series(y)
        }
    }

    /// The sine-side integral `F(x) = ∫_0^x (1-s^p)^{-1/p} ds`, `x^p ≤ 1/2`.
    fn f_series(&self, x: f64) -> f64 {
        let z = x.powf(self.p);
        let mut acc = 0.0;
        for k in (0..SERIES_TERMS).rev() {
            acc = acc * z + self.f_coeffs[k];
        }
        x * acc
    }

    /// The cosine-side integral `G(y) = ∫_0^y u^{p-2} (1-u^p)^{-(p-1)/p} du`,
    /// which equals `π_p/2 - arcsin_p((1-y^p)^{1/p})` for `y^p ≤ 1/2`.
    fn g_series(&self, y: f64) -> f64 {
        let z = y.powf(self.p);
        let mut acc = 0.0;
        for k in (0..SERIES_TERMS).rev() {
            acc = acc * z + self.g_coeffs[k];
        }
        y.powf(self.p - 1.0) * acc
    }

    /// Inverts `arcsin_p` on the principal branch: given `t ∈ [0, π_p/2]`
    /// returns `(sin_p t, cos_p t)` with `cos_p ≥ 0`.
    fn sin_cos_principal(&self, t: f64) -> (f64, f64) {
        debug_assert!((-1e-12..=self.half_pi_p * (1.0 + 1e-12)).contains(&t));
        if t <= 0.0 {
            return (0.0, 1.0);
        }
        if t >= self.half_pi_p {
            return (1.0, 0.0);
        }
        if t <= self.t_split {
            // Solve F(x) = t by bracketed Newton; F' = (1-x^p)^{-1/p} ≥ 1.
            let mut lo = 0.0;
            let mut hi = self.x_split;
            let mut x = t.min(self.x_split);
            for _ in 0..NEWTON_MAX_ITERS {
                let fx = self.f_series(x) - t;
                if fx == 0.0 {
                    break;
                }
                if fx > 0.0 {
                    hi = x;
                } else {
                    lo = x;
                }
                let slope_inv = (1.0 - x.powf(self.p)).powf(1.0 / self.p);
                let mut xn = x - fx * slope_inv;
                if !(xn > lo && xn < hi) {
                    xn = 0.5 * (lo + hi);
                }
                if (xn - x).abs() <= 2e-16 * (1.0 + x.abs()) {
                    x = xn;
                    break;
                }
                x = xn;
            }
            let c = (1.0 - x.powf(self.p)).max(0.0).powf(1.0 / self.p);
            (x, c)
        } else {
            // Near the quarter period solve G(y) = π_p/2 - t for y = cos_p t,
            // which keeps the small quantity (the cosine) direct.
            let tau = self.half_pi_p - t;
            let mut lo = 0.0;
            let mut hi = self.x_split;
            // Leading-order G(y) ≈ y^{p-1}/(p-1).
            let mut y = ((self.p - 1.0) * tau)
                .powf(1.0 / (self.p - 1.0))
                .clamp(1e-300, self.x_split);
            for _ in 0..NEWTON_MAX_ITERS {
                let gy = self.g_series(y) - tau;
                if gy == 0.0 {
                    break;
                }
                if gy > 0.0 {
                    hi = y;
                } else {
                    lo = y;
                }
                let zp = 1.0 - y.powf(self.p);
                let slope_inv = y.powf(2.0 - self.p) * zp.powf((self.p - 1.0) / self.p);
                let mut yn = y - gy * slope_inv;
                if !(slope_inv.is_finite() && yn > lo && yn < hi) {
                    yn = 0.5 * (lo + hi);
                }
                if (yn - y).abs() <= 2e-16 * (1.0 + y.abs()) {
                    y = yn;
                    break;
                }
                y = yn;
            }
            let s = (1.0 - y.powf(self.p)).max(0.0).powf(1.0 / self.p);
            (s, y)
        }
    }

    /// `sin_p(t)` and `cos_p(t)` together (one inversion); valid for all real
    /// `t` via `2π_p`-periodic reduction and the reflection rule.
    pub fn sin_cos_p(&self, t: f64) -> (f64, f64) {
        // Reduce to τ ∈ [-π_p/2, 3π_p/2).
        let period = 2.0 * self.pi_p;
        let mut tau = (t + self.half_pi_p).rem_euclid(period) - self.half_pi_p;
        if tau >= 1.5 * self.pi_p {
            tau -= period;
        }
        let (reduced, cos_sign) = if tau <= self.half_pi_p {
            (tau, 1.0)
        } else {
            (self.pi_p - tau, -1.0)
        };
        let (s, c) = if reduced >= 0.0 {
            self.sin_cos_principal(reduced)
        } else {
            let (s, c) = self.sin_cos_principal(-reduced);
            (-s, c)
        };
        (s, cos_sign * c)
    }

    /// The p-sine, implicitly defined by the incomplete-beta-type integral.
    #[inline]
    pub fn sin_p(&self, t: f64) -> f64 {
        self.sin_cos_p(t).0
    }

    /// The p-cosine `cos_p = d/dt sin_p`; satisfies `|sin_p|^p + |cos_p|^p = 1`.
    #[inline]
    pub fn cos_p(&self, t: f64) -> f64 {
        self.sin_cos_p(t).1
    }

    /// `tan_p = sin_p / cos_p` (±∞ at odd multiples of `π_p/2`).
    #[inline]
    pub fn tan_p(&self, t: f64) -> f64 {
        let (s, c) = self.sin_cos_p(t);
        s / c
    }

    /// Inverse of `tan_p` on `(-π_p/2, π_p/2)`; `±∞` map to `±π_p/2`.
    pub fn arctan_p(&self, x: f64) -> f64 {
        if x.is_nan() {
            return f64::NAN;
        }
        let ax = x.abs();
        let t = if ax.is_infinite() {
            self.half_pi_p
        } else if ax <= 1.0 {
            // sin_p(arctan_p x) = x (1+x^p)^{-1/p}; x ≤ 1 keeps it on the
            // sine-side series.
            self.f_series(ax / (1.0 + ax.powf(self.p)).powf(1.0 / self.p))
        } else {
            // For x > 1 the cosine (1+x^p)^{-1/p} is the small, well-scaled
            // quantity: go through the complementary integral.
            self.half_pi_p - self.g_series((1.0 + ax.powf(self.p)).powf(-1.0 / self.p))
        };
        t.copysign(x)
    }

    /// `arcsin_p(x)` for `x ∈ [-1, 1]`.
    pub fn arcsin_p(&self, x: f64) -> f64 {
        assert!(
            (-1.0..=1.0).contains(&x),
            "arcsin_p argument must lie in [-1, 1], got {x}"
        );
        self.arcsin_principal(x.abs()).copysign(x)
    }
}

/// Signed power `x ↦ sign(x) |x|^q`, the odd, increasing extension of `x^q`.
///
/// Convention: `odd_power(0, 0) = 0`, so that `p = 2` specializations are
/// exact and the map stays odd. Panics for `q < 0` or NaN `q`.
#[inline]
pub fn odd_power(x: f64, q: f64) -> f64 {
    assert!(q >= 0.0, "odd_power exponent must be ≥ 0, got {q}");
    if x == 0.0 {
        return 0.0;
    }
    x.abs().powf(q).copysign(x)
}
