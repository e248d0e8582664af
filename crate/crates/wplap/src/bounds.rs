//! Theorem-level lower bounds with regime guards.
//!
//! Three evaluators and a combined report:
//!
//! - the sharp model bound `λ_{p,f} ≥ μ_p(κ, D)`, proved for `1 < p ≤ 2` or
//!   `κ ≤ 0`; for `p > 2` and `κ > 0` the model value is still computable but
//!   only conjectured, and is reported tagged as such, never merged into the
//!   proved best;
//! - the Lichnerowicz-type bound `λ_{p,f} ≥ (κ/(p-1))^{p/2}` for `p ≥ 2`,
//!   `κ > 0` (no diameter needed);
//! - the Wang–Li comparison value `κ^{p/2}/(p-1)^{p-1}`, which the
//!   Lichnerowicz-type bound dominates for `p ≥ 2` (equality at `p = 2`).

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::eigensolve::{mu_closed_form_kappa0, mu_shoot, EigenError, EigenQuery};
use crate::ptrig::PExponent;

#[derive(Debug, Error)]
pub enum BoundsError {
    #[error(transparent)]
    Eigen(#[from] EigenError),
    #[error("lichnerowicz_bound requires p >= 2 and kappa > 0 (got p = {p}, kappa = {kappa})")]
    LichnerowiczRegime { p: f64, kappa: f64 },
    #[error("wang_li_bound requires kappa > 0 (got kappa = {kappa})")]
    WangLiRegime { kappa: f64 },
    #[error("a diameter is required outside the Lichnerowicz-only regime (p = {p}, kappa = {kappa})")]
    MissingDiameter { p: f64, kappa: f64 },
}

/// Hypothesis regime of a `(p, κ)` pair (with or without a diameter).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Regime {
    /// `1 < p ≤ 2` or `κ ≤ 0`: the sharp model bound is proved.
    SharpProved,
    /// `p > 2` and `κ > 0`: the model value is conjectured only.
    SharpConjectured,
    /// `p ≥ 2`, `κ > 0`, no diameter given: only the Lichnerowicz-type
    /// bound applies.
    LichnerowiczOnly,
}

/// A sharp-bound value tagged by its epistemic status.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", content = "value", rename_all = "kebab-case")]
pub enum SharpValue {
    Proved(f64),
    Conjectured(f64),
    NotAvailable,
}

impl SharpValue {
    pub fn proved(&self) -> Option<f64> {
        match *self {
            SharpValue::Proved(v) => Some(v),
            _ => None,
        }
    }

    pub fn value(&self) -> Option<f64> {
        match *self {
            SharpValue::Proved(v) | SharpValue::Conjectured(v) => Some(v),
            SharpValue::NotAvailable => None,
        }
    }
}

/// Combined report for one `(p, κ[, D])` query.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BoundReport {
    pub p: f64,
    pub kappa: f64,
    #[serde(rename = "D", skip_serializing_if = "Option::is_none")]
    pub diameter: Option<f64>,
    pub sharp_mu: SharpValue,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lichnerowicz: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wang_li: Option<f64>,
    /// Largest of the *proved* bounds available for this query.
    pub best: f64,
    pub regime: Regime,
}

/// True iff the sharp model bound is proved for this `(p, κ)`.
pub fn sharp_regime(p: f64, kappa: f64) -> bool {
    p <= 2.0 || kappa <= 0.0
}

/// The sharp model bound `μ_p(κ, D)`, tagged by regime.
///
/// Delegates to the shooting solver (closed form for `κ = 0`); outside the
/// proved regime the value is computed anyway but returned as
/// [`SharpValue::Conjectured`] — a tagged result, never a silent number.
pub fn sharp_bound(query: &EigenQuery, tol: f64) -> Result<SharpValue, BoundsError> {
    let value = if query.kappa == 0.0 {
        mu_closed_form_kappa0(&query.p, query.diameter)
    } else {
        mu_shoot(query, tol)?.mu
    };
    if sharp_regime(query.p.p(), query.kappa) {
        Ok(SharpValue::Proved(value))
    } else {
        Ok(SharpValue::Conjectured(value))
    }
}

/// Lichnerowicz-type bound `(κ/(p-1))^{p/2}` for `p ≥ 2`, `κ > 0`.
pub fn lichnerowicz_bound(p: &PExponent, kappa: f64) -> Result<f64, BoundsError> {
    if p.p() < 2.0 || kappa <= 0.0 {
        return Err(BoundsError::LichnerowiczRegime { p: p.p(), kappa });
    }
    Ok((kappa / (p.p() - 1.0)).powf(0.5 * p.p()))
}

/// Wang–Li comparison value `κ^{p/2} / (p-1)^{p-1}` for `κ > 0`.
pub fn wang_li_bound(p: &PExponent, kappa: f64) -> Result<f64, BoundsError> {
    if kappa <= 0.0 {
        return Err(BoundsError::WangLiRegime { kappa });
    }
    Ok(kappa.powf(0.5 * p.p()) / (p.p() - 1.0).powf(p.p() - 1.0))
}

/// Assemble the full report for `(p, κ)` with an optional diameter.
///
/// Without a diameter only the Lichnerowicz-only regime (`p ≥ 2`, `κ > 0`)
/// is answerable.
pub fn bound_report(
    p: &PExponent,
    kappa: f64,
    diameter: Option<f64>,
    tol: f64,
) -> Result<BoundReport, BoundsError> {
    let lichnerowicz = if p.p() >= 2.0 && kappa > 0.0 {
        Some(lichnerowicz_bound(p, kappa)?)
    } else {
        None
    };
    let wang_li = if kappa > 0.0 { Some(wang_li_bound(p, kappa)?) } else { None };

    let (sharp_mu, regime) = match diameter {
        Some(d) => {
            let query = EigenQuery::new(p.clone(), kappa, d)?;
            let sharp = sharp_bound(&query, tol)?;
            let regime = if sharp_regime(p.p(), kappa) {
                Regime::SharpProved
            } else {
                Regime::SharpConjectured
            };
            (sharp, regime)
        }
        None => {
            if lichnerowicz.is_none() {
                return Err(BoundsError::MissingDiameter { p: p.p(), kappa });
            }
            (SharpValue::NotAvailable, Regime::LichnerowiczOnly)
        }
    };

    let mut best = f64::NEG_INFINITY;
    if let Some(v) = sharp_mu.proved() {
        best = best.max(v);
    }
    if let Some(v) = lichnerowicz {
        best = best.max(v);
    }
    Ok(BoundReport {
        p: p.p(),
        kappa,
        diameter,
        sharp_mu,
        lichnerowicz,
        wang_li,
        best,
        regime,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pexp(p: f64) -> PExponent {
        PExponent::new(p).unwrap()
    }

    #[test]
    fn lichnerowicz_values() {
        assert!((lichnerowicz_bound(&pexp(2.0), 1.0).unwrap() - 1.0).abs() < 1e-15);
        assert!((lichnerowicz_bound(&pexp(4.0), 3.0).unwrap() - 1.0).abs() < 1e-15);
        assert!((lichnerowicz_bound(&pexp(3.0), 2.0).unwrap() - 1.0).abs() < 1e-15);
        assert!(lichnerowicz_bound(&pexp(1.5), 1.0).is_err());
        assert!(lichnerowicz_bound(&pexp(3.0), -1.0).is_err());
    }

    #[test]
    fn wang_li_values() {
        assert!((wang_li_bound(&pexp(2.0), 1.0).unwrap() - 1.0).abs() < 1e-15);
        assert!((wang_li_bound(&pexp(4.0), 3.0).unwrap() - 1.0 / 3.0).abs() < 1e-15);
        let expect = 2f64.powf(1.5) / 4.0;
        assert!((wang_li_bound(&pexp(3.0), 2.0).unwrap() - expect).abs() < 1e-15);
        assert!((expect - 0.7071).abs() < 1e-4);
        assert!(wang_li_bound(&pexp(3.0), 0.0).is_err());
    }

    #[test]
    fn dominance_on_grid_with_equality_at_p2() {
        for i in 0..10 {
            let p = 2.0 + 0.3 * i as f64;
            let pe = pexp(p);
            for j in 0..10 {
                let kappa = 0.25 + 0.5 * j as f64;
                let lich = lichnerowicz_bound(&pe, kappa).unwrap();
                let wl = wang_li_bound(&pe, kappa).unwrap();
                assert!(lich >= wl - 1e-12, "dominance fails at p={p} κ={kappa}");
                if i == 0 {
                    assert!((lich - wl).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn sharp_bound_classical_value() {
        // p=2, κ=0, D=π: the Zhong–Yang value 1.
        let q = EigenQuery::new(pexp(2.0), 0.0, std::f64::consts::PI).unwrap();
        match sharp_bound(&q, 1e-10).unwrap() {
            SharpValue::Proved(v) => assert!((v - 1.0).abs() < 1e-12),
            other => panic!("expected proved value, got {other:?}"),
        }
    }

    #[test]
    fn conjectured_regime_is_tagged() {
        let q = EigenQuery::new(pexp(3.0), 1.0, 1.0).unwrap();
        match sharp_bound(&q, 1e-8).unwrap() {
            SharpValue::Conjectured(v) => assert!(v > 0.0),
            other => panic!("expected conjectured tag, got {other:?}"),
        }
    }

    #[test]
    fn report_regimes_and_best() {
        // Proved regime, κ < 0: best is the sharp value.
        let r = bound_report(&pexp(3.0), -1.0, Some(1.0), 1e-8).unwrap();
        assert_eq!(r.regime, Regime::SharpProved);
        assert_eq!(Some(r.best), r.sharp_mu.proved());
        assert!(r.lichnerowicz.is_none() && r.wang_li.is_none());

        // Conjectured regime: best is the Lichnerowicz value, the model
        // value stays tagged.
        let r = bound_report(&pexp(3.0), 2.0, Some(2.0), 1e-8).unwrap();
        assert_eq!(r.regime, Regime::SharpConjectured);
        assert_eq!(r.best, r.lichnerowicz.unwrap());
        assert!(matches!(r.sharp_mu, SharpValue::Conjectured(_)));

        // No diameter: Lichnerowicz-only, or an error outside it.
        let r = bound_report(&pexp(4.0), 1.0, None, 1e-8).unwrap();
        assert_eq!(r.regime, Regime::LichnerowiczOnly);
        assert!(matches!(r.sharp_mu, SharpValue::NotAvailable));
        assert!(bound_report(&pexp(1.5), -1.0, None, 1e-8).is_err());
    }

    #[test]
    fn p2_lichnerowicz_can_beat_small_model_value() {
        // p=2, κ>0: both bounds are proved; best takes the larger. For a
        // large diameter the model value approaches κ from above.
        let r = bound_report(&pexp(2.0), 1.0, Some(8.0), 1e-9).unwrap();
        let sharp = r.sharp_mu.proved().unwrap();
        assert!(r.best >= r.lichnerowicz.unwrap() && r.best >= sharp);
        assert!(sharp > 1.0, "model value should exceed κ: {sharp}");
    }

    #[test]
    fn kappa_zero_continuity() {
        // sharp_bound at κ = -1e-6 within 1e-4 relative of the κ=0 closed form.
        let p = pexp(2.5);
        let d = 1.5;
        let closed = mu_closed_form_kappa0(&p, d);
        let q = EigenQuery::new(p, -1e-6, d).unwrap();
        let v = sharp_bound(&q, 1e-10).unwrap().proved().unwrap();
        assert!(
            ((v - closed) / closed).abs() < 1e-4,
            "κ→0 continuity: {v} vs {closed}"
        );
    }

    #[test]
    fn report_serializes_with_tags() {
        let r = bound_report(&pexp(3.0), 2.0, Some(2.0), 1e-8).unwrap();
        let json = serde_json::to_string(&r).unwrap();
        assert!(json.contains("\"regime\":\"sharp-conjectured\""));
        assert!(json.contains("\"status\":\"conjectured\""));
        let back: BoundReport = serde_json::from_str(&json).unwrap();
        assert_eq!(back.regime, r.regime);
        assert_eq!(back.best, r.best);
    }
}
