//! Discretized one-dimensional Bakry–Émery manifolds.
//!
//! In dimension one `Ric ≡ 0`, so the condition `Ric + ∇²f ≥ κ g` reduces to
//! `f'' ≥ κ`. A segment carries a uniform grid, potential samples, and a
//! certificate that the discrete second difference of `f` respects the bound
//! at every interior node.

use super::VerifyError;

/// Certificate slack: second differences may undershoot `κ h²` by this much
/// (absorbs rounding in `f` evaluation).
const CERT_SLACK: f64 = 1e-9;

/// Grid topology: a Neumann interval or a closed circle.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Topology {
    Interval,
    Circle,
}

/// A convex (or deliberately non-convex, for rejection tests) bump term.
#[derive(Debug, Clone, Copy)]
pub enum Bump {
    /// `coeff · max(t - center, 0)²`; convex iff `coeff ≥ 0`.
    ReluSquare { center: f64, coeff: f64 },
    /// `coeff · t²`; convex iff `coeff ≥ 0`.
    Quadratic { coeff: f64 },
}

impl Bump {
    fn eval(&self, t: f64) -> f64 {
        match *self {
            Bump::ReluSquare { center, coeff } => {
                let d = (t - center).max(0.0);
                coeff * d * d
            }
            Bump::Quadratic { coeff } => coeff * t * t,
        }
    }
}

/// A sum of bump terms added on top of the model potential `κ t² / 2`.
#[derive(Debug, Clone, Default)]
pub struct BumpSpec(pub Vec<Bump>);

impl BumpSpec {
    pub fn none() -> Self {
        Self(Vec::new())
    }

    pub fn eval(&self, t: f64) -> f64 {
        self.0.iter().map(|b| b.eval(t)).sum()
    }
}

/// A discretized weighted segment: uniform grid, potential samples, and the
/// certified curvature bound.
#[derive(Debug, Clone)]
pub struct WeightedSegment {
    nodes: Vec<f64>,
    f_values: Vec<f64>,
    h: f64,
    kappa_certificate: f64,
    topology: Topology,
}

impl WeightedSegment {
    /// Build a segment from explicit potential samples and certify it.
    ///
    /// For an interval, `f_values` has `n + 1` entries on the nodes of
    /// `[-length/2, length/2]` with `n` cells; for a circle, `n` entries on
    /// `[-length/2, length/2)` with periodic wrap (`length` is then the
    /// circumference).
    pub fn from_f_samples(
        kappa: f64,
        length: f64,
        f_values: Vec<f64>,
        n: usize,
        topology: Topology,
    ) -> Result<Self, VerifyError> {
        if n < 32 {
            return Err(VerifyError::GridTooSmall(n));
        }
        if !(length.is_finite() && length > 0.0) {
            return Err(VerifyError::InvalidSegment(format!("length must be positive, got {length}")));
        }
        let expected = match topology {
            Topology::Interval => n + 1,
            Topology::Circle => n,
        };
        if f_values.len() != expected {
            return Err(VerifyError::InvalidSegment(format!(
                "expected {expected} potential samples, got {}",
                f_values.len()
            )));
        }
        let h = length / n as f64;
        let nodes: Vec<f64> = (0..expected).map(|i| -0.5 * length + i as f64 * h).collect();
        let seg = Self { nodes, f_values, h, kappa_certificate: kappa, topology };
        seg.certify()?;
        Ok(seg)
    }

    /// Quadratic model potential `κ t²/2` plus the bump, sampled and
    /// certified on an interval of length `d` with `n` cells.
    pub fn model_with_bump(
        kappa: f64,
        d: f64,
        bump: &BumpSpec,
        n: usize,
    ) -> Result<Self, VerifyError> {
        if n < 32 {
            return Err(VerifyError::GridTooSmall(n));
        }
        if !(d.is_finite() && d > 0.0) {
            return Err(VerifyError::InvalidSegment(format!("diameter must be positive, got {d}")));
        }
        let h = d / n as f64;
        let f_values: Vec<f64> = (0..=n)
            .map(|i| {
                let t = -0.5 * d + i as f64 * h;
                0.5 * kappa * t * t + bump.eval(t)
            })
            .collect();
        Self::from_f_samples(kappa, d, f_values, n, Topology::Interval)
    }

    /// A flat circle (`f` constant) of the given circumference.
    pub fn circle_flat(circumference: f64, n: usize) -> Result<Self, VerifyError> {
        Self::from_f_samples(0.0, circumference, vec![0.0; n], n, Topology::Circle)
    }

    /// Re-check the discrete Bakry–Émery condition
    /// `(f_{i+1} - 2 f_i + f_{i-1}) / h² ≥ κ - 1e-9` at all interior nodes
    /// (all nodes, cyclically, for a circle).
    pub fn certify(&self) -> Result<(), VerifyError> {
        let n = self.f_values.len();
        let h2 = self.h * self.h;
        let required = self.kappa_certificate - CERT_SLACK;
        let check = |im: usize, i: usize, ip: usize| -> Result<(), VerifyError> {
            let second = (self.f_values[ip] - 2.0 * self.f_values[i] + self.f_values[im]) / h2;
            if second < required {
                return Err(VerifyError::CertificateViolation {
                    index: i,
                    second_diff: second,
                    required,
                });
            }
            Ok(())
        };
        match self.topology {
            Topology::Interval => {
                for i in 1..n - 1 {
                    check(i - 1, i, i + 1)?;
                }
            }
            Topology::Circle => {
                for i in 0..n {
                    check((i + n - 1) % n, i, (i + 1) % n)?;
                }
            }
        }
        Ok(())
    }

    pub fn topology(&self) -> Topology {
        self.topology
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn f_values(&self) -> &[f64] {
        &self.f_values
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    /// Number of cells.
    pub fn n_cells(&self) -> usize {
        match self.topology {
            Topology::Interval => self.nodes.len() - 1,
            Topology::Circle => self.nodes.len(),
        }
    }

    pub fn kappa(&self) -> f64 {
        self.kappa_certificate
    }

    /// Geodesic diameter: the length for an interval, half the circumference
    /// for a circle.
    pub fn diameter(&self) -> f64 {
        let length = self.h * self.n_cells() as f64;
        match self.topology {
            Topology::Interval => length,
            Topology::Circle => 0.5 * length,
        }
    }

    /// Cell quadrature weights for the gradient term: the weight `e^{-f}`
    /// averaged over each cell's endpoints.
    pub fn cell_weights(&self) -> Vec<f64> {
        let n = self.nodes.len();
        match self.topology {
            Topology::Interval => (0..n - 1)
                .map(|i| 0.5 * ((-self.f_values[i]).exp() + (-self.f_values[i + 1]).exp()))
                .collect(),
            Topology::Circle => (0..n)
                .map(|i| {
                    0.5 * ((-self.f_values[i]).exp() + (-self.f_values[(i + 1) % n]).exp())
                })
                .collect(),
        }
    }

    /// Node quadrature masses `h w̄_i` (trapezoid rule: half weights at
    /// interval endpoints).
    pub fn node_masses(&self) -> Vec<f64> {
        let n = self.nodes.len();
        match self.topology {
            Topology::Interval => (0..n)
                .map(|i| {
                    let w = (-self.f_values[i]).exp() * self.h;
                    if i == 0 || i == n - 1 {
                        0.5 * w
                    } else {
                        w
                    }
                })
                .collect(),
            Topology::Circle => {
                (0..n).map(|i| (-self.f_values[i]).exp() * self.h).collect()
            }
        }
    }
}

/// Build a certified interval segment for the model potential `κ t²/2` plus
/// a perturbation. With no perturbation the segment carries exactly the model
/// weight `e^{-κ t²/2}`.
pub fn make_segment(
    kappa: f64,
    d: f64,
    perturbation: &BumpSpec,
    n: usize,
) -> Result<WeightedSegment, VerifyError> {
    WeightedSegment::model_with_bump(kappa, d, perturbation, n)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn model_segment_passes_certificate() {
        let seg = make_segment(-1.0, 1.0, &BumpSpec::none(), 64).unwrap();
        assert_eq!(seg.n_cells(), 64);
        assert_eq!(seg.nodes().len(), 65);
        assert!((seg.diameter() - 1.0).abs() < 1e-15);
        // f = -t²/2 exactly.
        for (t, f) in seg.nodes().iter().zip(seg.f_values()) {
            assert!((f - (-0.5 * t * t)).abs() < 1e-15);
        }
    }

    #[test]
    fn convex_bump_keeps_certificate() {
        let bump = BumpSpec(vec![
            Bump::ReluSquare { center: 0.1, coeff: 2.0 },
            Bump::Quadratic { coeff: 0.3 },
        ]);
        assert!(make_segment(-1.0, 1.0, &bump, 64).is_ok());
    }

    #[test]
    fn concave_bump_rejected_with_node_index() {
        let bump = BumpSpec(vec![Bump::Quadratic { coeff: -1.0 }]);
        match make_segment(-1.0, 1.0, &bump, 64) {
            Err(VerifyError::CertificateViolation { index, .. }) => {
                assert!(index > 0 && index < 64);
            }
            other => panic!("expected certificate violation, got {other:?}"),
        }
    }

    #[test]
    fn small_grid_rejected() {
        assert!(matches!(
            make_segment(-1.0, 1.0, &BumpSpec::none(), 16),
            Err(VerifyError::GridTooSmall(16))
        ));
    }

    #[test]
    fn circle_diameter_is_half_circumference() {
        let seg = WeightedSegment::circle_flat(2.0, 64).unwrap();
        assert!((seg.diameter() - 1.0).abs() < 1e-15);
        assert_eq!(seg.cell_weights().len(), 64);
        assert_eq!(seg.node_masses().len(), 64);
    }

    #[test]
    fn positive_kappa_circle_rejected() {
        // Periodic f with f'' ≥ κ > 0 is impossible; constant f must fail.
        let result =
            WeightedSegment::from_f_samples(0.5, 2.0, vec![0.0; 64], 64, Topology::Circle);
        assert!(matches!(result, Err(VerifyError::CertificateViolation { .. })));
    }

    #[test]
    fn masses_sum_to_weighted_length() {
        let seg = make_segment(0.0, 2.0, &BumpSpec::none(), 50).unwrap();
        let total: f64 = seg.node_masses().iter().sum();
        assert!((total - 2.0).abs() < 1e-12);
    }
}
