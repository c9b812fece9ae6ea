//! Diagonal radially symmetric metrics g = A dt² + B dx² + C dΩ² and their
//! radial jets.

use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Period of the Euclidean time circle.
pub const T_PERIOD: f64 = 4.0 * PI;

/// Values and first two derivatives of (A, B, C) with respect to one radial
/// coordinate x. The S² component is stored without its sin²θ factor; every
/// formula in this crate is evaluated at the equator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricJet {
    pub g: [f64; 3],
    pub d1: [f64; 3],
    pub d2: [f64; 3],
}

impl MetricJet {
    /// Re-express an r-jet in a coordinate x with r = r(x), given dr/dx and
    /// d²r/dx². A and C are scalars under the change of variable, B picks
    /// up the factor (dr/dx)².
    pub fn reparametrize(&self, r1: f64, r2: f64, r3: f64) -> MetricJet {
        let mut out = MetricJet { g: [0.0; 3], d1: [0.0; 3], d2: [0.0; 3] };
        for i in [0, 2] {
            out.g[i] = self.g[i];
            out.d1[i] = self.d1[i] * r1;
            out.d2[i] = self.d2[i] * r1 * r1 + self.d1[i] * r2;
        }
        let (b, b1, b2) = (self.g[1], self.d1[1] * r1, self.d2[1] * r1 * r1 + self.d1[1] * r2);
        out.g[1] = b * r1 * r1;
        out.d1[1] = b1 * r1 * r1 + 2.0 * b * r1 * r2;
        out.d2[1] = b2 * r1 * r1 + 4.0 * b1 * r1 * r2 + 2.0 * b * (r2 * r2 + r1 * r3);
        out
    }
}

/// A diagonal radial metric given as functions of the areal radius r.
pub trait DiagonalRadialMetric {
    /// (A, B, C) and r-derivatives at r.
    fn jet(&self, r: f64) -> MetricJet;

    /// Component values only; the finite-difference oracle uses nothing else.
    fn components(&self, r: f64) -> [f64; 3] {
        self.jet(r).g
    }

    fn t_period(&self) -> f64 {
        T_PERIOD
    }
}

/// The Euclidean Schwarzschild metric with horizon at r = 1:
/// (1 − 1/r) dt² + (1 − 1/r)⁻¹ dr² + r² dΩ².
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Schwarzschild;

impl DiagonalRadialMetric for Schwarzschild {
    fn jet(&self, r: f64) -> MetricJet {
        let rm1 = r - 1.0;
        MetricJet {
            g: [rm1 / r, r / rm1, r * r],
            d1: [1.0 / (r * r), -1.0 / (rm1 * rm1), 2.0 * r],
            d2: [-2.0 / (r * r * r), 2.0 / (rm1 * rm1 * rm1), 2.0],
        }
    }

    fn components(&self, r: f64) -> [f64; 3] {
        let rm1 = r - 1.0;
        [rm1 / r, r / rm1, r * r]
    }
}

/// Flat S¹ × ℝ³ in polar coordinates: dt² + dr² + r² dΩ².
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct FlatProduct;

impl DiagonalRadialMetric for FlatProduct {
    fn jet(&self, r: f64) -> MetricJet {
        MetricJet { g: [1.0, 1.0, r * r], d1: [0.0, 0.0, 2.0 * r], d2: [0.0, 0.0, 2.0] }
    }
}

/// dt² + dr² + ρ² dΩ²: a round sphere of fixed radius ρ times a flat
/// cylinder. Its sphere curvature 1/ρ² is not controlled by r⁻³.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SphereProduct {
    pub radius: f64,
}

impl DiagonalRadialMetric for SphereProduct {
    fn jet(&self, _r: f64) -> MetricJet {
        MetricJet { g: [1.0, 1.0, self.radius * self.radius], d1: [0.0; 3], d2: [0.0; 3] }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn schwarzschild_components_are_positive_and_match_jet() {
        for &r in &[1.01, 1.5, 2.0, 30.0] {
            let j = Schwarzschild.jet(r);
            assert!(j.g.iter().all(|&v| v > 0.0));
            assert!((j.g[0] * j.g[1] - 1.0).abs() < 1e-14);
            let h = 1e-6 * r;
            let gp = Schwarzschild.components(r + h);
            let gm = Schwarzschild.components(r - h);
            for i in 0..3 {
                let fd = (gp[i] - gm[i]) / (2.0 * h);
                assert!((fd - j.d1[i]).abs() < 1e-6 * (1.0 + j.d1[i].abs()));
            }
        }
    }

    #[test]
    fn reparametrization_matches_chain_rule_numerically() {
        // x ↦ r = 1 + x², evaluate B(r(x)) (dr/dx)² by finite differences.
        let rx = |x: f64| 1.0 + x * x;
        let b_x = |x: f64| Schwarzschild.components(rx(x))[1] * (2.0 * x) * (2.0 * x);
        let x = 1.3;
        let j = Schwarzschild.jet(rx(x)).reparametrize(2.0 * x, 2.0, 0.0);
        let h = 1e-4;
        let fd1 = (b_x(x + h) - b_x(x - h)) / (2.0 * h);
        let fd2 = (b_x(x + h) - 2.0 * b_x(x) + b_x(x - h)) / (h * h);
        assert!((j.g[1] - b_x(x)).abs() < 1e-12);
        assert!((j.d1[1] - fd1).abs() < 1e-6 * fd1.abs());
        assert!((j.d2[1] - fd2).abs() < 1e-5 * fd2.abs());
    }
}
