//! Closed-form Levi-Civita connection and curvature of a diagonal radial
//! metric A dt² + B dx² + C dΩ², evaluated at the equator θ = π/2.
//!
//! Index order is (t, x, θ, φ) = (0, 1, 2, 3). Sign convention: the
//! sectional curvature of the plane (∂_i, ∂_j) is K_ij and R_ijij = K_ij g_ii g_jj,
//! so that R_0101 = +r⁻³ for the Schwarzschild metric.

use super::metric::MetricJet;
use serde::Serialize;

/// Connection and curvature at one point. S² entries carry no sin²θ factor.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CurvatureSet {
    /// Γ^k_ij stored as `christoffel[k][i][j]`.
    pub christoffel: [[[f64; 4]; 4]; 4],
    /// Sectional curvatures K_ij (symmetric, zero diagonal).
    pub sectional: [[f64; 4]; 4],
    /// R_ijij (symmetric in the pair, zero diagonal).
    pub riemann_diag: [[f64; 4]; 4],
    /// Ricci tensor; diagonal for this metric class.
    pub ricci: [[f64; 4]; 4],
    /// |Rm|² = Σ_{abcd} R_abcd R^abcd.
    pub riem_norm_sq: f64,
}

/// Metric diagonal (A, B, C, C) at the equator.
pub fn diagonal(jet: &MetricJet) -> [f64; 4] {
    [jet.g[0], jet.g[1], jet.g[2], jet.g[2]]
}

/// Nonzero Christoffel symbols Γ^k_ij of the diagonal metric.
pub fn christoffel_from_jet(jet: &MetricJet) -> [[[f64; 4]; 4]; 4] {
    let [a, b, c] = jet.g;
    let [a1, b1, c1] = jet.d1;
    let mut g = [[[0.0; 4]; 4]; 4];
    g[1][0][0] = -a1 / (2.0 * b);
    g[0][0][1] = a1 / (2.0 * a);
    g[0][1][0] = g[0][0][1];
    g[1][1][1] = b1 / (2.0 * b);
    for k in [2, 3] {
        g[k][1][k] = c1 / (2.0 * c);
        g[k][k][1] = g[k][1][k];
        g[1][k][k] = -c1 / (2.0 * b);
    }
    // Γ³_23 = cot θ and Γ²_33 = −sin θ cos θ vanish at the equator.
    g
}

/// Sectional curvatures of the coordinate planes.
pub fn sectional_from_jet(jet: &MetricJet) -> [[f64; 4]; 4] {
    let [a, b, c] = jet.g;
    let [a1, b1, c1] = jet.d1;
    let [a2, _, c2] = jet.d2;
    // K_{1j} = −(1/√(BF)) d/dx( (√F)' / √B ) for F = A or C, expanded.
    let radial =
        |f: f64, f1: f64, f2: f64| -f2 / (2.0 * f * b) + f1 * f1 / (4.0 * f * f * b) + b1 * f1 / (4.0 * f * b * b);
    let k01 = radial(a, a1, a2);
    let k1a = radial(c, c1, c2);
    let k0a = -a1 * c1 / (4.0 * a * b * c);
    let k23 = 1.0 / c - c1 * c1 / (4.0 * b * c * c);
    let mut k = [[0.0; 4]; 4];
    let mut set = |i: usize, j: usize, v: f64| {
        k[i][j] = v;
        k[j][i] = v;
    };
    set(0, 1, k01);
    set(0, 2, k0a);
    set(0, 3, k0a);
    set(1, 2, k1a);
    set(1, 3, k1a);
    set(2, 3, k23);
    k
}

/// Full curvature set from a radial jet.
pub fn curvature_from_jet(jet: &MetricJet) -> CurvatureSet {
    let diag = diagonal(jet);
    let sectional = sectional_from_jet(jet);
    let mut riemann_diag = [[0.0; 4]; 4];
    let mut ricci = [[0.0; 4]; 4];
    let mut norm = 0.0;
    for i in 0..4 {
        let mut sum = 0.0;
        for j in 0..4 {
            if i != j {
                riemann_diag[i][j] = sectional[i][j] * (diag[i] * diag[j]).min(diag[j] * diag[i]);
                sum += sectional[i][j];
                if i < j {
                    // Each plane contributes through R_ijij, R_jiji, R_ijji, R_jiij.
                    norm += 4.0 * sectional[i][j] * sectional[i][j];
                }
            }
        }
        ricci[i][i] = diag[i] * sum;
    }
    CurvatureSet { christoffel: christoffel_from_jet(jet), sectional, riemann_diag, ricci, riem_norm_sq: norm }
}

/// Human-readable names of every structurally nonzero component, used in
/// reports and the CSV dump.
pub fn christoffel_names() -> Vec<(String, [usize; 3])> {
    let mut out = Vec::new();
    for (k, i, j) in [(1, 0, 0), (0, 0, 1), (1, 1, 1), (2, 1, 2), (3, 1, 3), (1, 2, 2), (1, 3, 3)] {
        out.push((format!("Gamma^{k}_{i}{j}"), [k, i, j]));
    }
    out
}

pub fn riemann_names() -> Vec<(String, [usize; 2])> {
    let mut out = Vec::new();
    for i in 0..4 {
        for j in (i + 1)..4 {
            out.push((format!("R_{i}{j}{i}{j}"), [i, j]));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::metric::{DiagonalRadialMetric, FlatProduct, Schwarzschild};

    #[test]
    fn schwarzschild_table_at_r2() {
        let c = curvature_from_jet(&Schwarzschild.jet(2.0));
        assert!((c.christoffel[2][1][2] - 0.5).abs() < 1e-15);
        assert!((c.riemann_diag[0][1] - 0.125).abs() < 1e-15);
        // R_2323 = r sin²θ, stored without the sin²θ.
        assert!((c.riemann_diag[2][3] - 2.0).abs() < 1e-14);
        assert!((c.sectional[0][1] - 0.125).abs() < 1e-15);
        // Γ¹_00 = −(1 − 1/r)/(2r²) at r = 2.
        assert!((c.christoffel[1][0][0] + 0.0625).abs() < 1e-15);
    }

    #[test]
    fn flat_product_polar_symbol() {
        let c = curvature_from_jet(&FlatProduct.jet(3.0));
        assert!((c.christoffel[1][2][2] + 3.0).abs() < 1e-15);
        assert!(c.riem_norm_sq.abs() < 1e-30);
    }

    #[test]
    fn schwarzschild_is_ricci_flat_and_kretschmann_matches() {
        for &r in &[1.5, 2.0, 5.0, 20.0] {
            let c = curvature_from_jet(&Schwarzschild.jet(r));
            for i in 0..4 {
                assert!(c.ricci[i][i].abs() < 1e-9, "r={r} i={i}");
            }
            assert!((c.riem_norm_sq * r.powi(6) - 12.0).abs() < 1e-10);
        }
    }

    #[test]
    fn stored_tables_are_symmetric() {
        let c = curvature_from_jet(&Schwarzschild.jet(1.7));
        for k in 0..4 {
            for i in 0..4 {
                for j in 0..4 {
                    assert_eq!(c.christoffel[k][i][j], c.christoffel[k][j][i]);
                    assert_eq!(c.riemann_diag[i][j], c.riemann_diag[j][i]);
                }
            }
        }
    }
}
