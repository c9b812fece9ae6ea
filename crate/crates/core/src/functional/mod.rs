//! Weighted norms, covariant derivatives and quadratic forms of radial
//! diagonal 2-tensors on the Schwarzschild background, the Hardy-type
//! inequality, and the explicit negative-energy test tensor.

pub mod certificate;
pub mod forms;
pub mod grid;
pub mod tensor;

pub use certificate::{lemma36_certificate, Eta, Lemma36Certificate};
pub use forms::{assemble_form, FormTerms};
pub use grid::{volume_density, Grid, ANGULAR_FACTOR, OMEGA2};
pub use tensor::RadialSymTensor;

use crate::error::{Error, Result};
use crate::geometry::{curvature::christoffel_from_jet, to_p, ChartPoint, DiagonalRadialMetric, Schwarzschild};
use serde::Serialize;

/// Relative size of the outermost stored value for a tensor to count as
/// decayed.
pub const OUTER_DECAY_TOL: f64 = 1e-6;
/// Relative size of both end values for a tensor to count as compactly supported.
pub const COMPACT_SUPPORT_TOL: f64 = 1e-10;

/// ∇_k h_ij in r-chart coordinates (t, r, θ, φ) at the equator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CovariantDerivative {
    pub r: f64,
    /// `components[k][i][j]` = ∇_k h_ij.
    pub components: [[[f64; 4]; 4]; 4],
}

impl CovariantDerivative {
    /// |∇h|² with respect to g₀.
    pub fn norm_sq(&self) -> f64 {
        let g = Schwarzschild.jet(self.r).g;
        let inv = [1.0 / g[0], 1.0 / g[1], 1.0 / g[2], 1.0 / g[2]];
        let mut s = 0.0;
        for k in 0..4 {
            for i in 0..4 {
                for j in 0..4 {
                    s += inv[k] * inv[i] * inv[j] * self.components[k][i][j].powi(2);
                }
            }
        }
        s
    }
}

/// All components of ∇h at a point: the radial derivative of h_ii plus the
/// Christoffel couplings −Γ^m_ki h_mj − Γ^m_kj h_im.
pub fn covariant_derivative(h: &RadialSymTensor, x: ChartPoint) -> Result<CovariantDerivative> {
    let r = x.radius()?;
    let p = to_p(r)?;
    let (u, du) = h.sample(p)?;
    let jet = Schwarzschild.jet(r);
    let gam = christoffel_from_jet(&jet);
    let g = [jet.g[0], jet.g[1], jet.g[2], jet.g[2]];
    let dg = [jet.d1[0], jet.d1[1], jet.d1[2], jet.d1[2]];
    let uu = [u[0], u[1], u[2], u[2]];
    let duu = [du[0], du[1], du[2], du[2]];
    let dp_dr = 1.0 / (2.0 * p * r * r);
    let hd: Vec<f64> = (0..4).map(|i| uu[i] * g[i]).collect();
    let mut c = [[[0.0; 4]; 4]; 4];
    for k in 0..4 {
        for i in 0..4 {
            for j in 0..4 {
                let mut v = 0.0;
                if k == 1 && i == j {
                    v += duu[i] * dp_dr * g[i] + uu[i] * dg[i];
                }
                v -= gam[j][k][i] * hd[j] + gam[i][k][j] * hd[i];
                c[k][i][j] = v;
            }
        }
    }
    Ok(CovariantDerivative { r, components: c })
}

fn require_outer_decay(h: &RadialSymTensor) -> Result<()> {
    let scale = h.max_abs();
    let last = h.grid.len() - 1;
    let end = h.at(last).iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if end > OUTER_DECAY_TOL * scale {
        return Err(Error::Data(format!("tensor does not decay at p_max: |u| = {end:.3e} vs max {scale:.3e}")));
    }
    Ok(())
}

fn require_compact(h: &RadialSymTensor) -> Result<()> {
    let scale = h.max_abs();
    let last = h.grid.len() - 1;
    for i in [0, last] {
        let end = h.at(i).iter().fold(0.0f64, |m, v| m.max(v.abs()));
        if end > COMPACT_SUPPORT_TOL * scale {
            return Err(Error::Data(format!("tensor is not compactly supported: |u| = {end:.3e} at node {i}")));
        }
    }
    Ok(())
}

/// Symmetric bilinear form of `terms` between two tensors on one grid.
pub fn bilinear(h: &RadialSymTensor, k: &RadialSymTensor, terms: &FormTerms) -> Result<f64> {
    if h.grid != k.grid {
        return Err(Error::Data("tensors live on different grids".into()));
    }
    let m = assemble_form(&h.grid, terms);
    Ok(m.bilinear(&forms::to_dofs(h)?, &forms::to_dofs(k)?))
}

/// a(h) = ∫|∇h|² − 2∫R^{ijij} h_ii h_jj for the piecewise-linear tensor
/// through the samples. The tensor must vanish towards p_max and satisfy
/// u0 = u1 at the bolt.
pub fn energy(h: &RadialSymTensor) -> Result<f64> {
    h.check_finite()?;
    if h.max_abs() == 0.0 {
        return Ok(0.0);
    }
    require_outer_decay(h)?;
    bilinear(h, h, &FormTerms::ENERGY)
}

/// ‖h‖₂².
pub fn norm_sq(h: &RadialSymTensor) -> Result<f64> {
    bilinear(h, h, &FormTerms::MASS)
}

/// (∫|∇h|², ∫|h|²/r²) for a compactly supported tensor.
pub fn hardy_gap(h: &RadialSymTensor) -> Result<(f64, f64)> {
    h.check_finite()?;
    if h.max_abs() == 0.0 {
        return Ok((0.0, 0.0));
    }
    require_compact(h)?;
    Ok((bilinear(h, h, &FormTerms::DIRICHLET)?, bilinear(h, h, &FormTerms::HARDY_MASS)?))
}

/// (−2∫R^{ijij} h_ii h_jj, ∫|h|²/r³): the curvature term and the weight it
/// is bounded by.
pub fn curvature_term(h: &RadialSymTensor) -> Result<(f64, f64)> {
    Ok((bilinear(h, h, &FormTerms::CURVATURE)?, bilinear(h, h, &FormTerms::INVERSE_CUBE_MASS)?))
}

/// Trace, divergence and the gauge-gap tensor of a radial tensor.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TraceDivergence {
    /// H = g₀^{ij} h_ij = u0 + u1 + 2u2 at the nodes.
    pub trace: Vec<f64>,
    /// Radial frame component of ζh = −div h (the only nonzero one).
    pub divergence: Vec<f64>,
    /// ‖∇∇H + 2∇(ζh)‖₂.
    pub gap_l2: f64,
}

/// Central differences of nodal values with even extension through the bolt
/// (`odd` flips the sign of the mirror image) and zero past p_max.
fn node_derivatives(values: &[f64], h: f64, odd: bool) -> (Vec<f64>, Vec<f64>) {
    let n = values.len();
    let at = |k: isize| -> f64 {
        if k < 0 {
            let v = values[k.unsigned_abs()];
            if odd {
                -v
            } else {
                v
            }
        } else {
            values.get(k as usize).copied().unwrap_or(0.0)
        }
    };
    let mut d1 = vec![0.0; n];
    let mut d2 = vec![0.0; n];
    for i in 0..n as isize {
        d1[i as usize] = (at(i + 1) - at(i - 1)) / (2.0 * h);
        d2[i as usize] = (at(i + 1) - 2.0 * at(i) + at(i - 1)) / (h * h);
    }
    (d1, d2)
}

/// H, ζh and the norm of ∇∇H + 2∇(ζh), all in the g₀ frame. With
/// σ = (1 − p²)²/2 the unit radial derivative is σ ∂_p, and the frame
/// connection coefficients are a0 = σ/p (time circle) and c = p(1 − p²)
/// (sphere).
pub fn trace_and_divergence(h: &RadialSymTensor) -> Result<TraceDivergence> {
    h.check_finite()?;
    let grid = &h.grid;
    let n = grid.len();
    let dh = grid.h();
    let trace: Vec<f64> = (0..n).map(|i| h.u0[i] + h.u1[i] + 2.0 * h.u2[i]).collect();
    let (du1, _) = node_derivatives(&h.u1, dh, false);
    let mut div = vec![0.0; n];
    for i in 1..n {
        let p = grid.nodes()[i];
        let q = 1.0 - p * p;
        let sigma = 0.5 * q * q;
        let a0 = sigma / p;
        let c = p * q;
        div[i] = -(sigma * du1[i] + a0 * (h.u1[i] - h.u0[i]) + 2.0 * c * (h.u1[i] - h.u2[i]));
    }
    // At the bolt every term of the divergence vanishes by symmetry.
    let (dt, ddt) = node_derivatives(&trace, dh, false);
    let (dx, _) = node_derivatives(&div, dh, true);
    let mut sum = 0.0;
    for i in 0..n {
        let p = grid.nodes()[i];
        let q = 1.0 - p * p;
        let sigma = 0.5 * q * q;
        let dsigma = -2.0 * p * q;
        let c = p * q;
        let (g00, g11, g22);
        if i == 0 {
            // Limits p → 0: a0 σ H′ → H″/4 and 2 a0 X → X′(0).
            g00 = 0.25 * ddt[0] + dx[0];
            g11 = 0.25 * ddt[0] + dx[0];
            g22 = 0.0;
        } else {
            let a0 = sigma / p;
            g00 = a0 * sigma * dt[i] + 2.0 * a0 * div[i];
            g11 = sigma * (dsigma * dt[i] + sigma * ddt[i]) + 2.0 * sigma * dx[i];
            g22 = c * sigma * dt[i] + 2.0 * c * div[i];
        }
        sum += grid.weights()[i] * (g00 * g00 + g11 * g11 + 2.0 * g22 * g22);
    }
    Ok(TraceDivergence { trace, divergence: div, gap_l2: sum.sqrt() })
}

/// ĥ = η h̄ sampled on a grid.
pub fn test_tensor(grid: std::sync::Arc<Grid>, n: u32) -> RadialSymTensor {
    let eta = Eta { n };
    RadialSymTensor::from_fn(grid, |p| {
        if p <= 0.0 {
            return [0.0; 3];
        }
        let r = 1.0 / ((1.0 - p) * (1.0 + p));
        let e = eta.eval(r).0;
        [e, e, -e]
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::sync::Arc;

    #[test]
    fn constant_frame_tensor_matches_published_derivative() {
        let g = Arc::new(Grid::new(256).unwrap());
        let hbar = RadialSymTensor::from_fn(g, |_| [1.0, 1.0, -1.0]);
        let d = covariant_derivative(&hbar, ChartPoint::r(3.0).unwrap()).unwrap();
        assert!((d.components[2][1][2] - 6.0).abs() < 1e-12);
        assert!((d.components[2][2][1] - 6.0).abs() < 1e-12);
        assert!((d.components[3][1][3] - 6.0).abs() < 1e-12);
        let mut others = 0.0f64;
        for k in 0..4 {
            for i in 0..4 {
                for j in 0..4 {
                    if !matches!((k, i, j), (2, 1, 2) | (2, 2, 1) | (3, 1, 3) | (3, 3, 1)) {
                        others = others.max(d.components[k][i][j].abs());
                    }
                }
            }
        }
        assert!(others < 1e-12);
    }

    #[test]
    fn metric_is_parallel() {
        let g = Arc::new(Grid::new(128).unwrap());
        let h = RadialSymTensor::from_fn(g, |_| [1.0, 1.0, 1.0]);
        let d = covariant_derivative(&h, ChartPoint::r(2.2).unwrap()).unwrap();
        assert!(d.norm_sq() < 1e-24);
    }

    #[test]
    fn zero_tensor_has_zero_forms() {
        let g = Arc::new(Grid::new(64).unwrap());
        let z = RadialSymTensor::zeros(g);
        assert_eq!(energy(&z).unwrap(), 0.0);
        assert_eq!(hardy_gap(&z).unwrap(), (0.0, 0.0));
    }

    #[test]
    fn traces_of_simple_tensors() {
        let g = Arc::new(Grid::new(128).unwrap());
        let h = RadialSymTensor::from_fn(g.clone(), |_| [2.5, 2.5, 2.5]);
        let td = trace_and_divergence(&h).unwrap();
        assert!(td.trace.iter().all(|&v| (v - 10.0).abs() < 1e-14));
        // Away from p_max (where the stored profile is cut to zero) ζ vanishes.
        assert!(td.divergence[..100].iter().all(|v| v.abs() < 1e-12));
        let hbar = test_tensor(g, 50);
        let td = trace_and_divergence(&hbar).unwrap();
        assert!(td.trace.iter().all(|v| v.abs() < 1e-14));
    }

    #[test]
    fn non_decaying_tensor_is_rejected_by_energy() {
        let g = Arc::new(Grid::new(64).unwrap());
        let h = RadialSymTensor::from_fn(g, |_| [1.0, 1.0, 1.0]);
        assert!(energy(&h).is_err());
    }
}
