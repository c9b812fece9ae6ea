//! Piecewise-linear finite-element discretization of the radial quadratic
//! forms. Every p-integral is evaluated per element with Gauss–Legendre
//! points, so xᵀ M x is the exact form of the piecewise-linear tensor up to
//! quadrature error in the rational weights.
//!
//! Per unit angular factor the densities are
//!   gradient:   (p/2)(u0′² + u1′² + 2 u2′²)
//!   algebraic:  (u1 − u0)²/p + 8p³/(1 − p²)² (u1 − u2)²
//!   curvature:  −8p/(1 − p²) (u0u1 − u0u2 − u1u2 + u2²)
//!   mass:       ρ (u0² + u1² + 2u2²),  ρ = 2p/(1 − p²)⁴
//!   hardy mass: ρ (1 − p²)² (u0² + u1² + 2u2²)   (the weight 1/r²)
//!   ρ (1 − p²)³ |u|² likewise gives the weight 1/r³.
//! Smoothness at the bolt p = 0 forces u0 = u1 there (otherwise the
//! algebraic term diverges), so node 0 carries a single shared dof for u0
//! and u1. Values at p_max = 1 − 1/n are zero.

use super::grid::{volume_density, Grid, ANGULAR_FACTOR, ELEMENT_POINTS};
use super::tensor::RadialSymTensor;
use crate::banded::SymBanded;
use crate::error::{Error, Result};
use crate::quadrature::gauss_legendre;
use std::sync::Arc;

/// Half-bandwidth of every assembled matrix.
pub const BANDWIDTH: usize = 5;

/// Coefficients selecting which densities enter an assembled form.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct FormTerms {
    pub gradient: f64,
    pub algebraic: f64,
    pub curvature: f64,
    pub mass: f64,
    pub hardy_mass: f64,
    pub inverse_cube_mass: f64,
}

impl FormTerms {
    /// ∫|∇h|² − 2∫Rm(h, h).
    pub const ENERGY: FormTerms =
        FormTerms { gradient: 1.0, algebraic: 1.0, curvature: 1.0, mass: 0.0, hardy_mass: 0.0, inverse_cube_mass: 0.0 };
    /// ∫|∇h|².
    pub const DIRICHLET: FormTerms =
        FormTerms { gradient: 1.0, algebraic: 1.0, curvature: 0.0, mass: 0.0, hardy_mass: 0.0, inverse_cube_mass: 0.0 };
    /// −2∫Rm(h, h).
    pub const CURVATURE: FormTerms =
        FormTerms { gradient: 0.0, algebraic: 0.0, curvature: 1.0, mass: 0.0, hardy_mass: 0.0, inverse_cube_mass: 0.0 };
    /// ∫|h|².
    pub const MASS: FormTerms =
        FormTerms { gradient: 0.0, algebraic: 0.0, curvature: 0.0, mass: 1.0, hardy_mass: 0.0, inverse_cube_mass: 0.0 };
    /// ∫|h|²/r².
    pub const HARDY_MASS: FormTerms =
        FormTerms { gradient: 0.0, algebraic: 0.0, curvature: 0.0, mass: 0.0, hardy_mass: 1.0, inverse_cube_mass: 0.0 };
    /// ∫|h|²/r³.
    pub const INVERSE_CUBE_MASS: FormTerms =
        FormTerms { gradient: 0.0, algebraic: 0.0, curvature: 0.0, mass: 0.0, hardy_mass: 0.0, inverse_cube_mass: 1.0 };
}

/// Number of dofs for a grid: two at the bolt node, three elsewhere.
pub fn dof_count(grid: &Grid) -> usize {
    2 + 3 * (grid.len() - 1)
}

/// Global dof of (node, component); components 0 and 1 coincide at node 0.
pub fn dof_index(node: usize, comp: usize) -> usize {
    if node == 0 {
        if comp == 2 {
            1
        } else {
            0
        }
    } else {
        2 + 3 * (node - 1) + comp
    }
}

/// Local basis function: global dof, node, and component pattern.
struct LocalDof {
    global: usize,
    node: usize,
    pattern: [f64; 3],
}

fn local_dofs(grid: &Grid, e: usize) -> Vec<LocalDof> {
    let mut out = Vec::with_capacity(6);
    for node in [e, e + 1] {
        if node >= grid.len() {
            continue;
        }
        if node == 0 {
            out.push(LocalDof { global: 0, node, pattern: [1.0, 1.0, 0.0] });
            out.push(LocalDof { global: 1, node, pattern: [0.0, 0.0, 1.0] });
        } else {
            for c in 0..3 {
                let mut pattern = [0.0; 3];
                pattern[c] = 1.0;
                out.push(LocalDof { global: dof_index(node, c), node, pattern });
            }
        }
    }
    out
}

/// Density of the symmetric bilinear form at p for frame triples (U, U′), (V, V′).
fn density(t: &FormTerms, p: f64, u: &[f64; 3], du: &[f64; 3], v: &[f64; 3], dv: &[f64; 3]) -> f64 {
    let q = 1.0 - p * p;
    let mut s = 0.0;
    if t.gradient != 0.0 {
        s += t.gradient * 0.5 * p * (du[0] * dv[0] + du[1] * dv[1] + 2.0 * du[2] * dv[2]);
    }
    if t.algebraic != 0.0 {
        let d0 = (u[1] - u[0]) * (v[1] - v[0]);
        // Zero for the shared bolt dof; avoid 0/p at p = 0 in any case.
        let a0 = if d0 == 0.0 { 0.0 } else { d0 / p };
        s += t.algebraic * (a0 + 8.0 * p * p * p / (q * q) * (u[1] - u[2]) * (v[1] - v[2]));
    }
    if t.curvature != 0.0 {
        let sym =
            0.5 * (u[0] * v[1] + u[1] * v[0]) - 0.5 * (u[0] * v[2] + u[2] * v[0]) - 0.5 * (u[1] * v[2] + u[2] * v[1])
                + u[2] * v[2];
        s += t.curvature * (-8.0 * p / q) * sym;
    }
    let m = u[0] * v[0] + u[1] * v[1] + 2.0 * u[2] * v[2];
    if t.mass != 0.0 {
        s += t.mass * volume_density(p) * m;
    }
    if t.hardy_mass != 0.0 {
        s += t.hardy_mass * volume_density(p) * q * q * m;
    }
    if t.inverse_cube_mass != 0.0 {
        s += t.inverse_cube_mass * volume_density(p) * q * q * q * m;
    }
    s
}

/// Shape function of the left (`left = true`) or right node of element `e`
/// and its p-derivative. The bolt element interpolates linearly in p², so
/// the even continuation through p = 0 stays smooth.
fn element_shape(e: usize, left: bool, p: f64, h: f64) -> (f64, f64) {
    let (a, b) = (e as f64 * h, (e + 1) as f64 * h);
    match (e, left) {
        (0, true) => (1.0 - p * p / (h * h), -2.0 * p / (h * h)),
        (0, false) => (p * p / (h * h), 2.0 * p / (h * h)),
        (_, true) => ((b - p) / h, -1.0 / h),
        (_, false) => ((p - a) / h, 1.0 / h),
    }
}

/// Assemble ANGULAR_FACTOR · ∫ density over [0, p_max] as a banded matrix.
pub fn assemble_form(grid: &Grid, terms: &FormTerms) -> SymBanded {
    let (gx, gw) = gauss_legendre(ELEMENT_POINTS);
    let h = grid.h();
    let mut m = SymBanded::zeros(dof_count(grid), BANDWIDTH);
    for e in 0..grid.len() {
        let (a, b) = (e as f64 * h, (e + 1) as f64 * h);
        let dofs = local_dofs(grid, e);
        for (x, w) in gx.iter().zip(&gw) {
            let p = 0.5 * (a + b) + 0.5 * h * x;
            let jac = 0.5 * h * w * ANGULAR_FACTOR;
            let shape = |d: &LocalDof| {
                let (phi, dphi) = element_shape(e, d.node == e, p, h);
                (d.pattern.map(|c| c * phi), d.pattern.map(|c| c * dphi))
            };
            let shapes: Vec<_> = dofs.iter().map(shape).collect();
            for i in 0..dofs.len() {
                for j in i..dofs.len() {
                    let v = density(terms, p, &shapes[i].0, &shapes[i].1, &shapes[j].0, &shapes[j].1);
                    if v != 0.0 {
                        m.add(dofs[i].global, dofs[j].global, jac * v);
                    }
                }
            }
        }
    }
    m
}

/// Dof vector of a tensor. Fails if u0 ≠ u1 at the bolt, where the
/// continuum energy would be infinite.
pub fn to_dofs(h: &RadialSymTensor) -> Result<Vec<f64>> {
    h.check_finite()?;
    let scale = h.max_abs().max(f64::MIN_POSITIVE);
    if (h.u0[0] - h.u1[0]).abs() > 1e-12 * scale {
        return Err(Error::Data(format!(
            "u0 = {} and u1 = {} differ at the bolt; the tensor is not smooth there",
            h.u0[0], h.u1[0]
        )));
    }
    let mut x = vec![0.0; dof_count(&h.grid)];
    x[0] = 0.5 * (h.u0[0] + h.u1[0]);
    x[1] = h.u2[0];
    for i in 1..h.grid.len() {
        for (c, comp) in h.components().iter().enumerate() {
            x[dof_index(i, c)] = comp[i];
        }
    }
    Ok(x)
}

/// Tensor from a dof vector.
pub fn from_dofs(grid: Arc<Grid>, x: &[f64]) -> RadialSymTensor {
    let mut t = RadialSymTensor::zeros(grid);
    for i in 0..t.grid.len() {
        t.u0[i] = x[dof_index(i, 0)];
        t.u1[i] = x[dof_index(i, 1)];
        t.u2[i] = x[dof_index(i, 2)];
    }
    t
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mass_form_of_constant_window_matches_volume() {
        let g = Grid::new(400).unwrap();
        let m = assemble_form(&g, &FormTerms::MASS);
        // Hat-function expansion of u0 = 1 everywhere integrates the volume.
        let mut x = vec![0.0; dof_count(&g)];
        for i in 0..g.len() {
            x[dof_index(i, 0)] = 1.0;
        }
        // u1 shares the bolt dof; keep it consistent there only.
        let got = m.bilinear(&x, &x);
        assert!(got > 0.0);
        let sym_err = (m.get(3, 7) - m.get(7, 3)).abs();
        assert_eq!(sym_err, 0.0);
    }

    #[test]
    fn bolt_mismatch_is_rejected() {
        let g = Arc::new(Grid::new(16).unwrap());
        let t = RadialSymTensor::from_fn(g, |p| [1.0 - p, 0.5, 0.0]);
        assert!(to_dofs(&t).is_err());
    }

    #[test]
    fn dof_roundtrip() {
        let g = Arc::new(Grid::new(16).unwrap());
        let t = RadialSymTensor::from_fn(g.clone(), |p| [p * p, p * p, p]);
        let back = from_dofs(g, &to_dofs(&t).unwrap());
        assert_eq!(back, t);
    }
}
