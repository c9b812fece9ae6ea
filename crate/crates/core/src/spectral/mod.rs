//! Discrete minimization of the energy a(h) over ‖h‖₂ = 1 in the radial
//! diagonal class: the lowest generalized eigenpair of the assembled forms,
//! its residual against an independent operator stencil, and decay checks.

pub mod eigen;
pub mod operator;

pub use eigen::{lowest_eigenpair, EigenOptions, PencilEigen};
pub use operator::{lichnerowicz_apply, nodal_inner};

use crate::banded::SymBanded;
use crate::error::{Error, Result};
use crate::functional::forms::{assemble_form, dof_count, dof_index, from_dofs, FormTerms};
use crate::functional::{Grid, RadialSymTensor};
use serde::Serialize;
use std::sync::Arc;

/// Smallest admissible grid parameter.
pub const MIN_GRID_N: usize = 16;

/// A (energy) and B (mass) on a common dof layout.
#[derive(Debug, Clone)]
pub struct QuadraticFormMatrices {
    pub grid: Arc<Grid>,
    pub a: SymBanded,
    pub b: SymBanded,
}

impl QuadraticFormMatrices {
    /// xᵀAx / xᵀBx.
    pub fn rayleigh_quotient(&self, x: &[f64]) -> f64 {
        self.a.bilinear(x, x) / self.b.bilinear(x, x)
    }
}

/// Assemble the energy and mass forms; B must factor.
pub fn assemble(grid: Arc<Grid>) -> Result<QuadraticFormMatrices> {
    if grid.n() < MIN_GRID_N {
        return Err(Error::Parameter { name: "grid_n", reason: format!("need n >= {MIN_GRID_N}, got {}", grid.n()) });
    }
    let a = assemble_form(&grid, &FormTerms::ENERGY);
    let b = assemble_form(&grid, &FormTerms::MASS);
    b.cholesky().map_err(|e| Error::Assembly(format!("mass matrix is not positive definite: {e}")))?;
    Ok(QuadraticFormMatrices { grid, a, b })
}

/// Lowest eigenpair with diagnostics.
#[derive(Debug, Clone)]
pub struct EigenResult {
    pub lambda: f64,
    /// Mode with ‖h‖₂ = 1 and positive leading u0.
    pub mode: RadialSymTensor,
    /// ‖Δ_L h + λh‖₂ with the strong-form stencil.
    pub residual_l2: f64,
    pub grid_n: usize,
    /// Second Ritz value of the iteration subspace (upper bound on λ₂).
    pub second_ritz: f64,
    /// Eigenvalues below λ/2 counted by inertia of A − (λ/2)B; exactly one
    /// shows that λ is simple with a gap of at least |λ|/2.
    pub count_below_half: usize,
    pub iterations: usize,
}

/// Deterministic starting block: a trace-free profile, a pure-trace
/// profile and a radial–temporal split, all decaying like the volume.
fn starting_block(grid: &Grid) -> Vec<Vec<f64>> {
    let shapes: [fn(f64) -> [f64; 3]; 3] = [
        |p| [1.0, 1.0, -1.0].map(|c| c * (1.0 - p * p).powi(4)),
        |p| [1.0, 1.0, 1.0].map(|c| c * p * p * (1.0 - p * p).powi(4)),
        |p| [p * p, -p * p, 0.5 * p].map(|c| c * (1.0 - p * p).powi(4)),
    ];
    shapes
        .iter()
        .map(|f| {
            let mut x = vec![0.0; dof_count(grid)];
            for (i, &p) in grid.nodes().iter().enumerate() {
                let u = f(p);
                for c in 0..3 {
                    x[dof_index(i, c)] = u[c];
                }
            }
            x
        })
        .collect()
}

/// Smallest eigenvalue of A x = λ B x by shift-and-invert iteration.
pub fn min_eig(mats: &QuadraticFormMatrices, opts: &EigenOptions) -> Result<EigenResult> {
    let pe = lowest_eigenpair(&mats.a, &mats.b, &starting_block(&mats.grid), opts)?;
    let mut mode = from_dofs(mats.grid.clone(), &pe.vector);
    let scale = mode.max_abs();
    if let Some(&lead) = mode.u0.iter().find(|v| v.abs() > 1e-8 * scale) {
        if lead < 0.0 {
            mode = mode.scaled(-1.0);
        }
    }
    let residual_l2 = residual(&mode, pe.lambda)?;
    let count_below_half = mats.a.add_scaled(-0.5 * pe.lambda, &mats.b).negative_pivots()?;
    Ok(EigenResult {
        lambda: pe.lambda,
        mode,
        residual_l2,
        grid_n: mats.grid.n(),
        second_ritz: pe.second,
        count_below_half,
        iterations: pe.iterations,
    })
}

/// ‖Δ_L h + λh‖₂ with node weights.
pub fn residual(h: &RadialSymTensor, lambda: f64) -> Result<f64> {
    let r = lichnerowicz_apply(h)?.combine(1.0, h, lambda)?;
    Ok(nodal_inner(&r, &r).sqrt())
}

/// Fitted end-point constants of a profile.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DecayReport {
    /// sup over 0 < p ≤ 0.1 of |h|/p.
    pub c0: f64,
    pub c0_at: f64,
    /// sup over p ≥ 0.9 of |h|/(1 − p²).
    pub c1: f64,
    pub c1_at: f64,
}

/// Vanishing rates of |h| at the bolt (linear in p) and at infinity
/// (linear in 1 − p²), measured on the grid nodes.
pub fn decay_check(h: &RadialSymTensor) -> DecayReport {
    let mut rep = DecayReport { c0: 0.0, c0_at: 0.0, c1: 0.0, c1_at: 0.0 };
    for (i, &p) in h.grid.nodes().iter().enumerate() {
        let m = h.norm_sq_at(i).sqrt();
        if p > 0.0 && p <= 0.1 && m / p > rep.c0 {
            rep.c0 = m / p;
            rep.c0_at = p;
        }
        if p >= 0.9 && m / (1.0 - p * p) > rep.c1 {
            rep.c1 = m / (1.0 - p * p);
            rep.c1_at = p;
        }
    }
    rep
}

/// Whether two decay constants agree to a relative tolerance.
pub fn constants_stable(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * a.abs().max(b.abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functional::{energy, norm_sq, test_tensor};

    #[test]
    fn small_grids_are_rejected() {
        assert!(assemble(Arc::new(Grid::new(8).unwrap())).is_err());
    }

    #[test]
    fn eigenvalue_is_negative_and_above_minus_two() {
        let mats = assemble(Arc::new(Grid::new(256).unwrap())).unwrap();
        let r = min_eig(&mats, &EigenOptions::default()).unwrap();
        assert!(r.lambda > -2.0 && r.lambda < 0.0, "λ = {}", r.lambda);
        assert!(r.second_ritz > r.lambda + 0.1);
        assert_eq!(r.count_below_half, 1);
        let rq = energy(&r.mode).unwrap() / norm_sq(&r.mode).unwrap();
        assert!((rq - r.lambda).abs() < 1e-8);
        assert!((norm_sq(&r.mode).unwrap() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn test_tensor_vanishes_quadratically_at_the_bolt() {
        // |ĥ| = 2n(r − 1) on the ramp and r − 1 = p²/(1 − p²).
        let g = Arc::new(Grid::new(4096).unwrap());
        let h = test_tensor(g.clone(), 10);
        let p = g.nodes()[5];
        let ratio = h.norm_sq_at(5).sqrt() / (p * p);
        assert!((ratio - 20.0 / (1.0 - p * p)).abs() < 1e-9);
        assert!(decay_check(&h).c0 < 20.0 * 0.1 / 0.99 + 1e-9);
    }
}
