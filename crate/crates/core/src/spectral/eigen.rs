//! Smallest eigenpair of a symmetric-definite banded pencil A x = λ B x by
//! shift-and-invert subspace iteration with Rayleigh–Ritz projection.

use crate::banded::{dot, SymBanded};
use crate::error::{Error, Result};
use nalgebra::DMatrix;

/// Iteration controls.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenOptions {
    /// Shift below the whole spectrum; A − σB must be positive definite.
    pub shift: f64,
    /// Convergence threshold on the change of the lowest Ritz value.
    pub tol: f64,
    /// Threshold on the B-norm change of the normalized lowest Ritz vector.
    pub vector_tol: f64,
    pub max_iterations: usize,
    /// Number of vectors iterated together.
    pub block: usize,
}

impl Default for EigenOptions {
    fn default() -> Self {
        Self { shift: -2.1, tol: 1e-10, vector_tol: 1e-7, max_iterations: 10_000, block: 3 }
    }
}

/// Converged lowest eigenpair and the next Ritz value.
#[derive(Debug, Clone, PartialEq)]
pub struct PencilEigen {
    pub lambda: f64,
    /// B-normalized eigenvector.
    pub vector: Vec<f64>,
    /// Second Ritz value of the final subspace (an upper bound on λ₂).
    pub second: f64,
    pub iterations: usize,
}

/// Rayleigh–Ritz on the span of `x`: returns Ritz values ascending and the
/// B-orthonormal Ritz vectors.
fn rayleigh_ritz(a: &SymBanded, b: &SymBanded, x: &[Vec<f64>]) -> Result<(Vec<f64>, Vec<Vec<f64>>)> {
    let k = x.len();
    let ax: Vec<Vec<f64>> = x.iter().map(|v| a.mul_vec(v)).collect();
    let bx: Vec<Vec<f64>> = x.iter().map(|v| b.mul_vec(v)).collect();
    let ap = DMatrix::from_fn(k, k, |i, j| 0.5 * (dot(&x[i], &ax[j]) + dot(&x[j], &ax[i])));
    let bp = DMatrix::from_fn(k, k, |i, j| 0.5 * (dot(&x[i], &bx[j]) + dot(&x[j], &bx[i])));
    let chol = bp
        .cholesky()
        .ok_or_else(|| Error::Assembly("iteration subspace collapsed (projected mass not definite)".into()))?;
    let l = chol.l();
    let linv = l.clone().try_inverse().ok_or_else(|| Error::Assembly("projected mass factor not invertible".into()))?;
    let c = &linv * ap * linv.transpose();
    let c = 0.5 * (&c + c.transpose());
    let eig = c.symmetric_eigen();
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let z = linv.transpose() * &eig.eigenvectors;
    let n = x[0].len();
    let mut values = Vec::with_capacity(k);
    let mut vectors = Vec::with_capacity(k);
    for &col in &order {
        values.push(eig.eigenvalues[col]);
        let mut v = vec![0.0; n];
        for (j, xj) in x.iter().enumerate() {
            let w = z[(j, col)];
            for (vi, xi) in v.iter_mut().zip(xj) {
                *vi += w * xi;
            }
        }
        vectors.push(v);
    }
    Ok((values, vectors))
}

/// Smallest eigenpair of A x = λ B x starting from `start` (one vector per
/// block column; at least one). Fails if A − σB or B is not definite.
pub fn lowest_eigenpair(a: &SymBanded, b: &SymBanded, start: &[Vec<f64>], opts: &EigenOptions) -> Result<PencilEigen> {
    let n = a.size();
    if b.size() != n || start.is_empty() || start.iter().any(|v| v.len() != n) {
        return Err(Error::Parameter { name: "start", reason: "vectors must match the matrix size".into() });
    }
    let k = start.len().min(n).min(opts.block.max(1));
    let shifted = a.add_scaled(-opts.shift, b).cholesky()?;
    b.cholesky().map_err(|e| Error::Assembly(format!("mass matrix not positive definite: {e}")))?;
    let (mut values, mut x) = rayleigh_ritz(a, b, &start[..k])?;
    for it in 1..=opts.max_iterations {
        let y: Vec<Vec<f64>> = x.iter().map(|v| shifted.solve(&b.mul_vec(v))).collect();
        let (new_values, new_x) = rayleigh_ritz(a, b, &y)?;
        let d0 = (new_values[0] - values[0]).abs();
        // Ritz vectors are B-normalized; align signs before comparing.
        let bx = b.mul_vec(&new_x[0]);
        let sign = if dot(&x[0], &bx) < 0.0 { -1.0 } else { 1.0 };
        let diff: Vec<f64> = new_x[0].iter().zip(&x[0]).map(|(a, c)| a - sign * c).collect();
        let dv = b.bilinear(&diff, &diff).max(0.0).sqrt();
        values = new_values;
        x = new_x;
        if d0 <= opts.tol && dv <= opts.vector_tol {
            let v = x.swap_remove(0);
            return Ok(PencilEigen {
                lambda: values[0],
                vector: v,
                second: values.get(1).copied().unwrap_or(f64::INFINITY),
                iterations: it,
            });
        }
    }
    Err(Error::NoConvergence { iterations: opts.max_iterations, last_value: values[0] })
}
