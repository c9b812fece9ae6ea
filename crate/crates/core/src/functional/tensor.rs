//! Diagonal radially symmetric symmetric 2-tensors in frame components.

use super::grid::Grid;
use crate::error::{Error, Result};
use std::sync::Arc;

/// h = u0 g₀₀ dt² + u1 g₀₁₁ dr² + u2 r² dΩ², stored by its frame components
/// u_i = h_ii/g₀_ii at the grid nodes. The two sphere directions share u2,
/// so |h|² = u0² + u1² + 2 u2².
#[derive(Debug, Clone, PartialEq)]
pub struct RadialSymTensor {
    pub grid: Arc<Grid>,
    pub u0: Vec<f64>,
    pub u1: Vec<f64>,
    pub u2: Vec<f64>,
}

impl RadialSymTensor {
    pub fn new(grid: Arc<Grid>, u0: Vec<f64>, u1: Vec<f64>, u2: Vec<f64>) -> Result<Self> {
        let n = grid.len();
        if u0.len() != n || u1.len() != n || u2.len() != n {
            return Err(Error::Data(format!(
                "component lengths ({}, {}, {}) differ from grid size {n}",
                u0.len(),
                u1.len(),
                u2.len()
            )));
        }
        Ok(Self { grid, u0, u1, u2 })
    }

    pub fn zeros(grid: Arc<Grid>) -> Self {
        let n = grid.len();
        Self { grid, u0: vec![0.0; n], u1: vec![0.0; n], u2: vec![0.0; n] }
    }

    /// Sample a profile p ↦ (u0, u1, u2) at the nodes.
    pub fn from_fn<F: Fn(f64) -> [f64; 3]>(grid: Arc<Grid>, f: F) -> Self {
        let mut t = Self::zeros(grid);
        for i in 0..t.grid.len() {
            let [a, b, c] = f(t.grid.nodes()[i]);
            t.u0[i] = a;
            t.u1[i] = b;
            t.u2[i] = c;
        }
        t
    }

    pub fn components(&self) -> [&[f64]; 3] {
        [&self.u0, &self.u1, &self.u2]
    }

    pub fn at(&self, i: usize) -> [f64; 3] {
        [self.u0[i], self.u1[i], self.u2[i]]
    }

    /// |h|² at node i.
    pub fn norm_sq_at(&self, i: usize) -> f64 {
        self.u0[i] * self.u0[i] + self.u1[i] * self.u1[i] + 2.0 * self.u2[i] * self.u2[i]
    }

    /// Largest |u_c| over nodes and components.
    pub fn max_abs(&self) -> f64 {
        self.components().iter().flat_map(|c| c.iter()).fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn check_finite(&self) -> Result<()> {
        if self.components().iter().all(|c| c.iter().all(|v| v.is_finite())) {
            Ok(())
        } else {
            Err(Error::Data("tensor has non-finite samples".into()))
        }
    }

    /// Interpolated frame components and their p-derivatives at p.
    pub fn sample(&self, p: f64) -> Result<([f64; 3], [f64; 3])> {
        let mut v = [0.0; 3];
        let mut d = [0.0; 3];
        for (c, comp) in self.components().iter().enumerate() {
            let (a, b) = self.grid.interpolate(comp, p)?;
            v[c] = a;
            d[c] = b;
        }
        Ok((v, d))
    }

    /// α·self + β·other on the same grid.
    pub fn combine(&self, alpha: f64, other: &Self, beta: f64) -> Result<Self> {
        if self.grid != other.grid {
            return Err(Error::Data("tensors live on different grids".into()));
        }
        let mix = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| alpha * x + beta * y).collect();
        Ok(Self {
            grid: self.grid.clone(),
            u0: mix(&self.u0, &other.u0),
            u1: mix(&self.u1, &other.u1),
            u2: mix(&self.u2, &other.u2),
        })
    }

    pub fn scaled(&self, alpha: f64) -> Self {
        let s = |a: &[f64]| a.iter().map(|x| alpha * x).collect();
        Self { grid: self.grid.clone(), u0: s(&self.u0), u1: s(&self.u1), u2: s(&self.u2) }
    }
}
