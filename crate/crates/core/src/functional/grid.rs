//! Uniform p-grid with the Schwarzschild volume density.

use crate::error::{Error, Result};
use crate::quadrature::gauss_legendre;
use std::f64::consts::PI;

/// Area of the unit 2-sphere.
pub const OMEGA2: f64 = 4.0 * PI;
/// Factor turning a p-integral of a radial density into a 4-D integral:
/// time period 4π times the sphere area.
pub const ANGULAR_FACTOR: f64 = 4.0 * PI * OMEGA2;

/// Volume density in the p-chart per unit angular factor:
/// r² dr = 2p/(1 − p²)⁴ dp.
pub fn volume_density(p: f64) -> f64 {
    let q = 1.0 - p * p;
    2.0 * p / (q * q * q * q)
}

/// Antiderivative of `volume_density`: (1 − p²)⁻³/3 = r³/3.
pub fn volume_antiderivative(p: f64) -> f64 {
    let q = 1.0 - p * p;
    1.0 / (3.0 * q * q * q)
}

/// Nodes p_i = i/n for i = 0..n−1. Node 0 sits on the horizon bolt; the value
/// at p_max = 1 − 1/n is held at zero and is not stored.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    n: usize,
    h: f64,
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

/// Gauss points per element for all element integrals.
pub(crate) const ELEMENT_POINTS: usize = 6;

impl Grid {
    /// Grid with spacing 1/n.
    pub fn new(n: usize) -> Result<Self> {
        if n < 4 {
            return Err(Error::Parameter { name: "n", reason: format!("need n >= 4, got {n}") });
        }
        let h = 1.0 / n as f64;
        let nodes: Vec<f64> = (0..n - 1).map(|i| i as f64 * h).collect();
        let mut grid = Self { n, h, nodes, weights: Vec::new() };
        grid.weights = grid.lumped_weights();
        Ok(grid)
    }

    /// Resolution parameter (1/h).
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    /// Number of stored nodes (n − 1).
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    /// Outer end where values vanish.
    pub fn p_max(&self) -> f64 {
        1.0 - self.h
    }

    /// Node quadrature weights ANGULAR_FACTOR · ∫ ρ φ_i dp with hat
    /// functions φ_i; the node held at zero on p_max takes no weight.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    fn lumped_weights(&self) -> Vec<f64> {
        let (gx, gw) = gauss_legendre(ELEMENT_POINTS);
        let mut w = vec![0.0; self.len()];
        for e in 0..self.len() {
            let (a, b) = (e as f64 * self.h, (e + 1) as f64 * self.h);
            for (x, wt) in gx.iter().zip(&gw) {
                let p = 0.5 * (a + b) + 0.5 * self.h * x;
                let dv = 0.5 * self.h * wt * volume_density(p) * ANGULAR_FACTOR;
                w[e] += dv * (b - p) / self.h;
                if e + 1 < self.len() {
                    w[e + 1] += dv * (p - a) / self.h;
                }
            }
        }
        w
    }

    /// Exact 4-D volume of the shell p ∈ [a, b].
    pub fn volume(a: f64, b: f64) -> f64 {
        ANGULAR_FACTOR * (volume_antiderivative(b) - volume_antiderivative(a))
    }

    /// Value at extended node index k: mirrored through the bolt for k < 0,
    /// zero from the outer end on.
    pub(crate) fn extended(values: &[f64], k: isize) -> f64 {
        let k = k.unsigned_abs();
        values.get(k).copied().unwrap_or(0.0)
    }

    /// Local cubic Lagrange interpolation of nodal values (even extension
    /// through the bolt, zero past p_max): value and p-derivative.
    pub fn interpolate(&self, values: &[f64], p: f64) -> Result<(f64, f64)> {
        if !(p >= 0.0 && p <= self.p_max() + 1e-15) {
            return Err(Error::Extrapolation { p, lo: 0.0, hi: self.p_max() });
        }
        let cell = ((p / self.h).floor() as isize).clamp(0, self.len() as isize - 1);
        let t = p / self.h - cell as f64;
        // Stencil nodes at offsets −1, 0, 1, 2 relative to the cell start.
        let f: Vec<f64> = (-1..=2).map(|o| Self::extended(values, cell + o)).collect();
        let xs = [-1.0, 0.0, 1.0, 2.0];
        let (mut v, mut d) = (0.0, 0.0);
        for j in 0..4 {
            let mut l = 1.0;
            let mut dl = 0.0;
            for m in 0..4 {
                if m == j {
                    continue;
                }
                let denom = xs[j] - xs[m];
                dl = dl * (t - xs[m]) / denom + l / denom;
                l *= (t - xs[m]) / denom;
            }
            v += f[j] * l;
            d += f[j] * dl;
        }
        Ok((v, d / self.h))
    }

    /// ANGULAR_FACTOR · ∫_a^b f ρ dp for f the cubic interpolant of `values`.
    pub fn integrate(&self, values: &[f64], a: f64, b: f64) -> Result<f64> {
        if values.len() != self.len() {
            return Err(Error::Data(format!("expected {} values, got {}", self.len(), values.len())));
        }
        if !(0.0 <= a && a <= b && b <= self.p_max()) {
            return Err(Error::Extrapolation { p: if a < 0.0 { a } else { b }, lo: 0.0, hi: self.p_max() });
        }
        let (gx, gw) = gauss_legendre(ELEMENT_POINTS);
        let mut total = 0.0;
        let first = (a / self.h).floor() as usize;
        let mut cell = first;
        loop {
            let lo = (cell as f64 * self.h).max(a);
            let hi = ((cell + 1) as f64 * self.h).min(b);
            if hi > lo {
                for (x, w) in gx.iter().zip(&gw) {
                    let p = 0.5 * (lo + hi) + 0.5 * (hi - lo) * x;
                    total += 0.5 * (hi - lo) * w * self.interpolate(values, p)?.0 * volume_density(p);
                }
            }
            if (cell + 1) as f64 * self.h >= b {
                break;
            }
            cell += 1;
        }
        Ok(ANGULAR_FACTOR * total)
    }
}
