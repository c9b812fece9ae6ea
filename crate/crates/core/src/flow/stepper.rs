//! Linearly implicit Euler stepping: the Jacobian of the tendencies at the
//! background is built once by coloured finite differences, and every step
//! solves (I − dt J) ΔG = dt F(G).

use super::rhs::{rhs, RhsForm};
use super::sgrid::{Background, SGrid};
use crate::banded::{BandLu, Banded};
use crate::error::{Error, Result};
use std::sync::Arc;

/// Cells on each side of a difference stencil.
const STENCIL_RADIUS: usize = 2;
/// Half-bandwidth of the Jacobian in the interleaved layout 3j + c.
const JACOBIAN_BAND: usize = 3 * STENCIL_RADIUS + 2;
/// Cells sharing a colour are far enough apart that their stencils never overlap.
const COLOURS: usize = 2 * STENCIL_RADIUS + 1;
/// Perturbation of the coloured difference quotients.
const JACOBIAN_STEP: f64 = 1e-5;
/// Frame ratios must stay inside this interval.
pub const POSITIVITY_BOUNDS: (f64, f64) = (0.5, 2.0);

/// Default time step min(1e−3, ¼ Δs² / max g^{ss}) for the background.
pub fn default_dt(grid: &SGrid, bg: &Background) -> f64 {
    let max_inv = bg.jets.iter().map(|j| 1.0 / j.g[1]).fold(0.0f64, f64::max);
    (0.25 * grid.ds() * grid.ds() / max_inv).min(1e-3)
}

/// Jacobian of the tendencies at G ≡ 1 by central differences, with
/// `COLOURS` groups of cells per component.
pub fn background_jacobian(grid: &SGrid, bg: &Background, form: RhsForm) -> Banded {
    let n = grid.len();
    let ones = [vec![1.0; n], vec![1.0; n], vec![1.0; n]];
    let mut jac = Banded::zeros(3 * n, JACOBIAN_BAND, JACOBIAN_BAND);
    for c in 0..3 {
        for colour in 0..COLOURS {
            let shifted = |sign: f64| {
                let mut g = ones.clone();
                for j in (colour..n).step_by(COLOURS) {
                    g[c][j] += sign * JACOBIAN_STEP;
                }
                rhs(grid, bg, &g, form)
            };
            let (fp, fm) = (shifted(1.0), shifted(-1.0));
            for j in (colour..n).step_by(COLOURS) {
                for row in j.saturating_sub(STENCIL_RADIUS)..(j + STENCIL_RADIUS + 1).min(n) {
                    for cr in 0..3 {
                        let v = (fp[cr][row] - fm[cr][row]) / (2.0 * JACOBIAN_STEP);
                        jac.set(3 * row + cr, 3 * j + c, v);
                    }
                }
            }
        }
    }
    jac
}

/// Fixed-step integrator for one grid and background.
pub struct Stepper {
    grid: Arc<SGrid>,
    bg: Arc<Background>,
    dt: f64,
    form: RhsForm,
    lu: BandLu,
}

impl Stepper {
    pub fn new(grid: Arc<SGrid>, bg: Arc<Background>, dt: f64, form: RhsForm) -> Result<Self> {
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(Error::Parameter { name: "dt", reason: format!("must be positive, got {dt}") });
        }
        let jac = background_jacobian(&grid, &bg, form);
        let n = 3 * grid.len();
        let mut m = Banded::zeros(n, JACOBIAN_BAND, JACOBIAN_BAND);
        for i in 0..n {
            for j in i.saturating_sub(JACOBIAN_BAND)..(i + JACOBIAN_BAND + 1).min(n) {
                let id = if i == j { 1.0 } else { 0.0 };
                m.set(i, j, id - dt * jac.get(i, j));
            }
        }
        let lu = m.lu()?;
        Ok(Self { grid, bg, dt, form, lu })
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    /// Advance G by one step; fails on non-finite values or when a ratio
    /// leaves the positivity bounds (G is left at the offending values).
    pub fn step(&self, g: &mut [Vec<f64>; 3]) -> Result<()> {
        let f = rhs(&self.grid, &self.bg, g, self.form);
        let n = self.grid.len();
        let mut b = vec![0.0; 3 * n];
        for j in 0..n {
            for c in 0..3 {
                b[3 * j + c] = self.dt * f[c][j];
            }
        }
        let dx = self.lu.solve(&b);
        for j in 0..n {
            for c in 0..3 {
                g[c][j] += dx[3 * j + c];
            }
        }
        check_positive(g)
    }
}

/// Ratios must be finite and inside `POSITIVITY_BOUNDS`.
pub fn check_positive(g: &[Vec<f64>; 3]) -> Result<()> {
    let (lo, hi) = POSITIVITY_BOUNDS;
    for comp in g {
        for &v in comp {
            if !(v > lo && v < hi) {
                return Err(Error::Flow { t: f64::NAN, reason: format!("frame ratio {v} left ({lo}, {hi})") });
            }
        }
    }
    Ok(())
}

/// Relative eigen-residual at which the grid mode is accepted.
const GRID_MODE_TOL: f64 = 1e-10;
const GRID_MODE_MAX_ITER: usize = 50;

/// The seed mode as the flow grid sees it: the eigenvector of the
/// linearized tendencies at g₀ whose eigenvalue is nearest −λ, found by
/// shifted inverse iteration from the interpolated mode `start`. Returns
/// the profiles (sign and L² norm matched to `start`) and the growth rate
/// μ of the discrete flow, which approximates −λ.
pub fn grid_mode(grid: &SGrid, lambda: f64, start: &[Vec<f64>; 3], form: RhsForm) -> Result<([Vec<f64>; 3], f64)> {
    let n = grid.len();
    let zero = [vec![0.0; n], vec![0.0; n], vec![0.0; n]];
    let bg = Background::new(grid, super::sgrid::BackgroundKind::G0, 0.0, zero)?;
    let jac = background_jacobian(grid, &bg, form);
    let vol = grid.volume();
    let norm = |x: &[f64]| {
        (0..n)
            .map(|j| vol[j] * (x[3 * j].powi(2) + x[3 * j + 1].powi(2) + 2.0 * x[3 * j + 2].powi(2)))
            .sum::<f64>()
            .sqrt()
    };
    let mut x = vec![0.0; 3 * n];
    for j in 0..n {
        for c in 0..3 {
            x[3 * j + c] = start[c][j];
        }
    }
    let target = norm(&x);
    if !(target > 0.0) {
        return Err(Error::Parameter { name: "mode", reason: "seed mode vanishes on the flow grid".into() });
    }
    // Shift slightly above −λ so the factorization stays regular.
    let sigma = -lambda * (1.0 + 1e-3);
    let mut m = jac.clone();
    for i in 0..3 * n {
        m.set(i, i, jac.get(i, i) - sigma);
    }
    let lu = m.lu()?;
    let mut mu = f64::NAN;
    for _ in 0..GRID_MODE_MAX_ITER {
        let y = lu.solve(&x);
        let s = norm(&y);
        x = y.iter().map(|v| v / s).collect();
        let jx = jac.mul_vec(&x);
        let xx: f64 = x.iter().map(|v| v * v).sum();
        mu = x.iter().zip(&jx).map(|(a, b)| a * b).sum::<f64>() / xx;
        let res: f64 = jx.iter().zip(&x).map(|(a, b)| (a - mu * b).powi(2)).sum::<f64>().sqrt();
        let scale: f64 = jx.iter().map(|v| v * v).sum::<f64>().sqrt();
        if res <= GRID_MODE_TOL * scale {
            let dot: f64 = (0..n)
                .map(|j| x[3 * j] * start[0][j] + x[3 * j + 1] * start[1][j] + 2.0 * x[3 * j + 2] * start[2][j])
                .sum();
            let sign = if dot < 0.0 { -1.0 } else { 1.0 };
            let out = [0, 1, 2].map(|c| (0..n).map(|j| sign * target * x[3 * j + c]).collect());
            return Ok((out, mu));
        }
    }
    Err(Error::NoConvergence { iterations: GRID_MODE_MAX_ITER, last_value: -mu })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flow::sgrid::BackgroundKind;

    #[test]
    fn jacobian_reproduces_the_linear_response() {
        let n = 128;
        let grid = SGrid::new(n, 20.0).unwrap();
        let bg = Background::new(&grid, BackgroundKind::G0, 0.0, [vec![0.0; n], vec![0.0; n], vec![0.0; n]]).unwrap();
        let jac = background_jacobian(&grid, &bg, RhsForm::Expanded);
        let eps = 1e-7;
        let pert: [Vec<f64>; 3] =
            [0.5, 0.5, -0.4].map(|a| grid.centers().iter().map(|s| a * (-s * s / 9.0).exp()).collect());
        let g: [Vec<f64>; 3] = [0, 1, 2].map(|c| pert[c].iter().map(|p| 1.0 + eps * p).collect());
        let f = rhs(&grid, &bg, &g, RhsForm::Expanded);
        let mut x = vec![0.0; 3 * n];
        for j in 0..n {
            for c in 0..3 {
                x[3 * j + c] = eps * pert[c][j];
            }
        }
        let lin = jac.mul_vec(&x);
        for j in 0..n {
            for c in 0..3 {
                let (l, d) = (lin[3 * j + c], f[c][j]);
                assert!((l - d).abs() < 1e-4 * eps.max(d.abs()), "{j} {c}: {l} vs {d}");
            }
        }
    }

    #[test]
    fn background_stays_fixed() {
        let n = 64;
        let grid = Arc::new(SGrid::new(n, 20.0).unwrap());
        let bg = Arc::new(
            Background::new(&grid, BackgroundKind::G0, 0.0, [vec![0.0; n], vec![0.0; n], vec![0.0; n]]).unwrap(),
        );
        let st = Stepper::new(grid, bg, 1e-3, RhsForm::Expanded).unwrap();
        let mut g = [vec![1.0; n], vec![1.0; n], vec![1.0; n]];
        for _ in 0..100 {
            st.step(&mut g).unwrap();
        }
        assert!(g.iter().flatten().all(|v| (v - 1.0).abs() < 1e-12));
    }
}
