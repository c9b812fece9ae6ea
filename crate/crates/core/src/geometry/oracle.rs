//! Independent finite-difference curvature of a diagonal 4-metric.
//!
//! Only metric *values* are used: first derivatives come from Richardson
//! extrapolated central differences, the Christoffel symbols from the
//! Levi-Civita formula, and the Riemann tensor from a second round of
//! differences of those symbols. Nothing here shares code with the closed
//! forms in `curvature`.

use std::f64::consts::FRAC_PI_2;

/// Relative step for differentiating the metric when reporting Christoffel
/// symbols.
pub const METRIC_STEP: f64 = 1e-5;
/// Metric step used for the symbols that are differentiated a second time;
/// close to the roundoff/truncation optimum of a Richardson central
/// difference, so the second difference is not swamped by noise.
pub const INNER_METRIC_STEP: f64 = 1e-3;
/// Relative step for differentiating Christoffel symbols.
pub const CONNECTION_STEP: f64 = 1e-2;

/// Finite-difference connection and curvature at (r, θ = π/2).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleCurvature {
    pub christoffel: [[[f64; 4]; 4]; 4],
    /// R_ijij = g_ii R^i_jij.
    pub riemann_diag: [[f64; 4]; 4],
    pub ricci: [[f64; 4]; 4],
}

/// Richardson-extrapolated central difference.
pub fn richardson<F: Fn(f64) -> f64>(f: F, x: f64, h: f64) -> f64 {
    let d = |h: f64| (f(x + h) - f(x - h)) / (2.0 * h);
    (4.0 * d(0.5 * h) - d(h)) / 3.0
}

/// Oracle for a metric given by its diagonal (g_tt, g_rr, g_θθ, g_φφ) as a
/// function of (r, θ). `horizon` is the radius where the chart degenerates
/// (steps are scaled by the distance to it).
pub struct FiniteDifferenceOracle<G: Fn(f64, f64) -> [f64; 4]> {
    metric: G,
    horizon: f64,
}

impl<G: Fn(f64, f64) -> [f64; 4]> FiniteDifferenceOracle<G> {
    pub fn new(metric: G, horizon: f64) -> Self {
        Self { metric, horizon }
    }

    fn radial_scale(&self, r: f64) -> f64 {
        (r - self.horizon).min(r).max(1e-3)
    }

    /// ∂_a g_bb for coordinate a at (r, θ); only r and θ derivatives are nonzero.
    fn metric_derivative(&self, a: usize, r: f64, th: f64, step: f64) -> [f64; 4] {
        let mut out = [0.0; 4];
        for b in 0..4 {
            out[b] = match a {
                1 => richardson(|x| (self.metric)(x, th)[b], r, step * self.radial_scale(r)),
                2 => richardson(|x| (self.metric)(r, x)[b], th, step),
                _ => 0.0,
            };
        }
        out
    }

    /// Γ^k_ij = ½ g^kk (∂_i g_jk + ∂_j g_ik − ∂_k g_ij) for a diagonal metric.
    pub fn christoffel_at(&self, r: f64, th: f64, step: f64) -> [[[f64; 4]; 4]; 4] {
        let g = (self.metric)(r, th);
        let dg: Vec<[f64; 4]> = (0..4).map(|a| self.metric_derivative(a, r, th, step)).collect();
        let mut gam = [[[0.0; 4]; 4]; 4];
        for k in 0..4 {
            for i in 0..4 {
                for j in 0..4 {
                    let mut s = 0.0;
                    if j == k {
                        s += dg[i][k];
                    }
                    if i == k {
                        s += dg[j][k];
                    }
                    if i == j {
                        s -= dg[k][i];
                    }
                    gam[k][i][j] = 0.5 * s / g[k];
                }
            }
        }
        gam
    }

    /// ∂_a Γ at (r, θ).
    fn christoffel_derivative(&self, a: usize, r: f64, th: f64) -> [[[f64; 4]; 4]; 4] {
        let mut out = [[[0.0; 4]; 4]; 4];
        if a != 1 && a != 2 {
            return out;
        }
        let h = if a == 1 { CONNECTION_STEP * self.radial_scale(r) } else { CONNECTION_STEP };
        let at = |x: f64| {
            if a == 1 {
                self.christoffel_at(x, th, INNER_METRIC_STEP)
            } else {
                self.christoffel_at(r, x, INNER_METRIC_STEP)
            }
        };
        let x0 = if a == 1 { r } else { th };
        let d = |h: f64| {
            let (p, m) = (at(x0 + h), at(x0 - h));
            let mut d = [[[0.0; 4]; 4]; 4];
            for k in 0..4 {
                for i in 0..4 {
                    for j in 0..4 {
                        d[k][i][j] = (p[k][i][j] - m[k][i][j]) / (2.0 * h);
                    }
                }
            }
            d
        };
        let (coarse, fine) = (d(h), d(0.5 * h));
        for k in 0..4 {
            for i in 0..4 {
                for j in 0..4 {
                    out[k][i][j] = (4.0 * fine[k][i][j] - coarse[k][i][j]) / 3.0;
                }
            }
        }
        out
    }

    /// Connection and curvature at the equator.
    pub fn evaluate(&self, r: f64) -> OracleCurvature {
        let th = FRAC_PI_2;
        let g = (self.metric)(r, th);
        let gam = self.christoffel_at(r, th, METRIC_STEP);
        let inner = self.christoffel_at(r, th, INNER_METRIC_STEP);
        let dgam: Vec<[[[f64; 4]; 4]; 4]> = (0..4).map(|a| self.christoffel_derivative(a, r, th)).collect();
        // R^a_bcd = ∂_c Γ^a_db − ∂_d Γ^a_cb + Γ^a_ce Γ^e_db − Γ^a_de Γ^e_cb
        let riem_up = |a: usize, b: usize, c: usize, d: usize| {
            let mut v = dgam[c][a][d][b] - dgam[d][a][c][b];
            for e in 0..4 {
                v += inner[a][c][e] * inner[e][d][b] - inner[a][d][e] * inner[e][c][b];
            }
            v
        };
        let mut riemann_diag = [[0.0; 4]; 4];
        let mut ricci = [[0.0; 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                if i != j {
                    riemann_diag[i][j] = g[i] * riem_up(i, j, i, j);
                }
                ricci[i][j] = (0..4).map(|a| riem_up(a, i, a, j)).sum();
            }
        }
        OracleCurvature { christoffel: gam, riemann_diag, ricci }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_two_sphere_has_curvature_one() {
        // dt² + dr² + dθ² + sin²θ dφ² with the sphere radius fixed to 1.
        let oracle = FiniteDifferenceOracle::new(|_r, th: f64| [1.0, 1.0, 1.0, th.sin().powi(2)], 0.0);
        let c = oracle.evaluate(2.0);
        assert!((c.riemann_diag[2][3] - 1.0).abs() < 1e-8);
        assert!((c.ricci[2][2] - 1.0).abs() < 1e-8);
        assert!(c.riemann_diag[0][1].abs() < 1e-10);
    }
}
