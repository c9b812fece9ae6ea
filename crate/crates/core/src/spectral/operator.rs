//! Strong-form Lichnerowicz Laplacian on radial diagonal tensors, built
//! from the orthonormal-frame connection of g₀ independently of the
//! variational densities.

use crate::error::{Error, Result};
use crate::functional::{Grid, RadialSymTensor};
use crate::geometry::{curvature::sectional_from_jet, DiagonalRadialMetric, Schwarzschild};

/// Offset of the samples extrapolated to the bolt curvature; the closed
/// forms cancel catastrophically at r = 1 itself.
const BOLT_OFFSET: f64 = 1e-4;

/// Unit radial derivative d/ds = σ d/dp with σ = (1 − p²)²/2.
fn sigma(p: f64) -> f64 {
    let q = 1.0 - p * p;
    0.5 * q * q
}

/// Logarithmic derivatives of the frame warping functions in s: the time
/// circle has radius p, the spheres radius r.
fn warping(p: f64) -> [f64; 4] {
    let q = 1.0 - p * p;
    [sigma(p) / p, 0.0, p * q, p * q]
}

/// Frame connection ω[k][i][m] = ⟨∇_{e_k} e_i, e_m⟩ at the equator.
fn connection(p: f64) -> [[[f64; 4]; 4]; 4] {
    let f = warping(p);
    let mut w = [[[0.0; 4]; 4]; 4];
    for k in [0, 2, 3] {
        w[k][k][1] = -f[k];
        w[k][1][k] = f[k];
    }
    w
}

/// Frame sectional curvatures of g₀ at p (bolt limit for p = 0).
fn frame_curvature(p: f64) -> [[f64; 4]; 4] {
    let at = |r: f64| sectional_from_jet(&Schwarzschild.jet(r));
    if p > 0.0 {
        return at(1.0 / ((1.0 - p) * (1.0 + p)));
    }
    // Quadratic extrapolation from r = 1 + δ, 1 + 2δ, 1 + 3δ.
    let (k1, k2, k3) = (at(1.0 + BOLT_OFFSET), at(1.0 + 2.0 * BOLT_OFFSET), at(1.0 + 3.0 * BOLT_OFFSET));
    let mut k = [[0.0; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            k[i][j] = 3.0 * k1[i][j] - 3.0 * k2[i][j] + k3[i][j];
        }
    }
    k
}

/// Rough Laplacian of the diagonal tensor with frame values `u`, unit
/// radial derivatives `du` and second unit derivatives `ddu`.
fn rough_laplacian(p: f64, u: [f64; 4], du: [f64; 4], ddu: [f64; 4]) -> [f64; 4] {
    let w = connection(p);
    let diag = |v: [f64; 4]| {
        let mut m = [[0.0; 4]; 4];
        for i in 0..4 {
            m[i][i] = v[i];
        }
        m
    };
    let (h, dh) = (diag(u), diag(du));
    // t[k][i][j] = (∇_k h)_ij.
    let mut t = [[[0.0; 4]; 4]; 4];
    for k in 0..4 {
        for i in 0..4 {
            for j in 0..4 {
                let mut v = if k == 1 { dh[i][j] } else { 0.0 };
                for m in 0..4 {
                    v -= w[k][i][m] * h[m][j] + w[k][j][m] * h[i][m];
                }
                t[k][i][j] = v;
            }
        }
    }
    let mut out = [0.0; 4];
    for i in 0..4 {
        // Only the radial direction differentiates; (∇_1 h) = D h.
        let mut v = ddu[i];
        for k in 0..4 {
            for m in 0..4 {
                v -= w[k][k][m] * t[m][i][i] + w[k][i][m] * t[k][m][i] + w[k][i][m] * t[k][i][m];
            }
        }
        out[i] = v;
    }
    out
}

/// Δ_L h = Δh + 2 R∘h in frame components at the nodes, with second-order
/// central differences, zero values beyond p_max and the even extension
/// through the bolt. At p = 0 the singular connection terms are replaced
/// by their limits, which involve second p-derivatives only.
pub fn lichnerowicz_apply(h: &RadialSymTensor) -> Result<RadialSymTensor> {
    h.check_finite()?;
    let grid = h.grid.clone();
    let n = grid.len();
    if n < 3 {
        return Err(Error::Domain { chart: "p", value: n as f64, domain: "at least three nodes".into() });
    }
    let dp = grid.h();
    let comps = h.components();
    let val = |c: usize, k: isize| Grid::extended(comps[c], k);
    let mut out = RadialSymTensor::zeros(grid.clone());
    for i in 0..n {
        let p = grid.nodes()[i];
        let ii = i as isize;
        let u3 = [val(0, ii), val(1, ii), val(2, ii)];
        let d2: Vec<f64> = (0..3).map(|c| (val(c, ii + 1) - 2.0 * val(c, ii) + val(c, ii - 1)) / (dp * dp)).collect();
        let k = frame_curvature(p);
        let u = [u3[0], u3[1], u3[2], u3[2]];
        let lap = if i == 0 {
            // Limits at the bolt: d/ds → ½ d/dp, the time-circle terms give
            // another ¼ u″ and ¼ (u1 − u0)″ cross-couplings.
            let x = d2[1] - d2[0];
            [0.5 * d2[0] + 0.25 * x, 0.5 * d2[1] - 0.25 * x, 0.5 * d2[2], 0.5 * d2[2]]
        } else {
            let (sm, s0, sp) = (sigma(p - 0.5 * dp), sigma(p), sigma(p + 0.5 * dp));
            let mut du = [0.0; 4];
            let mut ddu = [0.0; 4];
            for c in 0..3 {
                let (a, b, cc) = (val(c, ii - 1), val(c, ii), val(c, ii + 1));
                du[c] = s0 * (cc - a) / (2.0 * dp);
                ddu[c] = s0 * (sp * (cc - b) - sm * (b - a)) / (dp * dp);
            }
            du[3] = du[2];
            ddu[3] = ddu[2];
            rough_laplacian(p, u, du, ddu)
        };
        let mut res = [0.0; 3];
        for (c, r) in res.iter_mut().enumerate() {
            let coupling: f64 = (0..4).map(|m| k[c][m] * u[m]).sum();
            *r = lap[c] + 2.0 * coupling;
        }
        out.u0[i] = res[0];
        out.u1[i] = res[1];
        out.u2[i] = res[2];
    }
    Ok(out)
}

/// Node-weighted L² inner product ⟨h, k⟩ with the hat-function weights.
pub fn nodal_inner(h: &RadialSymTensor, k: &RadialSymTensor) -> f64 {
    let w = h.grid.weights();
    (0..w.len()).map(|i| w[i] * (h.u0[i] * k.u0[i] + h.u1[i] * k.u1[i] + 2.0 * h.u2[i] * k.u2[i])).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::sync::Arc;

    #[test]
    fn zero_maps_to_zero() {
        let g = Arc::new(Grid::new(64).unwrap());
        let z = RadialSymTensor::zeros(g);
        assert_eq!(lichnerowicz_apply(&z).unwrap(), z);
    }

    #[test]
    fn metric_is_annihilated_away_from_the_cut() {
        // g₀ itself: ∇g₀ = 0 and Ric = 0, so Δ_L g₀ = 0.
        let g = Arc::new(Grid::new(256).unwrap());
        let h = RadialSymTensor::from_fn(g.clone(), |_| [1.0, 1.0, 1.0]);
        let l = lichnerowicz_apply(&h).unwrap();
        for i in 0..g.len() - 1 {
            assert!(l.at(i).iter().all(|v| v.abs() < 1e-8), "node {i}: {:?}", l.at(i));
        }
    }

    #[test]
    fn connection_is_metric_compatible() {
        let w = connection(0.37);
        for k in 0..4 {
            for i in 0..4 {
                for m in 0..4 {
                    assert_eq!(w[k][i][m], -w[k][m][i]);
                }
            }
        }
    }
}
