//! Norms and cone geometry of perturbations on the s-grid. Perturbations
//! are frame components x_c = g_cc/g₀_cc − 1 relative to g₀; the sphere
//! pair counts twice in every pointwise norm.

use super::sgrid::{Background, SGrid};
use crate::error::{Error, Result};
use serde::Serialize;

/// Multiplicity of each stored component in |x|².
const MULTIPLICITY: [f64; 3] = [1.0, 1.0, 2.0];
/// Fraction of outermost cells forming the far field.
pub const FARFIELD_FRACTION: f64 = 0.05;

pub type Profiles = [Vec<f64>; 3];

/// Frame components of g − g₀ for the state ratios G = g/ḡ.
pub fn perturbation(bg: &Background, g: &Profiles) -> Profiles {
    [0, 1, 2].map(|c| g[c].iter().enumerate().map(|(j, v)| bg.ratio_to_g0(c, j) * v - 1.0).collect())
}

/// Frame components of v = g − ḡ.
pub fn deviation_from_background(bg: &Background, g: &Profiles) -> Profiles {
    [0, 1, 2].map(|c| g[c].iter().enumerate().map(|(j, v)| bg.ratio_to_g0(c, j) * (v - 1.0)).collect())
}

/// a·x + b·y componentwise.
pub fn combine(a: f64, x: &Profiles, b: f64, y: &Profiles) -> Profiles {
    [0, 1, 2].map(|c| x[c].iter().zip(&y[c]).map(|(u, v)| a * u + b * v).collect())
}

/// ∫⟨x, y⟩ dV_{g₀}.
pub fn l2_inner(grid: &SGrid, x: &Profiles, y: &Profiles) -> f64 {
    let vol = grid.volume();
    (0..grid.len()).map(|j| vol[j] * (0..3).map(|c| MULTIPLICITY[c] * x[c][j] * y[c][j]).sum::<f64>()).sum()
}

pub fn l2_norm(grid: &SGrid, x: &Profiles) -> f64 {
    l2_inner(grid, x, x).sqrt()
}

/// Frame components (∇_k x)_ij of the g₀ covariant derivative at every
/// cell, with differences taken against a vanishing outer value.
fn covariant_derivatives(grid: &SGrid, bg: &Background, x: &Profiles) -> Vec<[[[f64; 4]; 4]; 4]> {
    let d: Vec<Vec<f64>> = x.iter().map(|c| grid.derivatives(c, 0.0).0).collect();
    (0..grid.len())
        .map(|j| {
            let fd = &bg.g0_frames[j];
            let w = fd.connection();
            let v = [x[0][j], x[1][j], x[2][j], x[2][j]];
            let dv = [d[0][j], d[1][j], d[2][j], d[2][j]].map(|a| a / fd.sqrt_b);
            let mut t = [[[0.0; 4]; 4]; 4];
            for k in 0..4 {
                for i in 0..4 {
                    for l in 0..4 {
                        let mut e = if k == 1 && i == l { dv[i] } else { 0.0 };
                        e -= w[k][i][l] * v[l] + w[k][l][i] * v[i];
                        t[k][i][l] = e;
                    }
                }
            }
            t
        })
        .collect()
}

/// W^{1,2} inner product ∫⟨x, y⟩ + ⟨∇x, ∇y⟩ with respect to g₀.
pub fn w12_inner(grid: &SGrid, bg: &Background, x: &Profiles, y: &Profiles) -> f64 {
    let tx = covariant_derivatives(grid, bg, x);
    let ty = covariant_derivatives(grid, bg, y);
    let vol = grid.volume();
    let grad: f64 = (0..grid.len())
        .map(|j| {
            let mut s = 0.0;
            for k in 0..4 {
                for i in 0..4 {
                    for l in 0..4 {
                        s += tx[j][k][i][l] * ty[j][k][i][l];
                    }
                }
            }
            vol[j] * s
        })
        .sum();
    l2_inner(grid, x, y) + grad
}

pub fn w12_norm(grid: &SGrid, bg: &Background, x: &Profiles) -> f64 {
    w12_inner(grid, bg, x, x).max(0.0).sqrt()
}

/// Distance of a perturbation from the ray {δh : δ > 0}.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConeReport {
    /// inf over δ > 0 of ‖x − δh‖/δ.
    pub opening: f64,
    /// Minimizing δ; infinite when the infimum is only approached as δ → ∞.
    pub delta_star: f64,
}

/// Closed-form cone distance from the W^{1,2} Gram entries of x and h.
/// With τ = 1/δ the objective is ‖τx − h‖, a quadratic in τ ≥ 0.
pub fn cone_from_gram(xx: f64, xh: f64, hh: f64) -> Result<ConeReport> {
    if !(hh > 0.0) {
        return Err(Error::Parameter { name: "h", reason: "direction tensor vanishes".into() });
    }
    if xx > 0.0 && xh > 0.0 {
        let opening = (hh - xh * xh / xx).max(0.0).sqrt();
        Ok(ConeReport { opening, delta_star: xx / xh })
    } else {
        Ok(ConeReport { opening: hh.sqrt(), delta_star: f64::INFINITY })
    }
}

/// Cone distance of x from the ray through h in W^{1,2}.
pub fn cone_distance(grid: &SGrid, bg: &Background, x: &Profiles, h: &Profiles) -> Result<ConeReport> {
    cone_from_gram(w12_inner(grid, bg, x, x), w12_inner(grid, bg, x, h), w12_inner(grid, bg, h, h))
}

/// Largest pointwise |v| over the outer `FARFIELD_FRACTION` of cells divided
/// by the global maximum (zero for v ≡ 0).
pub fn farfield_ratio(v: &Profiles) -> f64 {
    let n = v[0].len();
    let norm = |j: usize| (0..3).map(|c| MULTIPLICITY[c] * v[c][j] * v[c][j]).sum::<f64>().sqrt();
    let global = (0..n).map(norm).fold(0.0, f64::max);
    if global == 0.0 {
        return 0.0;
    }
    let start = n - ((n as f64 * FARFIELD_FRACTION).ceil() as usize).max(1);
    (start..n).map(norm).fold(0.0, f64::max) / global
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flow::sgrid::BackgroundKind;
    use proptest::prelude::*;

    fn setup() -> (SGrid, Background, Profiles) {
        let n = 200;
        let grid = SGrid::new(n, 12.0).unwrap();
        let h: Profiles = [0.5, 0.5, -0.3].map(|a| grid.centers().iter().map(|s| a * (-s * s / 4.0).exp()).collect());
        let bg = Background::new(&grid, BackgroundKind::G0, 0.0, h.clone()).unwrap();
        (grid, bg, h)
    }

    #[test]
    fn exact_ray_members_have_zero_opening() {
        let (grid, bg, h) = setup();
        let x = combine(3.0, &h, 0.0, &h);
        let c = cone_distance(&grid, &bg, &x, &h).unwrap();
        assert!(c.opening < 1e-6 * w12_norm(&grid, &bg, &h), "{}", c.opening);
        assert!((c.delta_star - 3.0).abs() < 1e-12);
    }

    #[test]
    fn vanishing_direction_is_rejected() {
        let (grid, bg, h) = setup();
        let zero = combine(0.0, &h, 0.0, &h);
        assert!(cone_distance(&grid, &bg, &h, &zero).is_err());
    }

    #[test]
    fn opposite_direction_opens_fully() {
        let c = cone_from_gram(1.0, -0.5, 4.0).unwrap();
        assert_eq!(c.opening, 2.0);
        assert!(c.delta_star.is_infinite());
    }

    #[test]
    fn w12_dominates_l2() {
        let (grid, bg, h) = setup();
        assert!(w12_norm(&grid, &bg, &h) > l2_norm(&grid, &h));
    }

    #[test]
    fn farfield_of_localized_profile_is_small() {
        let (_, _, h) = setup();
        assert!(farfield_ratio(&h) < 1e-10);
        let flat: Profiles = [vec![1.0; 10], vec![0.0; 10], vec![0.0; 10]];
        assert_eq!(farfield_ratio(&flat), 1.0);
    }

    proptest! {
        // For x = a·h + q with q ⊥ h the opening is ‖q‖‖h‖/‖x‖; the closed form
        // must also agree with a brute-force scan over δ.
        #[test]
        fn closed_form_matches_scan(hh in 0.5f64..4.0, qq in 1e-4f64..0.5, a in 0.3f64..3.0) {
            // Gram of x = a h + q with q ⊥ h.
            let xx = a * a * hh + qq;
            let xh = a * hh;
            let c = cone_from_gram(xx, xh, hh).unwrap();
            let mut best = f64::INFINITY;
            for k in 1..20000 {
                let d = k as f64 * 1e-3 * a;
                // ‖x − δh‖²/δ² from the Gram entries.
                let v = ((xx - 2.0 * d * xh + d * d * hh) / (d * d)).max(0.0).sqrt();
                best = best.min(v);
            }
            prop_assert!(c.opening <= best + 1e-12);
            prop_assert!(best - c.opening < 1e-3 * (1.0 + c.opening));
            prop_assert!((c.opening - (qq * hh / xx).sqrt()).abs() < 1e-9);
        }
    }
}
