//! Right-hand side of the Ricci–de Turck flow for diagonal radial metrics,
//! in two independent forms evaluated from the same per-cell jets.
//!
//! The state is the triple of frame ratios G_i = g_ii/ḡ_ii at the cells;
//! tendencies are ∂_t G_i.

use super::sgrid::{Background, FrameData, SGrid};
use crate::geometry::curvature::curvature_from_jet;
use crate::geometry::MetricJet;
use std::ops::{Add, Div, Mul, Neg, Sub};

/// Frame ratio G and its first two s-derivatives at one cell.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RatioJet {
    pub v: [f64; 3],
    pub d1: [f64; 3],
    pub d2: [f64; 3],
}

/// Per-cell jets of the state (ghost rules: even at s = 0, G = 1 at s_max).
pub fn ratio_jets(grid: &SGrid, g: &[Vec<f64>; 3]) -> Vec<RatioJet> {
    let d: Vec<(Vec<f64>, Vec<f64>)> = g.iter().map(|c| grid.derivatives(c, 1.0)).collect();
    (0..grid.len())
        .map(|j| RatioJet {
            v: [g[0][j], g[1][j], g[2][j]],
            d1: [d[0].0[j], d[1].0[j], d[2].0[j]],
            d2: [d[0].1[j], d[1].1[j], d[2].1[j]],
        })
        .collect()
}

/// Jet of g = ḡ·G by the product rule.
pub fn metric_jet(bg: &MetricJet, r: &RatioJet) -> MetricJet {
    let mut out = *bg;
    for c in 0..3 {
        out.g[c] = bg.g[c] * r.v[c];
        out.d1[c] = bg.d1[c] * r.v[c] + bg.g[c] * r.d1[c];
        out.d2[c] = bg.d2[c] * r.v[c] + 2.0 * bg.d1[c] * r.d1[c] + bg.g[c] * r.d2[c];
    }
    out
}

fn expand4(v: [f64; 3]) -> [f64; 4] {
    [v[0], v[1], v[2], v[2]]
}

/// Background-covariant expansion at one cell:
///   ∂_t g_ij = g^{ab} ∇̄_a∇̄_b g_ij − g^{ab} g_ip ḡ^{pq} R̄_jaqb − g^{ab} g_jp ḡ^{pq} R̄_iaqb
///            + ½ g^{ab} g^{pq} (∇̄_i g_pa ∇̄_j g_qb + 2 ∇̄_a g_jp ∇̄_q g_ib − 2 ∇̄_a g_jp ∇̄_b g_iq
///                               − 2 ∇̄_j g_pa ∇̄_b g_iq − 2 ∇̄_i g_pa ∇̄_b g_jq),
/// written in the orthonormal frame of ḡ where g_ij = G_i δ_ij.
pub fn expanded_cell(r: &RatioJet, fd: &FrameData) -> [f64; 3] {
    let gv = expand4(r.v);
    let dg = expand4(r.d1.map(|d| d / fd.sqrt_b));
    let d2g = expand4([0, 1, 2].map(|c| r.d2[c] / fd.b - fd.b1 * r.d1[c] / (2.0 * fd.b * fd.b)));
    let w = fd.connection();
    // t[k][i][j] = (∇̄_k g)_ij.
    let mut t = [[[0.0; 4]; 4]; 4];
    for k in 0..4 {
        for i in 0..4 {
            for j in 0..4 {
                let mut v = if k == 1 && i == j { dg[i] } else { 0.0 };
                v -= w[k][i][j] * gv[j] + w[k][j][i] * gv[i];
                t[k][i][j] = v;
            }
        }
    }
    let mut out = [0.0; 3];
    for (i, o) in out.iter_mut().enumerate() {
        let mut lap = 0.0;
        for a in 0..4 {
            let hess = if a == 1 {
                d2g[i]
            } else {
                let mut h = 0.0;
                for m in 0..4 {
                    h -= w[a][a][m] * t[m][i][i] + w[a][i][m] * t[a][m][i] + w[a][i][m] * t[a][i][m];
                }
                h
            };
            lap += hess / gv[a];
        }
        let mut curv = 0.0;
        for a in 0..4 {
            curv -= 2.0 * gv[i] / gv[a] * fd.sectional[i][a];
        }
        let mut quad = 0.0;
        for a in 0..4 {
            for p in 0..4 {
                let s = t[i][p][a] * t[i][p][a] + 2.0 * t[a][i][p] * t[p][i][a]
                    - 2.0 * t[a][i][p] * t[a][i][p]
                    - 4.0 * t[i][p][a] * t[a][i][p];
                quad += 0.5 * s / (gv[a] * gv[p]);
            }
        }
        *o = lap + curv + quad;
    }
    out
}

/// Value with one forward derivative.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Dual {
    v: f64,
    d: f64,
}

impl Dual {
    fn new(v: f64, d: f64) -> Self {
        Self { v, d }
    }
}

impl Add for Dual {
    type Output = Dual;
    fn add(self, o: Dual) -> Dual {
        Dual::new(self.v + o.v, self.d + o.d)
    }
}

impl Sub for Dual {
    type Output = Dual;
    fn sub(self, o: Dual) -> Dual {
        Dual::new(self.v - o.v, self.d - o.d)
    }
}

impl Mul for Dual {
    type Output = Dual;
    fn mul(self, o: Dual) -> Dual {
        Dual::new(self.v * o.v, self.d * o.v + self.v * o.d)
    }
}

impl Div for Dual {
    type Output = Dual;
    fn div(self, o: Dual) -> Dual {
        Dual::new(self.v / o.v, (self.d * o.v - self.v * o.d) / (o.v * o.v))
    }
}

impl Neg for Dual {
    type Output = Dual;
    fn neg(self) -> Dual {
        Dual::new(-self.v, -self.d)
    }
}

/// Radial de Turck vector V^s = g^{jj}(Γ^s_jj − Γ̄^s_jj) and its
/// s-derivative.
pub fn deturck_vector(g: &MetricJet, bg: &MetricJet) -> (f64, f64) {
    let val = |j: &MetricJet, c: usize| Dual::new(j.g[c], j.d1[c]);
    let der = |j: &MetricJet, c: usize| Dual::new(j.d1[c], j.d2[c]);
    let half = Dual::new(0.5, 0.0);
    let two = Dual::new(2.0, 0.0);
    let (a, b, c) = (val(g, 0), val(g, 1), val(g, 2));
    let (a1, b1, c1) = (der(g, 0), der(g, 1), der(g, 2));
    let (bb, ba1, bb1, bc1) = (val(bg, 1), der(bg, 0), der(bg, 1), der(bg, 2));
    let v =
        (-(a1 / b) + ba1 / bb) * half / a + (b1 / b - bb1 / bb) * half / b + two * (-(c1 / b) + bc1 / bb) * half / c;
    (v.v, v.d)
}

/// −2 Ric(g) + L_V g in coordinates, then divided by ḡ_ii.
pub fn direct_cell(r: &RatioJet, bg: &MetricJet) -> [f64; 3] {
    let g = metric_jet(bg, r);
    let ric = curvature_from_jet(&g).ricci;
    let (v, v1) = deturck_vector(&g, bg);
    let lie = [v * g.d1[0], v * g.d1[1] + 2.0 * g.g[1] * v1, v * g.d1[2]];
    [0, 1, 2].map(|c| (-2.0 * ric[c][c] + lie[c]) / bg.g[c])
}

/// Which implementation evaluates the tendencies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RhsForm {
    Expanded,
    Direct,
}

/// Tendencies ∂_t G_i at every cell.
pub fn rhs(grid: &SGrid, bg: &Background, g: &[Vec<f64>; 3], form: RhsForm) -> [Vec<f64>; 3] {
    let jets = ratio_jets(grid, g);
    let mut out = [vec![0.0; grid.len()], vec![0.0; grid.len()], vec![0.0; grid.len()]];
    for (j, rj) in jets.iter().enumerate() {
        let f = match form {
            RhsForm::Expanded => expanded_cell(rj, &bg.frames[j]),
            RhsForm::Direct => direct_cell(rj, &bg.jets[j]),
        };
        for c in 0..3 {
            out[c][j] = f[c];
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flow::sgrid::BackgroundKind;

    fn zero_mode(n: usize) -> [Vec<f64>; 3] {
        [vec![0.0; n], vec![0.0; n], vec![0.0; n]]
    }

    #[test]
    fn dual_quotient_rule() {
        let x = Dual::new(2.0, 1.0);
        let y = Dual::new(4.0, 3.0);
        let q = x / y;
        assert!((q.d - (1.0 * 4.0 - 2.0 * 3.0) / 16.0).abs() < 1e-15);
    }

    #[test]
    fn background_is_a_fixed_point_of_both_forms() {
        let grid = SGrid::new(512, 30.0).unwrap();
        let bg = Background::new(&grid, BackgroundKind::G0, 0.0, zero_mode(512)).unwrap();
        let ones = [vec![1.0; 512], vec![1.0; 512], vec![1.0; 512]];
        for form in [RhsForm::Expanded, RhsForm::Direct] {
            let f = rhs(&grid, &bg, &ones, form);
            let m = f.iter().flatten().fold(0.0f64, |m, v| m.max(v.abs()));
            assert!(m < 1e-10, "{form:?}: {m}");
        }
    }

    #[test]
    fn forms_agree_on_a_smooth_perturbation() {
        let n = 400;
        let grid = SGrid::new(n, 20.0).unwrap();
        let mode: [Vec<f64>; 3] =
            [0.3, 0.3, -0.2].map(|a| grid.centers().iter().map(|s| a * (-s * s / 4.0).exp()).collect());
        let bg = Background::new(&grid, BackgroundKind::G0PlusEpsH, 0.05, mode).unwrap();
        let g: [Vec<f64>; 3] =
            [0.1, 0.1, 0.07].map(|a| grid.centers().iter().map(|s| 1.0 + a * (-(s - 1.0) * (s - 1.0)).exp()).collect());
        let e = rhs(&grid, &bg, &g, RhsForm::Expanded);
        let d = rhs(&grid, &bg, &g, RhsForm::Direct);
        for c in 0..3 {
            for j in 0..n {
                assert!(
                    (e[c][j] - d[c][j]).abs() < 1e-10 * (1.0 + d[c][j].abs()),
                    "c={c} j={j}: {} vs {}",
                    e[c][j],
                    d[c][j]
                );
            }
        }
    }
}
