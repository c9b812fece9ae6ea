//! Cell-centred grid in the flow chart s, the exact g₀ jets on it, and the
//! background metric ḡ = g₀ + εh.

use crate::error::{Error, Result};
use crate::functional::{RadialSymTensor, ANGULAR_FACTOR};
use crate::geometry::curvature::sectional_from_jet;
use crate::geometry::{DiagonalRadialMetric, Jet3, MetricJet, SChart, Schwarzschild};
use serde::{Deserialize, Serialize};

/// Radial chart the flow is evolved in. Both variants are even extensions
/// through the bolt (s ≈ p there) and uniformly parabolic.
#[derive(Debug, Clone, PartialEq)]
pub enum FlowChart {
    /// s = p·r = √(r(r − 1)), analytic on (0, ∞), with g_ss = 4/(1 + p²)²
    /// between 1 and 4 and s ≈ r − ½ far out.
    Smooth,
    /// s = p for r ≤ r_a, s = r for r ≥ r_b, Hermite blend in between.
    Piecewise(SChart),
}

impl FlowChart {
    /// r(s) with its first three derivatives.
    pub fn r_jet(&self, s: f64) -> Result<Jet3> {
        match self {
            FlowChart::Smooth => {
                if !(s > 0.0 && s.is_finite()) {
                    return Err(Error::Domain { chart: "s", value: s, domain: "(0, inf)" });
                }
                let q = (1.0 + 4.0 * s * s).sqrt();
                Ok(Jet3 { f: 0.5 * (1.0 + q), d1: 2.0 * s / q, d2: 2.0 / q.powi(3), d3: -24.0 * s / q.powi(5) })
            }
            FlowChart::Piecewise(chart) => chart.r_jet(s),
        }
    }

    /// p(s) = (1 − 1/r)^{1/2}, without cancellation near the bolt.
    pub fn p(&self, s: f64) -> Result<f64> {
        match self {
            FlowChart::Smooth => Ok(s / self.r_jet(s)?.f),
            FlowChart::Piecewise(chart) if s <= chart.s_inner() => Ok(s),
            FlowChart::Piecewise(chart) => {
                let r = chart.r_jet(s)?.f;
                Ok(((r - 1.0) / r).sqrt())
            }
        }
    }

    /// Exact jet of g₀ = (A, B, C) in s. Near the bolt closed forms avoid the
    /// cancellation in r − 1: A = s²/r², B = 4r²/(1 + 4s²) on the smooth
    /// chart and A = s², B = 4r⁴ on the inner branch of the piecewise chart.
    pub fn g0_jet(&self, s: f64) -> Result<MetricJet> {
        let rj = self.r_jet(s)?;
        let (r, r1, r2) = (rj.f, rj.d1, rj.d2);
        let c = [r * r, 2.0 * r * r1, 2.0 * r1 * r1 + 2.0 * r * r2];
        match self {
            FlowChart::Smooth => {
                let f = [r.powi(-2), -2.0 * r1 / r.powi(3), 6.0 * r1 * r1 / r.powi(4) - 2.0 * r2 / r.powi(3)];
                let a = [s * s * f[0], 2.0 * s * f[0] + s * s * f[1], 2.0 * f[0] + 4.0 * s * f[1] + s * s * f[2]];
                let w0 = 1.0 / (1.0 + 4.0 * s * s);
                let w = [w0, -8.0 * s * w0 * w0, -8.0 * w0 * w0 + 128.0 * s * s * w0.powi(3)];
                let b = [
                    4.0 * c[0] * w[0],
                    4.0 * (c[1] * w[0] + c[0] * w[1]),
                    4.0 * (c[2] * w[0] + 2.0 * c[1] * w[1] + c[0] * w[2]),
                ];
                Ok(MetricJet { g: [a[0], b[0], c[0]], d1: [a[1], b[1], c[1]], d2: [a[2], b[2], c[2]] })
            }
            FlowChart::Piecewise(chart) if s <= chart.s_inner() => Ok(MetricJet {
                g: [s * s, 4.0 * r.powi(4), c[0]],
                d1: [2.0 * s, 16.0 * r.powi(3) * r1, c[1]],
                d2: [2.0, 48.0 * r * r * r1 * r1 + 16.0 * r.powi(3) * r2, c[2]],
            }),
            FlowChart::Piecewise(_) => Ok(Schwarzschild.jet(r).reparametrize(r1, r2, rj.d3)),
        }
    }
}

/// Cells s_j = (j + ½)Δs, j = 0..n−1, covering (0, s_max). Values are even
/// through s = 0 and prescribed at s_max.
#[derive(Debug, Clone)]
pub struct SGrid {
    n: usize,
    s_max: f64,
    ds: f64,
    chart: FlowChart,
    centers: Vec<f64>,
    radii: Vec<f64>,
    g0: Vec<MetricJet>,
    volume: Vec<f64>,
}

/// The outer boundary must lie beyond this radius.
const MIN_OUTER_RADIUS: f64 = 4.0;

impl SGrid {
    /// `n` cells on (0, s_max) in the smooth chart.
    pub fn new(n: usize, s_max: f64) -> Result<Self> {
        Self::with_chart(n, s_max, FlowChart::Smooth)
    }

    /// `n` cells on (0, s_max) in the given chart.
    pub fn with_chart(n: usize, s_max: f64, chart: FlowChart) -> Result<Self> {
        if n < 8 {
            return Err(Error::Parameter { name: "grid_n", reason: format!("need at least 8 cells, got {n}") });
        }
        if !(s_max.is_finite() && s_max > 0.0 && chart.r_jet(s_max)?.f > MIN_OUTER_RADIUS) {
            return Err(Error::Parameter {
                name: "s_max",
                reason: format!("outer radius must exceed {MIN_OUTER_RADIUS}, got s_max = {s_max}"),
            });
        }
        let ds = s_max / n as f64;
        let centers: Vec<f64> = (0..n).map(|j| (j as f64 + 0.5) * ds).collect();
        let mut radii = Vec::with_capacity(n);
        let mut g0 = Vec::with_capacity(n);
        let mut volume = Vec::with_capacity(n);
        for &s in &centers {
            let rj = chart.r_jet(s)?;
            radii.push(rj.f);
            g0.push(chart.g0_jet(s)?);
            volume.push(ANGULAR_FACTOR * rj.d1 * rj.f * rj.f * ds);
        }
        Ok(Self { n, s_max, ds, chart, centers, radii, g0, volume })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn s_max(&self) -> f64 {
        self.s_max
    }

    pub fn ds(&self) -> f64 {
        self.ds
    }

    pub fn chart(&self) -> &FlowChart {
        &self.chart
    }

    pub fn centers(&self) -> &[f64] {
        &self.centers
    }

    pub fn radii(&self) -> &[f64] {
        &self.radii
    }

    /// Exact g₀ jets at the cell centres.
    pub fn g0(&self) -> &[MetricJet] {
        &self.g0
    }

    /// Volume of each cell's shell under g₀ (midpoint rule).
    pub fn volume(&self) -> &[f64] {
        &self.volume
    }

    /// Value at extended cell index k (0-based; k < 0 and k ≥ n are ghosts): even
    /// mirror through s = 0, linear extrapolation to `outer` at s_max.
    pub fn extended(&self, values: &[f64], k: isize, outer: f64) -> f64 {
        if k < 0 {
            values[(-k - 1) as usize]
        } else if (k as usize) < self.n {
            values[k as usize]
        } else {
            2.0 * outer - values[2 * self.n - 1 - k as usize]
        }
    }

    /// Fourth-order central first and second differences at every cell.
    pub fn derivatives(&self, values: &[f64], outer: f64) -> (Vec<f64>, Vec<f64>) {
        let ds = self.ds;
        let mut d1 = Vec::with_capacity(self.n);
        let mut d2 = Vec::with_capacity(self.n);
        for j in 0..self.n as isize {
            let f = |o: isize| self.extended(values, j + o, outer);
            let (m2, m1, c, p1, p2) = (f(-2), f(-1), values[j as usize], f(1), f(2));
            d1.push((m2 - 8.0 * m1 + 8.0 * p1 - p2) / (12.0 * ds));
            d2.push((-m2 + 16.0 * m1 - 30.0 * c + 16.0 * p1 - p2) / (12.0 * ds * ds));
        }
        (d1, d2)
    }

    /// Cubic interpolation of cell values (with ghosts) at s ∈ [0, s_max]:
    /// value and s-derivative.
    pub fn interpolate(&self, values: &[f64], outer: f64, s: f64) -> Result<(f64, f64)> {
        if !(0.0..=self.s_max).contains(&s) {
            return Err(Error::Domain { chart: "s", value: s, domain: "[0, s_max]" });
        }
        let x = s / self.ds - 0.5;
        let base = (x.floor() as isize).clamp(-1, self.n as isize - 1);
        let t = x - base as f64;
        let f: Vec<f64> = (-1..=2).map(|o| self.extended(values, base + o, outer)).collect();
        let xs = [-1.0, 0.0, 1.0, 2.0];
        let (mut v, mut d) = (0.0, 0.0);
        for j in 0..4 {
            let (mut l, mut dl) = (1.0, 0.0);
            for m in 0..4 {
                if m == j {
                    continue;
                }
                let den = xs[j] - xs[m];
                dl = dl * (t - xs[m]) / den + l / den;
                l *= (t - xs[m]) / den;
            }
            v += f[j] * l;
            d += f[j] * dl;
        }
        Ok((v, d / self.ds))
    }
}

/// Which reference metric the de Turck vector is measured against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BackgroundKind {
    /// ḡ = g₀ (the limit-flow variant).
    G0,
    /// ḡ = g₀ + εh (the short-time existence setting).
    G0PlusEpsH,
}

impl std::str::FromStr for BackgroundKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "g0" => Ok(Self::G0),
            "g0_plus_eps_h" => Ok(Self::G0PlusEpsH),
            other => Err(Error::Config(format!("background must be g0 or g0_plus_eps_h, got {other:?}"))),
        }
    }
}

/// Orthonormal-frame data of a diagonal metric at one cell: √B, B′ and the
/// warping rates f_k = D log √g_kk with D the unit radial derivative, plus
/// the frame sectional curvatures.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrameData {
    pub b: f64,
    pub b1: f64,
    pub sqrt_b: f64,
    pub warp: [f64; 4],
    pub sectional: [[f64; 4]; 4],
}

impl FrameData {
    pub fn from_jet(jet: &MetricJet) -> Self {
        let [a, b, c] = jet.g;
        let [a1, b1, c1] = jet.d1;
        let sqrt_b = b.sqrt();
        let fa = a1 / (2.0 * a * sqrt_b);
        let fc = c1 / (2.0 * c * sqrt_b);
        Self { b, b1, sqrt_b, warp: [fa, 0.0, fc, fc], sectional: sectional_from_jet(jet) }
    }

    /// ω[k][i][m] = ⟨∇_{e_k} e_i, e_m⟩ at the equator.
    pub fn connection(&self) -> [[[f64; 4]; 4]; 4] {
        let mut w = [[[0.0; 4]; 4]; 4];
        for k in [0, 2, 3] {
            w[k][k][1] = -self.warp[k];
            w[k][1][k] = self.warp[k];
        }
        w
    }
}

/// ḡ on the grid: exact g₀ jets times (1 + εu) with the mode's frame
/// components u differenced on the grid.
#[derive(Debug, Clone)]
pub struct Background {
    pub kind: BackgroundKind,
    pub epsilon: f64,
    /// Frame components (relative to g₀) of the seed mode at the cells.
    pub mode: [Vec<f64>; 3],
    pub jets: Vec<MetricJet>,
    pub frames: Vec<FrameData>,
    /// Frame data of g₀ itself, used by the diagnostics norms.
    pub g0_frames: Vec<FrameData>,
}

impl Background {
    pub fn new(grid: &SGrid, kind: BackgroundKind, epsilon: f64, mode: [Vec<f64>; 3]) -> Result<Self> {
        if mode.iter().any(|m| m.len() != grid.len()) {
            return Err(Error::Data("mode profile does not match the s-grid".into()));
        }
        let scale = match kind {
            BackgroundKind::G0 => 0.0,
            BackgroundKind::G0PlusEpsH => epsilon,
        };
        let derivs: Vec<(Vec<f64>, Vec<f64>)> = mode.iter().map(|m| grid.derivatives(m, 0.0)).collect();
        let mut jets = Vec::with_capacity(grid.len());
        for j in 0..grid.len() {
            let g0 = grid.g0()[j];
            let mut out = g0;
            for c in 0..3 {
                let (f, f1, f2) = (1.0 + scale * mode[c][j], scale * derivs[c].0[j], scale * derivs[c].1[j]);
                out.g[c] = g0.g[c] * f;
                out.d1[c] = g0.d1[c] * f + g0.g[c] * f1;
                out.d2[c] = g0.d2[c] * f + 2.0 * g0.d1[c] * f1 + g0.g[c] * f2;
            }
            jets.push(out);
        }
        let frames = jets.iter().map(FrameData::from_jet).collect();
        let g0_frames = grid.g0().iter().map(FrameData::from_jet).collect();
        Ok(Self { kind, epsilon, mode, jets, frames, g0_frames })
    }

    /// ḡ_ii/g₀_ii at cell j.
    pub fn ratio_to_g0(&self, c: usize, j: usize) -> f64 {
        match self.kind {
            BackgroundKind::G0 => 1.0,
            BackgroundKind::G0PlusEpsH => 1.0 + self.epsilon * self.mode[c][j],
        }
    }
}

/// Frame components of a p-grid tensor at the s-grid cells (cubic
/// interpolation in p; zero beyond the p-grid).
pub fn mode_on_sgrid(mode: &RadialSymTensor, grid: &SGrid) -> Result<[Vec<f64>; 3]> {
    let mut out = [vec![0.0; grid.len()], vec![0.0; grid.len()], vec![0.0; grid.len()]];
    let pg = &mode.grid;
    for (j, &s) in grid.centers().iter().enumerate() {
        let p = grid.chart().p(s)?;
        if p > pg.p_max() {
            continue;
        }
        for (c, comp) in mode.components().iter().enumerate() {
            out[c][j] = pg.interpolate(comp, p)?.0;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::curvature::curvature_from_jet;
    use crate::geometry::Blend;

    #[test]
    fn closed_forms_match_the_chart_route() {
        let charts = [FlowChart::Smooth, FlowChart::Piecewise(SChart::new(Blend::QuinticHermite).unwrap())];
        for chart in &charts {
            for s in [0.3, 0.5, 1.7, 6.0] {
                let a = chart.g0_jet(s).unwrap();
                let rj = chart.r_jet(s).unwrap();
                let b = Schwarzschild.jet(rj.f).reparametrize(rj.d1, rj.d2, rj.d3);
                for c in 0..3 {
                    assert!((a.g[c] - b.g[c]).abs() < 1e-10 * b.g[c].abs());
                    assert!((a.d1[c] - b.d1[c]).abs() < 1e-9 * b.d1[c].abs().max(1.0));
                    assert!((a.d2[c] - b.d2[c]).abs() < 1e-8 * b.d2[c].abs().max(1.0));
                }
            }
        }
    }

    #[test]
    fn smooth_chart_jet_matches_differences() {
        let chart = FlowChart::Smooth;
        let (s, e) = (0.8, 1e-4);
        let (a, b, c) = (chart.r_jet(s - e).unwrap(), chart.r_jet(s).unwrap(), chart.r_jet(s + e).unwrap());
        assert!((b.d1 - (c.f - a.f) / (2.0 * e)).abs() < 1e-7);
        assert!((b.d2 - (c.d1 - a.d1) / (2.0 * e)).abs() < 1e-7);
        assert!((b.d3 - (c.d2 - a.d2) / (2.0 * e)).abs() < 1e-7);
        assert!((chart.p(s).unwrap() - ((b.f - 1.0) / b.f).sqrt()).abs() < 1e-14);
    }

    #[test]
    fn g0_is_ricci_flat_in_the_s_chart() {
        let piecewise = FlowChart::Piecewise(SChart::new(Blend::QuinticHermite).unwrap());
        for grid in [SGrid::new(256, 20.0).unwrap(), SGrid::with_chart(256, 20.0, piecewise).unwrap()] {
            for jet in grid.g0() {
                let ric = curvature_from_jet(jet).ricci;
                for i in 0..4 {
                    assert!(ric[i][i].abs() < 1e-9 * jet.g[i.min(2)].abs().max(1.0), "{:?}", ric);
                }
            }
        }
    }

    #[test]
    fn ghosts_mirror_and_pin_the_outer_value() {
        let grid = SGrid::new(16, 8.0).unwrap();
        let v: Vec<f64> = (0..16).map(|j| j as f64).collect();
        assert_eq!(grid.extended(&v, -1, 3.0), 0.0);
        assert_eq!(grid.extended(&v, -2, 3.0), 1.0);
        assert_eq!(grid.extended(&v, 16, 3.0), 2.0 * 3.0 - 15.0);
        let (x, _) = grid.interpolate(&vec![2.0; 16], 2.0, 8.0).unwrap();
        assert!((x - 2.0).abs() < 1e-14);
    }
}
