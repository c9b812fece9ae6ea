//! Recovering a Ricci flow from a Ricci–de Turck trajectory. The
//! diffeomorphisms φ_t with ∂_t φ = −V∘φ turn a de Turck solution g into the
//! Ricci flow φ_t^*g. In the variable δ = e^{−λt} the characteristics solve
//!   dX/dδ = −V(X, δ)/(−λδ),   X(x, 0) = x,
//! Near δ = 0 the de Turck vector is δ·V[h] to first order, so the velocity
//! stays finite. The stretch ∂X/∂x is taken by the grid's own fourth-order
//! differences of X (odd through s = 0), which keeps the pulled-back metric
//! smooth at the bolt to discretization accuracy.

use super::diagnostics::Profiles;
use super::rhs::{deturck_vector, metric_jet, ratio_jets, rhs, RatioJet};
use super::run::Trajectory;
use super::sgrid::{BackgroundKind, SGrid};
use crate::error::{Error, Result};
use crate::geometry::curvature::curvature_from_jet;
use serde::Serialize;

/// RK4 substeps between consecutive snapshots and over the seed interval.
const SUBSTEPS: usize = 4;
const BOLT_CELLS: usize = 6;
const SEED_STEPS: usize = 16;
/// Amplitude of the difference quotient giving V[h].
const LINEAR_PROBE: f64 = 1e-6;

/// Characteristic positions and stretch factors at every snapshot.
#[derive(Debug, Clone, PartialEq)]
pub struct DeTurckMap {
    /// δ at which each slice is given; the first slice is δ = 0.
    pub deltas: Vec<f64>,
    /// Snapshot time of each slice (−∞ for the δ = 0 slice).
    pub times: Vec<f64>,
    /// X(x_j, δ) at the cell centres.
    pub positions: Vec<Vec<f64>>,
    /// ∂X/∂x at the cell centres.
    pub stretch: Vec<Vec<f64>>,
}

impl DeTurckMap {
    /// max_j |X(x_j, 0) − x_j|.
    pub fn identity_error(&self, grid: &SGrid) -> f64 {
        self.positions[0].iter().zip(grid.centers()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
    }

    /// Largest displacement |X − x| over all slices.
    pub fn max_displacement(&self, grid: &SGrid) -> f64 {
        self.positions.iter().flat_map(|p| p.iter().zip(grid.centers()).map(|(a, b)| (a - b).abs())).fold(0.0, f64::max)
    }
}

/// V^s at the cells for state ratios G, regularized at the bolt.
fn vector_field(traj: &Trajectory, g: &Profiles) -> Vec<f64> {
    let bg = &traj.background;
    let jets = ratio_jets(&traj.grid, g);
    let mut v: Vec<f64> =
        jets.iter().enumerate().map(|(j, rj)| deturck_vector(&metric_jet(&bg.jets[j], rj), &bg.jets[j]).0).collect();
    regularize_at_bolt(traj.grid.centers(), &mut v);
    v
}

/// The discrete V carries a (G₀ − G₁)/s term whose cancellation near s = 0
/// holds only to truncation error, and the pullback's second derivatives
/// amplify that noise. A smooth vector field normal to the bolt is odd in s,
/// so V/s = α + βs² there. Fit α, β by least squares on cells
/// [BOLT_CELLS, 3·BOLT_CELLS), use the fit inside, and blend to the raw
/// values across the fitting window with a quintic smoothstep.
fn regularize_at_bolt(s: &[f64], v: &mut [f64]) {
    let (lo, hi) = (BOLT_CELLS, 3 * BOLT_CELLS);
    if v.len() < hi {
        return;
    }
    let (mut m00, mut m01, mut m11, mut r0, mut r1) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for j in lo..hi {
        let (y, q) = (v[j] / s[j], s[j] * s[j]);
        m00 += 1.0;
        m01 += q;
        m11 += q * q;
        r0 += y;
        r1 += q * y;
    }
    let det = m00 * m11 - m01 * m01;
    let alpha = (r0 * m11 - r1 * m01) / det;
    let beta = (m00 * r1 - m01 * r0) / det;
    for j in 0..hi {
        let fit = s[j] * (alpha + beta * s[j] * s[j]);
        let x = ((j as f64 - lo as f64) / (hi - lo) as f64).clamp(0.0, 1.0);
        let w = x * x * x * (10.0 - 15.0 * x + 6.0 * x * x);
        v[j] = fit + w * (v[j] - fit);
    }
}

/// Linear interpolation at s of a cell field that is odd through s = 0 and
/// zero beyond the outer boundary.
fn sample(grid: &SGrid, values: &[f64], s: f64) -> f64 {
    let n = grid.len() as isize;
    let x = s / grid.ds() - 0.5;
    let k = x.floor() as isize;
    let t = x - k as f64;
    let at = |i: isize| -> f64 {
        if i < 0 {
            -values[(-i - 1) as usize]
        } else if i >= n {
            0.0
        } else {
            values[i as usize]
        }
    };
    (1.0 - t) * at(k) + t * at(k + 1)
}

/// Advance positions and stretches from δ = d0 to d1, the velocity being
/// interpolated linearly in δ between `lo` (at d0) and `hi` (at d1).
fn rk4_interval(
    grid: &SGrid,
    x: &mut [f64],
    (d0, d1): (f64, f64),
    steps: usize,
    (lo, hi): (&[f64], &[f64]),
) -> Result<()> {
    let h = (d1 - d0) / steps as f64;
    for k in 0..steps {
        let da = d0 + k as f64 * h;
        // Velocity at (s, δ) by linear interpolation in both variables.
        let eval = |s: f64, d: f64| -> f64 {
            let w = if d1 > d0 { ((d - d0) / (d1 - d0)).clamp(0.0, 1.0) } else { 0.0 };
            (1.0 - w) * sample(grid, lo, s) + w * sample(grid, hi, s)
        };
        for xj in x.iter_mut() {
            let s0 = *xj;
            let k1 = eval(s0, da);
            let k2 = eval(s0 + 0.5 * h * k1, da + 0.5 * h);
            let k3 = eval(s0 + 0.5 * h * k2, da + 0.5 * h);
            let k4 = eval(s0 + h * k3, da + h);
            *xj = s0 + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        }
        check_monotone(grid, x, da + h)?;
    }
    Ok(())
}

/// ∂X/∂x by fourth-order central differences of the displacement X − x,
/// which is odd through s = 0 and vanishes beyond the outer boundary.
fn stretch(grid: &SGrid, x: &[f64]) -> Vec<f64> {
    let n = grid.len() as isize;
    let disp: Vec<f64> = x.iter().zip(grid.centers()).map(|(a, b)| a - b).collect();
    let at = |i: isize| -> f64 {
        if i < 0 {
            -disp[(-i - 1) as usize]
        } else if i >= n {
            -disp[(2 * n - 1 - i) as usize]
        } else {
            disp[i as usize]
        }
    };
    (0..n).map(|j| 1.0 + (at(j - 2) - 8.0 * at(j - 1) + 8.0 * at(j + 1) - at(j + 2)) / (12.0 * grid.ds())).collect()
}

fn check_monotone(grid: &SGrid, x: &[f64], delta: f64) -> Result<()> {
    for j in 0..x.len() {
        let crossed = (j > 0 && x[j] <= x[j - 1]) || x[j] <= 0.0;
        if crossed || !x[j].is_finite() {
            return Err(Error::CharacteristicCrossing { x: grid.centers()[j], delta });
        }
    }
    Ok(())
}

/// Solve the characteristic system along a trajectory recorded with
/// snapshots.
pub fn deturck_map(traj: &Trajectory) -> Result<DeTurckMap> {
    let snaps = &traj.snapshots;
    if snaps.is_empty() {
        return Err(Error::Data("trajectory has no snapshots; enable keep_snapshots".into()));
    }
    let grid = &traj.grid;
    let n = grid.len();
    let neg_lambda = -traj.lambda;
    let mut x = grid.centers().to_vec();
    let mut map = DeTurckMap {
        deltas: vec![0.0],
        times: vec![f64::NEG_INFINITY],
        positions: vec![x.clone()],
        stretch: vec![vec![1.0; n]],
    };
    // Velocities −V/(−λδ) at the snapshots.
    let velocities: Vec<Vec<f64>> = snaps
        .iter()
        .map(|s| {
            let scale = -1.0 / (neg_lambda * s.delta);
            vector_field(traj, &s.g).iter().map(|v| scale * v).collect()
        })
        .collect();

    // Before the run starts: linear regime for the g₀ background, no motion
    // when the background already contains εh (g = ḡ at t₀).
    let first = snaps[0].delta;
    if traj.config.epsilon > 0.0 && traj.background.kind == BackgroundKind::G0 {
        let probe = |sign: f64| -> Profiles {
            [0, 1, 2].map(|c| traj.mode[c].iter().map(|u| 1.0 + sign * LINEAR_PROBE * u).collect())
        };
        let (vp, vm) = (vector_field(traj, &probe(1.0)), vector_field(traj, &probe(-1.0)));
        let scale = -1.0 / (neg_lambda * 2.0 * LINEAR_PROBE);
        let seed: Vec<f64> = vp.iter().zip(&vm).map(|(p, m)| scale * (p - m)).collect();
        rk4_interval(grid, &mut x, (0.0, first), SEED_STEPS, (&seed, &seed))?;
    }
    map.deltas.push(first);
    map.times.push(snaps[0].t);
    map.stretch.push(stretch(grid, &x));
    map.positions.push(x.clone());

    for k in 0..snaps.len() - 1 {
        let (d0, d1) = (snaps[k].delta, snaps[k + 1].delta);
        rk4_interval(grid, &mut x, (d0, d1), SUBSTEPS, (&velocities[k], &velocities[k + 1]))?;
        map.deltas.push(d1);
        map.times.push(snaps[k + 1].t);
        map.stretch.push(stretch(grid, &x));
        map.positions.push(x.clone());
    }
    Ok(map)
}

/// Frame ratios ĝ_cc/g₀_cc of the pulled-back metric at snapshot k.
pub fn pullback(traj: &Trajectory, map: &DeTurckMap, k: usize) -> Result<Profiles> {
    let grid = &traj.grid;
    let snap = &traj.snapshots[k];
    let bg = &traj.background;
    // Map slice k + 1 belongs to snapshot k (slice 0 is δ = 0).
    let (x, jac) = (&map.positions[k + 1], &map.stretch[k + 1]);
    let total: Profiles = [0, 1, 2].map(|c| (0..grid.len()).map(|j| bg.ratio_to_g0(c, j) * snap.g[c][j]).collect());
    let mut out: Profiles = [vec![0.0; grid.len()], vec![0.0; grid.len()], vec![0.0; grid.len()]];
    for j in 0..grid.len() {
        let s = x[j].min(grid.s_max());
        let g0_at = grid.chart().g0_jet(s)?;
        for c in 0..3 {
            let ratio = grid.interpolate(&total[c], 1.0, s)?.0;
            let stretch = if c == 1 { jac[j] * jac[j] } else { 1.0 };
            out[c][j] = g0_at.g[c] * ratio * stretch / grid.g0()[j].g[c];
        }
    }
    Ok(out)
}

/// Frame components of Ric relative to g₀ for ratios R = g/g₀.
fn ricci_frame(grid: &SGrid, ratios: &Profiles) -> Profiles {
    let jets: Vec<RatioJet> = ratio_jets(grid, ratios);
    let mut out: Profiles = [vec![0.0; grid.len()], vec![0.0; grid.len()], vec![0.0; grid.len()]];
    for (j, rj) in jets.iter().enumerate() {
        let g0 = &grid.g0()[j];
        let ric = curvature_from_jet(&metric_jet(g0, rj)).ricci;
        for c in 0..3 {
            out[c][j] = ric[c][c] / g0.g[c];
        }
    }
    out
}

/// Residuals of the two evolution equations measured with the same
/// trapezoidal time differences between consecutive snapshots.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FlowResiduals {
    /// max over snapshot intervals of ‖∂_tĝ + 2Ric(ĝ)‖₂ for ĝ = φ^*g.
    pub ricci_flow: f64,
    /// max over snapshot intervals of ‖∂_tg + 2Ric(g) − L_V g‖₂.
    pub ricci_deturck: f64,
    /// ricci_flow / ricci_deturck.
    pub ratio: f64,
}

/// Compare the Ricci-flow residual of the pulled-back metric with the
/// de Turck residual of the trajectory itself.
pub fn flow_residuals(traj: &Trajectory, map: &DeTurckMap) -> Result<FlowResiduals> {
    let snaps = &traj.snapshots;
    if snaps.len() < 2 {
        return Err(Error::Data("need at least two snapshots".into()));
    }
    let grid = &traj.grid;
    let bg = &traj.background;
    let norm = |x: &Profiles| super::diagnostics::l2_norm(grid, x);
    let pulled: Vec<Profiles> = (0..snaps.len()).map(|k| pullback(traj, map, k)).collect::<Result<_>>()?;
    let rics: Vec<Profiles> = pulled.iter().map(|p| ricci_frame(grid, p)).collect();
    let tend: Vec<Profiles> = snaps.iter().map(|s| rhs(grid, bg, &s.g, traj.config.form)).collect();
    let (mut rf, mut rdt) = (0.0f64, 0.0f64);
    for k in 0..snaps.len() - 1 {
        let dt = snaps[k + 1].t - snaps[k].t;
        if !(dt > 0.0) {
            continue;
        }
        let a: Profiles = [0, 1, 2].map(|c| {
            (0..grid.len())
                .map(|j| (pulled[k + 1][c][j] - pulled[k][c][j]) / dt + rics[k][c][j] + rics[k + 1][c][j])
                .collect()
        });
        let b: Profiles = [0, 1, 2].map(|c| {
            (0..grid.len())
                .map(|j| {
                    let w = bg.ratio_to_g0(c, j);
                    w * ((snaps[k + 1].g[c][j] - snaps[k].g[c][j]) / dt - 0.5 * (tend[k][c][j] + tend[k + 1][c][j]))
                })
                .collect()
        });
        rf = rf.max(norm(&a));
        rdt = rdt.max(norm(&b));
    }
    Ok(FlowResiduals { ricci_flow: rf, ricci_deturck: rdt, ratio: if rdt > 0.0 { rf / rdt } else { f64::INFINITY } })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flow::run::{run_on_grid, start_time, FlowConfig};
    use std::sync::Arc;

    const LAMBDA: f64 = -0.75;

    fn bump(grid: &SGrid) -> Profiles {
        let f: Vec<f64> = grid.centers().iter().map(|s| (-(s / 3.0).powi(2)).exp()).collect();
        [f.clone(), f.clone(), f.iter().map(|v| -v).collect()]
    }

    fn trajectory(epsilon: f64, background: BackgroundKind, t_end: Option<f64>) -> Trajectory {
        let grid = Arc::new(SGrid::new(64, 20.0).unwrap());
        let cfg = FlowConfig {
            epsilon,
            t_end,
            grid_n: 64,
            s_max: 20.0,
            records: 20,
            keep_snapshots: true,
            background,
            ..Default::default()
        };
        run_on_grid(&cfg, LAMBDA, grid.clone(), bump(&grid)).unwrap()
    }

    #[test]
    fn regularization_keeps_odd_cubics() {
        let s: Vec<f64> = (0..40).map(|j| (j as f64 + 0.5) * 0.1).collect();
        let exact: Vec<f64> = s.iter().map(|x| 0.3 * x - 0.02 * x * x * x).collect();
        let mut v = exact.clone();
        regularize_at_bolt(&s, &mut v);
        for (a, b) in v.iter().zip(&exact) {
            assert!((a - b).abs() < 1e-14);
        }
    }

    #[test]
    fn regularization_removes_a_singular_bolt_term() {
        let s: Vec<f64> = (0..40).map(|j| (j as f64 + 0.5) * 0.1).collect();
        let mut v: Vec<f64> = s.iter().map(|x| 0.3 * x + 1e-3 / x).collect();
        regularize_at_bolt(&s, &mut v);
        assert!((v[0] / s[0] - 0.3).abs() < 0.1 * (1e-3 / (s[0] * s[0])));
        assert!(v[..BOLT_CELLS].iter().zip(&s).all(|(a, x)| a.signum() == x.signum()));
    }

    #[test]
    fn stretch_of_identity_and_odd_displacements() {
        let grid = SGrid::new(256, 20.0).unwrap();
        assert!(stretch(&grid, grid.centers()).iter().all(|j| (j - 1.0).abs() < 1e-15));
        let c = 1e-3;
        let disp = |s: f64| c * s * (-(s / 2.0).powi(2)).exp();
        let ddisp = |s: f64| c * (1.0 - s * s / 2.0) * (-(s / 2.0).powi(2)).exp();
        let x: Vec<f64> = grid.centers().iter().map(|s| s + disp(*s)).collect();
        for (j, (&s, st)) in grid.centers().iter().zip(stretch(&grid, &x)).enumerate() {
            assert!((st - 1.0 - ddisp(s)).abs() < 1e-7, "cell {j}: {st} vs {}", 1.0 + ddisp(s));
        }
    }

    #[test]
    fn sampling_is_odd_through_the_bolt() {
        let grid = SGrid::new(64, 20.0).unwrap();
        let v: Vec<f64> = grid.centers().iter().map(|s| 2.0 * s).collect();
        assert!((sample(&grid, &v, 0.0)).abs() < 1e-14);
        assert!((sample(&grid, &v, 5.0) - 10.0).abs() < 1e-12);
        assert_eq!(sample(&grid, &v, 25.0), 0.0);
    }

    #[test]
    fn map_is_the_identity_at_delta_zero() {
        let traj = trajectory(1e-3, BackgroundKind::G0, Some(start_time(1e-3, LAMBDA) + 0.5));
        let map = deturck_map(&traj).unwrap();
        assert_eq!(map.identity_error(&traj.grid), 0.0);
        assert_eq!(map.deltas[0], 0.0);
        assert_eq!(map.positions.len(), traj.snapshots.len() + 1);
    }

    #[test]
    fn unperturbed_flow_gives_the_identity_map() {
        let traj = trajectory(0.0, BackgroundKind::G0, Some(0.5));
        let map = deturck_map(&traj).unwrap();
        assert!(map.max_displacement(&traj.grid) < 1e-14);
        let res = flow_residuals(&traj, &map).unwrap();
        assert!(res.ricci_flow < 1e-10 && res.ricci_deturck < 1e-10, "{res:?}");
    }

    /// Ricci-flow residual of φ^*g with the computed map and with the
    /// identity, on the g₀ background where V is first order in δ.
    fn ricci_flow_residuals(n: usize) -> (f64, f64) {
        let grid = Arc::new(SGrid::new(n, 20.0).unwrap());
        let cfg = FlowConfig {
            epsilon: 1e-2,
            t_end: Some(start_time(1e-2, LAMBDA) + 1.0),
            grid_n: n,
            s_max: 20.0,
            records: 50,
            keep_snapshots: true,
            background: BackgroundKind::G0,
            ..Default::default()
        };
        let traj = run_on_grid(&cfg, LAMBDA, grid.clone(), bump(&grid)).unwrap();
        let map = deturck_map(&traj).unwrap();
        let mut identity = map.clone();
        for k in 0..identity.positions.len() {
            identity.positions[k] = grid.centers().to_vec();
            identity.stretch[k] = vec![1.0; grid.len()];
        }
        (flow_residuals(&traj, &map).unwrap().ricci_flow, flow_residuals(&traj, &identity).unwrap().ricci_flow)
    }

    #[test]
    fn pulled_back_flow_converges_to_a_ricci_flow() {
        let (coarse, coarse_identity) = ricci_flow_residuals(128);
        let (fine, fine_identity) = ricci_flow_residuals(256);
        assert!(fine < coarse / 3.0, "{coarse} {fine}");
        assert!(fine < 0.5 * fine_identity, "{fine} {fine_identity}");
        // Without the gauge change the residual is the Lie-derivative term
        // and does not shrink with the grid.
        assert!(fine_identity > 0.5 * coarse_identity);
    }

    #[test]
    fn snapshots_are_required() {
        let grid = Arc::new(SGrid::new(64, 20.0).unwrap());
        let cfg = FlowConfig { grid_n: 64, s_max: 20.0, ..Default::default() };
        let traj = run_on_grid(&cfg, LAMBDA, grid.clone(), bump(&grid)).unwrap();
        assert!(deturck_map(&traj).is_err());
    }
}
