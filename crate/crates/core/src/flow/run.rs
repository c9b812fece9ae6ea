//! Trajectories seeded by the negative mode: configuration, δ–t
//! bookkeeping, per-state diagnostics, growth-rate fit and the ε → 0
//! experiment.

use super::diagnostics::{
    combine, cone_distance, deviation_from_background, farfield_ratio, l2_norm, perturbation, w12_inner, w12_norm,
    Profiles,
};
use super::rhs::RhsForm;
use super::sgrid::{mode_on_sgrid, Background, BackgroundKind, SGrid};
use super::stepper::{check_positive, default_dt, Stepper};
use crate::error::{Error, Result};
use crate::functional::RadialSymTensor;
use serde::Serialize;
use std::fmt::Write as _;
use std::sync::Arc;

/// Default relative model-error allowance added to the statistical
/// half-width of the growth-rate confidence interval.
pub const GROWTH_MODEL_TOL: f64 = 0.05;
/// Two-sided 95% normal quantile.
const Z95: f64 = 1.96;
/// Default relative slack of the "decreasing up to tolerance" check.
pub const CAUCHY_TOL: f64 = 0.10;

/// Parameters of one flow run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FlowConfig {
    pub epsilon: f64,
    /// Final time; defaults to two e-foldings after the start time.
    pub t_end: Option<f64>,
    pub grid_n: usize,
    pub s_max: f64,
    /// Time step; defaults to `default_dt`.
    pub dt: Option<f64>,
    pub background: BackgroundKind,
    /// Approximate number of recorded states.
    pub records: usize,
    /// Keep the full profiles of every recorded state.
    pub keep_snapshots: bool,
    /// Largest ε treated as the linear regime.
    pub iota: f64,
    /// Relative model-error allowance of the growth-rate interval.
    pub growth_model_tol: f64,
    /// Relative slack of the "decreasing up to tolerance" distance check.
    pub cauchy_tol: f64,
    #[serde(skip)]
    pub form: RhsForm,
}

impl Default for FlowConfig {
    fn default() -> Self {
        Self {
            epsilon: 1e-3,
            t_end: None,
            grid_n: 2048,
            s_max: 50.0,
            dt: None,
            background: BackgroundKind::G0PlusEpsH,
            records: 200,
            keep_snapshots: false,
            iota: 0.0625,
            growth_model_tol: GROWTH_MODEL_TOL,
            cauchy_tol: CAUCHY_TOL,
            form: RhsForm::Expanded,
        }
    }
}

/// Start time t₀ = log ε/(−λ); runs with ε = 0 start at t = 0.
pub fn start_time(epsilon: f64, lambda: f64) -> f64 {
    if epsilon > 0.0 {
        epsilon.ln() / -lambda
    } else {
        0.0
    }
}

/// Time, the two time parameters and the state ratios G = g/ḡ. Time is
/// advanced only through `advance`, which recomputes t = t₀ + k·dt and
/// δ = e^{−λt} from the step count.
#[derive(Debug, Clone, PartialEq)]
pub struct FlowState {
    pub t0: f64,
    pub dt: f64,
    pub steps: u64,
    pub t: f64,
    pub delta: f64,
    pub lambda: f64,
    pub epsilon: f64,
    pub g: Profiles,
}

impl FlowState {
    pub fn new(t0: f64, dt: f64, lambda: f64, epsilon: f64, g: Profiles) -> Self {
        Self { t0, dt, steps: 0, t: t0, delta: (-lambda * t0).exp(), lambda, epsilon, g }
    }

    pub fn advance(&mut self) {
        self.steps += 1;
        self.t = self.t0 + self.steps as f64 * self.dt;
        self.delta = (-self.lambda * self.t).exp();
    }

    /// Amplitude ε·e^{−λ(t − t₀)} of the seeded mode under linear growth;
    /// equals δ whenever ε > 0.
    pub fn amplitude(&self) -> f64 {
        self.epsilon * (-self.lambda * (self.t - self.t0)).exp()
    }
}

/// One line of the trajectory table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TrajectoryRow {
    pub t: f64,
    pub delta: f64,
    /// ‖g − g₀‖₂.
    pub norm_g_minus_g0: f64,
    /// ‖w‖₂ with w = g − g₀ − δh.
    pub norm_w: f64,
    /// W^{1,2} cone opening of g − g₀ about the ray through h.
    pub cone_opening: f64,
    /// Far-field fraction of |g − ḡ|.
    pub farfield_max: f64,
}

pub const TRAJECTORY_HEADER: &str = "t,delta,norm_g_minus_g0,norm_w,cone_opening,farfield_max";

/// Recorded profiles.
#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub t: f64,
    pub delta: f64,
    pub g: Profiles,
}

/// Why a run stopped.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Termination {
    Completed,
    Blowup { t: f64, reason: String },
}

/// Least-squares growth rate of log‖g − g₀‖₂.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GrowthFit {
    pub slope: f64,
    pub intercept: f64,
    pub standard_error: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub window_start: f64,
    pub window_end: f64,
    pub points: usize,
}

impl GrowthFit {
    pub fn contains(&self, rate: f64) -> bool {
        self.ci_low <= rate && rate <= self.ci_high
    }
}

/// A completed or interrupted run.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub config: FlowConfig,
    pub lambda: f64,
    pub t0: f64,
    pub t_end: f64,
    pub dt: f64,
    pub grid: Arc<SGrid>,
    pub background: Arc<Background>,
    /// Frame components of the mode on the s-grid.
    pub mode: Profiles,
    pub rows: Vec<TrajectoryRow>,
    pub snapshots: Vec<Snapshot>,
    pub termination: Termination,
    pub final_state: FlowState,
}

impl Trajectory {
    pub fn blew_up(&self) -> bool {
        matches!(self.termination, Termination::Blowup { .. })
    }

    pub fn linear_regime(&self) -> bool {
        self.config.epsilon <= self.config.iota
    }

    /// Fit over the first e-folding [t₀, t₀ + 1/(−λ)].
    pub fn growth_fit(&self) -> Option<GrowthFit> {
        fit_growth(&self.rows, self.t0, self.t0 + 1.0 / -self.lambda, self.config.growth_model_tol)
    }

    /// max ‖w‖₂/δ over the recorded states.
    pub fn w_over_delta_max(&self) -> f64 {
        self.rows.iter().filter(|r| r.delta > 0.0).map(|r| r.norm_w / r.delta).fold(0.0, f64::max)
    }

    pub fn max_cone_opening(&self) -> f64 {
        self.rows.iter().map(|r| r.cone_opening).fold(0.0, f64::max)
    }

    pub fn max_farfield(&self) -> f64 {
        self.rows.iter().map(|r| r.farfield_max).fold(0.0, f64::max)
    }

    /// ‖h‖ in W^{1,2} on the flow grid.
    pub fn mode_w12(&self) -> f64 {
        w12_norm(&self.grid, &self.background, &self.mode)
    }

    /// Frame components of g − g₀ at the final state.
    pub fn final_perturbation(&self) -> Profiles {
        perturbation(&self.background, &self.final_state.g)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from(TRAJECTORY_HEADER);
        out.push('\n');
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{:e},{:e},{:e},{:e},{:e},{:e}",
                r.t, r.delta, r.norm_g_minus_g0, r.norm_w, r.cone_opening, r.farfield_max
            );
        }
        out
    }
}

/// Ordinary least squares of log(norm) against t over [from, to]; the
/// interval half-width is 1.96·SE + model_tol·|slope|.
pub fn fit_growth(rows: &[TrajectoryRow], from: f64, to: f64, model_tol: f64) -> Option<GrowthFit> {
    let tol = 1e-9 * (1.0 + to.abs());
    let pts: Vec<(f64, f64)> = rows
        .iter()
        .filter(|r| r.t >= from - tol && r.t <= to + tol && r.norm_g_minus_g0 > 0.0)
        .map(|r| (r.t, r.norm_g_minus_g0.ln()))
        .collect();
    let m = pts.len();
    if m < 3 {
        return None;
    }
    let mt = pts.iter().map(|p| p.0).sum::<f64>() / m as f64;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / m as f64;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mt).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mt) * (p.1 - my)).sum();
    if !(sxx > 0.0) {
        return None;
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mt;
    let ssr: f64 = pts.iter().map(|p| (p.1 - intercept - slope * p.0).powi(2)).sum();
    let se = (ssr / (m - 2) as f64 / sxx).sqrt();
    let half = Z95 * se + model_tol * slope.abs();
    Some(GrowthFit {
        slope,
        intercept,
        standard_error: se,
        ci_low: slope - half,
        ci_high: slope + half,
        window_start: pts[0].0,
        window_end: pts[m - 1].0,
        points: m,
    })
}

fn validate(config: &FlowConfig, lambda: f64) -> Result<()> {
    if !(lambda < 0.0 && lambda.is_finite()) {
        return Err(Error::Parameter { name: "lambda", reason: format!("must be negative, got {lambda}") });
    }
    if !(config.epsilon >= 0.0 && config.epsilon.is_finite()) {
        return Err(Error::Parameter { name: "epsilon", reason: format!("must be >= 0, got {}", config.epsilon) });
    }
    for (name, v) in [("growth_model_tol", config.growth_model_tol), ("cauchy_tol", config.cauchy_tol)] {
        if !(v >= 0.0 && v.is_finite()) {
            return Err(Error::Parameter { name, reason: format!("must be >= 0, got {v}") });
        }
    }
    if !(config.iota > 0.0) {
        return Err(Error::Parameter { name: "iota", reason: format!("must be positive, got {}", config.iota) });
    }
    if config.records == 0 {
        return Err(Error::Parameter { name: "records", reason: "must be at least 1".into() });
    }
    Ok(())
}

/// Integrate from t₀ = log ε/(−λ) with g(t₀) = g₀ + εh to t_end. A loss of
/// positivity ends the run early with a blowup termination; the last valid
/// state is kept.
pub fn run(config: &FlowConfig, lambda: f64, mode: &RadialSymTensor) -> Result<Trajectory> {
    validate(config, lambda)?;
    let grid = Arc::new(SGrid::new(config.grid_n, config.s_max)?);
    let h = mode_on_sgrid(mode, &grid)?;
    run_on_grid(config, lambda, grid, h)
}

/// `run` on a prepared grid with the mode already sampled on it.
pub fn run_on_grid(config: &FlowConfig, lambda: f64, grid: Arc<SGrid>, h: Profiles) -> Result<Trajectory> {
    validate(config, lambda)?;
    let eps = config.epsilon;
    let t0 = start_time(eps, lambda);
    let t_end = match config.t_end {
        Some(t) => t,
        None if eps > 0.0 => t0 + 2.0 / -lambda,
        None => {
            return Err(Error::Parameter { name: "t_end", reason: "required when epsilon = 0".into() });
        }
    };
    if !(t_end >= t0 && t_end.is_finite()) {
        return Err(Error::Parameter { name: "t_end", reason: format!("must be >= t0 = {t0}, got {t_end}") });
    }
    let bg = Arc::new(Background::new(&grid, config.background, eps, h.clone())?);
    let dt_max = config.dt.unwrap_or_else(|| default_dt(&grid, &bg));
    if !(dt_max > 0.0) {
        return Err(Error::Parameter { name: "dt", reason: format!("must be positive, got {dt_max}") });
    }
    let span = t_end - t0;
    let k_total = (span / dt_max).ceil() as u64;
    let dt = if k_total > 0 { span / k_total as f64 } else { dt_max };

    // Initial ratios G = (g₀ + εh)/ḡ.
    let g_init: Profiles =
        [0, 1, 2].map(|c| (0..grid.len()).map(|j| (1.0 + eps * h[c][j]) / bg.ratio_to_g0(c, j)).collect());
    check_positive(&g_init).map_err(|e| match e {
        Error::Flow { reason, .. } => Error::Flow { t: t0, reason },
        e => e,
    })?;
    let mut state = FlowState::new(t0, dt, lambda, eps, g_init);
    let stepper = if k_total > 0 { Some(Stepper::new(grid.clone(), bg.clone(), dt, config.form)?) } else { None };
    let every = ((k_total as usize) / config.records).max(1) as u64;

    let h_w12 = w12_inner(&grid, &bg, &h, &h);
    let record = |state: &FlowState| -> Result<TrajectoryRow> {
        let x = perturbation(&bg, &state.g);
        let w = combine(1.0, &x, -state.amplitude(), &h);
        let cone =
            super::diagnostics::cone_from_gram(w12_inner(&grid, &bg, &x, &x), w12_inner(&grid, &bg, &x, &h), h_w12)?;
        Ok(TrajectoryRow {
            t: state.t,
            delta: state.delta,
            norm_g_minus_g0: l2_norm(&grid, &x),
            norm_w: l2_norm(&grid, &w),
            cone_opening: cone.opening,
            farfield_max: farfield_ratio(&deviation_from_background(&bg, &state.g)),
        })
    };

    let mut rows = vec![record(&state)?];
    let mut snapshots = Vec::new();
    if config.keep_snapshots {
        snapshots.push(Snapshot { t: state.t, delta: state.delta, g: state.g.clone() });
    }
    let mut termination = Termination::Completed;
    if let Some(stepper) = &stepper {
        while state.steps < k_total {
            let previous = state.g.clone();
            match stepper.step(&mut state.g) {
                Ok(()) => state.advance(),
                Err(Error::Flow { reason, .. }) => {
                    termination = Termination::Blowup { t: state.t + dt, reason };
                    state.g = previous;
                    break;
                }
                Err(e) => return Err(e),
            }
            if state.steps % every == 0 || state.steps == k_total {
                rows.push(record(&state)?);
                if config.keep_snapshots {
                    snapshots.push(Snapshot { t: state.t, delta: state.delta, g: state.g.clone() });
                }
            }
        }
    }
    if matches!(termination, Termination::Blowup { .. }) && rows.last().map(|r| r.t) != Some(state.t) {
        rows.push(record(&state)?);
        if config.keep_snapshots {
            snapshots.push(Snapshot { t: state.t, delta: state.delta, g: state.g.clone() });
        }
    }
    Ok(Trajectory {
        config: config.clone(),
        lambda,
        t0,
        t_end,
        dt,
        grid,
        background: bg,
        mode: h,
        rows,
        snapshots,
        termination,
        final_state: state,
    })
}

/// One member of the ε-sequence.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AncientRun {
    pub epsilon: f64,
    pub t_start: f64,
    pub steps: u64,
    pub termination: Termination,
    pub max_cone_opening: f64,
    /// ‖g − g₀‖_{W^{1,2}} at the common time.
    pub final_w12: f64,
}

/// Convergence table of the ε_n → 0 experiment.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AncientReport {
    pub t_common: f64,
    pub runs: Vec<AncientRun>,
    /// ‖g^{(ε_n)} − g^{(ε_{n+1})}‖_{W^{1,2}} at the common time.
    pub distances: Vec<f64>,
    pub strictly_decreasing: bool,
    /// d_{n+1} ≤ (1 + cauchy_tol)·d_n for all n.
    pub decreasing_within_tolerance: bool,
    /// Largest cone opening over all runs and recorded states.
    pub common_m: f64,
    /// ‖h‖_{W^{1,2}}: openings are at most this by construction.
    pub mode_w12: f64,
    pub any_blowup: bool,
}

impl AncientReport {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("epsilon,t_start,steps,blowup,max_cone_opening,final_w12,distance_to_next\n");
        for (i, r) in self.runs.iter().enumerate() {
            let d = self.distances.get(i).map(|d| format!("{d:e}")).unwrap_or_default();
            let _ = writeln!(
                out,
                "{:e},{:e},{},{},{:e},{:e},{}",
                r.epsilon,
                r.t_start,
                r.steps,
                matches!(r.termination, Termination::Blowup { .. }),
                r.max_cone_opening,
                r.final_w12,
                d
            );
        }
        out
    }
}

/// Run every ε from its own start time to `t_common` (default: the start
/// time of the largest ε) on one grid, concurrently, and compare the
/// results at `t_common`.
pub fn ancient_limit(
    epsilons: &[f64],
    t_common: Option<f64>,
    base: &FlowConfig,
    lambda: f64,
    mode: &RadialSymTensor,
) -> Result<(AncientReport, Vec<Trajectory>)> {
    if epsilons.len() < 2 {
        return Err(Error::Parameter { name: "epsilons", reason: "need at least two values".into() });
    }
    if epsilons.iter().any(|e| !(*e > 0.0)) || epsilons.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::Parameter { name: "epsilons", reason: "must be positive and strictly decreasing".into() });
    }
    validate(base, lambda)?;
    let t_common = t_common.unwrap_or_else(|| start_time(epsilons[0], lambda));
    if t_common < start_time(epsilons[0], lambda) - 1e-12 {
        return Err(Error::Parameter {
            name: "t_common",
            reason: "must not precede the start of the largest epsilon".into(),
        });
    }
    let grid = Arc::new(SGrid::new(base.grid_n, base.s_max)?);
    let h = mode_on_sgrid(mode, &grid)?;
    let results: Vec<Result<Trajectory>> = std::thread::scope(|scope| {
        let handles: Vec<_> = epsilons
            .iter()
            .map(|&eps| {
                let cfg = FlowConfig { epsilon: eps, t_end: Some(t_common), ..base.clone() };
                let (grid, h) = (grid.clone(), h.clone());
                scope.spawn(move || run_on_grid(&cfg, lambda, grid, h))
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("flow worker panicked")).collect()
    });
    let trajectories = results.into_iter().collect::<Result<Vec<_>>>()?;
    let g0_frame_bg = &trajectories[0].background;
    let finals: Vec<Profiles> = trajectories.iter().map(|t| t.final_perturbation()).collect();
    let distances: Vec<f64> =
        finals.windows(2).map(|w| w12_norm(&grid, g0_frame_bg, &combine(1.0, &w[0], -1.0, &w[1]))).collect();
    let runs: Vec<AncientRun> = trajectories
        .iter()
        .zip(&finals)
        .map(|(t, x)| AncientRun {
            epsilon: t.config.epsilon,
            t_start: t.t0,
            steps: t.final_state.steps,
            termination: t.termination.clone(),
            max_cone_opening: t.max_cone_opening(),
            final_w12: w12_norm(&grid, g0_frame_bg, x),
        })
        .collect();
    let strictly_decreasing = distances.windows(2).all(|w| w[1] < w[0]);
    let decreasing_within_tolerance = distances.windows(2).all(|w| w[1] <= (1.0 + base.cauchy_tol) * w[0]);
    let common_m = runs.iter().map(|r| r.max_cone_opening).fold(0.0, f64::max);
    let any_blowup = runs.iter().any(|r| matches!(r.termination, Termination::Blowup { .. }));
    let mode_w12 = w12_norm(&grid, g0_frame_bg, &h);
    let report = AncientReport {
        t_common,
        runs,
        distances,
        strictly_decreasing,
        decreasing_within_tolerance,
        common_m,
        mode_w12,
        any_blowup,
    };
    Ok((report, trajectories))
}

/// Cone distance of a trajectory's final state (convenience for reports).
pub fn final_cone(traj: &Trajectory) -> Result<super::diagnostics::ConeReport> {
    cone_distance(&traj.grid, &traj.background, &traj.final_perturbation(), &traj.mode)
}

#[cfg(test)]
mod tests {
    use super::*;

    const LAMBDA: f64 = -0.75;

    fn small_grid() -> Arc<SGrid> {
        Arc::new(SGrid::new(64, 20.0).unwrap())
    }

    /// Smooth bump with u0 = u1 at the bolt; not an eigenmode, which the
    /// bookkeeping tests do not need.
    fn bump(grid: &SGrid) -> Profiles {
        let f: Vec<f64> = grid.centers().iter().map(|s| (-(s / 3.0).powi(2)).exp()).collect();
        [f.clone(), f.clone(), f.iter().map(|v| -v).collect()]
    }

    fn config(epsilon: f64, t_end: Option<f64>) -> FlowConfig {
        FlowConfig { epsilon, t_end, grid_n: 64, s_max: 20.0, records: 10, ..Default::default() }
    }

    #[test]
    fn start_time_and_delta_bookkeeping() {
        let eps = 1e-3;
        let t0 = start_time(eps, LAMBDA);
        assert!(((-LAMBDA * t0).exp() - eps).abs() < 1e-15);
        assert_eq!(start_time(0.0, LAMBDA), 0.0);
        let mut s = FlowState::new(t0, 0.01, LAMBDA, eps, [vec![], vec![], vec![]]);
        for _ in 0..1000 {
            s.advance();
        }
        assert_eq!(s.t, t0 + 1000.0 * 0.01);
        assert!((s.delta - (-LAMBDA * s.t).exp()).abs() < 1e-15 * s.delta.max(1.0));
        assert!((s.amplitude() - s.delta).abs() < 1e-12 * s.delta);
    }

    #[test]
    fn zero_epsilon_on_g0_stays_at_g0() {
        let grid = small_grid();
        let mut cfg = config(0.0, Some(0.5));
        cfg.background = BackgroundKind::G0;
        let traj = run_on_grid(&cfg, LAMBDA, grid.clone(), bump(&grid)).unwrap();
        assert!(!traj.blew_up());
        assert!(traj.rows.iter().all(|r| r.norm_g_minus_g0 < 1e-12), "{:?}", traj.rows.last());
    }

    #[test]
    fn zero_epsilon_needs_an_end_time() {
        let grid = small_grid();
        assert!(run_on_grid(&config(0.0, None), LAMBDA, grid.clone(), bump(&grid)).is_err());
    }

    #[test]
    fn end_before_start_is_rejected() {
        let grid = small_grid();
        let t0 = start_time(1e-3, LAMBDA);
        assert!(run_on_grid(&config(1e-3, Some(t0 - 1.0)), LAMBDA, grid.clone(), bump(&grid)).is_err());
        let traj = run_on_grid(&config(1e-3, Some(t0)), LAMBDA, grid.clone(), bump(&grid)).unwrap();
        assert_eq!(traj.final_state.steps, 0);
    }

    #[test]
    fn invalid_parameters_are_rejected() {
        let grid = small_grid();
        assert!(run_on_grid(&config(1e-3, None), 0.5, grid.clone(), bump(&grid)).is_err());
        assert!(run_on_grid(&config(-1e-3, None), LAMBDA, grid.clone(), bump(&grid)).is_err());
    }

    #[test]
    fn time_stepping_converges_at_first_order() {
        let grid = small_grid();
        let h = bump(&grid);
        let t0 = start_time(0.05, LAMBDA);
        let finals: Vec<Profiles> = [0.02, 0.01, 0.005]
            .iter()
            .map(|&dt| {
                let cfg = FlowConfig { dt: Some(dt), ..config(0.05, Some(t0 + 0.4)) };
                run_on_grid(&cfg, LAMBDA, grid.clone(), h.clone()).unwrap().final_perturbation()
            })
            .collect();
        let e1 = l2_norm(&grid, &combine(1.0, &finals[0], -1.0, &finals[1]));
        let e2 = l2_norm(&grid, &combine(1.0, &finals[1], -1.0, &finals[2]));
        assert!(e1 / e2 >= 1.9, "{e1} {e2}");
    }

    #[test]
    fn growth_fit_recovers_an_exact_exponential() {
        let rows: Vec<TrajectoryRow> = (0..50)
            .map(|k| {
                let t = k as f64 * 0.05;
                TrajectoryRow {
                    t,
                    delta: 0.0,
                    norm_g_minus_g0: 2.0 * (0.7 * t).exp(),
                    norm_w: 0.0,
                    cone_opening: 0.0,
                    farfield_max: 0.0,
                }
            })
            .collect();
        let fit = fit_growth(&rows, 0.0, 1.0, GROWTH_MODEL_TOL).unwrap();
        assert!((fit.slope - 0.7).abs() < 1e-12);
        assert!(fit.contains(0.7) && fit.contains(0.7 * 1.04) && !fit.contains(0.7 * 1.06));
        assert_eq!(fit.points, 21);
        assert!(fit_growth(&rows[..2], 0.0, 1.0, GROWTH_MODEL_TOL).is_none());
    }

    #[test]
    fn csv_has_one_line_per_record() {
        let grid = small_grid();
        let traj = run_on_grid(&config(1e-3, None), LAMBDA, grid.clone(), bump(&grid)).unwrap();
        let csv = traj.to_csv();
        assert!(csv.starts_with(TRAJECTORY_HEADER));
        assert_eq!(csv.lines().count(), traj.rows.len() + 1);
    }
}
