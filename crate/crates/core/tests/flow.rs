//! The Ricci–de Turck flow seeded by the negative mode: linearization,
//! the fixed point, growth, the cone and the ε → 0 sequence with the
//! de Turck map.

use schwarzschild_flow::flow::deturck::{deturck_map, flow_residuals};
use schwarzschild_flow::flow::diagnostics::{l2_norm, Profiles};
use schwarzschild_flow::flow::run::{ancient_limit, final_cone, run, run_on_grid, FlowConfig};
use schwarzschild_flow::flow::stepper::grid_mode;
use schwarzschild_flow::flow::{mode_on_sgrid, rhs, Background, BackgroundKind, RhsForm, SGrid};
use schwarzschild_flow::functional::Grid;
use schwarzschild_flow::spectral::{assemble, min_eig, EigenOptions, EigenResult};
use std::sync::{Arc, OnceLock};

fn eigen() -> &'static EigenResult {
    static E: OnceLock<EigenResult> = OnceLock::new();
    E.get_or_init(|| min_eig(&assemble(Arc::new(Grid::new(4096).unwrap())).unwrap(), &EigenOptions::default()).unwrap())
}

fn scaled(h: &Profiles, a: f64, shift: f64) -> Profiles {
    [0, 1, 2].map(|c| h[c].iter().map(|v| shift + a * v).collect())
}

/// ‖F(g₀ + δh)/δ + λh‖ / ‖λh‖ for the spectral mode on an n-cell grid.
fn linearization_error(n: usize, form: RhsForm) -> f64 {
    let e = eigen();
    let grid = SGrid::new(n, 50.0).unwrap();
    let h = mode_on_sgrid(&e.mode, &grid).unwrap();
    let bg = Background::new(&grid, BackgroundKind::G0, 0.0, scaled(&h, 0.0, 0.0)).unwrap();
    let delta = 1e-4;
    let f = rhs(&grid, &bg, &scaled(&h, delta, 1.0), form);
    let diff: Profiles = [0, 1, 2].map(|c| (0..n).map(|j| f[c][j] / delta + e.lambda * h[c][j]).collect());
    l2_norm(&grid, &diff) / l2_norm(&grid, &scaled(&h, e.lambda, 0.0))
}

#[test]
fn linearized_flow_reproduces_the_eigenvalue() {
    for form in [RhsForm::Expanded, RhsForm::Direct] {
        let (a, b) = (linearization_error(1024, form), linearization_error(2048, form));
        assert!(a <= 1e-3, "{form:?}: {a}");
        assert!(b < a / 4.0, "{form:?}: {a} -> {b}");
    }
}

#[test]
fn grid_growth_rate_matches_minus_lambda() {
    let e = eigen();
    let grid = SGrid::new(1024, 50.0).unwrap();
    let h = mode_on_sgrid(&e.mode, &grid).unwrap();
    let (_, mu) = grid_mode(&grid, e.lambda, &h, RhsForm::Expanded).unwrap();
    assert!((mu + e.lambda).abs() < 1e-4, "{mu} vs {}", -e.lambda);
}

#[test]
fn g0_is_a_fixed_point() {
    let e = eigen();
    let cfg = FlowConfig {
        epsilon: 0.0,
        t_end: Some(1.0),
        grid_n: 512,
        dt: Some(1e-3),
        records: 20,
        ..FlowConfig::default()
    };
    let traj = run(&cfg, e.lambda, &e.mode).unwrap();
    let drift = traj.rows.iter().map(|r| r.norm_g_minus_g0).fold(0.0, f64::max);
    assert!(drift / (traj.t_end - traj.t0) <= 1e-8, "{drift}");
}

#[test]
fn small_perturbation_grows_at_the_eigenvalue_rate() {
    let e = eigen();
    let cfg = FlowConfig { epsilon: 1e-3, grid_n: 512, records: 80, ..FlowConfig::default() };
    let traj = run(&cfg, e.lambda, &e.mode).unwrap();
    assert!(!traj.blew_up());
    let fit = traj.growth_fit().expect("fit over the first e-folding");
    assert!((fit.slope + e.lambda).abs() < 0.05 * e.lambda.abs(), "{} vs {}", fit.slope, -e.lambda);
    // The remainder is much smaller than the mode and the state stays in a thin cone.
    assert!(traj.w_over_delta_max() < 0.05 * traj.mode_w12());
    assert!(traj.max_cone_opening() < 0.05 * traj.mode_w12());
    let cone = final_cone(&traj).unwrap();
    assert!(cone.opening <= traj.max_cone_opening() + 1e-15);
}

#[test]
fn limit_sequence_converges_and_the_map_starts_at_the_identity() {
    let e = eigen();
    let base = FlowConfig {
        grid_n: 256,
        background: BackgroundKind::G0,
        records: 40,
        keep_snapshots: true,
        ..FlowConfig::default()
    };
    let eps = [2f64.powi(-4), 2f64.powi(-5), 2f64.powi(-6)];
    let (report, trajs) = ancient_limit(&eps, None, &base, e.lambda, &e.mode).unwrap();
    assert!(!report.any_blowup);
    assert!(report.strictly_decreasing, "{:?}", report.distances);
    assert!(report.common_m <= report.mode_w12);
    let finest = trajs.last().unwrap();
    let map = deturck_map(finest).unwrap();
    assert_eq!(map.identity_error(&finest.grid), 0.0);
    let res = flow_residuals(finest, &map).unwrap();
    assert!(res.ricci_flow.is_finite() && res.ricci_deturck > 0.0);
}

#[test]
fn invalid_sequences_are_rejected() {
    let e = eigen();
    let base = FlowConfig { grid_n: 64, ..FlowConfig::default() };
    assert!(ancient_limit(&[0.1], None, &base, e.lambda, &e.mode).is_err());
    assert!(ancient_limit(&[0.01, 0.1], None, &base, e.lambda, &e.mode).is_err());
    assert!(ancient_limit(&[0.1, 0.0], None, &base, e.lambda, &e.mode).is_err());
}

#[test]
fn runs_on_one_grid_are_reproducible() {
    let e = eigen();
    let grid = Arc::new(SGrid::new(128, 20.0).unwrap());
    let h = mode_on_sgrid(&e.mode, &grid).unwrap();
    let cfg = FlowConfig { epsilon: 0.01, grid_n: 128, s_max: 20.0, records: 10, ..FlowConfig::default() };
    let a = run_on_grid(&cfg, e.lambda, grid.clone(), h.clone()).unwrap();
    let b = run_on_grid(&cfg, e.lambda, grid, h).unwrap();
    assert_eq!(a.to_csv(), b.to_csv());
}
