//! Command-line front end: argument parsing, the five experiments, artifact
//! writing and the run manifest.

pub mod settings;

pub use settings::Settings;

use crate::error::{Error, Result};
use crate::flow::deturck::{deturck_map, flow_residuals};
use crate::flow::run::{ancient_limit, run, Termination};
use crate::flow::stepper::grid_mode;
use crate::functional::{lemma36_certificate, Grid, Lemma36Certificate};
use crate::geometry::curvature::{christoffel_names, riemann_names};
use crate::geometry::{max_ricci, oracle_parity, parity_csv, sectional_bound_check, FaultInjection, Schwarzschild};
use crate::spectral::{assemble, decay_check, min_eig, EigenResult};
use clap::{Parser, Subcommand};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::Instant;

/// Version of every JSON output layout; bumped on breaking changes.
pub const SCHEMA_VERSION: u32 = 1;

/// Process exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ExitStatus {
    Pass = 0,
    CheckFailed = 1,
    UsageError = 2,
    NumericalFailure = 3,
}

impl ExitStatus {
    pub fn code(self) -> i32 {
        self as i32
    }

    /// Exit status of a library error: bad input is a usage problem,
    /// anything else is a numerical failure.
    pub fn of_error(e: &Error) -> Self {
        match e {
            Error::Config(_) | Error::Parameter { .. } | Error::Domain { .. } | Error::Chart(_) => Self::UsageError,
            _ => Self::NumericalFailure,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "schwarzschild-flow",
    version,
    about = "Curvature, negative mode and Ricci-de Turck flow of Euclidean Schwarzschild"
)]
pub struct Cli {
    /// `key = value` file overriding the defaults table.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Output directory for artifacts and the run manifest.
    #[arg(long, global = true, default_value = "out")]
    pub out: PathBuf,
    /// Print the summary as JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Closed-form curvature against a finite-difference oracle, Ricci
    /// flatness and the sectional curvature bound.
    VerifyGeometry {
        /// Number of sampled radii (overrides `samples`).
        #[arg(long)]
        samples: Option<usize>,
        /// Flip the sign of a closed-form component (exercises the failure path).
        #[arg(long, hide = true)]
        inject_fault: Vec<String>,
    },
    /// Energy certificate of the explicit test tensor.
    Lemma36 {
        /// Ramp parameter (overrides `lemma36_n`).
        #[arg(long)]
        n: Option<u32>,
    },
    /// Lowest eigenpair of the Lichnerowicz form among radial tensors.
    Eigen {
        /// Grid resolution (overrides `eigen_grid_n`).
        #[arg(long)]
        grid_n: Option<usize>,
    },
    /// One Ricci-de Turck flow run seeded by the negative mode.
    Flow,
    /// The epsilon -> 0 sequence of flow runs and the de Turck recovery.
    Ancient,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::VerifyGeometry { .. } => "verify-geometry",
            Command::Lemma36 { .. } => "lemma36",
            Command::Eigen { .. } => "eigen",
            Command::Flow => "flow",
            Command::Ancient => "ancient",
        }
    }

    /// Fold the command's flags into the settings.
    pub fn apply_overrides(&self, s: &mut Settings) {
        match self {
            Command::VerifyGeometry { samples: Some(v), .. } => s.samples = *v,
            Command::Lemma36 { n: Some(v) } => s.lemma36_n = *v,
            Command::Eigen { grid_n: Some(v) } => s.eigen_grid_n = *v,
            _ => {}
        }
    }
}

/// Outcome of a command: verdict, machine summary, text lines and files.
#[derive(Debug, Clone)]
pub struct Report {
    pub status: ExitStatus,
    pub summary: Value,
    pub lines: Vec<String>,
    /// (file name, contents), written under the output directory.
    pub artifacts: Vec<(String, String)>,
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

fn status_of(ok: bool) -> ExitStatus {
    if ok {
        ExitStatus::Pass
    } else {
        ExitStatus::CheckFailed
    }
}

fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable report");
    s.push('\n');
    s
}

/// Sorted radii drawn uniformly from [r_min, r_max] by a seeded generator.
pub fn sample_radii(s: &Settings) -> Result<Vec<f64>> {
    if s.samples < 10 {
        return Err(Error::Parameter { name: "samples", reason: format!("need at least 10, got {}", s.samples) });
    }
    if !(s.r_min > 1.0 && s.r_max > s.r_min && s.r_max.is_finite()) {
        return Err(Error::Parameter { name: "r_min/r_max", reason: "need 1 < r_min < r_max < inf".into() });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(s.seed);
    let mut radii: Vec<f64> = (0..s.samples).map(|_| rng.gen_range(s.r_min..=s.r_max)).collect();
    radii.sort_by(f64::total_cmp);
    Ok(radii)
}

pub fn verify_geometry(s: &Settings, inject_fault: &[String]) -> Result<Report> {
    let known: Vec<String> =
        christoffel_names().into_iter().map(|(n, _)| n).chain(riemann_names().into_iter().map(|(n, _)| n)).collect();
    if let Some(bad) = inject_fault.iter().find(|f| !known.contains(f)) {
        return Err(Error::Parameter { name: "inject-fault", reason: format!("unknown component {bad:?}") });
    }
    let radii = sample_radii(s)?;
    let metric = Schwarzschild;
    let rows = oracle_parity(&metric, &radii, &FaultInjection { flip_sign: inject_fault.to_vec() })?;
    let worst = rows.iter().max_by(|a, b| a.rel_err.total_cmp(&b.rel_err)).expect("at least ten radii");
    let mut failing: Vec<String> =
        rows.iter().filter(|r| !(r.rel_err <= s.parity_rel_tol)).map(|r| r.component.clone()).collect();
    failing.dedup();
    failing.sort();
    failing.dedup();
    let ricci = max_ricci(&metric, &radii)?;
    let sectional = sectional_bound_check(&metric, &radii)?;
    let parity_ok = failing.is_empty();
    let ricci_ok = ricci <= s.ricci_tol;
    let sectional_ok = sectional.max_ratio <= 1.0 + s.sectional_slack;
    let pass = parity_ok && ricci_ok && sectional_ok;
    let summary = json!({
        "schema": SCHEMA_VERSION,
        "samples": radii.len(),
        "seed": s.seed,
        "parity": {
            "max_rel_err": worst.rel_err,
            "worst_component": worst.component,
            "worst_r": worst.r,
            "tolerance": s.parity_rel_tol,
            "failing_components": failing,
            "pass": parity_ok,
        },
        "ricci": { "max_abs": ricci, "tolerance": s.ricci_tol, "pass": ricci_ok },
        "sectional": {
            "max_abs_k_r3": sectional.max_ratio,
            "argmax_r": sectional.argmax_r,
            "argmax_plane": sectional.argmax_plane,
            "bound": 1.0 + s.sectional_slack,
            "pass": sectional_ok,
        },
        "pass": pass,
    });
    let mut lines = vec![
        format!(
            "oracle parity: max rel err {:.3e} ({} at r = {:.4}) <= {:e}: {}",
            worst.rel_err,
            worst.component,
            worst.r,
            s.parity_rel_tol,
            verdict(parity_ok)
        ),
        format!("ricci flat: max |Ric| {ricci:.3e} <= {:e}: {}", s.ricci_tol, verdict(ricci_ok)),
        format!("sectional bound: max |K| r^3 = {:.15} : {}", sectional.max_ratio, verdict(sectional_ok)),
    ];
    if !parity_ok {
        lines.push(format!("failing components: {}", failing.join(", ")));
    }
    Ok(Report {
        status: status_of(pass),
        summary: summary.clone(),
        lines,
        artifacts: vec![("geometry_parity.csv".into(), parity_csv(&rows)), ("geometry.json".into(), to_json(&summary))],
    })
}

pub fn lemma36(s: &Settings) -> Result<Report> {
    let c = lemma36_certificate(s.lemma36_n)?;
    let total_ok = c.total < s.lemma36_total_bound;
    let iq = &c.inequalities;
    let failed: Vec<&str> = [("ne1", iq.ne1.holds), ("ne2", iq.ne2.holds), ("ne3", iq.ne3.holds)]
        .into_iter()
        .filter(|(_, ok)| !ok)
        .map(|(n, _)| n)
        .collect();
    let mut summary = serde_json::to_value(&c).expect("serializable certificate");
    let obj = summary.as_object_mut().expect("certificate is an object");
    obj.insert("schema".into(), json!(SCHEMA_VERSION));
    obj.insert("total_bound".into(), json!(s.lemma36_total_bound));
    obj.insert("failed_groupings".into(), json!(failed));
    obj.insert("pass".into(), json!(total_ok));
    let mut lines = vec![
        format!("J1..J8 = {:?}", [c.J1, c.J2, c.J3, c.J4, c.J5, c.J6, c.J7, c.J8]),
        format!("J1+J6 = {:.6} <= 0: {}", iq.ne1.value, verdict(iq.ne1.holds)),
        format!("J2+J4+J7 = {:.6} <= {}: {}", iq.ne2.value, iq.ne2.bound, verdict(iq.ne2.holds)),
        format!("J3+J5+J8 = {:.6} <= {}: {}", iq.ne3.value, iq.ne3.bound, verdict(iq.ne3.holds)),
        format!("total = {:.6} < {}: {}", c.total, s.lemma36_total_bound, verdict(total_ok)),
        format!("with the r^2 volume factor in the gradient term: total = {:.6}", c.corrected_total),
    ];
    if !failed.is_empty() {
        lines.push(format!("failed groupings: {}", failed.join(", ")));
    }
    let text = to_json(&summary);
    Ok(Report { status: status_of(total_ok), summary, lines, artifacts: vec![("lemma36.json".into(), text)] })
}

/// Lowest eigenpair at the configured resolution.
pub fn solve_eigen(s: &Settings) -> Result<EigenResult> {
    let mats = assemble(Arc::new(Grid::new(s.eigen_grid_n)?))?;
    min_eig(&mats, &s.eigen_options())
}

/// Literal certificate bound a(ĥ)/‖ĥ‖² on the lowest eigenvalue.
fn certificate_bound(c: &Lemma36Certificate) -> f64 {
    c.a_hat / c.norm_sq
}

fn mode_csv(e: &EigenResult) -> String {
    let mut out = String::from("p,r,u0,u1,u2\n");
    for (i, &p) in e.mode.grid.nodes().iter().enumerate() {
        let r = 1.0 / ((1.0 - p) * (1.0 + p));
        let _ = writeln!(out, "{p:e},{r:e},{:e},{:e},{:e}", e.mode.u0[i], e.mode.u1[i], e.mode.u2[i]);
    }
    out
}

pub fn eigen(s: &Settings) -> Result<Report> {
    let e = solve_eigen(s)?;
    let decay = decay_check(&e.mode);
    let cert = lemma36_certificate(s.lemma36_n)?;
    let bound = certificate_bound(&cert);
    let in_range = e.lambda > -2.0 && e.lambda < 0.0;
    let residual_ok = e.residual_l2 <= s.eigen_residual_tol;
    let below_bound = e.lambda <= bound;
    let pass = in_range && residual_ok;
    let summary = json!({
        "schema": SCHEMA_VERSION,
        "grid_n": e.grid_n,
        "lambda": e.lambda,
        "residual_l2": e.residual_l2,
        "residual_tol": s.eigen_residual_tol,
        "decay": { "c0": decay.c0, "c0_at": decay.c0_at, "c1": decay.c1, "c1_at": decay.c1_at },
        "upper_bound_from_lemma36": bound,
        "upper_bound_with_volume_factor": cert.a_hat_corrected / cert.norm_sq,
        "second_ritz": e.second_ritz,
        "count_below_half": e.count_below_half,
        "iterations": e.iterations,
        "checks": { "lambda_in_range": in_range, "residual": residual_ok, "below_certificate_bound": below_bound },
        "pass": pass,
    });
    let lines = vec![
        format!("lambda = {:.10} on n = {} (in (-2, 0): {})", e.lambda, e.grid_n, verdict(in_range)),
        format!("residual = {:.3e} <= {:e}: {}", e.residual_l2, s.eigen_residual_tol, verdict(residual_ok)),
        format!("certificate bound a/|h|^2 = {bound:.6}; lambda below it: {}", verdict(below_bound)),
        format!("eigenvalues below lambda/2: {}; second Ritz value {:.6}", e.count_below_half, e.second_ritz),
        format!("decay constants c0 = {:.4e}, c1 = {:.4e}", decay.c0, decay.c1),
    ];
    Ok(Report {
        status: status_of(pass),
        summary: summary.clone(),
        lines,
        artifacts: vec![("eigen.json".into(), to_json(&summary)), ("mode.csv".into(), mode_csv(&e))],
    })
}

fn termination_json(t: &Termination) -> Value {
    match t {
        Termination::Completed => json!({ "kind": "completed" }),
        Termination::Blowup { t, reason } => json!({ "kind": "blowup", "t": t, "reason": reason }),
    }
}

pub fn flow(s: &Settings) -> Result<Report> {
    let e = solve_eigen(s)?;
    let cfg = s.flow_config();
    let traj = run(&cfg, e.lambda, &e.mode)?;
    let (_, lambda_grid) = grid_mode(&traj.grid, e.lambda, &traj.mode, cfg.form)?;
    let fit = traj.growth_fit();
    let rate = -e.lambda;
    let linear = traj.linear_regime();
    let mut warnings = Vec::new();
    if !linear {
        warnings.push(format!(
            "epsilon = {} exceeds iota = {}: nonlinear regime, growth rate not checked",
            cfg.epsilon, cfg.iota
        ));
    }
    let growth_ok = if linear && cfg.epsilon > 0.0 { fit.is_some_and(|f| f.contains(rate)) } else { true };
    let pass = !traj.blew_up() && growth_ok;
    let max_norm = traj.rows.iter().map(|r| r.norm_g_minus_g0).fold(0.0, f64::max);
    let summary = json!({
        "schema": SCHEMA_VERSION,
        "epsilon": cfg.epsilon,
        "lambda": e.lambda,
        "lambda_grid": -lambda_grid,
        "t0": traj.t0,
        "t_end": traj.t_end,
        "dt": traj.dt,
        "steps": traj.final_state.steps,
        "grid_n": cfg.grid_n,
        "s_max": cfg.s_max,
        "background": cfg.background,
        "termination": termination_json(&traj.termination),
        "linear_regime": linear,
        "growth": fit.map(|f| json!({
            "slope": f.slope,
            "ci_low": f.ci_low,
            "ci_high": f.ci_high,
            "standard_error": f.standard_error,
            "window_start": f.window_start,
            "window_end": f.window_end,
            "points": f.points,
            "expected": rate,
            "contains_expected": f.contains(rate),
        })),
        "max_norm_g_minus_g0": max_norm,
        "w_over_delta_max": traj.w_over_delta_max(),
        "max_cone_opening": traj.max_cone_opening(),
        "mode_w12": traj.mode_w12(),
        "max_farfield": traj.max_farfield(),
        "warnings": warnings,
        "pass": pass,
    });
    let mut lines = vec![
        format!("lambda = {:.8} (flow grid {:.8}), epsilon = {}", e.lambda, -lambda_grid, cfg.epsilon),
        format!(
            "t in [{:.4}, {:.4}], dt = {:.3e}, {} steps, blowup: {}",
            traj.t0,
            traj.t_end,
            traj.dt,
            traj.final_state.steps,
            traj.blew_up()
        ),
    ];
    match fit {
        Some(f) => lines.push(format!(
            "growth slope {:.6} in [{:.6}, {:.6}] vs -lambda = {rate:.6}: {}",
            f.slope,
            f.ci_low,
            f.ci_high,
            verdict(f.contains(rate))
        )),
        None => lines.push(format!("growth slope: not fitted; max |g - g0| = {max_norm:.3e}")),
    }
    lines.push(format!(
        "max |w|/delta = {:.4e}, max cone opening = {:.4e}",
        traj.w_over_delta_max(),
        traj.max_cone_opening()
    ));
    lines.extend(warnings.iter().map(|w| format!("warning: {w}")));
    Ok(Report {
        status: status_of(pass),
        summary: summary.clone(),
        lines,
        artifacts: vec![("trajectory.csv".into(), traj.to_csv()), ("flow_summary.json".into(), to_json(&summary))],
    })
}

pub fn ancient(s: &Settings) -> Result<Report> {
    let e = solve_eigen(s)?;
    let (report, trajectories) = ancient_limit(&s.epsilons, s.t_common, &s.ancient_config(), e.lambda, &e.mode)?;
    let finest = trajectories.last().expect("at least two runs");
    let map = deturck_map(finest)?;
    let res = flow_residuals(finest, &map)?;
    let identity_error = map.identity_error(&finest.grid);
    let identity_ok = identity_error == 0.0;
    let residual_ok = res.ratio <= s.deturck_ratio_max;
    let pass = report.strictly_decreasing && !report.any_blowup && identity_ok && residual_ok;
    let summary = json!({
        "schema": SCHEMA_VERSION,
        "lambda": e.lambda,
        "grid_n": s.grid_n,
        "background": s.ancient_background,
        "limit": report,
        "deturck": {
            "epsilon": finest.config.epsilon,
            "identity_error": identity_error,
            "max_displacement": map.max_displacement(&finest.grid),
            "ricci_flow_residual": res.ricci_flow,
            "deturck_residual": res.ricci_deturck,
            "ratio": res.ratio,
            "ratio_max": s.deturck_ratio_max,
        },
        "checks": {
            "strictly_decreasing": report.strictly_decreasing,
            "no_blowup": !report.any_blowup,
            "deturck_identity": identity_ok,
            "deturck_residual": residual_ok,
        },
        "pass": pass,
    });
    let distances: Vec<String> = report.distances.iter().map(|d| format!("{d:.4e}")).collect();
    let lines = vec![
        format!("lambda = {:.8}; common time t = {:.4}", e.lambda, report.t_common),
        format!(
            "pairwise W12 distances: [{}] strictly decreasing: {}",
            distances.join(", "),
            verdict(report.strictly_decreasing)
        ),
        format!("common cone bound M = {:.4e} (|h|_W12 = {:.4})", report.common_m, report.mode_w12),
        format!("de Turck map at delta = 0: identity error {identity_error:e}: {}", verdict(identity_ok)),
        format!(
            "pulled-back Ricci flow residual {:.3e} vs de Turck residual {:.3e} (ratio {:.3} <= {}): {}",
            res.ricci_flow,
            res.ricci_deturck,
            res.ratio,
            s.deturck_ratio_max,
            verdict(residual_ok)
        ),
    ];
    Ok(Report {
        status: status_of(pass),
        summary: summary.clone(),
        lines,
        artifacts: vec![("ancient.csv".into(), report.to_csv()), ("ancient.json".into(), to_json(&summary))],
    })
}

/// Run a parsed command with fully resolved settings.
pub fn execute(command: &Command, s: &Settings) -> Result<Report> {
    match command {
        Command::VerifyGeometry { inject_fault, .. } => verify_geometry(s, inject_fault),
        Command::Lemma36 { .. } => lemma36(s),
        Command::Eigen { .. } => eigen(s),
        Command::Flow => flow(s),
        Command::Ancient => ancient(s),
    }
}

/// Record of one invocation, written last.
#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub schema: u32,
    pub command: String,
    pub status: ExitStatus,
    pub exit_code: i32,
    pub error: Option<String>,
    pub config: std::collections::BTreeMap<String, String>,
    pub artifacts: Vec<String>,
    pub versions: Versions,
    pub wall_time: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct Versions {
    pub tool: String,
    pub schema: u32,
}

fn write_artifacts(out: &Path, artifacts: &[(String, String)]) -> Result<Vec<String>> {
    std::fs::create_dir_all(out).map_err(|e| Error::Config(format!("cannot create {}: {e}", out.display())))?;
    let mut written = Vec::new();
    for (name, contents) in artifacts {
        let path = out.join(name);
        std::fs::write(&path, contents).map_err(|e| Error::Config(format!("cannot write {}: {e}", path.display())))?;
        written.push(path.display().to_string());
    }
    Ok(written)
}

fn load_settings(cli: &Cli) -> Result<Settings> {
    let mut s = Settings::default();
    if let Some(path) = &cli.config {
        let text =
            std::fs::read_to_string(path).map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        s.apply_config(&text)?;
    }
    cli.command.apply_overrides(&mut s);
    Ok(s)
}

/// Entry point shared by the binary and the tests: parse `args`, run the
/// command, write artifacts and the manifest, and return the exit code.
pub fn main_with_args<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { ExitStatus::UsageError.code() } else { 0 };
            let _ = if e.use_stderr() { write!(stderr, "{e}") } else { write!(stdout, "{e}") };
            return code;
        }
    };
    let start = Instant::now();
    let settings = load_settings(&cli);
    let config = settings.as_ref().map(Settings::snapshot).unwrap_or_default();
    let outcome = settings.and_then(|s| execute(&cli.command, &s));
    let (status, error, artifacts) = match outcome {
        Ok(report) => match write_artifacts(&cli.out, &report.artifacts) {
            Ok(paths) => {
                if cli.json {
                    let _ = writeln!(stdout, "{}", serde_json::to_string_pretty(&report.summary).unwrap_or_default());
                } else {
                    for line in &report.lines {
                        let _ = writeln!(stdout, "{line}");
                    }
                    let _ = writeln!(stdout, "{}: {}", cli.command.name(), verdict(report.status == ExitStatus::Pass));
                }
                (report.status, None, paths)
            }
            Err(e) => (ExitStatus::UsageError, Some(e.to_string()), Vec::new()),
        },
        Err(e) => (ExitStatus::of_error(&e), Some(e.to_string()), Vec::new()),
    };
    if let Some(msg) = &error {
        let _ = writeln!(stderr, "error: {msg}");
    }
    let manifest = RunManifest {
        schema: SCHEMA_VERSION,
        command: cli.command.name().to_string(),
        status,
        exit_code: status.code(),
        error,
        config,
        artifacts,
        versions: Versions {
            tool: format!("{} {}", env!("CARGO_PKG_NAME"), env!("CARGO_PKG_VERSION")),
            schema: SCHEMA_VERSION,
        },
        wall_time: start.elapsed().as_secs_f64(),
    };
    if let Err(e) = write_artifacts(&cli.out, &[("manifest.json".into(), to_json(&manifest))]) {
        let _ = writeln!(stderr, "error: {e}");
        return ExitStatus::UsageError.code();
    }
    status.code()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quick() -> Settings {
        Settings { eigen_grid_n: 256, ..Settings::default() }
    }

    #[test]
    fn radii_are_seeded_sorted_and_in_range() {
        let s = Settings::default();
        let a = sample_radii(&s).unwrap();
        assert_eq!(a, sample_radii(&s).unwrap());
        assert_eq!(a.len(), 50);
        assert!(a.windows(2).all(|w| w[0] <= w[1]));
        assert!(a.iter().all(|&r| (1.05..=50.0).contains(&r)));
        let b = sample_radii(&Settings { seed: 1, ..Settings::default() }).unwrap();
        assert_ne!(a, b);
    }

    #[test]
    fn too_few_samples_is_a_usage_error() {
        let e = sample_radii(&Settings { samples: 9, ..Settings::default() }).unwrap_err();
        assert_eq!(ExitStatus::of_error(&e), ExitStatus::UsageError);
    }

    #[test]
    fn geometry_passes_and_a_flipped_sign_is_named() {
        let s = Settings::default();
        assert_eq!(verify_geometry(&s, &[]).unwrap().status, ExitStatus::Pass);
        let r = verify_geometry(&s, &["Gamma^1_00".to_string()]).unwrap();
        assert_eq!(r.status, ExitStatus::CheckFailed);
        assert_eq!(r.summary["parity"]["failing_components"], json!(["Gamma^1_00"]));
        assert!(verify_geometry(&s, &["Gamma^9_99".to_string()]).is_err());
    }

    #[test]
    fn lemma36_reports_failed_groupings() {
        let r = lemma36(&Settings { lemma36_n: 1, ..Settings::default() }).unwrap();
        assert_eq!(r.status, ExitStatus::CheckFailed);
        assert!(r.summary["failed_groupings"].as_array().unwrap().contains(&json!("ne2")));
        let r = lemma36(&Settings::default()).unwrap();
        assert_eq!(r.status, ExitStatus::Pass);
        for key in ["n", "J1", "J8", "total", "a_hat", "inequalities", "schema"] {
            assert!(r.summary.get(key).is_some(), "{key}");
        }
    }

    #[test]
    fn eigen_summary_is_deterministic() {
        let a = eigen(&quick()).unwrap();
        let b = eigen(&quick()).unwrap();
        assert_eq!(a.artifacts, b.artifacts);
        assert!(a.summary["lambda"].as_f64().unwrap() < 0.0);
        assert!(a.artifacts[1].1.starts_with("p,r,u0,u1,u2\n"));
    }

    #[test]
    fn zero_epsilon_flow_stays_put() {
        let s = Settings { epsilon: 0.0, t_end: Some(0.5), grid_n: 128, s_max: 20.0, records: 10, ..quick() };
        let r = flow(&s).unwrap();
        assert_eq!(r.status, ExitStatus::Pass);
        assert!(r.summary["max_norm_g_minus_g0"].as_f64().unwrap() < 1e-12);
    }

    #[test]
    fn large_epsilon_is_flagged_nonlinear() {
        let s = Settings { epsilon: 0.5, grid_n: 128, s_max: 20.0, records: 10, ..quick() };
        let r = flow(&s).unwrap();
        assert_eq!(r.summary["linear_regime"], json!(false));
        assert!(!r.summary["warnings"].as_array().unwrap().is_empty());
    }
}
