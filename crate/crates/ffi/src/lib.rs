//! C ABI for the schwarzschild-flow library.
//!
//! Conventions:
//! - Every fallible function returns an `SfStatus`; `SF_OK` is zero.
//! - Results are written through caller-provided out-pointers, which are
//!   left untouched on failure.
//! - Heavy results live behind opaque handles created by `sf_*_new` /
//!   `sf_*_solve` / `sf_*_run` and released by the matching `sf_*_free`.
//!   Freeing NULL is a no-op.
//! - The message of the last failure on the calling thread is available
//!   from `sf_last_error_message`.
//! - Panics never cross the boundary; they surface as `SF_ERR_PANIC`.

use schwarzschild_flow::cli::Settings;
use schwarzschild_flow::flow::run::{run, Trajectory};
use schwarzschild_flow::functional::lemma36_certificate;
use schwarzschild_flow::geometry::{max_ricci, riemann, sectional_bound_check, ChartPoint, Schwarzschild};
use schwarzschild_flow::spectral::EigenResult;
use schwarzschild_flow::Error;
use std::cell::RefCell;
use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

/// Result codes of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SfStatus {
    SfOk = 0,
    /// A required pointer argument was NULL.
    SfErrNullPointer = 1,
    /// A parameter, coordinate or configuration value is out of range.
    SfErrInvalidArgument = 2,
    /// Input data is unusable (non-finite, wrong length).
    SfErrData = 3,
    /// An iterative solver did not converge.
    SfErrNoConvergence = 4,
    /// A matrix factorization broke down.
    SfErrFactorization = 5,
    /// The flow or the de Turck transport failed.
    SfErrFlow = 6,
    /// Any other numerical failure.
    SfErrNumerical = 7,
    /// A caller buffer is too small; the message names the required length.
    SfErrBufferTooSmall = 8,
    /// The requested quantity does not exist for this result.
    SfErrNotAvailable = 9,
    /// Internal panic caught at the boundary.
    SfErrPanic = 10,
}

impl SfStatus {
    fn of(e: &Error) -> Self {
        match e {
            Error::Domain { .. } | Error::Chart(_) | Error::Parameter { .. } | Error::Config(_) => {
                Self::SfErrInvalidArgument
            }
            Error::Data(_) | Error::Extrapolation { .. } => Self::SfErrData,
            Error::NoConvergence { .. } => Self::SfErrNoConvergence,
            Error::Factorization { .. } => Self::SfErrFactorization,
            Error::Flow { .. } | Error::CharacteristicCrossing { .. } => Self::SfErrFlow,
            Error::Assembly(_) => Self::SfErrNumerical,
        }
    }
}

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn set_error(msg: String) {
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
}

/// Run `f`, translating errors and panics into status codes.
fn guard<F: FnOnce() -> Result<(), (SfStatus, String)>>(f: F) -> SfStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error(String::new());
            SfStatus::SfOk
        }
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            SfStatus::SfErrPanic
        }
    }
}

fn lib<T>(r: schwarzschild_flow::Result<T>) -> Result<T, (SfStatus, String)> {
    r.map_err(|e| (SfStatus::of(&e), e.to_string()))
}

fn null() -> (SfStatus, String) {
    (SfStatus::SfErrNullPointer, "null pointer argument".into())
}

fn not_null<T>(p: *const T) -> Result<(), (SfStatus, String)> {
    if p.is_null() {
        Err(null())
    } else {
        Ok(())
    }
}

unsafe fn c_str<'a>(p: *const c_char) -> Result<&'a str, (SfStatus, String)> {
    not_null(p)?;
    CStr::from_ptr(p).to_str().map_err(|_| (SfStatus::SfErrInvalidArgument, "string is not UTF-8".into()))
}

unsafe fn slice<'a>(p: *const f64, len: usize) -> Result<&'a [f64], (SfStatus, String)> {
    if len == 0 {
        return Ok(&[]);
    }
    not_null(p)?;
    Ok(std::slice::from_raw_parts(p, len))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn sf_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Copy the last error message of this thread into `buf` (NUL-terminated,
/// truncated to `len`). Returns the full message length without the NUL.
///
/// # Safety
/// `buf` must be NULL or point to `len` writable bytes.
#[no_mangle]
pub unsafe extern "C" fn sf_last_error_message(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let msg = e.borrow();
        if !buf.is_null() && len > 0 {
            let n = msg.len().min(len - 1);
            ptr::copy_nonoverlapping(msg.as_ptr().cast::<c_char>(), buf, n);
            *buf.add(n) = 0;
        }
        msg.len()
    })
}

// ---------------------------------------------------------------- geometry

/// Closed-form curvature of Euclidean Schwarzschild at one radius.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SfCurvature {
    /// Γ^k_ij at index (k * 4 + i) * 4 + j.
    pub christoffel: [f64; 64],
    /// R_ijij at index i * 4 + j.
    pub riemann_diag: [f64; 16],
    /// Sectional curvature K_ij at index i * 4 + j.
    pub sectional: [f64; 16],
    /// Ricci tensor at index i * 4 + j.
    pub ricci: [f64; 16],
}

/// Curvature at radius `r > 1`.
///
/// # Safety
/// `out` must point to a writable `SfCurvature`.
#[no_mangle]
pub unsafe extern "C" fn sf_curvature(r: f64, out: *mut SfCurvature) -> SfStatus {
    guard(|| {
        not_null(out)?;
        let c = lib(ChartPoint::r(r).and_then(|x| riemann(&Schwarzschild, x)))?;
        let flat2 = |m: &[[f64; 4]; 4]| {
            let mut o = [0.0; 16];
            for i in 0..4 {
                o[i * 4..i * 4 + 4].copy_from_slice(&m[i]);
            }
            o
        };
        let mut christoffel = [0.0; 64];
        for k in 0..4 {
            christoffel[k * 16..k * 16 + 16].copy_from_slice(&flat2(&c.christoffel[k]));
        }
        *out = SfCurvature {
            christoffel,
            riemann_diag: flat2(&c.riemann_diag),
            sectional: flat2(&c.sectional),
            ricci: flat2(&c.ricci),
        };
        Ok(())
    })
}

/// Largest |Ric_ij| and largest |K_ij| r³ over `count` radii.
///
/// # Safety
/// `radii` must point to `count` readable doubles; the outputs must be writable.
#[no_mangle]
pub unsafe extern "C" fn sf_curvature_bounds(
    radii: *const f64,
    count: usize,
    max_ricci_out: *mut f64,
    max_sectional_ratio_out: *mut f64,
) -> SfStatus {
    guard(|| {
        not_null(max_ricci_out)?;
        not_null(max_sectional_ratio_out)?;
        let radii = slice(radii, count)?;
        if radii.is_empty() {
            return Err((SfStatus::SfErrInvalidArgument, "need at least one radius".into()));
        }
        let ric = lib(max_ricci(&Schwarzschild, radii))?;
        let sec = lib(sectional_bound_check(&Schwarzschild, radii))?;
        *max_ricci_out = ric;
        *max_sectional_ratio_out = sec.max_ratio;
        Ok(())
    })
}

// ------------------------------------------------------------- certificate

/// Energy bracket of the explicit test tensor.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SfLemma36 {
    pub n: u32,
    /// J1..J8.
    pub j: [f64; 8],
    pub total: f64,
    pub a_hat: f64,
    /// J1 + J6, J2 + J4 + J7, J3 + J5 + J8.
    pub groupings: [f64; 3],
    /// Whether each grouping is below its bound.
    pub groupings_hold: [bool; 3],
    pub total_holds: bool,
    /// Bracket with the r² volume factor kept in the gradient term.
    pub corrected_total: f64,
    pub norm_sq: f64,
}

/// Evaluate the certificate for ramp parameter `n ≥ 1`.
///
/// # Safety
/// `out` must point to a writable `SfLemma36`.
#[no_mangle]
pub unsafe extern "C" fn sf_lemma36(n: u32, out: *mut SfLemma36) -> SfStatus {
    guard(|| {
        not_null(out)?;
        let c = lib(lemma36_certificate(n))?;
        let q = &c.inequalities;
        *out = SfLemma36 {
            n,
            j: [c.J1, c.J2, c.J3, c.J4, c.J5, c.J6, c.J7, c.J8],
            total: c.total,
            a_hat: c.a_hat,
            groupings: [q.ne1.value, q.ne2.value, q.ne3.value],
            groupings_hold: [q.ne1.holds, q.ne2.holds, q.ne3.holds],
            total_holds: c.total_holds,
            corrected_total: c.corrected_total,
            norm_sq: c.norm_sq,
        };
        Ok(())
    })
}

// ---------------------------------------------------------------- settings

/// Opaque settings table (the same keys as the command-line config file).
pub struct SfSettings(Settings);

/// New settings holding the defaults.
///
/// # Safety
/// `out` must point to a writable handle slot.
#[no_mangle]
pub unsafe extern "C" fn sf_settings_new(out: *mut *mut SfSettings) -> SfStatus {
    guard(|| {
        not_null(out)?;
        *out = Box::into_raw(Box::new(SfSettings(Settings::default())));
        Ok(())
    })
}

/// Set one `key` to the textual `value`.
///
/// # Safety
/// `settings` must be a live handle; `key` and `value` NUL-terminated strings.
#[no_mangle]
pub unsafe extern "C" fn sf_settings_set(
    settings: *mut SfSettings,
    key: *const c_char,
    value: *const c_char,
) -> SfStatus {
    guard(|| {
        let s = settings.as_mut().ok_or_else(null)?;
        let (key, value) = (c_str(key)?, c_str(value)?);
        lib(s.0.set(key, value))
    })
}

/// Apply the contents of a `key = value` config text.
///
/// # Safety
/// `settings` must be a live handle; `text` a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn sf_settings_apply_config(settings: *mut SfSettings, text: *const c_char) -> SfStatus {
    guard(|| {
        let s = settings.as_mut().ok_or_else(null)?;
        lib(s.0.apply_config(c_str(text)?))
    })
}

/// Release a settings handle.
///
/// # Safety
/// `settings` must be NULL or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn sf_settings_free(settings: *mut SfSettings) {
    if !settings.is_null() {
        drop(Box::from_raw(settings));
    }
}

// ------------------------------------------------------------------- eigen

/// Opaque lowest eigenpair.
pub struct SfEigen(EigenResult);

/// Solve for the lowest eigenpair with the eigen settings of `settings`.
///
/// # Safety
/// `settings` must be a live handle; `out` a writable handle slot.
#[no_mangle]
pub unsafe extern "C" fn sf_eigen_solve(settings: *const SfSettings, out: *mut *mut SfEigen) -> SfStatus {
    guard(|| {
        let s = settings.as_ref().ok_or_else(null)?;
        not_null(out)?;
        let e = lib(schwarzschild_flow::cli::solve_eigen(&s.0))?;
        *out = Box::into_raw(Box::new(SfEigen(e)));
        Ok(())
    })
}

/// Eigenvalue, residual ‖Δ_L h + λh‖₂ and number of stored nodes.
///
/// # Safety
/// `eigen` must be a live handle; non-NULL outputs must be writable.
#[no_mangle]
pub unsafe extern "C" fn sf_eigen_summary(
    eigen: *const SfEigen,
    lambda_out: *mut f64,
    residual_out: *mut f64,
    nodes_out: *mut usize,
) -> SfStatus {
    guard(|| {
        let e = &eigen.as_ref().ok_or_else(null)?.0;
        if let Some(l) = lambda_out.as_mut() {
            *l = e.lambda;
        }
        if let Some(r) = residual_out.as_mut() {
            *r = e.residual_l2;
        }
        if let Some(n) = nodes_out.as_mut() {
            *n = e.mode.grid.len();
        }
        Ok(())
    })
}

/// Copy the mode profile (nodes p and frame components u0, u1, u2) into
/// four arrays of length `len`, which must equal the node count.
///
/// # Safety
/// `eigen` must be a live handle; each output must hold `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn sf_eigen_mode(
    eigen: *const SfEigen,
    p: *mut f64,
    u0: *mut f64,
    u1: *mut f64,
    u2: *mut f64,
    len: usize,
) -> SfStatus {
    guard(|| {
        let e = &eigen.as_ref().ok_or_else(null)?.0;
        let n = e.mode.grid.len();
        if len < n {
            return Err((SfStatus::SfErrBufferTooSmall, format!("need {n} entries, got {len}")));
        }
        for (dst, src) in [(p, e.mode.grid.nodes()), (u0, &e.mode.u0[..]), (u1, &e.mode.u1[..]), (u2, &e.mode.u2[..])] {
            not_null(dst)?;
            ptr::copy_nonoverlapping(src.as_ptr(), dst, n);
        }
        Ok(())
    })
}

/// Release an eigen handle.
///
/// # Safety
/// `eigen` must be NULL or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn sf_eigen_free(eigen: *mut SfEigen) {
    if !eigen.is_null() {
        drop(Box::from_raw(eigen));
    }
}

// -------------------------------------------------------------------- flow

/// Opaque flow trajectory.
pub struct SfTrajectory(Trajectory);

/// One recorded state.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SfTrajectoryRow {
    pub t: f64,
    pub delta: f64,
    pub norm_g_minus_g0: f64,
    pub norm_w: f64,
    pub cone_opening: f64,
    pub farfield_max: f64,
}

/// Least-squares growth rate over the first e-folding.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SfGrowthFit {
    pub slope: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub standard_error: f64,
    pub points: usize,
}

/// Run the flow configured by `settings`, seeded by the mode of `eigen`.
///
/// # Safety
/// `settings` and `eigen` must be live handles; `out` a writable handle slot.
#[no_mangle]
pub unsafe extern "C" fn sf_flow_run(
    settings: *const SfSettings,
    eigen: *const SfEigen,
    out: *mut *mut SfTrajectory,
) -> SfStatus {
    guard(|| {
        let s = settings.as_ref().ok_or_else(null)?;
        let e = &eigen.as_ref().ok_or_else(null)?.0;
        not_null(out)?;
        let traj = lib(run(&s.0.flow_config(), e.lambda, &e.mode))?;
        *out = Box::into_raw(Box::new(SfTrajectory(traj)));
        Ok(())
    })
}

/// Number of recorded states and whether the run blew up.
///
/// # Safety
/// `traj` must be a live handle; non-NULL outputs must be writable.
#[no_mangle]
pub unsafe extern "C" fn sf_trajectory_info(
    traj: *const SfTrajectory,
    rows_out: *mut usize,
    blew_up_out: *mut bool,
) -> SfStatus {
    guard(|| {
        let t = &traj.as_ref().ok_or_else(null)?.0;
        if let Some(r) = rows_out.as_mut() {
            *r = t.rows.len();
        }
        if let Some(b) = blew_up_out.as_mut() {
            *b = t.blew_up();
        }
        Ok(())
    })
}

/// Copy the recorded states into `rows` (capacity `len`).
///
/// # Safety
/// `traj` must be a live handle; `rows` must hold `len` entries.
#[no_mangle]
pub unsafe extern "C" fn sf_trajectory_rows(
    traj: *const SfTrajectory,
    rows: *mut SfTrajectoryRow,
    len: usize,
) -> SfStatus {
    guard(|| {
        let t = &traj.as_ref().ok_or_else(null)?.0;
        if len < t.rows.len() {
            return Err((SfStatus::SfErrBufferTooSmall, format!("need {} rows, got {len}", t.rows.len())));
        }
        not_null(rows)?;
        for (i, r) in t.rows.iter().enumerate() {
            *rows.add(i) = SfTrajectoryRow {
                t: r.t,
                delta: r.delta,
                norm_g_minus_g0: r.norm_g_minus_g0,
                norm_w: r.norm_w,
                cone_opening: r.cone_opening,
                farfield_max: r.farfield_max,
            };
        }
        Ok(())
    })
}

/// Growth-rate fit; `SF_ERR_NOT_AVAILABLE` when the run has too few
/// states in the window or a vanishing perturbation.
///
/// # Safety
/// `traj` must be a live handle; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn sf_trajectory_growth(traj: *const SfTrajectory, out: *mut SfGrowthFit) -> SfStatus {
    guard(|| {
        let t = &traj.as_ref().ok_or_else(null)?.0;
        not_null(out)?;
        let f = t.growth_fit().ok_or((SfStatus::SfErrNotAvailable, "no growth fit for this run".to_string()))?;
        *out = SfGrowthFit {
            slope: f.slope,
            ci_low: f.ci_low,
            ci_high: f.ci_high,
            standard_error: f.standard_error,
            points: f.points,
        };
        Ok(())
    })
}

/// Release a trajectory handle.
///
/// # Safety
/// `traj` must be NULL or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn sf_trajectory_free(traj: *mut SfTrajectory) {
    if !traj.is_null() {
        drop(Box::from_raw(traj));
    }
}
