//! C interface to the biped walking model.
//!
//! Every fallible function returns a [`BgStatus`] and writes its result
//! through an out-pointer. On failure the message is available from
//! [`bg_last_error`] on the same thread. Handles are opaque and must be
//! released with the matching `*_free` function. Angles are in radians.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use biped_gait::engine::{reverse_trace, walk, StrideOptions, WalkTrace};
use biped_gait::impact::replenishment_energy;
use biped_gait::kinematics::min_clearance;
use biped_gait::pendulum::{critical_energy, stride_length, stride_speed, stride_time, GaitParams, RobotParams};
use biped_gait::special::ellip_f;
use biped_gait::sweeps::optimal_beta;
use biped_gait::terrain::{make_surface, Surface, SurfaceDescriptor};
use biped_gait::GaitError;

/// Result of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BgStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Infeasible = 3,
    NoConvergence = 4,
    NoStance = 5,
    NoStrike = 6,
    Clearance = 7,
    Io = 8,
    Parse = 9,
    Panic = 10,
}

/// Robot parameters. Opaque.
pub struct BgRobot(RobotParams);

/// Walking surface. Opaque.
pub struct BgSurface(Surface);

/// Simulated walk. Opaque.
pub struct BgWalk(WalkTrace);

/// Gait parameters, angles in radians.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct BgGait {
    pub alpha: f64,
    pub phi0: f64,
    pub energy: f64,
    pub gamma_f: f64,
    pub gamma_k: f64,
    pub alpha_r: f64,
}

/// Per-stride summary of a walk.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct BgStrideInfo {
    pub start_time: f64,
    pub nominal_t: f64,
    pub actual_t: f64,
    pub support_x: f64,
    pub support_y: f64,
    pub strike_x: f64,
    pub strike_y: f64,
    pub phi02: f64,
    pub ep: f64,
    pub clearance: f64,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

struct Fail(BgStatus, String);

impl From<GaitError> for Fail {
    fn from(e: GaitError) -> Self {
        let status = match e.root() {
            GaitError::Domain(_) | GaitError::InvalidParams(_) => BgStatus::InvalidArgument,
            GaitError::Infeasible { .. } => BgStatus::Infeasible,
            GaitError::NoConvergence(_) => BgStatus::NoConvergence,
            GaitError::NoStance { .. } => BgStatus::NoStance,
            GaitError::NoStrike { .. } => BgStatus::NoStrike,
            GaitError::ClearanceViolation { .. } => BgStatus::Clearance,
            GaitError::Io(_) | GaitError::Csv(_) => BgStatus::Io,
            GaitError::Json(_) => BgStatus::Parse,
            GaitError::Stride { .. } => BgStatus::InvalidArgument,
        };
        Fail(status, e.to_string())
    }
}

fn null(what: &str) -> Fail {
    Fail(BgStatus::NullPointer, format!("{what} is null"))
}

fn guard<F: FnOnce() -> Result<(), Fail>>(f: F) -> BgStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => BgStatus::Ok,
        Ok(Err(Fail(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            BgStatus::Panic
        }
    }
}

unsafe fn deref<'a, T>(p: *const T, what: &str) -> Result<&'a T, Fail> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn store<T>(out: *mut T, value: T) -> Result<(), Fail> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    out.write(value);
    Ok(())
}

unsafe fn c_str<'a>(s: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if s.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|e| Fail(BgStatus::InvalidArgument, format!("{what} is not UTF-8: {e}")))
}

impl BgGait {
    fn params(&self) -> Result<GaitParams, Fail> {
        Ok(GaitParams::new(self.alpha, self.phi0, self.energy, self.gamma_f, self.gamma_k, self.alpha_r)?)
    }
}

/// Message of the last failed call on this thread, or null. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn bg_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Creates robot parameters; `thigh + shank` must equal `leg_length`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn bg_robot_new(
    mass: f64,
    leg_length: f64,
    thigh: f64,
    shank: f64,
    gravity: f64,
    out: *mut *mut BgRobot,
) -> BgStatus {
    guard(|| {
        let p = RobotParams::new(mass, leg_length, thigh, shank, gravity)?;
        store(out, Box::into_raw(Box::new(BgRobot(p))))
    })
}

/// 80 kg, 1 m legs split 0.5/0.5, g = 9.8.
#[no_mangle]
pub extern "C" fn bg_robot_default() -> *mut BgRobot {
    Box::into_raw(Box::new(BgRobot(RobotParams::default())))
}

/// # Safety
/// `robot` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn bg_robot_free(robot: *mut BgRobot) {
    if !robot.is_null() {
        drop(Box::from_raw(robot));
    }
}

/// # Safety
/// `robot` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn bg_critical_energy(robot: *const BgRobot, out: *mut f64) -> BgStatus {
    guard(|| store(out, critical_energy(&deref(robot, "robot")?.0)))
}

/// # Safety
/// `robot` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn bg_stride_time(
    robot: *const BgRobot,
    phi0: f64,
    alpha: f64,
    energy: f64,
    out: *mut f64,
) -> BgStatus {
    guard(|| store(out, stride_time(phi0, alpha, energy, &deref(robot, "robot")?.0)?))
}

/// # Safety
/// `robot` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn bg_stride_length(robot: *const BgRobot, alpha: f64, out: *mut f64) -> BgStatus {
    guard(|| {
        if !(alpha > 0.0 && alpha <= std::f64::consts::FRAC_PI_2) {
            return Err(Fail(BgStatus::InvalidArgument, format!("alpha = {alpha} outside (0, π/2]")));
        }
        store(out, stride_length(alpha, &deref(robot, "robot")?.0))
    })
}

/// # Safety
/// `robot` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn bg_stride_speed(robot: *const BgRobot, alpha: f64, energy: f64, out: *mut f64) -> BgStatus {
    guard(|| store(out, stride_speed(alpha, energy, &deref(robot, "robot")?.0)?))
}

/// # Safety
/// `robot` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn bg_replenishment_energy(
    robot: *const BgRobot,
    alpha: f64,
    energy: f64,
    out: *mut f64,
) -> BgStatus {
    guard(|| store(out, replenishment_energy(alpha, energy, &deref(robot, "robot")?.0)?))
}

/// Incomplete elliptic integral of the first kind, `F(x | m)`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn bg_ellip_f(x: f64, m: f64, out: *mut f64) -> BgStatus {
    guard(|| store(out, ellip_f(x, m)?))
}

/// Speed-optimal opening angle. `interior` is false when the optimum lies
/// on the edge of the search interval. Pass `tol <= 0` for the default.
///
/// # Safety
/// `robot` must be a live handle; the out-pointers valid for writes.
#[no_mangle]
pub unsafe extern "C" fn bg_optimal_beta(
    robot: *const BgRobot,
    energy: f64,
    tol: f64,
    beta: *mut f64,
    speed: *mut f64,
    interior: *mut bool,
) -> BgStatus {
    guard(|| {
        let tol = if tol > 0.0 { tol } else { biped_gait::sweeps::DEFAULT_BETA_TOL };
        let o = optimal_beta(energy, &deref(robot, "robot")?.0, tol)?;
        store(beta, o.beta)?;
        store(speed, o.speed)?;
        store(interior, o.interior)
    })
}

/// Flat-ground minimum foot clearance during the second foot phase.
///
/// # Safety
/// `robot` must be a live handle, `gait` readable, `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn bg_min_clearance(robot: *const BgRobot, gait: *const BgGait, out: *mut f64) -> BgStatus {
    guard(|| {
        let g = deref(gait, "gait")?.params()?;
        store(out, min_clearance(&g, &deref(robot, "robot")?.0)?.d_f)
    })
}

/// Builds a surface from a JSON descriptor such as
/// `{"type":"sin","d":0.06,"omega":4}`.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn bg_surface_from_json(json: *const c_char, out: *mut *mut BgSurface) -> BgStatus {
    guard(|| {
        let d = SurfaceDescriptor::from_json(c_str(json, "json")?)?;
        let s = make_surface(&d)?;
        store(out, Box::into_raw(Box::new(BgSurface(s))))
    })
}

/// # Safety
/// `surface` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn bg_surface_height(surface: *const BgSurface, x: f64, out: *mut f64) -> BgStatus {
    guard(|| store(out, deref(surface, "surface")?.0.height(x)))
}

/// # Safety
/// `surface` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn bg_surface_free(surface: *mut BgSurface) {
    if !surface.is_null() {
        drop(Box::from_raw(surface));
    }
}

/// Walks `strides` strides from `start_x`. A null `surface` means flat
/// ground; `samples` is the number of poses recorded per stride.
///
/// # Safety
/// `robot` must be a live handle, `gait` readable, `surface` null or live,
/// `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn bg_walk_new(
    robot: *const BgRobot,
    gait: *const BgGait,
    surface: *const BgSurface,
    start_x: f64,
    strides: usize,
    samples: usize,
    strict: bool,
    out: *mut *mut BgWalk,
) -> BgStatus {
    guard(|| {
        let p = deref(robot, "robot")?.0;
        let g = deref(gait, "gait")?.params()?;
        let flat = Surface::flat();
        let s = surface.as_ref().map_or(&flat, |s| &s.0);
        let opts = StrideOptions { samples, strict };
        let trace = walk(start_x, strides, &g, &p, s, &opts)?;
        store(out, Box::into_raw(Box::new(BgWalk(trace))))
    })
}

/// Time-reversed copy of a walk.
///
/// # Safety
/// `walk` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn bg_walk_reverse(walk: *const BgWalk, out: *mut *mut BgWalk) -> BgStatus {
    guard(|| {
        let r = reverse_trace(&deref(walk, "walk")?.0);
        store(out, Box::into_raw(Box::new(BgWalk(r))))
    })
}

/// Number of strides, or 0 for a null handle.
///
/// # Safety
/// `walk` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn bg_walk_stride_count(walk: *const BgWalk) -> usize {
    walk.as_ref().map_or(0, |w| w.0.strides.len())
}

/// # Safety
/// `walk` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn bg_walk_total_cost(walk: *const BgWalk, out: *mut f64) -> BgStatus {
    guard(|| store(out, deref(walk, "walk")?.0.total_cost))
}

/// # Safety
/// `walk` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn bg_walk_stride(walk: *const BgWalk, index: usize, out: *mut BgStrideInfo) -> BgStatus {
    guard(|| {
        let w = &deref(walk, "walk")?.0;
        let s = w.strides.get(index).ok_or_else(|| {
            Fail(
                BgStatus::InvalidArgument,
                format!("stride {index} out of range ({} strides)", w.strides.len()),
            )
        })?;
        store(
            out,
            BgStrideInfo {
                start_time: s.start_time,
                nominal_t: s.nominal_t,
                actual_t: s.actual_t,
                support_x: s.support.x,
                support_y: s.support.y,
                strike_x: s.strike.x,
                strike_y: s.strike.y,
                phi02: s.stance.phi02,
                ep: s.ep,
                clearance: s.clearance.d_f,
            },
        )
    })
}

/// Writes the pose trace as CSV.
///
/// # Safety
/// `walk` must be a live handle and `path` a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn bg_walk_write_csv(walk: *const BgWalk, path: *const c_char) -> BgStatus {
    guard(|| {
        let w = &deref(walk, "walk")?.0;
        let file = std::fs::File::create(c_str(path, "path")?).map_err(GaitError::from)?;
        w.write_csv(std::io::BufWriter::new(file))?;
        Ok(())
    })
}

/// The full trace as JSON. Release the string with [`bg_string_free`].
///
/// # Safety
/// `walk` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn bg_walk_to_json(walk: *const BgWalk, out: *mut *mut c_char) -> BgStatus {
    guard(|| {
        let text = deref(walk, "walk")?.0.to_json()?;
        let c = CString::new(text).map_err(|e| Fail(BgStatus::Parse, e.to_string()))?;
        store(out, c.into_raw())
    })
}

/// # Safety
/// `walk` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn bg_walk_free(walk: *mut BgWalk) {
    if !walk.is_null() {
        drop(Box::from_raw(walk));
    }
}

/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn bg_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
