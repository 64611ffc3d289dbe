//! C ABI for `devrep-core`.
//!
//! Objects cross the boundary as opaque handles created by a `*_new` (or
//! producing) call and released with the matching `*_free`. Every fallible
//! call returns a [`DevrepStatus`]; on failure a message for the calling
//! thread is available from [`devrep_last_error_message`]. Output pointers
//! are written only on success. Panics are caught and reported as
//! `DEVREP_STATUS_PANIC`.
//!
//! The generated header lives in `include/devrep.h`.

#![allow(clippy::missing_safety_doc)]

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use devrep_core::meanfield::{self, FixedPointKind, PiecewiseSolution, Regime, Region};
use devrep_core::sim::{self, ObservationEvent, SimulationConfig, Trajectory};
use devrep_core::{Error, ModelParams, ReputationState};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DevrepStatus {
    Ok = 0,
    NullPointer = 1,
    OutOfRange = 2,
    NonFinite = 3,
    DegenerateState = 4,
    InvalidArgument = 5,
    /// The requested value does not exist for these inputs.
    Absent = 6,
    IndexOutOfBounds = 7,
    Panic = 8,
}

/// Model parameters.
pub struct DevrepParams(ModelParams);

/// A simulated path.
pub struct DevrepTrajectory(Trajectory);

/// A piecewise mean-field solution.
pub struct DevrepSolution(PiecewiseSolution);

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DevrepParamValues {
    pub theta: f64,
    pub p: f64,
    pub pbar: f64,
    pub d: f64,
    pub omega: f64,
    pub u: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DevrepRegime {
    Subcritical = 0,
    Bistable = 1,
    FalseOnly = 2,
}

/// Regime classification. Absent values are NaN with the `has_*` flag cleared.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DevrepRegimeSummary {
    pub regime: DevrepRegime,
    pub has_pbar_critical: bool,
    pub pbar_critical: f64,
    pub d_c1: f64,
    pub d_c2: f64,
    pub false_reputation: f64,
    pub n_fixed_points: u32,
    pub has_true_point: bool,
    pub true_alpha: f64,
    pub true_beta: f64,
    pub has_false_point: bool,
    pub false_alpha: f64,
    pub false_beta: f64,
    pub two_sided_unique: bool,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DevrepEvent {
    Positive = 0,
    Negative = 1,
    Indirect = 2,
}

/// One simulation step; counters are after the event, `t` is NaN without timestamps.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DevrepStep {
    pub step: u64,
    pub t: f64,
    pub alpha: f64,
    pub beta: f64,
    pub event: DevrepEvent,
    pub accepted: bool,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DevrepRegion {
    Above = 0,
    Below = 1,
}

/// One ODE segment; `t_end` is NaN for a segment that never leaves its region.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DevrepSegment {
    pub region: DevrepRegion,
    pub t_start: f64,
    pub t_end: f64,
    pub alpha_start: f64,
    pub beta_start: f64,
    pub asymptote_alpha: f64,
    pub asymptote_beta: f64,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_last_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).expect("NULs removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn fail(status: DevrepStatus, msg: &str) -> DevrepStatus {
    set_last_error(msg);
    status
}

fn status_of(err: &Error) -> DevrepStatus {
    let status = match err {
        Error::OutOfRange { .. } => DevrepStatus::OutOfRange,
        Error::NonFinite { .. } => DevrepStatus::NonFinite,
        Error::DegenerateState | Error::DegenerateDenominator => DevrepStatus::DegenerateState,
        _ => DevrepStatus::InvalidArgument,
    };
    fail(status, &err.to_string())
}

/// Runs `body`, converting panics into `DEVREP_STATUS_PANIC`.
fn guard(body: impl FnOnce() -> DevrepStatus) -> DevrepStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(status) => status,
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            fail(DevrepStatus::Panic, &format!("internal panic: {msg}"))
        }
    }
}

macro_rules! deref {
    ($ptr:expr) => {
        match $ptr.as_ref() {
            Some(v) => v,
            None => return fail(DevrepStatus::NullPointer, concat!("null pointer: ", stringify!($ptr))),
        }
    };
}

macro_rules! out {
    ($ptr:expr) => {
        match $ptr.as_mut() {
            Some(v) => v,
            None => return fail(DevrepStatus::NullPointer, concat!("null pointer: ", stringify!($ptr))),
        }
    };
}

/// Library version, a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn devrep_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message of the last failed call on this thread; empty if none. The
/// pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn devrep_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

#[no_mangle]
pub unsafe extern "C" fn devrep_params_new(
    theta: f64,
    p: f64,
    d: f64,
    omega: f64,
    u: f64,
    out: *mut *mut DevrepParams,
) -> DevrepStatus {
    guard(|| {
        let out = out!(out);
        match ModelParams::new(theta, p, d, omega, u) {
            Ok(params) => {
                *out = Box::into_raw(Box::new(DevrepParams(params)));
                DevrepStatus::Ok
            }
            Err(e) => status_of(&e),
        }
    })
}

#[no_mangle]
pub unsafe extern "C" fn devrep_params_free(params: *mut DevrepParams) {
    if !params.is_null() {
        drop(Box::from_raw(params));
    }
}

#[no_mangle]
pub unsafe extern "C" fn devrep_params_get(params: *const DevrepParams, out: *mut DevrepParamValues) -> DevrepStatus {
    guard(|| {
        let p = &deref!(params).0;
        *out!(out) = DevrepParamValues {
            theta: p.theta(),
            p: p.p(),
            pbar: p.pbar(),
            d: p.d(),
            omega: p.omega(),
            u: p.u(),
        };
        DevrepStatus::Ok
    })
}

/// Critical lying probability; `DEVREP_STATUS_ABSENT` when `theta <= d`.
#[no_mangle]
pub unsafe extern "C" fn devrep_critical_pbar(theta: f64, d: f64, omega: f64, out: *mut f64) -> DevrepStatus {
    guard(|| {
        let out = out!(out);
        if [theta, d, omega].iter().any(|v| !v.is_finite()) {
            return fail(DevrepStatus::NonFinite, "arguments must be finite");
        }
        if omega <= 0.0 || d <= 0.0 || d >= 1.0 || !(0.0..=1.0).contains(&theta) {
            return fail(DevrepStatus::OutOfRange, "need 0 <= theta <= 1, 0 < d < 1, omega > 0");
        }
        match meanfield::critical_pbar(theta, d, omega) {
            Some(v) => {
                *out = v;
                DevrepStatus::Ok
            }
            None => fail(DevrepStatus::Absent, "no critical pbar when theta <= d"),
        }
    })
}

/// Reputation value of the false fixed point, `p theta / (p + omega pbar)`.
#[no_mangle]
pub unsafe extern "C" fn devrep_false_reputation(params: *const DevrepParams, out: *mut f64) -> DevrepStatus {
    guard(|| {
        let p = &deref!(params).0;
        let out = out!(out);
        match meanfield::false_reputation(p) {
            Ok(v) => {
                *out = v;
                DevrepStatus::Ok
            }
            Err(e) => status_of(&e),
        }
    })
}

#[no_mangle]
pub unsafe extern "C" fn devrep_classify_regime(
    params: *const DevrepParams,
    out: *mut DevrepRegimeSummary,
) -> DevrepStatus {
    guard(|| {
        let p = &deref!(params).0;
        let out = out!(out);
        let r = meanfield::classify_regime(p);
        let t = r.point(FixedPointKind::True);
        let f = r.point(FixedPointKind::False);
        *out = DevrepRegimeSummary {
            regime: match r.regime {
                Regime::Subcritical => DevrepRegime::Subcritical,
                Regime::Bistable => DevrepRegime::Bistable,
                Regime::FalseOnly => DevrepRegime::FalseOnly,
            },
            has_pbar_critical: r.pbar_critical.is_some(),
            pbar_critical: r.pbar_critical.unwrap_or(f64::NAN),
            d_c1: r.d_c1,
            d_c2: r.d_c2,
            false_reputation: r.false_reputation,
            n_fixed_points: r.fixed_points.len() as u32,
            has_true_point: t.is_some(),
            true_alpha: t.map_or(f64::NAN, |fp| fp.alpha),
            true_beta: t.map_or(f64::NAN, |fp| fp.beta),
            has_false_point: f.is_some(),
            false_alpha: f.map_or(f64::NAN, |fp| fp.alpha),
            false_beta: f.map_or(f64::NAN, |fp| fp.beta),
            two_sided_unique: r.two_sided_unique,
        };
        DevrepStatus::Ok
    })
}

/// Simulates `n_steps` events of the process indexed by `scaling_n` (1 for
/// the plain process).
#[no_mangle]
pub unsafe extern "C" fn devrep_simulate(
    params: *const DevrepParams,
    r0: f64,
    n_steps: usize,
    seed: u64,
    scaling_n: u64,
    timestamps: bool,
    out: *mut *mut DevrepTrajectory,
) -> DevrepStatus {
    guard(|| {
        let p = deref!(params).0;
        let out = out!(out);
        let cfg = SimulationConfig::new(p, r0, n_steps, seed)
            .with_scaling(scaling_n)
            .with_timestamps(timestamps);
        match sim::simulate(&cfg) {
            Ok(traj) => {
                *out = Box::into_raw(Box::new(DevrepTrajectory(traj)));
                DevrepStatus::Ok
            }
            Err(e) => status_of(&e),
        }
    })
}

#[no_mangle]
pub unsafe extern "C" fn devrep_trajectory_free(traj: *mut DevrepTrajectory) {
    if !traj.is_null() {
        drop(Box::from_raw(traj));
    }
}

/// Number of steps; 0 for a null handle.
#[no_mangle]
pub unsafe extern "C" fn devrep_trajectory_len(traj: *const DevrepTrajectory) -> usize {
    traj.as_ref().map_or(0, |t| t.0.len())
}

/// Initial counters.
#[no_mangle]
pub unsafe extern "C" fn devrep_trajectory_initial(
    traj: *const DevrepTrajectory,
    alpha: *mut f64,
    beta: *mut f64,
) -> DevrepStatus {
    guard(|| {
        let t = &deref!(traj).0;
        let (a, b) = (out!(alpha), out!(beta));
        *a = t.initial.alpha();
        *b = t.initial.beta();
        DevrepStatus::Ok
    })
}

#[no_mangle]
pub unsafe extern "C" fn devrep_trajectory_step(
    traj: *const DevrepTrajectory,
    index: usize,
    out: *mut DevrepStep,
) -> DevrepStatus {
    guard(|| {
        let t = &deref!(traj).0;
        let out = out!(out);
        let Some(rec) = t.steps.get(index) else {
            return fail(
                DevrepStatus::IndexOutOfBounds,
                &format!("step index {index} out of bounds (len {})", t.len()),
            );
        };
        *out = DevrepStep {
            step: rec.step,
            t: rec.t.unwrap_or(f64::NAN),
            alpha: rec.alpha,
            beta: rec.beta,
            event: match rec.event {
                ObservationEvent::PositiveDirect => DevrepEvent::Positive,
                ObservationEvent::NegativeDirect => DevrepEvent::Negative,
                ObservationEvent::IndirectReport => DevrepEvent::Indirect,
            },
            accepted: rec.accepted,
        };
        DevrepStatus::Ok
    })
}

/// Copies up to `capacity` post-step reputations into `buf` and stores the
/// number copied in `written`.
#[no_mangle]
pub unsafe extern "C" fn devrep_trajectory_reputations(
    traj: *const DevrepTrajectory,
    buf: *mut f64,
    capacity: usize,
    written: *mut usize,
) -> DevrepStatus {
    guard(|| {
        let t = &deref!(traj).0;
        let written = out!(written);
        let n = capacity.min(t.len());
        if n > 0 && buf.is_null() {
            return fail(DevrepStatus::NullPointer, "null pointer: buf");
        }
        for (i, r) in t.reputations().take(n).enumerate() {
            *buf.add(i) = r;
        }
        *written = n;
        DevrepStatus::Ok
    })
}

/// Solves the mean-field ODE from `(alpha0, beta0)` on `[0, horizon]`.
#[no_mangle]
pub unsafe extern "C" fn devrep_ode_solve(
    params: *const DevrepParams,
    alpha0: f64,
    beta0: f64,
    horizon: f64,
    out: *mut *mut DevrepSolution,
) -> DevrepStatus {
    guard(|| {
        let p = &deref!(params).0;
        let out = out!(out);
        let result = ReputationState::new(alpha0, beta0).and_then(|s| meanfield::solve(&s, p, horizon));
        match result {
            Ok(sol) => {
                *out = Box::into_raw(Box::new(DevrepSolution(sol)));
                DevrepStatus::Ok
            }
            Err(e) => status_of(&e),
        }
    })
}

#[no_mangle]
pub unsafe extern "C" fn devrep_solution_free(sol: *mut DevrepSolution) {
    if !sol.is_null() {
        drop(Box::from_raw(sol));
    }
}

/// Number of segments; 0 for a null handle.
#[no_mangle]
pub unsafe extern "C" fn devrep_solution_segment_count(sol: *const DevrepSolution) -> usize {
    sol.as_ref().map_or(0, |s| s.0.segments.len())
}

#[no_mangle]
pub unsafe extern "C" fn devrep_solution_segment(
    sol: *const DevrepSolution,
    index: usize,
    out: *mut DevrepSegment,
) -> DevrepStatus {
    guard(|| {
        let s = &deref!(sol).0;
        let out = out!(out);
        let Some(seg) = s.segments.get(index) else {
            return fail(
                DevrepStatus::IndexOutOfBounds,
                &format!("segment index {index} out of bounds (len {})", s.segments.len()),
            );
        };
        let (a, b) = seg.start_state();
        *out = DevrepSegment {
            region: match seg.region {
                Region::Above => DevrepRegion::Above,
                Region::Below => DevrepRegion::Below,
            },
            t_start: seg.t_start,
            t_end: seg.t_end.unwrap_or(f64::NAN),
            alpha_start: a,
            beta_start: b,
            asymptote_alpha: seg.asymptote_alpha,
            asymptote_beta: seg.asymptote_beta,
        };
        DevrepStatus::Ok
    })
}

/// State at `t`; `DEVREP_STATUS_OUT_OF_RANGE` outside `[0, horizon]`.
#[no_mangle]
pub unsafe extern "C" fn devrep_solution_state_at(
    sol: *const DevrepSolution,
    t: f64,
    alpha: *mut f64,
    beta: *mut f64,
) -> DevrepStatus {
    guard(|| {
        let s = &deref!(sol).0;
        let (a, b) = (out!(alpha), out!(beta));
        match s.state_at(t).filter(|_| t <= s.horizon) {
            Some((x, y)) => {
                *a = x;
                *b = y;
                DevrepStatus::Ok
            }
            None => fail(DevrepStatus::OutOfRange, &format!("t = {t} outside [0, {}]", s.horizon)),
        }
    })
}
