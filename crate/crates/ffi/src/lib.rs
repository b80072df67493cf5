//! C interface to `ppn-core`.
//!
//! Every fallible function returns a [`PpnStatus`]; on failure a message is
//! available from [`ppn_last_error_message`] on the same thread. Simulation
//! results live behind the opaque [`PpnTrajectory`] handle, which the caller
//! releases with [`ppn_trajectory_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use ppn_core::capture::{
    capture_ratio, capture_region_analytic, full_capture_min_range, ManeuverLimit, SaturationPolicy,
};
use ppn_core::closed_form::{
    curvature_bound, curvature_increment, flight_path_length, max_relative_distance, terminal_impact_angle,
    ClosedFormInputs,
};
use ppn_core::sim::{Domain, SimConfig, SimOutcome, Termination};
use ppn_core::{GuidanceError, GuidanceParams, PlanarVector, SpeedProfile};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PpnStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    DegenerateGeometry = 3,
    OutOfRange = 4,
    Divergent = 5,
    NumericFailure = 6,
    NotIntercepted = 7,
    IndexOutOfBounds = 8,
    Panic = 9,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PpnDomain {
    Time = 0,
    ArcLength = 1,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PpnTermination {
    Intercept = 0,
    Missed = 1,
    Horizon = 2,
    Diverged = 3,
    SpeedExhausted = 4,
}

impl From<Termination> for PpnTermination {
    fn from(t: Termination) -> Self {
        match t {
            Termination::Intercept => Self::Intercept,
            Termination::Missed => Self::Missed,
            Termination::Horizon => Self::Horizon,
            Termination::Diverged => Self::Diverged,
            Termination::SpeedExhausted => Self::SpeedExhausted,
        }
    }
}

/// Engagement and integrator settings. Angles in radians.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PpnSimConfig {
    pub missile_x: f64,
    pub missile_y: f64,
    pub target_x: f64,
    pub target_y: f64,
    pub theta_m0: f64,
    pub v0: f64,
    pub drag: f64,
    pub nav_gain: f64,
    pub kill_radius: f64,
    pub time_step: f64,
    pub arc_step: f64,
    pub max_steps: u64,
    pub log_every: u64,
    pub domain: PpnDomain,
    /// Lateral acceleration limit in m/s^2; zero or negative disables it.
    pub alpha: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PpnSample {
    pub t: f64,
    pub s_m: f64,
    pub x: f64,
    pub y: f64,
    pub v_m: f64,
    pub phi_m: f64,
    pub r: f64,
    pub q: f64,
    pub theta_m: f64,
    pub q_dot: f64,
    pub q_prime: f64,
    pub k_m: f64,
    pub a_m: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PpnSummary {
    pub miss_distance: f64,
    pub flight_time: f64,
    pub flight_path: f64,
    pub curvature_increment: f64,
    pub max_r: f64,
    pub max_k: f64,
    pub terminal_q: f64,
    pub terminal_phi: f64,
    pub terminated: PpnTermination,
    pub saturated: bool,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PpnClosedForm {
    pub max_distance: f64,
    /// For gains at or below 2, the curvature at `cutoff_r`.
    pub max_curvature: f64,
    pub curvature_unbounded: bool,
    pub curvature_increment: f64,
    pub flight_path: f64,
    pub terminal_angle: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PpnCaptureRegion {
    pub capture_ratio: f64,
    pub full: bool,
    /// `|theta_m0|` up to this angle is captured; NaN when `full`.
    pub forward_boundary: f64,
    /// `|theta_m0|` from this angle up to pi is captured; NaN when `full`.
    pub rear_boundary: f64,
    /// Smallest initial range with a full region.
    pub full_capture_min_range: f64,
}

/// Opaque simulation result.
pub struct PpnTrajectory {
    outcome: SimOutcome,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let msg = CString::new(msg).unwrap_or_else(|_| CString::from(c"error message contained NUL"));
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

fn status_of(e: &GuidanceError) -> PpnStatus {
    match e {
        GuidanceError::InvalidParameter { .. } | GuidanceError::BranchMismatch { .. } => PpnStatus::InvalidArgument,
        GuidanceError::DegenerateGeometry => PpnStatus::DegenerateGeometry,
        GuidanceError::OutOfRange { .. } | GuidanceError::InsufficientEnergy { .. } => PpnStatus::OutOfRange,
        GuidanceError::Divergent => PpnStatus::Divergent,
        GuidanceError::NotIntercepted(_) => PpnStatus::NotIntercepted,
        GuidanceError::Quadrature { .. } | GuidanceError::NonFinite | GuidanceError::InvalidBracket => {
            PpnStatus::NumericFailure
        }
    }
}

fn fail(status: PpnStatus, msg: impl Into<String>) -> PpnStatus {
    set_error(msg.into());
    status
}

/// Runs `f`, mapping errors and panics onto status codes.
fn guard(f: impl FnOnce() -> Result<(), PpnStatus>) -> PpnStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => PpnStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => fail(PpnStatus::Panic, "internal panic"),
    }
}

fn check(r: Result<(), GuidanceError>) -> Result<(), PpnStatus> {
    r.map_err(|e| fail(status_of(&e), e.to_string()))
}

fn lift<T>(r: ppn_core::Result<T>) -> Result<T, PpnStatus> {
    r.map_err(|e| fail(status_of(&e), e.to_string()))
}

fn null(name: &str) -> PpnStatus {
    fail(PpnStatus::NullPointer, format!("{name} is null"))
}

fn sim_config(c: &PpnSimConfig) -> Result<SimConfig, PpnStatus> {
    let gain = lift(GuidanceParams::new(c.nav_gain))?;
    let speed = lift(SpeedProfile::new(c.v0, c.drag))?;
    let to_usize = |v: u64, name: &str| {
        usize::try_from(v).map_err(|_| fail(PpnStatus::InvalidArgument, format!("{name} too large")))
    };
    let cfg = SimConfig {
        missile_pos: PlanarVector::new(c.missile_x, c.missile_y),
        target_pos: PlanarVector::new(c.target_x, c.target_y),
        theta_m0: c.theta_m0,
        speed,
        gain,
        kill_radius: c.kill_radius,
        time_step: c.time_step,
        arc_step: c.arc_step,
        max_steps: to_usize(c.max_steps, "max_steps")?,
        log_every: to_usize(c.log_every, "log_every")?,
        saturation: (c.alpha > 0.0).then_some(SaturationPolicy::Acceleration { alpha: c.alpha }),
    };
    check(cfg.validate())?;
    Ok(cfg)
}

/// Most recent error message on this thread, or null if none.
///
/// The pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn ppn_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |m| m.as_ptr()))
}

/// Fills `out` with the reference engagement for a leading angle and gain.
///
/// # Safety
/// `out` must be null or point to writable memory for a `PpnSimConfig`.
#[no_mangle]
pub unsafe extern "C" fn ppn_sim_config_reference(theta_m0: f64, nav_gain: f64, out: *mut PpnSimConfig) -> PpnStatus {
    guard(|| {
        let out = unsafe { out.as_mut() }.ok_or_else(|| null("out"))?;
        let gain = lift(GuidanceParams::new(nav_gain))?;
        let r = SimConfig::reference(theta_m0, gain);
        *out = PpnSimConfig {
            missile_x: r.missile_pos.x,
            missile_y: r.missile_pos.y,
            target_x: r.target_pos.x,
            target_y: r.target_pos.y,
            theta_m0,
            v0: r.speed.v0,
            drag: r.speed.drag_decel,
            nav_gain,
            kill_radius: r.kill_radius,
            time_step: r.time_step,
            arc_step: r.arc_step,
            max_steps: r.max_steps as u64,
            log_every: r.log_every as u64,
            domain: PpnDomain::Time,
            alpha: 0.0,
        };
        Ok(())
    })
}

/// Runs one engagement and stores a new handle in `*out`.
///
/// A run that ends without intercept still succeeds; check `terminated` in
/// the summary.
///
/// # Safety
/// `config` must be null or point to a valid `PpnSimConfig`; `out` must be
/// null or point to writable storage for a pointer. On success the caller
/// owns `*out` and must release it with `ppn_trajectory_free`.
#[no_mangle]
pub unsafe extern "C" fn ppn_simulate(config: *const PpnSimConfig, out: *mut *mut PpnTrajectory) -> PpnStatus {
    guard(|| {
        let config = unsafe { config.as_ref() }.ok_or_else(|| null("config"))?;
        let out = unsafe { out.as_mut() }.ok_or_else(|| null("out"))?;
        *out = ptr::null_mut();
        let cfg = sim_config(config)?;
        let domain = match config.domain {
            PpnDomain::Time => Domain::Time,
            PpnDomain::ArcLength => Domain::ArcLength,
        };
        let outcome = lift(domain.simulate(&cfg))?;
        *out = Box::into_raw(Box::new(PpnTrajectory { outcome }));
        Ok(())
    })
}

/// Number of logged samples; zero for a null handle.
///
/// # Safety
/// `traj` must be null or a live handle from `ppn_simulate`.
#[no_mangle]
pub unsafe extern "C" fn ppn_trajectory_len(traj: *const PpnTrajectory) -> usize {
    unsafe { traj.as_ref() }.map_or(0, |t| t.outcome.trajectory.len())
}

/// Copies sample `index` into `out`.
///
/// # Safety
/// `traj` must be null or a live handle; `out` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn ppn_trajectory_sample(
    traj: *const PpnTrajectory,
    index: usize,
    out: *mut PpnSample,
) -> PpnStatus {
    guard(|| {
        let traj = unsafe { traj.as_ref() }.ok_or_else(|| null("traj"))?;
        let out = unsafe { out.as_mut() }.ok_or_else(|| null("out"))?;
        let samples = &traj.outcome.trajectory.samples;
        let s = samples.get(index).ok_or_else(|| {
            fail(
                PpnStatus::IndexOutOfBounds,
                format!("index {index} out of bounds for {} samples", samples.len()),
            )
        })?;
        *out = PpnSample {
            t: s.t,
            s_m: s.s_m,
            x: s.pos.x,
            y: s.pos.y,
            v_m: s.v_m,
            phi_m: s.phi_m,
            r: s.r,
            q: s.q,
            theta_m: s.theta_m,
            q_dot: s.q_dot,
            q_prime: s.q_prime,
            k_m: s.k_m,
            a_m: s.a_m,
        };
        Ok(())
    })
}

/// Copies the run summary into `out`.
///
/// # Safety
/// `traj` must be null or a live handle; `out` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn ppn_trajectory_summary(traj: *const PpnTrajectory, out: *mut PpnSummary) -> PpnStatus {
    guard(|| {
        let traj = unsafe { traj.as_ref() }.ok_or_else(|| null("traj"))?;
        let out = unsafe { out.as_mut() }.ok_or_else(|| null("out"))?;
        let s = &traj.outcome.summary;
        *out = PpnSummary {
            miss_distance: s.miss_distance,
            flight_time: s.flight_time,
            flight_path: s.flight_path,
            curvature_increment: s.curvature_increment,
            max_r: s.max_r,
            max_k: s.max_k,
            terminal_q: s.terminal_q,
            terminal_phi: s.terminal_phi,
            terminated: s.terminated.into(),
            saturated: s.saturated,
        };
        Ok(())
    })
}

/// Releases a handle. Null is ignored.
///
/// # Safety
/// `traj` must be null or a handle from `ppn_simulate` not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ppn_trajectory_free(traj: *mut PpnTrajectory) {
    if !traj.is_null() {
        drop(unsafe { Box::from_raw(traj) });
    }
}

/// Closed-form engagement metrics. Angles in radians.
///
/// # Safety
/// `out` must be null or point to writable memory for a `PpnClosedForm`.
#[no_mangle]
pub unsafe extern "C" fn ppn_closed_form(
    r0: f64,
    theta_m0: f64,
    q0: f64,
    nav_gain: f64,
    cutoff_r: f64,
    out: *mut PpnClosedForm,
) -> PpnStatus {
    guard(|| {
        let out = unsafe { out.as_mut() }.ok_or_else(|| null("out"))?;
        let inputs = lift(ClosedFormInputs::new(r0, theta_m0, q0, lift(GuidanceParams::new(nav_gain))?))?;
        let bound = lift(curvature_bound(&inputs, cutoff_r))?;
        *out = PpnClosedForm {
            max_distance: lift(max_relative_distance(&inputs))?,
            max_curvature: bound.value,
            curvature_unbounded: bound.unbounded,
            curvature_increment: curvature_increment(&inputs),
            flight_path: lift(flight_path_length(&inputs))?,
            terminal_angle: lift(terminal_impact_angle(&inputs))?,
        };
        Ok(())
    })
}

/// Analytic capture region under a lateral acceleration limit `alpha`
/// (m/s^2) at speed `v_max`. Requires `nav_gain > 2`.
///
/// # Safety
/// `out` must be null or point to writable memory for a `PpnCaptureRegion`.
#[no_mangle]
pub unsafe extern "C" fn ppn_capture_region(
    r0: f64,
    alpha: f64,
    v_max: f64,
    nav_gain: f64,
    out: *mut PpnCaptureRegion,
) -> PpnStatus {
    guard(|| {
        let out = unsafe { out.as_mut() }.ok_or_else(|| null("out"))?;
        let gain = lift(GuidanceParams::new(nav_gain))?;
        let limit = lift(ManeuverLimit::new(alpha, v_max))?;
        let region = lift(capture_region_analytic(r0, &limit, gain))?;
        *out = PpnCaptureRegion {
            capture_ratio: capture_ratio(r0, &limit, gain),
            full: region.full,
            forward_boundary: region.forward_boundary().unwrap_or(f64::NAN),
            rear_boundary: region.rear_boundary().unwrap_or(f64::NAN),
            full_capture_min_range: lift(full_capture_min_range(gain, &limit))?,
        };
        Ok(())
    })
}
