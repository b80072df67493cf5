use std::ffi::CStr;
use std::ptr;

use ppn_ffi::*;

fn last_error() -> String {
    let p = ppn_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

fn reference(theta_deg: f64, gain: f64) -> PpnSimConfig {
    let mut cfg = std::mem::MaybeUninit::<PpnSimConfig>::uninit();
    let status = unsafe { ppn_sim_config_reference(theta_deg.to_radians(), gain, cfg.as_mut_ptr()) };
    assert_eq!(status, PpnStatus::Ok);
    unsafe { cfg.assume_init() }
}

#[test]
fn simulate_and_read_back() {
    let mut cfg = reference(120.0, 3.0);
    cfg.log_every = 50;
    let mut traj = ptr::null_mut();
    assert_eq!(unsafe { ppn_simulate(&cfg, &mut traj) }, PpnStatus::Ok);
    assert!(!traj.is_null());

    let n = unsafe { ppn_trajectory_len(traj) };
    assert!(n > 100);
    let mut first = PpnSample::default();
    assert_eq!(unsafe { ppn_trajectory_sample(traj, 0, &mut first) }, PpnStatus::Ok);
    assert!((first.r - 20000.0).abs() < 1e-9);
    assert!((first.theta_m - 120f64.to_radians()).abs() < 1e-12);

    let mut summary = std::mem::MaybeUninit::<PpnSummary>::uninit();
    assert_eq!(unsafe { ppn_trajectory_summary(traj, summary.as_mut_ptr()) }, PpnStatus::Ok);
    let s = unsafe { summary.assume_init() };
    assert_eq!(s.terminated, PpnTermination::Intercept);
    assert!((s.flight_path - 33937.419808).abs() < 0.05);
    assert!((s.max_r - 21491.3986).abs() < 0.01);
    assert!(!s.saturated);

    let mut out = PpnSample::default();
    assert_eq!(unsafe { ppn_trajectory_sample(traj, n, &mut out) }, PpnStatus::IndexOutOfBounds);
    assert!(last_error().contains("out of bounds"));
    unsafe { ppn_trajectory_free(traj) };
}

#[test]
fn arclength_domain_and_saturation() {
    let mut cfg = reference(120.0, 3.0);
    cfg.domain = PpnDomain::ArcLength;
    cfg.drag = 0.0;
    cfg.log_every = 1000;
    cfg.alpha = 5.0;
    let mut traj = ptr::null_mut();
    assert_eq!(unsafe { ppn_simulate(&cfg, &mut traj) }, PpnStatus::Ok);
    let mut summary = std::mem::MaybeUninit::<PpnSummary>::uninit();
    assert_eq!(unsafe { ppn_trajectory_summary(traj, summary.as_mut_ptr()) }, PpnStatus::Ok);
    assert!(unsafe { summary.assume_init() }.saturated);
    unsafe { ppn_trajectory_free(traj) };
}

#[test]
fn invalid_inputs_report_codes() {
    let mut traj = ptr::null_mut();
    assert_eq!(unsafe { ppn_simulate(ptr::null(), &mut traj) }, PpnStatus::NullPointer);
    assert!(last_error().contains("config"));

    let mut cfg = reference(30.0, 3.0);
    cfg.nav_gain = 0.5;
    assert_eq!(unsafe { ppn_simulate(&cfg, &mut traj) }, PpnStatus::InvalidArgument);
    assert!(traj.is_null());

    let mut cfg = reference(30.0, 3.0);
    cfg.target_x = cfg.missile_x;
    cfg.target_y = cfg.missile_y;
    assert_eq!(unsafe { ppn_simulate(&cfg, &mut traj) }, PpnStatus::InvalidArgument);
    assert!(last_error().contains("kill radius"));

    assert_eq!(unsafe { ppn_trajectory_len(ptr::null()) }, 0);
    unsafe { ppn_trajectory_free(ptr::null_mut()) };
}

#[test]
fn closed_form_values() {
    let mut out = PpnClosedForm::default();
    let status = unsafe { ppn_closed_form(20000.0, 120f64.to_radians(), -120f64.to_radians(), 2.0, 0.1, &mut out) };
    assert_eq!(status, PpnStatus::Ok);
    assert!((out.flight_path - 48367.98304624581).abs() < 1e-6);
    assert!((out.max_distance - 23094.01076758503).abs() < 1e-6);
    assert!((out.curvature_increment - 4.1887902047863905).abs() < 1e-12);
    assert!(!out.curvature_unbounded);

    let status = unsafe { ppn_closed_form(20000.0, std::f64::consts::PI, 0.0, 3.0, 0.1, &mut out) };
    assert_eq!(status, PpnStatus::Divergent);
}

#[test]
fn capture_region_values() {
    let mut out = PpnCaptureRegion::default();
    assert_eq!(unsafe { ppn_capture_region(20000.0, 30.0, 500.0, 3.0, &mut out) }, PpnStatus::Ok);
    assert!(!out.full);
    assert!((out.capture_ratio - 0.8).abs() < 1e-12);
    assert!((out.forward_boundary.to_degrees() - 53.130102354).abs() < 1e-8);
    assert!((out.rear_boundary.to_degrees() - 140.208180500).abs() < 1e-8);
    assert!((out.full_capture_min_range - 25000.0).abs() < 1e-8);

    assert_eq!(unsafe { ppn_capture_region(20000.0, 30.0, 500.0, 2.0, &mut out) }, PpnStatus::InvalidArgument);
}
