use approx::assert_relative_eq;

use ppn_core::closed_form::{curvature_increment, flight_path_length, max_relative_distance};
use ppn_core::sim::*;
use ppn_core::{GuidanceParams, SpeedProfile};

fn cfg(theta_deg: f64, n: f64) -> SimConfig {
    SimConfig::reference(theta_deg.to_radians(), GuidanceParams::new(n).unwrap())
}

fn scenario_cases() -> Vec<(f64, f64)> {
    let mut v: Vec<(f64, f64)> = [-60.0, -30.0, 30.0, 60.0, 90.0, 120.0].iter().map(|&t| (t, 3.0)).collect();
    v.extend([2.0, 3.0, 4.0, 5.0, 6.0].iter().map(|&n| (120.0, n)));
    v
}

#[test]
fn coarse_steps_still_match_the_closed_forms() {
    let cases = scenario_cases();
    let runs = par_map(&cases, None, |&(t, n)| {
        let c = SimConfig {
            time_step: 0.01,
            log_every: 10,
            ..cfg(t, n)
        };
        (c, simulate_time_domain(&c).unwrap().require_intercept().unwrap())
    });
    for (c, out) in runs {
        let inp = c.closed_form_inputs().unwrap();
        let s = out.summary;
        assert!((s.flight_path - flight_path_length(&inp).unwrap()).abs() < 0.5, "{c:?}");
        assert!((s.curvature_increment - curvature_increment(&inp)).abs() < 5e-5, "{c:?}");
        assert!((s.max_r - max_relative_distance(&inp).unwrap()).abs() < 0.01, "{c:?}");
    }
}

#[test]
fn mirrored_starts_give_mirrored_los_rates() {
    for deg in [30.0, 60.0, 120.0] {
        let p = simulate_time_domain(&cfg(deg, 3.0)).unwrap();
        let m = simulate_time_domain(&cfg(-deg, 3.0)).unwrap();
        assert_eq!(p.trajectory.len(), m.trajectory.len());
        for (a, b) in p.trajectory.samples.iter().zip(&m.trajectory.samples) {
            assert!((a.q_dot + b.q_dot).abs() < 1e-9, "t={}: {} vs {}", a.t, a.q_dot, b.q_dot);
        }
        let (a, b) = (p.summary, m.summary);
        assert_relative_eq!(a.flight_path, b.flight_path, max_relative = 1e-9);
        assert_relative_eq!(a.curvature_increment, b.curvature_increment, max_relative = 1e-9);
        assert_relative_eq!(a.max_r, b.max_r, max_relative = 1e-9);
        assert_relative_eq!(a.flight_time, b.flight_time, max_relative = 1e-9);
    }
}

#[test]
fn closing_speed_tends_to_missile_speed() {
    for (t, n) in scenario_cases() {
        let out = simulate_time_domain(&cfg(t, n)).unwrap().require_intercept().unwrap();
        // The refined terminal sample carries the rates of the last integrated state.
        let last = &out.trajectory.samples[out.trajectory.len() - 2];
        let r_dot = -last.v_m * last.theta_m.cos();
        assert!((r_dot / -last.v_m - 1.0).abs() < 1e-3, "{t} {n}: {r_dot}");
    }
}

#[test]
fn speed_is_untouched_without_drag() {
    let mut c = cfg(120.0, 3.0);
    c.speed = SpeedProfile::constant(500.0).unwrap();
    let out = simulate_time_domain(&c).unwrap();
    for p in &out.trajectory.samples {
        assert!((p.v_m / 500.0 - 1.0).abs() < 1e-9);
    }
}

#[test]
fn straight_line_engagement() {
    let mut c = cfg(0.0, 3.0);
    c.speed = SpeedProfile::constant(500.0).unwrap();
    let out = simulate_time_domain(&c).unwrap().require_intercept().unwrap();
    assert_relative_eq!(out.summary.flight_time, 40.0, max_relative = 1e-9);
    assert_relative_eq!(out.summary.flight_path, 20000.0, max_relative = 1e-9);
    assert!(out.summary.curvature_increment < 1e-9);
    assert!(out.trajectory.samples.iter().all(|p| p.k_m.abs() < 1e-12));
}

#[test]
fn arclength_simulation_is_fourth_order() {
    // Self-convergence of the range at a fixed arc length, early enough that
    // the range-proportional step cap never engages.
    let s_end = 4000.0;
    let range_at = |ds: f64| {
        let c = SimConfig {
            arc_step: ds,
            ..cfg(60.0, 3.0)
        };
        let out = simulate_arclength_domain(&c).unwrap();
        let p = out
            .trajectory
            .samples
            .iter()
            .find(|p| (p.s_m - s_end).abs() < 1e-6)
            .expect("sample on the grid");
        p.r
    };
    let (a, b, c) = (range_at(200.0), range_at(100.0), range_at(50.0));
    let ratio = (a - b) / (b - c);
    assert!((12.0..20.0).contains(&ratio), "ratio {ratio}: {a} {b} {c}");
}

#[test]
fn reversal_start_diverges() {
    for domain in [Domain::Time, Domain::ArcLength] {
        let c = SimConfig {
            log_every: 1000,
            ..cfg(180.0, 3.0)
        };
        let out = domain.simulate(&c).unwrap();
        assert_eq!(out.summary.terminated, Termination::Diverged, "{domain:?}");
        assert!(out.clone().require_intercept().is_err());
    }
}

#[test]
fn step_budget_and_speed_exhaustion() {
    let c = SimConfig {
        max_steps: 10,
        ..cfg(60.0, 3.0)
    };
    assert_eq!(simulate_time_domain(&c).unwrap().summary.terminated, Termination::Horizon);

    let mut c = cfg(120.0, 3.0);
    c.speed = SpeedProfile::new(500.0, 10.0).unwrap();
    c.log_every = 1000;
    let out = simulate_time_domain(&c).unwrap();
    assert_eq!(out.summary.terminated, Termination::SpeedExhausted);
    assert!(out.summary.flight_path <= 500.0 * 500.0 / 20.0 + 1.0);
}

#[test]
fn saturation_is_reported() {
    let mut c = cfg(120.0, 3.0);
    c.saturation = Some(ppn_core::capture::SaturationPolicy::Acceleration { alpha: 10.0 });
    let out = simulate_time_domain(&c).unwrap();
    let s = out.summary;
    assert!(s.saturated);
    assert!(s.max_commanded_k > 10.0 / 500.0f64.powi(2));
    // Applied curvature never exceeds the limit at the current speed.
    for p in &out.trajectory.samples {
        assert!(p.k_m.abs() <= 10.0 / (p.v_m * p.v_m) * (1.0 + 1e-12));
    }
}

#[test]
fn terminal_flight_path_angle_matches_los() {
    for (t, n) in scenario_cases() {
        let c = cfg(t, n);
        let out = simulate_arclength_domain(&c).unwrap().require_intercept().unwrap();
        let expected = c.initial_los_angle().unwrap() - t.to_radians() / (n - 1.0);
        let d = ppn_core::wrap_angle(out.summary.terminal_phi - expected);
        assert!(d.abs() < 1e-3_f64.to_radians(), "{t} {n}: {d}");
        assert!(out.summary.miss_distance < c.kill_radius);
    }
}

#[test]
fn logs_are_decimated_but_keep_endpoints() {
    let full = simulate_time_domain(&cfg(60.0, 3.0)).unwrap();
    let thin = simulate_time_domain(&SimConfig {
        log_every: 100,
        ..cfg(60.0, 3.0)
    })
    .unwrap();
    assert!(thin.trajectory.len() * 50 < full.trajectory.len());
    assert_eq!(thin.trajectory.samples[0], full.trajectory.samples[0]);
    let (a, b) = (thin.trajectory.last().unwrap(), full.trajectory.last().unwrap());
    assert_eq!(a.s_m, b.s_m);
    assert_eq!(thin.summary.flight_path, full.summary.flight_path);
}
