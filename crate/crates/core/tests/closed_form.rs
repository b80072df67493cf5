use std::f64::consts::{FRAC_PI_2, PI};

use approx::assert_relative_eq;
use proptest::prelude::*;

use ppn_core::closed_form::quadrature::integrate;
use ppn_core::closed_form::*;
use ppn_core::GuidanceParams;

const R0: f64 = 20000.0;

fn inputs(theta_deg: f64, n: f64) -> ClosedFormInputs {
    ClosedFormInputs::new(R0, theta_deg.to_radians(), 0.0, GuidanceParams::new(n).unwrap()).unwrap()
}

#[test]
fn inbound_profile_has_unit_speed() {
    for (deg, n) in [(30.0, 3.0), (60.0, 2.0), (120.0, 3.0), (-150.0, 4.5), (89.0, 1.5)] {
        let inp = inputs(deg, n);
        let r_max = max_relative_distance(&inp).unwrap();
        for i in 0..200 {
            let r = r_max * (1.0 - i as f64 / 200.0);
            let p = profile_at(&inp, r, Branch::Inbound).unwrap();
            let defect = p.r_prime.powi(2) + (p.r * p.q_prime).powi(2) - 1.0;
            assert!(defect.abs() < 1e-12, "{deg} {n} r={r}: {defect:e}");
        }
    }
}

#[test]
fn zero_leading_angle_is_a_straight_line() {
    let inp = inputs(0.0, 3.0);
    assert_eq!(flight_path_length(&inp).unwrap(), R0);
    assert_eq!(curvature_increment(&inp), 0.0);
    for (_, p) in profile_samples(&inp, 50).unwrap() {
        assert_eq!(p.k_m, 0.0);
    }
}

#[test]
fn constant_los_rate_at_gain_two() {
    let inp = inputs(60.0, 2.0);
    let q0 = inp.q_prime0();
    for (_, p) in profile_samples(&inp, 100).unwrap() {
        assert_relative_eq!(p.q_prime, q0, max_relative = 1e-14);
    }
}

#[test]
fn quadrature_reproduces_gain_two_closed_form() {
    for deg in [1.0, 30.0, 90.0, 150.0, 179.0] {
        let inp = inputs(deg, 2.0);
        let q = flight_path_quadrature(&inp, PATH_REL_TOL).unwrap();
        assert!(q.converged);
        assert_relative_eq!(q.value, flight_path_length(&inp).unwrap(), max_relative = 1e-10);
    }
}

#[test]
fn quadrature_is_stable_under_tolerance_halving() {
    for n in [2.5, 3.0, 4.0, 5.0, 6.0, 10.0] {
        for deg in [5.0, 60.0, 120.0, 170.0] {
            let inp = inputs(deg, n);
            let a = flight_path_quadrature(&inp, PATH_REL_TOL).unwrap().value;
            let b = flight_path_quadrature(&inp, PATH_REL_TOL / 2.0).unwrap().value;
            assert_relative_eq!(a, b, max_relative = 1e-8);
        }
    }
}

/// `int |k| ds` along the range, with `ds = dr / |r'|`.
fn increment_by_range(inp: &ClosedFormInputs) -> f64 {
    let r_max = max_relative_distance(inp).unwrap();
    let dk = |r: f64| curvature_at(inp, r).unwrap().abs();
    let tol = 1e-12;
    if inp.has_outbound() {
        // r = r_max (1 - t^2) removes the inverse square root at the turning point.
        let leg = |lo: f64| {
            let t_hi = (1.0 - lo / r_max).sqrt();
            integrate(
                |t| {
                    let r = r_max * (1.0 - t * t);
                    let rp = closing_speed_at(inp, r, Branch::Inbound).unwrap().abs();
                    dk(r) * 2.0 * r_max * t / rp
                },
                0.0,
                t_hi,
                tol,
                4000,
            )
            .value
        };
        leg(inp.r0) + leg(0.0)
    } else {
        integrate(
            |r| dk(r) / closing_speed_at(inp, r, Branch::Inbound).unwrap().abs(),
            0.0,
            inp.r0,
            tol,
            4000,
        )
        .value
    }
}

#[test]
fn curvature_increment_matches_range_integral() {
    for (deg, n) in [(30.0, 3.0), (60.0, 4.0), (89.0, 3.0), (120.0, 3.0), (150.0, 2.0), (-120.0, 6.0)] {
        let inp = inputs(deg, n);
        assert_relative_eq!(increment_by_range(&inp), curvature_increment(&inp), max_relative = 1e-6);
    }
}

#[test]
fn max_distance_is_the_supremum_of_the_branch() {
    for (deg, n) in [(30.0, 3.0), (90.0, 3.0), (120.0, 2.0), (120.0, 3.0), (170.0, 6.0)] {
        let inp = inputs(deg, n);
        let r_max = max_relative_distance(&inp).unwrap();
        let abs0 = inp.theta_m0.abs();
        let sampled = (1..=20000)
            .map(|i| abs0 * i as f64 / 20000.0)
            .map(|t| radius_at_leading_angle(&inp, t).unwrap())
            .fold(0.0, f64::max);
        assert!(sampled <= r_max * (1.0 + 1e-12), "{deg} {n}");
        assert_relative_eq!(sampled, r_max, max_relative = 1e-6);
    }
}

#[test]
fn peak_curvature_is_attained_on_the_profile() {
    for (deg, n) in [(45.0, 3.0), (120.0, 3.0), (150.0, 5.0)] {
        let inp = inputs(deg, n);
        let k_max = max_curvature(&inp).unwrap();
        let sampled = profile_samples(&inp, 4000)
            .unwrap()
            .into_iter()
            .map(|(_, p)| p.k_m.abs())
            .fold(0.0, f64::max);
        assert!(sampled <= k_max * (1.0 + 1e-12));
        assert_relative_eq!(sampled, k_max, max_relative = 1e-6);
    }
}

#[test]
fn reversal_diverges() {
    let inp = inputs(180.0, 3.0);
    assert!(flight_path_length(&inp).is_err());
    assert!(max_relative_distance(&inp).is_err());
}

proptest! {
    #[test]
    fn leading_angle_decays_on_the_way_in(deg in 0.5f64..179.5, n in 1.05f64..8.0) {
        let inp = inputs(deg, n);
        let r_max = max_relative_distance(&inp).unwrap();
        let mut prev = f64::INFINITY;
        for i in 0..100 {
            let r = r_max * (1.0 - i as f64 / 100.0);
            let t = leading_angle_at(&inp, r, Branch::Inbound).unwrap();
            prop_assert!(t < prev || i == 0, "r={r}: {t} !< {prev}");
            prop_assert!(t > 0.0 && t <= FRAC_PI_2 + 1e-12);
            prev = t;
        }
    }

    #[test]
    fn magnitudes_are_even_in_theta(deg in 0.5f64..179.5, n in 2.05f64..8.0) {
        let (p, m) = (inputs(deg, n), inputs(-deg, n));
        prop_assert_eq!(flight_path_length(&p).unwrap(), flight_path_length(&m).unwrap());
        prop_assert_eq!(curvature_increment(&p), curvature_increment(&m));
        prop_assert_eq!(max_relative_distance(&p).unwrap(), max_relative_distance(&m).unwrap());
        prop_assert_eq!(max_curvature(&p).unwrap(), max_curvature(&m).unwrap());
    }

    #[test]
    fn path_exceeds_range_and_grows_with_angle(deg in 1.0f64..170.0, n in 2.05f64..8.0) {
        let a = flight_path_length(&inputs(deg, n)).unwrap();
        let b = flight_path_length(&inputs(deg + 5.0, n)).unwrap();
        prop_assert!(a > R0 && b > a);
    }

    #[test]
    fn terminal_angle_lies_in_range(deg in -179.0f64..179.0, n in 1.05f64..8.0, q0 in -PI..PI) {
        let inp = ClosedFormInputs::new(R0, deg.to_radians(), q0, GuidanceParams::new(n).unwrap()).unwrap();
        let qf = terminal_impact_angle(&inp).unwrap();
        prop_assert!(qf > -PI && qf <= PI);
    }
}
