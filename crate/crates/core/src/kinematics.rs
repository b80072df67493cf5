//! Engagement state types and the raw kinematic and guidance equations.
//!
//! Conventions used throughout the crate:
//!
//! - angles are radians, wrapped to `(-pi, pi]`;
//! - the line of sight (LOS) points from the missile to the target and its
//!   angle `q` is measured counterclockwise from the x-axis;
//! - the leading angle is `theta_m = phi_m - q`;
//! - path curvatures are signed positive for counterclockwise turns, so that
//!   `d(phi_m)/ds = k_m`. Under PPN this makes `k_m = N q'`.
//!
//! A prime (`_prime`) denotes a derivative with respect to the missile arc
//! length `s_m`, a `_dot` a derivative with respect to time.

use std::f64::consts::{PI, TAU};
use std::ops::{Add, Mul, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{GuidanceError, Result};

/// Wraps an angle into `(-pi, pi]`. Values already in range are returned untouched.
pub fn wrap_angle(x: f64) -> f64 {
    if x > -PI && x <= PI {
        return x;
    }
    let w = (x + PI).rem_euclid(TAU) - PI;
    if w <= -PI {
        PI
    } else {
        w
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct PlanarVector {
    pub x: f64,
    pub y: f64,
}

impl PlanarVector {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn from_polar(len: f64, angle: f64) -> Self {
        Self::new(len * angle.cos(), len * angle.sin())
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn dot(self, other: Self) -> f64 {
        self.x * other.x + self.y * other.y
    }

    /// Angle from the x-axis, wrapped to `(-pi, pi]`.
    pub fn angle(self) -> f64 {
        wrap_angle(self.y.atan2(self.x))
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

impl Add for PlanarVector {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl Sub for PlanarVector {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl Mul<f64> for PlanarVector {
    type Output = Self;
    fn mul(self, rhs: f64) -> Self {
        Self::new(self.x * rhs, self.y * rhs)
    }
}

/// Time-domain missile state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CartesianState {
    pub pos_m: PlanarVector,
    /// Flight-path angle.
    pub phi_m: f64,
    /// Speed, m/s.
    pub v_m: f64,
    pub t: f64,
}

impl CartesianState {
    pub fn new(pos_m: PlanarVector, phi_m: f64, v_m: f64, t: f64) -> Result<Self> {
        if !pos_m.is_finite() {
            return Err(GuidanceError::invalid("pos_m", "must be finite"));
        }
        if !(v_m > 0.0 && v_m.is_finite()) {
            return Err(GuidanceError::invalid("v_m", format!("must be positive, got {v_m}")));
        }
        Ok(Self {
            pos_m,
            phi_m: wrap_angle(phi_m),
            v_m,
            t,
        })
    }
}

/// Engagement geometry for a stationary target: range, LOS angle, leading angle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolarState {
    pub r: f64,
    pub q: f64,
    pub theta_m: f64,
}

impl PolarState {
    pub fn new(r: f64, q: f64, theta_m: f64) -> Result<Self> {
        if !(r > 0.0 && r.is_finite()) {
            return Err(GuidanceError::invalid("r", format!("must be positive, got {r}")));
        }
        Ok(Self {
            r,
            q: wrap_angle(q),
            theta_m: wrap_angle(theta_m),
        })
    }

    /// Missile position relative to the target.
    pub fn missile_offset(&self) -> PlanarVector {
        PlanarVector::from_polar(-self.r, self.q)
    }

    pub fn flight_path_angle(&self) -> f64 {
        wrap_angle(self.q + self.theta_m)
    }
}

/// Relative state against a moving, possibly maneuvering target.
///
/// Only used to evaluate the general second-order relative equations; the
/// guidance loops in this crate integrate the stationary case.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeneralRelativeState {
    pub polar: PolarState,
    /// Target leading angle, from the LOS to the target velocity.
    pub theta_t: f64,
    /// Speed ratio `v_t / v_m`.
    pub m: f64,
    /// `d(m)/ds_m`, 1/m.
    pub m_prime: f64,
    /// Target path curvature, 1/m.
    pub k_t: f64,
}

impl GeneralRelativeState {
    pub fn stationary(polar: PolarState) -> Self {
        Self {
            polar,
            theta_t: 0.0,
            m: 0.0,
            m_prime: 0.0,
            k_t: 0.0,
        }
    }
}

/// Navigation gain of the PPN law.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GuidanceParams {
    pub nav_gain: f64,
}

impl GuidanceParams {
    /// A gain usable by the closed forms, which all need `N > 1`.
    pub fn new(nav_gain: f64) -> Result<Self> {
        if !(nav_gain > 1.0 && nav_gain.is_finite()) {
            return Err(GuidanceError::invalid(
                "nav_gain",
                format!("must be finite and > 1, got {nav_gain}"),
            ));
        }
        Ok(Self { nav_gain })
    }
}

/// Missile speed law `v(t) = v0 - drag_decel * t`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpeedProfile {
    pub v0: f64,
    pub drag_decel: f64,
}

impl SpeedProfile {
    pub fn new(v0: f64, drag_decel: f64) -> Result<Self> {
        if !(v0 > 0.0 && v0.is_finite()) {
            return Err(GuidanceError::invalid("v0", format!("must be positive, got {v0}")));
        }
        if !(drag_decel >= 0.0 && drag_decel.is_finite()) {
            return Err(GuidanceError::invalid(
                "drag_decel",
                format!("must be non-negative, got {drag_decel}"),
            ));
        }
        Ok(Self { v0, drag_decel })
    }

    pub fn constant(v0: f64) -> Result<Self> {
        Self::new(v0, 0.0)
    }

    pub fn speed_at(&self, t: f64) -> f64 {
        self.v0 - self.drag_decel * t
    }

    /// Arc length flown before the speed reaches zero (infinite without drag).
    pub fn max_path(&self) -> f64 {
        if self.drag_decel > 0.0 {
            self.v0 * self.v0 / (2.0 * self.drag_decel)
        } else {
            f64::INFINITY
        }
    }
}

/// Range, LOS angle and leading angle of a missile relative to a stationary target.
pub fn polar_from_cartesian(missile: &CartesianState, target_pos: PlanarVector) -> Result<PolarState> {
    let los = target_pos - missile.pos_m;
    let r = los.norm();
    if r == 0.0 {
        return Err(GuidanceError::DegenerateGeometry);
    }
    let q = los.angle();
    PolarState::new(r, q, missile.phi_m - q)
}

/// First-order relative rates `(r', q')` for a stationary target.
pub fn stationary_relative_rates(s: &PolarState) -> (f64, f64) {
    let (sin_t, cos_t) = s.theta_m.sin_cos();
    (-cos_t, -sin_t / s.r)
}

/// Right-hand sides `(r'' - r q'^2, r q'' + 2 r' q')` of the general
/// second-order relative equations for a missile flying curvature `k_m`.
///
/// Both curvatures are signed counterclockwise-positive.
pub fn general_relative_rates(s: &GeneralRelativeState, k_m: f64) -> (f64, f64) {
    let (sin_t, cos_t) = s.theta_t.sin_cos();
    let (sin_m, cos_m) = s.polar.theta_m.sin_cos();
    let m2k = s.m * s.m * s.k_t;
    (
        s.m_prime * cos_t - m2k * sin_t + k_m * sin_m,
        s.m_prime * sin_t + m2k * cos_t - k_m * cos_m,
    )
}

/// Stationary-target second-order right-hand sides written in terms of the
/// leading angle: `(k_m sin(theta_m), -k_m cos(theta_m))`.
pub fn stationary_second_order_rates(s: &PolarState, k_m: f64) -> (f64, f64) {
    let (sin_m, cos_m) = s.theta_m.sin_cos();
    (k_m * sin_m, -k_m * cos_m)
}

/// The same right-hand sides with the first-order rates substituted:
/// `(-r q' k_m, r' k_m)`.
pub fn stationary_second_order_rates_from_rates(s: &PolarState, k_m: f64) -> (f64, f64) {
    let (r_prime, q_prime) = stationary_relative_rates(s);
    (-s.r * q_prime * k_m, r_prime * k_m)
}

/// PPN curvature command `k_m = N q'`.
pub fn ppn_curvature(q_prime: f64, gain: GuidanceParams) -> f64 {
    gain.nav_gain * q_prime
}

/// PPN lateral acceleration `a_m = N v_m q_dot`, normal to the velocity and
/// signed so that the turn rate is `phi_dot = N q_dot`.
pub fn ppn_acceleration(v_m: f64, q_dot: f64, gain: GuidanceParams) -> f64 {
    gain.nav_gain * v_m * q_dot
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArcLengthRates {
    pub r_prime: f64,
    pub theta_m_prime: f64,
    pub q_prime: f64,
}

/// Arc-length rates of `(r, theta_m, q)` under PPN against a stationary target.
pub fn arclength_rates(s: &PolarState, gain: GuidanceParams) -> ArcLengthRates {
    let (sin_t, cos_t) = s.theta_m.sin_cos();
    ArcLengthRates {
        r_prime: -cos_t,
        theta_m_prime: (1.0 - gain.nav_gain) * sin_t / s.r,
        q_prime: -sin_t / s.r,
    }
}

/// `r'^2 + (r q')^2 - 1`. Zero whenever the rates come from a unit-speed
/// parameterization.
pub fn speed_invariant_defect(r_prime: f64, r: f64, q_prime: f64) -> f64 {
    let rq = r * q_prime;
    r_prime * r_prime + rq * rq - 1.0
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn gain(n: f64) -> GuidanceParams {
        GuidanceParams::new(n).unwrap()
    }

    #[test]
    fn wrap_ties_go_to_plus_pi() {
        assert_eq!(wrap_angle(PI), PI);
        assert_eq!(wrap_angle(-PI), PI);
        assert_eq!(wrap_angle(3.0 * PI), PI);
        assert_relative_eq!(wrap_angle(-4.0 * PI / 3.0), 2.0 * PI / 3.0, epsilon = 1e-15);
        assert_eq!(wrap_angle(0.25), 0.25);
    }

    #[test]
    fn table1_geometry() {
        let missile = CartesianState::new(PlanarVector::new(10000.0, 17320.0), 0.0, 500.0, 0.0).unwrap();
        let s = polar_from_cartesian(&missile, PlanarVector::default()).unwrap();
        assert_relative_eq!(s.r, 20000.0, max_relative = 1e-4);
        assert_relative_eq!(s.q, -120f64.to_radians(), epsilon = 1e-4);
        assert_relative_eq!(s.theta_m, 120f64.to_radians(), epsilon = 1e-4);
    }

    #[test]
    fn head_on_and_tail_away() {
        let head_on = CartesianState::new(PlanarVector::new(-20000.0, 0.0), 0.0, 500.0, 0.0).unwrap();
        let s = polar_from_cartesian(&head_on, PlanarVector::default()).unwrap();
        assert_eq!((s.q, s.theta_m), (0.0, 0.0));

        let tail = CartesianState::new(PlanarVector::new(20000.0, 0.0), 0.0, 500.0, 0.0).unwrap();
        let s = polar_from_cartesian(&tail, PlanarVector::default()).unwrap();
        assert_eq!(s.q, PI);
        assert_eq!(s.theta_m.abs(), PI);
    }

    #[test]
    fn coincident_positions_rejected() {
        let m = CartesianState::new(PlanarVector::new(5.0, 5.0), 0.0, 500.0, 0.0).unwrap();
        assert_eq!(
            polar_from_cartesian(&m, PlanarVector::new(5.0, 5.0)),
            Err(GuidanceError::DegenerateGeometry)
        );
    }

    #[test]
    fn stationary_rates_examples() {
        let s = PolarState::new(20000.0, 0.0, 0.0).unwrap();
        assert_eq!(stationary_relative_rates(&s), (-1.0, -0.0));

        let s = PolarState::new(20000.0, 0.0, PI / 2.0).unwrap();
        let (rp, qp) = stationary_relative_rates(&s);
        assert!(rp.abs() < 1e-15);
        assert_relative_eq!(qp, -5.0e-5, max_relative = 1e-12);

        let s = PolarState::new(20000.0, 0.0, 120f64.to_radians()).unwrap();
        let (rp, qp) = stationary_relative_rates(&s);
        assert_relative_eq!(rp, 0.5, max_relative = 1e-12);
        assert_relative_eq!(qp, -4.330127e-5, max_relative = 1e-6);
    }

    #[test]
    fn curvature_and_acceleration_examples() {
        assert_eq!(ppn_curvature(0.0, gain(3.0)), 0.0);
        assert_relative_eq!(ppn_curvature(-4.3301e-5, gain(3.0)), -1.29903e-4, max_relative = 1e-12);
        assert_eq!(ppn_acceleration(500.0, 0.0, gain(3.0)), 0.0);
        let q_dot = -0.8660254037844386 / 20000.0 * 500.0;
        assert_relative_eq!(q_dot, -0.0216506, max_relative = 1e-5);
        assert_relative_eq!(ppn_acceleration(500.0, q_dot, gain(3.0)), -32.476, max_relative = 1e-4);
    }

    #[test]
    fn arclength_rate_examples() {
        let s = PolarState::new(20000.0, 0.3, 0.0).unwrap();
        let rates = arclength_rates(&s, gain(3.0));
        assert_eq!(rates.r_prime, -1.0);
        assert_eq!(rates.theta_m_prime, 0.0);

        let s = PolarState::new(20000.0, 0.0, PI / 2.0).unwrap();
        assert_relative_eq!(arclength_rates(&s, gain(2.0)).theta_m_prime, -5.0e-5, max_relative = 1e-12);
    }

    #[test]
    fn free_drift_and_stationary_reduction() {
        let polar = PolarState::new(1234.0, 0.2, 0.7).unwrap();
        let free = general_relative_rates(&GeneralRelativeState::stationary(polar), 0.0);
        assert_eq!(free, (0.0, 0.0));
        let k = 3.0e-4;
        assert_eq!(
            general_relative_rates(&GeneralRelativeState::stationary(polar), k),
            stationary_second_order_rates(&polar, k)
        );
    }

    #[test]
    fn defect_negative_control() {
        let s = PolarState::new(20000.0, 0.0, 1.1).unwrap();
        let (rp, qp) = stationary_relative_rates(&s);
        assert!(speed_invariant_defect(rp, s.r, qp).abs() < 1e-15);
        assert!(speed_invariant_defect(1.1 * rp, s.r, qp).abs() > 1e-3);
    }

    #[test]
    fn invalid_types() {
        assert!(PolarState::new(0.0, 0.0, 0.0).is_err());
        assert!(CartesianState::new(PlanarVector::default(), 0.0, 0.0, 0.0).is_err());
        assert!(GuidanceParams::new(1.0).is_err());
        assert!(SpeedProfile::new(500.0, -0.1).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn wrap_is_idempotent_and_in_range(x in -100.0f64..100.0) {
            let w = wrap_angle(x);
            prop_assert!(w > -PI && w <= PI);
            prop_assert_eq!(wrap_angle(w), w);
            prop_assert!(((x - w) / TAU - ((x - w) / TAU).round()).abs() < 1e-9);
        }

        #[test]
        fn leading_angle_rate_is_proportional_to_los_rate(
            r in 1.0f64..1e5, theta in -3.1f64..3.1, n in 1.01f64..8.0
        ) {
            let s = PolarState::new(r, 0.0, theta).unwrap();
            let rates = arclength_rates(&s, gain(n));
            let resid = rates.theta_m_prime - (n - 1.0) * rates.q_prime;
            prop_assert!(resid.abs() <= 1e-15 * (1.0 + rates.theta_m_prime.abs()) * 4.0);
        }

        #[test]
        fn both_stationary_forms_agree(
            r in 1.0f64..1e5, q in -3.0f64..3.0, theta in -3.1f64..3.1, n in 1.01f64..8.0
        ) {
            let s = PolarState::new(r, q, theta).unwrap();
            let k = ppn_curvature(stationary_relative_rates(&s).1, gain(n));
            let general = general_relative_rates(&GeneralRelativeState::stationary(s), k);
            let from_angles = stationary_second_order_rates(&s, k);
            let from_rates = stationary_second_order_rates_from_rates(&s, k);
            prop_assert!((general.0 - from_angles.0).abs() < 1e-12 && (general.1 - from_angles.1).abs() < 1e-12);
            prop_assert!((from_angles.0 - from_rates.0).abs() < 1e-12 && (from_angles.1 - from_rates.1).abs() < 1e-12);
        }

        #[test]
        fn acceleration_matches_curvature(
            v in 1.0f64..2000.0, q_prime in -1e-3f64..1e-3, n in 1.01f64..8.0
        ) {
            let a = ppn_acceleration(v, q_prime * v, gain(n));
            let k = ppn_curvature(q_prime, gain(n));
            prop_assert!((a / (v * v) - k).abs() <= 1e-12 * k.abs().max(f64::MIN_POSITIVE));
        }

        #[test]
        fn unit_speed_defect_vanishes(r in 1.0f64..1e5, theta in -3.1f64..3.1) {
            let s = PolarState::new(r, 0.0, theta).unwrap();
            let (rp, qp) = stationary_relative_rates(&s);
            prop_assert!(speed_invariant_defect(rp, s.r, qp).abs() < 1e-15);
        }
    }
}
