//! Numerical PPN engagements against a stationary target.
//!
//! Two independent integrators share one termination and logging driver:
//!
//! - [`simulate_time_domain`] flies the missile in Cartesian coordinates with
//!   a decelerating speed law and the time-domain PPN command,
//! - [`simulate_arclength_domain`] integrates `(r, theta_m, q)` against arc
//!   length, where speed does not appear at all.
//!
//! Either run ends at the first of: range below the kill radius, a closest
//! approach, divergence, speed exhaustion, or the step budget.

mod arclength;
mod driver;
pub mod export;
pub mod rk4;
mod summary;
pub mod terminal;
mod time_domain;

use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::capture::SaturationPolicy;
use crate::closed_form::{max_relative_distance, ClosedFormInputs};
use crate::error::{GuidanceError, Result};
use crate::kinematics::{
    polar_from_cartesian, CartesianState, GuidanceParams, PlanarVector, PolarState, SpeedProfile,
};

pub use arclength::simulate_arclength_domain;
pub use rk4::rk4_step;
pub use summary::summarize;
pub use terminal::{refine_terminal, TerminalFix};
pub use time_domain::simulate_time_domain;

pub const DEFAULT_TIME_STEP: f64 = 1e-3;
pub const DEFAULT_ARC_STEP: f64 = 0.1;
pub const DEFAULT_KILL_RADIUS: f64 = 0.1;
pub const DEFAULT_MAX_STEPS: usize = 50_000_000;
/// Near intercept each step covers at most this fraction of the current range.
pub const RANGE_STEP_FRACTION: f64 = 0.02;

/// Missile start point of the reference engagement: 20 km from the target
/// at origin, LOS angle -120 deg.
pub fn reference_missile_position() -> PlanarVector {
    PlanarVector::new(10000.0, 10000.0 * 3f64.sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimConfig {
    pub missile_pos: PlanarVector,
    pub target_pos: PlanarVector,
    /// Initial leading angle; the flight-path angle is set to `q0 + theta_m0`.
    pub theta_m0: f64,
    pub speed: SpeedProfile,
    pub gain: GuidanceParams,
    pub kill_radius: f64,
    /// Time step of the time-domain integrator, seconds.
    pub time_step: f64,
    /// Arc-length step of the arc-length integrator, metres.
    pub arc_step: f64,
    pub max_steps: usize,
    /// Keep every n-th step in the log (first and last samples are always kept).
    pub log_every: usize,
    pub saturation: Option<SaturationPolicy>,
}

impl SimConfig {
    /// Reference engagement (500 m/s, 0.1 m/s^2 drag) at the given leading angle and gain.
    pub fn reference(theta_m0: f64, gain: GuidanceParams) -> Self {
        Self {
            missile_pos: reference_missile_position(),
            target_pos: PlanarVector::default(),
            theta_m0,
            speed: SpeedProfile { v0: 500.0, drag_decel: 0.1 },
            gain,
            kill_radius: DEFAULT_KILL_RADIUS,
            time_step: DEFAULT_TIME_STEP,
            arc_step: DEFAULT_ARC_STEP,
            max_steps: DEFAULT_MAX_STEPS,
            log_every: 1,
            saturation: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        GuidanceParams::new(self.gain.nav_gain)?;
        SpeedProfile::new(self.speed.v0, self.speed.drag_decel)?;
        let positive = |name: &'static str, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(GuidanceError::invalid(name, format!("must be positive, got {v}")))
            }
        };
        positive("kill_radius", self.kill_radius)?;
        positive("time_step", self.time_step)?;
        positive("arc_step", self.arc_step)?;
        if self.max_steps == 0 {
            return Err(GuidanceError::invalid("max_steps", "must be positive"));
        }
        if self.log_every == 0 {
            return Err(GuidanceError::invalid("log_every", "must be positive"));
        }
        if !(self.theta_m0.abs() <= std::f64::consts::PI) {
            return Err(GuidanceError::invalid("theta_m0", "must lie in [-pi, pi]"));
        }
        if let Some(sat) = self.saturation {
            sat.validate()?;
        }
        let r0 = (self.target_pos - self.missile_pos).norm();
        if r0 <= self.kill_radius {
            return Err(GuidanceError::invalid(
                "missile_pos",
                format!("initial range {r0} m is inside the kill radius"),
            ));
        }
        Ok(())
    }

    pub fn initial_los_angle(&self) -> Result<f64> {
        let los = self.target_pos - self.missile_pos;
        if los.norm() == 0.0 {
            return Err(GuidanceError::DegenerateGeometry);
        }
        Ok(los.angle())
    }

    pub fn initial_cartesian(&self) -> Result<CartesianState> {
        let q0 = self.initial_los_angle()?;
        CartesianState::new(self.missile_pos, q0 + self.theta_m0, self.speed.v0, 0.0)
    }

    pub fn initial_polar(&self) -> Result<PolarState> {
        polar_from_cartesian(&self.initial_cartesian()?, self.target_pos)
    }

    pub fn closed_form_inputs(&self) -> Result<ClosedFormInputs> {
        let polar = self.initial_polar()?;
        ClosedFormInputs::new(polar.r, self.theta_m0, polar.q, self.gain)
    }

    /// Range beyond which a run is declared diverged.
    fn divergence_range(&self) -> Result<f64> {
        let inputs = self.closed_form_inputs()?;
        Ok(10.0 * max_relative_distance(&inputs).unwrap_or(inputs.r0))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Termination {
    Intercept,
    /// Closest approach passed outside the kill radius.
    Missed,
    Horizon,
    Diverged,
    SpeedExhausted,
}

impl fmt::Display for Termination {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Termination::Intercept => "intercept",
            Termination::Missed => "missed",
            Termination::Horizon => "horizon",
            Termination::Diverged => "diverged",
            Termination::SpeedExhausted => "speed-exhausted",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct TrajectorySample {
    pub t: f64,
    pub s_m: f64,
    pub pos: PlanarVector,
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

impl TrajectorySample {
    pub fn is_closing(&self) -> bool {
        self.theta_m.cos() > 0.0
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Trajectory {
    pub samples: Vec<TrajectorySample>,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn last(&self) -> Option<&TrajectorySample> {
        self.samples.last()
    }

    /// Missile position at arc length `s`, linearly interpolated between samples.
    pub fn position_at_arclength(&self, s: f64) -> Option<PlanarVector> {
        let first = self.samples.first()?;
        let last = self.samples.last()?;
        if s < first.s_m || s > last.s_m {
            return None;
        }
        let idx = self.samples.partition_point(|p| p.s_m < s);
        if idx == 0 {
            return Some(first.pos);
        }
        let (a, b) = (&self.samples[idx - 1], &self.samples[idx]);
        let span = b.s_m - a.s_m;
        let w = if span > 0.0 { (s - a.s_m) / span } else { 0.0 };
        Some(a.pos + (b.pos - a.pos) * w)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SummaryMetrics {
    pub miss_distance: f64,
    pub flight_time: f64,
    pub flight_path: f64,
    /// Integral of `|k_m|` over arc length, radians.
    pub curvature_increment: f64,
    pub max_r: f64,
    pub max_k: f64,
    pub terminal_q: f64,
    pub terminal_phi: f64,
    pub terminated: Termination,
    /// Largest unclamped PPN curvature command seen.
    pub max_commanded_k: f64,
    /// Whether the saturation limit ever clipped the command.
    pub saturated: bool,
}

#[derive(Debug, Clone)]
pub struct SimOutcome {
    pub trajectory: Trajectory,
    pub summary: SummaryMetrics,
}

impl SimOutcome {
    pub fn require_intercept(self) -> Result<Self> {
        match self.summary.terminated {
            Termination::Intercept => Ok(self),
            other => Err(GuidanceError::NotIntercepted(other)),
        }
    }
}

/// Which integrator to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Domain {
    Time,
    ArcLength,
}

impl Domain {
    pub fn as_str(self) -> &'static str {
        match self {
            Domain::Time => "time",
            Domain::ArcLength => "arclength",
        }
    }

    pub fn simulate(self, cfg: &SimConfig) -> Result<SimOutcome> {
        match self {
            Domain::Time => simulate_time_domain(cfg),
            Domain::ArcLength => simulate_arclength_domain(cfg),
        }
    }
}

/// Maps `f` over `items` on up to `workers` threads (all cores when `None`).
/// Results come back in input order.
pub fn par_map<T, R, F>(items: &[T], workers: Option<usize>, f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    let run = || items.par_iter().map(&f).collect::<Vec<_>>();
    match workers {
        Some(n) if n > 0 => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(run),
            Err(_) => run(),
        },
        _ => run(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gain(n: f64) -> GuidanceParams {
        GuidanceParams::new(n).unwrap()
    }

    #[test]
    fn reference_geometry() {
        let cfg = SimConfig::reference(120f64.to_radians(), gain(3.0));
        let p = cfg.initial_polar().unwrap();
        assert!((p.r - 20000.0).abs() < 1e-9);
        assert!((p.q.to_degrees() + 120.0).abs() < 1e-9);
        assert!((p.theta_m.to_degrees() - 120.0).abs() < 1e-9);
        assert!(cfg.validate().is_ok());
    }

    #[test]
    fn validation_rejects_bad_settings() {
        let base = SimConfig::reference(0.5, gain(3.0));
        assert!(SimConfig { kill_radius: 0.0, ..base }.validate().is_err());
        assert!(SimConfig { time_step: -1.0, ..base }.validate().is_err());
        assert!(SimConfig { max_steps: 0, ..base }.validate().is_err());
        assert!(SimConfig { missile_pos: PlanarVector::new(0.01, 0.0), ..base }.validate().is_err());
    }

    #[test]
    fn interpolation_on_matched_arclength() {
        let mk = |s: f64, x: f64| TrajectorySample {
            s_m: s,
            pos: PlanarVector::new(x, 2.0 * x),
            ..Default::default()
        };
        let traj = Trajectory { samples: vec![mk(0.0, 0.0), mk(1.0, 1.0), mk(3.0, 2.0)] };
        assert_eq!(traj.position_at_arclength(2.0), Some(PlanarVector::new(1.5, 3.0)));
        assert_eq!(traj.position_at_arclength(0.0), Some(PlanarVector::new(0.0, 0.0)));
        assert_eq!(traj.position_at_arclength(3.5), None);
    }

    #[test]
    fn par_map_keeps_order() {
        let items: Vec<u32> = (0..100).collect();
        let out = par_map(&items, Some(3), |x| x * 2);
        assert_eq!(out, items.iter().map(|x| x * 2).collect::<Vec<_>>());
    }
}
