use crate::capture::SaturationPolicy;
use crate::closed_form::flight_time_under_constant_drag;
use crate::error::Result;
use crate::kinematics::{wrap_angle, PlanarVector, SpeedProfile};

use super::driver::{run, Integrand};
use super::rk4::rk4_step;
use super::{SimConfig, SimOutcome, TrajectorySample};

/// `[r, theta_m, q]` (angles unwrapped) plus the arc length flown.
#[derive(Debug, Clone, Copy)]
struct State {
    y: [f64; 3],
    s: f64,
}

struct ArcLength {
    target: PlanarVector,
    nav_gain: f64,
    ds: f64,
    min_range: f64,
    speed: SpeedProfile,
    saturation: Option<SaturationPolicy>,
    start: State,
}

impl ArcLength {
    /// Speed and clock implied by the speed law at arc length `s`.
    fn clock(&self, s: f64) -> (f64, f64) {
        match flight_time_under_constant_drag(s, &self.speed) {
            Ok(t) => (t, self.speed.speed_at(t)),
            Err(_) => (f64::NAN, 0.0),
        }
    }

    fn command(&self, y: &[f64; 3], s: f64) -> (f64, f64, f64) {
        let q_prime = -y[1].sin() / y[0].max(self.min_range);
        let k_cmd = self.nav_gain * q_prime;
        let limit = match self.saturation {
            None => f64::INFINITY,
            Some(SaturationPolicy::Curvature { alpha_s }) => alpha_s,
            Some(sat) => sat.curvature_limit(self.clock(s).1),
        };
        (q_prime, k_cmd, limit)
    }

    fn rhs(&self, y: &[f64; 3], s: f64) -> [f64; 3] {
        let (q_prime, k_cmd, limit) = self.command(y, s);
        let k = k_cmd.clamp(-limit, limit);
        [-y[1].cos(), k - q_prime, q_prime]
    }
}

impl Integrand for ArcLength {
    type State = State;

    fn initial(&self) -> Result<State> {
        Ok(self.start)
    }

    fn advance(&self, state: &State) -> Result<State> {
        let h = self.ds.min(super::RANGE_STEP_FRACTION * state.y[0]);
        // The limit only varies with s through the speed law; hold it over the step.
        let y = rk4_step(&state.y, h, |y| self.rhs(y, state.s))?;
        Ok(State { y, s: state.s + h })
    }

    fn sample(&self, state: &State) -> TrajectorySample {
        let [r, theta, q] = state.y;
        let (q_prime, k_cmd, limit) = self.command(&state.y, state.s);
        let k = k_cmd.clamp(-limit, limit);
        let (t, v) = self.clock(state.s);
        TrajectorySample {
            t,
            s_m: state.s,
            pos: self.target - PlanarVector::from_polar(r, q),
            v_m: v,
            phi_m: wrap_angle(q + theta),
            r,
            q: wrap_angle(q),
            theta_m: wrap_angle(theta),
            q_dot: q_prime * v,
            q_prime,
            k_m: k,
            a_m: k * v * v,
        }
    }

    fn command(&self, state: &State) -> (f64, f64) {
        let (_, k_cmd, limit) = ArcLength::command(self, &state.y, state.s);
        (k_cmd, limit)
    }
}

/// Arc-length PPN run: `r' = -cos(theta_m)`, `theta_m' = k_m - q'`,
/// `q' = -sin(theta_m) / r` with `k_m = N q'` (clamped when saturated).
///
/// Speed never enters the dynamics; the logged clock and speed come from
/// the configured speed law.
pub fn simulate_arclength_domain(cfg: &SimConfig) -> Result<SimOutcome> {
    cfg.validate()?;
    let polar = cfg.initial_polar()?;
    let sys = ArcLength {
        target: cfg.target_pos,
        nav_gain: cfg.gain.nav_gain,
        ds: cfg.arc_step,
        min_range: cfg.kill_radius / 10.0,
        speed: cfg.speed,
        saturation: cfg.saturation,
        start: State {
            y: [polar.r, cfg.theta_m0, polar.q],
            s: 0.0,
        },
    };
    run(cfg, &sys)
}
