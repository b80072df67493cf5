use crate::capture::SaturationPolicy;
use crate::error::Result;
use crate::kinematics::{wrap_angle, PlanarVector};

use super::driver::{run, Integrand};
use super::rk4::rk4_step;
use super::{SimConfig, SimOutcome, TrajectorySample};

/// `[x, y, phi_m, v_m, s_m]` plus the clock.
#[derive(Debug, Clone, Copy)]
struct State {
    y: [f64; 5],
    t: f64,
}

struct TimeDomain {
    target: PlanarVector,
    nav_gain: f64,
    drag: f64,
    dt: f64,
    min_range: f64,
    saturation: Option<SaturationPolicy>,
    start: State,
}

struct Geometry {
    r: f64,
    q: f64,
    q_prime: f64,
    k_cmd: f64,
    k: f64,
    limit: f64,
}

impl TimeDomain {
    fn geometry(&self, y: &[f64; 5]) -> Geometry {
        let los = self.target - PlanarVector::new(y[0], y[1]);
        let r = los.norm();
        let q = los.y.atan2(los.x);
        let q_prime = -(y[2] - q).sin() / r.max(self.min_range);
        let k_cmd = self.nav_gain * q_prime;
        let limit = self.saturation.map_or(f64::INFINITY, |s| s.curvature_limit(y[3]));
        Geometry {
            r,
            q,
            q_prime,
            k_cmd,
            k: k_cmd.clamp(-limit, limit),
            limit,
        }
    }

    fn rhs(&self, y: &[f64; 5]) -> [f64; 5] {
        let g = self.geometry(y);
        let (v, phi) = (y[3], y[2]);
        [v * phi.cos(), v * phi.sin(), g.k * v, -self.drag, v]
    }
}

impl Integrand for TimeDomain {
    type State = State;

    fn initial(&self) -> Result<State> {
        Ok(self.start)
    }

    fn advance(&self, state: &State) -> Result<State> {
        let g = self.geometry(&state.y);
        let h = self.dt.min(super::RANGE_STEP_FRACTION * g.r / state.y[3]);
        let y = rk4_step(&state.y, h, |y| self.rhs(y))?;
        Ok(State { y, t: state.t + h })
    }

    fn sample(&self, state: &State) -> TrajectorySample {
        let y = &state.y;
        let g = self.geometry(y);
        let v = y[3];
        TrajectorySample {
            t: state.t,
            s_m: y[4],
            pos: PlanarVector::new(y[0], y[1]),
            v_m: v,
            phi_m: wrap_angle(y[2]),
            r: g.r,
            q: wrap_angle(g.q),
            theta_m: wrap_angle(y[2] - g.q),
            q_dot: g.q_prime * v,
            q_prime: g.q_prime,
            k_m: g.k,
            a_m: g.k * v * v,
        }
    }

    fn command(&self, state: &State) -> (f64, f64) {
        let g = self.geometry(&state.y);
        (g.k_cmd, g.limit)
    }

    fn speed_exhausted(&self, state: &State) -> bool {
        state.y[3] - self.drag * self.dt <= 0.0
    }
}

/// Time-domain PPN run: `x' = v cos(phi)`, `y' = v sin(phi)`,
/// `phi' = N q_dot` (clamped when saturated), `v' = -drag`.
pub fn simulate_time_domain(cfg: &SimConfig) -> Result<SimOutcome> {
    cfg.validate()?;
    let start = cfg.initial_cartesian()?;
    let sys = TimeDomain {
        target: cfg.target_pos,
        nav_gain: cfg.gain.nav_gain,
        drag: cfg.speed.drag_decel,
        dt: cfg.time_step,
        min_range: cfg.kill_radius / 10.0,
        saturation: cfg.saturation,
        start: State {
            y: [start.pos_m.x, start.pos_m.y, start.phi_m, start.v_m, 0.0],
            t: 0.0,
        },
    };
    run(cfg, &sys)
}
