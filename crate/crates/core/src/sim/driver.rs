use crate::error::Result;

use super::terminal::{coast, refine_terminal, sample_at_fix, TerminalFix};
use super::{summarize, SimConfig, SimOutcome, Termination, Trajectory, TrajectorySample};

/// One integrator plugged into the shared run loop.
pub(super) trait Integrand {
    type State: Copy;

    fn initial(&self) -> Result<Self::State>;
    fn advance(&self, state: &Self::State) -> Result<Self::State>;
    fn sample(&self, state: &Self::State) -> TrajectorySample;
    /// Unclamped PPN curvature command and the saturation limit in force.
    fn command(&self, state: &Self::State) -> (f64, f64);
    fn speed_exhausted(&self, _state: &Self::State) -> bool {
        false
    }
}

struct Log {
    samples: Vec<TrajectorySample>,
    prev_logged: bool,
}

impl Log {
    fn push(&mut self, s: TrajectorySample) {
        self.samples.push(s);
    }

    fn ensure(&mut self, s: TrajectorySample) {
        if !self.prev_logged {
            self.samples.push(s);
            self.prev_logged = true;
        }
    }
}

fn fallback_fix(a: &TrajectorySample, b: &TrajectorySample) -> TerminalFix {
    let best = if b.r < a.r { b } else { a };
    TerminalFix {
        miss_distance: best.r,
        t: best.t,
        s: best.s_m,
        pos: best.pos,
        tau: if b.r < a.r { 1.0 } else { 0.0 },
    }
}

pub(super) fn run<I: Integrand>(cfg: &SimConfig, sys: &I) -> Result<SimOutcome> {
    cfg.validate()?;
    let bound = cfg.divergence_range()?;
    let target = cfg.target_pos;

    let mut state = sys.initial()?;
    let mut prev = sys.sample(&state);
    let mut log = Log {
        samples: vec![prev],
        prev_logged: true,
    };
    let (cmd, limit) = sys.command(&state);
    let mut max_cmd = cmd.abs();
    let mut saturated = cmd.abs() > limit;
    let mut terminated = Termination::Horizon;

    for step in 1..=cfg.max_steps {
        if sys.speed_exhausted(&state) {
            terminated = Termination::SpeedExhausted;
            break;
        }
        let next = sys.advance(&state)?;
        let cur = sys.sample(&next);
        let (cmd, limit) = sys.command(&next);
        max_cmd = max_cmd.max(cmd.abs());
        saturated |= cmd.abs() > limit;

        if prev.is_closing() && !cur.is_closing() {
            let fix = refine_terminal(&prev, &cur, target).unwrap_or_else(|_| fallback_fix(&prev, &cur));
            log.ensure(prev);
            log.push(sample_at_fix(&fix, &prev, &cur, target));
            terminated = if fix.miss_distance <= cfg.kill_radius {
                Termination::Intercept
            } else {
                Termination::Missed
            };
            break;
        }
        if cur.r <= cfg.kill_radius {
            let ghost = coast(&cur, 2.0 * cur.r, target);
            let fix = refine_terminal(&cur, &ghost, target).unwrap_or_else(|_| fallback_fix(&cur, &cur));
            log.push(cur);
            log.push(sample_at_fix(&fix, &cur, &ghost, target));
            terminated = Termination::Intercept;
            break;
        }
        if cur.r > bound {
            log.push(cur);
            terminated = Termination::Diverged;
            break;
        }

        state = next;
        prev = cur;
        log.prev_logged = step % cfg.log_every == 0;
        if log.prev_logged {
            log.push(cur);
        }
    }
    if matches!(terminated, Termination::Horizon | Termination::SpeedExhausted) {
        log.ensure(prev);
    }

    let trajectory = Trajectory { samples: log.samples };
    let mut summary = summarize(&trajectory, terminated);
    summary.max_commanded_k = max_cmd;
    summary.saturated = saturated;
    Ok(SimOutcome { trajectory, summary })
}
