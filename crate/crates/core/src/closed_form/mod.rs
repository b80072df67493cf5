//! Analytic PPN solution against a stationary target.
//!
//! Every profile is written as a function of the range `r`. Trajectories that
//! start with `|theta_m0| > 90 deg` first open the range up to a turning point
//! `r_max` and then close it, so they pass each `r` in `[r0, r_max]` twice;
//! [`Branch`] selects which pass is meant.

pub mod quadrature;

use std::f64::consts::{FRAC_PI_2, PI};

use crate::error::{GuidanceError, Result};
use crate::kinematics::{wrap_angle, GuidanceParams, SpeedProfile};

pub use quadrature::QuadratureResult;

/// Default relative tolerance for the flight-path quadrature.
pub const PATH_REL_TOL: f64 = 1e-10;
const MAX_INTERVALS: usize = 4000;
const RADIUS_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClosedFormInputs {
    pub r0: f64,
    pub theta_m0: f64,
    pub q0: f64,
    pub gain: GuidanceParams,
}

impl ClosedFormInputs {
    pub fn new(r0: f64, theta_m0: f64, q0: f64, gain: GuidanceParams) -> Result<Self> {
        if !(r0 > 0.0 && r0.is_finite()) {
            return Err(GuidanceError::invalid("r0", format!("must be positive, got {r0}")));
        }
        if !(theta_m0.abs() <= PI) {
            return Err(GuidanceError::invalid(
                "theta_m0",
                format!("must lie in [-pi, pi], got {theta_m0}"),
            ));
        }
        GuidanceParams::new(gain.nav_gain)?;
        Ok(Self {
            r0,
            theta_m0,
            q0,
            gain,
        })
    }

    pub fn n(&self) -> f64 {
        self.gain.nav_gain
    }

    /// Initial LOS rate in the arc-length domain.
    pub fn q_prime0(&self) -> f64 {
        -self.theta_m0.sin() / self.r0
    }

    fn sin_abs0(&self) -> f64 {
        self.theta_m0.abs().sin()
    }

    /// Whether the range opens before it closes.
    pub fn has_outbound(&self) -> bool {
        self.theta_m0.abs() > FRAC_PI_2
    }

    fn ratio(&self, r: f64) -> f64 {
        r / self.r0
    }

    fn check_radius(&self, r: f64) -> Result<f64> {
        let r_max = max_relative_distance(self)?;
        if !(r > 0.0 && r <= r_max * (1.0 + RADIUS_SLACK)) {
            return Err(GuidanceError::OutOfRange { r, r_max });
        }
        Ok(r_max)
    }

    fn check_branch(&self, r: f64, branch: Branch) -> Result<()> {
        let r_max = self.check_radius(r)?;
        if branch == Branch::Outbound && !(self.has_outbound() && r >= self.r0 * (1.0 - RADIUS_SLACK)) {
            return Err(GuidanceError::OutOfRange { r, r_max });
        }
        Ok(())
    }
}

/// Which pass through a given range is meant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Branch {
    /// Range still opening: `r' > 0`, `|theta_m| > 90 deg`.
    Outbound,
    /// Range closing toward intercept.
    Inbound,
}

impl Branch {
    pub fn as_str(self) -> &'static str {
        match self {
            Branch::Outbound => "outbound",
            Branch::Inbound => "inbound",
        }
    }
}

/// Every profile quantity at one range.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProfilePoint {
    pub r: f64,
    pub q_prime: f64,
    pub r_prime: f64,
    pub theta_m: f64,
    pub k_m: f64,
}

/// LOS rate `q' = q'_0 (r/r0)^(N-2)`.
pub fn los_rate_at(inputs: &ClosedFormInputs, r: f64) -> Result<f64> {
    inputs.check_radius(r)?;
    Ok(inputs.q_prime0() * inputs.ratio(r).powf(inputs.n() - 2.0))
}

/// Closing speed `r'` in the arc-length domain (dimensionless).
pub fn closing_speed_at(inputs: &ClosedFormInputs, r: f64, branch: Branch) -> Result<f64> {
    inputs.check_branch(r, branch)?;
    let s = inputs.sin_abs0() * inputs.ratio(r).powf(inputs.n() - 1.0);
    let magnitude = (1.0 - s * s).max(0.0).sqrt();
    Ok(match branch {
        Branch::Outbound => magnitude,
        Branch::Inbound => -magnitude,
    })
}

/// Leading angle, from `sin(theta_m) = sin(theta_m0) (r/r0)^(N-1)`.
pub fn leading_angle_at(inputs: &ClosedFormInputs, r: f64, branch: Branch) -> Result<f64> {
    inputs.check_branch(r, branch)?;
    let s = (inputs.sin_abs0() * inputs.ratio(r).powf(inputs.n() - 1.0)).min(1.0);
    let magnitude = match branch {
        Branch::Outbound => PI - s.asin(),
        Branch::Inbound => s.asin(),
    };
    Ok(magnitude.copysign(inputs.theta_m0))
}

/// Range at which the leading angle has decayed to `theta_m`.
pub fn radius_at_leading_angle(inputs: &ClosedFormInputs, theta_m: f64) -> Result<f64> {
    let mismatch = GuidanceError::BranchMismatch {
        theta: theta_m,
        theta0: inputs.theta_m0,
    };
    if theta_m == 0.0 {
        return Ok(0.0);
    }
    let sin0 = inputs.theta_m0.sin();
    let sin_t = theta_m.sin();
    let same_side = inputs.theta_m0 != 0.0 && theta_m.signum() == inputs.theta_m0.signum();
    if !same_side || theta_m.abs() > inputs.theta_m0.abs() || sin0 == 0.0 {
        return Err(mismatch);
    }
    Ok(inputs.r0 * (sin_t / sin0).powf(1.0 / (inputs.n() - 1.0)))
}

/// Guidance curvature `k_m = N q'`.
pub fn curvature_at(inputs: &ClosedFormInputs, r: f64) -> Result<f64> {
    Ok(inputs.n() * los_rate_at(inputs, r)?)
}

pub fn profile_at(inputs: &ClosedFormInputs, r: f64, branch: Branch) -> Result<ProfilePoint> {
    let q_prime = los_rate_at(inputs, r)?;
    Ok(ProfilePoint {
        r,
        q_prime,
        r_prime: closing_speed_at(inputs, r, branch)?,
        theta_m: leading_angle_at(inputs, r, branch)?,
        k_m: inputs.n() * q_prime,
    })
}

/// Samples the whole profile in flight order: the outbound pass (if any)
/// from `r0` up to `r_max`, then the inbound pass from `r_max` toward zero.
/// `count` points per pass; the inbound pass stops short of `r = 0`.
pub fn profile_samples(inputs: &ClosedFormInputs, count: usize) -> Result<Vec<(Branch, ProfilePoint)>> {
    let r_max = max_relative_distance(inputs)?;
    let count = count.max(2);
    let mut out = Vec::with_capacity(2 * count);
    if inputs.has_outbound() {
        for i in 0..count {
            let r = inputs.r0 + (r_max - inputs.r0) * i as f64 / (count - 1) as f64;
            out.push((Branch::Outbound, profile_at(inputs, r, Branch::Outbound)?));
        }
    }
    for i in 0..count {
        let r = r_max * (1.0 - i as f64 / count as f64);
        out.push((Branch::Inbound, profile_at(inputs, r, Branch::Inbound)?));
    }
    Ok(out)
}

/// Largest range over the engagement.
pub fn max_relative_distance(inputs: &ClosedFormInputs) -> Result<f64> {
    let abs0 = inputs.theta_m0.abs();
    if abs0 >= PI {
        return Err(GuidanceError::Divergent);
    }
    if abs0 >= FRAC_PI_2 {
        Ok(inputs.r0 * inputs.sin_abs0().powf(-1.0 / (inputs.n() - 1.0)))
    } else {
        Ok(inputs.r0)
    }
}

/// Peak guidance curvature magnitude; defined for `N > 2` only.
pub fn max_curvature(inputs: &ClosedFormInputs) -> Result<f64> {
    let n = inputs.n();
    if n <= 2.0 {
        return Err(GuidanceError::invalid(
            "nav_gain",
            format!("peak curvature needs N > 2, got {n}"),
        ));
    }
    let abs0 = inputs.theta_m0.abs();
    if abs0 >= PI {
        return Err(GuidanceError::Divergent);
    }
    let s = inputs.sin_abs0();
    Ok(if abs0 >= FRAC_PI_2 {
        n / inputs.r0 * s.powf(1.0 / (n - 1.0))
    } else {
        n / inputs.r0 * s
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvatureBound {
    pub value: f64,
    /// The curvature grows without bound toward intercept (`1 < N < 2`).
    pub unbounded: bool,
}

/// Peak curvature for any `N > 1`. For `N <= 2` the curvature does not
/// decay toward intercept, so the value at `cutoff_r` is reported instead.
pub fn curvature_bound(inputs: &ClosedFormInputs, cutoff_r: f64) -> Result<CurvatureBound> {
    if inputs.n() > 2.0 {
        return Ok(CurvatureBound {
            value: max_curvature(inputs)?,
            unbounded: false,
        });
    }
    Ok(CurvatureBound {
        value: curvature_at(inputs, cutoff_r)?.abs(),
        unbounded: inputs.n() < 2.0 && inputs.theta_m0 != 0.0,
    })
}

/// Total turn `|delta phi| = N |theta_m0| / (N - 1)`.
pub fn curvature_increment(inputs: &ClosedFormInputs) -> f64 {
    let n = inputs.n();
    n * inputs.theta_m0.abs() / (n - 1.0)
}

/// Arc length flown until intercept.
///
/// Uses the closed form at `N = 2` and [`flight_path_quadrature`] otherwise.
pub fn flight_path_length(inputs: &ClosedFormInputs) -> Result<f64> {
    let abs0 = inputs.theta_m0.abs();
    if abs0 >= PI {
        return Err(GuidanceError::Divergent);
    }
    if abs0 == 0.0 {
        return Ok(inputs.r0);
    }
    if inputs.n() == 2.0 {
        return Ok(inputs.r0 * abs0 / abs0.sin());
    }
    Ok(flight_path_quadrature(inputs, PATH_REL_TOL)?.value)
}

/// Flight path by quadrature of
/// `r0 / ((N-1) sin^(1/(N-1)) theta0) * int_0^theta0 sin^(-(N-2)/(N-1)) theta d theta`.
///
/// The integrand is singular at `theta = 0` for `N > 2`; the substitution
/// `theta = u^(N-1)` turns it into `(N-1) (theta / sin theta)^p`, which is
/// bounded on the whole range. The returned value and error are in metres.
pub fn flight_path_quadrature(inputs: &ClosedFormInputs, rel_tol: f64) -> Result<QuadratureResult> {
    let abs0 = inputs.theta_m0.abs();
    if abs0 >= PI {
        return Err(GuidanceError::Divergent);
    }
    if abs0 == 0.0 {
        return Ok(QuadratureResult {
            value: inputs.r0,
            abs_error: 0.0,
            intervals: 0,
            converged: true,
        });
    }
    let n = inputs.n();
    let e = n - 1.0;
    let p = (n - 2.0) / e;
    let integrand = |u: f64| {
        let theta = u.powf(e);
        let ratio = if theta < 1e-8 { 1.0 } else { theta / theta.sin() };
        e * ratio.powf(p)
    };
    let upper = abs0.powf(1.0 / e);
    let raw = quadrature::integrate(integrand, 0.0, upper, rel_tol, MAX_INTERVALS);
    if !raw.converged {
        return Err(GuidanceError::Quadrature {
            achieved: raw.rel_error(),
            requested: rel_tol,
        });
    }
    let scale = inputs.r0 / (e * inputs.sin_abs0().powf(1.0 / e));
    Ok(QuadratureResult {
        value: scale * raw.value,
        abs_error: scale * raw.abs_error,
        ..raw
    })
}

/// Terminal LOS angle (and flight-path angle, since `theta_m -> 0`):
/// `q_f = q0 - theta_m0 / (N - 1)`, wrapped.
pub fn terminal_impact_angle(inputs: &ClosedFormInputs) -> Result<f64> {
    if inputs.theta_m0.abs() >= PI {
        return Err(GuidanceError::Divergent);
    }
    Ok(wrap_angle(inputs.q0 - inputs.theta_m0 / (inputs.n() - 1.0)))
}

/// Time to fly `path` metres under `v(t) = v0 - a t`.
pub fn flight_time_under_constant_drag(path: f64, profile: &SpeedProfile) -> Result<f64> {
    if !(path >= 0.0) {
        return Err(GuidanceError::invalid("path", format!("must be non-negative, got {path}")));
    }
    let a = profile.drag_decel;
    if a == 0.0 {
        return Ok(path / profile.v0);
    }
    let limit = profile.max_path();
    if path > limit {
        return Err(GuidanceError::InsufficientEnergy { path, limit });
    }
    // Smaller root of v0 t - a t^2 / 2 = path, written without cancellation.
    let disc = (profile.v0 * profile.v0 - 2.0 * a * path).max(0.0);
    Ok(2.0 * path / (profile.v0 + disc.sqrt()))
}
