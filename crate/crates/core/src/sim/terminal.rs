//! Closest-approach refinement between two logged samples.

use crate::error::{GuidanceError, Result};
use crate::kinematics::{wrap_angle, PlanarVector};

use super::TrajectorySample;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TerminalFix {
    pub miss_distance: f64,
    pub t: f64,
    pub s: f64,
    pub pos: PlanarVector,
    /// Position of the fix within the bracket, in `[0, 1]`.
    pub tau: f64,
}

struct Hermite {
    p0: PlanarVector,
    p1: PlanarVector,
    m0: PlanarVector,
    m1: PlanarVector,
}

impl Hermite {
    fn new(a: &TrajectorySample, b: &TrajectorySample) -> Self {
        let ds = b.s_m - a.s_m;
        Self {
            p0: a.pos,
            p1: b.pos,
            m0: PlanarVector::from_polar(ds, a.phi_m),
            m1: PlanarVector::from_polar(ds, b.phi_m),
        }
    }

    fn at(&self, t: f64) -> PlanarVector {
        let t2 = t * t;
        let t3 = t2 * t;
        self.p0 * (2.0 * t3 - 3.0 * t2 + 1.0)
            + self.m0 * (t3 - 2.0 * t2 + t)
            + self.p1 * (-2.0 * t3 + 3.0 * t2)
            + self.m1 * (t3 - t2)
    }

    fn tangent(&self, t: f64) -> PlanarVector {
        let t2 = t * t;
        self.p0 * (6.0 * t2 - 6.0 * t)
            + self.m0 * (3.0 * t2 - 4.0 * t + 1.0)
            + self.p1 * (-6.0 * t2 + 6.0 * t)
            + self.m1 * (3.0 * t2 - 2.0 * t)
    }
}

/// Locates the minimum range between samples `a` and `b`.
///
/// The path between them is a cubic Hermite curve built from the sample
/// positions and headings; the stationary point of the range is found by
/// bisection on its derivative. Fails with [`GuidanceError::InvalidBracket`]
/// unless the range is non-increasing at `a` and non-decreasing at `b`.
pub fn refine_terminal(a: &TrajectorySample, b: &TrajectorySample, target: PlanarVector) -> Result<TerminalFix> {
    let fix_at = |tau: f64, pos: PlanarVector| TerminalFix {
        miss_distance: (pos - target).norm(),
        t: a.t + tau * (b.t - a.t),
        s: a.s_m + tau * (b.s_m - a.s_m),
        pos,
        tau,
    };
    if a.pos == target {
        return Ok(fix_at(0.0, a.pos));
    }
    if b.pos == target {
        return Ok(fix_at(1.0, b.pos));
    }
    if !(b.s_m > a.s_m) {
        return Err(GuidanceError::InvalidBracket);
    }
    let curve = Hermite::new(a, b);
    let slope = |tau: f64| (curve.at(tau) - target).dot(curve.tangent(tau));
    let (mut lo, mut hi) = (0.0, 1.0);
    if slope(lo) > 0.0 || slope(hi) < 0.0 {
        return Err(GuidanceError::InvalidBracket);
    }
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if slope(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let tau = 0.5 * (lo + hi);
    Ok(fix_at(tau, curve.at(tau)))
}

/// Straight-line continuation of `a` by `distance` metres, for bracketing an
/// intercept that the integrator stopped short of.
pub(crate) fn coast(a: &TrajectorySample, distance: f64, target: PlanarVector) -> TrajectorySample {
    let pos = a.pos + PlanarVector::from_polar(distance, a.phi_m);
    let los = target - pos;
    let q = los.angle();
    TrajectorySample {
        t: a.t + if a.v_m > 0.0 { distance / a.v_m } else { 0.0 },
        s_m: a.s_m + distance,
        pos,
        r: los.norm(),
        q,
        theta_m: wrap_angle(a.phi_m - q),
        ..*a
    }
}

/// The sample at a refined fix, taking rates from the nearer endpoint.
pub(crate) fn sample_at_fix(
    fix: &TerminalFix,
    a: &TrajectorySample,
    b: &TrajectorySample,
    target: PlanarVector,
) -> TrajectorySample {
    let base = if fix.tau <= 0.5 { a } else { b };
    let los = target - fix.pos;
    // The LOS direction is ill-conditioned once the fix is far inside the base sample's range.
    let (q, theta_m) = if fix.miss_distance > 1e-3 * base.r {
        let q = los.angle();
        (q, wrap_angle(base.phi_m - q))
    } else {
        (base.q, base.theta_m)
    };
    TrajectorySample {
        t: fix.t,
        s_m: fix.s,
        pos: fix.pos,
        r: fix.miss_distance,
        q,
        theta_m,
        ..*base
    }
}
