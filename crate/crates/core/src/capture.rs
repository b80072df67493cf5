//! Capture regions of PPN under a lateral-acceleration limit.
//!
//! The unsaturated PPN trajectory never needs more curvature than its peak
//! `k_max(r0, theta_m0, N)`, so a missile whose curvature capability is
//! `alpha_s` keeps the PPN guarantee exactly when `k_max <= alpha_s`. With
//! `c = r0 alpha_s / N` this holds for
//!
//! - `|theta_m0| <= asin(c)` in the forward hemisphere, and
//! - `|theta_m0| >= 180 deg - asin(c^(N-1))` in the rear hemisphere,
//!
//! and for every `|theta_m0| < 180 deg` once `c >= 1`.

use std::f64::consts::PI;
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::closed_form::{max_curvature, ClosedFormInputs};
use crate::error::{GuidanceError, Result};
use crate::kinematics::{GuidanceParams, PlanarVector, SpeedProfile};
use crate::sim::{par_map, simulate_arclength_domain, SimConfig, Termination};

/// Curvature capability `alpha_s = alpha / v_max^2` of a missile with lateral
/// acceleration limit `alpha` at its highest speed `v_max`.
pub fn alpha_s_of(alpha: f64, v_max: f64) -> Result<f64> {
    if !(alpha > 0.0) {
        return Err(GuidanceError::invalid("alpha", format!("must be positive, got {alpha}")));
    }
    if !(v_max > 0.0 && v_max.is_finite()) {
        return Err(GuidanceError::invalid("v_max", format!("must be positive, got {v_max}")));
    }
    Ok(alpha / (v_max * v_max))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ManeuverLimit {
    /// Lateral acceleration limit, m/s^2.
    pub alpha: f64,
    /// Highest speed flown, m/s. With monotone drag this is the launch speed.
    pub v_max: f64,
    /// Curvature limit, 1/m.
    pub alpha_s: f64,
}

impl ManeuverLimit {
    pub fn new(alpha: f64, v_max: f64) -> Result<Self> {
        Ok(Self {
            alpha,
            v_max,
            alpha_s: alpha_s_of(alpha, v_max)?,
        })
    }
}

/// How the guidance command is clipped in a saturated run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SaturationPolicy {
    /// `|k_m| <= alpha_s`.
    Curvature { alpha_s: f64 },
    /// `|a_m| <= alpha`, i.e. `|k_m| <= alpha / v^2` at the current speed.
    Acceleration { alpha: f64 },
}

impl SaturationPolicy {
    pub fn validate(&self) -> Result<()> {
        let (name, v) = match *self {
            SaturationPolicy::Curvature { alpha_s } => ("alpha_s", alpha_s),
            SaturationPolicy::Acceleration { alpha } => ("alpha", alpha),
        };
        if v > 0.0 {
            Ok(())
        } else {
            Err(GuidanceError::invalid(name, format!("must be positive, got {v}")))
        }
    }

    pub fn curvature_limit(&self, v: f64) -> f64 {
        match *self {
            SaturationPolicy::Curvature { alpha_s } => alpha_s,
            SaturationPolicy::Acceleration { alpha } => {
                if v > 0.0 {
                    alpha / (v * v)
                } else {
                    f64::INFINITY
                }
            }
        }
    }

    pub fn clamp(&self, k_cmd: f64, v: f64) -> f64 {
        let limit = self.curvature_limit(v);
        k_cmd.clamp(-limit, limit)
    }
}

/// Closed interval of `|theta_m0|`, radians.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AngleInterval {
    pub lo: f64,
    pub hi: f64,
}

impl AngleInterval {
    fn contains(&self, x: f64) -> bool {
        x >= self.lo && x <= self.hi
    }
}

/// Admissible initial leading angles, as a set of `|theta_m0|` in `[0, pi)`.
///
/// The rear interval is stored with `hi = pi`; `pi` itself is never
/// admissible (the missile recedes along the LOS).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CaptureRegion {
    pub intervals: Vec<AngleInterval>,
    pub full: bool,
}

impl CaptureRegion {
    pub fn full() -> Self {
        Self {
            intervals: vec![AngleInterval { lo: 0.0, hi: PI }],
            full: true,
        }
    }

    pub fn contains(&self, theta_m0: f64) -> bool {
        let x = theta_m0.abs();
        x < PI && self.intervals.iter().any(|i| i.contains(x))
    }

    pub fn is_subset_of(&self, other: &CaptureRegion) -> bool {
        self.intervals
            .iter()
            .all(|i| other.intervals.iter().any(|o| o.lo <= i.lo && i.hi <= o.hi))
    }

    /// Upper edge of the forward interval (`None` for a full region).
    pub fn forward_boundary(&self) -> Option<f64> {
        (!self.full).then(|| self.intervals.first().map(|i| i.hi)).flatten()
    }

    /// Lower edge of the rear interval (`None` for a full region).
    pub fn rear_boundary(&self) -> Option<f64> {
        (!self.full).then(|| self.intervals.last().map(|i| i.lo)).flatten()
    }
}

/// `c = r0 alpha_s / N`; the limit never binds once `c >= 1`.
pub fn capture_ratio(r0: f64, limit: &ManeuverLimit, gain: GuidanceParams) -> f64 {
    r0 * limit.alpha_s / gain.nav_gain
}

fn require_gain_above_two(gain: GuidanceParams) -> Result<()> {
    if gain.nav_gain > 2.0 {
        Ok(())
    } else {
        Err(GuidanceError::invalid(
            "nav_gain",
            format!("capture analysis needs N > 2, got {}", gain.nav_gain),
        ))
    }
}

pub fn capture_region_analytic(r0: f64, limit: &ManeuverLimit, gain: GuidanceParams) -> Result<CaptureRegion> {
    require_gain_above_two(gain)?;
    if !(r0 > 0.0) {
        return Err(GuidanceError::invalid("r0", format!("must be positive, got {r0}")));
    }
    let c = capture_ratio(r0, limit, gain);
    if c >= 1.0 {
        return Ok(CaptureRegion::full());
    }
    let forward = c.asin();
    let rear = PI - c.powf(gain.nav_gain - 1.0).asin();
    Ok(CaptureRegion {
        intervals: vec![
            AngleInterval { lo: 0.0, hi: forward },
            AngleInterval { lo: rear, hi: PI },
        ],
        full: false,
    })
}

/// Smallest initial range with an unrestricted capture region: `N / alpha_s`.
pub fn full_capture_min_range(gain: GuidanceParams, limit: &ManeuverLimit) -> Result<f64> {
    require_gain_above_two(gain)?;
    Ok(gain.nav_gain / limit.alpha_s)
}

/// Highest launch speed with an unrestricted capture region: `sqrt(r0 alpha / N)`.
pub fn max_initial_speed_for_full_capture(r0: f64, gain: GuidanceParams, alpha: f64) -> Result<f64> {
    require_gain_above_two(gain)?;
    if !(r0 > 0.0 && alpha > 0.0) {
        return Err(GuidanceError::invalid("r0/alpha", "must be positive"));
    }
    Ok((r0 * alpha / gain.nav_gain).sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Classification {
    /// Intercepted without the command ever reaching the limit.
    Captured,
    /// Intercepted, but only with the command clipped.
    SaturatedCapture,
    /// Missed or diverged.
    Escaped,
    /// Ran out of steps or failed numerically.
    Inconclusive,
}

impl Classification {
    pub fn as_str(self) -> &'static str {
        match self {
            Classification::Captured => "captured",
            Classification::SaturatedCapture => "saturated-capture",
            Classification::Escaped => "escaped",
            Classification::Inconclusive => "inconclusive",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepPoint {
    pub theta_m0: f64,
    pub classification: Classification,
    /// Peak unclamped curvature command over the run.
    pub limiting_k: f64,
    pub analytic_inside: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepOptions {
    pub arc_step: f64,
    pub kill_radius: f64,
    pub max_steps: usize,
    pub workers: Option<usize>,
}

impl Default for SweepOptions {
    fn default() -> Self {
        Self {
            arc_step: 1.0,
            kill_radius: 1.0,
            max_steps: 20_000_000,
            workers: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalCapture {
    pub points: Vec<SweepPoint>,
    /// Midpoints between neighbouring sweep angles where the `Captured`
    /// classification flips, radians, ascending.
    pub boundaries: Vec<f64>,
    pub inconclusive: usize,
}

/// Sweeps `theta_m0` over `(0, 180)` deg with saturated arc-length runs and
/// classifies each start.
///
/// The missile starts `r0` from the target along the reference LOS angle
/// (-120 deg). A point counts as captured only when it intercepts without
/// the clamp ever engaging, which is the condition the analytic region
/// describes; intercepts that needed clipping are reported separately.
pub fn capture_region_empirical(
    r0: f64,
    limit: &ManeuverLimit,
    gain: GuidanceParams,
    resolution_deg: f64,
    options: &SweepOptions,
) -> Result<EmpiricalCapture> {
    if !(resolution_deg > 0.0 && resolution_deg < 180.0) {
        return Err(GuidanceError::invalid(
            "resolution_deg",
            format!("must lie in (0, 180), got {resolution_deg}"),
        ));
    }
    let analytic = capture_region_analytic(r0, limit, gain)?;
    let angles: Vec<f64> = (1..)
        .map(|i| i as f64 * resolution_deg)
        .take_while(|&deg| deg < 180.0)
        .map(f64::to_radians)
        .collect();
    let base = SimConfig {
        missile_pos: PlanarVector::from_polar(-r0, -120f64.to_radians()),
        target_pos: PlanarVector::default(),
        theta_m0: 0.0,
        speed: SpeedProfile::constant(limit.v_max)?,
        gain,
        kill_radius: options.kill_radius,
        time_step: crate::sim::DEFAULT_TIME_STEP,
        arc_step: options.arc_step,
        max_steps: options.max_steps,
        log_every: 10_000,
        saturation: Some(SaturationPolicy::Curvature { alpha_s: limit.alpha_s }),
    };
    base.validate()?;

    let points = par_map(&angles, options.workers, |&theta_m0| {
        let cfg = SimConfig { theta_m0, ..base };
        let (classification, limiting_k) = match simulate_arclength_domain(&cfg) {
            Ok(out) => {
                let s = out.summary;
                let class = match s.terminated {
                    Termination::Intercept if s.saturated => Classification::SaturatedCapture,
                    Termination::Intercept => Classification::Captured,
                    Termination::Missed | Termination::Diverged => Classification::Escaped,
                    Termination::Horizon | Termination::SpeedExhausted => Classification::Inconclusive,
                };
                (class, s.max_commanded_k)
            }
            Err(_) => (Classification::Inconclusive, f64::NAN),
        };
        SweepPoint {
            theta_m0,
            classification,
            limiting_k,
            analytic_inside: analytic.contains(theta_m0),
        }
    });

    let boundaries = points
        .windows(2)
        .filter(|w| {
            (w[0].classification == Classification::Captured) != (w[1].classification == Classification::Captured)
        })
        .map(|w| 0.5 * (w[0].theta_m0 + w[1].theta_m0))
        .collect();
    let inconclusive = points
        .iter()
        .filter(|p| p.classification == Classification::Inconclusive)
        .count();
    Ok(EmpiricalCapture {
        points,
        boundaries,
        inconclusive,
    })
}

/// Peak unsaturated curvature for a start angle, from the closed form.
pub fn analytic_limiting_k(r0: f64, theta_m0: f64, gain: GuidanceParams) -> Result<f64> {
    max_curvature(&ClosedFormInputs::new(r0, theta_m0, 0.0, gain)?)
}

pub fn write_region_csv<W: Write>(out: W, sweep: &EmpiricalCapture) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["theta_deg", "classification", "limiting_k", "analytic_inside"])?;
    for p in &sweep.points {
        w.write_record([
            p.theta_m0.to_degrees().to_string(),
            p.classification.as_str().to_string(),
            p.limiting_k.to_string(),
            p.analytic_inside.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Debug, Serialize)]
struct BoundaryRecord {
    r0: f64,
    nav_gain: f64,
    alpha: f64,
    v_max: f64,
    alpha_s: f64,
    capture_ratio: f64,
    full: bool,
    analytic_forward_deg: f64,
    analytic_rear_deg: f64,
    empirical_boundaries_deg: String,
    inconclusive: usize,
}

/// Flat `key = value` summary of an analytic region and, optionally, a sweep.
pub fn boundary_record(
    r0: f64,
    limit: &ManeuverLimit,
    gain: GuidanceParams,
    region: &CaptureRegion,
    sweep: Option<&EmpiricalCapture>,
) -> String {
    let deg = |x: Option<f64>| x.map_or(f64::NAN, f64::to_degrees);
    let rec = BoundaryRecord {
        r0,
        nav_gain: gain.nav_gain,
        alpha: limit.alpha,
        v_max: limit.v_max,
        alpha_s: limit.alpha_s,
        capture_ratio: capture_ratio(r0, limit, gain),
        full: region.full,
        analytic_forward_deg: deg(region.forward_boundary()),
        analytic_rear_deg: deg(region.rear_boundary()),
        empirical_boundaries_deg: sweep
            .map(|s| {
                s.boundaries
                    .iter()
                    .map(|b| b.to_degrees().to_string())
                    .collect::<Vec<_>>()
                    .join(";")
            })
            .unwrap_or_default(),
        inconclusive: sweep.map_or(0, |s| s.inconclusive),
    };
    toml::to_string(&rec).unwrap_or_default()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn gain(n: f64) -> GuidanceParams {
        GuidanceParams::new(n).unwrap()
    }

    #[test]
    fn alpha_s_examples() {
        assert_relative_eq!(alpha_s_of(30.0, 500.0).unwrap(), 1.2e-4, max_relative = 1e-15);
        assert!(alpha_s_of(0.0, 500.0).is_err());
        let a = alpha_s_of(30.0, 250.0).unwrap();
        assert_relative_eq!(alpha_s_of(30.0, 500.0).unwrap(), a / 4.0, max_relative = 1e-15);
    }

    #[test]
    fn analytic_region_examples() {
        let limit = ManeuverLimit::new(30.0, 500.0).unwrap();
        let region = capture_region_analytic(20000.0, &limit, gain(3.0)).unwrap();
        assert!(!region.full);
        assert_relative_eq!(region.forward_boundary().unwrap().to_degrees(), 53.130_102_354_155_98, max_relative = 1e-12);
        assert_relative_eq!(region.rear_boundary().unwrap().to_degrees(), 140.208_180_500_442_77, max_relative = 1e-12);
        assert!(region.contains(-0.5));
        assert!(!region.contains(PI / 2.0));
        assert!(region.contains(-170f64.to_radians()));
        assert!(!region.contains(PI));

        let generous = ManeuverLimit::new(1000.0, 500.0).unwrap();
        assert!(capture_region_analytic(20000.0, &generous, gain(3.0)).unwrap().full);

        let tight = ManeuverLimit::new(1e-3, 500.0).unwrap();
        let r = capture_region_analytic(20000.0, &tight, gain(3.0)).unwrap();
        assert!(r.forward_boundary().unwrap() < 1e-3);
        assert!(r.rear_boundary().unwrap() > PI - 1e-6);
    }

    #[test]
    fn full_capture_threshold() {
        let limit = ManeuverLimit::new(30.0, 500.0).unwrap();
        let r_min = full_capture_min_range(gain(3.0), &limit).unwrap();
        assert_relative_eq!(r_min, 25000.0, max_relative = 1e-12);
        assert!(capture_region_analytic(r_min, &limit, gain(3.0)).unwrap().full);
        assert!(!capture_region_analytic(0.999 * r_min, &limit, gain(3.0)).unwrap().full);
    }

    #[test]
    fn max_speed_examples() {
        let v = max_initial_speed_for_full_capture(20000.0, gain(3.0), 30.0).unwrap();
        assert_relative_eq!(v, 447.213_595_499_958, max_relative = 1e-12);
        let limit = ManeuverLimit::new(30.0, v).unwrap();
        assert_relative_eq!(full_capture_min_range(gain(3.0), &limit).unwrap(), 20000.0, max_relative = 1e-12);
        assert!(max_initial_speed_for_full_capture(20000.0, gain(3.0), 1e12).unwrap() > 1e6);
    }

    #[test]
    fn gains_at_or_below_two_are_rejected() {
        let limit = ManeuverLimit::new(30.0, 500.0).unwrap();
        assert!(capture_region_analytic(20000.0, &limit, gain(2.0)).is_err());
        assert!(full_capture_min_range(gain(1.5), &limit).is_err());
    }

    #[test]
    fn region_edge_is_where_peak_curvature_meets_the_limit() {
        let limit = ManeuverLimit::new(30.0, 500.0).unwrap();
        let region = capture_region_analytic(20000.0, &limit, gain(3.0)).unwrap();
        for edge in [region.forward_boundary().unwrap(), region.rear_boundary().unwrap()] {
            let k = analytic_limiting_k(20000.0, edge, gain(3.0)).unwrap();
            assert_relative_eq!(k, limit.alpha_s, max_relative = 1e-12);
        }
    }

    #[test]
    fn clamp_policies() {
        let c = SaturationPolicy::Curvature { alpha_s: 1e-4 };
        assert_eq!(c.clamp(5e-4, 100.0), 1e-4);
        assert_eq!(c.clamp(-5e-4, 100.0), -1e-4);
        let a = SaturationPolicy::Acceleration { alpha: 25.0 };
        assert_eq!(a.curvature_limit(500.0), 1e-4);
        assert_eq!(a.clamp(2e-5, 500.0), 2e-5);
        assert!(SaturationPolicy::Curvature { alpha_s: 0.0 }.validate().is_err());
    }
}
