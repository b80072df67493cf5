//! TOML scenario files.
//!
//! Angles are written in degrees and converted once, when a scenario is
//! expanded into [`Case`]s. Every case is validated before any is returned.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::capture::{alpha_s_of, SaturationPolicy};
use crate::error::{GuidanceError, Result};
use crate::kinematics::{wrap_angle, GuidanceParams, PlanarVector, SpeedProfile};
use crate::sim::{self, Domain, SimConfig};

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{0}")]
    Parse(#[from] toml::de::Error),
    #[error("{key}: {source}")]
    Invalid { key: String, source: GuidanceError },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Engagement {
    pub missile_x: f64,
    pub missile_y: f64,
    pub target_x: f64,
    pub target_y: f64,
    /// Initial flight-path angle, deg; used when no leading angles are listed.
    pub phi_m0_deg: f64,
    pub speed: f64,
    pub drag: f64,
}

impl Default for Engagement {
    fn default() -> Self {
        let m = sim::reference_missile_position();
        Self {
            missile_x: m.x,
            missile_y: m.y,
            target_x: 0.0,
            target_y: 0.0,
            phi_m0_deg: 0.0,
            speed: 500.0,
            drag: 0.1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Cases {
    pub gains: Vec<f64>,
    /// Initial leading angles, deg. Absent means one case per gain from
    /// `phi_m0_deg`; an empty list means no cases.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub theta0_deg: Option<Vec<f64>>,
}

impl Default for Cases {
    fn default() -> Self {
        Self {
            gains: vec![3.0],
            theta0_deg: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DomainChoice {
    Time,
    Arclength,
    Both,
}

impl DomainChoice {
    pub fn domains(self) -> &'static [Domain] {
        match self {
            DomainChoice::Time => &[Domain::Time],
            DomainChoice::Arclength => &[Domain::ArcLength],
            DomainChoice::Both => &[Domain::Time, Domain::ArcLength],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Integrator {
    pub domain: DomainChoice,
    pub time_step: f64,
    pub arc_step: f64,
    pub kill_radius: f64,
    pub max_steps: usize,
    pub log_every: usize,
}

impl Default for Integrator {
    fn default() -> Self {
        Self {
            domain: DomainChoice::Time,
            time_step: sim::DEFAULT_TIME_STEP,
            arc_step: sim::DEFAULT_ARC_STEP,
            kill_radius: sim::DEFAULT_KILL_RADIUS,
            max_steps: sim::DEFAULT_MAX_STEPS,
            log_every: 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LimitMode {
    /// Lateral acceleration capped at `alpha`.
    Acceleration,
    /// Curvature capped at `alpha / v_max^2`.
    Curvature,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Limits {
    pub alpha: f64,
    #[serde(default = "Limits::default_mode")]
    pub mode: LimitMode,
    /// Speed the curvature cap is derived from; defaults to the initial speed.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub v_max: Option<f64>,
}

impl Limits {
    fn default_mode() -> LimitMode {
        LimitMode::Acceleration
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Output {
    pub dir: PathBuf,
}

impl Default for Output {
    fn default() -> Self {
        Self { dir: PathBuf::from("out") }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ScenarioConfig {
    pub engagement: Engagement,
    pub cases: Cases,
    pub integrator: Integrator,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub limits: Option<Limits>,
    pub output: Output,
}

/// One validated run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Case {
    pub nav_gain: f64,
    pub theta0_deg: f64,
    pub domain: Domain,
    pub sim: SimConfig,
}

impl Case {
    /// File stem shared by the trajectory and summary outputs.
    pub fn stem(&self) -> String {
        // Angles derived from a flight-path angle carry rounding noise.
        let theta = (self.theta0_deg * 1e6).round() / 1e6;
        format!("{}_n{}_theta{}", self.domain.as_str(), self.nav_gain, theta)
    }
}

fn at<T>(key: impl Into<String>, r: Result<T>) -> std::result::Result<T, ConfigError> {
    r.map_err(|source| ConfigError::Invalid { key: key.into(), source })
}

impl ScenarioConfig {
    pub fn parse(text: &str) -> std::result::Result<Self, ConfigError> {
        Ok(toml::from_str(text)?)
    }

    pub fn load(path: &Path) -> std::result::Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::parse(&text)
    }

    pub fn dump(&self) -> String {
        toml::to_string(self).expect("scenario serialises")
    }

    fn saturation(&self) -> std::result::Result<Option<SaturationPolicy>, ConfigError> {
        let Some(l) = &self.limits else { return Ok(None) };
        let policy = match l.mode {
            LimitMode::Acceleration => SaturationPolicy::Acceleration { alpha: l.alpha },
            LimitMode::Curvature => {
                let v = l.v_max.unwrap_or(self.engagement.speed);
                SaturationPolicy::Curvature {
                    alpha_s: at("limits", alpha_s_of(l.alpha, v))?,
                }
            }
        };
        at("limits.alpha", policy.validate())?;
        Ok(Some(policy))
    }

    /// Expands the scenario into validated runs, gain-major.
    pub fn cases(&self) -> std::result::Result<Vec<Case>, ConfigError> {
        let e = &self.engagement;
        let i = &self.integrator;
        let speed = at("engagement.speed", SpeedProfile::new(e.speed, e.drag))?;
        let saturation = self.saturation()?;
        let missile_pos = PlanarVector::new(e.missile_x, e.missile_y);
        let target_pos = PlanarVector::new(e.target_x, e.target_y);
        let q0 = (target_pos - missile_pos).angle();
        let angles = match &self.cases.theta0_deg {
            Some(list) => list.clone(),
            None => vec![wrap_angle(e.phi_m0_deg.to_radians() - q0).to_degrees()],
        };

        let mut out = Vec::new();
        for (gi, &n) in self.cases.gains.iter().enumerate() {
            let gain = at(format!("cases.gains[{gi}]"), GuidanceParams::new(n))?;
            for (ti, &deg) in angles.iter().enumerate() {
                for &domain in i.domain.domains() {
                    let sim = SimConfig {
                        missile_pos,
                        target_pos,
                        theta_m0: deg.to_radians(),
                        speed,
                        gain,
                        kill_radius: i.kill_radius,
                        time_step: i.time_step,
                        arc_step: i.arc_step,
                        max_steps: i.max_steps,
                        log_every: i.log_every,
                        saturation,
                    };
                    at(format!("cases.theta0_deg[{ti}] (N = {n})"), sim.validate())?;
                    out.push(Case {
                        nav_gain: n,
                        theta0_deg: deg,
                        domain,
                        sim,
                    });
                }
            }
        }
        Ok(out)
    }
}
