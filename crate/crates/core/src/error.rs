use thiserror::Error;

use crate::sim::Termination;

pub type Result<T, E = GuidanceError> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GuidanceError {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("missile and target positions coincide")]
    DegenerateGeometry,

    #[error("radius {r} m outside the reachable range (0, {r_max}] m")]
    OutOfRange { r: f64, r_max: f64 },

    #[error("leading angle {theta} rad is not reachable from {theta0} rad")]
    BranchMismatch { theta: f64, theta0: f64 },

    #[error("|theta_m0| = 180 deg: the missile recedes along the line of sight forever")]
    Divergent,

    #[error("quadrature did not converge: estimated relative error {achieved:e} > {requested:e}")]
    Quadrature { achieved: f64, requested: f64 },

    #[error("distance {path} m exceeds the {limit} m reachable before the speed reaches zero")]
    InsufficientEnergy { path: f64, limit: f64 },

    #[error("non-finite value produced during integration")]
    NonFinite,

    #[error("closest approach is not bracketed by the supplied samples")]
    InvalidBracket,

    #[error("run ended without intercept: {0}")]
    NotIntercepted(Termination),
}

impl GuidanceError {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Self::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }

    /// True for failures of the numerics rather than of the inputs.
    pub fn is_numeric(&self) -> bool {
        matches!(
            self,
            Self::Quadrature { .. } | Self::NonFinite | Self::InvalidBracket | Self::NotIntercepted(_)
        )
    }
}
