//! Planar pure proportional navigation (PPN) against a stationary target.
//!
//! The engagement is written in the missile's arc-length domain, where the
//! guidance command is a path curvature and the missile speed drops out of
//! the dynamics entirely. On top of that formulation this crate provides:
//!
//! - [`kinematics`]: state types, conversions and the raw rate equations,
//! - [`closed_form`]: analytic profiles and performance metrics,
//! - [`sim`]: a time-domain simulator (with drag) and an arc-length simulator,
//! - [`capture`]: acceleration-limited capture regions, analytic and swept,
//! - [`config`] / [`tables`] / [`report`]: the pieces driving the `ppn` CLI.

// `!(x > 0.0)` is used on purpose so that NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod capture;
pub mod closed_form;
pub mod config;
pub mod error;
pub mod kinematics;
pub mod report;
pub mod sim;
pub mod tables;

pub use error::{GuidanceError, Result};
pub use kinematics::{
    wrap_angle, CartesianState, GeneralRelativeState, GuidanceParams, PlanarVector, PolarState,
    SpeedProfile,
};
