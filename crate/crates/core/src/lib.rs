//! Eisenhart lifts of one-dimensional Newtonian systems: lifted metrics,
//! curvature diagnostics, geodesic flows and linearizing coordinate maps.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod dynamics;
pub mod error;
pub mod geometry;
pub mod lifts;
pub mod linearize;
pub mod numerics;
pub mod potentials;
pub mod suite;

pub use error::{Error, Result};
pub use geometry::{CurvatureBundle, Flatness, FlatnessReport, LineMetric, MetricChart, Tensor};
pub use potentials::{eval_potential, force, Family, Interval, Jet, PotentialSpec, Profile, Term};
pub use dynamics::{IntegratorConfig, PhaseState, Trajectory};
pub use lifts::{build_lift, LiftKind, LiftedSystem};
