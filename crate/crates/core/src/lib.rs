//! Canonical coordinate charts for the planetary (1+n)-body problem.
//!
//! Every chart is a pair of explicit maps between heliocentric Cartesian
//! variables and its own coordinates, and the [`verify`] module checks
//! canonicity, integrals and symmetries numerically.

// negated comparisons reject NaN on purpose; index loops run over parallel arrays
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod error;
pub mod geom;
pub mod kepler;
pub mod node_reductions;
pub mod phase_space;
pub mod regular_charts;
pub mod verify;

pub use error::{Error, Result};
