//! Construction and verification of one-parameter semigroup actions.
//!
//! The crate builds concrete time actions whose maps are not invertible,
//! checks the semigroup axioms on sampling grids, reduces non-autonomous
//! ODEs to autonomous ones one dimension up, and tests whether smooth,
//! possibly non-invertible maps carry PDE solutions to solutions.
//!
//! All numeric code is generic over [`Scalar`] (`f32` or `f64`); the `*64`
//! aliases below fix the double-precision instantiation.

// `!(x > 0.0)` style comparisons are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod catalog;
pub mod enforcing;
pub mod error;
pub mod evolution_pde;
pub mod gls;
pub mod numeric;
pub mod reduction;
pub mod scalar;
pub mod semisym;
pub mod symbolic;
pub mod verify;

pub use error::{Error, Result};
pub use scalar::Scalar;
pub use symbolic::{parse_expr, Expr, SmoothMap};
pub use verify::{Axis, GridSummary, SamplingGrid, Tracker, VerificationReport, Witness};

/// Default working precision.
pub type Real = f64;
pub type TimeAction64 = gls::TimeAction<f64>;
pub type EvolutionOp64 = reduction::EvolutionOp<f64>;
pub type OdeSystem64 = reduction::OdeSystem<f64>;
pub type Trajectory64 = reduction::Trajectory<f64>;
