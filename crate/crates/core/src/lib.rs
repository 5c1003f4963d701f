//! Local digital estimators for the specific intrinsic volumes of stationary
//! Boolean models with ball grains, built on 2×2×2 configuration counts.
//!
//! The pipeline is:
//!
//! * [`lattice`] classifies the 256 occupancy patterns of a lattice cube into
//!   the 22 motion-equivalence classes and builds the inclusion–exclusion
//!   matrix `M`.
//! * [`geometry`] computes convex hulls of cube-vertex subsets and their
//!   intrinsic volumes, intrinsic power volume and support-function integrals.
//! * [`expansion`] assembles the per-class expansion rows `P`, the matrix
//!   `Q = M P`, the basis `v(a)` and the Miles targets `b_q`.
//! * [`weights`] checks and solves `w D Q = b_q` and reads/writes weight files.
//! * [`sim`] samples Boolean models and provides Monte-Carlo probability oracles.
//! * [`engine`] digitises realizations, counts configurations with a
//!   bit-parallel kernel and runs convergence experiments.
//!
//! Geometry and expansion code is generic over [`Scalar`] (`f32`/`f64`); the
//! aliases below fix the double-precision instantiation used by the simulator.

pub mod engine;
pub mod error;
pub mod expansion;
pub mod geometry;
pub mod lattice;
pub mod rng;
pub mod scalar;
pub mod sim;
pub mod weights;

pub use error::{Error, Result};
pub use scalar::Scalar;

pub type Real = f64;
pub type Tables = expansion::ExpansionTables<f64>;
pub type Model = expansion::BallModel<f64>;
pub type Weights = weights::WeightVector<f64>;
pub type Polytope = geometry::SmallPolytope;
