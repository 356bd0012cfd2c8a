//! Light-load coverage (dynamic traveling repairperson) policies for fleets of
//! double-integrator and differential-drive robots.
//!
//! The crate is organised bottom-up:
//!
//! * [`geometry`]: convex environments, Voronoi partitions, exact distance moments.
//! * [`median`]: the continuous m-median functional, Lloyd/Weiszfeld descent and
//!   the honeycomb placement.
//! * [`dynamics`]: travel-time primitives and reachable-set area formulas.
//! * [`policies`]: Median Stationing, Strip Loitering and Median Clustering.
//! * [`bounds`]: closed-form lower/upper bounds on the coverage cost.
//! * [`sim`]: Monte Carlo estimation, scaling sweeps and crossover search.

// `!(x > 0.0)` is used on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bounds;
pub mod dynamics;
mod error;
pub mod geometry;
pub mod median;
pub mod policies;
pub mod rng;
pub mod sim;

pub use dynamics::{DDParams, DIParams, RobotModel};
pub use error::{Error, Result};
pub use geometry::{ConvexPolygon, Environment, Point2};
pub use policies::{Policy, PolicyKind};
