//! Convex planar geometry: environments, Voronoi partitions and exact distance
//! moments over convex polygons.

mod grid;
mod moments;
mod point;
mod polygon;
mod sampling;
pub(crate) mod voronoi;

pub use grid::PointGrid;
pub use moments::{first_moment, first_moment_of_ring, inverse_distance_moments, InverseDistanceMoments};
pub use point::Point2;
pub use polygon::{polygon_area, ConvexPolygon, Environment};
pub use sampling::sample_uniform;
pub use voronoi::voronoi_partition;

/// Absolute geometric tolerance for unit-scale inputs. Callers working at other
/// scales multiply by the characteristic length of the environment.
pub const GEOM_EPS: f64 = 1e-9;
