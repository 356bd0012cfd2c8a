//! Continuous m-median: the mean-distance functional `H_m`, Lloyd/Weiszfeld
//! descent, the honeycomb placement and the classical sandwich bounds.

mod honeycomb;
mod lloyd;
mod weiszfeld;

pub use honeycomb::{honeycomb_placement, HoneycombPlacement};
pub use lloyd::{lloyd_from, lloyd_median_descent, LloydOptions, MedianSolution};
pub use weiszfeld::{weiszfeld_median, WeberPoint};

use crate::geometry::{first_moment, voronoi_partition, Environment, Point2};
use crate::{Error, Result};

/// First moment of a unit-area regular hexagon about its center.
pub const C_HEX: f64 = 0.377;

/// Shape constant of the upper sandwich bound for a square environment.
pub const SQUARE_WEBER_CONSTANT: f64 = 0.38;

/// Expected distance from a uniform point of `env` to the nearest of `points`:
/// `(1/A) Σ_i ∫_{V_i} ‖p_i − q‖ dq`, integrated exactly cell by cell.
pub fn evaluate_hm(points: &[Point2], env: &Environment) -> Result<f64> {
    let cells = voronoi_partition(points, env)?;
    Ok(hm_from_cells(points, &cells, env))
}

pub(crate) fn hm_from_cells(points: &[Point2], cells: &[crate::ConvexPolygon], env: &Environment) -> f64 {
    let total: f64 = cells.iter().zip(points).map(|(c, &p)| first_moment(c, p)).sum();
    total / env.area()
}

/// Sandwich on the optimal m-median value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeberBounds {
    /// `(2/3)·√(A/(π m))`, valid for every convex environment.
    pub lower: f64,
    /// `0.38·√(A/m)`, the square's shape constant.
    pub upper: f64,
}

pub fn weber_bounds(m: usize, env: &Environment) -> Result<WeberBounds> {
    weber_bounds_for_area(m, env.area())
}

pub fn weber_bounds_for_area(m: usize, area: f64) -> Result<WeberBounds> {
    if m == 0 {
        return Err(Error::InvalidParameter("m must be at least 1".into()));
    }
    let m = m as f64;
    Ok(WeberBounds {
        lower: 2.0 / 3.0 * (area / (std::f64::consts::PI * m)).sqrt(),
        upper: SQUARE_WEBER_CONSTANT * (area / m).sqrt(),
    })
}
