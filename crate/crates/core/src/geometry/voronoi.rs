use std::cell::RefCell;

use rayon::prelude::*;

use super::{ConvexPolygon, Environment, Point2, PointGrid, GEOM_EPS};
use crate::{Error, Result};

/// Voronoi partition of `env` generated by `points`, one cell per point in
/// input order.
///
/// Each cell is the environment clipped against the perpendicular bisectors
/// of its neighbors. Neighbors are taken ring by ring from a bucket grid and
/// the search stops once every unvisited generator is farther than twice the
/// current cell radius, since such bisectors cannot cut the cell.
pub fn voronoi_partition(points: &[Point2], env: &Environment) -> Result<Vec<ConvexPolygon>> {
    let grid = validate_generators(points, env)?;
    voronoi_cells(&grid, env)
}

/// Checks the generator preconditions and returns the search grid.
pub(crate) fn validate_generators(points: &[Point2], env: &Environment) -> Result<PointGrid> {
    if points.is_empty() {
        return Err(Error::DegenerateInput("no generators".into()));
    }
    if let Some((i, p)) = points.iter().enumerate().find(|(_, p)| !p.is_finite() || !env.contains(**p)) {
        return Err(Error::DegenerateInput(format!("generator {i} at {p:?} is outside the environment")));
    }
    let grid = PointGrid::new(points);
    let min_sep = GEOM_EPS * env.length_scale();
    for (i, &p) in points.iter().enumerate() {
        if let Some((j, d)) = grid.nearest_other(p, i) {
            if d < min_sep {
                return Err(Error::DegenerateInput(format!(
                    "generators {} and {} are closer than {min_sep:e}",
                    i.min(j),
                    i.max(j)
                )));
            }
        }
    }
    Ok(grid)
}

pub(crate) fn voronoi_cells(grid: &PointGrid, env: &Environment) -> Result<Vec<ConvexPolygon>> {
    (0..grid.len()).into_par_iter().map(|i| voronoi_cell(grid, env, i)).collect()
}

fn voronoi_cell(grid: &PointGrid, env: &Environment, i: usize) -> Result<ConvexPolygon> {
    let points = grid.points();
    let p = points[i];
    let cell = RefCell::new(Some(env.boundary().clone()));
    grid.visit_rings_around(
        i,
        |j| {
            if j == i {
                return;
            }
            let mut slot = cell.borrow_mut();
            if let Some(current) = slot.as_ref() {
                let normal = points[j] - p;
                let offset = normal.dot(p.midpoint(points[j]));
                *slot = current.clip_halfplane(normal, offset);
            }
        },
        |clearance| match cell.borrow().as_ref() {
            Some(c) => clearance > 2.0 * c.max_distance_from(p),
            None => true,
        },
    );
    cell.into_inner().ok_or_else(|| Error::DegenerateInput(format!("Voronoi cell of generator {i} is empty")))
}
