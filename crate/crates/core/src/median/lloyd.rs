use rand::Rng;
use rayon::prelude::*;

use super::{hm_from_cells, honeycomb_placement, weiszfeld_median};
use crate::geometry::voronoi::{validate_generators, voronoi_cells};
use crate::geometry::{first_moment, Environment, Point2, PointGrid, GEOM_EPS};
use crate::rng::{derive_seed, stream_rng};
use crate::{Error, Result};

/// A local minimizer of `H_m` found by Lloyd/Weiszfeld alternation.
#[derive(Debug, Clone, PartialEq)]
pub struct MedianSolution {
    pub points: Vec<Point2>,
    /// `H_m(points, env)`.
    pub value: f64,
    pub iterations: usize,
    pub converged: bool,
    /// `H_m` before the first and after every iteration; non-increasing.
    pub history: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LloydOptions {
    pub max_iter: usize,
    /// Stop once the relative decrease of `H_m` in one iteration falls below this.
    pub tol: f64,
    /// Weiszfeld iterations per cell and outer iteration.
    pub inner_max_iter: usize,
}

impl Default for LloydOptions {
    fn default() -> Self {
        Self { max_iter: 200, tol: 1e-6, inner_max_iter: 100 }
    }
}

/// Lloyd descent on `H_m` from a seeded, jittered honeycomb start.
///
/// The start is [`honeycomb_placement`] with every coordinate perturbed
/// uniformly by up to `0.1·√(A/m)`.
pub fn lloyd_median_descent(
    m: usize,
    env: &Environment,
    seed: u64,
    max_iter: usize,
    tol: f64,
) -> Result<MedianSolution> {
    if m == 0 {
        return Err(Error::InvalidParameter("m must be at least 1".into()));
    }
    let start = honeycomb_placement(m, env)?;
    let jitter = 0.1 * (env.area() / m as f64).sqrt();
    let mut rng = stream_rng(derive_seed(seed, &[m as u64]), 0);
    let init = start
        .points
        .iter()
        .map(|&p| {
            let q = p + Point2::new(rng.random_range(-jitter..=jitter), rng.random_range(-jitter..=jitter));
            if env.contains(q) {
                q
            } else {
                p
            }
        })
        .collect();
    lloyd_from(init, env, seed, LloydOptions { max_iter, tol, ..LloydOptions::default() })
}

/// Lloyd descent from explicit generators.
///
/// Each iteration partitions the environment, moves every generator to its
/// cell's Fermat–Weber point (accepting the move only when the cell's first
/// moment does not grow) and re-partitions. Both half-steps can only lower
/// `H_m`, so the recorded values are non-increasing.
pub fn lloyd_from(
    mut points: Vec<Point2>,
    env: &Environment,
    seed: u64,
    options: LloydOptions,
) -> Result<MedianSolution> {
    let scale = env.length_scale();
    let grid = validate_generators(&points, env)?;
    let mut cells = voronoi_cells(&grid, env)?;
    let mut value = hm_from_cells(&points, &cells, env);
    let mut history = vec![value];
    let inner_tol = 1e-9 * (env.area() / points.len() as f64).sqrt();
    let mut rng = stream_rng(derive_seed(seed, &[points.len() as u64, 0x11]), 1);

    let mut converged = false;
    let mut iterations = 0;
    while iterations < options.max_iter {
        iterations += 1;
        let mut moved: Vec<Point2> = cells
            .par_iter()
            .zip(points.par_iter())
            .map(|(cell, &p)| {
                let w = weiszfeld_median(cell, p, options.inner_max_iter, inner_tol);
                if env.contains(w.point) && first_moment(cell, w.point) <= first_moment(cell, p) {
                    w.point
                } else {
                    p
                }
            })
            .collect();
        separate_collisions(&mut moved, env, scale, &mut rng);

        let next_grid = PointGrid::new(&moved);
        let next_cells = voronoi_cells(&next_grid, env)?;
        let next_value = hm_from_cells(&moved, &next_cells, env);
        if next_value > value {
            // only reachable through round-off or a collision jitter
            log::debug!("lloyd: iteration {iterations} would raise H_m from {value} to {next_value}; stopping");
            converged = true;
            break;
        }
        let decrease = (value - next_value) / value;
        points = moved;
        cells = next_cells;
        value = next_value;
        history.push(value);
        if decrease < options.tol {
            converged = true;
            break;
        }
    }
    Ok(MedianSolution { points, value, iterations, converged, history })
}

/// Re-separates generators that collapsed onto each other with a jitter of
/// `1e-6·√A`.
#[allow(clippy::needless_range_loop)]
fn separate_collisions<R: Rng>(points: &mut [Point2], env: &Environment, scale: f64, rng: &mut R) {
    let min_sep = GEOM_EPS * scale;
    let grid = PointGrid::new(points);
    for i in 0..points.len() {
        let Some((j, d)) = grid.nearest_other(points[i], i) else {
            return;
        };
        if d < min_sep && i > j {
            log::warn!("lloyd: generators {j} and {i} collapsed; jittering {i}");
            let amp = 1e-6 * scale;
            loop {
                let q = points[i] + Point2::new(rng.random_range(-amp..=amp), rng.random_range(-amp..=amp));
                if env.contains(q) {
                    points[i] = q;
                    break;
                }
            }
        }
    }
}
