use crate::geometry::{inverse_distance_moments, ConvexPolygon, Point2};

/// Result of a continuous Fermat–Weber solve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeberPoint {
    pub point: Point2,
    pub iterations: usize,
    pub converged: bool,
}

/// Minimizes `∫_region ‖p − q‖ dq` by the continuous Weiszfeld fixed point
/// `p ← ∫ q/‖p−q‖ dq / ∫ 1/‖p−q‖ dq`, with both integrals in closed form.
///
/// The map never increases the objective, so on non-convergence the last
/// iterate is also the best one. An `init` outside the region is replaced by
/// the centroid.
pub fn weiszfeld_median(region: &ConvexPolygon, init: Point2, max_iter: usize, tol: f64) -> WeberPoint {
    let tol_in = 1e-12 * region.scale();
    let mut p = if region.contains(init, tol_in) { init } else { region.centroid() };
    for it in 1..=max_iter {
        let mom = inverse_distance_moments(region, p);
        if !(mom.mass > 0.0) {
            return WeberPoint { point: p, iterations: it, converged: false };
        }
        let step = mom.offset * (1.0 / mom.mass);
        p += step;
        if step.norm() < tol {
            return WeberPoint { point: p, iterations: it, converged: true };
        }
    }
    WeberPoint { point: p, iterations: max_iter, converged: false }
}
