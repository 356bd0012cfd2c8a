use rand::Rng;

use super::{Environment, Point2};

/// Draws a point uniformly from the environment by rejection from its bounding
/// box. Axis-aligned rectangles accept every draw.
pub fn sample_uniform<R: Rng + ?Sized>(env: &Environment, rng: &mut R) -> Point2 {
    let (min, max) = env.boundary().bbox();
    let span = max - min;
    loop {
        let q = Point2::new(min.x + span.x * rng.random::<f64>(), min.y + span.y * rng.random::<f64>());
        if env.boundary().contains(q, 0.0) {
            return q;
        }
    }
}
