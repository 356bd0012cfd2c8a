//! Closed-form distance integrals over convex polygons.
//!
//! Every integral is split into the fan of triangles `(p, a, b)` spanned by the
//! reference point `p` and each edge `a→b`. In the frame of one edge, with `h`
//! the distance from `p` to the edge line and `t` the coordinate along it, the
//! radial integrals have elementary antiderivatives in `t`:
//!
//! * `∫ r dA`        → `(t·h·√(h²+t²) + h³·asinh(t/h)) / 6`
//! * `∫ 1/r dA`      → `h·asinh(t/h)`
//! * `∫ (q−p)/r dA`  → `(h/2)·(h·asinh(t/h)·n + √(h²+t²)·e)`
//!
//! where `n` is the unit normal from `p` towards the edge and `e` the edge
//! direction. Triangles with `p` on the wrong side of an edge enter with a
//! negative sign, so the formulas hold for `p` anywhere in the plane.

use super::{ConvexPolygon, Point2};

struct EdgeFrame {
    /// Signed distance, positive when `p` lies left of `a→b`.
    h: f64,
    t_a: f64,
    t_b: f64,
    e: Point2,
}

fn edge_frame(a: Point2, b: Point2, p: Point2) -> Option<EdgeFrame> {
    let d = b - a;
    let len = d.norm();
    if len == 0.0 {
        return None;
    }
    let e = d * (1.0 / len);
    let (pa, pb) = (a - p, b - p);
    let h = pa.cross(pb) / len;
    if h == 0.0 {
        return None;
    }
    Some(EdgeFrame { h, t_a: pa.dot(e), t_b: pb.dot(e), e })
}

/// `∫_poly ‖q − p‖ dq`.
pub fn first_moment(poly: &ConvexPolygon, p: Point2) -> f64 {
    first_moment_of_ring(poly.vertices(), p)
}

/// [`first_moment`] on a raw counter-clockwise vertex ring. Degenerate rings
/// (fewer than three vertices or zero area) integrate to zero.
pub fn first_moment_of_ring(ring: &[Point2], p: Point2) -> f64 {
    let n = ring.len();
    if n < 3 || super::polygon::signed_area(ring) == 0.0 {
        return 0.0;
    }
    let mut total = 0.0;
    for i in 0..n {
        let Some(f) = edge_frame(ring[i], ring[(i + 1) % n], p) else {
            continue;
        };
        let h = f.h.abs();
        let g = |t: f64| t * h * h.hypot(t) + h * h * h * (t / h).asinh();
        total += f.h.signum() * (g(f.t_b) - g(f.t_a));
    }
    total / 6.0
}

/// Inverse-distance moments of a region about `p`; the ingredients of a
/// continuous Weiszfeld step `p ← p + offset / mass`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InverseDistanceMoments {
    /// `∫ 1/‖q − p‖ dq`
    pub mass: f64,
    /// `∫ (q − p)/‖q − p‖ dq`, the negated gradient of [`first_moment`] in `p`.
    pub offset: Point2,
}

pub fn inverse_distance_moments(poly: &ConvexPolygon, p: Point2) -> InverseDistanceMoments {
    let ring = poly.vertices();
    let n = ring.len();
    let mut mass = 0.0;
    let mut offset = Point2::ORIGIN;
    for i in 0..n {
        let Some(f) = edge_frame(ring[i], ring[(i + 1) % n], p) else {
            continue;
        };
        let h = f.h.abs();
        let s = f.h.signum();
        // unit normal from p towards the edge line
        let normal = if f.h > 0.0 { Point2::new(f.e.y, -f.e.x) } else { Point2::new(-f.e.y, f.e.x) };
        let asinh_diff = (f.t_b / h).asinh() - (f.t_a / h).asinh();
        mass += s * h * asinh_diff;
        let along = h.hypot(f.t_b) - h.hypot(f.t_a);
        offset += (normal * (h * asinh_diff) + f.e * along) * (0.5 * h * s);
    }
    InverseDistanceMoments { mass, offset }
}
