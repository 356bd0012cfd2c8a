use super::{Point2, GEOM_EPS};
use crate::{Error, Result};

/// Signed shoelace area; positive for counter-clockwise rings.
pub(crate) fn signed_area(vertices: &[Point2]) -> f64 {
    let n = vertices.len();
    if n < 3 {
        return 0.0;
    }
    // Shift to the first vertex to limit cancellation far from the origin.
    let o = vertices[0];
    let mut twice = 0.0;
    for i in 1..n - 1 {
        twice += (vertices[i] - o).cross(vertices[i + 1] - o);
    }
    0.5 * twice
}

/// Shoelace area of a polygon given by its vertex ring.
///
/// Fails with [`Error::InvalidGeometry`] for fewer than three vertices or a ring
/// with zero (or negative) signed area.
pub fn polygon_area(vertices: &[Point2]) -> Result<f64> {
    if vertices.len() < 3 {
        return Err(Error::InvalidGeometry(format!("polygon needs at least 3 vertices, got {}", vertices.len())));
    }
    let area = signed_area(vertices);
    if !(area > 0.0) {
        return Err(Error::InvalidGeometry(format!("polygon has non-positive area {area}")));
    }
    Ok(area)
}

/// A convex polygon with counter-clockwise vertex order.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvexPolygon {
    vertices: Vec<Point2>,
}

impl ConvexPolygon {
    /// Validates the ring and stores it counter-clockwise (clockwise input is
    /// reversed). Rejects non-finite coordinates, fewer than three vertices, zero
    /// area and reflex corners beyond the geometric tolerance.
    pub fn new(mut vertices: Vec<Point2>) -> Result<Self> {
        if vertices.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidGeometry("non-finite vertex".into()));
        }
        if vertices.len() < 3 {
            return Err(Error::InvalidGeometry(format!("polygon needs at least 3 vertices, got {}", vertices.len())));
        }
        if signed_area(&vertices) < 0.0 {
            vertices.reverse();
        }
        let area = polygon_area(&vertices)?;
        let scale = bbox_diagonal(&vertices);
        if area <= GEOM_EPS * scale * scale {
            return Err(Error::InvalidGeometry(format!("polygon area {area} is degenerate")));
        }
        let n = vertices.len();
        for i in 0..n {
            let a = vertices[i];
            let b = vertices[(i + 1) % n];
            let c = vertices[(i + 2) % n];
            let turn = (b - a).cross(c - b);
            if turn < -GEOM_EPS * scale * scale {
                return Err(Error::InvalidGeometry(format!("polygon is not convex at vertex {}", (i + 1) % n)));
            }
        }
        Ok(Self { vertices })
    }

    /// Builds from a ring already known to be convex and counter-clockwise, e.g.
    /// the output of half-plane clipping.
    pub(crate) fn from_ccw_unchecked(vertices: Vec<Point2>) -> Self {
        debug_assert!(vertices.len() >= 3);
        Self { vertices }
    }

    /// Axis-aligned rectangle `[min.x, max.x] × [min.y, max.y]`.
    pub fn rectangle(min: Point2, max: Point2) -> Result<Self> {
        Self::new(vec![min, Point2::new(max.x, min.y), max, Point2::new(min.x, max.y)])
    }

    /// The square `[0, side]²`.
    pub fn square(side: f64) -> Result<Self> {
        Self::rectangle(Point2::ORIGIN, Point2::new(side, side))
    }

    /// Regular `n`-gon with the given circumradius, first vertex on the +x axis.
    pub fn regular(n: usize, center: Point2, circumradius: f64) -> Result<Self> {
        let vertices = (0..n)
            .map(|k| {
                let theta = std::f64::consts::TAU * k as f64 / n as f64;
                center + Point2::from_angle(theta) * circumradius
            })
            .collect();
        Self::new(vertices)
    }

    pub fn vertices(&self) -> &[Point2] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn area(&self) -> f64 {
        signed_area(&self.vertices)
    }

    pub fn centroid(&self) -> Point2 {
        let o = self.vertices[0];
        let mut acc = Point2::ORIGIN;
        let mut twice_area = 0.0;
        for w in self.vertices[1..].windows(2) {
            let (a, b) = (w[0] - o, w[1] - o);
            let cr = a.cross(b);
            twice_area += cr;
            acc += (a + b) * cr;
        }
        o + acc * (1.0 / (3.0 * twice_area))
    }

    /// `(min, max)` corners of the bounding box.
    pub fn bbox(&self) -> (Point2, Point2) {
        bbox(&self.vertices)
    }

    /// Length of the bounding-box diagonal; the characteristic scale used for
    /// tolerances.
    pub fn scale(&self) -> f64 {
        bbox_diagonal(&self.vertices)
    }

    /// Containment with an absolute slack `tol` (points up to `tol` outside an
    /// edge line count as inside).
    pub fn contains(&self, p: Point2, tol: f64) -> bool {
        let n = self.vertices.len();
        (0..n).all(|i| {
            let a = self.vertices[i];
            let b = self.vertices[(i + 1) % n];
            let e = b - a;
            // signed distance of p to the left of a→b
            e.cross(p - a) >= -tol * e.norm()
        })
    }

    /// Largest distance from `p` to a vertex (the farthest point of a convex
    /// polygon is always a vertex).
    pub fn max_distance_from(&self, p: Point2) -> f64 {
        self.vertices.iter().map(|v| v.distance_squared(p)).fold(0.0, f64::max).sqrt()
    }

    /// Keeps the part `{ q : normal · q ≤ offset }`. Returns `None` when the
    /// remainder has no area.
    pub fn clip_halfplane(&self, normal: Point2, offset: f64) -> Option<ConvexPolygon> {
        clip_ring(&self.vertices, normal, offset).map(Self::from_ccw_unchecked)
    }

    /// Polygon scaled about the origin by `s > 0`.
    pub fn scaled(&self, s: f64) -> ConvexPolygon {
        Self::from_ccw_unchecked(self.vertices.iter().map(|&v| v * s).collect())
    }

    /// Inner parallel polygon at distance `d ≥ 0`, or `None` if it vanishes.
    pub fn inset(&self, d: f64) -> Option<ConvexPolygon> {
        let n = self.vertices.len();
        let mut ring = self.vertices.clone();
        for i in 0..n {
            let a = self.vertices[i];
            let b = self.vertices[(i + 1) % n];
            let e = b - a;
            let len = e.norm();
            // outward normal of a CCW edge
            let normal = Point2::new(e.y / len, -e.x / len);
            ring = clip_ring(&ring, normal, normal.dot(a) - d)?;
        }
        Some(Self::from_ccw_unchecked(ring))
    }

    /// `Some((min, max))` when the polygon is an axis-aligned rectangle.
    pub fn as_axis_aligned_rectangle(&self) -> Option<(Point2, Point2)> {
        if self.vertices.len() != 4 {
            return None;
        }
        let (min, max) = self.bbox();
        let tol = GEOM_EPS * self.scale();
        let on_corner = |v: &Point2| {
            ((v.x - min.x).abs() <= tol || (v.x - max.x).abs() <= tol)
                && ((v.y - min.y).abs() <= tol || (v.y - max.y).abs() <= tol)
        };
        if self.vertices.iter().all(on_corner) {
            Some((min, max))
        } else {
            None
        }
    }
}

fn bbox(vertices: &[Point2]) -> (Point2, Point2) {
    let mut min = Point2::new(f64::INFINITY, f64::INFINITY);
    let mut max = Point2::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
    for v in vertices {
        min.x = min.x.min(v.x);
        min.y = min.y.min(v.y);
        max.x = max.x.max(v.x);
        max.y = max.y.max(v.y);
    }
    (min, max)
}

fn bbox_diagonal(vertices: &[Point2]) -> f64 {
    let (min, max) = bbox(vertices);
    (max - min).norm()
}

/// Sutherland–Hodgman clip of a convex CCW ring against `normal · q ≤ offset`.
pub(crate) fn clip_ring(ring: &[Point2], normal: Point2, offset: f64) -> Option<Vec<Point2>> {
    let n = ring.len();
    let mut out = Vec::with_capacity(n + 1);
    let mut all_inside = true;
    for i in 0..n {
        let s = ring[i];
        let e = ring[(i + 1) % n];
        let ds = normal.dot(s) - offset;
        let de = normal.dot(e) - offset;
        let s_in = ds <= 0.0;
        let e_in = de <= 0.0;
        all_inside &= s_in;
        if s_in != e_in {
            let t = ds / (ds - de);
            out.push(s + (e - s) * t);
        }
        if e_in {
            out.push(e);
        }
    }
    if all_inside {
        return Some(ring.to_vec());
    }
    dedup_ring(&mut out, bbox_diagonal(ring) * 1e-13);
    if out.len() < 3 || signed_area(&out) <= 0.0 {
        return None;
    }
    Some(out)
}

fn dedup_ring(ring: &mut Vec<Point2>, tol: f64) {
    let tol2 = tol * tol;
    ring.dedup_by(|b, a| a.distance_squared(*b) <= tol2);
    while ring.len() > 1 && ring[0].distance_squared(ring[ring.len() - 1]) <= tol2 {
        ring.pop();
    }
}

/// A convex compact region with its cached area.
#[derive(Debug, Clone, PartialEq)]
pub struct Environment {
    boundary: ConvexPolygon,
    area: f64,
}

impl Environment {
    pub fn new(boundary: ConvexPolygon) -> Self {
        let area = boundary.area();
        Self { boundary, area }
    }

    /// The default environment: the square `[0, side]²`.
    pub fn square(side: f64) -> Result<Self> {
        if !(side > 0.0 && side.is_finite()) {
            return Err(Error::InvalidParameter(format!("square side must be positive, got {side}")));
        }
        Ok(Self::new(ConvexPolygon::square(side)?))
    }

    pub fn unit_square() -> Self {
        Self::square(1.0).expect("unit square is valid")
    }

    pub fn boundary(&self) -> &ConvexPolygon {
        &self.boundary
    }

    pub fn area(&self) -> f64 {
        self.area
    }

    /// Characteristic length √A.
    pub fn length_scale(&self) -> f64 {
        self.area.sqrt()
    }

    pub fn contains(&self, p: Point2) -> bool {
        self.boundary.contains(p, GEOM_EPS * self.length_scale())
    }

    pub fn centroid(&self) -> Point2 {
        self.boundary.centroid()
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self::new(self.boundary.scaled(s))
    }
}
