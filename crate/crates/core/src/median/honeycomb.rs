use crate::geometry::{ConvexPolygon, Environment, Point2};
use crate::{Error, Result};

const SQRT3: f64 = 1.732_050_807_568_877_2;

/// Points of a regular hexagonal lattice inside the environment.
#[derive(Debug, Clone, PartialEq)]
pub struct HoneycombPlacement {
    pub points: Vec<Point2>,
    /// Nearest-neighbor spacing of the lattice.
    pub pitch: f64,
    /// `false` when no pitch produced exactly `m` lattice points and the
    /// nearest larger lattice was trimmed.
    pub exact: bool,
}

/// Places `m` points on a hexagonal lattice whose Voronoi hexagons have area
/// close to `A/m`.
///
/// The lattice is anchored at the environment centroid (either on a lattice
/// point or on the center of a lattice triangle) and only points at least half
/// a pitch inside the boundary are kept, so every boundary cell is at least a
/// half hexagon. The pitch is scanned around the ideal value
/// `√(2A/(√3 m))` for a lattice with exactly `m` kept points. Whole lattice
/// rows enter and leave together, so for many `m` no pitch hits the count;
/// then the smallest surplus lattice is trimmed by dropping the points
/// farthest from the centroid and the result is flagged inexact.
pub fn honeycomb_placement(m: usize, env: &Environment) -> Result<HoneycombPlacement> {
    if m == 0 {
        return Err(Error::InvalidParameter("m must be at least 1".into()));
    }
    let centroid = env.centroid();
    let ideal = (2.0 * env.area() / (SQRT3 * m as f64)).sqrt();
    if m == 1 {
        return Ok(HoneycombPlacement { points: vec![centroid], pitch: ideal, exact: true });
    }

    const STEPS: usize = 1200;
    const LOW: f64 = 0.5;
    const HIGH: f64 = 1.3;
    // (surplus, |log pitch ratio|, pitch, anchor)
    let mut best: Option<(usize, f64, f64, Anchor)> = None;
    for step in 0..=STEPS {
        let ratio = LOW * (HIGH / LOW).powf(step as f64 / STEPS as f64);
        let pitch = ideal * ratio;
        for anchor in [Anchor::OnPoint, Anchor::OnTriangle] {
            let count = lattice_points(env.boundary(), centroid, pitch, anchor).len();
            if count < m {
                continue;
            }
            let key = (count - m, ratio.ln().abs());
            let better = match best {
                None => true,
                Some((s, d, _, _)) => key.0 < s || (key.0 == s && key.1 < d),
            };
            if better {
                best = Some((key.0, key.1, pitch, anchor));
            }
        }
    }
    let (surplus, _, pitch, anchor) =
        best.ok_or_else(|| Error::Internal(format!("no honeycomb lattice holds {m} points")))?;
    let mut points = lattice_points(env.boundary(), centroid, pitch, anchor);
    if surplus > 0 {
        log::debug!("honeycomb: trimming {surplus} surplus points for m = {m}");
        let mut order: Vec<usize> = (0..points.len()).collect();
        order.sort_by(|&a, &b| {
            let da = points[a].distance_squared(centroid);
            let db = points[b].distance_squared(centroid);
            db.total_cmp(&da).then(a.cmp(&b))
        });
        let mut drop = vec![false; points.len()];
        for &i in &order[..surplus] {
            drop[i] = true;
        }
        let mut keep = drop.iter().map(|d| !d);
        points.retain(|_| keep.next().unwrap());
    }
    Ok(HoneycombPlacement { points, pitch, exact: surplus == 0 })
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Anchor {
    OnPoint,
    OnTriangle,
}

fn lattice_points(boundary: &ConvexPolygon, centroid: Point2, pitch: f64, anchor: Anchor) -> Vec<Point2> {
    let Some(region) = boundary.inset(0.5 * pitch) else {
        return Vec::new();
    };
    let row = 0.5 * SQRT3 * pitch;
    let origin = match anchor {
        Anchor::OnPoint => centroid,
        // centroid of the lattice triangle (0,0), (pitch,0), (pitch/2,row)
        Anchor::OnTriangle => centroid - Point2::new(0.5 * pitch, row / 3.0),
    };
    let (min, max) = region.bbox();
    let tol = 1e-12 * boundary.scale();
    let j_lo = ((min.y - origin.y) / row).floor() as i64 - 1;
    let j_hi = ((max.y - origin.y) / row).ceil() as i64 + 1;
    let mut out = Vec::new();
    for j in j_lo..=j_hi {
        let y = origin.y + j as f64 * row;
        let shift = if j.rem_euclid(2) == 1 { 0.5 * pitch } else { 0.0 };
        let i_lo = ((min.x - origin.x - shift) / pitch).floor() as i64 - 1;
        let i_hi = ((max.x - origin.x - shift) / pitch).ceil() as i64 + 1;
        for i in i_lo..=i_hi {
            let p = Point2::new(origin.x + shift + i as f64 * pitch, y);
            if region.contains(p, tol) {
                out.push(p);
            }
        }
    }
    out
}
