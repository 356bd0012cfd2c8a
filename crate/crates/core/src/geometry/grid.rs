use super::Point2;

/// Uniform bucket grid over a point set, used for nearest-generator queries
/// and for bounding the neighbor search of Voronoi cells.
#[derive(Debug, Clone)]
pub struct PointGrid {
    points: Vec<Point2>,
    origin: Point2,
    cell: f64,
    nx: usize,
    ny: usize,
    /// CSR layout: indices of points in bucket `b` are
    /// `members[starts[b]..starts[b + 1]]`, in increasing index order.
    starts: Vec<usize>,
    members: Vec<usize>,
}

impl PointGrid {
    /// Builds a grid with roughly one point per bucket. `points` must be
    /// non-empty and finite.
    pub fn new(points: &[Point2]) -> Self {
        assert!(!points.is_empty(), "PointGrid needs at least one point");
        let mut min = points[0];
        let mut max = points[0];
        for p in points {
            min.x = min.x.min(p.x);
            min.y = min.y.min(p.y);
            max.x = max.x.max(p.x);
            max.y = max.y.max(p.y);
        }
        let w = (max.x - min.x).max(0.0);
        let h = (max.y - min.y).max(0.0);
        let n = points.len() as f64;
        let mut cell = ((w * h) / n).sqrt();
        // thin or degenerate boxes: fall back to splitting the long side
        cell = cell.max(w.max(h) / n);
        if !(cell > 0.0) {
            cell = 1.0;
        }
        let nx = ((w / cell).floor() as usize + 1).max(1);
        let ny = ((h / cell).floor() as usize + 1).max(1);

        let mut counts = vec![0usize; nx * ny + 1];
        let buckets: Vec<usize> = points
            .iter()
            .map(|&p| {
                let (ix, iy) = Self::locate(min, cell, nx, ny, p);
                iy * nx + ix
            })
            .collect();
        for &b in &buckets {
            counts[b + 1] += 1;
        }
        for i in 1..counts.len() {
            counts[i] += counts[i - 1];
        }
        let starts = counts.clone();
        let mut fill = counts;
        let mut members = vec![0usize; points.len()];
        for (i, &b) in buckets.iter().enumerate() {
            members[fill[b]] = i;
            fill[b] += 1;
        }
        Self { points: points.to_vec(), origin: min, cell, nx, ny, starts, members }
    }

    fn locate(origin: Point2, cell: f64, nx: usize, ny: usize, p: Point2) -> (usize, usize) {
        let fx = ((p.x - origin.x) / cell).floor();
        let fy = ((p.y - origin.y) / cell).floor();
        let ix = if fx.is_nan() || fx < 0.0 { 0 } else { (fx as usize).min(nx - 1) };
        let iy = if fy.is_nan() || fy < 0.0 { 0 } else { (fy as usize).min(ny - 1) };
        (ix, iy)
    }

    pub fn points(&self) -> &[Point2] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Calls `visit` with the indices of every point in the buckets at
    /// Chebyshev ring `r` around bucket `(cx, cy)`.
    fn for_ring(&self, cx: usize, cy: usize, r: usize, mut visit: impl FnMut(usize)) {
        let (cx, cy, r) = (cx as isize, cy as isize, r as isize);
        let (nx, ny) = (self.nx as isize, self.ny as isize);
        let mut bucket = |ix: isize, iy: isize| {
            if ix < 0 || iy < 0 || ix >= nx || iy >= ny {
                return;
            }
            let b = (iy * nx + ix) as usize;
            for &i in &self.members[self.starts[b]..self.starts[b + 1]] {
                visit(i);
            }
        };
        if r == 0 {
            bucket(cx, cy);
            return;
        }
        for ix in cx - r..=cx + r {
            bucket(ix, cy - r);
            bucket(ix, cy + r);
        }
        for iy in cy - r + 1..cy + r {
            bucket(cx - r, iy);
            bucket(cx + r, iy);
        }
    }

    /// Distance from `q` to the outside of the block of rings `0..=r` around
    /// bucket `(cx, cy)`; infinite once that block covers the whole grid.
    fn clearance(&self, q: Point2, cx: usize, cy: usize, r: usize) -> f64 {
        if cx < r + 1 && cy < r + 1 && cx + r + 1 >= self.nx && cy + r + 1 >= self.ny {
            return f64::INFINITY;
        }
        let mut d = f64::INFINITY;
        if cx > r {
            d = d.min(q.x - (self.origin.x + (cx - r) as f64 * self.cell));
        }
        if cx + r + 1 < self.nx {
            d = d.min(self.origin.x + (cx + r + 1) as f64 * self.cell - q.x);
        }
        if cy > r {
            d = d.min(q.y - (self.origin.y + (cy - r) as f64 * self.cell));
        }
        if cy + r + 1 < self.ny {
            d = d.min(self.origin.y + (cy + r + 1) as f64 * self.cell - q.y);
        }
        d.max(0.0)
    }

    fn max_ring(&self) -> usize {
        self.nx.max(self.ny)
    }

    /// Index of the point nearest to `q`; ties go to the lowest index.
    pub fn nearest(&self, q: Point2) -> usize {
        self.nearest_where(q, |_| true).expect("grid is non-empty")
    }

    /// Nearest point other than `skip`, with its distance.
    pub fn nearest_other(&self, q: Point2, skip: usize) -> Option<(usize, f64)> {
        self.nearest_where(q, |i| i != skip).map(|i| (i, self.points[i].distance(q)))
    }

    fn nearest_where(&self, q: Point2, keep: impl Fn(usize) -> bool) -> Option<usize> {
        let (cx, cy) = Self::locate(self.origin, self.cell, self.nx, self.ny, q);
        let mut best: Option<(f64, usize)> = None;
        for r in 0..=self.max_ring() {
            self.for_ring(cx, cy, r, |i| {
                if !keep(i) {
                    return;
                }
                let d2 = self.points[i].distance_squared(q);
                let better = match best {
                    None => true,
                    Some((bd, bi)) => d2 < bd || (d2 == bd && i < bi),
                };
                if better {
                    best = Some((d2, i));
                }
            });
            if let Some((bd, _)) = best {
                let c = self.clearance(q, cx, cy, r);
                if bd.sqrt() < c {
                    break;
                }
            }
            if self.clearance(q, cx, cy, r).is_infinite() {
                break;
            }
        }
        best.map(|(_, i)| i)
    }

    /// Visits point indices ring by ring around point `i` until `stop` returns
    /// true for the current clearance (distance beyond which no unvisited point
    /// lies).
    pub(crate) fn visit_rings_around(&self, i: usize, mut visit: impl FnMut(usize), mut stop: impl FnMut(f64) -> bool) {
        let q = self.points[i];
        let (cx, cy) = Self::locate(self.origin, self.cell, self.nx, self.ny, q);
        for r in 0..=self.max_ring() {
            self.for_ring(cx, cy, r, &mut visit);
            let c = self.clearance(q, cx, cy, r);
            if c.is_infinite() || stop(c) {
                break;
            }
        }
    }
}
