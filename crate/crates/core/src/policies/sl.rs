use std::f64::consts::PI;

use dubins_paths::f64::{DubinsPath, PosRot};
use rand::Rng;

use crate::dynamics::{sl_departure_arc_length, DIParams};
use crate::geometry::{Environment, Point2};
use crate::{Error, Result};

/// Loitering speed, turn radius and nominal strip width of the SL policy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SlParameters {
    /// `min{v_max, √(√A·u_max)/3.22}`
    pub v_star: f64,
    /// `v*²/u_max`
    pub rho_star: f64,
    /// `min{((4/(3√ρ*))·(A + 10.38ρ*√A)/m)^{2/3}, 2ρ*}`
    pub strip_width: f64,
}

impl SlParameters {
    pub fn new(m: usize, params: &DIParams, area: f64) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidParameter("m must be at least 1".into()));
        }
        if !(area > 0.0) {
            return Err(Error::InvalidParameter(format!("area must be positive, got {area}")));
        }
        let side = area.sqrt();
        let v_star = params.v_max.min((side * params.u_max).sqrt() / 3.22);
        let rho_star = v_star * v_star / params.u_max;
        let strip_width = Self::strip_width_for(m, rho_star, area);
        Ok(Self { v_star, rho_star, strip_width })
    }

    /// The strip width formula for a given turn radius.
    pub fn strip_width_for(m: usize, rho_star: f64, area: f64) -> f64 {
        let raw = (4.0 / (3.0 * rho_star.sqrt()) * (area + 10.38 * rho_star * area.sqrt()) / m as f64).powf(2.0 / 3.0);
        raw.min(2.0 * rho_star)
    }
}

/// Strip Loitering for DI robots in a square.
///
/// The square is cut into `N = ⌈side/w⌉` horizontal strips of equal width
/// `side/N ≤ w`. The loiter path runs along each strip's bisector, alternating
/// direction, with shortest bounded-curvature (radius `ρ*`) U-turns between
/// consecutive strips and a closing curve from the end of the last strip back
/// to the start of the first. The `m` robots circulate on it at speed `v*`,
/// equally spaced. A target is served by the robot that reaches the departure
/// point first: it leaves the path on a circular arc of radius `ρ*`.
#[derive(Debug, Clone)]
pub struct SlPolicy {
    params: DIParams,
    sl: SlParameters,
    m: usize,
    y0: f64,
    x0: f64,
    side: f64,
    strip_count: usize,
    strip_spacing: f64,
    uturn_length: f64,
    closure_length: f64,
    path_length: f64,
}

impl SlPolicy {
    pub fn build(m: usize, params: DIParams, env: &Environment) -> Result<Self> {
        let (min, max) = env
            .boundary()
            .as_axis_aligned_rectangle()
            .ok_or_else(|| Error::InvalidGeometry("strip loitering needs an axis-aligned square environment".into()))?;
        let side = max.x - min.x;
        if ((max.y - min.y) - side).abs() > 1e-9 * side {
            return Err(Error::InvalidGeometry("strip loitering needs a square environment".into()));
        }
        let sl = SlParameters::new(m, &params, env.area())?;
        let ratio = side / sl.strip_width;
        // guard against ratios a hair above an integer from round-off
        let strip_count = ((ratio * (1.0 - 1e-12)).ceil() as usize).max(1);
        let strip_spacing = side / strip_count as f64;
        let rho = sl.rho_star;

        let right = min.x + side;
        let mut uturn_total = 0.0;
        let mut uturn_length = 0.0;
        for j in 0..strip_count.saturating_sub(1) {
            let y = min.y + (j as f64 + 0.5) * strip_spacing;
            let (from, to) = if j % 2 == 0 {
                (PosRot::from_floats(right, y, 0.0), PosRot::from_floats(right, y + strip_spacing, PI))
            } else {
                (PosRot::from_floats(min.x, y, PI), PosRot::from_floats(min.x, y + strip_spacing, 0.0))
            };
            uturn_length = dubins_length(from, to, rho)?;
            uturn_total += uturn_length;
        }
        let last_y = min.y + (strip_count as f64 - 0.5) * strip_spacing;
        let last_end = if strip_count % 2 == 1 {
            PosRot::from_floats(right, last_y, 0.0)
        } else {
            PosRot::from_floats(min.x, last_y, PI)
        };
        let start = PosRot::from_floats(min.x, min.y + 0.5 * strip_spacing, 0.0);
        let closure_length = dubins_length(last_end, start, rho)?;
        let path_length = strip_count as f64 * side + uturn_total + closure_length;
        Ok(Self {
            params,
            sl,
            m,
            y0: min.y,
            x0: min.x,
            side,
            strip_count,
            strip_spacing,
            uturn_length,
            closure_length,
            path_length,
        })
    }

    pub fn params(&self) -> DIParams {
        self.params
    }

    pub fn parameters(&self) -> SlParameters {
        self.sl
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn strip_count(&self) -> usize {
        self.strip_count
    }

    /// Spacing of the bisectors, `side/N`.
    pub fn strip_spacing(&self) -> f64 {
        self.strip_spacing
    }

    /// Length of one U-turn between consecutive strips (0 when `N = 1`).
    pub fn uturn_length(&self) -> f64 {
        self.uturn_length
    }

    pub fn closure_length(&self) -> f64 {
        self.closure_length
    }

    /// Total loiter path length `L1`.
    pub fn path_length(&self) -> f64 {
        self.path_length
    }

    /// y-coordinates of the strip bisectors, bottom to top.
    pub fn bisectors(&self) -> Vec<f64> {
        (0..self.strip_count).map(|j| self.y0 + (j as f64 + 0.5) * self.strip_spacing).collect()
    }

    /// Distance from `q` to the nearest bisector; at most half the spacing for
    /// targets inside the square.
    pub fn lateral_offset(&self, q: Point2) -> f64 {
        let s = (q.y - self.y0) / self.strip_spacing;
        let j = (s.floor().max(0.0) as usize).min(self.strip_count - 1);
        ((s - j as f64 - 0.5) * self.strip_spacing).abs()
    }

    /// Departure arc length `d₂` for a target at `q`.
    pub fn departure_arc(&self, q: Point2) -> f64 {
        let delta = self.lateral_offset(q).min(self.sl.rho_star);
        sl_departure_arc_length(delta, self.sl.rho_star).expect("offset within the strip half-width")
    }

    /// Wait `(d₁ + d₂)/v*` with the along-path distance `d₁` of the serving
    /// robot drawn uniformly from `[0, L1/m)`.
    pub fn wait_time<R: Rng + ?Sized>(&self, q: Point2, rng: &mut R) -> f64 {
        let d1 = rng.random::<f64>() * self.path_length / self.m as f64;
        (d1 + self.departure_arc(q)) / self.sl.v_star
    }

    /// `E[d₂]` for a target uniform in the square. The lateral offset is then
    /// uniform on `[0, side/(2N)]`, which gives a closed form.
    pub fn expected_departure_arc(&self) -> f64 {
        let a = 2.0 * self.sl.rho_star;
        let dmax = 0.5 * self.strip_spacing;
        let theta = (dmax / a).sqrt().asin();
        // ∫₀^δmax asin(√(δ/a)) dδ = a·(sin 2θ/4 − θ·cos 2θ/2)
        let integral = a * ((2.0 * theta).sin() / 4.0 - theta * (2.0 * theta).cos() / 2.0);
        a * integral / dmax
    }

    /// Exact expected wait `(L1/(2m) + E[d₂])/v*`.
    pub fn expected_wait(&self) -> f64 {
        (self.path_length / (2.0 * self.m as f64) + self.expected_departure_arc()) / self.sl.v_star
    }

    /// x-range of the straight part of every strip.
    pub fn strip_extent(&self) -> (f64, f64) {
        (self.x0, self.x0 + self.side)
    }
}

fn dubins_length(from: PosRot, to: PosRot, rho: f64) -> Result<f64> {
    DubinsPath::shortest_from(from, to, rho)
        .map(|p| p.length())
        .map_err(|_| Error::Internal("no bounded-curvature path between strips".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream_rng;

    fn fast() -> DIParams {
        DIParams::new(10.0, 1.0).unwrap()
    }

    #[test]
    fn parameter_formulas() {
        let sl = SlParameters::new(100, &fast(), 1.0).unwrap();
        assert!((sl.v_star - 1.0 / 3.22).abs() < 1e-12);
        assert!((sl.v_star - 0.31056).abs() < 1e-5);
        assert!((sl.rho_star - sl.v_star * sl.v_star).abs() < 1e-15);
        let slow = SlParameters::new(100, &DIParams::new(0.1, 1.0).unwrap(), 1.0).unwrap();
        assert_eq!(slow.v_star, 0.1);
    }

    #[test]
    fn strip_width_example() {
        let w = SlParameters::strip_width_for(100, 0.1, 1.0);
        let expected: f64 = (4.0 / (3.0 * 0.1f64.sqrt()) * (1.0 + 1.038) / 100.0).powf(2.0 / 3.0);
        assert!((w - expected).abs() < 1e-12);
        assert!((w - 0.1946).abs() < 5e-4);
        // small fleets are clamped at 2ρ*
        assert_eq!(SlParameters::strip_width_for(1, 0.1, 1.0), 0.2);
        let sl = SlParameters::new(100, &fast(), 1.0).unwrap();
        assert_eq!(sl.strip_width, SlParameters::strip_width_for(100, sl.rho_star, 1.0));
    }

    #[test]
    fn strips_cover_square() {
        let env = Environment::unit_square();
        for &m in &[1usize, 10, 100, 1000, 10_000] {
            let p = SlPolicy::build(m, fast(), &env).unwrap();
            let w = p.parameters().strip_width;
            assert!(p.strip_count() as f64 * w >= 1.0 - 1e-12);
            assert!(p.strip_spacing() <= w * (1.0 + 1e-12));
            assert!(p.strip_spacing() <= 2.0 * p.parameters().rho_star + 1e-12);
        }
    }

    #[test]
    fn uturn_between_curvature_bounds() {
        // any heading reversal turns through at least π; the symmetric
        // right-left-right bulb turn is feasible and no shorter than optimal
        let env = Environment::unit_square();
        for &m in &[10usize, 100, 1000] {
            let p = SlPolicy::build(m, fast(), &env).unwrap();
            let rho = p.parameters().rho_star;
            let w = p.strip_spacing();
            let beta = ((0.5 * w + rho) / (2.0 * rho)).acos();
            assert!(p.uturn_length() >= PI * rho - 1e-9);
            assert!(p.uturn_length() <= rho * (PI + 4.0 * beta) + 1e-9, "m={m}");
            let l1 = p.path_length();
            let n = p.strip_count() as f64;
            assert!((l1 - (n * 1.0 + (n - 1.0) * p.uturn_length() + p.closure_length())).abs() < 1e-9);
        }
    }

    #[test]
    fn offsets_within_half_spacing() {
        let env = Environment::unit_square();
        let p = SlPolicy::build(200, fast(), &env).unwrap();
        let mut rng = stream_rng(5, 0);
        for _ in 0..10_000 {
            let q = Point2::new(rng.random(), rng.random());
            assert!(p.lateral_offset(q) <= 0.5 * p.strip_spacing() + 1e-12);
        }
        for &y in &p.bisectors() {
            assert!(p.lateral_offset(Point2::new(0.3, y)) < 1e-12);
            assert!(p.departure_arc(Point2::new(0.3, y)) < 1e-7);
        }
    }

    #[test]
    fn mean_phase_distance() {
        let env = Environment::unit_square();
        let p = SlPolicy::build(50, fast(), &env).unwrap();
        let q = Point2::new(0.5, p.bisectors()[0]);
        let mut rng = stream_rng(9, 0);
        let n = 100_000;
        let mean = (0..n).map(|_| p.wait_time(q, &mut rng)).sum::<f64>() / n as f64;
        let expected = p.path_length() / (2.0 * 50.0 * p.parameters().v_star);
        assert!((mean / expected - 1.0).abs() < 0.01, "{mean} vs {expected}");
    }

    #[test]
    fn departure_arc_mean() {
        let env = Environment::unit_square();
        for &m in &[20usize, 300, 4000] {
            let p = SlPolicy::build(m, fast(), &env).unwrap();
            let rho = p.parameters().rho_star;
            let w = p.strip_spacing();
            // midpoint rule over the uniform offset
            let k = 200_000;
            let numeric = (0..k)
                .map(|i| sl_departure_arc_length((i as f64 + 0.5) / k as f64 * 0.5 * w, rho).unwrap())
                .sum::<f64>()
                / k as f64;
            assert!((p.expected_departure_arc() - numeric).abs() < 1e-7 * numeric.max(1e-3));
            assert!(p.expected_departure_arc() <= 0.75 * (rho * w).sqrt());
        }
    }

    #[test]
    fn rejects_non_square() {
        let env =
            Environment::new(crate::geometry::ConvexPolygon::rectangle(Point2::ORIGIN, Point2::new(2.0, 1.0)).unwrap());
        assert!(SlPolicy::build(10, fast(), &env).is_err());
        let tri = Environment::new(crate::geometry::ConvexPolygon::regular(3, Point2::ORIGIN, 1.0).unwrap());
        assert!(SlPolicy::build(10, fast(), &tri).is_err());
    }
}
