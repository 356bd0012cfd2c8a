use std::f64::consts::PI;

use rand::Rng;

use crate::dynamics::{dd_travel_time, normalize_angle, DDParams, DDState};
use crate::geometry::{Environment, Point2, PointGrid};
use crate::median::{lloyd_median_descent, LloydOptions};
use crate::rng::{derive_seed, label_hash, stream_rng};
use crate::{Error, Result};

/// Team size `k = ⌈4.09·(ρ/√A)^{2/3}·m^{1/3}⌉`.
pub fn mc_team_size(m: usize, rho: f64, area: f64) -> usize {
    let k = 4.09 * (rho / area.sqrt()).powf(2.0 / 3.0) * (m as f64).cbrt();
    (k.ceil() as usize).max(1)
}

/// Median Clustering for DD robots.
///
/// Robots form `n = ⌊m/k⌋` co-located teams at the `n`-median points; the
/// leftover `m − n·k` robots join the first team. Within a team of `ℓ` robots,
/// robot `j` faces `θ₀ + j·π/ℓ`, so the double cones of half-angle `π/(2ℓ)`
/// around the robot axes tile all directions. A target goes to the robot whose
/// cone, in the team whose Voronoi cell holds the target, contains it.
#[derive(Debug, Clone)]
pub struct McPolicy {
    params: DDParams,
    m: usize,
    team_size: usize,
    locations: Vec<Point2>,
    sizes: Vec<usize>,
    base_headings: Vec<f64>,
    /// `true` when `m < k` and all robots form one team.
    single_team_fallback: bool,
    grid: PointGrid,
}

impl McPolicy {
    pub fn build(m: usize, params: DDParams, env: &Environment, seed: u64) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidParameter("m must be at least 1".into()));
        }
        let k = mc_team_size(m, params.rho, env.area());
        let (n, fallback) = if m < k { (1, true) } else { (m / k, false) };
        if fallback {
            log::info!("mc: m = {m} below team size k = {k}; using a single team");
        }
        let mut sizes = vec![if fallback { m } else { k }; n];
        sizes[0] += m - sizes.iter().sum::<usize>();
        let opts = LloydOptions::default();
        let median = lloyd_median_descent(n, env, super::MEDIAN_SEED, opts.max_iter, opts.tol)?;
        let mut rng = stream_rng(derive_seed(seed, &[m as u64, label_hash("mc-headings")]), 0);
        let base_headings = (0..n).map(|_| PI - rng.random_range(0.0..2.0 * PI)).collect();
        Self::from_parts(params, median.points, sizes, base_headings, k, fallback)
    }

    /// Builds the policy from explicit team locations, team sizes and base
    /// headings.
    pub fn from_teams(
        params: DDParams,
        locations: Vec<Point2>,
        sizes: Vec<usize>,
        base_headings: Vec<f64>,
    ) -> Result<Self> {
        let k = sizes.iter().copied().min().unwrap_or(0);
        Self::from_parts(params, locations, sizes, base_headings, k, false)
    }

    fn from_parts(
        params: DDParams,
        locations: Vec<Point2>,
        sizes: Vec<usize>,
        base_headings: Vec<f64>,
        team_size: usize,
        single_team_fallback: bool,
    ) -> Result<Self> {
        if locations.is_empty() || locations.len() != sizes.len() || sizes.len() != base_headings.len() {
            return Err(Error::InvalidParameter(
                "team locations, sizes and headings must match and be non-empty".into(),
            ));
        }
        if sizes.contains(&0) {
            return Err(Error::InvalidParameter("every team needs at least one robot".into()));
        }
        let grid = PointGrid::new(&locations);
        Ok(Self {
            params,
            m: sizes.iter().sum(),
            team_size,
            locations,
            sizes,
            base_headings: base_headings.into_iter().map(normalize_angle).collect(),
            single_team_fallback,
            grid,
        })
    }

    pub fn params(&self) -> DDParams {
        self.params
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// The nominal team size `k`.
    pub fn team_size(&self) -> usize {
        self.team_size
    }

    pub fn team_count(&self) -> usize {
        self.locations.len()
    }

    pub fn team_locations(&self) -> &[Point2] {
        &self.locations
    }

    pub fn team_sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn base_headings(&self) -> &[f64] {
        &self.base_headings
    }

    pub fn single_team_fallback(&self) -> bool {
        self.single_team_fallback
    }

    /// Heading of robot `j` in `team`.
    pub fn heading(&self, team: usize, j: usize) -> f64 {
        normalize_angle(self.base_headings[team] + j as f64 * PI / self.sizes[team] as f64)
    }

    /// `(team, robot)` that serves a target at `q`. A target exactly at a team
    /// location goes to robot 0.
    pub fn assign(&self, q: Point2) -> (usize, usize) {
        let team = self.grid.nearest(q);
        let d = q - self.locations[team];
        if d.x == 0.0 && d.y == 0.0 {
            return (team, 0);
        }
        let l = self.sizes[team];
        let x = (d.angle() - self.base_headings[team]).rem_euclid(PI) / (PI / l as f64);
        // cone j covers |x − j| ≤ 1/2 (mod ℓ); boundaries go to the lower index
        let j = if x >= l as f64 - 0.5 { 0 } else { (x - 0.5).ceil().max(0.0) as usize };
        (team, j)
    }

    pub fn wait_time(&self, q: Point2) -> f64 {
        let (team, j) = self.assign(q);
        let p = self.locations[team];
        if p == q {
            return 0.0;
        }
        let state = DDState { position: p, heading: self.heading(team, j) };
        dd_travel_time(&state, q, &self.params)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::sample_uniform;

    fn params() -> DDParams {
        DDParams::new(0.1, 1.0).unwrap()
    }

    #[test]
    fn team_size_example() {
        assert_eq!(mc_team_size(1000, 0.1, 1.0), 9);
        let p = McPolicy::build(1000, params(), &Environment::unit_square(), 0).unwrap();
        assert_eq!(p.team_size(), 9);
        assert_eq!(p.team_count(), 111);
        assert_eq!(p.team_sizes()[0], 10);
        assert!(p.team_sizes()[1..].iter().all(|&s| s == 9));
        assert_eq!(p.team_sizes().iter().sum::<usize>(), 1000);
        assert!(!p.single_team_fallback());
    }

    #[test]
    fn small_fleets() {
        let env = Environment::unit_square();
        let k = mc_team_size(3, 0.1, 1.0);
        assert!(3 >= k && 3 < 2 * k, "k = {k}");
        let p = McPolicy::build(3, params(), &env, 0).unwrap();
        assert_eq!(p.team_count(), 1);
        assert!(!p.single_team_fallback());
        let big = DDParams::new(0.5, 1.0).unwrap();
        let k = mc_team_size(3, 0.5, 1.0);
        assert!(k > 3);
        let p = McPolicy::build(3, big, &env, 0).unwrap();
        assert!(p.single_team_fallback());
        assert_eq!(p.team_sizes(), &[3]);
    }

    #[test]
    fn four_robot_fan() {
        let p = McPolicy::from_teams(params(), vec![Point2::new(0.5, 0.5)], vec![4], vec![0.3]).unwrap();
        for j in 0..4 {
            let h = p.heading(0, j);
            assert!((normalize_angle(h - 0.3 - j as f64 * PI / 4.0)).abs() < 1e-12);
        }
        // along robot 2's axis, both directions
        let dir = Point2::from_angle(0.3 + PI / 2.0);
        assert_eq!(p.assign(Point2::new(0.5, 0.5) + dir * 0.2), (0, 2));
        assert_eq!(p.assign(Point2::new(0.5, 0.5) - dir * 0.2), (0, 2));
        let q = Point2::new(0.5, 0.5) + Point2::from_angle(0.3) * 0.25;
        assert!((p.wait_time(q) - 0.25).abs() < 1e-12);
        assert_eq!(p.wait_time(Point2::new(0.5, 0.5)), 0.0);
    }

    #[test]
    fn cone_boundary_goes_to_lower_index() {
        let p = McPolicy::from_teams(params(), vec![Point2::ORIGIN], vec![2], vec![0.0]).unwrap();
        // π/4 lies exactly between robot 0 (axis 0) and robot 1 (axis π/2)
        assert_eq!(p.assign(Point2::new(1.0, 1.0)), (0, 0));
        assert_eq!(p.assign(Point2::from_angle(3.0 * PI / 4.0 - 1e-6)), (0, 1));
        assert_eq!(p.assign(Point2::from_angle(3.0 * PI / 4.0 + 1e-6)), (0, 0));
    }

    #[test]
    fn turn_never_exceeds_half_cone() {
        let env = Environment::unit_square();
        let p = McPolicy::build(300, params(), &env, 3).unwrap();
        let mut rng = stream_rng(4, 0);
        for _ in 0..20_000 {
            let q = sample_uniform(&env, &mut rng);
            let (team, _) = p.assign(q);
            let d = p.team_locations()[team].distance(q);
            let l = p.team_sizes()[team] as f64;
            let slack = p.wait_time(q) - d / p.params().w_max;
            assert!(slack >= -1e-12);
            assert!(slack <= p.params().rho * PI / (2.0 * p.params().w_max * l) + 1e-12);
        }
    }

    #[test]
    fn mean_turn_cost() {
        // uniform directions around a single team: mean turn π/(4ℓ)
        let l = 5;
        let p = McPolicy::from_teams(params(), vec![Point2::ORIGIN], vec![l], vec![0.1]).unwrap();
        let mut rng = stream_rng(11, 0);
        let n = 100_000;
        let mut excess = 0.0;
        for _ in 0..n {
            let q = Point2::from_angle(rng.random_range(-PI..PI)) * 0.5;
            excess += p.wait_time(q) - 0.5;
        }
        let expected = 0.1 * PI / (4.0 * l as f64);
        assert!((excess / n as f64 / expected - 1.0).abs() < 0.05);
    }

    #[test]
    fn dominance_regions_partition_cells() {
        // rasterize the unit square: every pixel belongs to exactly one robot,
        // and each team's robots share its Voronoi cell
        let env = Environment::unit_square();
        let p = McPolicy::build(60, params(), &env, 1).unwrap();
        let cells = crate::geometry::voronoi_partition(p.team_locations(), &env).unwrap();
        let res = 500;
        let mut counts = vec![0usize; p.team_count()];
        for i in 0..res {
            for j in 0..res {
                let q = Point2::new((i as f64 + 0.5) / res as f64, (j as f64 + 0.5) / res as f64);
                let (team, robot) = p.assign(q);
                assert!(robot < p.team_sizes()[team]);
                counts[team] += 1;
            }
        }
        let pixel = 1.0 / (res * res) as f64;
        let total: f64 = counts.iter().map(|&c| c as f64 * pixel).sum();
        assert!((total - 1.0).abs() < 1e-6);
        for (c, cell) in counts.iter().zip(&cells) {
            assert!((*c as f64 * pixel - cell.area()).abs() < 0.02 * cell.area() + 4.0 / res as f64 * 0.05);
        }
    }
}
