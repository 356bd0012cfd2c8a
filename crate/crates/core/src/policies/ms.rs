use std::f64::consts::PI;

use rand::Rng;

use crate::dynamics::{dd_travel_time, di_time_from_rest, DDState, RobotModel};
use crate::geometry::{Environment, Point2, PointGrid};
use crate::median::{lloyd_median_descent, LloydOptions, MedianSolution};
use crate::rng::{derive_seed, label_hash, stream_rng};
use crate::{Error, Result};

/// Median Stationing: every robot waits at rest at one of `m` median points
/// and the robot at the nearest station serves each target.
///
/// The stations do not depend on the seed; only DD headings do.
#[derive(Debug, Clone)]
pub struct MsPolicy {
    model: RobotModel,
    stations: Vec<Point2>,
    /// DD only; empty for DI.
    headings: Vec<f64>,
    median: MedianSolution,
    grid: PointGrid,
}

impl MsPolicy {
    pub fn build(m: usize, model: RobotModel, env: &Environment, seed: u64) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidParameter("m must be at least 1".into()));
        }
        let opts = LloydOptions::default();
        let median = lloyd_median_descent(m, env, super::MEDIAN_SEED, opts.max_iter, opts.tol)?;
        if !median.converged {
            log::warn!("ms: median descent for m = {m} stopped after {} iterations", median.iterations);
        }
        let headings = match model {
            RobotModel::DoubleIntegrator(_) => Vec::new(),
            RobotModel::DifferentialDrive(_) => {
                let mut rng = stream_rng(derive_seed(seed, &[m as u64, label_hash("ms-headings")]), 0);
                (0..m).map(|_| PI - rng.random_range(0.0..2.0 * PI)).collect()
            }
        };
        Ok(Self::from_stations_inner(model, median, headings))
    }

    /// Uses explicit stations (and DD headings) instead of running the median
    /// solver.
    pub fn from_stations(
        model: RobotModel,
        stations: Vec<Point2>,
        headings: Option<Vec<f64>>,
        env: &Environment,
    ) -> Result<Self> {
        let value = crate::median::evaluate_hm(&stations, env)?;
        let headings = match model {
            RobotModel::DoubleIntegrator(_) => Vec::new(),
            RobotModel::DifferentialDrive(_) => {
                let h = headings.unwrap_or_else(|| vec![0.0; stations.len()]);
                if h.len() != stations.len() {
                    return Err(Error::InvalidParameter(format!(
                        "{} headings for {} stations",
                        h.len(),
                        stations.len()
                    )));
                }
                h
            }
        };
        let median = MedianSolution { points: stations, value, iterations: 0, converged: true, history: vec![value] };
        Ok(Self::from_stations_inner(model, median, headings))
    }

    fn from_stations_inner(model: RobotModel, median: MedianSolution, headings: Vec<f64>) -> Self {
        let headings = headings.into_iter().map(crate::dynamics::normalize_angle).collect();
        let grid = PointGrid::new(&median.points);
        Self { model, stations: median.points.clone(), headings, median, grid }
    }

    pub fn model(&self) -> RobotModel {
        self.model
    }

    pub fn stations(&self) -> &[Point2] {
        &self.stations
    }

    pub fn headings(&self) -> &[f64] {
        &self.headings
    }

    /// The median solution behind the stations; `value` is `H_m` at the stations.
    pub fn median(&self) -> &MedianSolution {
        &self.median
    }

    /// Index of the station serving `q` and its distance to `q`.
    pub fn nearest_station(&self, q: Point2) -> (usize, f64) {
        let i = self.grid.nearest(q);
        (i, self.stations[i].distance(q))
    }

    pub fn wait_time(&self, q: Point2) -> f64 {
        let i = self.grid.nearest(q);
        let p = self.stations[i];
        match &self.model {
            RobotModel::DoubleIntegrator(params) => di_time_from_rest(p, q, params),
            RobotModel::DifferentialDrive(params) => {
                dd_travel_time(&DDState { position: p, heading: self.headings[i] }, q, params)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{DDParams, DIParams};

    fn di() -> RobotModel {
        RobotModel::DoubleIntegrator(DIParams::new(1.0, 1.0).unwrap())
    }

    fn dd() -> RobotModel {
        RobotModel::DifferentialDrive(DDParams::new(0.5, 1.0).unwrap())
    }

    #[test]
    fn single_station_at_center() {
        let env = Environment::unit_square();
        let p = MsPolicy::build(1, di(), &env, 0).unwrap();
        assert!(p.stations()[0].distance(Point2::new(0.5, 0.5)) < 1e-3);
        let exact = MsPolicy::from_stations(di(), vec![Point2::new(0.5, 0.5)], None, &env).unwrap();
        assert_eq!(exact.wait_time(Point2::new(0.5, 0.5)), 0.0);
        assert!((exact.wait_time(Point2::new(1.0, 0.5)) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn dd_aligned_target() {
        let env = Environment::unit_square();
        let p = MsPolicy::from_stations(dd(), vec![Point2::new(0.5, 0.5)], Some(vec![0.0]), &env).unwrap();
        assert!((p.wait_time(Point2::new(1.0, 0.5)) - 0.5).abs() < 1e-12);
    }

    #[test]
    fn two_stations_symmetric() {
        let env = Environment::unit_square();
        let p = MsPolicy::build(2, di(), &env, 0).unwrap();
        let mid = p.stations()[0].midpoint(p.stations()[1]);
        assert!(mid.distance(Point2::new(0.5, 0.5)) < 1e-3, "{mid:?}");
    }

    #[test]
    fn seeds_change_headings_not_stations() {
        let env = Environment::unit_square();
        let a = MsPolicy::build(5, dd(), &env, 1).unwrap();
        let b = MsPolicy::build(5, dd(), &env, 2).unwrap();
        assert_ne!(a.headings(), b.headings());
        assert!(a.headings().iter().all(|h| *h > -PI && *h <= PI));
        assert_eq!(a.stations(), b.stations());
        let again = MsPolicy::build(5, dd(), &env, 1).unwrap();
        assert_eq!(a.stations(), again.stations());
        assert_eq!(a.headings(), again.headings());
    }

    #[test]
    fn mismatched_headings_rejected() {
        let env = Environment::unit_square();
        let r = MsPolicy::from_stations(dd(), vec![Point2::new(0.5, 0.5)], Some(vec![0.0, 1.0]), &env);
        assert!(r.is_err());
    }
}
