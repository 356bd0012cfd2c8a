//! Robot motion models: travel-time primitives and reachable-set area
//! formulas for double-integrator (DI) and differential-drive (DD) robots.
//!
//! Travel times are those of fixed maneuvers rather than true minimum-time
//! controls. A DI robot at rest accelerates straight at the target at full
//! thrust until it hits the speed cap, with free terminal velocity. A DD robot
//! turns in place (wheels at `±w_max`) until the target lies on its axis, then
//! drives straight, forward or backward, whichever needs the smaller turn.

use std::f64::consts::{FRAC_PI_2, PI};

use crate::geometry::Point2;
use crate::{Error, Result};

/// Double-integrator limits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DIParams {
    pub v_max: f64,
    pub u_max: f64,
}

impl DIParams {
    pub fn new(v_max: f64, u_max: f64) -> Result<Self> {
        positive("v_max", v_max)?;
        positive("u_max", u_max)?;
        Ok(Self { v_max, u_max })
    }
}

/// Differential-drive geometry and wheel limit. Wheels have unit radius, so the
/// top linear speed equals `w_max` and the top turn rate is `w_max / rho`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DDParams {
    /// Half wheelbase.
    pub rho: f64,
    pub w_max: f64,
}

impl DDParams {
    pub fn new(rho: f64, w_max: f64) -> Result<Self> {
        positive("rho", rho)?;
        positive("w_max", w_max)?;
        Ok(Self { rho, w_max })
    }
}

fn positive(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("{name} must be positive and finite, got {v}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RobotModel {
    DoubleIntegrator(DIParams),
    DifferentialDrive(DDParams),
}

impl RobotModel {
    pub fn label(&self) -> &'static str {
        match self {
            RobotModel::DoubleIntegrator(_) => "di",
            RobotModel::DifferentialDrive(_) => "dd",
        }
    }

    /// Top speed: `v_max` or `w_max`.
    pub fn max_speed(&self) -> f64 {
        match self {
            RobotModel::DoubleIntegrator(p) => p.v_max,
            RobotModel::DifferentialDrive(p) => p.w_max,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DIState {
    pub position: Point2,
    pub velocity: Point2,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DDState {
    pub position: Point2,
    /// Heading in (−π, π].
    pub heading: f64,
}

impl DDState {
    pub fn new(position: Point2, heading: f64) -> Self {
        Self { position, heading: normalize_angle(heading) }
    }
}

/// Wraps an angle into (−π, π].
pub fn normalize_angle(theta: f64) -> f64 {
    let mut a = theta.rem_euclid(std::f64::consts::TAU);
    if a > PI {
        a -= std::f64::consts::TAU;
    }
    if a <= -PI {
        a += std::f64::consts::TAU;
    }
    a
}

/// Time for a DI robot at rest at `p` to reach `q`:
/// `√(2d/u_max)` while `d ≤ v_max²/(2u_max)`, else `d/v_max + v_max/(2u_max)`.
pub fn di_time_from_rest(p: Point2, q: Point2, params: &DIParams) -> f64 {
    di_time_from_rest_distance(p.distance(q), params)
}

pub fn di_time_from_rest_distance(d: f64, params: &DIParams) -> f64 {
    let DIParams { v_max, u_max } = *params;
    if d <= v_max * v_max / (2.0 * u_max) {
        (2.0 * d / u_max).sqrt()
    } else {
        d / v_max + v_max / (2.0 * u_max)
    }
}

/// Turn angle the DD primitive needs to put `q` on the robot's axis, in
/// `[0, π/2]` (driving backward folds angles beyond π/2).
pub fn dd_turn_angle(state: &DDState, q: Point2) -> f64 {
    let d = q - state.position;
    if d.x == 0.0 && d.y == 0.0 {
        return 0.0;
    }
    let alpha = normalize_angle(d.angle() - state.heading).abs();
    alpha.min(PI - alpha)
}

/// Turn-then-drive time from `state` to `q`: `(ρ·α + ‖p − q‖) / w_max`, never
/// more than `‖p − q‖/w_max + πρ/(2w_max)`.
pub fn dd_travel_time(state: &DDState, q: Point2, params: &DDParams) -> f64 {
    let d = state.position.distance(q);
    (params.rho * dd_turn_angle(state, q) + d) / params.w_max
}

/// Area bounds for a reachable set, with a flag telling whether the
/// asymptotic formulas apply at the requested horizon.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReachableAreaBounds {
    pub lower: f64,
    pub upper: f64,
    pub valid: bool,
}

/// Reachable-set area bounds for a DI robot with initial speed `v0` after time
/// `t`. The upper bound is the bounding-rectangle value
/// `2·v0·u·t³ + u²·t⁴`; the lower bound `v0·u·t³/3` holds for
/// `t ≤ (π/2)·v0²/u` and is reported as 0 (with `valid = false`) beyond.
pub fn di_reachable_area_bounds(v0: f64, t: f64, params: &DIParams) -> Result<ReachableAreaBounds> {
    if !(t >= 0.0) {
        return Err(Error::Domain(format!("horizon must be non-negative, got {t}")));
    }
    if !(0.0..=params.v_max).contains(&v0) {
        return Err(Error::Domain(format!("initial speed {v0} outside [0, {}]", params.v_max)));
    }
    let u = params.u_max;
    let upper = 2.0 * v0 * u * t.powi(3) + u * u * t.powi(4);
    let valid = t <= FRAC_PI_2 * v0 * v0 / u;
    let lower = if valid { v0 * u * t.powi(3) / 3.0 } else { 0.0 };
    Ok(ReachableAreaBounds { lower, upper, valid })
}

/// Small-time reachable-set area bounds for a DD robot:
/// `(2/(3ρ))·w³t³ ≤ Area ≤ (5/(6ρ))·w³t³`, flagged valid while
/// `w·t ≤ ρπ/2`.
pub fn dd_reachable_area_bounds(t: f64, params: &DDParams) -> Result<ReachableAreaBounds> {
    if !(t >= 0.0) {
        return Err(Error::Domain(format!("horizon must be non-negative, got {t}")));
    }
    let reach = (params.w_max * t).powi(3) / params.rho;
    Ok(ReachableAreaBounds {
        lower: 2.0 / 3.0 * reach,
        upper: 5.0 / 6.0 * reach,
        valid: params.w_max * t <= params.rho * FRAC_PI_2,
    })
}

/// Exact area of `{q : dd_travel_time(state, q) ≤ t}`.
///
/// The set is star-shaped with radius `w·t − ρ·α` in every direction whose
/// fold angle is `α`, giving `(2/(3ρ))·((wt)³ − (wt − ρ·α_max)³)` with
/// `α_max = min(π/2, wt/ρ)`.
pub fn dd_primitive_reachable_area(t: f64, params: &DDParams) -> Result<f64> {
    if !(t >= 0.0) {
        return Err(Error::Domain(format!("horizon must be non-negative, got {t}")));
    }
    let reach = params.w_max * t;
    let alpha_max = FRAC_PI_2.min(reach / params.rho);
    let rest = reach - params.rho * alpha_max;
    Ok(2.0 / (3.0 * params.rho) * (reach.powi(3) - rest.powi(3)))
}

/// A lower bound on `∫_{R_t} τ(g, q) dq` and whether it applies.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TravelTimeIntegralBound {
    pub value: f64,
    pub valid: bool,
}

/// `∫_{R_t(g)} τ dq ≥ (v0·u/12)·t⁴` for `t ≤ (π/2)·v0²/u`.
pub fn di_travel_time_integral_lower(v0: f64, t: f64, params: &DIParams) -> Result<TravelTimeIntegralBound> {
    let area = di_reachable_area_bounds(v0, t, params)?;
    Ok(TravelTimeIntegralBound { value: v0 * params.u_max * t.powi(4) / 12.0, valid: area.valid })
}

/// `∫_{R_t(g)} τ dq ≥ (w³/(6ρ))·t⁴`, for any horizon.
pub fn dd_travel_time_integral_lower(t: f64, params: &DDParams) -> Result<TravelTimeIntegralBound> {
    if !(t >= 0.0) {
        return Err(Error::Domain(format!("horizon must be non-negative, got {t}")));
    }
    Ok(TravelTimeIntegralBound { value: params.w_max.powi(3) * t.powi(4) / (6.0 * params.rho), valid: true })
}

/// Model-dispatching form of the travel-time integral bound. `v0` is ignored
/// for DD robots.
pub fn travel_time_integral_bounds(model: &RobotModel, v0: f64, t: f64) -> Result<TravelTimeIntegralBound> {
    match model {
        RobotModel::DoubleIntegrator(p) => di_travel_time_integral_lower(v0, t, p),
        RobotModel::DifferentialDrive(p) => dd_travel_time_integral_lower(t, p),
    }
}

/// Length of the circular departure arc (radius `rho_star`, tangent to the
/// loiter path) that ends at lateral offset `delta`:
/// `2ρ*·asin(√(δ/(2ρ*)))`, defined for `0 ≤ δ ≤ ρ*`.
pub fn sl_departure_arc_length(delta: f64, rho_star: f64) -> Result<f64> {
    if !(delta >= 0.0 && delta <= rho_star) {
        return Err(Error::Domain(format!("offset {delta} outside [0, {rho_star}]")));
    }
    Ok(2.0 * rho_star * (delta / (2.0 * rho_star)).sqrt().asin())
}

#[cfg(test)]
mod tests {
    use super::*;

    const TOL: f64 = 1e-12;

    fn di() -> DIParams {
        DIParams::new(1.0, 1.0).unwrap()
    }

    #[test]
    fn di_primitive_branches() {
        let o = Point2::ORIGIN;
        assert_eq!(di_time_from_rest(o, o, &di()), 0.0);
        assert!((di_time_from_rest(o, Point2::new(0.5, 0.0), &di()) - 1.0).abs() < TOL);
        // second branch formula at the boundary agrees with the first
        assert!((0.5 / 1.0 + 1.0 / 2.0 - 1.0f64).abs() < TOL);
        assert!((di_time_from_rest(o, Point2::new(0.0, 2.0), &di()) - 2.5).abs() < TOL);
    }

    #[test]
    fn dd_primitive_cases() {
        let p = DDParams::new(0.5, 1.0).unwrap();
        let s = DDState::new(Point2::ORIGIN, 0.0);
        assert!((dd_travel_time(&s, Point2::new(1.0, 0.0), &p) - 1.0).abs() < TOL);
        assert!((dd_travel_time(&s, Point2::new(-1.0, 0.0), &p) - 1.0).abs() < TOL);
        let abeam = dd_travel_time(&s, Point2::new(0.0, 1.0), &p);
        assert!((abeam - (1.0 + PI / 4.0)).abs() < TOL);
        assert!((abeam - 1.785_398_163_397_448).abs() < TOL);
        assert_eq!(dd_travel_time(&s, Point2::ORIGIN, &p), 0.0);
    }

    #[test]
    fn angles_normalize_into_half_open_interval() {
        assert_eq!(normalize_angle(PI), PI);
        assert_eq!(normalize_angle(-PI), PI);
        assert!((normalize_angle(3.0 * PI + 0.1) - (-PI + 0.1)).abs() < 1e-12);
        assert!((normalize_angle(-0.25) + 0.25).abs() < 1e-15);
    }

    #[test]
    fn reachable_area_formulas() {
        let b = di_reachable_area_bounds(0.0, 1.0, &di()).unwrap();
        assert_eq!(b.upper, 1.0);
        assert!(!b.valid);
        let b = di_reachable_area_bounds(1.0, 0.1, &di()).unwrap();
        assert!(b.valid);
        assert!((b.lower - 1e-3 / 3.0).abs() < 1e-15);
        let b = di_reachable_area_bounds(0.0, 0.0, &di()).unwrap();
        assert_eq!((b.lower, b.upper), (0.0, 0.0));
        assert!(di_reachable_area_bounds(2.0, 0.1, &di()).is_err());
        assert!(di_reachable_area_bounds(0.5, -1.0, &di()).is_err());

        let dd = DDParams::new(0.5, 1.0).unwrap();
        let b = dd_reachable_area_bounds(0.1, &dd).unwrap();
        assert!((b.lower - 4.0 / 3.0 * 1e-3).abs() < 1e-15);
        assert!((b.upper - 5.0 / 3.0 * 1e-3).abs() < 1e-15);
        assert!((b.lower / b.upper - 0.8).abs() < 1e-15);
        let b = dd_reachable_area_bounds(0.0, &dd).unwrap();
        assert_eq!((b.lower, b.upper), (0.0, 0.0));
    }

    #[test]
    fn primitive_area_small_time_equals_lower_bound() {
        let dd = DDParams::new(0.5, 1.0).unwrap();
        for &t in &[0.0, 0.1, 0.4, PI / 4.0] {
            let exact = dd_primitive_reachable_area(t, &dd).unwrap();
            let lemma = dd_reachable_area_bounds(t, &dd).unwrap();
            assert!((exact - lemma.lower).abs() <= 1e-14 * lemma.lower.max(1.0));
        }
        // past the turning horizon the primitive set is smaller than the cube law
        let t = 2.0;
        assert!(dd_primitive_reachable_area(t, &dd).unwrap() < dd_reachable_area_bounds(t, &dd).unwrap().lower);
    }

    #[test]
    fn travel_time_integrals() {
        let b = travel_time_integral_bounds(&RobotModel::DoubleIntegrator(di()), 1.0, 1.0).unwrap();
        assert!((b.value - 1.0 / 12.0).abs() < 1e-15);
        assert!(b.valid);
        let dd = RobotModel::DifferentialDrive(DDParams::new(0.5, 1.0).unwrap());
        let b = travel_time_integral_bounds(&dd, 0.0, 1.0).unwrap();
        assert!((b.value - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(travel_time_integral_bounds(&dd, 0.0, 0.0).unwrap().value, 0.0);
    }

    #[test]
    fn departure_arc() {
        assert_eq!(sl_departure_arc_length(0.0, 0.2).unwrap(), 0.0);
        let rho = 0.2;
        assert!((sl_departure_arc_length(rho, rho).unwrap() - PI * rho / 2.0).abs() < 1e-15);
        assert!(sl_departure_arc_length(0.21, 0.2).is_err());
        assert!(sl_departure_arc_length(-0.01, 0.2).is_err());
        // chord check: the arc end sits at lateral offset δ from the tangent line
        for &delta in &[0.01, 0.05, 0.13, 0.2] {
            let d2 = sl_departure_arc_length(delta, rho).unwrap();
            let lateral = rho * (1.0 - (d2 / rho).cos());
            assert!((lateral - delta).abs() < 1e-9);
        }
    }

    #[test]
    fn invalid_params() {
        assert!(DIParams::new(0.0, 1.0).is_err());
        assert!(DDParams::new(1.0, f64::NAN).is_err());
    }
}
