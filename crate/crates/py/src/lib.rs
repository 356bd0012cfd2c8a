//! Python bindings: models, policies, estimates, sweeps, crossovers and
//! bounds on square environments.

use pyo3::create_exception;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use dtrp_core::bounds;
use dtrp_core::dynamics::{self, DDState};
use dtrp_core::median::{self as med, LloydOptions};
use dtrp_core::sim::{self, CoverageEstimate, CrossoverOptions};
use dtrp_core::{DDParams, DIParams, Environment, Point2, PolicyKind, RobotModel};

create_exception!(dtrp, NoCrossoverError, PyRuntimeError, "Neither policy overtakes the other in the range.");

fn py_err(e: dtrp_core::Error) -> PyErr {
    match e {
        dtrp_core::Error::NoCrossover { .. } => NoCrossoverError::new_err(e.to_string()),
        dtrp_core::Error::Internal(_) => PyRuntimeError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn square(side: f64) -> PyResult<Environment> {
    Environment::square(side).map_err(py_err)
}

fn policy_kind(name: &str) -> PyResult<PolicyKind> {
    name.parse().map_err(py_err)
}

/// Robot dynamics with their limits.
#[pyclass(frozen, eq, skip_from_py_object, module = "dtrp")]
#[derive(Clone, Copy, PartialEq)]
pub struct Model {
    inner: RobotModel,
}

#[pymethods]
impl Model {
    /// Double integrator with speed limit `v_max` and acceleration limit `u_max`.
    #[staticmethod]
    #[pyo3(signature = (v_max=1.0, u_max=1.0))]
    fn double_integrator(v_max: f64, u_max: f64) -> PyResult<Self> {
        Ok(Self { inner: RobotModel::DoubleIntegrator(DIParams::new(v_max, u_max).map_err(py_err)?) })
    }

    /// Differential drive with minimum turning radius `rho` and wheel speed `w_max`.
    #[staticmethod]
    #[pyo3(signature = (rho=0.5, w_max=1.0))]
    fn differential_drive(rho: f64, w_max: f64) -> PyResult<Self> {
        Ok(Self { inner: RobotModel::DifferentialDrive(DDParams::new(rho, w_max).map_err(py_err)?) })
    }

    #[getter]
    fn label(&self) -> &'static str {
        self.inner.label()
    }

    #[getter]
    fn max_speed(&self) -> f64 {
        self.inner.max_speed()
    }

    fn __repr__(&self) -> String {
        match self.inner {
            RobotModel::DoubleIntegrator(p) => format!("Model.double_integrator(v_max={}, u_max={})", p.v_max, p.u_max),
            RobotModel::DifferentialDrive(p) => format!("Model.differential_drive(rho={}, w_max={})", p.rho, p.w_max),
        }
    }
}

/// Monte Carlo mean wait with its 95% half-width.
#[pyclass(frozen, get_all, skip_from_py_object, module = "dtrp")]
#[derive(Clone)]
pub struct Estimate {
    mean: f64,
    ci95_half_width: f64,
    std_dev: f64,
    n_samples: usize,
    seed: u64,
}

impl From<CoverageEstimate> for Estimate {
    fn from(e: CoverageEstimate) -> Self {
        Self {
            mean: e.mean,
            ci95_half_width: e.ci95_half_width,
            std_dev: e.std_dev,
            n_samples: e.n_samples,
            seed: e.seed,
        }
    }
}

#[pymethods]
impl Estimate {
    fn __repr__(&self) -> String {
        format!("Estimate(mean={}, ci95_half_width={}, n_samples={})", self.mean, self.ci95_half_width, self.n_samples)
    }
}

/// A coverage policy built for a fleet on a square environment.
#[pyclass(frozen, module = "dtrp")]
pub struct Policy {
    inner: dtrp_core::Policy,
    env: Environment,
}

#[pymethods]
impl Policy {
    /// Builds policy `kind` (`"ms"`, `"sl"` or `"mc"`) for `m` robots.
    #[new]
    #[pyo3(signature = (kind, m, model, side=1.0, seed=0))]
    fn new(kind: &str, m: usize, model: &Model, side: f64, seed: u64) -> PyResult<Self> {
        let env = square(side)?;
        let inner = dtrp_core::Policy::build(policy_kind(kind)?, m, &model.inner, &env, seed).map_err(py_err)?;
        Ok(Self { inner, env })
    }

    #[getter]
    fn kind(&self) -> &'static str {
        self.inner.kind().label()
    }

    #[getter]
    fn m(&self) -> usize {
        self.inner.m()
    }

    /// Wait for a target at `(x, y)`; `seed` drives the loiter phase of
    /// Strip Loitering and is ignored by the other policies.
    #[pyo3(signature = (x, y, seed=0))]
    fn wait_time(&self, x: f64, y: f64, seed: u64) -> f64 {
        let mut rng = dtrp_core::rng::stream_rng(seed, 0);
        self.inner.wait_time(Point2::new(x, y), &mut rng)
    }

    /// Expected wait for a uniformly distributed target.
    #[pyo3(signature = (samples=sim::DEFAULT_SAMPLES, seed=0))]
    fn estimate(&self, py: Python<'_>, samples: usize, seed: u64) -> PyResult<Estimate> {
        py.detach(|| sim::estimate_coverage_cost(&self.inner, &self.env, samples, seed)).map(Into::into).map_err(py_err)
    }
}

/// Lloyd/Weiszfeld m-median: `(points, H_m)`.
#[pyfunction]
#[pyo3(signature = (m, side=1.0, seed=0))]
fn median(py: Python<'_>, m: usize, side: f64, seed: u64) -> PyResult<(Vec<(f64, f64)>, f64)> {
    let env = square(side)?;
    let opts = LloydOptions::default();
    let sol = py.detach(|| med::lloyd_median_descent(m, &env, seed, opts.max_iter, opts.tol)).map_err(py_err)?;
    Ok((sol.points.iter().map(|p| (p.x, p.y)).collect(), sol.value))
}

/// Honeycomb placement of `m` points: `(points, H_m)`.
#[pyfunction]
#[pyo3(signature = (m, side=1.0))]
fn honeycomb(m: usize, side: f64) -> PyResult<(Vec<(f64, f64)>, f64)> {
    let env = square(side)?;
    let p = med::honeycomb_placement(m, &env).map_err(py_err)?;
    let value = med::evaluate_hm(&p.points, &env).map_err(py_err)?;
    Ok((p.points.iter().map(|p| (p.x, p.y)).collect(), value))
}

/// Expected distance to the nearest of `points` for a uniform target.
#[pyfunction]
#[pyo3(signature = (points, side=1.0))]
fn evaluate_hm(points: Vec<(f64, f64)>, side: f64) -> PyResult<f64> {
    let pts: Vec<Point2> = points.into_iter().map(Point2::from).collect();
    med::evaluate_hm(&pts, &square(side)?).map_err(py_err)
}

/// `(lower, upper)` sandwich on the optimal m-median value.
#[pyfunction]
#[pyo3(signature = (m, side=1.0))]
fn weber_bounds(m: usize, side: f64) -> PyResult<(f64, f64)> {
    let b = med::weber_bounds(m, &square(side)?).map_err(py_err)?;
    Ok((b.lower, b.upper))
}

/// Minimum time from rest to a point at distance `d` for a double integrator.
#[pyfunction]
fn di_time_from_rest(d: f64, v_max: f64, u_max: f64) -> PyResult<f64> {
    if d.is_nan() || d < 0.0 {
        return Err(PyValueError::new_err("distance must be non-negative"));
    }
    Ok(dynamics::di_time_from_rest_distance(d, &DIParams::new(v_max, u_max).map_err(py_err)?))
}

/// Turn-then-drive time for a differential drive at `(x, y, heading)`.
#[pyfunction]
fn dd_travel_time(x: f64, y: f64, heading: f64, qx: f64, qy: f64, rho: f64, w_max: f64) -> PyResult<f64> {
    let params = DDParams::new(rho, w_max).map_err(py_err)?;
    Ok(dynamics::dd_travel_time(&DDState::new(Point2::new(x, y), heading), Point2::new(qx, qy), &params))
}

/// Builds `kind` for `m` robots and estimates its mean wait.
#[pyfunction]
#[pyo3(signature = (kind, m, model, side=1.0, samples=sim::DEFAULT_SAMPLES, seed=0))]
fn estimate(
    py: Python<'_>,
    kind: &str,
    m: usize,
    model: &Model,
    side: f64,
    samples: usize,
    seed: u64,
) -> PyResult<Estimate> {
    let env = square(side)?;
    let kind = policy_kind(kind)?;
    let model = model.inner;
    let (_, est) = py.detach(|| sim::evaluate_policy(kind, &model, &env, m, samples, seed)).map_err(py_err)?;
    Ok(est.into())
}

/// Rows `(m, Estimate)`, slope and slope standard error.
type SweepOutput = (Vec<(usize, Estimate)>, f64, f64);

/// Estimates over `m_list`: `(rows, slope, slope_stderr)` with rows
/// `(m, Estimate)`.
#[pyfunction]
#[pyo3(signature = (kind, model, m_list, side=1.0, samples=sim::DEFAULT_SAMPLES, seed=0))]
fn sweep(
    py: Python<'_>,
    kind: &str,
    model: &Model,
    m_list: Vec<usize>,
    side: f64,
    samples: usize,
    seed: u64,
) -> PyResult<SweepOutput> {
    let env = square(side)?;
    let kind = policy_kind(kind)?;
    let model = model.inner;
    let r = py.detach(|| sim::scaling_sweep(kind, &model, &env, &m_list, samples, seed)).map_err(py_err)?;
    let rows = r.rows.into_iter().map(|row| (row.m, row.estimate.into())).collect();
    Ok((rows, r.fit.slope, r.fit.slope_stderr))
}

/// Fleet size where `challenger` overtakes `baseline`: `(m_star, m_low,
/// m_high, resolved)`. Raises `NoCrossoverError` when the ends agree.
#[pyfunction]
#[pyo3(signature = (baseline, challenger, model, m_min=4, m_max=4096, side=1.0, samples=sim::DEFAULT_SAMPLES, seed=0))]
#[allow(clippy::too_many_arguments)]
fn crossover(
    py: Python<'_>,
    baseline: &str,
    challenger: &str,
    model: &Model,
    m_min: usize,
    m_max: usize,
    side: f64,
    samples: usize,
    seed: u64,
) -> PyResult<(usize, usize, usize, bool)> {
    let env = square(side)?;
    let (a, b) = (policy_kind(baseline)?, policy_kind(challenger)?);
    let model = model.inner;
    let options = CrossoverOptions { n_samples: samples, ..CrossoverOptions::default() };
    let r = py.detach(|| sim::crossover_find(a, b, &model, &env, m_min, m_max, options, seed)).map_err(py_err)?;
    Ok((r.m_star, r.m_low, r.m_high, r.resolved))
}

/// Every applicable bound as `(name, kind, validity, value)`. `hm` feeds the
/// median-dependent bounds; it defaults to the analytic Weber lower bound.
#[pyfunction]
#[pyo3(signature = (model, m, side=1.0, hm=None))]
fn all_bounds(model: &Model, m: usize, side: f64, hm: Option<f64>) -> PyResult<Vec<(String, String, String, f64)>> {
    let env = square(side)?;
    let hm = match hm {
        Some(v) => v,
        None => med::weber_bounds(m, &env).map_err(py_err)?.lower,
    };
    let reports = bounds::all_bounds(&model.inner, m, &env, hm).map_err(py_err)?;
    Ok(reports.into_iter().map(|b| (b.name.to_string(), b.kind.to_string(), b.validity.to_string(), b.value)).collect())
}

#[pymodule]
fn dtrp(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Model>()?;
    m.add_class::<Estimate>()?;
    m.add_class::<Policy>()?;
    m.add("NoCrossoverError", m.py().get_type::<NoCrossoverError>())?;
    m.add_function(wrap_pyfunction!(median, m)?)?;
    m.add_function(wrap_pyfunction!(honeycomb, m)?)?;
    m.add_function(wrap_pyfunction!(evaluate_hm, m)?)?;
    m.add_function(wrap_pyfunction!(weber_bounds, m)?)?;
    m.add_function(wrap_pyfunction!(di_time_from_rest, m)?)?;
    m.add_function(wrap_pyfunction!(dd_travel_time, m)?)?;
    m.add_function(wrap_pyfunction!(estimate, m)?)?;
    m.add_function(wrap_pyfunction!(sweep, m)?)?;
    m.add_function(wrap_pyfunction!(crossover, m)?)?;
    m.add_function(wrap_pyfunction!(all_bounds, m)?)?;
    Ok(())
}
