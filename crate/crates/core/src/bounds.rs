//! Closed-form lower and upper bounds on the light-load coverage cost.
//!
//! Bounds that need the m-median value take it as `hm_value`, so callers
//! decide whether to pass a solver result, a honeycomb value or the analytic
//! lower bound from [`crate::median::weber_bounds`].

use std::f64::consts::PI;
use std::fmt;

use crate::dynamics::{DDParams, DIParams, RobotModel};
use crate::geometry::Environment;
use crate::policies::{mc_team_size, SlParameters};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Validity {
    /// Holds for every `m` (given its inputs).
    Exact,
    /// Leading-order or limsup statement; only meaningful for large `m`.
    Asymptotic,
}

impl fmt::Display for Validity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Validity::Exact => "exact",
            Validity::Asymptotic => "asymptotic",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundKind {
    Lower,
    Upper,
}

impl fmt::Display for BoundKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BoundKind::Lower => "lower",
            BoundKind::Upper => "upper",
        })
    }
}

/// One evaluated bound with the inputs it was evaluated at.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    pub name: &'static str,
    pub kind: BoundKind,
    pub value: f64,
    pub validity: Validity,
    pub inputs: Vec<(&'static str, f64)>,
}

impl BoundReport {
    fn new(
        name: &'static str,
        kind: BoundKind,
        value: f64,
        validity: Validity,
        inputs: Vec<(&'static str, f64)>,
    ) -> Self {
        debug_assert!(value >= 0.0, "{name} = {value}");
        Self { name, kind, value, validity, inputs }
    }
}

fn check_m(m: usize) -> Result<()> {
    if m == 0 {
        Err(Error::InvalidParameter("m must be at least 1".into()))
    } else {
        Ok(())
    }
}

fn check_hm(hm: f64) -> Result<()> {
    if hm >= 0.0 && hm.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("median value must be non-negative, got {hm}")))
    }
}

fn model_inputs(model: &RobotModel, m: usize, area: f64) -> Vec<(&'static str, f64)> {
    let mut v = vec![("m", m as f64), ("area", area)];
    match model {
        RobotModel::DoubleIntegrator(p) => v.extend([("v_max", p.v_max), ("u_max", p.u_max)]),
        RobotModel::DifferentialDrive(p) => v.extend([("rho", p.rho), ("w_max", p.w_max)]),
    }
    v
}

/// Relaxed-dynamics lower bound `H*_m / v_max` (DI) or `H*_m / w_max` (DD).
pub fn lemma1_lower(model: &RobotModel, m: usize, env: &Environment, hm_value: f64) -> Result<BoundReport> {
    check_m(m)?;
    check_hm(hm_value)?;
    let mut inputs = model_inputs(model, m, env.area());
    inputs.push(("hm", hm_value));
    Ok(BoundReport::new("lemma1", BoundKind::Lower, hm_value / model.max_speed(), Validity::Exact, inputs))
}

/// Asymptotic lower bound from the reachable-set volume argument:
/// DI `(1/24)(A/(2v u))^{1/3} m^{-1/3}`, DD `(1/(5w))(6ρA/5)^{1/3} m^{-1/3}`.
pub fn thm1_asymptotic_lower(model: &RobotModel, m: usize, env: &Environment) -> Result<BoundReport> {
    check_m(m)?;
    let a = env.area();
    let scale = (m as f64).cbrt();
    let value = match model {
        RobotModel::DoubleIntegrator(p) => (a / (2.0 * p.v_max * p.u_max)).cbrt() / 24.0 / scale,
        RobotModel::DifferentialDrive(p) => (6.0 * p.rho * a / 5.0).cbrt() / (5.0 * p.w_max) / scale,
    };
    Ok(BoundReport::new("thm1", BoundKind::Lower, value, Validity::Asymptotic, model_inputs(model, m, a)))
}

/// Median Stationing upper bound: DI `hm/v + v/(2u) + √(2√(2A)/u)`,
/// DD `hm/w + ρπ/(2w)`.
pub fn thm2_ms_upper(model: &RobotModel, m: usize, env: &Environment, hm_value: f64) -> Result<BoundReport> {
    check_m(m)?;
    check_hm(hm_value)?;
    let a = env.area();
    let value = match model {
        RobotModel::DoubleIntegrator(p) => {
            hm_value / p.v_max + p.v_max / (2.0 * p.u_max) + (2.0 * (2.0 * a).sqrt() / p.u_max).sqrt()
        }
        RobotModel::DifferentialDrive(p) => hm_value / p.w_max + p.rho * PI / (2.0 * p.w_max),
    };
    let mut inputs = model_inputs(model, m, a);
    inputs.push(("hm", hm_value));
    Ok(BoundReport::new("thm2", BoundKind::Upper, value, Validity::Exact, inputs))
}

/// Dense-fleet lower bound for Median Stationing: DI `0.321 (A/u²)^{1/4} m^{-1/4}`,
/// DD `πρ/(4w)`.
pub fn thm3_ms_dense_lower(model: &RobotModel, m: usize, env: &Environment) -> Result<BoundReport> {
    check_m(m)?;
    let a = env.area();
    let value = match model {
        RobotModel::DoubleIntegrator(p) => 0.321 * (a / (p.u_max * p.u_max)).powf(0.25) / (m as f64).powf(0.25),
        RobotModel::DifferentialDrive(p) => PI * p.rho / (4.0 * p.w_max),
    };
    Ok(BoundReport::new("thm3", BoundKind::Lower, value, Validity::Asymptotic, model_inputs(model, m, a)))
}

/// A policy bound evaluated both at finite `m` and in its asymptotic form.
#[derive(Debug, Clone, PartialEq)]
pub struct PolicyBound {
    pub finite: BoundReport,
    pub asymptotic: BoundReport,
}

/// Strip Loitering upper bound. The finite form is
/// `(A + 10.38ρ*√A)/(2m w v*) + (2√A + 6.19ρ*)/(m v*) + (3/(4v*))√(ρ* w)`
/// at the policy's strip width; the asymptotic form is
/// `(1.238/v*)(ρ*A + 10.38ρ*²√A)^{1/3} m^{-1/3}`.
pub fn thm4_sl_upper(m: usize, env: &Environment, params: &DIParams) -> Result<PolicyBound> {
    check_m(m)?;
    let a = env.area();
    let side = a.sqrt();
    let sl = SlParameters::new(m, params, a)?;
    let (v, rho, w) = (sl.v_star, sl.rho_star, sl.strip_width);
    let mf = m as f64;
    let finite = (a + 10.38 * rho * side) / (2.0 * mf * w * v)
        + (2.0 * side + 6.19 * rho) / (mf * v)
        + 0.75 / v * (rho * w).sqrt();
    let asymptotic = 1.238 / v * (rho * a + 10.38 * rho * rho * side).cbrt() / mf.cbrt();
    let inputs = vec![
        ("m", mf),
        ("area", a),
        ("v_max", params.v_max),
        ("u_max", params.u_max),
        ("v_star", v),
        ("rho_star", rho),
        ("strip_width", w),
    ];
    Ok(PolicyBound {
        finite: BoundReport::new("thm4", BoundKind::Upper, finite, Validity::Exact, inputs.clone()),
        asymptotic: BoundReport::new("thm4_asym", BoundKind::Upper, asymptotic, Validity::Asymptotic, inputs),
    })
}

/// `(0.38/w)√(A·k/m) + πρ/(2wk)`, the Median Clustering bound at team size `k`.
pub fn mc_bound_at(k: f64, m: usize, area: f64, params: &DDParams) -> f64 {
    0.38 / params.w_max * (area * k / m as f64).sqrt() + PI * params.rho / (2.0 * params.w_max * k)
}

/// The real team size minimizing [`mc_bound_at`], `(πρ√m / (0.38√A))^{2/3}`.
pub fn mc_optimal_real_k(m: usize, area: f64, params: &DDParams) -> f64 {
    let a = 0.38 / params.w_max * (area / m as f64).sqrt();
    let b = PI * params.rho / (2.0 * params.w_max);
    (2.0 * b / a).powf(2.0 / 3.0)
}

/// Median Clustering upper bound: the finite form is [`mc_bound_at`] at the
/// policy's integer team size; the asymptotic form is
/// `(1.15/w)(ρA)^{1/3} m^{-1/3}`.
pub fn thm5_mc_upper(m: usize, env: &Environment, params: &DDParams) -> Result<PolicyBound> {
    check_m(m)?;
    let a = env.area();
    let k = mc_team_size(m, params.rho, a);
    let finite = mc_bound_at(k as f64, m, a, params);
    let asymptotic = 1.15 / params.w_max * (params.rho * a).cbrt() / (m as f64).cbrt();
    let inputs = vec![("m", m as f64), ("area", a), ("rho", params.rho), ("w_max", params.w_max), ("k", k as f64)];
    Ok(PolicyBound {
        finite: BoundReport::new("thm5", BoundKind::Upper, finite, Validity::Asymptotic, inputs.clone()),
        asymptotic: BoundReport::new("thm5_asym", BoundKind::Upper, asymptotic, Validity::Asymptotic, inputs),
    })
}

/// Every bound that applies to `model`, in a fixed order.
pub fn all_bounds(model: &RobotModel, m: usize, env: &Environment, hm_value: f64) -> Result<Vec<BoundReport>> {
    let mut out = vec![
        lemma1_lower(model, m, env, hm_value)?,
        thm1_asymptotic_lower(model, m, env)?,
        thm2_ms_upper(model, m, env, hm_value)?,
        thm3_ms_dense_lower(model, m, env)?,
    ];
    let policy = match model {
        RobotModel::DoubleIntegrator(p) => thm4_sl_upper(m, env, p)?,
        RobotModel::DifferentialDrive(p) => thm5_mc_upper(m, env, p)?,
    };
    out.push(policy.finite);
    out.push(policy.asymptotic);
    Ok(out)
}
