use crate::dynamics::RobotModel;
use crate::geometry::Environment;
use crate::policies::PolicyKind;
use crate::{Error, Result};

use super::{evaluate_policy, CoverageEstimate};

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub m: usize,
    pub policy: PolicyKind,
    pub model: &'static str,
    pub estimate: CoverageEstimate,
}

/// Least-squares line through `(ln m, ln mean)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogLogFit {
    pub slope: f64,
    pub intercept: f64,
    pub slope_stderr: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub rows: Vec<SweepRow>,
    pub fit: LogLogFit,
}

/// Ordinary least squares of `ln y` on `ln x`.
pub fn fit_log_log(xs: &[f64], ys: &[f64]) -> Result<LogLogFit> {
    if xs.len() != ys.len() || xs.len() < 3 {
        return Err(Error::InvalidParameter("a log-log fit needs at least three paired points".into()));
    }
    if xs.iter().chain(ys).any(|&v| !(v > 0.0)) {
        return Err(Error::Internal("non-positive value in log-log fit".into()));
    }
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxx: f64 = lx.iter().map(|x| (x - mx) * (x - mx)).sum();
    if sxx == 0.0 {
        return Err(Error::InvalidParameter("log-log fit needs distinct x values".into()));
    }
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let rss: f64 = lx.iter().zip(&ly).map(|(x, y)| (y - intercept - slope * x).powi(2)).sum();
    let slope_stderr = (rss / (n - 2.0) / sxx).sqrt();
    Ok(LogLogFit { slope, intercept, slope_stderr })
}

/// Estimates `kind` at every `m` in `m_list` (at least four strictly increasing
/// values spanning a decade) and fits the log-log slope.
pub fn scaling_sweep(
    kind: PolicyKind,
    model: &RobotModel,
    env: &Environment,
    m_list: &[usize],
    n_samples: usize,
    seed: u64,
) -> Result<SweepResult> {
    if m_list.len() < 4 {
        return Err(Error::InvalidParameter(format!("a sweep needs at least 4 fleet sizes, got {}", m_list.len())));
    }
    if m_list[0] == 0 || m_list.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidParameter("fleet sizes must be positive and strictly increasing".into()));
    }
    if m_list[m_list.len() - 1] < 10 * m_list[0] {
        return Err(Error::InvalidParameter("fleet sizes must span at least one decade".into()));
    }
    let mut rows = Vec::with_capacity(m_list.len());
    for &m in m_list {
        let (_, estimate) = evaluate_policy(kind, model, env, m, n_samples, seed)?;
        log::info!("sweep {kind} m = {m}: mean {:.6} ± {:.6}", estimate.mean, estimate.ci95_half_width);
        rows.push(SweepRow { m, policy: kind, model: model.label(), estimate });
    }
    let xs: Vec<f64> = rows.iter().map(|r| r.m as f64).collect();
    let ys: Vec<f64> = rows.iter().map(|r| r.estimate.mean).collect();
    let fit = fit_log_log(&xs, &ys)?;
    Ok(SweepResult { rows, fit })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{DDParams, DIParams};
    use proptest::prelude::*;

    #[test]
    fn exact_power_law() {
        let xs = [1.0, 10.0, 100.0, 1000.0];
        let ys: Vec<f64> = xs.iter().map(|x: &f64| 2.0 * x.powf(-0.25)).collect();
        let f = fit_log_log(&xs, &ys).unwrap();
        assert!((f.slope + 0.25).abs() < 1e-12);
        assert!((f.intercept - 2f64.ln()).abs() < 1e-12);
        assert!(f.slope_stderr < 1e-12);
    }

    #[test]
    fn rejects_bad_lists() {
        let env = Environment::unit_square();
        let model = RobotModel::DoubleIntegrator(DIParams::new(1.0, 1.0).unwrap());
        let run = |ms: &[usize]| scaling_sweep(PolicyKind::MedianStationing, &model, &env, ms, 1000, 0);
        assert!(run(&[1, 10, 100]).is_err());
        assert!(run(&[1, 2, 3, 4]).is_err());
        assert!(run(&[4, 2, 30, 40]).is_err());
        assert!(run(&[]).is_err());
    }

    #[test]
    fn small_mc_sweep_decreases() {
        let env = Environment::unit_square();
        let model = RobotModel::DifferentialDrive(DDParams::new(0.1, 1.0).unwrap());
        let r = scaling_sweep(PolicyKind::MedianClustering, &model, &env, &[16, 32, 64, 256], 5_000, 2).unwrap();
        assert_eq!(r.rows.len(), 4);
        assert!(r.fit.slope < 0.0);
        assert!(r.rows.iter().all(|row| row.model == "dd" && row.estimate.seed == 2));
    }

    proptest! {
        #[test]
        fn recovers_slope(slope in -1.0f64..1.0, c in 0.1f64..10.0) {
            let xs = [3.0, 17.0, 90.0, 400.0, 2500.0];
            let ys: Vec<f64> = xs.iter().map(|x: &f64| c * x.powf(slope)).collect();
            let f = fit_log_log(&xs, &ys).unwrap();
            prop_assert!((f.slope - slope).abs() < 1e-9);
        }
    }
}
