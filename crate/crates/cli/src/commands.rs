use std::f64::consts::PI;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use dtrp_core::bounds::{
    lemma1_lower, thm1_asymptotic_lower, thm2_ms_upper, thm3_ms_dense_lower, thm4_sl_upper, thm5_mc_upper, BoundReport,
};
use dtrp_core::dynamics::{dd_primitive_reachable_area, dd_reachable_area_bounds};
use dtrp_core::median::{lloyd_median_descent, weber_bounds, LloydOptions};
use dtrp_core::policies::MsPolicy;
use dtrp_core::sim::{crossover_find, evaluate_policy, scaling_sweep, CoverageEstimate, CrossoverOptions};
use dtrp_core::{Environment, Policy, PolicyKind, RobotModel};

use crate::config::ExperimentConfig;
use crate::svg::{LogLogPlot, ReferenceLine, Series};
use crate::CliError;

/// Column names shared by `sweep` and `crossover` output.
pub const CSV_HEADER: [&str; 7] = ["m", "policy", "model", "mean_wait", "ci95_half", "n_samples", "seed"];

fn output(cfg: &ExperimentConfig) -> Result<csv::Writer<Box<dyn Write>>, CliError> {
    let sink: Box<dyn Write> = match &cfg.out {
        Some(path) => Box::new(BufWriter::new(File::create(path).map_err(|e| CliError::io(path, e))?)),
        None => Box::new(io::stdout().lock()),
    };
    Ok(csv::Writer::from_writer(sink))
}

fn estimate_record(m: usize, policy: PolicyKind, model: &RobotModel, est: &CoverageEstimate) -> Vec<String> {
    vec![
        m.to_string(),
        policy.label().to_string(),
        model.label().to_string(),
        est.mean.to_string(),
        est.ci95_half_width.to_string(),
        est.n_samples.to_string(),
        est.seed.to_string(),
    ]
}

fn no_svg(cfg: &ExperimentConfig, command: &str) -> Result<(), CliError> {
    if cfg.svg.is_some() {
        return Err(CliError::Config(format!("--svg is not supported by `{command}`")));
    }
    Ok(())
}

pub fn median(cfg: &ExperimentConfig) -> Result<(), CliError> {
    no_svg(cfg, "median")?;
    let m = cfg.require_m()?;
    let env = cfg.environment()?;
    let opts = LloydOptions::default();
    let sol = lloyd_median_descent(m, &env, cfg.seed, opts.max_iter, opts.tol)?;
    let wb = weber_bounds(m, &env)?;
    let mut w = output(cfg)?;
    w.write_record(["index", "x", "y"])?;
    for (i, p) in sol.points.iter().enumerate() {
        w.write_record([i.to_string(), p.x.to_string(), p.y.to_string()])?;
    }
    w.flush()?;
    eprintln!(
        "m={m} side={} H_m={} weber_lower={} weber_upper={} iterations={} converged={}",
        cfg.side, sol.value, wb.lower, wb.upper, sol.iterations, sol.converged
    );
    Ok(())
}

pub fn estimate(cfg: &ExperimentConfig) -> Result<(), CliError> {
    no_svg(cfg, "estimate")?;
    cfg.require_policy_supported(cfg.policy)?;
    let m = cfg.require_m()?;
    let env = cfg.environment()?;
    let (policy, est) = evaluate_policy(cfg.policy, &cfg.model, &env, m, cfg.samples, cfg.seed)?;
    let lower = lemma1_lower(&cfg.model, m, &env, weber_bounds(m, &env)?.lower)?;
    let upper = policy_upper(&policy, &cfg.model, m, &env)?;
    let mut w = output(cfg)?;
    let mut header: Vec<&str> = CSV_HEADER.to_vec();
    header.extend(["lemma1_lower", "upper_bound", "upper_bound_name"]);
    w.write_record(&header)?;
    let mut row = estimate_record(m, cfg.policy, &cfg.model, &est);
    row.extend([lower.value.to_string(), upper.value.to_string(), upper.name.to_string()]);
    w.write_record(&row)?;
    w.flush()?;
    eprintln!(
        "{} {} m={m}: mean wait {:.6} ± {:.6} (lemma1 {:.6}, {} {:.6})",
        cfg.policy,
        cfg.model.label(),
        est.mean,
        est.ci95_half_width,
        lower.value,
        upper.name,
        upper.value
    );
    Ok(())
}

/// The upper bound that applies to a built policy, evaluated at its own
/// parameters.
fn policy_upper(policy: &Policy, model: &RobotModel, m: usize, env: &Environment) -> Result<BoundReport, CliError> {
    Ok(match policy {
        Policy::MedianStationing(ms) => thm2_ms_upper(model, m, env, ms.median().value)?,
        Policy::StripLoitering(sl) => thm4_sl_upper(m, env, &sl.params())?.finite,
        Policy::MedianClustering(mc) => thm5_mc_upper(m, env, &mc.params())?.finite,
    })
}

pub fn sweep(cfg: &ExperimentConfig) -> Result<(), CliError> {
    cfg.require_policy_supported(cfg.policy)?;
    let m_list = cfg.m_list.as_deref().ok_or_else(|| CliError::Config("--m-list is required".into()))?;
    let env = cfg.environment()?;
    let result = scaling_sweep(cfg.policy, &cfg.model, &env, m_list, cfg.samples, cfg.seed)?;
    let mut w = output(cfg)?;
    w.write_record(CSV_HEADER)?;
    for row in &result.rows {
        w.write_record(estimate_record(row.m, row.policy, &cfg.model, &row.estimate))?;
    }
    w.flush()?;
    eprintln!(
        "{} {}: log-log slope {:.4} ± {:.4} (intercept {:.4})",
        cfg.policy,
        cfg.model.label(),
        result.fit.slope,
        result.fit.slope_stderr,
        result.fit.intercept
    );
    if let Some(path) = &cfg.svg {
        let series = Series {
            name: format!("{} ({})", cfg.policy, cfg.model.label()),
            points: result.rows.iter().map(|r| (r.m as f64, r.estimate.mean, r.estimate.ci95_half_width)).collect(),
        };
        let plot = LogLogPlot {
            title: format!("{} coverage cost, {} robots, side {}", cfg.policy, cfg.model.label(), cfg.side),
            x_label: "fleet size m".into(),
            y_label: "expected wait".into(),
            series: vec![series],
            references: reference_lines(cfg.policy, &cfg.model, m_list, &env)?,
        };
        std::fs::write(path, plot.render()).map_err(|e| CliError::io(path, e))?;
    }
    Ok(())
}

/// Bounds drawn next to a sweep of `kind`.
fn reference_lines(
    kind: PolicyKind,
    model: &RobotModel,
    m_list: &[usize],
    env: &Environment,
) -> Result<Vec<ReferenceLine>, CliError> {
    type Eval<'a> = Box<dyn Fn(usize) -> dtrp_core::Result<f64> + 'a>;
    let mut lines: Vec<(&str, Eval)> = vec![
        ("lemma1 lower", Box::new(|m| lemma1_lower(model, m, env, weber_bounds(m, env)?.lower).map(|b| b.value))),
        ("thm1 asymptotic lower", Box::new(|m| thm1_asymptotic_lower(model, m, env).map(|b| b.value))),
    ];
    match (kind, model) {
        (PolicyKind::MedianStationing, _) => {
            lines.push(("thm3 dense lower", Box::new(|m| thm3_ms_dense_lower(model, m, env).map(|b| b.value))));
        }
        (PolicyKind::StripLoitering, RobotModel::DoubleIntegrator(p)) => {
            lines.push((
                "thm4 asymptotic upper",
                Box::new(move |m| thm4_sl_upper(m, env, p).map(|b| b.asymptotic.value)),
            ));
        }
        (PolicyKind::MedianClustering, RobotModel::DifferentialDrive(p)) => {
            lines.push((
                "thm5 asymptotic upper",
                Box::new(move |m| thm5_mc_upper(m, env, p).map(|b| b.asymptotic.value)),
            ));
        }
        _ => {}
    }
    lines
        .into_iter()
        .map(|(name, f)| {
            let points = m_list.iter().map(|&m| Ok((m as f64, f(m)?))).collect::<dtrp_core::Result<Vec<_>>>()?;
            Ok(ReferenceLine { name: name.to_string(), points })
        })
        .collect()
}

pub fn crossover(cfg: &ExperimentConfig) -> Result<(), CliError> {
    no_svg(cfg, "crossover")?;
    let a = cfg.policy;
    let b = cfg.challenger.unwrap_or(match cfg.model {
        RobotModel::DoubleIntegrator(_) => PolicyKind::StripLoitering,
        RobotModel::DifferentialDrive(_) => PolicyKind::MedianClustering,
    });
    cfg.require_policy_supported(a)?;
    cfg.require_policy_supported(b)?;
    if a == b {
        return Err(CliError::Config(format!("--policy and --challenger are both {a}")));
    }
    let env = cfg.environment()?;
    let options = CrossoverOptions { n_samples: cfg.samples, ..CrossoverOptions::default() };
    let r = crossover_find(a, b, &cfg.model, &env, cfg.m_min, cfg.m_max, options, cfg.seed)?;
    let mut w = output(cfg)?;
    w.write_record(CSV_HEADER)?;
    for p in &r.probes {
        w.write_record(estimate_record(p.m, a, &cfg.model, &p.a))?;
        w.write_record(estimate_record(p.m, b, &cfg.model, &p.b))?;
    }
    w.flush()?;
    eprintln!(
        "{a} vs {b} ({}): m_star={} bracket=[{}, {}] resolved={} probes={}",
        cfg.model.label(),
        r.m_star,
        r.m_low,
        r.m_high,
        r.resolved,
        r.probes.len()
    );
    Ok(())
}

pub fn bounds(cfg: &ExperimentConfig) -> Result<(), CliError> {
    no_svg(cfg, "bounds")?;
    let m = cfg.require_m()?;
    let env = cfg.environment()?;
    let model = &cfg.model;
    // the stations Median Stationing would use
    let hm = MsPolicy::build(m, *model, &env, cfg.seed)?.median().value;
    let mut rows = vec![
        lemma1_lower(model, m, &env, weber_bounds(m, &env)?.lower)?,
        thm1_asymptotic_lower(model, m, &env)?,
        thm2_ms_upper(model, m, &env, hm)?,
        thm3_ms_dense_lower(model, m, &env)?,
    ];
    let policy = match model {
        RobotModel::DoubleIntegrator(p) => thm4_sl_upper(m, &env, p)?,
        RobotModel::DifferentialDrive(p) => thm5_mc_upper(m, &env, p)?,
    };
    rows.push(policy.finite);
    rows.push(policy.asymptotic);
    let mut w = output(cfg)?;
    w.write_record(["bound", "kind", "validity", "value", "inputs"])?;
    for b in &rows {
        let inputs: Vec<String> = b.inputs.iter().map(|(k, v)| format!("{k}={v}")).collect();
        w.write_record([
            b.name.to_string(),
            b.kind.to_string(),
            b.validity.to_string(),
            b.value.to_string(),
            inputs.join(";"),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn reachable(cfg: &ExperimentConfig) -> Result<(), CliError> {
    no_svg(cfg, "reachable")?;
    let RobotModel::DifferentialDrive(params) = cfg.model else {
        return Err(CliError::Config("`reachable` tabulates the differential-drive primitive; pass --model dd".into()));
    };
    let t_max = params.rho * PI / (2.0 * params.w_max);
    let ts = cfg.t_list.clone().unwrap_or_else(|| (1..=10).map(|i| t_max * i as f64 / 10.0).collect());
    let mut w = output(cfg)?;
    w.write_record(["t", "primitive_area", "lower", "upper", "valid"])?;
    for t in ts {
        let area = dd_primitive_reachable_area(t, &params)?;
        let b = dd_reachable_area_bounds(t, &params)?;
        w.write_record([
            t.to_string(),
            area.to_string(),
            b.lower.to_string(),
            b.upper.to_string(),
            b.valid.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

impl CliError {
    fn io(path: &Path, e: io::Error) -> Self {
        CliError::Io(format!("{}: {e}", path.display()))
    }
}
