//! Experiment configuration: command-line flags layered over an optional
//! `key = value` file.
//!
//! File schema: one `key = value` per line, `#` starts a comment, blank lines
//! are ignored. Keys are the long flag names without dashes in front
//! (`m-list`, `vmax`, ...); `_` and `-` are interchangeable. Lists are
//! comma-separated. Parameters of the model that is not selected are ignored
//! in the file but rejected on the command line.

use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, ValueEnum};
use dtrp_core::sim::DEFAULT_SAMPLES;
use dtrp_core::{DDParams, DIParams, Environment, PolicyKind, RobotModel};

use crate::CliError;

pub const DEFAULT_SIDE: f64 = 1.0;
pub const DEFAULT_VMAX: f64 = 1.0;
pub const DEFAULT_UMAX: f64 = 1.0;
pub const DEFAULT_RHO: f64 = 0.5;
pub const DEFAULT_WMAX: f64 = 1.0;
pub const DEFAULT_M_MIN: usize = 4;
pub const DEFAULT_M_MAX: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModelName {
    Di,
    Dd,
}

impl FromStr for ModelName {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        <Self as ValueEnum>::from_str(s, true)
    }
}

fn parse_policy(s: &str) -> Result<PolicyKind, String> {
    s.parse::<PolicyKind>().map_err(|e| e.to_string())
}

fn parse_positive(s: &str) -> Result<f64, String> {
    let v: f64 = s.trim().parse().map_err(|_| format!("`{s}` is not a number"))?;
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(format!("`{s}` must be positive and finite"))
    }
}

/// Flags shared by every subcommand. All are optional so that a config file
/// can supply them.
#[derive(Debug, Clone, Default, Args)]
pub struct RawConfig {
    /// Plain-text `key = value` file; flags take precedence.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,

    /// Robot dynamics [default: di].
    #[arg(long, global = true, value_enum)]
    pub model: Option<ModelName>,

    /// Coverage policy: ms, sl or mc [default: ms].
    #[arg(long, global = true, value_parser = parse_policy)]
    pub policy: Option<PolicyKind>,

    /// Second policy for `crossover` [default: mc for dd, sl for di].
    #[arg(long, global = true, value_parser = parse_policy)]
    pub challenger: Option<PolicyKind>,

    /// Fleet size.
    #[arg(long, global = true)]
    pub m: Option<usize>,

    /// Comma-separated fleet sizes for `sweep`.
    #[arg(long = "m-list", global = true, value_delimiter = ',', num_args = 1)]
    pub m_list: Option<Vec<usize>>,

    /// Lower end of the `crossover` search range [default: 4].
    #[arg(long = "m-min", global = true)]
    pub m_min: Option<usize>,

    /// Upper end of the `crossover` search range [default: 4096].
    #[arg(long = "m-max", global = true)]
    pub m_max: Option<usize>,

    /// Side length of the square environment [default: 1].
    #[arg(long, global = true, value_parser = parse_positive)]
    pub side: Option<f64>,

    /// Double-integrator speed limit [default: 1].
    #[arg(long, global = true, value_parser = parse_positive)]
    pub vmax: Option<f64>,

    /// Double-integrator acceleration limit [default: 1].
    #[arg(long, global = true, value_parser = parse_positive)]
    pub umax: Option<f64>,

    /// Differential-drive minimum turning radius [default: 0.5].
    #[arg(long, global = true, value_parser = parse_positive)]
    pub rho: Option<f64>,

    /// Differential-drive wheel speed limit [default: 1].
    #[arg(long, global = true, value_parser = parse_positive)]
    pub wmax: Option<f64>,

    /// Monte Carlo samples per estimate [default: 100000].
    #[arg(long, global = true)]
    pub samples: Option<usize>,

    /// Master seed [default: 0].
    #[arg(long, global = true)]
    pub seed: Option<u64>,

    /// Comma-separated times for `reachable` [default: ten fractions of ρπ/(2w)].
    #[arg(long = "t-list", global = true, value_delimiter = ',', num_args = 1, value_parser = parse_positive)]
    pub t_list: Option<Vec<f64>>,

    /// CSV destination [default: stdout].
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,

    /// SVG plot destination (`sweep` only).
    #[arg(long, global = true, value_name = "PATH")]
    pub svg: Option<PathBuf>,
}

impl RawConfig {
    /// Parses the config-file format.
    pub fn parse_file_contents(text: &str) -> Result<Self, CliError> {
        let mut raw = RawConfig::default();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| CliError::Config(format!("config line {}: expected `key = value`", lineno + 1)))?;
            let key = key.trim().replace('_', "-");
            let value = value.trim();
            raw.set(&key, value).map_err(|e| CliError::Config(format!("config line {}: {e}", lineno + 1)))?;
        }
        Ok(raw)
    }

    pub fn from_file(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse_file_contents(&text)
    }

    fn set(&mut self, key: &str, value: &str) -> Result<(), String> {
        fn int<T: FromStr>(v: &str) -> Result<T, String> {
            v.parse().map_err(|_| format!("`{v}` is not a non-negative integer"))
        }
        fn list<T>(v: &str, f: impl Fn(&str) -> Result<T, String>) -> Result<Vec<T>, String> {
            v.split(',').map(|s| f(s.trim())).collect()
        }
        match key {
            "model" => self.model = Some(value.parse()?),
            "policy" => self.policy = Some(parse_policy(value)?),
            "challenger" => self.challenger = Some(parse_policy(value)?),
            "m" => self.m = Some(int(value)?),
            "m-list" => self.m_list = Some(list(value, int)?),
            "m-min" => self.m_min = Some(int(value)?),
            "m-max" => self.m_max = Some(int(value)?),
            "side" => self.side = Some(parse_positive(value)?),
            "vmax" => self.vmax = Some(parse_positive(value)?),
            "umax" => self.umax = Some(parse_positive(value)?),
            "rho" => self.rho = Some(parse_positive(value)?),
            "wmax" => self.wmax = Some(parse_positive(value)?),
            "samples" => self.samples = Some(int(value)?),
            "seed" => self.seed = Some(int(value)?),
            "t-list" => self.t_list = Some(list(value, parse_positive)?),
            "out" => self.out = Some(PathBuf::from(value)),
            "svg" => self.svg = Some(PathBuf::from(value)),
            "config" => return Err("a config file cannot include another".into()),
            _ => return Err(format!("unknown key `{key}`")),
        }
        Ok(())
    }

    /// Fills every unset field from `file`.
    pub fn or(self, file: RawConfig) -> RawConfig {
        RawConfig {
            config: self.config,
            model: self.model.or(file.model),
            policy: self.policy.or(file.policy),
            challenger: self.challenger.or(file.challenger),
            m: self.m.or(file.m),
            m_list: self.m_list.or(file.m_list),
            m_min: self.m_min.or(file.m_min),
            m_max: self.m_max.or(file.m_max),
            side: self.side.or(file.side),
            vmax: self.vmax.or(file.vmax),
            umax: self.umax.or(file.umax),
            rho: self.rho.or(file.rho),
            wmax: self.wmax.or(file.wmax),
            samples: self.samples.or(file.samples),
            seed: self.seed.or(file.seed),
            t_list: self.t_list.or(file.t_list),
            out: self.out.or(file.out),
            svg: self.svg.or(file.svg),
        }
    }
}

/// A fully resolved experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub side: f64,
    pub model: RobotModel,
    pub policy: PolicyKind,
    pub challenger: Option<PolicyKind>,
    pub m: Option<usize>,
    pub m_list: Option<Vec<usize>>,
    pub m_min: usize,
    pub m_max: usize,
    pub samples: usize,
    pub seed: u64,
    pub t_list: Option<Vec<f64>>,
    pub out: Option<PathBuf>,
    pub svg: Option<PathBuf>,
}

impl ExperimentConfig {
    /// Reads the config file named by `flags` (if any), layers the flags on
    /// top and applies defaults.
    pub fn load(flags: RawConfig) -> Result<Self, CliError> {
        let file = match &flags.config {
            Some(path) => RawConfig::from_file(path)?,
            None => RawConfig::default(),
        };
        let model = flags.model.or(file.model).unwrap_or(ModelName::Di);
        let foreign = match model {
            ModelName::Di => [("--rho", flags.rho.is_some()), ("--wmax", flags.wmax.is_some())],
            ModelName::Dd => [("--vmax", flags.vmax.is_some()), ("--umax", flags.umax.is_some())],
        };
        if let Some((name, _)) = foreign.iter().find(|(_, set)| *set) {
            return Err(CliError::Config(format!("{name} does not apply to the {model:?} model").to_lowercase()));
        }
        Self::resolve(flags.or(file))
    }

    pub fn resolve(raw: RawConfig) -> Result<Self, CliError> {
        let cfg_err = |e: dtrp_core::Error| CliError::Config(e.to_string());
        let model = match raw.model.unwrap_or(ModelName::Di) {
            ModelName::Di => RobotModel::DoubleIntegrator(
                DIParams::new(raw.vmax.unwrap_or(DEFAULT_VMAX), raw.umax.unwrap_or(DEFAULT_UMAX)).map_err(cfg_err)?,
            ),
            ModelName::Dd => RobotModel::DifferentialDrive(
                DDParams::new(raw.rho.unwrap_or(DEFAULT_RHO), raw.wmax.unwrap_or(DEFAULT_WMAX)).map_err(cfg_err)?,
            ),
        };
        if raw.m == Some(0) {
            return Err(CliError::Config("--m must be at least 1".into()));
        }
        if let Some(list) = &raw.m_list {
            if list.is_empty() {
                return Err(CliError::Config("--m-list is empty".into()));
            }
            if list.contains(&0) {
                return Err(CliError::Config("--m-list entries must be at least 1".into()));
            }
        }
        let m_min = raw.m_min.unwrap_or(DEFAULT_M_MIN);
        let m_max = raw.m_max.unwrap_or(DEFAULT_M_MAX);
        if m_min == 0 || m_max <= m_min {
            return Err(CliError::Config(format!("need 1 ≤ m-min < m-max, got {m_min} and {m_max}")));
        }
        Ok(Self {
            side: raw.side.unwrap_or(DEFAULT_SIDE),
            model,
            policy: raw.policy.unwrap_or(PolicyKind::MedianStationing),
            challenger: raw.challenger,
            m: raw.m,
            m_list: raw.m_list,
            m_min,
            m_max,
            samples: raw.samples.unwrap_or(DEFAULT_SAMPLES),
            seed: raw.seed.unwrap_or(0),
            t_list: raw.t_list,
            out: raw.out,
            svg: raw.svg,
        })
    }

    pub fn environment(&self) -> Result<Environment, CliError> {
        Environment::square(self.side).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn require_m(&self) -> Result<usize, CliError> {
        self.m.ok_or_else(|| CliError::Config("--m is required".into()))
    }

    pub fn require_policy_supported(&self, kind: PolicyKind) -> Result<(), CliError> {
        if kind.supports(&self.model) {
            Ok(())
        } else {
            Err(CliError::Config(format!("policy {kind} does not support the {} model", self.model.label())))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn file_parsing() {
        let raw = RawConfig::parse_file_contents(
            "# experiment\nmodel = dd\nrho=0.1 # tight turns\n\nm_list = 16, 32,64\nseed = 9\nout = results.csv\n",
        )
        .unwrap();
        assert_eq!(raw.model, Some(ModelName::Dd));
        assert_eq!(raw.rho, Some(0.1));
        assert_eq!(raw.m_list, Some(vec![16, 32, 64]));
        assert_eq!(raw.seed, Some(9));
        assert_eq!(raw.out, Some(PathBuf::from("results.csv")));
    }

    #[test]
    fn file_errors() {
        assert!(RawConfig::parse_file_contents("m 5").is_err());
        assert!(RawConfig::parse_file_contents("colour = red").is_err());
        assert!(RawConfig::parse_file_contents("rho = -1").is_err());
        assert!(RawConfig::parse_file_contents("policy = xx").is_err());
    }

    #[test]
    fn flags_override_file() {
        let file = RawConfig { m: Some(5), seed: Some(3), ..RawConfig::default() };
        let flags = RawConfig { m: Some(7), ..RawConfig::default() };
        let cfg = ExperimentConfig::resolve(flags.or(file)).unwrap();
        assert_eq!(cfg.m, Some(7));
        assert_eq!(cfg.seed, 3);
    }

    #[test]
    fn defaults() {
        let cfg = ExperimentConfig::resolve(RawConfig::default()).unwrap();
        assert_eq!(cfg.model, RobotModel::DoubleIntegrator(DIParams::new(1.0, 1.0).unwrap()));
        assert_eq!(cfg.policy, PolicyKind::MedianStationing);
        assert_eq!(cfg.samples, DEFAULT_SAMPLES);
        let dd = ExperimentConfig::resolve(RawConfig { model: Some(ModelName::Dd), ..RawConfig::default() }).unwrap();
        assert_eq!(dd.model, RobotModel::DifferentialDrive(DDParams::new(0.5, 1.0).unwrap()));
    }

    #[test]
    fn validation() {
        assert!(ExperimentConfig::resolve(RawConfig { m: Some(0), ..RawConfig::default() }).is_err());
        assert!(ExperimentConfig::resolve(RawConfig { m_list: Some(vec![]), ..RawConfig::default() }).is_err());
        assert!(
            ExperimentConfig::resolve(RawConfig { m_min: Some(9), m_max: Some(9), ..RawConfig::default() }).is_err()
        );
        let wrong = RawConfig { rho: Some(0.2), ..RawConfig::default() };
        assert!(ExperimentConfig::load(wrong).is_err());
        // the other model's keys in a file are ignored
        let file = RawConfig { rho: Some(0.2), ..RawConfig::default() };
        assert!(ExperimentConfig::resolve(RawConfig::default().or(file)).is_ok());
    }
}
