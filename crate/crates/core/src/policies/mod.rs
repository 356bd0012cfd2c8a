//! Stationary coverage policies. Each policy builds its configuration once and
//! then answers "how long does a target at `q` wait" for an isolated target
//! appearing while the fleet is in that configuration.

mod mc;
mod ms;
mod sl;

pub use mc::{mc_team_size, McPolicy};
pub use ms::MsPolicy;
pub use sl::{SlParameters, SlPolicy};

use std::fmt;
use std::str::FromStr;

use rand::Rng;

use crate::dynamics::RobotModel;
use crate::geometry::{Environment, Point2};
use crate::{Error, Result};

/// Seed of the median descent behind MS stations and MC team locations, so
/// the stationary points are the same for every policy seed.
pub(crate) const MEDIAN_SEED: u64 = 0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PolicyKind {
    MedianStationing,
    StripLoitering,
    MedianClustering,
}

impl PolicyKind {
    pub const ALL: [PolicyKind; 3] =
        [PolicyKind::MedianStationing, PolicyKind::StripLoitering, PolicyKind::MedianClustering];

    pub fn label(self) -> &'static str {
        match self {
            PolicyKind::MedianStationing => "ms",
            PolicyKind::StripLoitering => "sl",
            PolicyKind::MedianClustering => "mc",
        }
    }

    /// Whether the policy is defined for robots of this model.
    pub fn supports(self, model: &RobotModel) -> bool {
        !matches!(
            (self, model),
            (PolicyKind::StripLoitering, RobotModel::DifferentialDrive(_))
                | (PolicyKind::MedianClustering, RobotModel::DoubleIntegrator(_))
        )
    }
}

impl fmt::Display for PolicyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for PolicyKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "ms" => Ok(PolicyKind::MedianStationing),
            "sl" => Ok(PolicyKind::StripLoitering),
            "mc" => Ok(PolicyKind::MedianClustering),
            other => Err(Error::InvalidParameter(format!("unknown policy '{other}' (expected ms, sl or mc)"))),
        }
    }
}

/// A built policy.
#[derive(Debug, Clone)]
pub enum Policy {
    MedianStationing(MsPolicy),
    StripLoitering(SlPolicy),
    MedianClustering(McPolicy),
}

impl Policy {
    /// Builds `kind` for `m` robots. SL needs DI robots and MC needs DD robots.
    pub fn build(kind: PolicyKind, m: usize, model: &RobotModel, env: &Environment, seed: u64) -> Result<Self> {
        if !kind.supports(model) {
            return Err(Error::UnsupportedModel { policy: kind.label(), model: model.label() });
        }
        Ok(match (kind, model) {
            (PolicyKind::MedianStationing, _) => Policy::MedianStationing(MsPolicy::build(m, *model, env, seed)?),
            (PolicyKind::StripLoitering, RobotModel::DoubleIntegrator(p)) => {
                Policy::StripLoitering(SlPolicy::build(m, *p, env)?)
            }
            (PolicyKind::MedianClustering, RobotModel::DifferentialDrive(p)) => {
                Policy::MedianClustering(McPolicy::build(m, *p, env, seed)?)
            }
            _ => unreachable!("support checked above"),
        })
    }

    pub fn kind(&self) -> PolicyKind {
        match self {
            Policy::MedianStationing(_) => PolicyKind::MedianStationing,
            Policy::StripLoitering(_) => PolicyKind::StripLoitering,
            Policy::MedianClustering(_) => PolicyKind::MedianClustering,
        }
    }

    pub fn model(&self) -> RobotModel {
        match self {
            Policy::MedianStationing(p) => p.model(),
            Policy::StripLoitering(p) => RobotModel::DoubleIntegrator(p.params()),
            Policy::MedianClustering(p) => RobotModel::DifferentialDrive(p.params()),
        }
    }

    /// Number of robots.
    pub fn m(&self) -> usize {
        match self {
            Policy::MedianStationing(p) => p.stations().len(),
            Policy::StripLoitering(p) => p.m(),
            Policy::MedianClustering(p) => p.m(),
        }
    }

    /// Wait for a target at `q`. Only SL draws from `rng` (the fleet phase).
    pub fn wait_time<R: Rng + ?Sized>(&self, q: Point2, rng: &mut R) -> f64 {
        match self {
            Policy::MedianStationing(p) => p.wait_time(q),
            Policy::StripLoitering(p) => p.wait_time(q, rng),
            Policy::MedianClustering(p) => p.wait_time(q),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{DDParams, DIParams};

    #[test]
    fn parse_and_label() {
        for k in PolicyKind::ALL {
            assert_eq!(k.label().parse::<PolicyKind>().unwrap(), k);
        }
        assert_eq!("MS".parse::<PolicyKind>().unwrap(), PolicyKind::MedianStationing);
        assert!("xx".parse::<PolicyKind>().is_err());
    }

    #[test]
    fn model_mismatch_rejected() {
        let env = Environment::unit_square();
        let dd = RobotModel::DifferentialDrive(DDParams::new(0.1, 1.0).unwrap());
        let di = RobotModel::DoubleIntegrator(DIParams::new(1.0, 1.0).unwrap());
        assert!(matches!(
            Policy::build(PolicyKind::StripLoitering, 4, &dd, &env, 0),
            Err(Error::UnsupportedModel { .. })
        ));
        assert!(matches!(
            Policy::build(PolicyKind::MedianClustering, 4, &di, &env, 0),
            Err(Error::UnsupportedModel { .. })
        ));
        let p = Policy::build(PolicyKind::MedianStationing, 4, &dd, &env, 0).unwrap();
        assert_eq!(p.m(), 4);
        assert_eq!(p.kind(), PolicyKind::MedianStationing);
        assert_eq!(p.model(), dd);
    }
}
