//! Monte Carlo estimation of the coverage cost, scaling sweeps and crossover
//! search.
//!
//! Sample `i` of an estimate draws from its own ChaCha stream `i` under the
//! estimate's seed, and samples are reduced in fixed-size chunks combined in
//! chunk order, so results are bit-for-bit independent of the worker count.

mod crossover;
mod sweep;

pub use crossover::{crossover_find, CrossoverOptions, CrossoverProbe, CrossoverResult};
pub use sweep::{fit_log_log, scaling_sweep, LogLogFit, SweepResult, SweepRow};

use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::dynamics::RobotModel;
use crate::geometry::{sample_uniform, Environment, Point2};
use crate::policies::{Policy, PolicyKind};
use crate::rng::{derive_seed, label_hash, stream_rng};
use crate::{Error, Result};

/// Default sample count of an estimate.
pub const DEFAULT_SAMPLES: usize = 100_000;
/// Smallest accepted sample count.
pub const MIN_SAMPLES: usize = 100;
/// Normal quantile of the two-sided 95% interval.
pub const Z95: f64 = 1.959_963_984_540_054;

const CHUNK: usize = 2048;

/// Sample mean of the wait with a 95% normal-approximation half-width.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoverageEstimate {
    pub mean: f64,
    pub ci95_half_width: f64,
    /// Sample standard deviation.
    pub std_dev: f64,
    pub n_samples: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, Copy)]
struct Moments {
    n: usize,
    mean: f64,
    m2: f64,
}

impl Moments {
    const EMPTY: Moments = Moments { n: 0, mean: 0.0, m2: 0.0 };

    fn push(&mut self, x: f64) {
        self.n += 1;
        let d = x - self.mean;
        self.mean += d / self.n as f64;
        self.m2 += d * (x - self.mean);
    }

    fn merge(self, other: Moments) -> Moments {
        if self.n == 0 {
            return other;
        }
        if other.n == 0 {
            return self;
        }
        let n = self.n + other.n;
        let d = other.mean - self.mean;
        let mean = self.mean + d * other.n as f64 / n as f64;
        let m2 = self.m2 + other.m2 + d * d * (self.n as f64 * other.n as f64 / n as f64);
        Moments { n, mean, m2 }
    }
}

/// Mean of `f(q, rng)` over `n_samples` uniform targets `q`.
///
/// `rng` is the sample's own stream after `q` has been drawn from it.
pub fn estimate_mean<F>(env: &Environment, n_samples: usize, seed: u64, f: F) -> Result<CoverageEstimate>
where
    F: Fn(Point2, &mut ChaCha8Rng) -> f64 + Sync,
{
    if n_samples < MIN_SAMPLES {
        return Err(Error::InvalidParameter(format!("need at least {MIN_SAMPLES} samples, got {n_samples}")));
    }
    let chunks = n_samples.div_ceil(CHUNK);
    let partial: Vec<Moments> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut acc = Moments::EMPTY;
            for i in c * CHUNK..((c + 1) * CHUNK).min(n_samples) {
                let mut rng = stream_rng(seed, i as u64);
                let q = sample_uniform(env, &mut rng);
                acc.push(f(q, &mut rng));
            }
            acc
        })
        .collect();
    let total = partial.into_iter().fold(Moments::EMPTY, Moments::merge);
    let var = total.m2 / (total.n - 1) as f64;
    let std_dev = var.max(0.0).sqrt();
    Ok(CoverageEstimate {
        mean: total.mean,
        ci95_half_width: Z95 * std_dev / (total.n as f64).sqrt(),
        std_dev,
        n_samples,
        seed,
    })
}

/// Expected wait of a built policy for a uniformly distributed target.
pub fn estimate_coverage_cost(
    policy: &Policy,
    env: &Environment,
    n_samples: usize,
    seed: u64,
) -> Result<CoverageEstimate> {
    estimate_mean(env, n_samples, seed, |q, rng| policy.wait_time(q, rng))
}

/// Seed of the policy built for fleet size `m` under a master seed.
pub fn policy_seed(master: u64, m: usize, kind: PolicyKind) -> u64 {
    derive_seed(master, &[m as u64, label_hash(kind.label())])
}

/// Seed of the target samples at fleet size `m`. Shared by all policies, so
/// comparisons at one `m` see the same targets.
pub fn sample_seed(master: u64, m: usize) -> u64 {
    derive_seed(master, &[m as u64, label_hash("targets")])
}

/// Builds `kind` for `m` robots and estimates its coverage cost, with seeds
/// derived from `master`.
pub fn evaluate_policy(
    kind: PolicyKind,
    model: &RobotModel,
    env: &Environment,
    m: usize,
    n_samples: usize,
    master: u64,
) -> Result<(Policy, CoverageEstimate)> {
    let policy = Policy::build(kind, m, model, env, policy_seed(master, m, kind))?;
    let mut est = estimate_coverage_cost(&policy, env, n_samples, sample_seed(master, m))?;
    est.seed = master;
    Ok((policy, est))
}
