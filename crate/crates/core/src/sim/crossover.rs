use crate::dynamics::RobotModel;
use crate::geometry::Environment;
use crate::policies::{Policy, PolicyKind};
use crate::{Error, Result};

use super::{estimate_coverage_cost, policy_seed, sample_seed, CoverageEstimate};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CrossoverOptions {
    pub n_samples: usize,
    /// Sample-count multiplier applied when a comparison is a statistical tie.
    pub growth: usize,
    /// How many times a tie may be retried with more samples.
    pub max_escalations: usize,
}

impl Default for CrossoverOptions {
    fn default() -> Self {
        Self { n_samples: super::DEFAULT_SAMPLES, growth: 4, max_escalations: 2 }
    }
}

/// Both policies estimated at one fleet size.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CrossoverProbe {
    pub m: usize,
    pub a: CoverageEstimate,
    pub b: CoverageEstimate,
}

impl CrossoverProbe {
    /// `T_A − T_B`.
    pub fn difference(&self) -> f64 {
        self.a.mean - self.b.mean
    }

    /// 95% half-width of the difference, treating the estimates as independent.
    pub fn difference_ci(&self) -> f64 {
        self.a.ci95_half_width.hypot(self.b.ci95_half_width)
    }

    /// `Some(true)` when A is confidently slower, `Some(false)` when confidently
    /// faster, `None` on a statistical tie.
    pub fn a_slower(&self) -> Option<bool> {
        let d = self.difference();
        if d.abs() > self.difference_ci() {
            Some(d > 0.0)
        } else {
            None
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CrossoverResult {
    pub policy_a: PolicyKind,
    pub policy_b: PolicyKind,
    /// Midpoint of the final bracket.
    pub m_star: usize,
    pub m_low: usize,
    pub m_high: usize,
    pub low: CrossoverProbe,
    pub high: CrossoverProbe,
    /// `false` when bisection stopped on a tie before the bracket shrank to 2.
    pub resolved: bool,
    /// Every probe, in evaluation order.
    pub probes: Vec<CrossoverProbe>,
}

/// Locates the fleet size where policies `a` and `b` trade places.
///
/// The two ends of `[m_low, m_high]` must show opposite confident signs of
/// `T_A − T_B`; otherwise the result is [`Error::NoCrossover`]. The bracket is
/// then bisected on integer `m` until it is at most 2 wide. Ties are retried
/// with `growth×` more samples up to `max_escalations` times; a tie that
/// survives stops the bisection with `resolved = false`.
#[allow(clippy::too_many_arguments)]
pub fn crossover_find(
    a: PolicyKind,
    b: PolicyKind,
    model: &RobotModel,
    env: &Environment,
    m_low: usize,
    m_high: usize,
    options: CrossoverOptions,
    seed: u64,
) -> Result<CrossoverResult> {
    if m_low == 0 || m_high <= m_low {
        return Err(Error::InvalidParameter(format!("need 1 ≤ m_low < m_high, got [{m_low}, {m_high}]")));
    }
    if a == b {
        return Err(Error::InvalidParameter("crossover needs two different policies".into()));
    }
    let mut probes = Vec::new();
    let mut lo = probe(a, b, model, env, m_low, seed, &options)?;
    let mut hi = probe(a, b, model, env, m_high, seed, &options)?;
    probes.push(lo);
    probes.push(hi);
    let (lo_sign, hi_sign) = match (lo.a_slower(), hi.a_slower()) {
        (Some(x), Some(y)) if x != y => (x, y),
        _ => {
            return Err(Error::NoCrossover {
                m_low,
                m_high,
                detail: format!(
                    "{a} − {b} = {:.6} ± {:.6} at m = {m_low} and {:.6} ± {:.6} at m = {m_high}",
                    lo.difference(),
                    lo.difference_ci(),
                    hi.difference(),
                    hi.difference_ci()
                ),
            })
        }
    };
    debug_assert_ne!(lo_sign, hi_sign);

    let mut resolved = true;
    while hi.m - lo.m > 2 {
        let mid = lo.m + (hi.m - lo.m) / 2;
        let p = probe(a, b, model, env, mid, seed, &options)?;
        probes.push(p);
        match p.a_slower() {
            Some(s) if s == lo_sign => lo = p,
            Some(_) => hi = p,
            None => {
                log::info!("crossover: tie at m = {mid}; stopping with bracket [{}, {}]", lo.m, hi.m);
                resolved = false;
                break;
            }
        }
    }
    Ok(CrossoverResult {
        policy_a: a,
        policy_b: b,
        m_star: lo.m + (hi.m - lo.m) / 2,
        m_low: lo.m,
        m_high: hi.m,
        low: lo,
        high: hi,
        resolved,
        probes,
    })
}

fn probe(
    a: PolicyKind,
    b: PolicyKind,
    model: &RobotModel,
    env: &Environment,
    m: usize,
    seed: u64,
    options: &CrossoverOptions,
) -> Result<CrossoverProbe> {
    let pa = Policy::build(a, m, model, env, policy_seed(seed, m, a))?;
    let pb = Policy::build(b, m, model, env, policy_seed(seed, m, b))?;
    let mut n = options.n_samples;
    let mut escalations = 0;
    loop {
        let mut ea = estimate_coverage_cost(&pa, env, n, sample_seed(seed, m))?;
        let mut eb = estimate_coverage_cost(&pb, env, n, sample_seed(seed, m))?;
        ea.seed = seed;
        eb.seed = seed;
        let p = CrossoverProbe { m, a: ea, b: eb };
        log::debug!("crossover probe m = {m}, n = {n}: {a} {:.6} vs {b} {:.6}", ea.mean, eb.mean);
        if p.a_slower().is_some() || escalations >= options.max_escalations {
            return Ok(p);
        }
        escalations += 1;
        n *= options.growth;
    }
}
