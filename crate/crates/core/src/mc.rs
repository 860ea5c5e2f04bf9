//! Monte Carlo simulation of the dependent surplus process.
//!
//! Replication `i` draws from its own ChaCha8 stream (`seed`, stream `i`),
//! and workers take contiguous blocks of replications, so estimates depend
//! only on `(model, u, stop, n, seed)` and not on the number of workers.

use std::num::NonZeroUsize;
use std::thread;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::classical::survival_classical;
use crate::dependence::{sample_pair, InterArrival, ModelSpec};
use crate::erlang::survival_erlang2;
use crate::error::{Result, RuinError};

/// Default distance of the survival proxy level above `u`, in mean claims.
pub const PROXY_MEAN_CLAIMS: f64 = 40.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum StopRule {
    /// Stop when the surplus reaches this level.
    Level(f64),
    /// Stop at this time.
    Horizon(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum OutcomeKind {
    Ruined { time: f64, deficit: f64 },
    ReachedLevel { time: f64 },
    HorizonSurvived,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PathOutcome {
    pub kind: OutcomeKind,
    /// Claims that occurred before the path stopped.
    pub claims_count: u64,
}

impl PathOutcome {
    pub fn is_ruined(&self) -> bool {
        matches!(self.kind, OutcomeKind::Ruined { .. })
    }

    pub fn reached_level(&self) -> bool {
        matches!(self.kind, OutcomeKind::ReachedLevel { .. })
    }
}

/// Runs one surplus path `U(t) = u + ct - S(t)` until ruin or the stop rule.
///
/// The level is checked on the continuous segment between claims, so a path
/// that reaches `b` just before a ruinous claim counts as having reached it.
pub fn simulate_path<R: Rng + ?Sized>(
    model: &ModelSpec,
    u: f64,
    stop: StopRule,
    rng: &mut R,
) -> PathOutcome {
    let c = model.premium();
    let mut surplus = u;
    let mut time = 0.0;
    let mut claims = 0u64;
    if let StopRule::Level(b) = stop {
        if surplus >= b {
            return PathOutcome {
                kind: OutcomeKind::ReachedLevel { time: 0.0 },
                claims_count: 0,
            };
        }
    }
    loop {
        let (w, x) = sample_pair(model, rng);
        match stop {
            StopRule::Level(b) => {
                if surplus + c * w >= b {
                    return PathOutcome {
                        kind: OutcomeKind::ReachedLevel {
                            time: time + (b - surplus) / c,
                        },
                        claims_count: claims,
                    };
                }
            }
            StopRule::Horizon(t_max) => {
                if time + w > t_max {
                    return PathOutcome {
                        kind: OutcomeKind::HorizonSurvived,
                        claims_count: claims,
                    };
                }
            }
        }
        time += w;
        surplus += c * w - x;
        claims += 1;
        if surplus < 0.0 {
            return PathOutcome {
                kind: OutcomeKind::Ruined {
                    time,
                    deficit: -surplus,
                },
                claims_count: claims,
            };
        }
    }
}

/// Binomial proportion estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimEstimate {
    pub value: f64,
    pub stderr: f64,
    pub n: usize,
    pub seed: u64,
}

impl SimEstimate {
    fn from_count(hits: u64, n: usize, seed: u64) -> Self {
        let value = hits as f64 / n as f64;
        Self {
            value,
            stderr: (value * (1.0 - value) / n as f64).sqrt(),
            n,
            seed,
        }
    }

    /// Distance from `x` in standard errors. Infinite when the estimate has no
    /// spread and differs from `x`.
    pub fn z_score(&self, x: f64) -> f64 {
        let d = (self.value - x).abs();
        if d == 0.0 {
            0.0
        } else {
            d / self.stderr
        }
    }
}

/// The random stream of replication `index`.
pub fn replication_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

fn default_workers() -> usize {
    thread::available_parallelism().map_or(1, NonZeroUsize::get)
}

/// Counts replications in `0..n` for which `hit` holds, split into
/// contiguous blocks over `workers` threads.
fn count_hits(
    n: usize,
    workers: usize,
    seed: u64,
    hit: impl Fn(&mut ChaCha8Rng) -> bool + Sync,
) -> u64 {
    let workers = workers.clamp(1, n.max(1));
    let block = n.div_ceil(workers);
    let run = |lo: usize, hi: usize| {
        (lo..hi)
            .filter(|&i| hit(&mut replication_rng(seed, i as u64)))
            .count() as u64
    };
    if workers == 1 {
        return run(0, n);
    }
    thread::scope(|scope| {
        let handles: Vec<_> = (0..workers)
            .map(|w| {
                let (lo, hi) = (w * block, ((w + 1) * block).min(n));
                let run = &run;
                scope.spawn(move || run(lo, hi))
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("worker panicked"))
            .sum()
    })
}

fn check_n(n: usize) -> Result<()> {
    if n == 0 {
        return Err(RuinError::Input(
            "at least one replication is required".into(),
        ));
    }
    Ok(())
}

/// Estimates `χ(u, b)`, the probability of reaching `b` before ruin.
pub fn estimate_reach_prob(
    model: &ModelSpec,
    u: f64,
    b: f64,
    n: usize,
    seed: u64,
) -> Result<SimEstimate> {
    estimate_reach_prob_with(model, u, b, n, seed, default_workers())
}

pub fn estimate_reach_prob_with(
    model: &ModelSpec,
    u: f64,
    b: f64,
    n: usize,
    seed: u64,
    workers: usize,
) -> Result<SimEstimate> {
    check_n(n)?;
    if !(u >= 0.0 && u <= b && b.is_finite()) {
        return Err(RuinError::Input(format!(
            "need 0 <= u <= b, got u = {u}, b = {b}"
        )));
    }
    let hits = count_hits(n, workers, seed, |rng| {
        simulate_path(model, u, StopRule::Level(b), rng).reached_level()
    });
    Ok(SimEstimate::from_count(hits, n, seed))
}

/// Estimates the probability of no ruin up to `t_max`.
pub fn estimate_finite_survival(
    model: &ModelSpec,
    u: f64,
    t_max: f64,
    n: usize,
    seed: u64,
) -> Result<SimEstimate> {
    check_n(n)?;
    if !(u >= 0.0 && t_max > 0.0) {
        return Err(RuinError::Input(format!(
            "need u >= 0 and t_max > 0, got {u}, {t_max}"
        )));
    }
    let hits = count_hits(n, default_workers(), seed, |rng| {
        !simulate_path(model, u, StopRule::Horizon(t_max), rng).is_ruined()
    });
    Ok(SimEstimate::from_count(hits, n, seed))
}

/// Survival estimate through a high proxy level.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SurvivalEstimate {
    pub estimate: SimEstimate,
    pub b_proxy: f64,
    /// Upper bound `1 - φ(b_proxy)` on the positive bias, from the analytic
    /// solution when it is available.
    pub bias_bound: Option<f64>,
}

/// Estimates the survival probability from `u` as the probability of reaching
/// `b_proxy` before ruin (default `u + 40` mean claims).
pub fn estimate_survival(
    model: &ModelSpec,
    u: f64,
    n: usize,
    seed: u64,
    b_proxy: Option<f64>,
) -> Result<SurvivalEstimate> {
    estimate_survival_with(model, u, n, seed, b_proxy, default_workers())
}

pub fn estimate_survival_with(
    model: &ModelSpec,
    u: f64,
    n: usize,
    seed: u64,
    b_proxy: Option<f64>,
    workers: usize,
) -> Result<SurvivalEstimate> {
    let b = b_proxy.unwrap_or(u + PROXY_MEAN_CLAIMS * model.claim().mean());
    if b <= u {
        return Err(RuinError::Input(format!(
            "proxy level {b} must exceed u = {u}"
        )));
    }
    let estimate = estimate_reach_prob_with(model, u, b, n, seed, workers)?;
    let bias_bound = match model.arrival() {
        InterArrival::Poisson { .. } => survival_classical(model).ok().map(|s| s.ruin(b)),
        InterArrival::Erlang2 { .. } => survival_erlang2(model).ok().map(|s| s.ruin(b)),
    };
    Ok(SurvivalEstimate {
        estimate,
        b_proxy: b,
        bias_bound,
    })
}
