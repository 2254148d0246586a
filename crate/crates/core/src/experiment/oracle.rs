//! Monte-Carlo checks of two probabilistic claims behind the protocols:
//! minute gaps of the smoothed clock are long with probability above 1/2,
//! and one round of leader coin flips roughly halves the leader count.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::adversary::{Adversary, StrategyKind};
use crate::engine::Simulation;
use crate::error::{invalid, Result};
use crate::model::{ceil_log2_int, RandomnessMode};
use crate::protocols::{derive_clock_params, SmoothedClock, Transition};
use crate::rng::{self, Stream};
use crate::scheduler::{SmoothedScheduler, SmoothingParams};

/// Wilson score interval for `successes` out of `total` at normal quantile `z`.
pub fn wilson_interval(successes: u64, total: u64, z: f64) -> (f64, f64) {
    if total == 0 {
        return (0.0, 1.0);
    }
    let n = total as f64;
    let phat = successes as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let centre = (phat + z2 / (2.0 * n)) / denom;
    let half = z * (phat * (1.0 - phat) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    ((centre - half).max(0.0), (centre + half).min(1.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UbMinOptions {
    pub adversary: StrategyKind,
    pub c_m: u32,
    pub mode: RandomnessMode,
}

impl Default for UbMinOptions {
    fn default() -> Self {
        Self {
            adversary: StrategyKind::Null,
            c_m: 8,
            mode: RandomnessMode::Coin,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UbMinEstimate {
    pub probability_hat: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    /// Gaps exceeding the threshold.
    pub long_gaps: u64,
    pub gaps: u64,
    /// `c * n / p * ceil(log2 n)` steps.
    pub threshold: f64,
}

/// Minute gaps `T_{k+1} - T_k` (k = 0..M-1) of one round started from the
/// all-zero configuration; `T_M` is the step that opens the next hour.
pub fn minute_gaps(n: usize, p: f64, c: u32, opts: &UbMinOptions, seed: u64) -> Result<Vec<u64>> {
    let params = derive_clock_params(n, p, c, opts.c_m)?;
    let clock = SmoothedClock::new(params, opts.mode)?;
    let states = clock.initial_states(n)?;
    let scheduler = SmoothedScheduler::new(n, SmoothingParams::new(p)?, opts.mode, seed)?;
    let adversary = Adversary::new(opts.adversary, seed);
    let mut sim = Simulation::new(clock, states, scheduler, adversary, false)?;
    while sim.tracker().completed_rounds() == 0 {
        sim.advance()?;
    }
    let timeline = &sim.tracker().timelines()[0];
    let r_end = sim.tracker().finalize_rounds()[0].r_end;
    let mut t = timeline.reach_steps.clone();
    t.push(r_end);
    Ok(t.windows(2).map(|w| w[1] - w[0]).collect())
}

/// Estimates `Pr(T_{k+1} - T_k > c n p^-1 ceil(log2 n))` from `trials`
/// independent rounds, pooling every gap of each round.
pub fn oracle_lemma_ubmin(
    n: usize,
    p: f64,
    c: u32,
    trials: u64,
    seed: u64,
    opts: &UbMinOptions,
) -> Result<UbMinEstimate> {
    if c <= 2 {
        return Err(invalid(format!("c must exceed 2, got {c}")));
    }
    if trials < 100 {
        return Err(invalid(format!("at least 100 trials are required, got {trials}")));
    }
    let threshold = c as f64 * n as f64 / p * ceil_log2_int(n as u64) as f64;
    let per_trial = (0..trials)
        .into_par_iter()
        .map(|t| {
            let gaps = minute_gaps(n, p, c, opts, seed.wrapping_add(t))?;
            let long = gaps.iter().filter(|&&g| g as f64 > threshold).count() as u64;
            Ok((long, gaps.len() as u64))
        })
        .collect::<Result<Vec<_>>>()?;
    let (long_gaps, gaps) = per_trial
        .iter()
        .fold((0, 0), |(a, b), (l, g)| (a + l, b + g));
    let (ci_low, ci_high) = wilson_interval(long_gaps, gaps, 1.96);
    Ok(UbMinEstimate {
        probability_hat: long_gaps as f64 / gaps as f64,
        ci_low,
        ci_high,
        long_gaps,
        gaps,
        threshold,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HalvingEstimate {
    pub l0: u32,
    pub trials: u64,
    pub mean_ratio: f64,
    pub std_error: f64,
    /// `1/2 + 2^-L0`.
    pub expected: f64,
}

/// Survivors of one round: the leaders that flip heads, or everyone if all
/// flip tails.
pub fn halving_round<R: Rng + ?Sized>(rng: &mut R, leaders: u32) -> u32 {
    let heads = (0..leaders).filter(|_| rng.random::<bool>()).count() as u32;
    if heads == 0 {
        leaders
    } else {
        heads
    }
}

pub fn halving_expectation(l0: u32) -> f64 {
    0.5 + 0.5f64.powi(l0 as i32)
}

pub fn oracle_leader_halving(l0: u32, trials: u64, seed: u64) -> Result<HalvingEstimate> {
    if l0 == 0 {
        return Err(invalid("L0 must be positive"));
    }
    if trials < 2 {
        return Err(invalid("at least two trials are required"));
    }
    let mut rng = rng::stream(seed, Stream::Oracle);
    let (mut sum, mut sum_sq) = (0.0f64, 0.0f64);
    for _ in 0..trials {
        let r = halving_round(&mut rng, l0) as f64 / l0 as f64;
        sum += r;
        sum_sq += r * r;
    }
    let k = trials as f64;
    let mean = sum / k;
    let var = ((sum_sq - k * mean * mean) / (k - 1.0)).max(0.0);
    Ok(HalvingEstimate {
        l0,
        trials,
        mean_ratio: mean,
        std_error: (var / k).sqrt(),
        expected: halving_expectation(l0),
    })
}
