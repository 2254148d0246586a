//! The smoothed scheduler: each step the adversary proposes an interaction,
//! which is then replaced by a uniformly random one with probability `p`.

use rand::distr::{Bernoulli, Distribution};
use rand::Rng;

use crate::adversary::{Adversary, Proposal};
use crate::error::{invalid, Error, Result};
use crate::model::{AgentPair, Interaction, RandomnessMode, ScheduleStep, Source};
use crate::protocols::Transition;
use crate::rng::{self, BitSource, Stream, StreamRng};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SmoothingParams {
    p: f64,
}

impl SmoothingParams {
    pub fn new(p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(invalid(format!("smoothing parameter must be in [0, 1], got {p}")));
        }
        Ok(Self { p })
    }

    pub fn p(self) -> f64 {
        self.p
    }
}

/// What the executed history looks like to the adversary.
#[derive(Debug, Clone, Default)]
pub struct History {
    pub last: Option<ScheduleStep>,
    pub steps_executed: u64,
    pub random_steps: u64,
    /// Every executed step, when the trial records its trace.
    pub recorded: Vec<ScheduleStep>,
}

/// Read-only view handed to the adversary before step `step_index` is drawn.
pub struct Observation<'a, P: Transition> {
    pub step_index: u64,
    pub protocol: &'a P,
    pub states: &'a [P::State],
    pub history: &'a History,
}

impl<P: Transition> Observation<'_, P> {
    pub fn n(&self) -> usize {
        self.states.len()
    }
}

/// Exactly uniform value below `range` from a 32-bit word, redrawing on
/// the rare rejection (multiply-shift with Lemire's threshold).
#[inline]
fn below<R: Rng + ?Sized>(rng: &mut R, mut x: u32, range: u32) -> u32 {
    loop {
        let m = x as u64 * range as u64;
        let low = m as u32;
        if low >= range || low >= range.wrapping_neg() % range {
            return (m >> 32) as u32;
        }
        x = rng.next_u32();
    }
}

/// Uniform over the `n(n-1)` ordered pairs of distinct agents.
#[inline]
pub fn draw_uniform_interaction<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Interaction {
    debug_assert!(n >= 2 && n <= u32::MAX as usize);
    let word = rng.next_u64();
    let i = below(rng, (word >> 32) as u32, n as u32) as usize;
    let mut j = below(rng, word as u32, n as u32 - 1) as usize;
    if j >= i {
        j += 1;
    }
    Interaction::new(i, j)
}

/// Picks initiator and responder of `pair` with a fair bit.
#[inline]
pub fn randomize_order(pair: AgentPair, bits: &mut BitSource) -> Interaction {
    let (a, b) = pair.agents();
    if bits.next_bit() {
        Interaction::new(a, b)
    } else {
        Interaction::new(b, a)
    }
}

/// Per-trial scheduler state; every random decision uses its own stream.
#[derive(Debug, Clone)]
pub struct SmoothedScheduler {
    n: usize,
    params: SmoothingParams,
    mode: RandomnessMode,
    replace: Bernoulli,
    replacement_rng: StreamRng,
    uniform_rng: StreamRng,
    coins: BitSource,
    order: BitSource,
}

impl SmoothedScheduler {
    pub fn new(n: usize, params: SmoothingParams, mode: RandomnessMode, seed: u64) -> Result<Self> {
        if n < 2 {
            return Err(Error::PopulationTooSmall(n));
        }
        if n > u32::MAX as usize {
            return Err(invalid(format!("population {n} exceeds 2^32 - 1 agents")));
        }
        let replace = Bernoulli::new(params.p).map_err(|e| invalid(e.to_string()))?;
        Ok(Self {
            n,
            params,
            mode,
            replace,
            replacement_rng: rng::stream(seed, Stream::Replacement),
            uniform_rng: rng::stream(seed, Stream::UniformPair),
            coins: BitSource::new(rng::stream(seed, Stream::Coin)),
            order: BitSource::new(rng::stream(seed, Stream::Order)),
        })
    }

    pub fn params(&self) -> SmoothingParams {
        self.params
    }

    pub fn mode(&self) -> RandomnessMode {
        self.mode
    }

    /// Draws the replacement decision, queries the adversary for kept
    /// steps, then draws order and coin.
    ///
    /// The adversary is not consulted for steps that will be replaced: its
    /// proposal could not depend on the replacement draw anyway, so skipping
    /// it changes no outcome distribution and saves the work.
    #[inline]
    pub fn next_interaction<P: Transition>(
        &mut self,
        adversary: &mut Adversary,
        obs: &Observation<'_, P>,
    ) -> Result<ScheduleStep> {
        let replaced = self.replace.sample(&mut self.replacement_rng);
        let (interaction, source) = if replaced {
            (draw_uniform_interaction(&mut self.uniform_rng, self.n), Source::Random)
        } else {
            let i = match (self.mode, adversary.propose(obs, self.mode)) {
                (RandomnessMode::Coin, Proposal::Ordered(i)) => i.validate(self.n)?,
                (RandomnessMode::OrderedRandom, Proposal::Unordered(pair)) => {
                    // lo < hi, so checking hi covers both
                    pair.agents().1.check(self.n)?;
                    randomize_order(pair, &mut self.order)
                }
                (mode, p) => {
                    return Err(invalid(format!(
                        "adversary proposal {p:?} does not fit randomness mode {}",
                        mode.as_str()
                    )))
                }
            };
            (i, Source::Adversarial)
        };
        let coin = match self.mode {
            RandomnessMode::Coin => Some(self.coins.next_bit()),
            RandomnessMode::OrderedRandom => None,
        };
        Ok(ScheduleStep {
            step_index: obs.step_index,
            interaction,
            source,
            coin,
        })
    }
}
