//! Basic vocabulary shared by the engine, scheduler and protocols.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Index of an agent in a population of `n` agents.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct AgentId(pub usize);

impl AgentId {
    #[inline]
    pub fn index(self) -> usize {
        self.0
    }

    pub fn check(self, n: usize) -> Result<Self> {
        if self.0 < n {
            Ok(self)
        } else {
            Err(Error::AgentOutOfRange { agent: self.0, n })
        }
    }
}

impl fmt::Display for AgentId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl From<usize> for AgentId {
    fn from(i: usize) -> Self {
        AgentId(i)
    }
}

/// An ordered pair of distinct agents. Only the initiator is updated by most
/// transitions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Interaction {
    pub initiator: AgentId,
    pub responder: AgentId,
}

impl Interaction {
    pub fn new(initiator: impl Into<AgentId>, responder: impl Into<AgentId>) -> Self {
        Self {
            initiator: initiator.into(),
            responder: responder.into(),
        }
    }

    /// Checks distinctness and range against a population of `n`.
    pub fn validate(self, n: usize) -> Result<Self> {
        self.initiator.check(n)?;
        self.responder.check(n)?;
        if self.initiator == self.responder {
            return Err(Error::SelfInteraction(self.initiator.0));
        }
        Ok(self)
    }

    pub fn reversed(self) -> Self {
        Self {
            initiator: self.responder,
            responder: self.initiator,
        }
    }
}

/// An unordered pair of distinct agents, as proposed by an adversary when the
/// initiator/responder order is decided by the scheduler.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct AgentPair {
    lo: AgentId,
    hi: AgentId,
}

impl AgentPair {
    pub fn new(a: impl Into<AgentId>, b: impl Into<AgentId>) -> Result<Self> {
        let (a, b) = (a.into(), b.into());
        if a == b {
            return Err(Error::SelfInteraction(a.0));
        }
        Ok(Self {
            lo: a.min(b),
            hi: a.max(b),
        })
    }

    pub fn agents(self) -> (AgentId, AgentId) {
        (self.lo, self.hi)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Source {
    Adversarial,
    Random,
}

impl Source {
    pub fn as_str(self) -> &'static str {
        match self {
            Source::Adversarial => "Adversarial",
            Source::Random => "Random",
        }
    }
}

/// Where per-interaction randomness comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
pub enum RandomnessMode {
    /// Ordered pairs from the scheduler plus one fair bit per interaction.
    #[default]
    Coin,
    /// Unordered pairs with a uniformly random role assignment; no bit.
    OrderedRandom,
}

impl RandomnessMode {
    pub fn as_str(self) -> &'static str {
        match self {
            RandomnessMode::Coin => "Coin",
            RandomnessMode::OrderedRandom => "OrderedRandom",
        }
    }
}

impl std::str::FromStr for RandomnessMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "Coin" => Ok(RandomnessMode::Coin),
            "OrderedRandom" => Ok(RandomnessMode::OrderedRandom),
            other => Err(Error::Config(format!("unknown randomness mode {other:?}"))),
        }
    }
}

/// One executed interaction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScheduleStep {
    pub step_index: u64,
    pub interaction: Interaction,
    pub source: Source,
    /// Present exactly when the trial runs in [`RandomnessMode::Coin`].
    pub coin: Option<bool>,
}

/// Smallest `k` with `2^k >= x`, for `x >= 1`. Returns 0 for `x <= 1`.
pub fn ceil_log2(x: f64) -> u32 {
    let mut k = 0u32;
    let mut pow = 1.0f64;
    while pow < x {
        pow *= 2.0;
        k += 1;
    }
    k
}

/// `ceil(log2(n))` for integers.
pub fn ceil_log2_int(n: u64) -> u32 {
    if n <= 1 {
        0
    } else {
        n.next_power_of_two().trailing_zeros()
    }
}
