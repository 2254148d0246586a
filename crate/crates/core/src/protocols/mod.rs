//! Transition functions.
//!
//! Each protocol is a pure function of (initiator, responder, optional coin).
//! The [`Transition`] trait adapts them to the engine: it names the agent
//! state type, builds the initial population, and exposes the read-only
//! views (hour, minute, infection, leadership) consumed by metrics and
//! adversaries.

mod baseline;
mod clock;
mod epidemic;
mod leader;

use std::fmt::Debug;

use serde::{Deserialize, Serialize};

pub use baseline::{
    junta_clock_step, junta_size, leaderless_clock_step, JuntaClock, JuntaClockState,
    LeaderlessClock, LeaderlessClockState,
};
pub use clock::{
    derive_clock_params, hour_lt, smoothed_clock_step, smoothed_clock_step_ordered, ClockParams,
    ClockState, SmoothedClock,
};
pub use epidemic::{epidemic_step, Epidemic, EpidemicState};
pub use leader::{
    leader_election_step, leader_election_step_ordered, LeaderElection, LeaderParams,
    LeaderState, PairwiseRule,
};

use crate::error::{Error, Result};
use crate::model::RandomnessMode;

/// Side information reported by a transition, used only for bookkeeping.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Events(u8);

impl Events {
    pub const NONE: Events = Events(0);
    /// A pending tick of the initiator became live in this interaction.
    pub const TICK_ARMED_INITIATOR: Events = Events(1);
    /// A pending tick of the responder became live in this interaction.
    pub const TICK_ARMED_RESPONDER: Events = Events(2);
    /// A leader consumed its tick and drew "heads" (level increment).
    pub const LEADER_TICK_INCREMENT: Events = Events(4);
    /// A leader consumed its tick without a level increment.
    pub const LEADER_TICK_PLAIN: Events = Events(8);

    #[inline]
    pub fn contains(self, other: Events) -> bool {
        self.0 & other.0 == other.0 && other.0 != 0
    }

    #[inline]
    pub fn insert(&mut self, other: Events) {
        self.0 |= other.0;
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ProtocolKind {
    Epidemic,
    SmoothedClock,
    JuntaClock,
    LeaderlessClock,
    LeaderElection,
}

impl ProtocolKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ProtocolKind::Epidemic => "Epidemic",
            ProtocolKind::SmoothedClock => "SmoothedClock",
            ProtocolKind::JuntaClock => "JuntaClock",
            ProtocolKind::LeaderlessClock => "LeaderlessClock",
            ProtocolKind::LeaderElection => "LeaderElection",
        }
    }

    /// Whether the protocol exposes an hour counter (and therefore rounds).
    pub fn has_clock(self) -> bool {
        !matches!(self, ProtocolKind::Epidemic)
    }
}

impl std::str::FromStr for ProtocolKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "Epidemic" => ProtocolKind::Epidemic,
            "SmoothedClock" => ProtocolKind::SmoothedClock,
            "JuntaClock" => ProtocolKind::JuntaClock,
            "LeaderlessClock" => ProtocolKind::LeaderlessClock,
            "LeaderElection" => ProtocolKind::LeaderElection,
            other => return Err(Error::Config(format!("unknown protocol {other:?}"))),
        })
    }
}

pub trait Transition: Clone + Debug + Send + Sync + 'static {
    type State: Copy + Debug + PartialEq + Send + Sync + 'static;

    const KIND: ProtocolKind;

    /// `Some(mode)` when the transition is tied to one randomness mode and
    /// therefore requires (Coin) or forbids (OrderedRandom) a coin bit.
    fn required_mode(&self) -> Option<RandomnessMode>;

    fn initial_states(&self, n: usize) -> Result<Vec<Self::State>>;

    /// Applies one interaction in place. `coin` has already been checked
    /// against [`Transition::required_mode`].
    fn interact(&self, u: &mut Self::State, v: &mut Self::State, coin: Option<bool>) -> Events;

    fn wrap(states: Vec<Self::State>) -> Configuration;

    fn states_of(config: &Configuration) -> Option<&[Self::State]>;

    /// Hour as stored in the agent (a residue when an hour modulus is set).
    fn hour(&self, _s: &Self::State) -> Option<u64> {
        None
    }

    fn hour_modulus(&self) -> Option<u64> {
        None
    }

    /// Minute within the current hour.
    fn minute(&self, _s: &Self::State) -> Option<u64> {
        None
    }

    fn infected(&self, _s: &Self::State) -> Option<bool> {
        None
    }

    fn leader(&self, _s: &Self::State) -> Option<bool> {
        None
    }

    fn level(&self, _s: &Self::State) -> Option<u32> {
        None
    }

    fn in_junta(&self, _s: &Self::State) -> Option<bool> {
        None
    }

    /// Whether every field lies in its declared range.
    fn state_in_range(&self, _s: &Self::State) -> bool {
        true
    }

    /// Whether leader counts reaching zero are expected (literal two-leader
    /// rule) rather than a bug.
    fn tolerates_leaderless(&self) -> bool {
        false
    }
}

/// Full population state: one agent state per agent.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "protocol", content = "states")]
pub enum Configuration {
    Epidemic(Vec<EpidemicState>),
    SmoothedClock(Vec<ClockState>),
    JuntaClock(Vec<JuntaClockState>),
    LeaderlessClock(Vec<LeaderlessClockState>),
    LeaderElection(Vec<LeaderState>),
}

impl Configuration {
    pub fn len(&self) -> usize {
        match self {
            Configuration::Epidemic(s) => s.len(),
            Configuration::SmoothedClock(s) => s.len(),
            Configuration::JuntaClock(s) => s.len(),
            Configuration::LeaderlessClock(s) => s.len(),
            Configuration::LeaderElection(s) => s.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn kind(&self) -> ProtocolKind {
        match self {
            Configuration::Epidemic(_) => ProtocolKind::Epidemic,
            Configuration::SmoothedClock(_) => ProtocolKind::SmoothedClock,
            Configuration::JuntaClock(_) => ProtocolKind::JuntaClock,
            Configuration::LeaderlessClock(_) => ProtocolKind::LeaderlessClock,
            Configuration::LeaderElection(_) => ProtocolKind::LeaderElection,
        }
    }
}

/// A protocol together with its parameters: the handle the engine runs.
#[derive(Debug, Clone, PartialEq)]
pub enum Protocol {
    Epidemic(Epidemic),
    SmoothedClock(SmoothedClock),
    JuntaClock(JuntaClock),
    LeaderlessClock(LeaderlessClock),
    LeaderElection(LeaderElection),
}

impl Protocol {
    pub fn kind(&self) -> ProtocolKind {
        match self {
            Protocol::Epidemic(_) => ProtocolKind::Epidemic,
            Protocol::SmoothedClock(_) => ProtocolKind::SmoothedClock,
            Protocol::JuntaClock(_) => ProtocolKind::JuntaClock,
            Protocol::LeaderlessClock(_) => ProtocolKind::LeaderlessClock,
            Protocol::LeaderElection(_) => ProtocolKind::LeaderElection,
        }
    }
}

/// Calls `$body` with `$p` bound to the concrete transition inside a
/// [`Protocol`].
#[macro_export]
#[doc(hidden)]
macro_rules! with_transition {
    ($protocol:expr, $p:ident => $body:expr) => {
        match $protocol {
            $crate::protocols::Protocol::Epidemic($p) => $body,
            $crate::protocols::Protocol::SmoothedClock($p) => $body,
            $crate::protocols::Protocol::JuntaClock($p) => $body,
            $crate::protocols::Protocol::LeaderlessClock($p) => $body,
            $crate::protocols::Protocol::LeaderElection($p) => $body,
        }
    };
}
