//! Leader election driven by the smoothed phase clock.
//!
//! Every agent carries a clock. On the first qualifying interaction of each
//! epoch a leader consumes its tick and, with a fair coin, raises its level.
//! Levels spread by one-way epidemic and demote lower-level leaders; two
//! leaders meeting demote one of them.

use serde::{Deserialize, Serialize};

use super::clock::{ClockParams, ClockState, SmoothedClock};
use super::{Configuration, Events, ProtocolKind, Transition};
use crate::error::{invalid, Result};
use crate::model::{ceil_log2_int, RandomnessMode};

/// How two meeting leaders are resolved.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum PairwiseRule {
    /// Demote the strictly lower level (ties: initiator in coin mode,
    /// responder in ordered mode); both end at the larger level.
    #[default]
    Amended,
    /// Demote unconditionally, whatever the levels (initiator in
    /// coin mode, responder in ordered mode).
    Literal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LeaderParams {
    pub ell_max: u32,
    pub rule: PairwiseRule,
}

impl LeaderParams {
    /// `ell_max = c_l * ceil(log2 n)`.
    pub fn derive(n: usize, c_l: u32, rule: PairwiseRule) -> Result<Self> {
        if c_l == 0 {
            return Err(invalid("c_L must be positive"));
        }
        Ok(Self {
            ell_max: c_l * ceil_log2_int(n as u64),
            rule,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct LeaderState {
    pub leader: bool,
    pub level: u32,
    pub tick: bool,
    /// Set when the hour increases; turned into `tick` at the next
    /// qualifying interaction.
    pub pending_tick: bool,
    pub clock: ClockState,
}

impl LeaderState {
    pub fn leader(level: u32) -> Self {
        Self {
            leader: true,
            level,
            ..Self::default()
        }
    }

    pub fn follower(level: u32) -> Self {
        Self {
            leader: false,
            level,
            ..Self::default()
        }
    }
}

#[inline]
fn level_epidemic(u: &mut LeaderState, v: &LeaderState) {
    if u.level < v.level {
        u.leader = false;
        u.level = v.level;
    }
}

#[inline]
fn amended_pairwise(u: &mut LeaderState, v: &mut LeaderState, demote_initiator_on_tie: bool) {
    let top = u.level.max(v.level);
    let demote_u = match u.level.cmp(&v.level) {
        std::cmp::Ordering::Less => true,
        std::cmp::Ordering::Greater => false,
        std::cmp::Ordering::Equal => demote_initiator_on_tie,
    };
    if demote_u {
        u.leader = false;
    } else {
        v.leader = false;
    }
    u.level = top;
    v.level = top;
}

/// Leader lines of the coin-mode protocol (the embedded clock has already
/// run). Returns tick bookkeeping events.
#[inline]
fn coin_leader_lines(u: &mut LeaderState, v: &mut LeaderState, coin: bool, params: &LeaderParams) -> Events {
    let mut events = Events::NONE;
    level_epidemic(u, v);
    if u.tick && u.leader {
        u.tick = false;
        if coin {
            u.level = (u.level + 1).min(params.ell_max);
            events.insert(Events::LEADER_TICK_INCREMENT);
        } else {
            events.insert(Events::LEADER_TICK_PLAIN);
        }
    }
    if u.leader && v.leader {
        match params.rule {
            PairwiseRule::Literal => u.leader = false,
            PairwiseRule::Amended => amended_pairwise(u, v, true),
        }
    }
    events
}

#[inline]
fn ordered_leader_lines(u: &mut LeaderState, v: &mut LeaderState, params: &LeaderParams) -> Events {
    let mut events = Events::NONE;
    level_epidemic(u, v);
    if u.tick && u.leader {
        u.tick = false;
        u.level = (u.level + 1).min(params.ell_max);
        events.insert(Events::LEADER_TICK_INCREMENT);
    }
    if v.tick {
        v.tick = false;
        if v.leader {
            events.insert(Events::LEADER_TICK_PLAIN);
        }
    }
    if u.leader && v.leader {
        match params.rule {
            PairwiseRule::Literal => v.leader = false,
            PairwiseRule::Amended => amended_pairwise(u, v, false),
        }
    }
    events
}

/// Leader lines of the coin-mode protocol applied to two states whose clocks
/// have already advanced; `u.tick` is consumed if live.
pub fn leader_election_step(
    u: LeaderState,
    v: LeaderState,
    coin: bool,
    params: &LeaderParams,
) -> (LeaderState, LeaderState) {
    let (mut u, mut v) = (u, v);
    coin_leader_lines(&mut u, &mut v, coin, params);
    (u, v)
}

/// Coin-free counterpart of [`leader_election_step`]: the initiator role
/// plays heads and the responder role plays tails.
pub fn leader_election_step_ordered(
    u: LeaderState,
    v: LeaderState,
    params: &LeaderParams,
) -> (LeaderState, LeaderState) {
    let (mut u, mut v) = (u, v);
    ordered_leader_lines(&mut u, &mut v, params);
    (u, v)
}

#[derive(Debug, Clone, PartialEq)]
pub struct LeaderElection {
    pub params: LeaderParams,
    pub clock: SmoothedClock,
    /// Initial leaders; `None` means every agent.
    pub initial_leaders: Option<Vec<usize>>,
    /// Initial levels; `None` means all zero.
    pub initial_levels: Option<Vec<u32>>,
}

impl LeaderElection {
    pub fn new(params: LeaderParams, clock: ClockParams, mode: RandomnessMode) -> Result<Self> {
        Ok(Self {
            params,
            clock: SmoothedClock::new(clock, mode)?,
            initial_leaders: None,
            initial_levels: None,
        })
    }

    pub fn mode(&self) -> RandomnessMode {
        self.clock.mode
    }
}

impl Transition for LeaderElection {
    type State = LeaderState;
    const KIND: ProtocolKind = ProtocolKind::LeaderElection;

    fn required_mode(&self) -> Option<RandomnessMode> {
        Some(self.clock.mode)
    }

    fn initial_states(&self, n: usize) -> Result<Vec<LeaderState>> {
        self.clock.params.validate()?;
        let mut states = match &self.initial_leaders {
            None => vec![LeaderState::leader(0); n],
            Some(ids) => {
                if ids.is_empty() {
                    return Err(invalid("at least one initial leader is required"));
                }
                let mut s = vec![LeaderState::follower(0); n];
                for &i in ids {
                    if i >= n {
                        return Err(invalid(format!("initial leader {i} out of range for n={n}")));
                    }
                    s[i].leader = true;
                }
                s
            }
        };
        if let Some(levels) = &self.initial_levels {
            if levels.len() != n {
                return Err(invalid(format!(
                    "initial_levels has {} entries for n={n}",
                    levels.len()
                )));
            }
            for (s, &l) in states.iter_mut().zip(levels) {
                if l > self.params.ell_max {
                    return Err(invalid(format!("initial level {l} exceeds ell_max {}", self.params.ell_max)));
                }
                s.level = l;
            }
        }
        Ok(states)
    }

    #[inline]
    fn interact(&self, u: &mut LeaderState, v: &mut LeaderState, coin: Option<bool>) -> Events {
        let mut events = Events::NONE;
        match self.clock.mode {
            RandomnessMode::Coin => {
                if u.pending_tick {
                    u.pending_tick = false;
                    u.tick = true;
                    events.insert(Events::TICK_ARMED_INITIATOR);
                }
                let before = u.clock.hour;
                self.clock.advance(&mut u.clock, &mut v.clock, coin);
                if u.clock.hour != before {
                    u.pending_tick = true;
                }
                events.insert(coin_leader_lines(u, v, coin.unwrap_or(false), &self.params));
            }
            RandomnessMode::OrderedRandom => {
                if u.pending_tick {
                    u.pending_tick = false;
                    u.tick = true;
                    events.insert(Events::TICK_ARMED_INITIATOR);
                }
                if v.pending_tick {
                    v.pending_tick = false;
                    v.tick = true;
                    events.insert(Events::TICK_ARMED_RESPONDER);
                }
                let (before_u, before_v) = (u.clock.hour, v.clock.hour);
                self.clock.advance(&mut u.clock, &mut v.clock, None);
                if u.clock.hour != before_u {
                    u.pending_tick = true;
                }
                if v.clock.hour != before_v {
                    v.pending_tick = true;
                }
                events.insert(ordered_leader_lines(u, v, &self.params));
            }
        }
        events
    }

    fn wrap(states: Vec<LeaderState>) -> Configuration {
        Configuration::LeaderElection(states)
    }

    fn states_of(config: &Configuration) -> Option<&[LeaderState]> {
        match config {
            Configuration::LeaderElection(s) => Some(s),
            _ => None,
        }
    }

    fn hour(&self, s: &LeaderState) -> Option<u64> {
        Some(s.clock.hour)
    }

    fn hour_modulus(&self) -> Option<u64> {
        self.clock.params.hour_modulus
    }

    fn state_in_range(&self, s: &LeaderState) -> bool {
        s.level <= self.params.ell_max && self.clock.params.contains(&s.clock)
    }

    fn minute(&self, s: &LeaderState) -> Option<u64> {
        Some(s.clock.minute as u64)
    }

    fn leader(&self, s: &LeaderState) -> Option<bool> {
        Some(s.leader)
    }

    fn level(&self, s: &LeaderState) -> Option<u32> {
        Some(s.level)
    }

    fn tolerates_leaderless(&self) -> bool {
        self.params.rule == PairwiseRule::Literal
    }
}
