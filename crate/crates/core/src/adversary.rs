//! Adaptive adversary strategies.
//!
//! A strategy sees the full current configuration and the executed history
//! (see [`Observation`]) and proposes the next interaction. It may keep
//! internal state across steps; it never sees the current step's
//! replacement draw, order bit or coin.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::model::{AgentPair, Interaction, RandomnessMode};
use crate::protocols::Transition;
use crate::rng::{self, Stream, StreamRng};
use crate::scheduler::{draw_uniform_interaction, Observation};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub enum StrategyKind {
    /// Uniform proposals from the adversary's own stream.
    #[default]
    Null,
    /// Always the same pair; with `alternate`, the roles swap every step.
    PairHammer {
        a: usize,
        b: usize,
        #[serde(default)]
        alternate: bool,
    },
    /// An alternating pair hammer on the two lowest-index junta members.
    JuntaHammer,
    /// Keeps infected agents talking to each other.
    StallEpidemic,
    /// Keeps followers of equal level talking to each other.
    LeaderIsolation,
}

impl StrategyKind {
    pub fn pair_hammer(a: usize, b: usize, alternate: bool) -> Self {
        StrategyKind::PairHammer { a, b, alternate }
    }

    pub fn validate(&self, n: usize) -> crate::Result<()> {
        if let StrategyKind::PairHammer { a, b, .. } = *self {
            Interaction::new(a, b).validate(n)?;
        }
        Ok(())
    }
}

impl fmt::Display for StrategyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StrategyKind::Null => f.write_str("Null"),
            StrategyKind::PairHammer { a, b, alternate: false } => write!(f, "PairHammer({a};{b})"),
            StrategyKind::PairHammer { a, b, alternate: true } => write!(f, "PairHammer({a};{b};alt)"),
            StrategyKind::JuntaHammer => f.write_str("JuntaHammer"),
            StrategyKind::StallEpidemic => f.write_str("StallEpidemic"),
            StrategyKind::LeaderIsolation => f.write_str("LeaderIsolation"),
        }
    }
}

/// A proposal: ordered in coin mode, unordered when the scheduler draws the
/// roles.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Proposal {
    Ordered(Interaction),
    Unordered(AgentPair),
}

impl Proposal {
    fn from_ordered(i: Interaction, mode: RandomnessMode) -> Self {
        match mode {
            RandomnessMode::Coin => Proposal::Ordered(i),
            RandomnessMode::OrderedRandom => match AgentPair::new(i.initiator, i.responder) {
                Ok(pair) => Proposal::Unordered(pair),
                // surfaces as a self-interaction error in the scheduler
                Err(_) => Proposal::Ordered(i),
            },
        }
    }
}

/// A strategy plus its internal state for one trial.
#[derive(Debug, Clone)]
pub struct Adversary {
    kind: StrategyKind,
    rng: StreamRng,
    flip: bool,
    /// Sticky pair: reused while it still qualifies.
    cached: Option<(usize, usize)>,
}

impl Adversary {
    pub fn new(kind: StrategyKind, seed: u64) -> Self {
        Self {
            kind,
            rng: rng::stream(seed, Stream::Adversary),
            flip: false,
            cached: None,
        }
    }

    pub fn kind(&self) -> StrategyKind {
        self.kind
    }

    #[inline]
    pub fn propose<P: Transition>(&mut self, obs: &Observation<'_, P>, mode: RandomnessMode) -> Proposal {
        let i = match self.kind {
            StrategyKind::Null => draw_uniform_interaction(&mut self.rng, obs.n()),
            StrategyKind::PairHammer { a, b, alternate } => self.hammer(a, b, alternate),
            StrategyKind::JuntaHammer => {
                let (a, b) = *self.cached.get_or_insert_with(|| junta_pair(obs));
                self.hammer(a, b, true)
            }
            StrategyKind::StallEpidemic => self.stall_epidemic(obs),
            StrategyKind::LeaderIsolation => self.leader_isolation(obs),
        };
        Proposal::from_ordered(i, mode)
    }

    #[inline]
    fn hammer(&mut self, a: usize, b: usize, alternate: bool) -> Interaction {
        let i = if alternate && self.flip {
            Interaction::new(b, a)
        } else {
            Interaction::new(a, b)
        };
        if alternate {
            self.flip = !self.flip;
        }
        i
    }

    fn stall_epidemic<P: Transition>(&mut self, obs: &Observation<'_, P>) -> Interaction {
        // infection never reverts, so an infected pair stays valid forever
        if let Some((a, b)) = self.cached {
            return Interaction::new(a, b);
        }
        let infected = |i: usize| obs.protocol.infected(&obs.states[i]).unwrap_or(false);
        let mut hits = (0..obs.n()).filter(|&i| infected(i));
        if let (Some(a), Some(b)) = (hits.next(), hits.next()) {
            self.cached = Some((a, b));
            return Interaction::new(a, b);
        }
        let mut clean = (0..obs.n()).filter(|&i| !infected(i));
        match (clean.next(), clean.next()) {
            (Some(a), Some(b)) => Interaction::new(a, b),
            _ => Interaction::new(0, 1),
        }
    }

    fn leader_isolation<P: Transition>(&mut self, obs: &Observation<'_, P>) -> Interaction {
        let follower = |i: usize| obs.protocol.leader(&obs.states[i]) == Some(false);
        let level = |i: usize| obs.protocol.level(&obs.states[i]).unwrap_or(0);
        if let Some((a, b)) = self.cached {
            if follower(a) && follower(b) && level(a) == level(b) {
                return Interaction::new(a, b);
            }
            self.cached = None;
        }
        // first follower seen at each level
        let mut first_at_level: Vec<Option<usize>> = Vec::new();
        let mut followers = [None, None];
        for i in 0..obs.n() {
            if !follower(i) {
                continue;
            }
            if followers[0].is_none() {
                followers[0] = Some(i);
            } else if followers[1].is_none() {
                followers[1] = Some(i);
            }
            let l = level(i) as usize;
            if first_at_level.len() <= l {
                first_at_level.resize(l + 1, None);
            }
            match first_at_level[l] {
                Some(j) => {
                    self.cached = Some((j, i));
                    return Interaction::new(j, i);
                }
                None => first_at_level[l] = Some(i),
            }
        }
        match followers {
            [Some(a), Some(b)] => Interaction::new(a, b),
            _ => Interaction::new(0, 1),
        }
    }
}

fn junta_pair<P: Transition>(obs: &Observation<'_, P>) -> (usize, usize) {
    let mut members = (0..obs.n()).filter(|&i| obs.protocol.in_junta(&obs.states[i]) == Some(true));
    match (members.next(), members.next()) {
        (Some(a), Some(b)) => (a, b),
        _ => (0, 1),
    }
}
