//! Baseline clocks that assume a uniformly random scheduler: a junta-driven
//! minute counter and a leaderless hour/minute counter.

use serde::{Deserialize, Serialize};

use super::{Configuration, Events, ProtocolKind, Transition};
use crate::error::{invalid, Result};
use crate::model::RandomnessMode;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct JuntaClockState {
    pub minute: u64,
    pub in_junta: bool,
}

#[inline]
pub fn junta_clock_step(u: JuntaClockState, v: JuntaClockState) -> (JuntaClockState, JuntaClockState) {
    let mut u = u;
    let candidate = if u.in_junta { v.minute + 1 } else { v.minute };
    u.minute = u.minute.max(candidate);
    (u, v)
}

/// Junta size `ceil(n^(1 - epsilon))`.
pub fn junta_size(n: usize, epsilon: f64) -> usize {
    let raw = (n as f64).powf(1.0 - epsilon);
    // absorb float noise on exact powers
    let k = (raw - 1e-9).ceil() as usize;
    k.clamp(1, n)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JuntaClock {
    /// Agents in the junta, sorted ascending.
    pub members: Vec<usize>,
    /// Minutes per hour (a constant for this clock).
    pub minutes_per_hour: u64,
}

impl Transition for JuntaClock {
    type State = JuntaClockState;
    const KIND: ProtocolKind = ProtocolKind::JuntaClock;

    fn required_mode(&self) -> Option<RandomnessMode> {
        None
    }

    fn initial_states(&self, n: usize) -> Result<Vec<JuntaClockState>> {
        if self.minutes_per_hour == 0 {
            return Err(invalid("junta clock minutes per hour must be positive"));
        }
        if self.members.is_empty() {
            return Err(invalid("junta must be non-empty"));
        }
        let mut states = vec![JuntaClockState::default(); n];
        for &m in &self.members {
            if m >= n {
                return Err(invalid(format!("junta member {m} out of range for n={n}")));
            }
            states[m].in_junta = true;
        }
        Ok(states)
    }

    #[inline]
    fn interact(&self, u: &mut JuntaClockState, v: &mut JuntaClockState, _coin: Option<bool>) -> Events {
        *u = junta_clock_step(*u, *v).0;
        Events::NONE
    }

    fn wrap(states: Vec<JuntaClockState>) -> Configuration {
        Configuration::JuntaClock(states)
    }

    fn states_of(config: &Configuration) -> Option<&[JuntaClockState]> {
        match config {
            Configuration::JuntaClock(s) => Some(s),
            _ => None,
        }
    }

    fn hour(&self, s: &JuntaClockState) -> Option<u64> {
        Some(s.minute / self.minutes_per_hour)
    }

    fn minute(&self, s: &JuntaClockState) -> Option<u64> {
        Some(s.minute % self.minutes_per_hour)
    }

    fn in_junta(&self, s: &JuntaClockState) -> Option<bool> {
        Some(s.in_junta)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct LeaderlessClockState {
    pub hour: u64,
    pub minute: u32,
}

/// Adopt a larger hour, else advance the hour once `minute == m`, else tick
/// the minute. The responder is unchanged.
#[inline]
pub fn leaderless_clock_step(
    u: LeaderlessClockState,
    v: LeaderlessClockState,
    m: u32,
) -> (LeaderlessClockState, LeaderlessClockState) {
    let u = if u.hour < v.hour {
        LeaderlessClockState { hour: v.hour, minute: 0 }
    } else if u.minute == m {
        LeaderlessClockState { hour: u.hour + 1, minute: 0 }
    } else {
        LeaderlessClockState { hour: u.hour, minute: u.minute + 1 }
    };
    (u, v)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LeaderlessClock {
    pub max_minute: u32,
}

impl Transition for LeaderlessClock {
    type State = LeaderlessClockState;
    const KIND: ProtocolKind = ProtocolKind::LeaderlessClock;

    fn required_mode(&self) -> Option<RandomnessMode> {
        None
    }

    fn initial_states(&self, n: usize) -> Result<Vec<LeaderlessClockState>> {
        if self.max_minute == 0 {
            return Err(invalid("leaderless clock minute bound must be positive"));
        }
        Ok(vec![LeaderlessClockState::default(); n])
    }

    #[inline]
    fn interact(
        &self,
        u: &mut LeaderlessClockState,
        v: &mut LeaderlessClockState,
        _coin: Option<bool>,
    ) -> Events {
        *u = leaderless_clock_step(*u, *v, self.max_minute).0;
        Events::NONE
    }

    fn wrap(states: Vec<LeaderlessClockState>) -> Configuration {
        Configuration::LeaderlessClock(states)
    }

    fn states_of(config: &Configuration) -> Option<&[LeaderlessClockState]> {
        match config {
            Configuration::LeaderlessClock(s) => Some(s),
            _ => None,
        }
    }

    fn hour(&self, s: &LeaderlessClockState) -> Option<u64> {
        Some(s.hour)
    }

    fn minute(&self, s: &LeaderlessClockState) -> Option<u64> {
        Some(s.minute as u64)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn j(minute: u64, in_junta: bool) -> JuntaClockState {
        JuntaClockState { minute, in_junta }
    }

    fn l(hour: u64, minute: u32) -> LeaderlessClockState {
        LeaderlessClockState { hour, minute }
    }

    #[test]
    fn junta_rule() {
        assert_eq!(junta_clock_step(j(5, true), j(5, false)).0.minute, 6);
        assert_eq!(junta_clock_step(j(5, false), j(9, true)).0.minute, 9);
        assert_eq!(junta_clock_step(j(9, false), j(3, false)).0.minute, 9);
        let (_, v) = junta_clock_step(j(0, true), j(4, true));
        assert_eq!(v, j(4, true));
    }

    #[test]
    fn junta_sizes() {
        assert_eq!(junta_size(256, 0.5), 16);
        assert_eq!(junta_size(512, 0.5), 23);
        assert_eq!(junta_size(2, 0.5), 2);
        assert_eq!(junta_size(100, 1.0), 1);
    }

    #[test]
    fn junta_hour_is_minute_quotient() {
        let c = JuntaClock { members: vec![0], minutes_per_hour: 8 };
        assert_eq!(c.hour(&j(17, false)), Some(2));
        assert_eq!(c.minute(&j(17, false)), Some(1));
    }

    #[test]
    fn leaderless_rule() {
        let m = 12;
        assert_eq!(leaderless_clock_step(l(2, m), l(2, 0), m).0, l(3, 0));
        assert_eq!(leaderless_clock_step(l(1, 7), l(4, 2), m).0, l(4, 0));
        assert_eq!(leaderless_clock_step(l(3, 0), l(3, 5), m).0, l(3, 1));
    }
}
