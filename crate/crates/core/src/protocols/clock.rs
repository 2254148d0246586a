//! The smoothed phase clock: a second counter that only advances on runs of
//! consecutive heads, a minute counter advanced by full runs, and an hour
//! counter; minute and hour spread by one-way epidemic.

use serde::{Deserialize, Serialize};

use super::{Configuration, Events, ProtocolKind, Transition};
use crate::error::{invalid, Result};
use crate::model::{ceil_log2, ceil_log2_int, RandomnessMode};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClockParams {
    /// Seconds per minute (`S`).
    pub seconds_per_minute: u32,
    /// Minutes per hour (`M`).
    pub minutes_per_hour: u32,
    /// Slack constant inside `S`.
    pub c: u32,
    /// Multiplier giving `M = c_m * ceil(log2 n)`.
    pub c_m: u32,
    /// Store hours as residues modulo this value (>= 3) when set.
    pub hour_modulus: Option<u64>,
}

impl ClockParams {
    /// Whether `s` is a state this clock can reach.
    pub fn contains(&self, s: &ClockState) -> bool {
        // non-short-circuit: this runs every step
        (s.second < self.seconds_per_minute)
            & (s.minute < self.minutes_per_hour)
            & (s.hour < self.hour_modulus.unwrap_or(u64::MAX))
    }

    pub fn validate(&self) -> Result<()> {
        if self.seconds_per_minute == 0 {
            return Err(invalid("seconds per minute must be positive"));
        }
        if self.minutes_per_hour == 0 {
            return Err(invalid("minutes per hour must be positive"));
        }
        if let Some(m) = self.hour_modulus {
            if m < 3 {
                return Err(invalid(format!("hour modulus must be at least 3, got {m}")));
            }
        }
        Ok(())
    }
}

/// `S = ceil(log2(n/p)) + ceil(log2(ceil(log2 n))) + c`, `M = c_m * ceil(log2 n)`.
pub fn derive_clock_params(n: usize, p: f64, c: u32, c_m: u32) -> Result<ClockParams> {
    if n < 2 {
        return Err(crate::error::Error::PopulationTooSmall(n));
    }
    if !(p > 0.0 && p <= 1.0) {
        return Err(invalid(format!("smoothing parameter must be in (0, 1], got {p}")));
    }
    if c <= 2 {
        return Err(invalid(format!("slack constant c must exceed 2, got {c}")));
    }
    if c_m == 0 {
        return Err(invalid("c_M must be positive"));
    }
    let log_n = ceil_log2_int(n as u64);
    let s = ceil_log2(n as f64 / p) + ceil_log2_int(log_n as u64) + c;
    Ok(ClockParams {
        seconds_per_minute: s,
        minutes_per_hour: c_m * log_n,
        c,
        c_m,
        hour_modulus: None,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ClockState {
    pub second: u32,
    pub minute: u32,
    pub hour: u64,
}

impl ClockState {
    pub const fn new(second: u32, minute: u32, hour: u64) -> Self {
        Self {
            second,
            minute,
            hour,
        }
    }
}

/// `a < b` on hours. With a modulus, residues are compared in the window of
/// half the modulus ahead of `a`.
#[inline]
pub fn hour_lt(a: u64, b: u64, modulus: Option<u64>) -> bool {
    match modulus {
        None => a < b,
        Some(m) => {
            let d = (b + m - a) % m;
            d != 0 && 2 * d < m
        }
    }
}

#[inline]
fn next_hour(h: u64, modulus: Option<u64>) -> u64 {
    match modulus {
        None => h + 1,
        Some(m) => (h + 1) % m,
    }
}

#[inline]
fn rollovers(u: &mut ClockState, params: &ClockParams) {
    if u.second == params.seconds_per_minute {
        u.minute += 1;
        u.second = 0;
    }
    if u.minute == params.minutes_per_hour {
        u.hour = next_hour(u.hour, params.hour_modulus);
        u.minute = 0;
    }
}

#[inline]
fn adopt(u: &mut ClockState, v: &ClockState, params: &ClockParams) {
    if hour_lt(u.hour, v.hour, params.hour_modulus) {
        u.hour = v.hour;
        u.minute = 0;
        u.second = 0;
    }
    if u.hour == v.hour && u.minute < v.minute {
        u.minute = v.minute;
        u.second = 0;
    }
}

/// One interaction of the coin-driven clock. `v` is never modified.
#[inline]
pub fn smoothed_clock_step(
    u: ClockState,
    v: ClockState,
    coin: bool,
    params: &ClockParams,
) -> (ClockState, ClockState) {
    let mut u = u;
    if coin {
        u.second += 1;
    } else {
        u.second = 0;
    }
    rollovers(&mut u, params);
    adopt(&mut u, &v, params);
    (u, v)
}

/// One interaction of the coin-free clock: being initiator counts as heads
/// and being responder as tails.
#[inline]
pub fn smoothed_clock_step_ordered(
    u: ClockState,
    v: ClockState,
    params: &ClockParams,
) -> (ClockState, ClockState) {
    let (mut u, mut v) = (u, v);
    u.second += 1;
    v.second = 0;
    rollovers(&mut u, params);
    adopt(&mut u, &v, params);
    (u, v)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SmoothedClock {
    pub params: ClockParams,
    pub mode: RandomnessMode,
}

impl SmoothedClock {
    pub fn new(params: ClockParams, mode: RandomnessMode) -> Result<Self> {
        params.validate()?;
        Ok(Self { params, mode })
    }

    /// Shared by the leader election protocol, which embeds this clock.
    #[inline]
    pub(crate) fn advance(&self, u: &mut ClockState, v: &mut ClockState, coin: Option<bool>) {
        let (nu, nv) = match self.mode {
            RandomnessMode::Coin => smoothed_clock_step(*u, *v, coin.unwrap_or(false), &self.params),
            RandomnessMode::OrderedRandom => smoothed_clock_step_ordered(*u, *v, &self.params),
        };
        *u = nu;
        *v = nv;
    }
}

impl Transition for SmoothedClock {
    type State = ClockState;
    const KIND: ProtocolKind = ProtocolKind::SmoothedClock;

    fn required_mode(&self) -> Option<RandomnessMode> {
        Some(self.mode)
    }

    fn initial_states(&self, n: usize) -> Result<Vec<ClockState>> {
        self.params.validate()?;
        Ok(vec![ClockState::default(); n])
    }

    #[inline]
    fn interact(&self, u: &mut ClockState, v: &mut ClockState, coin: Option<bool>) -> Events {
        self.advance(u, v, coin);
        Events::NONE
    }

    fn wrap(states: Vec<ClockState>) -> Configuration {
        Configuration::SmoothedClock(states)
    }

    fn states_of(config: &Configuration) -> Option<&[ClockState]> {
        match config {
            Configuration::SmoothedClock(s) => Some(s),
            _ => None,
        }
    }

    fn hour(&self, s: &ClockState) -> Option<u64> {
        Some(s.hour)
    }

    fn hour_modulus(&self) -> Option<u64> {
        self.params.hour_modulus
    }

    fn minute(&self, s: &ClockState) -> Option<u64> {
        Some(s.minute as u64)
    }

    fn state_in_range(&self, s: &ClockState) -> bool {
        self.params.contains(s)
    }
}
