//! Incremental bookkeeping of rounds, epidemic progress and leader counts.
//!
//! The tracker is fed one [`Delta`] per executed step and updates its
//! watermarks in O(1) amortized time. Hours are tracked as true
//! (unbounded) values even when agents store residues.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::Source;
use crate::protocols::{Events, Transition};

/// One completed round: `r_end` is the step during which the first agent
/// reached hour `round + 1`; `r_start` the step at which the last agent
/// reached hour `round` (absent if that had not happened when the trial
/// ended, in which case the round had no overlap).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoundMetrics {
    pub round: u64,
    pub r_start: Option<u64>,
    pub r_end: u64,
    pub length: u64,
    pub stretch: u64,
}

/// For one round, the step (relative to the round's first appearance of its
/// hour) at which the largest minute among agents in that hour first
/// reached each value.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinuteTimeline {
    pub round: u64,
    pub reach_steps: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StabilizationReport {
    pub stabilization_step: Option<u64>,
    /// Leader count at the start and at the end of each completed round.
    pub leader_counts: Vec<usize>,
    pub reached_single_leader: bool,
    pub final_leaders: usize,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TickStats {
    /// Live ticks armed while the agent was initiator.
    pub armed_as_initiator: u64,
    /// Live ticks armed while the agent was responder.
    pub armed_as_responder: u64,
    pub leader_increments: u64,
    pub leader_plain: u64,
}

impl TickStats {
    pub fn armed_initiator_fraction(&self) -> Option<f64> {
        let total = self.armed_as_initiator + self.armed_as_responder;
        (total > 0).then(|| self.armed_as_initiator as f64 / total as f64)
    }

    pub fn leader_increment_fraction(&self) -> Option<f64> {
        let total = self.leader_increments + self.leader_plain;
        (total > 0).then(|| self.leader_increments as f64 / total as f64)
    }
}

/// Counters for properties that must never fail (or, for the literal
/// two-leader rule, are expected to).
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violations {
    pub hour_decrease: u64,
    pub state_out_of_range: u64,
    pub leader_increase: u64,
    /// Steps after which no leader held the maximum level.
    pub max_level_unheld: u64,
    pub first_zero_leader_step: Option<u64>,
}

/// Aggregates that can be recomputed from a configuration snapshot.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrackedCounters {
    pub max_hour: Option<u64>,
    pub min_hour: Option<u64>,
    pub infected: Option<usize>,
    pub leaders: Option<usize>,
}

impl TrackedCounters {
    /// Direct recomputation from agent states (hours read as stored).
    pub fn recompute<P: Transition>(protocol: &P, states: &[P::State]) -> Self {
        let hours = || states.iter().filter_map(|s| protocol.hour(s));
        let count = |f: &dyn Fn(&P::State) -> Option<bool>| {
            let mut any = false;
            let c = states
                .iter()
                .filter(|s| {
                    let v = f(s);
                    any |= v.is_some();
                    v == Some(true)
                })
                .count();
            any.then_some(c)
        };
        Self {
            max_hour: hours().max(),
            min_hour: hours().min(),
            infected: count(&|s| protocol.infected(s)),
            leaders: count(&|s| protocol.leader(s)),
        }
    }
}

/// State change of one step.
#[derive(Debug, Clone, Copy)]
pub struct Delta<S> {
    pub step_index: u64,
    pub source: Source,
    pub initiator: usize,
    pub responder: usize,
    pub initiator_before: S,
    pub initiator_after: S,
    pub responder_before: S,
    pub responder_after: S,
    pub events: Events,
}

#[derive(Debug, Clone)]
struct HourTracker {
    modulus: Option<u64>,
    true_hours: Vec<u64>,
    /// Agent counts per hour, indexed from `min_hour`.
    counts: VecDeque<usize>,
    min_hour: u64,
    max_hour: u64,
    round_start: Vec<u64>,
    round_end: Vec<u64>,
    minute_watermark: u64,
    current_timeline: Vec<u64>,
    timelines: Vec<MinuteTimeline>,
}

impl HourTracker {
    fn new(hours: Vec<u64>, minutes: impl Iterator<Item = u64>, modulus: Option<u64>) -> Self {
        let min_hour = *hours.iter().min().expect("non-empty population");
        let max_hour = *hours.iter().max().expect("non-empty population");
        let mut counts = VecDeque::from(vec![0usize; (max_hour - min_hour + 1) as usize]);
        for &h in &hours {
            counts[(h - min_hour) as usize] += 1;
        }
        let watermark = hours
            .iter()
            .zip(minutes)
            .filter(|(h, _)| **h == max_hour)
            .map(|(_, m)| m)
            .max()
            .unwrap_or(0);
        Self {
            modulus,
            true_hours: hours,
            counts,
            min_hour,
            max_hour,
            round_start: vec![0; min_hour as usize + 1],
            round_end: vec![0; max_hour as usize],
            minute_watermark: watermark,
            current_timeline: vec![0; watermark as usize + 1],
            timelines: Vec::new(),
        }
    }

    /// Returns true if the max hour advanced.
    #[inline(never)]
    fn update(&mut self, agent: usize, before: u64, after: u64, step: u64, violations: &mut Violations) -> bool {
        if before == after {
            return false;
        }
        let delta = match self.modulus {
            Some(m) => (after + m - before) % m,
            None => {
                if after < before {
                    violations.hour_decrease += 1;
                    return false;
                }
                after - before
            }
        };
        let old = self.true_hours[agent];
        let new = old + delta;
        self.true_hours[agent] = new;
        self.counts[(old - self.min_hour) as usize] -= 1;
        let idx = (new - self.min_hour) as usize;
        if idx >= self.counts.len() {
            self.counts.resize(idx + 1, 0);
        }
        self.counts[idx] += 1;

        let mut advanced = false;
        if new > self.max_hour {
            for _ in self.max_hour..new {
                self.round_end.push(step);
                let round = self.round_end.len() as u64 - 1;
                self.timelines.push(MinuteTimeline {
                    round,
                    reach_steps: std::mem::take(&mut self.current_timeline),
                });
            }
            self.max_hour = new;
            self.minute_watermark = 0;
            self.current_timeline = vec![0];
            advanced = true;
        }
        while self.counts.front() == Some(&0) && self.min_hour < self.max_hour {
            self.counts.pop_front();
            self.min_hour += 1;
            self.round_start.push(step);
        }
        advanced
    }

    #[inline]
    fn observe_minute(&mut self, agent: usize, minute: u64, step: u64) {
        if minute <= self.minute_watermark || self.true_hours[agent] != self.max_hour {
            return;
        }
        let origin = if self.max_hour == 0 {
            0
        } else {
            self.round_end[self.max_hour as usize - 1]
        };
        for _ in self.minute_watermark..minute {
            self.current_timeline.push(step - origin);
        }
        self.minute_watermark = minute;
    }

    fn rounds(&self) -> Vec<RoundMetrics> {
        let mut prev_end = 0;
        self.round_end
            .iter()
            .enumerate()
            .map(|(i, &r_end)| {
                let r_start = self.round_start.get(i).copied();
                let length = r_start.map_or(0, |s| r_end.saturating_sub(s));
                let stretch = r_end - prev_end;
                prev_end = r_end;
                RoundMetrics {
                    round: i as u64,
                    r_start,
                    r_end,
                    length,
                    stretch,
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone)]
struct LevelWatch {
    max_level: u32,
    leaders_at_max: usize,
}

#[derive(Debug, Clone)]
pub struct Tracker {
    n: usize,
    next_step: u64,
    random_steps: u64,
    hours: Option<HourTracker>,
    infected: Option<usize>,
    epidemic_finish: Option<u64>,
    leaders: Option<usize>,
    first_single_leader: Option<u64>,
    leader_counts: Vec<usize>,
    levels: Option<LevelWatch>,
    ticks: TickStats,
    violations: Violations,
    milestones: u64,
}

impl Tracker {
    pub fn new<P: Transition>(protocol: &P, states: &[P::State]) -> Self {
        let n = states.len();
        let hours = states
            .iter()
            .map(|s| protocol.hour(s))
            .collect::<Option<Vec<u64>>>()
            .filter(|h| !h.is_empty())
            .map(|h| {
                let minutes = states.iter().map(|s| protocol.minute(s).unwrap_or(0));
                HourTracker::new(h, minutes, protocol.hour_modulus())
            });
        let counters = TrackedCounters::recompute(protocol, states);
        let epidemic_finish = counters.infected.filter(|&c| c == n).map(|_| 0);
        let first_single_leader = counters.leaders.filter(|&c| c == 1).map(|_| 0);
        let levels = counters.leaders.map(|_| {
            let max_level = states.iter().filter_map(|s| protocol.level(s)).max().unwrap_or(0);
            let leaders_at_max = states
                .iter()
                .filter(|s| protocol.leader(s) == Some(true) && protocol.level(s) == Some(max_level))
                .count();
            LevelWatch {
                max_level,
                leaders_at_max,
            }
        });
        let mut violations = Violations::default();
        if counters.leaders == Some(0) {
            violations.first_zero_leader_step = Some(0);
        }
        Self {
            n,
            next_step: 0,
            random_steps: 0,
            hours,
            infected: counters.infected,
            epidemic_finish,
            leaders: counters.leaders,
            first_single_leader,
            leader_counts: counters.leaders.into_iter().collect(),
            levels,
            ticks: TickStats::default(),
            violations,
            milestones: 0,
        }
    }

    /// Folds one step into the watermarks. Steps must arrive in order.
    #[inline]
    pub fn observe_step<P: Transition>(&mut self, protocol: &P, d: &Delta<P::State>) -> Result<()> {
        if d.step_index != self.next_step {
            return Err(Error::OutOfOrderStep {
                expected: self.next_step,
                got: d.step_index,
            });
        }
        self.next_step += 1;
        let t = d.step_index;
        if d.source == Source::Random {
            self.random_steps += 1;
        }

        let agents = [
            (d.initiator, &d.initiator_before, &d.initiator_after),
            (d.responder, &d.responder_before, &d.responder_after),
        ];

        for (_, _, after) in agents {
            self.violations.state_out_of_range += !protocol.state_in_range(after) as u64;
        }

        if let Some(hours) = self.hours.as_mut() {
            let mut advanced = false;
            for (agent, before, after) in agents {
                if let (Some(hb), Some(ha)) = (protocol.hour(before), protocol.hour(after)) {
                    if hb != ha {
                        advanced |= hours.update(agent, hb, ha, t, &mut self.violations);
                    }
                }
            }
            for (agent, _, after) in agents {
                if let Some(m) = protocol.minute(after) {
                    hours.observe_minute(agent, m, t);
                }
            }
            if advanced {
                self.milestones += 1;
                if let Some(l) = self.leaders {
                    for _ in self.leader_counts.len()..=hours.round_end.len() {
                        self.leader_counts.push(l);
                    }
                }
            }
        }

        if let Some(count) = self.infected.as_mut() {
            for (_, before, after) in agents {
                match (protocol.infected(before), protocol.infected(after)) {
                    (Some(false), Some(true)) => *count += 1,
                    (Some(true), Some(false)) => *count -= 1,
                    _ => {}
                }
            }
            if *count == self.n && self.epidemic_finish.is_none() {
                self.epidemic_finish = Some(t);
                self.milestones += 1;
            }
        }

        if let Some(count) = self.leaders {
            let mut now = count;
            for (_, before, after) in agents {
                match (protocol.leader(before), protocol.leader(after)) {
                    (Some(false), Some(true)) => now += 1,
                    (Some(true), Some(false)) => now -= 1,
                    _ => {}
                }
            }
            if now != count {
                self.milestones += 1;
            }
            if now > count {
                self.violations.leader_increase += 1;
            }
            if now == 1 && self.first_single_leader.is_none() {
                self.first_single_leader = Some(t);
            }
            if now == 0 && self.violations.first_zero_leader_step.is_none() {
                self.violations.first_zero_leader_step = Some(t);
            }
            self.leaders = Some(now);

            if let Some(w) = self.levels.as_mut() {
                let holds = |s: &P::State, max: u32| {
                    protocol.leader(s) == Some(true) && protocol.level(s) == Some(max)
                };
                for (_, before, _) in agents {
                    if holds(before, w.max_level) {
                        w.leaders_at_max -= 1;
                    }
                }
                let top = agents
                    .iter()
                    .filter_map(|(_, _, a)| protocol.level(a))
                    .max()
                    .unwrap_or(0);
                if top > w.max_level {
                    w.max_level = top;
                    w.leaders_at_max = 0;
                }
                for (_, _, after) in agents {
                    if holds(after, w.max_level) {
                        w.leaders_at_max += 1;
                    }
                }
                if w.leaders_at_max == 0 {
                    self.violations.max_level_unheld += 1;
                }
            }
        }

        let e = d.events;
        if e != Events::NONE {
            if e.contains(Events::TICK_ARMED_INITIATOR) {
                self.ticks.armed_as_initiator += 1;
            }
            if e.contains(Events::TICK_ARMED_RESPONDER) {
                self.ticks.armed_as_responder += 1;
            }
            if e.contains(Events::LEADER_TICK_INCREMENT) {
                self.ticks.leader_increments += 1;
            }
            if e.contains(Events::LEADER_TICK_PLAIN) {
                self.ticks.leader_plain += 1;
            }
        }
        Ok(())
    }

    /// Changes whenever a round completes, the epidemic finishes or the
    /// leader count moves; cheap to poll for stop conditions.
    pub fn milestones(&self) -> u64 {
        self.milestones
    }

    pub fn steps_observed(&self) -> u64 {
        self.next_step
    }

    pub fn random_steps(&self) -> u64 {
        self.random_steps
    }

    /// Number of rounds whose end has been observed.
    pub fn completed_rounds(&self) -> usize {
        self.hours.as_ref().map_or(0, |h| h.round_end.len())
    }

    /// Current round (max true hour) and its minute watermark.
    pub fn minute_watermark(&self) -> Option<(u64, u64)> {
        self.hours.as_ref().map(|h| (h.max_hour, h.minute_watermark))
    }

    /// True (unbounded) hour of every agent.
    pub fn true_hours(&self) -> Option<&[u64]> {
        self.hours.as_ref().map(|h| h.true_hours.as_slice())
    }

    pub fn counters(&self) -> TrackedCounters {
        TrackedCounters {
            max_hour: self.hours.as_ref().map(|h| h.max_hour),
            min_hour: self.hours.as_ref().map(|h| h.min_hour),
            infected: self.infected,
            leaders: self.leaders,
        }
    }

    pub fn finalize_rounds(&self) -> Vec<RoundMetrics> {
        self.hours.as_ref().map(HourTracker::rounds).unwrap_or_default()
    }

    /// Minute timelines of completed rounds.
    pub fn timelines(&self) -> &[MinuteTimeline] {
        self.hours.as_ref().map_or(&[], |h| h.timelines.as_slice())
    }

    pub fn epidemic_finish(&self) -> Option<u64> {
        self.epidemic_finish
    }

    /// First step after which exactly one leader remains, provided it still
    /// does.
    pub fn stabilization_time(&self) -> Option<u64> {
        match self.leaders {
            Some(1) => self.first_single_leader,
            _ => None,
        }
    }

    pub fn leader_count(&self) -> Option<usize> {
        self.leaders
    }

    pub fn stabilization_report(&self) -> Option<StabilizationReport> {
        let final_leaders = self.leaders?;
        Some(StabilizationReport {
            stabilization_step: self.stabilization_time(),
            leader_counts: self.leader_counts.clone(),
            reached_single_leader: final_leaders == 1 && self.first_single_leader.is_some(),
            final_leaders,
        })
    }

    pub fn ticks(&self) -> TickStats {
        self.ticks
    }

    pub fn violations(&self) -> Violations {
        self.violations
    }
}
