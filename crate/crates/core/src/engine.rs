//! The step loop: scheduler, interaction, transition, metrics.

use serde::{Deserialize, Serialize};

use crate::adversary::{Adversary, StrategyKind};
use crate::error::{Error, Result};
use crate::metrics::{
    Delta, MinuteTimeline, RoundMetrics, StabilizationReport, TickStats, TrackedCounters, Tracker, Violations,
};
use crate::model::{Interaction, RandomnessMode, ScheduleStep};
use crate::protocols::{Configuration, Events, Protocol, Transition};
use crate::scheduler::{History, Observation, SmoothedScheduler, SmoothingParams};
use crate::with_transition;

/// Initial configuration of `n` agents.
pub fn new_population(n: usize, protocol: &Protocol) -> Result<Configuration> {
    if n < 2 {
        return Err(Error::PopulationTooSmall(n));
    }
    with_transition!(protocol, p => Ok(wrap_states(p, p.initial_states(n)?)))
}

fn wrap_states<P: Transition>(_p: &P, states: Vec<P::State>) -> Configuration {
    P::wrap(states)
}

fn states_for<'c, P: Transition>(_p: &P, config: &'c Configuration) -> Result<&'c [P::State]> {
    P::states_of(config).ok_or(Error::ProtocolMismatch {
        expected: P::KIND.as_str(),
    })
}

fn check_coin<P: Transition>(protocol: &P, coin: Option<bool>) -> Result<()> {
    match (protocol.required_mode(), coin) {
        (Some(RandomnessMode::Coin), None) => Err(Error::MissingCoin),
        (Some(RandomnessMode::OrderedRandom), Some(_)) => Err(Error::UnexpectedCoin),
        _ => Ok(()),
    }
}

/// Applies one interaction in place and returns the before/after states.
#[inline]
pub fn apply_interaction<P: Transition>(
    protocol: &P,
    states: &mut [P::State],
    interaction: Interaction,
    coin: Option<bool>,
) -> Result<(P::State, P::State, P::State, P::State, Events)> {
    interaction.validate(states.len())?;
    check_coin(protocol, coin)?;
    let (i, j) = (interaction.initiator.index(), interaction.responder.index());
    let (ub, vb) = (states[i], states[j]);
    let (mut u, mut v) = (ub, vb);
    let events = protocol.interact(&mut u, &mut v, coin);
    states[i] = u;
    states[j] = v;
    Ok((ub, u, vb, v, events))
}

/// Pure single step: returns the successor configuration.
pub fn step(config: &Configuration, s: &ScheduleStep, protocol: &Protocol) -> Result<Configuration> {
    with_transition!(protocol, p => {
        let mut states = states_for(p, config)?.to_vec();
        apply_interaction(p, &mut states, s.interaction, s.coin)?;
        Ok(wrap_states(p, states))
    })
}

/// A running trial over a concrete transition.
#[derive(Debug, Clone)]
pub struct Simulation<P: Transition> {
    protocol: P,
    states: Vec<P::State>,
    scheduler: SmoothedScheduler,
    adversary: Adversary,
    history: History,
    tracker: Tracker,
    record: bool,
}

impl<P: Transition> Simulation<P> {
    pub fn new(
        protocol: P,
        states: Vec<P::State>,
        scheduler: SmoothedScheduler,
        adversary: Adversary,
        record: bool,
    ) -> Result<Self> {
        if states.len() < 2 {
            return Err(Error::PopulationTooSmall(states.len()));
        }
        adversary.kind().validate(states.len())?;
        if let Some(mode) = protocol.required_mode() {
            if mode != scheduler.mode() {
                return Err(Error::InvalidParams(format!(
                    "{} is configured for {} but the scheduler runs {}",
                    P::KIND.as_str(),
                    mode.as_str(),
                    scheduler.mode().as_str()
                )));
            }
        }
        let tracker = Tracker::new(&protocol, &states);
        Ok(Self {
            protocol,
            states,
            scheduler,
            adversary,
            history: History::default(),
            tracker,
            record,
        })
    }

    /// Executes one step and returns it.
    #[inline]
    pub fn advance(&mut self) -> Result<ScheduleStep> {
        let step_index = self.history.steps_executed;
        let obs = Observation {
            step_index,
            protocol: &self.protocol,
            states: &self.states,
            history: &self.history,
        };
        let s = self.scheduler.next_interaction(&mut self.adversary, &obs)?;
        // the scheduler only emits distinct in-range agents and a coin that
        // matches the mode checked in `new`
        let (i, j) = (s.interaction.initiator.index(), s.interaction.responder.index());
        let (ub, vb) = (self.states[i], self.states[j]);
        let (mut u, mut v) = (ub, vb);
        let events = self.protocol.interact(&mut u, &mut v, s.coin);
        self.states[i] = u;
        self.states[j] = v;
        let delta = Delta {
            step_index,
            source: s.source,
            initiator: i,
            responder: j,
            initiator_before: ub,
            initiator_after: u,
            responder_before: vb,
            responder_after: v,
            events,
        };
        self.tracker.observe_step(&self.protocol, &delta)?;
        self.history.steps_executed += 1;
        if s.source == crate::model::Source::Random {
            self.history.random_steps += 1;
        }
        self.history.last = Some(s);
        if self.record {
            self.history.recorded.push(s);
        }
        Ok(s)
    }

    pub fn protocol(&self) -> &P {
        &self.protocol
    }

    pub fn states(&self) -> &[P::State] {
        &self.states
    }

    pub fn tracker(&self) -> &Tracker {
        &self.tracker
    }

    pub fn history(&self) -> &History {
        &self.history
    }

    pub fn steps_executed(&self) -> u64 {
        self.history.steps_executed
    }

    pub fn configuration(&self) -> Configuration {
        P::wrap(self.states.clone())
    }

    pub fn into_recorded(self) -> Vec<ScheduleStep> {
        self.history.recorded
    }
}

/// Everything needed to run one trial besides its seed.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialSpec {
    pub n: usize,
    pub p: f64,
    pub mode: RandomnessMode,
    pub protocol: Protocol,
    pub adversary: StrategyKind,
    pub max_steps: u64,
    pub snapshot_stride: u64,
    /// Record every step and keep full snapshot configurations.
    pub trace: bool,
    /// Stop once the epidemic finished or a single leader remains.
    pub stop_on_stabilize: bool,
    pub stop_after_rounds: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Snapshot {
    /// Number of steps executed before the snapshot.
    pub step: u64,
    pub counters: TrackedCounters,
    pub config: Option<Configuration>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialMetrics {
    pub steps_executed: u64,
    pub random_steps: u64,
    pub rounds: Vec<RoundMetrics>,
    pub timelines: Vec<MinuteTimeline>,
    pub epidemic_finish: Option<u64>,
    pub stabilization: Option<StabilizationReport>,
    pub ticks: TickStats,
    pub violations: Violations,
    /// Snapshots where the incremental counters disagreed with a direct
    /// recount, or where a stabilized trial showed more than one leader.
    pub snapshot_mismatches: u64,
    pub min_leaders_at_snapshots: Option<usize>,
}

impl TrialMetrics {
    pub fn random_step_fraction(&self) -> f64 {
        if self.steps_executed == 0 {
            0.0
        } else {
            self.random_steps as f64 / self.steps_executed as f64
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialTrace {
    pub seed: u64,
    /// Executed steps (empty unless the trial was traced).
    pub steps: Vec<ScheduleStep>,
    pub snapshots: Vec<Snapshot>,
    pub initial: Configuration,
    pub final_config: Configuration,
    pub metrics: TrialMetrics,
}

impl TrialTrace {
    /// Re-applies the recorded steps to the initial configuration.
    pub fn replay(&self, protocol: &Protocol) -> Result<Configuration> {
        let mut config = self.initial.clone();
        for (k, s) in self.steps.iter().enumerate() {
            if s.step_index != k as u64 {
                return Err(Error::OutOfOrderStep {
                    expected: k as u64,
                    got: s.step_index,
                });
            }
            config = step(&config, s, protocol)?;
        }
        Ok(config)
    }
}

/// Compares stored hours as residues, since snapshots hold residues.
fn counters_agree(tracked: TrackedCounters, direct: TrackedCounters, modulus: Option<u64>) -> bool {
    let hours_agree = match modulus {
        Some(_) => true,
        None => tracked.max_hour == direct.max_hour && tracked.min_hour == direct.min_hour,
    };
    hours_agree && tracked.infected == direct.infected && tracked.leaders == direct.leaders
}

fn run_generic<P: Transition>(protocol: &P, spec: &TrialSpec, seed: u64) -> Result<TrialTrace> {
    if spec.max_steps == 0 {
        return Err(Error::InvalidParams("max_steps must be positive".into()));
    }
    let stride = spec.snapshot_stride.max(1);
    let states = protocol.initial_states(spec.n)?;
    let initial = P::wrap(states.clone());
    let scheduler = SmoothedScheduler::new(spec.n, SmoothingParams::new(spec.p)?, spec.mode, seed)?;
    let adversary = Adversary::new(spec.adversary.clone(), seed);
    let mut sim = Simulation::new(protocol.clone(), states, scheduler, adversary, spec.trace)?;

    let mut snapshots = Vec::new();
    let mut mismatches = 0u64;
    let mut min_leaders: Option<usize> = None;
    let mut take_snapshot = |sim: &Simulation<P>| {
        let direct = TrackedCounters::recompute(sim.protocol(), sim.states());
        let tracked = sim.tracker().counters();
        if !counters_agree(tracked, direct, sim.protocol().hour_modulus()) {
            mismatches += 1;
        }
        if let Some(l) = direct.leaders {
            min_leaders = Some(min_leaders.map_or(l, |m| m.min(l)));
            if sim.tracker().stabilization_time().is_some() && l != 1 {
                mismatches += 1;
            }
        }
        snapshots.push(Snapshot {
            step: sim.steps_executed(),
            counters: direct,
            config: spec.trace.then(|| sim.configuration()),
        });
    };
    take_snapshot(&sim);

    let stop = |sim: &Simulation<P>| {
        let t = sim.tracker();
        let stabilized = spec.stop_on_stabilize
            && (t.stabilization_time().is_some() || t.epidemic_finish().is_some());
        let rounds_done = spec
            .stop_after_rounds
            .is_some_and(|k| t.completed_rounds() as u64 >= k);
        stabilized || rounds_done
    };

    let mut next_snapshot = stride;
    let mut seen = sim.tracker().milestones();
    let mut stopped = stop(&sim);
    while !stopped && sim.steps_executed() < spec.max_steps {
        sim.advance()?;
        let done = sim.steps_executed();
        if done == next_snapshot {
            take_snapshot(&sim);
            next_snapshot += stride;
        }
        let m = sim.tracker().milestones();
        if m != seen {
            seen = m;
            stopped = stop(&sim);
        }
    }
    if sim.steps_executed() + stride != next_snapshot {
        take_snapshot(&sim);
    }

    let t = sim.tracker();
    let metrics = TrialMetrics {
        steps_executed: sim.steps_executed(),
        random_steps: t.random_steps(),
        rounds: t.finalize_rounds(),
        timelines: t.timelines().to_vec(),
        epidemic_finish: t.epidemic_finish(),
        stabilization: t.stabilization_report(),
        ticks: t.ticks(),
        violations: t.violations(),
        snapshot_mismatches: mismatches,
        min_leaders_at_snapshots: min_leaders,
    };
    let final_config = sim.configuration();
    Ok(TrialTrace {
        seed,
        steps: sim.into_recorded(),
        snapshots,
        initial,
        final_config,
        metrics,
    })
}

/// Runs one trial; fully determined by `(spec, seed)`.
pub fn run_trial(spec: &TrialSpec, seed: u64) -> Result<TrialTrace> {
    with_transition!(&spec.protocol, p => run_generic(p, spec, seed))
}
