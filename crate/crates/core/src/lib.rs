//! Simulation of population protocols under smoothed schedulers.
//!
//! A smoothed scheduler lets an adaptive adversary choose every interaction
//! but replaces each choice, with probability `p`, by a uniformly random
//! pair. The crate provides the engine, the protocols (one-way epidemic,
//! the smoothed phase clock, two baseline clocks and leader election), the
//! adversaries, round metrics and the experiment harness.

pub mod adversary;
pub mod engine;
mod error;
pub mod experiment;
pub mod metrics;
pub mod model;
pub mod protocols;
pub mod rng;
pub mod scheduler;

pub use adversary::{Adversary, Proposal, StrategyKind};
pub use engine::{new_population, run_trial, step, Simulation, TrialSpec, TrialTrace};
pub use error::{Error, Result};
pub use model::{AgentId, AgentPair, Interaction, RandomnessMode, ScheduleStep, Source};
pub use protocols::{Configuration, Protocol, ProtocolKind, Transition};
pub use scheduler::{draw_uniform_interaction, SmoothedScheduler, SmoothingParams};
pub use experiment::{parse_config, run_experiment, ExperimentConfig, SummaryRow};
