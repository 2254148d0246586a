//! Strict JSON experiment configuration.

use rand::seq::index;
use serde::{Deserialize, Serialize};

use crate::adversary::StrategyKind;
use crate::engine::TrialSpec;
use crate::error::{Error, Result};
use crate::model::{ceil_log2_int, RandomnessMode};
use crate::protocols::{
    derive_clock_params, junta_size, ClockParams, Epidemic, JuntaClock, LeaderElection, LeaderParams,
    LeaderlessClock, PairwiseRule, Protocol, ProtocolKind, SmoothedClock,
};
use crate::rng::{self, Stream};

pub const SCHEMA_VERSION: u32 = 1;

/// A sweep axis: a single value or a list.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum OneOrMany<T> {
    One(T),
    Many(Vec<T>),
}

impl<T: Clone> OneOrMany<T> {
    pub fn values(&self) -> Vec<T> {
        match self {
            OneOrMany::One(v) => vec![v.clone()],
            OneOrMany::Many(v) => v.clone(),
        }
    }

    pub fn len(&self) -> usize {
        match self {
            OneOrMany::One(_) => 1,
            OneOrMany::Many(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

impl<T> From<T> for OneOrMany<T> {
    fn from(v: T) -> Self {
        OneOrMany::One(v)
    }
}

fn default_schema() -> u32 {
    SCHEMA_VERSION
}
fn default_adversary() -> OneOrMany<StrategyKind> {
    OneOrMany::One(StrategyKind::Null)
}
fn default_c() -> u32 {
    3
}
fn default_c_m() -> u32 {
    8
}
fn default_c_l() -> u32 {
    4
}
fn default_epsilon() -> f64 {
    0.5
}
fn default_m_const() -> u64 {
    8
}
fn default_c_m_leaderless() -> u32 {
    4
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default = "default_schema")]
    pub schema_version: u32,
    pub n: OneOrMany<usize>,
    pub p: OneOrMany<f64>,
    pub protocol: OneOrMany<ProtocolKind>,
    #[serde(default)]
    pub mode: RandomnessMode,
    #[serde(default = "default_adversary")]
    pub adversary: OneOrMany<StrategyKind>,
    #[serde(default = "default_c")]
    pub c: u32,
    #[serde(default = "default_c_m", rename = "c_M")]
    pub c_m: u32,
    #[serde(default = "default_c_l", rename = "c_L")]
    pub c_l: u32,
    #[serde(default = "default_epsilon")]
    pub epsilon_junta: f64,
    #[serde(default = "default_m_const", rename = "M_const")]
    pub m_const: u64,
    #[serde(default)]
    pub hour_modulus: Option<u64>,
    /// Leaderless clock minute bound is `c_M_leaderless * ceil(log2 n)`.
    #[serde(default = "default_c_m_leaderless", rename = "c_M_leaderless")]
    pub c_m_leaderless: u32,
    pub trials: u64,
    pub base_seed: u64,
    pub max_steps: u64,
    #[serde(default)]
    pub stop_on_stabilize: bool,
    #[serde(default)]
    pub stop_after_rounds: Option<u64>,
    /// Defaults to `max(1, max_steps / 1000)`.
    #[serde(default)]
    pub snapshot_stride: Option<u64>,
    #[serde(default)]
    pub trace: bool,
    #[serde(default)]
    pub allow_p_zero: bool,
    #[serde(default)]
    pub literal_pseudocode: bool,
    /// Population size assumed when deriving protocol constants.
    #[serde(default)]
    pub n_hint: Option<usize>,
    /// Smoothing parameter assumed when deriving protocol constants.
    #[serde(default)]
    pub p_hint: Option<f64>,
    #[serde(default)]
    pub initial_leaders: Option<Vec<usize>>,
    #[serde(default)]
    pub initial_levels: Option<Vec<u32>>,
    #[serde(default)]
    pub epidemic_sources: Option<Vec<usize>>,
    #[serde(default)]
    pub workers: Option<usize>,
}

/// Parses and validates a configuration document.
pub fn parse_config(text: &str) -> Result<ExperimentConfig> {
    let cfg: ExperimentConfig = serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
    cfg.validate()?;
    Ok(cfg)
}

fn bad(msg: impl Into<String>) -> Error {
    Error::Config(msg.into())
}

impl ExperimentConfig {
    /// Minimal single-cell configuration with all defaults.
    pub fn new(n: usize, p: f64, protocol: ProtocolKind, trials: u64, base_seed: u64, max_steps: u64) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            n: n.into(),
            p: p.into(),
            protocol: protocol.into(),
            mode: RandomnessMode::Coin,
            adversary: default_adversary(),
            c: default_c(),
            c_m: default_c_m(),
            c_l: default_c_l(),
            epsilon_junta: default_epsilon(),
            m_const: default_m_const(),
            hour_modulus: None,
            c_m_leaderless: default_c_m_leaderless(),
            trials,
            base_seed,
            max_steps,
            stop_on_stabilize: false,
            stop_after_rounds: None,
            snapshot_stride: None,
            trace: false,
            allow_p_zero: false,
            literal_pseudocode: false,
            n_hint: None,
            p_hint: None,
            initial_leaders: None,
            initial_levels: None,
            epidemic_sources: None,
            workers: None,
        }
    }

    pub fn with_adversary(mut self, adversary: StrategyKind) -> Self {
        self.adversary = adversary.into();
        self
    }

    pub fn with_mode(mut self, mode: RandomnessMode) -> Self {
        self.mode = mode;
        self
    }

    pub fn snapshot_stride(&self) -> u64 {
        self.snapshot_stride.unwrap_or((self.max_steps / 1000).max(1))
    }

    pub fn validate(&self) -> Result<()> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(bad(format!(
                "unsupported schema_version {} (expected {SCHEMA_VERSION})",
                self.schema_version
            )));
        }
        for (name, len) in [
            ("n", self.n.len()),
            ("p", self.p.len()),
            ("protocol", self.protocol.len()),
            ("adversary", self.adversary.len()),
        ] {
            if len == 0 {
                return Err(bad(format!("sweep axis {name} is empty")));
            }
        }
        if self.trials == 0 {
            return Err(bad("trials must be positive"));
        }
        if self.max_steps == 0 {
            return Err(bad("max_steps must be positive"));
        }
        if self.snapshot_stride == Some(0) {
            return Err(bad("snapshot_stride must be positive"));
        }
        if self.workers == Some(0) {
            return Err(bad("workers must be positive"));
        }
        if self.c_m == 0 || self.c_l == 0 || self.c_m_leaderless == 0 || self.m_const == 0 {
            return Err(bad("c_M, c_L, c_M_leaderless and M_const must be positive"));
        }
        if !(0.0..1.0).contains(&self.epsilon_junta) {
            return Err(bad(format!("epsilon_junta must be in [0, 1), got {}", self.epsilon_junta)));
        }
        if let Some(m) = self.hour_modulus {
            if m < 3 {
                return Err(bad(format!("hour_modulus must be at least 3, got {m}")));
            }
        }
        if let Some(h) = self.p_hint {
            if !(h > 0.0 && h <= 1.0) {
                return Err(bad(format!("p_hint must be in (0, 1], got {h}")));
            }
        }
        if self.n_hint.is_some_and(|h| h < 2) {
            return Err(bad("n_hint must be at least 2"));
        }
        let protocols = self.protocol.values();
        let clocked = protocols
            .iter()
            .any(|k| matches!(k, ProtocolKind::SmoothedClock | ProtocolKind::LeaderElection));
        if clocked && self.c <= 2 {
            return Err(bad(format!("c must exceed 2, got {}", self.c)));
        }
        for p in self.p.values() {
            if !(0.0..=1.0).contains(&p) {
                return Err(bad(format!("p must be in (0, 1], got {p}")));
            }
            if p == 0.0 {
                if !self.allow_p_zero {
                    return Err(bad("p = 0 requires allow_p_zero"));
                }
                if clocked && self.p_hint.is_none() {
                    return Err(bad("p = 0 with a phase clock requires p_hint"));
                }
            }
        }
        for n in self.n.values() {
            if n < 2 {
                return Err(Error::PopulationTooSmall(n));
            }
            for a in self.adversary.values() {
                a.validate(n).map_err(|e| bad(e.to_string()))?;
            }
        }
        // building one protocol per cell catches the remaining inconsistencies
        for cell in self.cells() {
            cell.protocol(self.base_seed)?;
        }
        Ok(())
    }

    /// The cross product of the sweep axes, in axis order n, p, protocol,
    /// adversary.
    pub fn cells(&self) -> Vec<Cell> {
        let mut out = Vec::new();
        for n in self.n.values() {
            for p in self.p.values() {
                for protocol in self.protocol.values() {
                    for adversary in self.adversary.values() {
                        out.push(Cell {
                            n,
                            p,
                            protocol,
                            adversary,
                            cfg: self.clone(),
                        });
                    }
                }
            }
        }
        out
    }
}

/// One point of a sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct Cell {
    pub n: usize,
    pub p: f64,
    pub protocol: ProtocolKind,
    pub adversary: StrategyKind,
    pub cfg: ExperimentConfig,
}

impl Cell {
    fn clock_params(&self) -> Result<ClockParams> {
        let c = &self.cfg;
        let n = c.n_hint.unwrap_or(self.n);
        let p = c.p_hint.unwrap_or(self.p);
        let mut params = derive_clock_params(n, p, c.c, c.c_m)?;
        params.hour_modulus = c.hour_modulus;
        Ok(params)
    }

    /// Builds the protocol. Junta membership depends on the trial seed.
    pub fn protocol(&self, seed: u64) -> Result<Protocol> {
        let c = &self.cfg;
        let n_param = c.n_hint.unwrap_or(self.n);
        Ok(match self.protocol {
            ProtocolKind::Epidemic => Protocol::Epidemic(Epidemic {
                sources: c.epidemic_sources.clone().unwrap_or_else(|| vec![0]),
            }),
            ProtocolKind::SmoothedClock => Protocol::SmoothedClock(SmoothedClock::new(self.clock_params()?, c.mode)?),
            ProtocolKind::JuntaClock => {
                let k = junta_size(self.n, c.epsilon_junta);
                let mut rng = rng::stream(seed, Stream::Junta);
                let mut members = index::sample(&mut rng, self.n, k).into_vec();
                members.sort_unstable();
                Protocol::JuntaClock(JuntaClock {
                    members,
                    minutes_per_hour: c.m_const,
                })
            }
            ProtocolKind::LeaderlessClock => Protocol::LeaderlessClock(LeaderlessClock {
                max_minute: c.c_m_leaderless * ceil_log2_int(n_param as u64),
            }),
            ProtocolKind::LeaderElection => {
                let rule = if c.literal_pseudocode {
                    PairwiseRule::Literal
                } else {
                    PairwiseRule::Amended
                };
                let params = LeaderParams::derive(n_param, c.c_l, rule)?;
                let mut le = LeaderElection::new(params, self.clock_params()?, c.mode)?;
                le.initial_leaders = c.initial_leaders.clone();
                le.initial_levels = c.initial_levels.clone();
                // surface bad initial sets at validation time
                use crate::protocols::Transition;
                le.initial_states(self.n)?;
                Protocol::LeaderElection(le)
            }
        })
    }

    pub fn trial_spec(&self, seed: u64) -> Result<TrialSpec> {
        Ok(TrialSpec {
            n: self.n,
            p: self.p,
            mode: self.cfg.mode,
            protocol: self.protocol(seed)?,
            adversary: self.adversary,
            max_steps: self.cfg.max_steps,
            snapshot_stride: self.cfg.snapshot_stride(),
            trace: self.cfg.trace,
            stop_on_stabilize: self.cfg.stop_on_stabilize,
            stop_after_rounds: self.cfg.stop_after_rounds,
        })
    }
}
