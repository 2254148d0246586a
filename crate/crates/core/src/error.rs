use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("population size must be at least 2, got {0}")]
    PopulationTooSmall(usize),

    #[error("agent {agent} out of range for population of {n}")]
    AgentOutOfRange { agent: usize, n: usize },

    #[error("self-interaction ({0}, {0}) is not allowed")]
    SelfInteraction(usize),

    #[error("coin bit missing: protocol runs in coin mode")]
    MissingCoin,

    #[error("unexpected coin bit: protocol runs in ordered-random mode")]
    UnexpectedCoin,

    #[error("invalid parameter: {0}")]
    InvalidParams(String),

    #[error("configuration does not match protocol {expected}")]
    ProtocolMismatch { expected: &'static str },

    #[error("step {got} observed out of order (expected {expected})")]
    OutOfOrderStep { expected: u64, got: u64 },

    #[error("invalid experiment config: {0}")]
    Config(String),

    #[error("trial {trial} (seed {seed}) failed: {source}")]
    Trial {
        trial: u64,
        seed: u64,
        #[source]
        source: Box<Error>,
    },

    #[error("output error: {0}")]
    Output(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParams(msg.into())
}
