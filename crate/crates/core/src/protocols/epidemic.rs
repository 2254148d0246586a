use serde::{Deserialize, Serialize};

use super::{Configuration, Events, ProtocolKind, Transition};
use crate::error::{invalid, Result};
use crate::model::RandomnessMode;

/// One-way epidemic: the responder takes the maximum of the two bits.
#[inline]
pub fn epidemic_step(x_u: bool, x_v: bool) -> (bool, bool) {
    (x_u, x_u | x_v)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct EpidemicState {
    pub infected: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Epidemic {
    /// Agents infected at time zero.
    pub sources: Vec<usize>,
}

impl Default for Epidemic {
    fn default() -> Self {
        Self { sources: vec![0] }
    }
}

impl Transition for Epidemic {
    type State = EpidemicState;
    const KIND: ProtocolKind = ProtocolKind::Epidemic;

    fn required_mode(&self) -> Option<RandomnessMode> {
        None
    }

    fn initial_states(&self, n: usize) -> Result<Vec<EpidemicState>> {
        let mut states = vec![EpidemicState::default(); n];
        for &s in &self.sources {
            if s >= n {
                return Err(invalid(format!("epidemic source {s} out of range for n={n}")));
            }
            states[s].infected = true;
        }
        Ok(states)
    }

    #[inline]
    fn interact(&self, u: &mut EpidemicState, v: &mut EpidemicState, _coin: Option<bool>) -> Events {
        let (_, y) = epidemic_step(u.infected, v.infected);
        v.infected = y;
        Events::NONE
    }

    fn wrap(states: Vec<EpidemicState>) -> Configuration {
        Configuration::Epidemic(states)
    }

    fn states_of(config: &Configuration) -> Option<&[EpidemicState]> {
        match config {
            Configuration::Epidemic(s) => Some(s),
            _ => None,
        }
    }

    fn infected(&self, s: &EpidemicState) -> Option<bool> {
        Some(s.infected)
    }
}
