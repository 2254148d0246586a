//! Trial orchestration and per-trial summaries.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::{Cell, ExperimentConfig};
use crate::engine::{run_trial, TrialTrace};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub trial: u64,
    pub seed: u64,
    pub n: usize,
    pub p: f64,
    pub protocol: String,
    pub adversary: String,
    pub mode: String,
    pub steps_executed: u64,
    pub stabilization_steps: Option<u64>,
    pub rounds_observed: Option<u64>,
    pub min_length: Option<u64>,
    pub median_length: Option<f64>,
    pub median_stretch: Option<f64>,
    pub max_stretch: Option<u64>,
    pub epidemic_finish: Option<u64>,
    pub random_step_fraction: f64,
}

/// Median of a non-empty sample (mean of the middle pair for even sizes).
pub fn median(values: &[u64]) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    let mut v = values.to_vec();
    v.sort_unstable();
    let mid = v.len() / 2;
    Some(if v.len() % 2 == 1 {
        v[mid] as f64
    } else {
        (v[mid - 1] as f64 + v[mid] as f64) / 2.0
    })
}

impl SummaryRow {
    pub fn from_trace(cell: &Cell, trial: u64, trace: &TrialTrace) -> Self {
        let m = &trace.metrics;
        let has_clock = cell.protocol.has_clock();
        let lengths: Vec<u64> = m.rounds.iter().map(|r| r.length).collect();
        let stretches: Vec<u64> = m.rounds.iter().map(|r| r.stretch).collect();
        Self {
            trial,
            seed: trace.seed,
            n: cell.n,
            p: cell.p,
            protocol: cell.protocol.as_str().to_string(),
            adversary: cell.adversary.to_string(),
            mode: cell.cfg.mode.as_str().to_string(),
            steps_executed: m.steps_executed,
            stabilization_steps: m.stabilization.as_ref().and_then(|s| s.stabilization_step),
            rounds_observed: has_clock.then_some(m.rounds.len() as u64),
            min_length: lengths.iter().copied().min(),
            median_length: median(&lengths),
            median_stretch: median(&stretches),
            max_stretch: stretches.iter().copied().max(),
            epidemic_finish: m.epidemic_finish,
            random_step_fraction: m.random_step_fraction(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct TrialOutcome {
    pub row: SummaryRow,
    pub trace: TrialTrace,
}

pub fn trial_seed(base_seed: u64, trial: u64) -> u64 {
    base_seed.wrapping_add(trial)
}

fn in_pool<T: Send>(workers: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T> {
    match workers {
        None => Ok(f()),
        Some(w) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(w)
                .build()
                .map_err(|e| Error::Config(e.to_string()))?;
            Ok(pool.install(f))
        }
    }
}

/// Runs a single trial of a cell.
pub fn run_cell_trial(cell: &Cell, trial: u64) -> Result<TrialOutcome> {
    let seed = trial_seed(cell.cfg.base_seed, trial);
    let wrap = |e: Error| Error::Trial {
        trial,
        seed,
        source: Box::new(e),
    };
    let spec = cell.trial_spec(seed).map_err(wrap)?;
    let trace = run_trial(&spec, seed).map_err(wrap)?;
    Ok(TrialOutcome {
        row: SummaryRow::from_trace(cell, trial, &trace),
        trace,
    })
}

/// All trials of one cell, ordered by trial index, with `f` applied to
/// each outcome inside the worker (so full traces need not be retained).
pub fn map_cell<T: Send>(cell: &Cell, f: impl Fn(TrialOutcome) -> T + Sync + Send) -> Result<Vec<T>> {
    in_pool(cell.cfg.workers, || {
        (0..cell.cfg.trials)
            .into_par_iter()
            .map(|t| run_cell_trial(cell, t).map(&f))
            .collect::<Result<Vec<T>>>()
    })?
}

/// Summary rows of every cell, in cell order then trial order.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Vec<SummaryRow>> {
    cfg.validate()?;
    let mut rows = Vec::new();
    for cell in cfg.cells() {
        rows.extend(map_cell(&cell, |o| o.row)?);
    }
    Ok(rows)
}
