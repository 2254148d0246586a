//! Python module `smoothpop`: experiments, oracles, transition functions
//! and a steppable simulation handle.
//!
//! Structured results cross the boundary as JSON and are decoded with the
//! standard `json` module, so Python sees plain dicts and lists.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use smoothpop::experiment::{
    emit_csv, oracle_leader_halving, oracle_lemma_ubmin, run_cell_trial, Cell, UbMinOptions, CSV_HEADER,
};
use smoothpop::protocols::{
    epidemic_step as epidemic_rule, smoothed_clock_step as clock_rule, ClockParams, ClockState, Epidemic, JuntaClock,
    LeaderElection, LeaderlessClock, SmoothedClock,
};
use smoothpop::{
    parse_config, Adversary, ExperimentConfig, Protocol, RandomnessMode, SmoothedScheduler, SmoothingParams,
    Transition,
};

fn err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// Decodes a JSON document into Python objects.
fn from_json<'py>(py: Python<'py>, json: serde_json::Result<String>) -> PyResult<Bound<'py, PyAny>> {
    let text = json.map_err(err)?;
    py.import("json")?.call_method1("loads", (text,))
}

fn load(config_json: &str) -> PyResult<ExperimentConfig> {
    let cfg = parse_config(config_json).map_err(err)?;
    cfg.validate().map_err(err)?;
    Ok(cfg)
}

fn single_cell(config_json: &str) -> PyResult<Cell> {
    let mut cells = load(config_json)?.cells();
    if cells.len() != 1 {
        return Err(PyValueError::new_err(format!(
            "expected a single-cell config, got {} cells",
            cells.len()
        )));
    }
    Ok(cells.remove(0))
}

fn parse_mode(mode: &str) -> PyResult<RandomnessMode> {
    mode.parse().map_err(err)
}

/// Validates a config document and returns its number of cells.
#[pyfunction]
fn validate_config(config_json: &str) -> PyResult<usize> {
    Ok(load(config_json)?.cells().len())
}

/// Runs every cell and trial; returns one dict per summary row.
#[pyfunction]
fn run_experiment<'py>(py: Python<'py>, config_json: &str) -> PyResult<Bound<'py, PyAny>> {
    let cfg = load(config_json)?;
    let rows = py.detach(|| smoothpop::run_experiment(&cfg)).map_err(err)?;
    from_json(py, serde_json::to_string(&rows))
}

/// Same rows as [`run_experiment`], rendered as CSV text.
#[pyfunction]
fn summary_csv(py: Python<'_>, config_json: &str) -> PyResult<String> {
    let cfg = load(config_json)?;
    let rows = py.detach(|| smoothpop::run_experiment(&cfg)).map_err(err)?;
    emit_csv(&rows).map_err(err)
}

/// One trial of a single-cell config: the summary row, full metrics and the
/// final configuration (plus every step when the config enables tracing).
#[pyfunction]
#[pyo3(signature = (config_json, trial = 0))]
fn run_trial<'py>(py: Python<'py>, config_json: &str, trial: u64) -> PyResult<Bound<'py, PyAny>> {
    let cell = single_cell(config_json)?;
    let outcome = py.detach(|| run_cell_trial(&cell, trial)).map_err(err)?;
    let value = serde_json::json!({
        "row": outcome.row,
        "metrics": outcome.trace.metrics,
        "final_config": outcome.trace.final_config,
        "steps": outcome.trace.steps,
    });
    from_json(py, serde_json::to_string(&value))
}

#[pyfunction]
#[pyo3(signature = (n, p, c = 3, trials = 1000, seed = 0, c_m = 8, mode = "Coin"))]
fn oracle_ubmin<'py>(
    py: Python<'py>,
    n: usize,
    p: f64,
    c: u32,
    trials: u64,
    seed: u64,
    c_m: u32,
    mode: &str,
) -> PyResult<Bound<'py, PyAny>> {
    let opts = UbMinOptions {
        c_m,
        mode: parse_mode(mode)?,
        ..Default::default()
    };
    let est = py.detach(|| oracle_lemma_ubmin(n, p, c, trials, seed, &opts)).map_err(err)?;
    from_json(py, serde_json::to_string(&est))
}

#[pyfunction]
#[pyo3(signature = (l0, trials = 100_000, seed = 0))]
fn oracle_halving<'py>(py: Python<'py>, l0: u32, trials: u64, seed: u64) -> PyResult<Bound<'py, PyAny>> {
    let est = oracle_leader_halving(l0, trials, seed).map_err(err)?;
    from_json(py, serde_json::to_string(&est))
}

/// The epidemic rule on two infection bits.
#[pyfunction]
fn epidemic_step(x_u: bool, x_v: bool) -> (bool, bool) {
    epidemic_rule(x_u, x_v)
}

/// One coin-driven clock interaction on `(second, minute, hour)` triples.
#[pyfunction]
fn smoothed_clock_step(
    u: (u32, u32, u64),
    v: (u32, u32, u64),
    coin: bool,
    seconds_per_minute: u32,
    minutes_per_hour: u32,
) -> PyResult<((u32, u32, u64), (u32, u32, u64))> {
    let params = ClockParams {
        seconds_per_minute,
        minutes_per_hour,
        c: 3,
        c_m: 1,
        hour_modulus: None,
    };
    params.validate().map_err(err)?;
    let (nu, nv) = clock_rule(ClockState::new(u.0, u.1, u.2), ClockState::new(v.0, v.1, v.2), coin, &params);
    Ok(((nu.second, nu.minute, nu.hour), (nv.second, nv.minute, nv.hour)))
}

enum AnySim {
    Epidemic(smoothpop::Simulation<Epidemic>),
    SmoothedClock(smoothpop::Simulation<SmoothedClock>),
    JuntaClock(smoothpop::Simulation<JuntaClock>),
    LeaderlessClock(smoothpop::Simulation<LeaderlessClock>),
    LeaderElection(smoothpop::Simulation<LeaderElection>),
}

macro_rules! with_sim {
    ($sim:expr, $s:ident => $body:expr) => {
        match $sim {
            AnySim::Epidemic($s) => $body,
            AnySim::SmoothedClock($s) => $body,
            AnySim::JuntaClock($s) => $body,
            AnySim::LeaderlessClock($s) => $body,
            AnySim::LeaderElection($s) => $body,
        }
    };
}

fn build<P: Transition>(protocol: P, cell: &Cell, seed: u64) -> smoothpop::Result<smoothpop::Simulation<P>> {
    let states = protocol.initial_states(cell.n)?;
    let scheduler = SmoothedScheduler::new(cell.n, SmoothingParams::new(cell.p)?, cell.cfg.mode, seed)?;
    let adversary = Adversary::new(cell.adversary, seed);
    smoothpop::Simulation::new(protocol, states, scheduler, adversary, cell.cfg.trace)
}

/// A steppable trial built from a single-cell config and a trial index.
#[pyclass(name = "Simulation", module = "smoothpop")]
struct PySimulation {
    sim: AnySim,
    seed: u64,
}

#[pymethods]
impl PySimulation {
    #[new]
    #[pyo3(signature = (config_json, trial = 0))]
    fn new(config_json: &str, trial: u64) -> PyResult<Self> {
        let cell = single_cell(config_json)?;
        let seed = cell.cfg.base_seed.wrapping_add(trial);
        let sim = match cell.protocol(seed).map_err(err)? {
            Protocol::Epidemic(p) => AnySim::Epidemic(build(p, &cell, seed).map_err(err)?),
            Protocol::SmoothedClock(p) => AnySim::SmoothedClock(build(p, &cell, seed).map_err(err)?),
            Protocol::JuntaClock(p) => AnySim::JuntaClock(build(p, &cell, seed).map_err(err)?),
            Protocol::LeaderlessClock(p) => AnySim::LeaderlessClock(build(p, &cell, seed).map_err(err)?),
            Protocol::LeaderElection(p) => AnySim::LeaderElection(build(p, &cell, seed).map_err(err)?),
        };
        Ok(Self { sim, seed })
    }

    #[getter]
    fn seed(&self) -> u64 {
        self.seed
    }

    #[getter]
    fn steps_executed(&self) -> u64 {
        with_sim!(&self.sim, s => s.steps_executed())
    }

    #[getter]
    fn completed_rounds(&self) -> usize {
        with_sim!(&self.sim, s => s.tracker().completed_rounds())
    }

    #[getter]
    fn leader_count(&self) -> Option<usize> {
        with_sim!(&self.sim, s => s.tracker().leader_count())
    }

    #[getter]
    fn epidemic_finish(&self) -> Option<u64> {
        with_sim!(&self.sim, s => s.tracker().epidemic_finish())
    }

    /// Executes `steps` interactions.
    fn advance(&mut self, py: Python<'_>, steps: u64) -> PyResult<()> {
        let sim = &mut self.sim;
        py.detach(|| {
            with_sim!(sim, s => {
                for _ in 0..steps {
                    s.advance()?;
                }
                Ok::<(), smoothpop::Error>(())
            })
        })
        .map_err(err)
    }

    /// Steps until `rounds` rounds have completed or `max_steps` more steps
    /// were taken; returns whether the rounds completed.
    fn run_rounds(&mut self, py: Python<'_>, rounds: usize, max_steps: u64) -> PyResult<bool> {
        let sim = &mut self.sim;
        py.detach(|| {
            with_sim!(sim, s => {
                let mut taken = 0;
                while s.tracker().completed_rounds() < rounds && taken < max_steps {
                    s.advance()?;
                    taken += 1;
                }
                Ok::<bool, smoothpop::Error>(s.tracker().completed_rounds() >= rounds)
            })
        })
        .map_err(err)
    }

    /// Current configuration as `{"protocol": ..., "states": [...]}`.
    fn configuration<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        let config = with_sim!(&self.sim, s => s.configuration());
        from_json(py, serde_json::to_string(&config))
    }

    /// Completed rounds with their start, end, length and stretch.
    fn rounds<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        let rounds = with_sim!(&self.sim, s => s.tracker().finalize_rounds());
        from_json(py, serde_json::to_string(&rounds))
    }

    /// Steps recorded so far (only when the config enables tracing).
    fn steps<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        let steps = with_sim!(&self.sim, s => s.history().recorded.clone());
        from_json(py, serde_json::to_string(&steps))
    }
}

#[pymodule]
#[pyo3(name = "smoothpop")]
fn smoothpop_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("CSV_HEADER", CSV_HEADER)?;
    m.add_class::<PySimulation>()?;
    m.add_function(wrap_pyfunction!(validate_config, m)?)?;
    m.add_function(wrap_pyfunction!(run_experiment, m)?)?;
    m.add_function(wrap_pyfunction!(summary_csv, m)?)?;
    m.add_function(wrap_pyfunction!(run_trial, m)?)?;
    m.add_function(wrap_pyfunction!(oracle_ubmin, m)?)?;
    m.add_function(wrap_pyfunction!(oracle_halving, m)?)?;
    m.add_function(wrap_pyfunction!(epidemic_step, m)?)?;
    m.add_function(wrap_pyfunction!(smoothed_clock_step, m)?)?;
    Ok(())
}
