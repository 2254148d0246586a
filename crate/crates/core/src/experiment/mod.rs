//! Configuration, orchestration, output and Monte-Carlo oracles.

pub mod config;
pub mod oracle;
pub mod output;
pub mod runner;

pub use config::{parse_config, Cell, ExperimentConfig, OneOrMany};
pub use oracle::{oracle_leader_halving, oracle_lemma_ubmin, HalvingEstimate, UbMinEstimate, UbMinOptions};
pub use output::{emit_csv, emit_jsonl, parse_csv, write_csv, write_jsonl, CSV_HEADER};
pub use runner::{map_cell, run_cell_trial, run_experiment, SummaryRow, TrialOutcome};
