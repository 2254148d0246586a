//! Steps per second for a few protocol/adversary combinations.

use std::time::Instant;

use smoothpop::experiment::{run_cell_trial, ExperimentConfig};
use smoothpop::{ProtocolKind, RandomnessMode, StrategyKind};

fn main() {
    let steps: u64 = std::env::var("STEPS").ok().and_then(|s| s.parse().ok()).unwrap_or(20_000_000);
    for (kind, mode, adv) in [
        (ProtocolKind::SmoothedClock, RandomnessMode::Coin, StrategyKind::Null),
        (ProtocolKind::SmoothedClock, RandomnessMode::Coin, StrategyKind::pair_hammer(0, 1, false)),
        (ProtocolKind::LeaderElection, RandomnessMode::Coin, StrategyKind::LeaderIsolation),
        (ProtocolKind::LeaderElection, RandomnessMode::OrderedRandom, StrategyKind::Null),
    ] {
        let cfg = ExperimentConfig::new(1024, 1.0, kind, 1, 1, steps).with_mode(mode).with_adversary(adv);
        let start = Instant::now();
        let out = run_cell_trial(&cfg.cells()[0], 0).unwrap();
        let secs = start.elapsed().as_secs_f64();
        println!(
            "{:?} {:?} {}: {:.1} ns/step, {} rounds",
            kind,
            mode,
            adv,
            secs * 1e9 / out.row.steps_executed as f64,
            out.row.rounds_observed.unwrap_or(0)
        );
    }
}
