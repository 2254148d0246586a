//! `smoothpop`: run experiments, sweeps, attack demos and oracles.

use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use smoothpop::experiment::runner::median;
use smoothpop::experiment::{
    map_cell, oracle_leader_halving, oracle_lemma_ubmin, write_csv, write_jsonl, OneOrMany, UbMinOptions,
};
use smoothpop::{parse_config, ExperimentConfig, ProtocolKind, RandomnessMode, StrategyKind, SummaryRow};

#[derive(Parser)]
#[command(name = "smoothpop", version, about = "Population protocols under smoothed schedulers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a single-cell experiment and write summary.csv (plus traces).
    Run {
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run every cell of a sweep and write one combined summary.csv.
    Sweep {
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Compare a clock under its breaking attack with the Null adversary.
    AttackDemo {
        #[arg(long, value_enum)]
        clock: ClockChoice,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 5)]
        trials: u64,
        /// Rounds per trial.
        #[arg(long, default_value_t = 3)]
        rounds: u64,
        #[arg(long, default_value_t = 2_000_000_000)]
        max_steps: u64,
    },
    /// Monte-Carlo estimates of minute gaps and leader halving.
    Oracle {
        #[command(subcommand)]
        which: OracleCommand,
    },
    /// Parse and validate a config without running it.
    ValidateConfig { config: PathBuf },
}

#[derive(Subcommand)]
enum OracleCommand {
    /// Probability that a minute gap exceeds c n/p ceil(log2 n) steps.
    Ubmin {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: f64,
        #[arg(long, default_value_t = 3)]
        c: u32,
        #[arg(long, default_value_t = 8)]
        c_m: u32,
        #[arg(long, default_value_t = 1000)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = ModeChoice::Coin)]
        mode: ModeChoice,
    },
    /// Mean surviving fraction of L0 leaders after one level round.
    Halving {
        #[arg(long)]
        l0: u32,
        #[arg(long, default_value_t = 100_000)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ClockChoice {
    Junta,
    Leaderless,
    Smoothed,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeChoice {
    Coin,
    OrderedRandom,
}

impl From<ModeChoice> for RandomnessMode {
    fn from(m: ModeChoice) -> Self {
        match m {
            ModeChoice::Coin => RandomnessMode::Coin,
            ModeChoice::OrderedRandom => RandomnessMode::OrderedRandom,
        }
    }
}

type CliResult<T> = Result<T, String>;

fn load_config(path: &Path) -> CliResult<ExperimentConfig> {
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let cfg = parse_config(&text).map_err(|e| format!("{}: {e}", path.display()))?;
    cfg.validate().map_err(|e| format!("{}: {e}", path.display()))?;
    Ok(cfg)
}

/// Runs all cells in order. Traces, when enabled, go to
/// `traces/cell<k>_trial<t>.jsonl`.
fn execute(cfg: &ExperimentConfig, out: &Path) -> CliResult<Vec<SummaryRow>> {
    fs::create_dir_all(out).map_err(|e| format!("{}: {e}", out.display()))?;
    let trace_dir = out.join("traces");
    if cfg.trace {
        fs::create_dir_all(&trace_dir).map_err(|e| format!("{}: {e}", trace_dir.display()))?;
    }
    let mut rows = Vec::new();
    for (k, cell) in cfg.cells().iter().enumerate() {
        let cell_rows = map_cell(cell, |o| {
            if cfg.trace {
                let path = trace_dir.join(format!("cell{k}_trial{}.jsonl", o.row.trial));
                let file = fs::File::create(&path).map_err(|e| format!("{}: {e}", path.display()))?;
                write_jsonl(&o.trace.steps, BufWriter::new(file)).map_err(|e| e.to_string())?;
            }
            Ok::<_, String>(o.row)
        })
        .map_err(|e| e.to_string())?;
        for r in cell_rows {
            rows.push(r?);
        }
        eprintln!(
            "cell {}/{}: n={} p={} {} {} done",
            k + 1,
            cfg.cells().len(),
            cell.n,
            cell.p,
            cell.protocol.as_str(),
            cell.adversary
        );
    }
    let path = out.join("summary.csv");
    let file = fs::File::create(&path).map_err(|e| format!("{}: {e}", path.display()))?;
    write_csv(&rows, BufWriter::new(file)).map_err(|e| e.to_string())?;
    Ok(rows)
}

fn run(config: &Path, out: &Path, sweep: bool) -> CliResult<()> {
    let cfg = load_config(config)?;
    let cells = cfg.cells().len();
    if !sweep && cells > 1 {
        return Err(format!("config describes {cells} cells; use `sweep` for multi-valued axes"));
    }
    let rows = execute(&cfg, out)?;
    println!("wrote {} rows to {}", rows.len(), out.join("summary.csv").display());
    Ok(())
}

fn attack_demo(
    clock: ClockChoice,
    n: usize,
    p: f64,
    seed: u64,
    trials: u64,
    rounds: u64,
    max_steps: u64,
) -> CliResult<()> {
    let (kind, attack) = match clock {
        ClockChoice::Junta => (ProtocolKind::JuntaClock, StrategyKind::JuntaHammer),
        ClockChoice::Leaderless => (ProtocolKind::LeaderlessClock, StrategyKind::pair_hammer(0, 1, false)),
        ClockChoice::Smoothed => (ProtocolKind::SmoothedClock, StrategyKind::pair_hammer(0, 1, false)),
    };
    let mut cfg = ExperimentConfig::new(n, p, kind, trials, seed, max_steps);
    cfg.adversary = OneOrMany::Many(vec![StrategyKind::Null, attack]);
    cfg.stop_after_rounds = Some(rounds);
    if p == 0.0 {
        cfg.allow_p_zero = true;
        cfg.p_hint = Some(1.0);
    }
    cfg.validate().map_err(|e| e.to_string())?;
    let mut stdout = io::stdout().lock();
    writeln!(stdout, "clock={} n={n} p={p} seed={seed} trials={trials} rounds={rounds}", kind.as_str())
        .map_err(|e| e.to_string())?;
    writeln!(stdout, "{:<20} {:>8} {:>16} {:>16}", "adversary", "rounds", "median_stretch", "max_stretch")
        .map_err(|e| e.to_string())?;
    for cell in cfg.cells() {
        let stretches = map_cell(&cell, |o| o.trace.metrics.rounds.iter().map(|r| r.stretch).collect::<Vec<_>>())
            .map_err(|e| e.to_string())?
            .concat();
        let med = median(&stretches).map_or("-".to_string(), |m| format!("{m:.1}"));
        let max = stretches.iter().max().map_or("-".to_string(), u64::to_string);
        writeln!(stdout, "{:<20} {:>8} {:>16} {:>16}", cell.adversary.to_string(), stretches.len(), med, max)
            .map_err(|e| e.to_string())?;
    }
    Ok(())
}

fn print_json(json: serde_json::Result<String>) -> CliResult<()> {
    println!("{}", json.map_err(|e| e.to_string())?);
    Ok(())
}

fn dispatch(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Run { config, out } => run(&config, &out, false),
        Command::Sweep { config, out } => run(&config, &out, true),
        Command::AttackDemo { clock, n, p, seed, trials, rounds, max_steps } => {
            attack_demo(clock, n, p, seed, trials, rounds, max_steps)
        }
        Command::Oracle { which } => match which {
            OracleCommand::Ubmin { n, p, c, c_m, trials, seed, mode } => {
                let opts = UbMinOptions { c_m, mode: mode.into(), ..Default::default() };
                let est = oracle_lemma_ubmin(n, p, c, trials, seed, &opts).map_err(|e| e.to_string())?;
                print_json(serde_json::to_string_pretty(&est))
            }
            OracleCommand::Halving { l0, trials, seed } => {
                let est = oracle_leader_halving(l0, trials, seed).map_err(|e| e.to_string())?;
                print_json(serde_json::to_string_pretty(&est))
            }
        },
        Command::ValidateConfig { config } => {
            let cfg = load_config(&config)?;
            println!("ok: {} cells, {} trials each", cfg.cells().len(), cfg.trials);
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    match dispatch(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
