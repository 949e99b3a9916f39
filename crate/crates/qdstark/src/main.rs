use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use qdstark::{RawConfig, RunOptions, Scenario};

#[derive(Parser)]
#[command(name = "qdstark", version, about = "Laser-controlled exciton transfer between two coupled quantum dots")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Flat TOML config; omitted keys take the reference values.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory for CSV and summary files.
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,
    /// Seed for randomized sweeps.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads for independent trajectories within a sweep.
    #[arg(long, global = true)]
    parallel: Option<usize>,
}

#[derive(Subcommand, Clone, Copy)]
enum Command {
    /// Single-exciton levels against Ω2 at fixed Ω1/Ω2.
    Anticrossing,
    /// Rotating-frame populations: always on, half-transfer pulse, always off.
    RwaPopulations,
    /// Damped populations and entanglement after the entangling pulse.
    LindbladPopulations,
    /// Entanglement of formation against time for several decay rates.
    EofSweep,
    /// Resonant drive, effective coupling and pulse times.
    ResonanceSolve,
    /// Floquet check of the counter-rotating Stark shift.
    FloquetValidate,
}

impl Command {
    fn scenario(self) -> Scenario {
        match self {
            Command::Anticrossing => Scenario::Anticrossing,
            Command::RwaPopulations => Scenario::RwaPopulations,
            Command::LindbladPopulations => Scenario::LindbladPopulations,
            Command::EofSweep => Scenario::EofSweep,
            Command::ResonanceSolve => Scenario::ResonanceSolve,
            Command::FloquetValidate => Scenario::FloquetValidate,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let scenario = cli.command.scenario();
    let opts = RunOptions { seed: cli.seed, threads: cli.parallel };
    let result = cli
        .config
        .as_deref()
        .map_or_else(|| RawConfig::parse(scenario, ""), |p| RawConfig::load(scenario, p))
        .and_then(|raw| qdstark::run(scenario, &raw, &opts))
        .and_then(|artifacts| {
            let paths = artifacts.write(&cli.out)?;
            print!("{}", artifacts.summary.render());
            for p in paths {
                eprintln!("wrote {}", p.display());
            }
            Ok(())
        });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("qdstark {scenario}: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
