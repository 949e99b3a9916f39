//! Batch front end for `qdstark-core`: flat TOML configs, scenario runners,
//! and CSV / `key = value` outputs.

pub mod analysis;
pub mod config;
mod error;
pub mod output;
pub mod scenarios;

pub use config::{RawConfig, Scenario};
pub use error::{Result, RunError};
pub use output::{Artifacts, Summary, Table};
pub use scenarios::RunOptions;

use config::{AnticrossingConfig, EofSweepConfig, FloquetConfig, LindbladConfig, ResonanceConfig, RwaConfig};

/// Resolves `raw` for `scenario` and runs it.
pub fn run(scenario: Scenario, raw: &RawConfig, opts: &RunOptions) -> Result<Artifacts> {
    match scenario {
        Scenario::Anticrossing => scenarios::run_anticrossing(&AnticrossingConfig::from_raw(raw)?),
        Scenario::RwaPopulations => scenarios::run_rwa_populations(&RwaConfig::from_raw(raw)?, opts),
        Scenario::LindbladPopulations => scenarios::run_lindblad_populations(&LindbladConfig::from_raw(raw)?),
        Scenario::EofSweep => scenarios::run_eof_sweep(&EofSweepConfig::from_raw(raw)?, opts),
        Scenario::ResonanceSolve => scenarios::run_resonance_solve(&ResonanceConfig::from_raw(raw)?),
        Scenario::FloquetValidate => scenarios::run_floquet_validate(&FloquetConfig::from_raw(raw)?, opts),
    }
}
