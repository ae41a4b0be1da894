//! Scenario runner for the `rydberg-eit` simulator: configuration parsing,
//! orchestration and deterministic CSV/JSON output.

pub mod config;
pub mod error;
pub mod output;
pub mod scenarios;
pub mod units;

pub use config::{parse_config, ConfigError, OutputFormat, ScenarioConfig};
pub use error::CliError;
pub use output::{write_reports, Report};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scenario {
    Spectrum,
    Sweep,
    Levels,
    Propagate,
}

pub fn run(scenario: Scenario, cfg: &ScenarioConfig) -> Result<Vec<Report>, CliError> {
    match scenario {
        Scenario::Spectrum => scenarios::run_spectrum(cfg),
        Scenario::Sweep => scenarios::run_sweep(cfg),
        Scenario::Levels => scenarios::run_levels(cfg),
        Scenario::Propagate => scenarios::run_propagation(cfg),
    }
}
