use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rydberg_eit_cli::{parse_config, run, write_reports, CliError, OutputFormat, Scenario, ScenarioConfig};

#[derive(Parser)]
#[command(name = "rydberg-eit", version, about = "EIT and slow light in a Cu2O Rydberg-exciton ladder")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Scenario config file; defaults apply to every key it omits.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory (overrides `output_dir`).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Output format (overrides `format`).
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Worker threads for grid evaluation.
    #[arg(long, global = true)]
    threads: Option<usize>,
}

#[derive(Subcommand, Clone, Copy)]
enum Command {
    /// χ′, χ″ and n_g over the probe grid for each control strength.
    Spectrum,
    /// Window-centre group index and absorption against Ω₂.
    Sweep,
    /// Exciton level table and the field-mixed 2P/10S states.
    Levels,
    /// Gaussian pulse through the slab.
    Propagate,
    /// Parse the config and print it fully resolved.
    Validate,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
    Both,
}

fn load(cli: &Cli) -> Result<ScenarioConfig, CliError> {
    let mut cfg = match &cli.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
            parse_config(&text)?
        }
        None => ScenarioConfig::default(),
    };
    if let Some(dir) = &cli.out {
        cfg.output.dir = dir.clone();
    }
    if let Some(f) = cli.format {
        cfg.output.format = match f {
            Format::Csv => OutputFormat::Csv,
            Format::Json => OutputFormat::Json,
            Format::Both => OutputFormat::Both,
        };
    }
    Ok(cfg)
}

fn execute(cli: &Cli) -> Result<(), CliError> {
    let cfg = load(cli)?;
    let scenario = match cli.command {
        Command::Validate => {
            print!("{}", cfg.to_config_text());
            return Ok(());
        }
        Command::Spectrum => Scenario::Spectrum,
        Command::Sweep => Scenario::Sweep,
        Command::Levels => Scenario::Levels,
        Command::Propagate => Scenario::Propagate,
    };
    let reports = run(scenario, &cfg)?;
    for r in &reports {
        if let Some(serde_json::Value::Array(ws)) = r.get("warnings") {
            for w in ws {
                eprintln!("warning: {}", w.as_str().unwrap_or_default());
            }
        }
    }
    for path in write_reports(&reports, &cfg, &cfg.output.dir, cfg.output.format)? {
        println!("{}", path.display());
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("warning: could not set thread count: {e}");
        }
    }
    match execute(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
