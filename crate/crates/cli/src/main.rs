//! `miura <command> --config <file> [--out <dir>] [--seed <u64>]`
//!
//! Exit codes: 0 all cases pass, 1 some case failed, 2 configuration error,
//! 3 computation or output error.

mod config;
mod error;
mod output;
mod suites;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;
use log::{error, info};
use miura_core::soliton::Scheme;

use config::{Command, ExperimentConfig, Parameters};
use error::CliError;

#[derive(Debug, Parser)]
#[command(name = "miura", version, about = "Run verification suites and soliton experiments")]
struct Cli {
    command: Command,
    /// Strict JSON experiment config.
    #[arg(long)]
    config: PathBuf,
    /// Overrides `output_dir` from the config.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Overrides `seed` from the config.
    #[arg(long)]
    seed: Option<u64>,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("MIURA_LOG_LEVEL", "error"))
        .format_timestamp(None)
        .init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            eprint!("{e}");
            return ExitCode::from(2);
        }
    };
    match execute(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            error!("{e}");
            eprintln!("miura: {e}");
            e.exit_code()
        }
    }
}

/// Runs the command and writes its outputs; `Ok(false)` if any case failed.
fn execute(cli: &Cli) -> Result<bool, CliError> {
    let text = std::fs::read_to_string(&cli.config)
        .map_err(|e| CliError::Config(format!("cannot read {}: {e}", cli.config.display())))?;
    let config = ExperimentConfig::parse(&text, cli.command, cli.seed, cli.out.clone())?;
    info!("{} with seed {}", config.command.name(), config.seed);
    output::prepare_dir(&config.output_dir)?;

    let start = Instant::now();
    let outcome = suites::run(&config)?;
    let mut report = outcome.report;
    report.wall_time_s = start.elapsed().as_secs_f64();
    report.config_digest = output::config_digest(&config.canonical);
    report.sort_cases();

    if let Some(snapshots) = &outcome.snapshots {
        output::emit_plot_data(&config.output_dir.join(output::SNAPSHOT_FILE), snapshots)?;
        if let Parameters::Soliton(p) = &config.parameters {
            let manifest = serde_json::json!({
                "equation": p.equation,
                "scheme": Scheme::Ifrk4,
                "n_points": p.n_points,
                "length": p.length,
                "dt": p.dt,
                "t_end": p.t_end,
                "snapshot_every": p.snapshot_every,
                "initial": p.initial,
                "snapshot_times": snapshots.iter().map(|s| s.time).collect::<Vec<_>>(),
            });
            output::write_json(&config.output_dir.join(output::MANIFEST_FILE), &manifest)?;
        }
    }
    output::write_report(&config.output_dir, &report)?;

    for case in report.failures() {
        error!("FAIL {}: {:e} > {:e}", case.name, case.residual, case.tolerance);
    }
    info!(
        "{} cases, {} failed, max residual {:e}",
        report.cases.len(),
        report.failures().count(),
        report.max_residual()
    );
    Ok(report.all_pass())
}
