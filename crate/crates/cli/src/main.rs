// Copyright 2026 The radtrip Authors
// SPDX-License-Identifier: Apache-2.0

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use radtrip_cli::commands::{cmd_dynamics, cmd_exchange, cmd_scan_j1, cmd_spectrum, RunOptions};
use radtrip_cli::config::{RunConfig, DEFAULT_CONFIG};
use radtrip_cli::{resolve_workers, CliError, CliResult};
use radtrip_core::units::EnergyUnit;

/// Spin dynamics and TREPR spectra of optically driven radical–triplet–radical systems.
#[derive(Parser)]
#[command(name = "radtrip", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// TOML run configuration; the shipped defaults when omitted.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory, overriding `run.output_dir`.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads (0 = all cores); overrides RADTRIP_WORKERS and `run.workers`.
    #[arg(long)]
    workers: Option<usize>,
    /// Weight powder orientations by sin θ.
    #[arg(long)]
    weighted_powder: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Propagate the density matrix; write trajectory and tomography files.
    Dynamics(Common),
    /// Single-orientation and powder-averaged spectra.
    Spectrum(Common),
    /// One spectrum per radical–coupler exchange value in `scan.j1`.
    ScanJ1(Common),
    /// Exchange couplings from energy tables.
    Exchange {
        #[command(flatten)]
        common: Common,
        /// Output unit, overriding `exchange.output_unit`.
        #[arg(long)]
        unit: Option<String>,
        /// Energy table files.
        #[arg(required = true)]
        inputs: Vec<PathBuf>,
    },
    /// Print the shipped default configuration.
    DefaultConfig,
}

fn load_config(path: Option<&PathBuf>) -> CliResult<RunConfig> {
    match path {
        Some(p) => {
            let text = std::fs::read_to_string(p)
                .map_err(|e| CliError::Config(format!("cannot read {}: {e}", p.display())))?;
            RunConfig::parse(&text)
        }
        None => RunConfig::parse(DEFAULT_CONFIG),
    }
}

fn options(common: &Common, cfg: &RunConfig) -> CliResult<RunOptions> {
    let env = std::env::var("RADTRIP_WORKERS").ok();
    Ok(RunOptions {
        out_dir: common.out.clone().unwrap_or_else(|| cfg.run.output_dir.clone()),
        workers: resolve_workers(common.workers, env.as_deref(), cfg.run.workers)?,
        weighted_powder: common.weighted_powder,
    })
}

fn run(cli: Cli) -> CliResult<()> {
    let written = match &cli.command {
        Command::DefaultConfig => {
            print!("{DEFAULT_CONFIG}");
            return Ok(());
        }
        Command::Dynamics(c) => {
            let cfg = load_config(c.config.as_ref())?;
            cmd_dynamics(&cfg, &options(c, &cfg)?)?
        }
        Command::Spectrum(c) => {
            let cfg = load_config(c.config.as_ref())?;
            cmd_spectrum(&cfg, &options(c, &cfg)?)?
        }
        Command::ScanJ1(c) => {
            let cfg = load_config(c.config.as_ref())?;
            cmd_scan_j1(&cfg, &options(c, &cfg)?)?
        }
        Command::Exchange { common, unit, inputs } => {
            let cfg = match &common.config {
                Some(p) => Some(load_config(Some(p))?),
                None => None,
            };
            let unit: EnergyUnit = match (unit, &cfg) {
                (Some(u), _) => u.parse().map_err(|e| CliError::Config(format!("--unit: {e}")))?,
                (None, Some(c)) => c.exchange_unit()?,
                (None, None) => EnergyUnit::Kelvin,
            };
            let ratio =
                cfg.as_ref().map_or(radtrip_core::exchange::J3_NEGLIGIBLE_RATIO, |c| c.exchange.j3_negligible_ratio);
            let out = common
                .out
                .clone()
                .or_else(|| cfg.as_ref().map(|c| c.run.output_dir.clone()))
                .unwrap_or_else(|| PathBuf::from("out"));
            vec![cmd_exchange(inputs, unit, ratio, &out, cfg.as_ref())?.0]
        }
    };
    for p in written {
        println!("{}", p.display());
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("radtrip: {e}");
            e.exit_code()
        }
    }
}
