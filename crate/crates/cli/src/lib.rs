// Copyright 2026 The radtrip Authors
// SPDX-License-Identifier: Apache-2.0

//! Command implementations behind the `radtrip` binary.

pub mod commands;
pub mod config;
pub mod provenance;

use std::process::ExitCode;

/// Failures, each with its own process exit code.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("numerical failure: {0}")]
    Numerical(#[from] radtrip_core::Error),
    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        ExitCode::from(match self {
            CliError::Io(_) => 1,
            CliError::Config(_) => 2,
            CliError::Numerical(_) => 3,
        })
    }
}

pub type CliResult<T> = Result<T, CliError>;

/// Worker count: explicit flag, then `RADTRIP_WORKERS`, then the config,
/// where 0 means every available core.
pub fn resolve_workers(flag: Option<usize>, env: Option<&str>, config: usize) -> CliResult<usize> {
    let requested = match (flag, env) {
        (Some(n), _) => n,
        (None, Some(s)) => {
            s.trim().parse().map_err(|_| CliError::Config(format!("RADTRIP_WORKERS: `{s}` is not a count")))?
        }
        (None, None) => config,
    };
    Ok(if requested == 0 { std::thread::available_parallelism().map_or(1, |n| n.get()) } else { requested })
}
