// Copyright 2026 The radtrip Authors
// SPDX-License-Identifier: Apache-2.0

//! Commented headers attached to every output file.

use std::io::Write;
use std::path::Path;
use std::time::Duration;

use crate::config::RunConfig;
use crate::CliResult;

pub const ARTIFACT_VERSION: &str = concat!("radtrip ", env!("CARGO_PKG_VERSION"));

/// Header lines (without the `# ` prefix): artifact version, command, and
/// the canonical resolved config. Deterministic for a given config.
pub fn header(command: &str, cfg: &RunConfig) -> Vec<String> {
    let mut lines = vec![format!("artifact: {ARTIFACT_VERSION}"), format!("command: {command}"), "config:".to_string()];
    lines.extend(cfg.canonical().lines().map(|l| format!("  {l}")));
    lines
}

/// Wall-clock stage timings, kept out of the data files so those stay
/// byte-identical between runs.
#[derive(Debug, Default)]
pub struct StageTimings {
    stages: Vec<(String, Duration)>,
}

impl StageTimings {
    pub fn record(&mut self, stage: &str, d: Duration) {
        self.stages.push((stage.to_string(), d));
    }

    pub fn write(&self, path: &Path, header: &[String], workers: usize) -> CliResult<()> {
        let mut f = std::io::BufWriter::new(std::fs::File::create(path)?);
        for l in header {
            writeln!(f, "# {l}")?;
        }
        writeln!(f, "# workers: {workers}")?;
        writeln!(f, "stage,seconds")?;
        for (s, d) in &self.stages {
            writeln!(f, "{s},{:.6}", d.as_secs_f64())?;
        }
        f.flush()?;
        Ok(())
    }
}
