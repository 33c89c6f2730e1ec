// Copyright 2026 The radtrip Authors
// SPDX-License-Identifier: Apache-2.0

//! The four subcommands. Every data file starts with the provenance header;
//! stage timings go to a `*_timings.csv` sidecar.
//!
//! Files written:
//!
//! | command    | files |
//! |------------|-------|
//! | `dynamics` | `trajectory.csv`, `tomography_t<time>ns.csv` per requested time |
//! | `spectrum` | `spectrum_single.csv`; with more than one orientation also `spectrum_powder.csv` and `orientation_timing.csv` |
//! | `scan-j1`  | `spectrum_j1_<value><unit>.csv` per value and `spectrum_j1_scan.csv` with all columns |
//! | `exchange` | `exchange.csv` |
//!
//! `trajectory.csv` columns: `t_ns`, `pop_S0`, `pop_S1`, `pop_T1`, then
//! `pop[<label>]` per tracked T1 state and `coh[<bra>:<ket>]_re`, `_im`,
//! `_abs` per tracked radical coherence. Tomography files hold the 4×4
//! magnitudes of the radical reduced density matrix, rows and columns
//! labelled `1=uu 2=ud 3=du 4=dd`.

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use radtrip_core::dynamics::{
    coherence_trace, population_trace, propagate, thermal_ground_state, tomography_snapshot, DensityMatrix,
    RadicalConfig, Tomography,
};
use radtrip_core::exchange::{
    extract, parse_energy_scan, scan_process, write_exchange_csv, EnergyTable, ExchangeResult,
};
use radtrip_core::spectra::{powder_average, write_timings_csv, Spectrum, SpectrumJob};
use radtrip_core::spin::Manifold;
use radtrip_core::units::{Energy, EnergyUnit};

use crate::config::{RunConfig, ScanMode};
use crate::provenance::{header, StageTimings};
use crate::{CliError, CliResult};

/// Options shared by every command.
#[derive(Clone, Debug)]
pub struct RunOptions {
    pub out_dir: PathBuf,
    pub workers: usize,
    pub weighted_powder: bool,
}

fn create(dir: &Path, name: &str) -> CliResult<BufWriter<File>> {
    Ok(BufWriter::new(File::create(dir.join(name))?))
}

fn pool(workers: usize) -> CliResult<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| CliError::Config(format!("worker pool: {e}")))
}

fn initial_state(cfg: &RunConfig) -> CliResult<DensityMatrix> {
    Ok(thermal_ground_state(&cfg.model_params()?, cfg.initial_state.temperature_k)?)
}

pub fn cmd_dynamics(cfg: &RunConfig, opts: &RunOptions) -> CliResult<Vec<PathBuf>> {
    let params = cfg.model_params()?;
    let rates = cfg.rate_params()?;
    let times = cfg.dynamics_times()?;
    let orient = cfg.dynamics_orientation()?;
    let coherences = cfg.coherences()?;
    let labels = cfg.populations()?;
    let mut timings = StageTimings::default();

    let start = Instant::now();
    let rho0 = initial_state(cfg)?;
    let traj = propagate(&params, &rates, &orient, &rho0, &times)?;
    timings.record("propagate", start.elapsed());

    let start = Instant::now();
    let pops = labels.iter().map(|l| population_trace(&traj, l)).collect::<Result<Vec<_>, _>>()?;
    let cohs: Vec<_> = coherences.iter().map(|c| coherence_trace(&traj, c.bra, c.ket)).collect();
    let hdr = header("dynamics", cfg);
    fs::create_dir_all(&opts.out_dir)?;
    let mut written = Vec::new();

    let mut f = create(&opts.out_dir, "trajectory.csv")?;
    for l in &hdr {
        writeln!(f, "# {l}")?;
    }
    let mut cols = vec!["t_ns".to_string(), "pop_S0".into(), "pop_S1".into(), "pop_T1".into()];
    cols.extend(labels.iter().map(|l| format!("pop[{l}]")));
    for c in &coherences {
        let name = format!("coh[{}:{}]", c.bra.symbol(), c.ket.symbol());
        cols.extend(["_re", "_im", "_abs"].iter().map(|s| format!("{name}{s}")));
    }
    writeln!(f, "{}", cols.join(","))?;
    for (k, (t, rho)) in traj.times.iter().zip(&traj.states).enumerate() {
        let mut row = vec![format!("{t:.12e}")];
        for m in [Manifold::S0, Manifold::S1, Manifold::T1] {
            row.push(format!("{:.12e}", rho.manifold_population(m)));
        }
        row.extend(pops.iter().map(|p| format!("{:.12e}", p[k])));
        for c in &cohs {
            let z = c[k];
            row.extend([z.re, z.im, z.norm()].iter().map(|v| format!("{v:.12e}")));
        }
        writeln!(f, "{}", row.join(","))?;
    }
    f.flush()?;
    written.push(opts.out_dir.join("trajectory.csv"));

    for &t in &cfg.dynamics.tomography_times_ns {
        let snap = tomography_snapshot(&traj, t);
        let name = format!("tomography_t{t}ns.csv");
        let mut f = create(&opts.out_dir, &name)?;
        write_tomography(&mut f, &hdr, &snap)?;
        f.flush()?;
        written.push(opts.out_dir.join(name));
    }
    timings.record("write", start.elapsed());
    timings.write(&opts.out_dir.join("dynamics_timings.csv"), &hdr, 1)?;
    Ok(written)
}

fn write_tomography<W: Write>(w: &mut W, hdr: &[String], snap: &Tomography) -> std::io::Result<()> {
    for l in hdr {
        writeln!(w, "# {l}")?;
    }
    writeln!(w, "# requested_t_ns = {:.12e}", snap.requested)?;
    writeln!(w, "# stored_t_ns = {:.12e}", snap.time)?;
    let label = |c: RadicalConfig| format!("{}={}", c.number(), c.symbol());
    let names: Vec<String> = RadicalConfig::ALL.iter().map(|&c| label(c)).collect();
    writeln!(w, "abs,{}", names.join(","))?;
    let mags = snap.magnitudes();
    for (i, row) in mags.iter().enumerate() {
        let vals: Vec<String> = row.iter().map(|v| format!("{v:.12e}")).collect();
        writeln!(w, "{},{}", names[i], vals.join(","))?;
    }
    Ok(())
}

fn write_spectrum(dir: &Path, name: &str, spec: &Spectrum, hdr: &[String]) -> CliResult<PathBuf> {
    let mut f = create(dir, name)?;
    spec.write_csv(&mut f, hdr)?;
    f.flush()?;
    Ok(dir.join(name))
}

pub fn cmd_spectrum(cfg: &RunConfig, opts: &RunOptions) -> CliResult<Vec<PathBuf>> {
    let params = cfg.model_params()?;
    let rates = cfg.rate_params()?;
    let grid = cfg.spectrum_grid()?;
    let powder = cfg.powder_grid(opts.weighted_powder)?;
    let single_orient = cfg.spectrum_orientation()?;
    let hdr = header("spectrum", cfg);
    let mut timings = StageTimings::default();

    let rho0 = initial_state(cfg)?;
    let job = SpectrumJob::new(&params, &rates, &rho0, &grid)?;
    fs::create_dir_all(&opts.out_dir)?;
    let mut written = Vec::new();

    let start = Instant::now();
    let single = job.single(&single_orient)?;
    timings.record("single", start.elapsed());
    written.push(write_spectrum(&opts.out_dir, "spectrum_single.csv", &single, &hdr)?);

    if powder.len() > 1 {
        let start = Instant::now();
        let result = pool(opts.workers)?.install(|| powder_average(&job, &powder))?;
        timings.record("powder", start.elapsed());
        let mut phdr = hdr.clone();
        phdr.push(format!("orientation_evaluations: {}", result.evaluations()));
        written.push(write_spectrum(&opts.out_dir, "spectrum_powder.csv", &result.spectrum, &phdr)?);
        let mut f = create(&opts.out_dir, "orientation_timing.csv")?;
        write_timings_csv(&mut f, &result.timings, &hdr)?;
        f.flush()?;
    }
    timings.write(&opts.out_dir.join("spectrum_timings.csv"), &hdr, opts.workers)?;
    Ok(written)
}

fn j1_file_name(e: Energy) -> String {
    format!("spectrum_j1_{}{}.csv", e.value, e.unit.symbol().replace('/', "per"))
}

pub fn cmd_scan_j1(cfg: &RunConfig, opts: &RunOptions) -> CliResult<Vec<PathBuf>> {
    let params = cfg.model_params()?;
    let rates = cfg.rate_params()?;
    let grid = cfg.spectrum_grid()?;
    let powder = cfg.powder_grid(opts.weighted_powder)?;
    let orient = cfg.spectrum_orientation()?;
    let (values, dropped) = cfg.scan_values()?;
    for d in &dropped {
        eprintln!("warning: scan.j1 value `{d}` is repeated; running it once");
    }
    let hdr = header("scan-j1", cfg);
    let rho0 = initial_state(cfg)?;
    let pool = pool(opts.workers)?;
    let mut timings = StageTimings::default();
    fs::create_dir_all(&opts.out_dir)?;

    let mut spectra = Vec::with_capacity(values.len());
    let mut written = Vec::new();
    for &e in &values {
        let start = Instant::now();
        let j = e.internal();
        let p = radtrip_core::hamiltonian::ModelParams { j1: j, j2: j, ..params.clone() };
        let job = SpectrumJob::new(&p, &rates, &rho0, &grid)?;
        let spec = match cfg.scan.mode {
            ScanMode::Single => job.single(&orient)?,
            ScanMode::Powder => pool.install(|| powder_average(&job, &powder))?.spectrum,
        };
        timings.record(&format!("j1 = {e}"), start.elapsed());
        let mut h = hdr.clone();
        h.push(format!("scan j1 = j2 = {e} ({j:.12e} rad/ns)"));
        written.push(write_spectrum(&opts.out_dir, &j1_file_name(e), &spec, &h)?);
        spectra.push((e, spec));
    }

    let mut f = create(&opts.out_dir, "spectrum_j1_scan.csv")?;
    for l in &hdr {
        writeln!(f, "# {l}")?;
    }
    let cols: Vec<String> = spectra.iter().map(|(e, _)| format!("I[j1={e}]")).collect();
    writeln!(f, "omega_rad_per_ns,{}", cols.join(","))?;
    for (k, omega) in grid.omegas.iter().enumerate() {
        let vals: Vec<String> = spectra.iter().map(|(_, s)| format!("{:.12e}", s.intensities[k])).collect();
        writeln!(f, "{omega:.12e},{}", vals.join(","))?;
    }
    f.flush()?;
    written.push(opts.out_dir.join("spectrum_j1_scan.csv"));
    timings.write(&opts.out_dir.join("scan_j1_timings.csv"), &hdr, opts.workers)?;
    Ok(written)
}

/// Reads one energy table per file; files whose first record line starts
/// with `angle_deg` hold a whole angle scan.
pub fn load_tables(paths: &[PathBuf]) -> CliResult<Vec<EnergyTable>> {
    let mut tables = Vec::new();
    for p in paths {
        let text = fs::read_to_string(p)?;
        let tabular = text
            .lines()
            .map(|l| l.split('#').next().unwrap_or("").trim())
            .find(|l| !l.is_empty())
            .is_some_and(|l| l.starts_with("angle_deg"));
        let parsed = if tabular { parse_energy_scan(&text) } else { EnergyTable::parse(&text).map(|t| vec![t]) };
        tables.extend(parsed.map_err(|e| CliError::Config(format!("{}: {e}", p.display())))?);
    }
    Ok(tables)
}

pub fn cmd_exchange(
    inputs: &[PathBuf],
    unit: EnergyUnit,
    j3_ratio: f64,
    out_dir: &Path,
    cfg: Option<&RunConfig>,
) -> CliResult<(PathBuf, Vec<ExchangeResult>)> {
    if inputs.is_empty() {
        return Err(CliError::Config("exchange: no input tables given".into()));
    }
    let tables = load_tables(inputs)?;
    let rows = if tables.iter().all(|t| t.dihedral_deg.is_some()) {
        let report = scan_process(&tables, unit, j3_ratio)?;
        if report.j1_magnitude_non_increasing == Some(false) {
            eprintln!("note: |J1| is not monotonically decreasing with the dihedral angle");
        }
        report.rows
    } else {
        tables.iter().map(|t| extract(t, unit, j3_ratio)).collect::<Result<Vec<_>, _>>()?
    };
    let mut hdr = match cfg {
        Some(c) => header("exchange", c),
        None => vec![format!("artifact: {}", crate::provenance::ARTIFACT_VERSION), "command: exchange".into()],
    };
    hdr.push(format!("output_unit: {unit}"));
    hdr.push(format!("j3_negligible_ratio: {j3_ratio:e}"));
    for p in inputs {
        hdr.push(format!("input: {}", p.display()));
    }
    fs::create_dir_all(out_dir)?;
    let mut f = create(out_dir, "exchange.csv")?;
    write_exchange_csv(&mut f, &rows, unit, &hdr)?;
    f.flush()?;
    Ok((out_dir.join("exchange.csv"), rows))
}
