// Copyright 2026 The radtrip Authors
// SPDX-License-Identifier: Apache-2.0

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use radtrip_cli::config::DEFAULT_CONFIG;

fn radtrip(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_radtrip")).args(args).output().unwrap()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

/// The shipped config with `section.key = ...` lines replaced.
fn config_with(dir: &Path, edits: &[(&str, &str)]) -> PathBuf {
    let mut text = DEFAULT_CONFIG.to_string();
    for (path, line) in edits {
        let (section, key) = path.split_once('.').unwrap();
        let sec = text.find(&format!("[{section}]")).unwrap_or_else(|| panic!("no section {section}"));
        let start = sec + text[sec..].find(&format!("\n{key} =")).unwrap_or_else(|| panic!("no key {path}")) + 1;
        let end = start + text[start..].find('\n').unwrap();
        text.replace_range(start..end, line);
    }
    let p = dir.join("run.toml");
    std::fs::write(&p, text).unwrap();
    p
}

/// Small spectrum settings so tests stay fast.
const SMALL: [(&str, &str); 4] = [
    ("spectrum.points", "points = 12"),
    ("spectrum.n_theta", "n_theta = 3"),
    ("spectrum.n_phi", "n_phi = 4"),
    ("dynamics.t_end_ns", "t_end_ns = 1.0"),
];

fn data_rows(p: &Path) -> Vec<Vec<String>> {
    std::fs::read_to_string(p)
        .unwrap()
        .lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

#[test]
fn zero_generator_leaves_the_state_unchanged() {
    let dir = tempfile::tempdir().unwrap();
    let mut edits: Vec<(&str, &str)> = vec![
        ("model.j0", "j0 = \"0 mT\""),
        ("model.j1", "j1 = \"0 mT\""),
        ("model.j2", "j2 = \"0 mT\""),
        ("model.d", "d = \"0 mT\""),
        ("model.e", "e = \"0 mT\""),
        ("model.field_mT", "field_mT = 0.0"),
        ("model.drive", "drive = \"0 rad/ns\""),
        ("rates.gamma_radical", "gamma_radical = 0.0"),
        ("rates.gamma_triplet", "gamma_triplet = 0.0"),
        ("rates.k_st", "k_st = 0.0"),
        ("rates.k_tg", "k_tg = 0.0"),
        ("rates.k_eg", "k_eg = 0.0"),
        ("dynamics.points", "points = 21"),
    ];
    edits.push(("dynamics.t_end_ns", "t_end_ns = 2.0"));
    let cfg = config_with(dir.path(), &edits);
    let out = dir.path().join("out");
    let o = radtrip(&["dynamics", "--config", path(&cfg), "--out", path(&out)]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let rows = data_rows(&out.join("trajectory.csv"));
    assert!(rows.len() >= 21);
    for r in &rows {
        assert_eq!(r[1..], rows[0][1..]);
    }
}

#[test]
fn default_dynamics_writes_tomography_at_the_requested_time() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let o = radtrip(&["dynamics", "--out", path(&out)]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let tomo = std::fs::read_to_string(out.join("tomography_t0.0062ns.csv")).unwrap();
    assert!(tomo.contains("# requested_t_ns = 6.2"));
    assert!(tomo.contains("# stored_t_ns = 6.2"));
    let rows = data_rows(&out.join("tomography_t0.0062ns.csv"));
    assert_eq!(rows.len(), 4);
    assert!(out.join("trajectory.csv").exists());
    assert!(out.join("dynamics_timings.csv").exists());
}

#[test]
fn missing_rates_section_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let text = DEFAULT_CONFIG
        .lines()
        .filter(|l| {
            !["[rates]", "gamma_radical", "gamma_triplet", "k_st", "k_tg", "k_eg"].iter().any(|k| l.starts_with(k))
        })
        .collect::<Vec<_>>()
        .join("\n");
    let cfg = dir.path().join("run.toml");
    std::fs::write(&cfg, text).unwrap();
    let out = dir.path().join("out");
    let o = radtrip(&["spectrum", "--config", path(&cfg), "--out", path(&out)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("rates"));
    assert!(!out.exists());
}

#[test]
fn single_point_grid_writes_only_the_single_spectrum() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config_with(
        dir.path(),
        &[("spectrum.points", "points = 12"), ("spectrum.n_theta", "n_theta = 1"), ("spectrum.n_phi", "n_phi = 1")],
    );
    let out = dir.path().join("out");
    let o = radtrip(&["spectrum", "--config", path(&cfg), "--out", path(&out)]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(out.join("spectrum_single.csv").exists());
    assert!(!out.join("spectrum_powder.csv").exists());
    assert_eq!(data_rows(&out.join("spectrum_single.csv")).len(), 12);
}

#[test]
fn worker_count_does_not_change_the_powder_spectrum() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config_with(dir.path(), &SMALL);
    let mut files = Vec::new();
    for w in ["1", "3"] {
        let out = dir.path().join(format!("w{w}"));
        let o = radtrip(&["spectrum", "--config", path(&cfg), "--out", path(&out), "--workers", w]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        files.push(std::fs::read(out.join("spectrum_powder.csv")).unwrap());
    }
    assert_eq!(files[0], files[1]);
    let text = String::from_utf8(files.remove(0)).unwrap();
    assert!(text.contains("# orientation_evaluations: 12"));
}

#[test]
fn scan_writes_one_spectrum_per_value_on_a_shared_grid() {
    let dir = tempfile::tempdir().unwrap();
    let mut edits = SMALL.to_vec();
    edits.push(("scan.mode", "mode = \"single\""));
    let cfg = config_with(dir.path(), &edits);
    let out = dir.path().join("out");
    let o = radtrip(&["scan-j1", "--config", path(&cfg), "--out", path(&out)]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let names = ["spectrum_j1_-10mT.csv", "spectrum_j1_-1000mT.csv", "spectrum_j1_-100000mT.csv"];
    let omegas: Vec<Vec<String>> =
        names.iter().map(|n| data_rows(&out.join(n)).into_iter().map(|r| r[0].clone()).collect()).collect();
    assert_eq!(omegas[0].len(), 12);
    assert_eq!(omegas[0], omegas[1]);
    assert_eq!(omegas[0], omegas[2]);
    let combined = data_rows(&out.join("spectrum_j1_scan.csv"));
    assert_eq!(combined.len(), 12);
    assert_eq!(combined[0].len(), 4);
}

#[test]
fn empty_scan_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config_with(dir.path(), &[("scan.j1", "j1 = []")]);
    let out = dir.path().join("out");
    let o = radtrip(&["scan-j1", "--config", path(&cfg), "--out", path(&out)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("scan.j1"));
}

#[test]
fn repeated_scan_values_run_once_with_a_warning() {
    let dir = tempfile::tempdir().unwrap();
    let mut edits = SMALL.to_vec();
    edits.push(("scan.mode", "mode = \"single\""));
    edits.push(("scan.j1", "j1 = [\"-10 mT\", \"-10 mT\", \"-1e3 mT\"]"));
    let cfg = config_with(dir.path(), &edits);
    let out = dir.path().join("out");
    let o = radtrip(&["scan-j1", "--config", path(&cfg), "--out", path(&out)]);
    assert!(o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("warning"));
    assert_eq!(data_rows(&out.join("spectrum_j1_scan.csv"))[0].len(), 3);
}

#[test]
fn exchange_reproduces_ising_couplings() {
    let dir = tempfile::tempdir().unwrap();
    // E_a..E_d from J1 = J2 = -461.4 K, J3 = 0; E_T, E_BS from J0 = 16.8 K.
    let table = "molecule test\ndihedral 0\na -461.4 K\nb 0 K\nc 461.4 K\nd 0 K\nT 4.2 K\nBS -4.2 K\n";
    let f = dir.path().join("t.txt");
    std::fs::write(&f, table).unwrap();
    let out = dir.path().join("out");
    let o = radtrip(&["exchange", "--out", path(&out), path(&f)]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let rows = data_rows(&out.join("exchange.csv"));
    let v = |s: &str| s.parse::<f64>().unwrap();
    assert!((v(&rows[0][1]) - 16.8).abs() < 1e-12 * 16.8);
    assert!((v(&rows[0][2]) + 461.4).abs() < 1e-12 * 461.4);
    assert_eq!(rows[0][5], "AFM");
    assert_eq!(rows[0][6], "FM");
}

#[test]
fn exchange_converts_mixed_units() {
    let dir = tempfile::tempdir().unwrap();
    // 1 K expressed in eV next to values in K.
    let k_in_ev = 130.920 / 1.51927e6;
    let table = format!("a -10 K\nb 0 K\nc {} eV\nd 0 K\nT 1 K\nBS -1 K\n", 10.0 * k_in_ev);
    let f = dir.path().join("t.txt");
    std::fs::write(&f, table).unwrap();
    let out = dir.path().join("out");
    let o = radtrip(&["exchange", "--unit", "K", "--out", path(&out), path(&f)]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let rows = data_rows(&out.join("exchange.csv"));
    let j1: f64 = rows[0][2].parse().unwrap();
    assert!((j1 + 10.0).abs() < 1e-9, "{j1}");
}

#[test]
fn malformed_table_names_the_line() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("bad.txt");
    std::fs::write(&f, "a -10 K\nb zero K\n").unwrap();
    let out = dir.path().join("out");
    let o = radtrip(&["exchange", "--out", path(&out), path(&f)]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("line 2"), "{err}");
    assert!(!out.join("exchange.csv").exists());
}

#[test]
fn default_config_subcommand_prints_the_shipped_file() {
    let o = radtrip(&["default-config"]);
    assert!(o.status.success());
    assert_eq!(String::from_utf8(o.stdout).unwrap(), DEFAULT_CONFIG);
}
