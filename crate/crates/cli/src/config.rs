// Copyright 2026 The radtrip Authors
// SPDX-License-Identifier: Apache-2.0

//! Run configuration: TOML, versioned by `schema_version`, unknown keys
//! rejected.
//!
//! Energies are strings carrying a unit (`"-10 mT"`, `"16.8 K"`,
//! `"250 rad/ns"`); accepted units are `Ha`, `eV`, `K`, `mT`, `MHz` and
//! `rad/ns`. Rates are in 1/ns, times in ns, angles in degrees.

use std::path::PathBuf;

use radtrip_core::dynamics::{RadicalConfig, T1Label};
use radtrip_core::hamiltonian::{ModelParams, Orientation, PulseWindow};
use radtrip_core::lindblad::RateParams;
use radtrip_core::spectra::{PowderGrid, SpectrumGrid};
use radtrip_core::units::{Energy, EnergyUnit};
use serde::{Deserialize, Serialize};

use crate::CliError;

pub const SCHEMA_VERSION: u32 = 1;

/// The configuration shipped with the binary.
pub const DEFAULT_CONFIG: &str = include_str!("../configs/default.toml");

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub schema_version: u32,
    pub model: ModelSection,
    pub rates: RatesSection,
    #[serde(default)]
    pub initial_state: InitialStateSection,
    #[serde(default)]
    pub dynamics: DynamicsSection,
    #[serde(default)]
    pub spectrum: SpectrumSection,
    #[serde(default)]
    pub scan: ScanSection,
    #[serde(default)]
    pub exchange: ExchangeSection,
    #[serde(default)]
    pub run: RunSection,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelSection {
    #[serde(default = "zero_energy")]
    pub j0: String,
    pub j1: String,
    pub j2: String,
    #[serde(default = "zero_energy")]
    pub j3: String,
    pub d: String,
    pub e: String,
    #[serde(default = "free_g")]
    pub g_radical: f64,
    #[serde(default = "free_g")]
    pub g_coupler: f64,
    #[serde(rename = "field_mT")]
    pub field_mt: f64,
    pub drive: String,
    pub pulse_start_ns: f64,
    pub pulse_end_ns: f64,
}

fn zero_energy() -> String {
    "0 mT".into()
}

fn free_g() -> f64 {
    2.0023
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RatesSection {
    pub gamma_radical: f64,
    pub gamma_triplet: f64,
    pub k_st: f64,
    pub k_tg: f64,
    pub k_eg: f64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InitialStateSection {
    /// Radical temperature in S0; absent means infinite temperature.
    #[serde(rename = "temperature_K", skip_serializing_if = "Option::is_none")]
    pub temperature_k: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DynamicsSection {
    pub t_end_ns: f64,
    pub points: usize,
    pub theta_deg: f64,
    pub phi_deg: f64,
    /// `"bra:ket"` pairs of radical configurations, e.g. `"ud:du"`.
    pub coherences: Vec<String>,
    /// T1 states, e.g. `"1/2,1,-1/2"` or `"S=1,M=0,s12=1"`.
    pub populations: Vec<String>,
    pub tomography_times_ns: Vec<f64>,
}

impl Default for DynamicsSection {
    fn default() -> Self {
        Self {
            t_end_ns: 10.0,
            points: 401,
            theta_deg: 0.0,
            phi_deg: 0.0,
            coherences: vec!["ud:du".into()],
            populations: vec!["1/2,1,-1/2".into()],
            tomography_times_ns: vec![0.0062],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SpectrumSection {
    pub time_ns: f64,
    pub omega_min: String,
    pub omega_max: String,
    pub points: usize,
    pub theta_deg: f64,
    pub phi_deg: f64,
    pub n_theta: usize,
    pub n_phi: usize,
    pub weighted: bool,
}

impl Default for SpectrumSection {
    fn default() -> Self {
        Self {
            time_ns: 0.0062,
            omega_min: "58 rad/ns".into(),
            omega_max: "65 rad/ns".into(),
            points: 100,
            theta_deg: 0.0,
            phi_deg: 0.0,
            n_theta: 50,
            n_phi: 100,
            weighted: false,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScanMode {
    Single,
    Powder,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ScanSection {
    pub j1: Vec<String>,
    pub mode: ScanMode,
}

impl Default for ScanSection {
    fn default() -> Self {
        Self { j1: vec!["-10 mT".into(), "-1e3 mT".into(), "-1e5 mT".into()], mode: ScanMode::Single }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ExchangeSection {
    pub output_unit: String,
    pub j3_negligible_ratio: f64,
}

impl Default for ExchangeSection {
    fn default() -> Self {
        Self { output_unit: "K".into(), j3_negligible_ratio: radtrip_core::exchange::J3_NEGLIGIBLE_RATIO }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunSection {
    /// 0 selects the number of available cores.
    pub workers: usize,
    pub output_dir: PathBuf,
    /// Reserved; no stage draws random numbers.
    pub seed: u64,
}

impl Default for RunSection {
    fn default() -> Self {
        Self { workers: 0, output_dir: PathBuf::from("out"), seed: 0 }
    }
}

fn config_err(key: &str, msg: impl std::fmt::Display) -> CliError {
    CliError::Config(format!("{key}: {msg}"))
}

fn energy(key: &str, s: &str) -> Result<Energy, CliError> {
    let e: Energy = s.parse().map_err(|e| config_err(key, e))?;
    if !e.value.is_finite() {
        return Err(config_err(key, "must be finite"));
    }
    Ok(e)
}

fn finite(key: &str, v: f64) -> Result<f64, CliError> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(config_err(key, "must be finite"))
    }
}

fn orientation(section: &str, theta_deg: f64, phi_deg: f64) -> Result<Orientation, CliError> {
    Orientation::new(theta_deg.to_radians(), phi_deg.to_radians())
        .map_err(|e| config_err(&format!("{section}.theta_deg"), e))
}

/// A coherence request resolved to radical configurations.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CoherenceSpec {
    pub bra: RadicalConfig,
    pub ket: RadicalConfig,
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let cfg: RunConfig = toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        if cfg.schema_version != SCHEMA_VERSION {
            return Err(config_err(
                "schema_version",
                format!("unsupported version {} (expected {SCHEMA_VERSION})", cfg.schema_version),
            ));
        }
        cfg.model_params()?;
        cfg.rate_params()?;
        cfg.validate_sections()?;
        Ok(cfg)
    }

    pub fn default_config() -> Self {
        Self::parse(DEFAULT_CONFIG).expect("shipped config is valid")
    }

    /// Canonical TOML for provenance headers. The worker count is left out
    /// because it never changes results.
    pub fn canonical(&self) -> String {
        let mut c = self.clone();
        c.run.workers = 0;
        toml::to_string(&c).expect("config serializes")
    }

    pub fn model_params(&self) -> Result<ModelParams, CliError> {
        let m = &self.model;
        let internal = |key: &str, s: &str| energy(&format!("model.{key}"), s).map(Energy::internal);
        let pulse = PulseWindow::new(
            finite("model.pulse_start_ns", m.pulse_start_ns)?,
            finite("model.pulse_end_ns", m.pulse_end_ns)?,
        )
        .map_err(|e| config_err("model.pulse_end_ns", e))?;
        let params = ModelParams {
            j0: internal("j0", &m.j0)?,
            j1: internal("j1", &m.j1)?,
            j2: internal("j2", &m.j2)?,
            j3: internal("j3", &m.j3)?,
            d: internal("d", &m.d)?,
            e: internal("e", &m.e)?,
            g_radical: finite("model.g_radical", m.g_radical)?,
            g_coupler: finite("model.g_coupler", m.g_coupler)?,
            field_mt: finite("model.field_mT", m.field_mt)?,
            drive: internal("drive", &m.drive)?,
            pulse,
        };
        params.validate().map_err(|e| config_err("model", e))?;
        Ok(params)
    }

    pub fn rate_params(&self) -> Result<RateParams, CliError> {
        let r = self.rates;
        let rates = RateParams {
            gamma_radical: r.gamma_radical,
            gamma_triplet: r.gamma_triplet,
            k_st: r.k_st,
            k_tg: r.k_tg,
            k_eg: r.k_eg,
        };
        rates.validate().map_err(|e| config_err("rates", e))?;
        Ok(rates)
    }

    pub fn dynamics_times(&self) -> Result<Vec<f64>, CliError> {
        let d = &self.dynamics;
        if !d.t_end_ns.is_finite() || d.t_end_ns <= 0.0 {
            return Err(config_err("dynamics.t_end_ns", "must be positive"));
        }
        if d.points < 2 {
            return Err(config_err("dynamics.points", "need at least 2"));
        }
        let grid =
            radtrip_core::dynamics::uniform_times(d.t_end_ns, d.points).map_err(|e| config_err("dynamics", e))?;
        Ok(radtrip_core::dynamics::merge_times(&grid, &d.tomography_times_ns))
    }

    pub fn dynamics_orientation(&self) -> Result<Orientation, CliError> {
        orientation("dynamics", self.dynamics.theta_deg, self.dynamics.phi_deg)
    }

    pub fn coherences(&self) -> Result<Vec<CoherenceSpec>, CliError> {
        self.dynamics
            .coherences
            .iter()
            .map(|s| {
                let (bra, ket) = s
                    .split_once(':')
                    .ok_or_else(|| config_err("dynamics.coherences", format!("`{s}` must look like `ud:du`")))?;
                let parse =
                    |x: &str| x.trim().parse::<RadicalConfig>().map_err(|e| config_err("dynamics.coherences", e));
                Ok(CoherenceSpec { bra: parse(bra)?, ket: parse(ket)? })
            })
            .collect()
    }

    pub fn populations(&self) -> Result<Vec<T1Label>, CliError> {
        self.dynamics
            .populations
            .iter()
            .map(|s| s.parse::<T1Label>().map_err(|e| config_err("dynamics.populations", e)))
            .collect()
    }

    pub fn spectrum_grid(&self) -> Result<SpectrumGrid, CliError> {
        let s = &self.spectrum;
        let lo = energy("spectrum.omega_min", &s.omega_min)?.internal();
        let hi = energy("spectrum.omega_max", &s.omega_max)?.internal();
        if hi.is_nan() || lo.is_nan() || hi <= lo {
            return Err(config_err("spectrum.omega_max", "must exceed omega_min"));
        }
        if s.points < 2 {
            return Err(config_err("spectrum.points", "need at least 2"));
        }
        if !s.time_ns.is_finite() || s.time_ns < 0.0 {
            return Err(config_err("spectrum.time_ns", "must be a non-negative time"));
        }
        SpectrumGrid::linspace(lo, hi, s.points, self.model.field_mt, s.time_ns).map_err(|e| config_err("spectrum", e))
    }

    pub fn spectrum_orientation(&self) -> Result<Orientation, CliError> {
        orientation("spectrum", self.spectrum.theta_deg, self.spectrum.phi_deg)
    }

    pub fn powder_grid(&self, force_weighted: bool) -> Result<PowderGrid, CliError> {
        let s = &self.spectrum;
        PowderGrid::new(s.n_theta, s.n_phi, s.weighted || force_weighted).map_err(|e| config_err("spectrum.n_theta", e))
    }

    /// Scan values in rad/ns, deduplicated in order of first appearance,
    /// plus the duplicates that were dropped.
    pub fn scan_values(&self) -> Result<(Vec<Energy>, Vec<String>), CliError> {
        if self.scan.j1.is_empty() {
            return Err(config_err("scan.j1", "list is empty"));
        }
        let mut kept: Vec<Energy> = Vec::new();
        let mut dropped = Vec::new();
        for s in &self.scan.j1 {
            let e = energy("scan.j1", s)?;
            if kept.iter().any(|k| k.internal() == e.internal()) {
                dropped.push(s.clone());
            } else {
                kept.push(e);
            }
        }
        Ok((kept, dropped))
    }

    pub fn exchange_unit(&self) -> Result<EnergyUnit, CliError> {
        self.exchange.output_unit.parse().map_err(|e| config_err("exchange.output_unit", e))
    }

    fn validate_sections(&self) -> Result<(), CliError> {
        if let Some(t) = self.initial_state.temperature_k {
            if !t.is_finite() || t <= 0.0 {
                return Err(config_err("initial_state.temperature_K", "must be positive"));
            }
        }
        self.dynamics_times()?;
        self.dynamics_orientation()?;
        self.coherences()?;
        self.populations()?;
        self.spectrum_grid()?;
        self.spectrum_orientation()?;
        self.powder_grid(false)?;
        self.exchange_unit()?;
        let ratio = self.exchange.j3_negligible_ratio;
        if ratio.is_nan() || ratio < 0.0 {
            return Err(config_err("exchange.j3_negligible_ratio", "must be non-negative"));
        }
        if self.scan.j1.is_empty() {
            return Err(config_err("scan.j1", "list is empty"));
        }
        for s in &self.scan.j1 {
            energy("scan.j1", s)?;
        }
        Ok(())
    }
}
