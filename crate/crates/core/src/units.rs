// Copyright 2026 The radtrip Authors
// SPDX-License-Identifier: Apache-2.0

//! Energy units.
//!
//! Every energy-like quantity is converted on entry to an angular frequency
//! in rad/ns (energy divided by ħ). Constants carry six significant digits.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Bohr magneton over ħ, rad ns⁻¹ mT⁻¹.
pub const MU_B_OVER_HBAR: f64 = 0.0879410;
/// Boltzmann constant over ħ, rad ns⁻¹ K⁻¹.
pub const K_B_OVER_HBAR: f64 = 130.920;
/// Hartree over ħ, rad ns⁻¹.
pub const HARTREE_OVER_HBAR: f64 = 4.13414e7;
/// Electron volt over ħ, rad ns⁻¹.
pub const EV_OVER_HBAR: f64 = 1.51927e6;
/// Free-electron g-factor, used to define the mT energy equivalent.
pub const G_FREE_ELECTRON: f64 = 2.00232;
/// One MHz (cyclic) in rad/ns.
pub const MHZ_IN_RAD_PER_NS: f64 = 2.0 * std::f64::consts::PI * 1.0e-3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum EnergyUnit {
    Hartree,
    ElectronVolt,
    Kelvin,
    /// Field equivalent: `g_e μ_B (1 mT) / ħ` with the free-electron g-factor.
    MilliTesla,
    MegaHertz,
    /// The internal unit.
    RadPerNs,
}

impl EnergyUnit {
    pub const ALL: [EnergyUnit; 6] = [
        EnergyUnit::Hartree,
        EnergyUnit::ElectronVolt,
        EnergyUnit::Kelvin,
        EnergyUnit::MilliTesla,
        EnergyUnit::MegaHertz,
        EnergyUnit::RadPerNs,
    ];

    /// Size of one unit in rad/ns.
    pub fn in_rad_per_ns(self) -> f64 {
        match self {
            EnergyUnit::Hartree => HARTREE_OVER_HBAR,
            EnergyUnit::ElectronVolt => EV_OVER_HBAR,
            EnergyUnit::Kelvin => K_B_OVER_HBAR,
            EnergyUnit::MilliTesla => G_FREE_ELECTRON * MU_B_OVER_HBAR,
            EnergyUnit::MegaHertz => MHZ_IN_RAD_PER_NS,
            EnergyUnit::RadPerNs => 1.0,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            EnergyUnit::Hartree => "Ha",
            EnergyUnit::ElectronVolt => "eV",
            EnergyUnit::Kelvin => "K",
            EnergyUnit::MilliTesla => "mT",
            EnergyUnit::MegaHertz => "MHz",
            EnergyUnit::RadPerNs => "rad/ns",
        }
    }
}

impl fmt::Display for EnergyUnit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

impl FromStr for EnergyUnit {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "Ha" | "Hartree" | "hartree" | "au" | "a.u." => Ok(EnergyUnit::Hartree),
            "eV" | "ev" => Ok(EnergyUnit::ElectronVolt),
            "K" | "kelvin" | "Kelvin" => Ok(EnergyUnit::Kelvin),
            "mT" | "mt" => Ok(EnergyUnit::MilliTesla),
            "MHz" | "mhz" => Ok(EnergyUnit::MegaHertz),
            "rad/ns" | "internal" => Ok(EnergyUnit::RadPerNs),
            other => Err(Error::UnknownUnit(other.to_string())),
        }
    }
}

/// A unit-tagged energy.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Energy {
    pub value: f64,
    pub unit: EnergyUnit,
}

impl Energy {
    pub fn new(value: f64, unit: EnergyUnit) -> Self {
        Self { value, unit }
    }

    pub fn kelvin(value: f64) -> Self {
        Self::new(value, EnergyUnit::Kelvin)
    }

    pub fn millitesla(value: f64) -> Self {
        Self::new(value, EnergyUnit::MilliTesla)
    }

    pub fn rad_per_ns(value: f64) -> Self {
        Self::new(value, EnergyUnit::RadPerNs)
    }

    /// Value in rad/ns.
    pub fn internal(self) -> f64 {
        self.value * self.unit.in_rad_per_ns()
    }

    pub fn to(self, unit: EnergyUnit) -> Energy {
        if unit == self.unit {
            return self;
        }
        Energy::new(self.internal() / unit.in_rad_per_ns(), unit)
    }

    /// Difference `self - other`; both must carry the same unit.
    pub fn checked_sub(self, other: Energy) -> Result<Energy> {
        if self.unit != other.unit {
            return Err(Error::UnitMismatch(self.unit, other.unit));
        }
        Ok(Energy::new(self.value - other.value, self.unit))
    }
}

impl fmt::Display for Energy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.value, self.unit)
    }
}

/// Parses `"<number> <unit>"`, e.g. `"-10 mT"` or `"16.8 K"`.
impl FromStr for Energy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let split =
            s.find(|c: char| c.is_whitespace()).ok_or_else(|| Error::InvalidParameter(format!("`{s}` has no unit")))?;
        let (number, unit) = s.split_at(split);
        let value: f64 = number.parse().map_err(|_| Error::InvalidParameter(format!("`{number}` is not a number")))?;
        Ok(Energy::new(value, unit.parse()?))
    }
}
