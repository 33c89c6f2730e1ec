// Copyright 2026 The radtrip Authors
// SPDX-License-Identifier: Apache-2.0

//! Exchange couplings from total energies of spin configurations.
//!
//! Configurations, written radical1 · coupler · radical2:
//! `a = ↑⇑↑`, `b = ↑⇑↓`, `c = ↓⇑↓`, `d = ↓⇑↑`, plus the radical-pair
//! `triplet` and `broken_symmetry` solutions of the ground state.
//!
//! With `ΔE_ij = E_i − E_j`:
//!
//! ```text
//! J0 = 2 (E_triplet − E_bs)
//! J1 = (ΔE_ac + ΔE_bd) / 2
//! J2 = (ΔE_ac − ΔE_bd) / 2
//! J3 = ΔE_cd + ΔE_ab
//! ```
//!
//! A positive coupling is antiferromagnetic, a negative one ferromagnetic.
//!
//! Text input, one record per line, `#` starts a comment:
//!
//! ```text
//! molecule  biradical-1
//! dihedral  60
//! a         -1234.567890  Ha
//! triplet   -1234.512345  Ha
//! ```
//!
//! The tabular variant has a header such as
//! `angle_deg a[K] b[K] c[K] d[K] triplet[K] broken_symmetry[K]` and one
//! row per dihedral angle; columns may be separated by commas or spaces.

use std::collections::BTreeMap;
use std::fmt;
use std::io::{self, Write};
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::units::{Energy, EnergyUnit};

/// Default ratio `|J3| / |J0|` below which J3 is reported as negligible.
pub const J3_NEGLIGIBLE_RATIO: f64 = 1e-3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ConfigLabel {
    A,
    B,
    C,
    D,
    Triplet,
    BrokenSymmetry,
}

impl ConfigLabel {
    pub const ALL: [ConfigLabel; 6] = [
        ConfigLabel::A,
        ConfigLabel::B,
        ConfigLabel::C,
        ConfigLabel::D,
        ConfigLabel::Triplet,
        ConfigLabel::BrokenSymmetry,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ConfigLabel::A => "a",
            ConfigLabel::B => "b",
            ConfigLabel::C => "c",
            ConfigLabel::D => "d",
            ConfigLabel::Triplet => "triplet",
            ConfigLabel::BrokenSymmetry => "broken_symmetry",
        }
    }
}

impl fmt::Display for ConfigLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ConfigLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "a" | "A" => Ok(ConfigLabel::A),
            "b" | "B" => Ok(ConfigLabel::B),
            "c" | "C" => Ok(ConfigLabel::C),
            "d" | "D" => Ok(ConfigLabel::D),
            "triplet" | "T" | "hs" => Ok(ConfigLabel::Triplet),
            "broken_symmetry" | "bs" | "BS" => Ok(ConfigLabel::BrokenSymmetry),
            other => Err(Error::UnknownLabel(other.to_string())),
        }
    }
}

/// Labelled total energies with optional metadata.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct EnergyTable {
    pub entries: BTreeMap<ConfigLabel, Energy>,
    pub dihedral_deg: Option<f64>,
    pub molecule: Option<String>,
}

impl EnergyTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, label: ConfigLabel, energy: Energy) -> Self {
        self.entries.insert(label, energy);
        self
    }

    pub fn with_dihedral(mut self, deg: f64) -> Self {
        self.dihedral_deg = Some(deg);
        self
    }

    pub fn get(&self, label: ConfigLabel) -> Result<Energy> {
        self.entries.get(&label).copied().ok_or_else(|| Error::MissingLabel(label.to_string()))
    }

    pub fn has(&self, labels: &[ConfigLabel]) -> bool {
        labels.iter().all(|l| self.entries.contains_key(l))
    }

    /// Every entry converted to `unit`.
    pub fn to_unit(&self, unit: EnergyUnit) -> EnergyTable {
        EnergyTable {
            entries: self.entries.iter().map(|(k, e)| (*k, e.to(unit))).collect(),
            dihedral_deg: self.dihedral_deg,
            molecule: self.molecule.clone(),
        }
    }

    /// Parses the line format; see the module docs.
    pub fn parse(text: &str) -> Result<EnergyTable> {
        let mut table = EnergyTable::new();
        for (k, raw) in text.lines().enumerate() {
            let line_no = k + 1;
            let line = strip_comment(raw);
            if line.is_empty() {
                continue;
            }
            let err = |message: String| Error::Parse { line: line_no, message };
            let mut parts = line.split_whitespace();
            let key = parts.next().expect("non-empty line");
            let rest: Vec<&str> = parts.collect();
            match key {
                "molecule" => {
                    if rest.is_empty() {
                        return Err(err("molecule needs a name".into()));
                    }
                    table.molecule = Some(rest.join(" "));
                }
                "dihedral" | "dihedral_deg" => {
                    let [v] = rest[..] else {
                        return Err(err("expected `dihedral <degrees>`".into()));
                    };
                    let deg = v.parse::<f64>().map_err(|_| err(format!("`{v}` is not a number")))?;
                    table.dihedral_deg = Some(deg);
                }
                label => {
                    let label: ConfigLabel =
                        label.parse().map_err(|_| err(format!("unknown configuration label `{label}`")))?;
                    let [value, unit] = rest[..] else {
                        return Err(err(format!("expected `{label} <value> <unit>`")));
                    };
                    let value = value.parse::<f64>().map_err(|_| err(format!("`{value}` is not a number")))?;
                    if !value.is_finite() {
                        return Err(err(format!("energy of `{label}` is not finite")));
                    }
                    let unit: EnergyUnit = unit.parse().map_err(|_| err(format!("unknown unit `{unit}`")))?;
                    if table.entries.insert(label, Energy::new(value, unit)).is_some() {
                        return Err(err(format!("duplicate label `{label}`")));
                    }
                }
            }
        }
        Ok(table)
    }

    pub fn write<W: Write>(&self, mut w: W) -> io::Result<()> {
        if let Some(m) = &self.molecule {
            writeln!(w, "molecule {m}")?;
        }
        if let Some(d) = self.dihedral_deg {
            writeln!(w, "dihedral {d}")?;
        }
        for (label, e) in &self.entries {
            writeln!(w, "{label} {:.17e} {}", e.value, e.unit)?;
        }
        Ok(())
    }
}

fn strip_comment(raw: &str) -> &str {
    raw.split('#').next().unwrap_or("").trim()
}

/// Parses the tabular multi-angle format; see the module docs.
pub fn parse_energy_scan(text: &str) -> Result<Vec<EnergyTable>> {
    let mut header: Option<Vec<(ConfigLabel, EnergyUnit)>> = None;
    let mut tables = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let line_no = k + 1;
        let line = strip_comment(raw);
        if line.is_empty() {
            continue;
        }
        let err = |message: String| Error::Parse { line: line_no, message };
        let fields: Vec<&str> = line.split(|c: char| c == ',' || c.is_whitespace()).filter(|f| !f.is_empty()).collect();
        match &header {
            None => {
                if fields.first() != Some(&"angle_deg") {
                    return Err(err("header must start with `angle_deg`".into()));
                }
                let mut cols = Vec::new();
                for f in &fields[1..] {
                    let (name, unit) = f
                        .strip_suffix(']')
                        .and_then(|s| s.split_once('['))
                        .ok_or_else(|| err(format!("column `{f}` must look like `label[unit]`")))?;
                    let label: ConfigLabel = name.parse().map_err(|_| err(format!("unknown label `{name}`")))?;
                    let unit: EnergyUnit = unit.parse().map_err(|_| err(format!("unknown unit `{unit}`")))?;
                    if cols.iter().any(|(l, _)| *l == label) {
                        return Err(err(format!("duplicate column `{label}`")));
                    }
                    cols.push((label, unit));
                }
                header = Some(cols);
            }
            Some(cols) => {
                if fields.len() != cols.len() + 1 {
                    return Err(err(format!("expected {} fields, found {}", cols.len() + 1, fields.len())));
                }
                let number = |s: &str| -> Result<f64> {
                    s.parse::<f64>()
                        .ok()
                        .filter(|v| v.is_finite())
                        .ok_or_else(|| err(format!("`{s}` is not a finite number")))
                };
                let mut table = EnergyTable::new().with_dihedral(number(fields[0])?);
                for ((label, unit), f) in cols.iter().zip(&fields[1..]) {
                    table.entries.insert(*label, Energy::new(number(f)?, *unit));
                }
                tables.push(table);
            }
        }
    }
    if header.is_none() {
        return Err(Error::Parse { line: 0, message: "no header line".into() });
    }
    Ok(tables)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Alignment {
    Antiferromagnetic,
    Ferromagnetic,
    Zero,
}

impl Alignment {
    pub fn of(j: f64) -> Self {
        if j > 0.0 {
            Alignment::Antiferromagnetic
        } else if j < 0.0 {
            Alignment::Ferromagnetic
        } else {
            Alignment::Zero
        }
    }

    pub fn abbrev(self) -> &'static str {
        match self {
            Alignment::Antiferromagnetic => "AFM",
            Alignment::Ferromagnetic => "FM",
            Alignment::Zero => "none",
        }
    }
}

/// A unit-tagged coupling with its sign classification.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Coupling {
    pub value: Energy,
    pub alignment: Alignment,
}

impl Coupling {
    pub fn new(value: Energy) -> Self {
        Self { value, alignment: Alignment::of(value.value) }
    }
}

/// `J0 = 2 (E_triplet − E_bs)`; both energies must share a unit.
pub fn j0_from_energies(e_triplet: Energy, e_bs: Energy) -> Result<Energy> {
    let d = e_triplet.checked_sub(e_bs)?;
    Ok(Energy::new(2.0 * d.value, d.unit))
}

/// `(J1, J2, J3)` from the four configuration energies of `table`, all in
/// one unit.
pub fn j123_from_energies(table: &EnergyTable) -> Result<(Energy, Energy, Energy)> {
    let a = table.get(ConfigLabel::A)?;
    let b = table.get(ConfigLabel::B)?;
    let c = table.get(ConfigLabel::C)?;
    let d = table.get(ConfigLabel::D)?;
    let ac = a.checked_sub(c)?;
    let bd = b.checked_sub(d)?;
    let cd = c.checked_sub(d)?;
    let ab = a.checked_sub(b)?;
    let unit = ac.unit;
    Ok((
        Energy::new((ac.value + bd.value) / 2.0, unit),
        Energy::new((ac.value - bd.value) / 2.0, unit),
        Energy::new(cd.value + ab.value, unit),
    ))
}

/// Mirror-symmetric radicals (`E_b = E_d`): `J1 = J2 = ΔE_ac/2` and
/// `J3 = ΔE_cb + ΔE_ab`.
pub fn j_symmetric(ea: Energy, eb: Energy, ec: Energy) -> Result<(Energy, Energy)> {
    let ac = ea.checked_sub(ec)?;
    let cb = ec.checked_sub(eb)?;
    let ab = ea.checked_sub(eb)?;
    Ok((Energy::new(ac.value / 2.0, ac.unit), Energy::new(cb.value + ab.value, ac.unit)))
}

/// Every coupling the table supports, in one output unit.
#[derive(Clone, Debug, PartialEq)]
pub struct ExchangeResult {
    pub dihedral_deg: Option<f64>,
    pub unit: EnergyUnit,
    pub j0: Option<Coupling>,
    pub j1: Option<Coupling>,
    pub j2: Option<Coupling>,
    pub j3: Option<Coupling>,
    /// `|J3| < ratio·|J0|`, when both are known.
    pub j3_negligible: Option<bool>,
}

/// Converts every energy to `unit` and extracts what the labels allow.
/// Fails only when neither J0 nor J1..J3 can be formed.
pub fn extract(table: &EnergyTable, unit: EnergyUnit, j3_ratio: f64) -> Result<ExchangeResult> {
    let t = table.to_unit(unit);
    let j0 = if t.has(&[ConfigLabel::Triplet, ConfigLabel::BrokenSymmetry]) {
        Some(Coupling::new(j0_from_energies(t.get(ConfigLabel::Triplet)?, t.get(ConfigLabel::BrokenSymmetry)?)?))
    } else {
        None
    };
    let (j1, j2, j3) = if t.has(&[ConfigLabel::A, ConfigLabel::B, ConfigLabel::C, ConfigLabel::D]) {
        let (j1, j2, j3) = j123_from_energies(&t)?;
        (Some(Coupling::new(j1)), Some(Coupling::new(j2)), Some(Coupling::new(j3)))
    } else {
        (None, None, None)
    };
    if j0.is_none() && j1.is_none() {
        let missing =
            ConfigLabel::ALL.iter().find(|l| !t.entries.contains_key(l)).map(|l| l.to_string()).unwrap_or_default();
        return Err(Error::MissingLabel(missing));
    }
    let j3_negligible = match (j0, j3) {
        (Some(j0), Some(j3)) => Some(j3.value.value.abs() < j3_ratio * j0.value.value.abs()),
        _ => None,
    };
    Ok(ExchangeResult { dihedral_deg: table.dihedral_deg, unit, j0, j1, j2, j3, j3_negligible })
}

/// Per-angle results plus a monotonicity flag for `|J1|`.
#[derive(Clone, Debug, PartialEq)]
pub struct ScanReport {
    pub rows: Vec<ExchangeResult>,
    /// `Some(true)` when `|J1|` never increases with the angle.
    pub j1_magnitude_non_increasing: Option<bool>,
}

/// Extracts every table, sorted by dihedral angle. Angles must be present
/// and distinct.
pub fn scan_process(tables: &[EnergyTable], unit: EnergyUnit, j3_ratio: f64) -> Result<ScanReport> {
    let mut rows = tables
        .iter()
        .map(|t| {
            t.dihedral_deg.ok_or_else(|| Error::InvalidParameter("energy table without a dihedral angle".into()))?;
            extract(t, unit, j3_ratio)
        })
        .collect::<Result<Vec<_>>>()?;
    rows.sort_by(|a, b| a.dihedral_deg.unwrap().total_cmp(&b.dihedral_deg.unwrap()));
    for w in rows.windows(2) {
        if w[0].dihedral_deg == w[1].dihedral_deg {
            return Err(Error::DuplicateAngle(w[0].dihedral_deg.unwrap()));
        }
    }
    let mags: Option<Vec<f64>> = rows.iter().map(|r| r.j1.map(|j| j.value.value.abs())).collect();
    let j1_magnitude_non_increasing = mags.filter(|m| m.len() > 1).map(|m| m.windows(2).all(|w| w[1] <= w[0]));
    Ok(ScanReport { rows, j1_magnitude_non_increasing })
}

/// Writes one CSV row per result.
pub fn write_exchange_csv<W: Write>(
    mut w: W,
    rows: &[ExchangeResult],
    unit: EnergyUnit,
    header: &[String],
) -> io::Result<()> {
    for line in header {
        writeln!(w, "# {line}")?;
    }
    let u = unit.symbol();
    writeln!(w, "angle_deg,J0[{u}],J1[{u}],J2[{u}],J3[{u}],J0_class,J1_class,J2_class,J3_class,J3_negligible")?;
    let value = |c: Option<Coupling>| c.map_or("NA".to_string(), |c| format!("{:.12e}", c.value.value));
    let class = |c: Option<Coupling>| c.map_or("NA", |c| c.alignment.abbrev());
    for r in rows {
        let angle = r.dihedral_deg.map_or("NA".to_string(), |a| format!("{a}"));
        let negligible = r.j3_negligible.map_or("NA".to_string(), |b| b.to_string());
        writeln!(
            w,
            "{angle},{},{},{},{},{},{},{},{},{negligible}",
            value(r.j0),
            value(r.j1),
            value(r.j2),
            value(r.j3),
            class(r.j0),
            class(r.j1),
            class(r.j2),
            class(r.j3)
        )?;
    }
    Ok(())
}
