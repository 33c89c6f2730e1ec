// Copyright 2026 The radtrip Authors
// SPDX-License-Identifier: Apache-2.0

use crate::spin::{Manifold, Slot};
use crate::units::EnergyUnit;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid spin quantum number {0}: must be a non-negative half-integer")]
    InvalidSpin(f64),
    #[error("operator of dimension {actual} does not fit slot {slot:?} (expected {expected})")]
    SlotDimension { slot: Slot, expected: usize, actual: usize },
    #[error("the coupler slot has no support in manifold {0}")]
    CouplerOutsideTriplet(Manifold),
    #[error("unknown manifold `{0}`")]
    UnknownManifold(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("time grid must be non-empty and strictly increasing")]
    TimeGrid,
    #[error("frequency grid must be non-empty and strictly increasing")]
    FrequencyGrid,
    #[error("state integrity violated at t = {time} ns: {detail}")]
    Integrity { time: f64, detail: String },
    #[error("shifted Liouvillian is singular at omega = {omega} rad/ns (pivot ratio {pivot_ratio:e})")]
    SingularResolvent { omega: f64, pivot_ratio: f64 },
    #[error("orientation (theta = {theta}, phi = {phi}) failed: {source}")]
    Orientation {
        theta: f64,
        phi: f64,
        #[source]
        source: Box<Error>,
    },
    #[error("unknown state label `{0}`")]
    UnknownLabel(String),
    #[error("unknown energy unit `{0}`")]
    UnknownUnit(String),
    #[error("unit mismatch: {0} vs {1}")]
    UnitMismatch(EnergyUnit, EnergyUnit),
    #[error("energy table is missing label `{0}`")]
    MissingLabel(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("duplicate dihedral angle {0} deg")]
    DuplicateAngle(f64),
}

pub type Result<T> = std::result::Result<T, Error>;
