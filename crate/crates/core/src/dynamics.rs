// Copyright 2026 The radtrip Authors
// SPDX-License-Identifier: Apache-2.0

//! Density-matrix propagation and observables.
//!
//! The drive is piecewise constant, so every step between stored times is
//! split at the pulse edges and each piece is an exact matrix exponential of
//! the 400×400 generator. Propagators are cached by drive state and step.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use nalgebra::Matrix4;

use crate::error::{Error, Result};
use crate::hamiltonian::{ModelParams, Orientation};
use crate::linalg::{expm, hermitian_eigenvalues, hermiticity_residual};
use crate::lindblad::{devectorize, vectorize, LiouvillianBuilder, RateParams};
use crate::spin::{coupled_states, find_coupled_state, CompositeBasis, Manifold};
use crate::units::K_B_OVER_HBAR;
use crate::{CMatrix, CVector, C64, HILBERT_DIM};

pub const HERMITICITY_TOLERANCE: f64 = 1e-10;
pub const TRACE_TOLERANCE: f64 = 1e-9;
pub const MIN_EIGENVALUE_TOLERANCE: f64 = -1e-8;

/// Integrity measures of a density matrix.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Integrity {
    pub hermiticity: f64,
    pub trace_drift: f64,
    pub min_eigenvalue: f64,
}

impl Integrity {
    pub fn is_ok(&self) -> bool {
        self.hermiticity <= HERMITICITY_TOLERANCE
            && self.trace_drift <= TRACE_TOLERANCE
            && self.min_eigenvalue >= MIN_EIGENVALUE_TOLERANCE
    }
}

impl fmt::Display for Integrity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "hermiticity {:.3e}, trace drift {:.3e}, min eigenvalue {:.3e}",
            self.hermiticity, self.trace_drift, self.min_eigenvalue
        )
    }
}

/// A Hermitian, unit-trace state on the composite space.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix(CMatrix);

impl DensityMatrix {
    /// Validates against the integrity tolerances.
    pub fn new(m: CMatrix) -> Result<Self> {
        if m.nrows() != HILBERT_DIM || m.ncols() != HILBERT_DIM {
            return Err(Error::Dimension(format!("density matrix is {}x{}", m.nrows(), m.ncols())));
        }
        let rho = Self(m);
        let check = rho.integrity();
        if !check.is_ok() {
            return Err(Error::Integrity { time: 0.0, detail: check.to_string() });
        }
        Ok(rho)
    }

    pub(crate) fn from_matrix_unchecked(m: CMatrix) -> Self {
        Self(m)
    }

    /// Maximally mixed state on the whole space.
    pub fn maximally_mixed() -> Self {
        Self(CMatrix::identity(HILBERT_DIM, HILBERT_DIM) / C64::from(HILBERT_DIM as f64))
    }

    /// `|ψ⟩⟨ψ|` for a normalised vector.
    pub fn pure(psi: &CVector) -> Result<Self> {
        let n = psi.norm();
        if psi.len() != HILBERT_DIM || (n - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidParameter("pure state must be a unit 20-vector".into()));
        }
        Ok(Self(psi * psi.adjoint()))
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> CMatrix {
        self.0
    }

    pub fn trace(&self) -> f64 {
        self.0.trace().re
    }

    pub fn purity(&self) -> f64 {
        (&self.0 * &self.0).trace().re
    }

    pub fn integrity(&self) -> Integrity {
        Integrity {
            hermiticity: hermiticity_residual(&self.0),
            trace_drift: (self.0.trace() - C64::from(1.0)).norm(),
            min_eigenvalue: hermitian_eigenvalues(&self.0)[0],
        }
    }

    /// Population of a manifold.
    pub fn manifold_population(&self, manifold: Manifold) -> f64 {
        manifold.range().map(|i| self.0[(i, i)].re).sum()
    }
}

/// Radicals in the Heisenberg equilibrium of the ground manifold, S0 only.
/// `None` is infinite temperature, giving `I/4` on S0.
pub fn thermal_ground_state(params: &ModelParams, temperature_k: Option<f64>) -> Result<DensityMatrix> {
    let beta = match temperature_k {
        None => 0.0,
        Some(t) if t > 0.0 && t.is_finite() => 1.0 / (K_B_OVER_HBAR * t),
        Some(t) => return Err(Error::InvalidParameter(format!("temperature {t} K must be positive"))),
    };
    let states = coupled_states(Manifold::S0);
    // J0 s1·s2 is −3J0/4 on the singlet and J0/4 on the triplet.
    let energies: Vec<f64> =
        states.iter().map(|s| if s.s_total == 0 { -0.75 * params.j0 } else { 0.25 * params.j0 }).collect();
    let e_min = energies.iter().cloned().fold(f64::INFINITY, f64::min);
    let weights: Vec<f64> = energies.iter().map(|e| (-beta * (e - e_min)).exp()).collect();
    let z: f64 = weights.iter().sum();
    let mut rho = CMatrix::zeros(HILBERT_DIM, HILBERT_DIM);
    for (s, w) in states.iter().zip(&weights) {
        rho += s.outer(s) * C64::from(w / z);
    }
    DensityMatrix::new(rho)
}

fn validate_times(times: &[f64]) -> Result<()> {
    if times.is_empty() || times[0] < 0.0 || times.iter().any(|t| !t.is_finite()) {
        return Err(Error::TimeGrid);
    }
    if times.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::TimeGrid);
    }
    Ok(())
}

/// `n` equally spaced times from 0 to `t_end` inclusive.
pub fn uniform_times(t_end: f64, n: usize) -> Result<Vec<f64>> {
    if n < 2 || !(t_end > 0.0 && t_end.is_finite()) {
        return Err(Error::TimeGrid);
    }
    Ok((0..n).map(|i| t_end * i as f64 / (n - 1) as f64).collect())
}

/// Sorted union of a grid and extra times; points closer than `1e-12` ns
/// to an existing one are dropped.
pub fn merge_times(grid: &[f64], extra: &[f64]) -> Vec<f64> {
    let mut all: Vec<f64> = grid.iter().chain(extra).copied().collect();
    all.sort_by(f64::total_cmp);
    all.dedup_by(|b, a| (*b - *a).abs() < 1e-12);
    all
}

/// Stored states on a time grid.
#[derive(Clone, Debug)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<DensityMatrix>,
    pub orientation: Orientation,
    pub params: ModelParams,
    pub rates: RateParams,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// Index of the stored time nearest to `t`; ties go to the earlier point.
    pub fn nearest_index(&self, t: f64) -> usize {
        let mut best = 0;
        for (i, ti) in self.times.iter().enumerate() {
            if (ti - t).abs() < (self.times[best] - t).abs() {
                best = i;
            }
        }
        best
    }

    /// Worst integrity figures over all stored states.
    pub fn worst_integrity(&self) -> Integrity {
        let mut w = Integrity { hermiticity: 0.0, trace_drift: 0.0, min_eigenvalue: f64::INFINITY };
        for s in &self.states {
            let c = s.integrity();
            w.hermiticity = w.hermiticity.max(c.hermiticity);
            w.trace_drift = w.trace_drift.max(c.trace_drift);
            w.min_eigenvalue = w.min_eigenvalue.min(c.min_eigenvalue);
        }
        w
    }

    /// `⟨ψ|ρ(t)|ψ⟩` at every stored time.
    pub fn expectation_of_state(&self, psi: &CVector) -> Vec<f64> {
        self.states.iter().map(|s| psi.dotc(&(s.matrix() * psi)).re).collect()
    }
}

/// Propagator `exp(L dt)` keyed by drive state and step.
struct PropagatorCache<'a> {
    builder: &'a LiouvillianBuilder,
    orient: Orientation,
    cache: HashMap<(bool, i64), CMatrix>,
}

impl<'a> PropagatorCache<'a> {
    fn new(builder: &'a LiouvillianBuilder, orient: Orientation) -> Self {
        Self { builder, orient, cache: HashMap::new() }
    }

    fn step(&mut self, on: bool, dt: f64) -> &CMatrix {
        // Steps equal to 1e-15 ns share a propagator.
        let key = (on, (dt * 1e15).round() as i64);
        self.cache.entry(key).or_insert_with(|| {
            let drive = if on { self.builder.params().drive } else { 0.0 };
            let l = self.builder.with_drive(&self.orient, drive);
            expm(&(l.matrix * C64::from(dt)))
        })
    }

    /// Advances `v` from `t0` to `t1`, splitting at pulse edges.
    fn advance(&mut self, v: &CVector, t0: f64, t1: f64) -> CVector {
        let params = self.builder.params();
        let mut cuts = vec![t0];
        cuts.extend(params.switch_times_between(t0, t1));
        cuts.push(t1);
        let ons: Vec<bool> = cuts.windows(2).map(|w| params.pulse.is_on(w[0]) && params.drive != 0.0).collect();
        let mut out = v.clone();
        for (w, on) in cuts.windows(2).zip(ons) {
            let p = self.step(on, w[1] - w[0]);
            out = p * out;
        }
        out
    }
}

/// Propagates `rho0`, given at `t = 0`, and stores it at every grid time.
/// Any stored state outside the integrity tolerances aborts the run.
pub fn propagate(
    params: &ModelParams,
    rates: &RateParams,
    orient: &Orientation,
    rho0: &DensityMatrix,
    times: &[f64],
) -> Result<Trajectory> {
    validate_times(times)?;
    let builder = LiouvillianBuilder::new(params, rates)?;
    let mut cache = PropagatorCache::new(&builder, *orient);
    let mut v = vectorize(rho0.matrix());
    let mut t_prev = 0.0;
    let mut states = Vec::with_capacity(times.len());
    for &t in times {
        if t > t_prev {
            v = cache.advance(&v, t_prev, t);
        }
        t_prev = t;
        let rho = DensityMatrix::from_matrix_unchecked(devectorize(&v)?);
        let check = rho.integrity();
        if !check.is_ok() {
            return Err(Error::Integrity { time: t, detail: check.to_string() });
        }
        states.push(rho);
    }
    Ok(Trajectory { times: times.to_vec(), states, orientation: *orient, params: params.clone(), rates: *rates })
}

/// State at a single time `t ≥ 0`.
pub fn evolve_to(
    params: &ModelParams,
    rates: &RateParams,
    orient: &Orientation,
    rho0: &DensityMatrix,
    t: f64,
) -> Result<DensityMatrix> {
    let traj = propagate(params, rates, orient, rho0, &[t])?;
    Ok(traj.states.into_iter().next().expect("one stored state"))
}

/// Evolution under a constant generator of any dimension, stored at `times`
/// measured from the initial state.
pub fn propagate_generator(l: &CMatrix, rho0: &CMatrix, times: &[f64]) -> Result<Vec<CMatrix>> {
    validate_times(times)?;
    let mut v = vectorize(rho0);
    let mut t_prev = 0.0;
    let mut out = Vec::with_capacity(times.len());
    for &t in times {
        if t > t_prev {
            v = expm(&(l * C64::from(t - t_prev))) * v;
        }
        t_prev = t;
        out.push(devectorize(&v)?);
    }
    Ok(out)
}

/// A configuration of the two radicals, numbered 1..=4 as ↑↑, ↑↓, ↓↑, ↓↓.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RadicalConfig {
    UpUp,
    UpDown,
    DownUp,
    DownDown,
}

impl RadicalConfig {
    pub const ALL: [RadicalConfig; 4] =
        [RadicalConfig::UpUp, RadicalConfig::UpDown, RadicalConfig::DownUp, RadicalConfig::DownDown];

    /// Zero-based index into the 4×4 reduced matrix.
    pub fn index(self) -> usize {
        self as usize
    }

    pub fn number(self) -> usize {
        self.index() + 1
    }

    pub fn from_number(n: usize) -> Option<Self> {
        Self::ALL.get(n.checked_sub(1)?).copied()
    }

    pub fn symbol(self) -> &'static str {
        ["uu", "ud", "du", "dd"][self.index()]
    }
}

impl FromStr for RadicalConfig {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        if let Ok(n) = t.parse::<usize>() {
            return Self::from_number(n).ok_or_else(|| Error::UnknownLabel(s.to_string()));
        }
        Self::ALL.into_iter().find(|c| c.symbol() == t).ok_or_else(|| Error::UnknownLabel(s.to_string()))
    }
}

/// Two-radical reduced density matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct RadicalRdm(pub Matrix4<C64>);

impl RadicalRdm {
    pub fn element(&self, bra: RadicalConfig, ket: RadicalConfig) -> C64 {
        self.0[(bra.index(), ket.index())]
    }

    pub fn magnitudes(&self) -> [[f64; 4]; 4] {
        let mut out = [[0.0; 4]; 4];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, x) in row.iter_mut().enumerate() {
                *x = self.0[(i, j)].norm();
            }
        }
        out
    }

    pub fn trace(&self) -> f64 {
        self.0.trace().re
    }
}

/// Traces out the electronic manifold and the coupler.
pub fn reduce_to_radicals(rho: &DensityMatrix) -> RadicalRdm {
    let m = rho.matrix();
    let mut out = Matrix4::zeros();
    for r in 0..4 {
        for c in 0..4 {
            let mut acc = m[(Manifold::S0.offset() + r, Manifold::S0.offset() + c)]
                + m[(Manifold::S1.offset() + r, Manifold::S1.offset() + c)];
            for k in 0..3 {
                acc += m[(Manifold::T1.offset() + 3 * r + k, Manifold::T1.offset() + 3 * c + k)];
            }
            out[(r, c)] = acc;
        }
    }
    RadicalRdm(out)
}

/// `⟨bra|RDM(t)|ket⟩` at every stored time.
pub fn coherence_trace(traj: &Trajectory, bra: RadicalConfig, ket: RadicalConfig) -> Vec<C64> {
    traj.states.iter().map(|s| reduce_to_radicals(s).element(bra, ket)).collect()
}

/// A T1 state, either a product state or a coupled total-spin state.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum T1Label {
    /// Projections of (radical1, coupler, radical2), radicals doubled.
    Product { two_m1: i8, coupler_m: i8, two_m2: i8 },
    /// `|S, M⟩` with radical-pair spin `s12`.
    Coupled { s: u32, m: i32, s12: u32 },
}

impl T1Label {
    pub fn vector(&self) -> Result<CVector> {
        match *self {
            T1Label::Product { two_m1, coupler_m, two_m2 } => {
                let idx = CompositeBasis::index_of(Manifold::T1, two_m1, two_m2, Some(coupler_m))
                    .ok_or_else(|| Error::UnknownLabel(self.to_string()))?;
                Ok(crate::spin::basis_vector(idx))
            }
            T1Label::Coupled { s, m, s12 } => find_coupled_state(Manifold::T1, s, m, s12)
                .map(|c| c.amplitudes)
                .ok_or_else(|| Error::UnknownLabel(self.to_string())),
        }
    }
}

fn half_label(two_m: i8) -> String {
    match two_m {
        1 => "1/2".into(),
        -1 => "-1/2".into(),
        other => format!("{other}/2"),
    }
}

impl fmt::Display for T1Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            T1Label::Product { two_m1, coupler_m, two_m2 } => {
                write!(f, "{},{},{}", half_label(two_m1), coupler_m, half_label(two_m2))
            }
            T1Label::Coupled { s, m, s12 } => write!(f, "S={s},M={m},s12={s12}"),
        }
    }
}

fn parse_half(s: &str) -> Option<i8> {
    match s.trim() {
        "1/2" | "+1/2" => Some(1),
        "-1/2" => Some(-1),
        _ => None,
    }
}

/// Accepts `"1/2,1,-1/2"` (radical1, coupler, radical2) or
/// `"S=1,M=0,s12=1"`.
impl FromStr for T1Label {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::UnknownLabel(s.to_string());
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        if parts.len() != 3 {
            return Err(bad());
        }
        if parts[0].starts_with("S=") {
            let value = |p: &str, key: &str| -> Result<i64> {
                p.strip_prefix(key).and_then(|v| v.parse().ok()).ok_or_else(bad)
            };
            let s_tot = value(parts[0], "S=")?;
            let m = value(parts[1], "M=")?;
            let s12 = value(parts[2], "s12=")?;
            if s_tot < 0 || s12 < 0 {
                return Err(bad());
            }
            let label = T1Label::Coupled { s: s_tot as u32, m: m as i32, s12: s12 as u32 };
            label.vector()?;
            return Ok(label);
        }
        let two_m1 = parse_half(parts[0]).ok_or_else(bad)?;
        let coupler_m: i8 = parts[1].parse().map_err(|_| bad())?;
        let two_m2 = parse_half(parts[2]).ok_or_else(bad)?;
        let label = T1Label::Product { two_m1, coupler_m, two_m2 };
        label.vector()?;
        Ok(label)
    }
}

/// Population of a T1 state at every stored time.
pub fn population_trace(traj: &Trajectory, label: &T1Label) -> Result<Vec<f64>> {
    Ok(traj.expectation_of_state(&label.vector()?))
}

/// Reduced state at the stored time nearest to a requested time.
#[derive(Clone, Debug)]
pub struct Tomography {
    pub requested: f64,
    pub time: f64,
    pub rdm: RadicalRdm,
}

impl Tomography {
    pub fn magnitudes(&self) -> [[f64; 4]; 4] {
        self.rdm.magnitudes()
    }
}

pub fn tomography_snapshot(traj: &Trajectory, t: f64) -> Tomography {
    let i = traj.nearest_index(t);
    Tomography { requested: t, time: traj.times[i], rdm: reduce_to_radicals(&traj.states[i]) }
}
