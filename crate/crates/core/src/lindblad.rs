// Copyright 2026 The radtrip Authors
// SPDX-License-Identifier: Apache-2.0

//! Jump operators, Lindblad dissipators and the Liouvillian.
//!
//! Superoperators act on the column-stacked density matrix, so
//! `vec(A ρ B) = (Bᵀ ⊗ A) vec(ρ)`. The commutator term is therefore
//! `−i (I ⊗ H − Hᵀ ⊗ I)`.
//!
//! Five incoherent channels, each with a single rate shared by all its
//! operators:
//!
//! 1. radical relaxation: s⁻, s⁺, s_z of each radical (3 + 3)
//! 2. triplet relaxation: the eight Gell-Mann matrices on the coupler (8)
//! 3. intersystem crossing S1 → T1, conserving S and M (7)
//! 4. triplet decay T1 → S0, conserving S and M (7)
//! 5. fluorescence S1 → S0 (4)

use nalgebra::DVector;

use crate::error::{Error, Result};
use crate::hamiltonian::{h_total, h_total_with_drive, ModelParams, Orientation};
use crate::spin::{coupled_states, embed, gell_mann_matrices, spin_matrices, CoupledState, Manifold, Slot};
use crate::{CMatrix, CVector, C64};

/// Incoherent rates in 1/ns.
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct RateParams {
    pub gamma_radical: f64,
    pub gamma_triplet: f64,
    pub k_st: f64,
    pub k_tg: f64,
    pub k_eg: f64,
}

impl RateParams {
    pub fn validate(&self) -> Result<()> {
        let all = [
            ("gamma_radical", self.gamma_radical),
            ("gamma_triplet", self.gamma_triplet),
            ("k_st", self.k_st),
            ("k_tg", self.k_tg),
            ("k_eg", self.k_eg),
        ];
        for (name, v) in all {
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::InvalidParameter(format!("rate {name} = {v} must be finite and >= 0")));
            }
        }
        Ok(())
    }
}

/// Incoherent process a jump set belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Channel {
    RadicalRelaxation(Slot),
    TripletRelaxation,
    IntersystemCrossing,
    TripletDecay,
    Fluorescence,
}

impl Channel {
    /// Process number 1..=5; both radicals share process 1.
    pub fn index(self) -> u8 {
        match self {
            Channel::RadicalRelaxation(_) => 1,
            Channel::TripletRelaxation => 2,
            Channel::IntersystemCrossing => 3,
            Channel::TripletDecay => 4,
            Channel::Fluorescence => 5,
        }
    }
}

/// Jump operators of one channel sharing a rate.
#[derive(Clone, Debug)]
pub struct JumpSet {
    pub channel: Channel,
    pub rate: f64,
    pub operators: Vec<CMatrix>,
}

impl JumpSet {
    pub fn len(&self) -> usize {
        self.operators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.operators.is_empty()
    }
}

pub fn radical_jump_ops(which: Slot, rate: f64) -> Result<JumpSet> {
    if which == Slot::Coupler {
        return Err(Error::InvalidParameter("radical relaxation needs a radical slot".into()));
    }
    let half = spin_matrices(0.5)?;
    let all = Manifold::ALL;
    let operators = vec![
        embed(&half.lowering(), which, &all)?,
        embed(&half.raising(), which, &all)?,
        embed(&half.sz, which, &all)?,
    ];
    Ok(JumpSet { channel: Channel::RadicalRelaxation(which), rate, operators })
}

pub fn triplet_jump_ops(rate: f64) -> JumpSet {
    let operators = gell_mann_matrices()
        .iter()
        .map(|l| embed(l, Slot::Coupler, &[Manifold::T1]).expect("3x3 on coupler"))
        .collect();
    JumpSet { channel: Channel::TripletRelaxation, rate, operators }
}

/// Rank-one transfers |S,M⟩_to⟨S,M|_from for every source state with a
/// matching target. Each target multiplet gets its own operator.
fn spin_conserving_transfers(from: &[CoupledState], to: &[CoupledState]) -> Vec<CMatrix> {
    let mut ops = Vec::new();
    for src in from {
        for dst in to {
            if dst.s_total == src.s_total && dst.m_total == src.m_total {
                ops.push(dst.outer(src));
            }
        }
    }
    ops
}

/// S1 → T1 intersystem crossing: the singlet feeds T1 |0,0⟩ and each
/// radical triplet |1,M⟩ feeds both T1 S=1 multiplets.
pub fn isc_ops(rate: f64) -> JumpSet {
    let from = coupled_states(Manifold::S1);
    let to = coupled_states(Manifold::T1);
    JumpSet { channel: Channel::IntersystemCrossing, rate, operators: spin_conserving_transfers(&from, &to) }
}

/// T1 → S0 decay; the S=2 multiplet has no partner in S0.
pub fn triplet_decay_ops(rate: f64) -> JumpSet {
    let from = coupled_states(Manifold::T1);
    let to = coupled_states(Manifold::S0);
    JumpSet { channel: Channel::TripletDecay, rate, operators: spin_conserving_transfers(&from, &to) }
}

pub fn fluorescence_ops(rate: f64) -> JumpSet {
    let from = coupled_states(Manifold::S1);
    let to = coupled_states(Manifold::S0);
    JumpSet { channel: Channel::Fluorescence, rate, operators: spin_conserving_transfers(&from, &to) }
}

/// All six jump sets in channel order.
pub fn all_jump_sets(rates: &RateParams) -> Vec<JumpSet> {
    vec![
        radical_jump_ops(Slot::Radical1, rates.gamma_radical).expect("radical slot"),
        radical_jump_ops(Slot::Radical2, rates.gamma_radical).expect("radical slot"),
        triplet_jump_ops(rates.gamma_triplet),
        isc_ops(rates.k_st),
        triplet_decay_ops(rates.k_tg),
        fluorescence_ops(rates.k_eg),
    ]
}

/// Dissipator superoperator of a list of operators sharing `rate`, for any
/// Hilbert dimension.
pub fn dissipator(operators: &[CMatrix], rate: f64) -> CMatrix {
    let n = operators.first().map_or(0, |l| l.nrows());
    let mut out = CMatrix::zeros(n * n, n * n);
    if rate == 0.0 {
        return out;
    }
    let id = CMatrix::identity(n, n);
    for l in operators {
        let ldl = l.adjoint() * l;
        out += l.conjugate().kronecker(l);
        out -= id.kronecker(&ldl) * C64::from(0.5);
        out -= ldl.transpose().kronecker(&id) * C64::from(0.5);
    }
    out * C64::from(rate)
}

pub fn lindblad_superop(set: &JumpSet) -> CMatrix {
    dissipator(&set.operators, set.rate)
}

/// −i (I ⊗ H − Hᵀ ⊗ I).
pub fn commutator_superop(h: &CMatrix) -> CMatrix {
    let n = h.nrows();
    let id = CMatrix::identity(n, n);
    (id.kronecker(h) - h.transpose().kronecker(&id)) * C64::new(0.0, -1.0)
}

/// Sum of all dissipators for the given rates (orientation independent).
pub fn total_dissipator(rates: &RateParams) -> CMatrix {
    all_jump_sets(rates)
        .iter()
        .map(lindblad_superop)
        .fold(CMatrix::zeros(crate::LIOUVILLE_DIM, crate::LIOUVILLE_DIM), |acc, d| acc + d)
}

/// The Liouvillian at one orientation and time.
#[derive(Clone, Debug)]
pub struct Liouvillian {
    pub matrix: CMatrix,
    pub orientation: Orientation,
    pub drive: f64,
}

impl Liouvillian {
    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    /// dρ/dt for a given state.
    pub fn apply(&self, rho: &CMatrix) -> CMatrix {
        let v = &self.matrix * vectorize(rho);
        devectorize(&v).expect("square Liouvillian")
    }
}

/// Builds Liouvillians for fixed parameters, reusing the dissipator.
#[derive(Clone, Debug)]
pub struct LiouvillianBuilder {
    params: ModelParams,
    dissipator: CMatrix,
    /// Commutator part of a unit drive; orientation independent.
    drive_generator: CMatrix,
}

impl LiouvillianBuilder {
    pub fn new(params: &ModelParams, rates: &RateParams) -> Result<Self> {
        params.validate()?;
        rates.validate()?;
        let z = Orientation::z();
        let unit_drive = h_total_with_drive(params, &z, 1.0) - h_total_with_drive(params, &z, 0.0);
        Ok(Self {
            params: params.clone(),
            dissipator: total_dissipator(rates),
            drive_generator: commutator_superop(&unit_drive),
        })
    }

    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    pub fn dissipator(&self) -> &CMatrix {
        &self.dissipator
    }

    /// `𝓛(V) − 𝓛(0)` for `V = 1`.
    pub fn drive_generator(&self) -> &CMatrix {
        &self.drive_generator
    }

    pub fn at_time(&self, orient: &Orientation, t: f64) -> Liouvillian {
        self.with_drive(orient, self.params.drive_at(t))
    }

    pub fn with_drive(&self, orient: &Orientation, drive: f64) -> Liouvillian {
        let h = h_total_with_drive(&self.params, orient, drive);
        Liouvillian { matrix: commutator_superop(&h) + &self.dissipator, orientation: *orient, drive }
    }
}

pub fn build_liouvillian(
    params: &ModelParams,
    rates: &RateParams,
    orient: &Orientation,
    t: f64,
) -> Result<Liouvillian> {
    params.validate()?;
    rates.validate()?;
    let h = h_total(params, orient, t);
    Ok(Liouvillian {
        matrix: commutator_superop(&h) + total_dissipator(rates),
        orientation: *orient,
        drive: params.drive_at(t),
    })
}

/// Column-stacking vectorization.
pub fn vectorize(rho: &CMatrix) -> CVector {
    DVector::from_column_slice(rho.as_slice())
}

pub fn devectorize(v: &CVector) -> Result<CMatrix> {
    let n = (v.len() as f64).sqrt().round() as usize;
    if n * n != v.len() {
        return Err(Error::Dimension(format!("vector of length {} is not a square matrix", v.len())));
    }
    Ok(CMatrix::from_column_slice(n, n, v.as_slice()))
}
