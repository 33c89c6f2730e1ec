// Copyright 2026 The radtrip Authors
// SPDX-License-Identifier: Apache-2.0

//! Spin-operator algebra and the composite 20-dimensional basis.
//!
//! Basis layout (fixed, shared by every module):
//!
//! | index  | manifold | product order                      |
//! |--------|----------|------------------------------------|
//! | 0..4   | S0       | radical1 ⊗ radical2                |
//! | 4..8   | S1       | radical1 ⊗ radical2                |
//! | 8..20  | T1       | radical1 ⊗ radical2 ⊗ coupler      |
//!
//! Every factor is ordered by descending projection (m = s … −s), so inside
//! S0 the states are ↑↑, ↑↓, ↓↑, ↓↓ and inside T1 the coupler index runs
//! fastest (+1, 0, −1).
//!
//! Coupled states of T1 couple radical1 with radical2 first (intermediate
//! spin `s12`), then with the coupler spin 1. Clebsch–Gordan coefficients use
//! the Condon–Shortley phase convention.

use std::fmt;
use std::ops::Range;
use std::str::FromStr;

use nalgebra::DVector;

use crate::error::{Error, Result};
use crate::{CMatrix, CVector, C64, HILBERT_DIM};

/// Cartesian spin operators in the |s, m⟩ basis, m = s … −s, ħ = 1.
#[derive(Clone, Debug)]
pub struct SpinOps {
    pub sx: CMatrix,
    pub sy: CMatrix,
    pub sz: CMatrix,
}

impl SpinOps {
    pub fn dim(&self) -> usize {
        self.sz.nrows()
    }

    pub fn raising(&self) -> CMatrix {
        &self.sx + &self.sy * C64::i()
    }

    pub fn lowering(&self) -> CMatrix {
        &self.sx - &self.sy * C64::i()
    }

    /// sx² + sy² + sz².
    pub fn casimir(&self) -> CMatrix {
        &self.sx * &self.sx + &self.sy * &self.sy + &self.sz * &self.sz
    }

    /// Projection `n · s` onto a (not necessarily unit) direction.
    pub fn along(&self, n: [f64; 3]) -> CMatrix {
        &self.sx * C64::from(n[0]) + &self.sy * C64::from(n[1]) + &self.sz * C64::from(n[2])
    }

    /// Component-wise sum of two operator triples on the same space.
    pub fn sum(&self, other: &SpinOps) -> SpinOps {
        SpinOps { sx: &self.sx + &other.sx, sy: &self.sy + &other.sy, sz: &self.sz + &other.sz }
    }
}

pub fn spin_matrices(s: f64) -> Result<SpinOps> {
    let two_s = 2.0 * s;
    if !s.is_finite() || s < 0.0 || (two_s - two_s.round()).abs() > 1e-12 {
        return Err(Error::InvalidSpin(s));
    }
    let n = two_s.round() as usize + 1;
    let mut sz = CMatrix::zeros(n, n);
    let mut sp = CMatrix::zeros(n, n);
    for k in 0..n {
        let m = s - k as f64;
        sz[(k, k)] = C64::from(m);
        if k > 0 {
            sp[(k - 1, k)] = C64::from((s * (s + 1.0) - m * (m + 1.0)).sqrt());
        }
    }
    let sm = sp.adjoint();
    let sx = (&sp + &sm) * C64::from(0.5);
    let sy = (&sp - &sm) * C64::new(0.0, -0.5);
    Ok(SpinOps { sx, sy, sz })
}

/// The eight Gell-Mann matrices λ₁…λ₈, normalised to Tr(λᵢλⱼ) = 2δᵢⱼ.
pub fn gell_mann_matrices() -> Vec<CMatrix> {
    let r = |v: f64| C64::from(v);
    let i = |v: f64| C64::new(0.0, v);
    let z = C64::from(0.0);
    let s3 = 1.0 / 3f64.sqrt();
    let build = |e: [C64; 9]| CMatrix::from_row_slice(3, 3, &e);
    vec![
        build([z, r(1.), z, r(1.), z, z, z, z, z]),
        build([z, i(-1.), z, i(1.), z, z, z, z, z]),
        build([r(1.), z, z, z, r(-1.), z, z, z, z]),
        build([z, z, r(1.), z, z, z, r(1.), z, z]),
        build([z, z, i(-1.), z, z, z, i(1.), z, z]),
        build([z, z, z, z, z, r(1.), z, r(1.), z]),
        build([z, z, z, z, z, i(-1.), z, i(1.), z]),
        build([r(s3), z, z, z, r(s3), z, z, z, r(-2. * s3)]),
    ]
}

/// Electronic manifold of the coupler.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Manifold {
    S0,
    S1,
    T1,
}

impl Manifold {
    pub const ALL: [Manifold; 3] = [Manifold::S0, Manifold::S1, Manifold::T1];

    pub fn dim(self) -> usize {
        match self {
            Manifold::S0 | Manifold::S1 => 4,
            Manifold::T1 => 12,
        }
    }

    pub fn offset(self) -> usize {
        match self {
            Manifold::S0 => 0,
            Manifold::S1 => 4,
            Manifold::T1 => 8,
        }
    }

    pub fn range(self) -> Range<usize> {
        self.offset()..self.offset() + self.dim()
    }

    pub fn of_index(index: usize) -> Option<Manifold> {
        Manifold::ALL.into_iter().find(|m| m.range().contains(&index))
    }
}

impl fmt::Display for Manifold {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Manifold::S0 => "S0",
            Manifold::S1 => "S1",
            Manifold::T1 => "T1",
        };
        f.write_str(s)
    }
}

impl FromStr for Manifold {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "S0" | "s0" => Ok(Manifold::S0),
            "S1" | "s1" => Ok(Manifold::S1),
            "T1" | "t1" | "T" => Ok(Manifold::T1),
            other => Err(Error::UnknownManifold(other.to_string())),
        }
    }
}

/// Tensor factor an operator acts on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Slot {
    Radical1,
    Radical2,
    Coupler,
}

impl Slot {
    pub fn dim(self) -> usize {
        match self {
            Slot::Radical1 | Slot::Radical2 => 2,
            Slot::Coupler => 3,
        }
    }
}

/// One product state of the composite basis. Projections are stored doubled
/// for the radicals and plain for the coupler.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BasisState {
    pub manifold: Manifold,
    pub two_m1: i8,
    pub two_m2: i8,
    pub coupler_m: Option<i8>,
}

impl BasisState {
    /// Twice the total Sz projection.
    pub fn two_m_total(&self) -> i32 {
        self.two_m1 as i32 + self.two_m2 as i32 + 2 * self.coupler_m.unwrap_or(0) as i32
    }

    /// Index 0..4 of the radical configuration ↑↑, ↑↓, ↓↑, ↓↓.
    pub fn radical_index(&self) -> usize {
        radical_config_index(self.two_m1, self.two_m2)
    }
}

fn radical_config_index(two_m1: i8, two_m2: i8) -> usize {
    let i1 = usize::from(two_m1 < 0);
    let i2 = usize::from(two_m2 < 0);
    2 * i1 + i2
}

fn coupler_index(m: i8) -> usize {
    (1 - m) as usize
}

/// The fixed global ordering of the 20 product states.
#[derive(Clone, Debug)]
pub struct CompositeBasis {
    states: Vec<BasisState>,
}

impl Default for CompositeBasis {
    fn default() -> Self {
        Self::new()
    }
}

impl CompositeBasis {
    pub fn new() -> Self {
        let mut states = Vec::with_capacity(HILBERT_DIM);
        for manifold in Manifold::ALL {
            for two_m1 in [1i8, -1] {
                for two_m2 in [1i8, -1] {
                    if manifold == Manifold::T1 {
                        for mc in [1i8, 0, -1] {
                            states.push(BasisState { manifold, two_m1, two_m2, coupler_m: Some(mc) });
                        }
                    } else {
                        states.push(BasisState { manifold, two_m1, two_m2, coupler_m: None });
                    }
                }
            }
        }
        Self { states }
    }

    pub fn dim(&self) -> usize {
        self.states.len()
    }

    pub fn states(&self) -> &[BasisState] {
        &self.states
    }

    pub fn state(&self, index: usize) -> &BasisState {
        &self.states[index]
    }

    /// Global index of a product state, `None` when the combination does not
    /// exist (e.g. a coupler projection outside T1).
    pub fn index_of(manifold: Manifold, two_m1: i8, two_m2: i8, coupler_m: Option<i8>) -> Option<usize> {
        if two_m1.abs() != 1 || two_m2.abs() != 1 {
            return None;
        }
        let r = radical_config_index(two_m1, two_m2);
        match (manifold, coupler_m) {
            (Manifold::T1, Some(mc)) if (-1..=1).contains(&mc) => Some(manifold.offset() + 3 * r + coupler_index(mc)),
            (Manifold::S0 | Manifold::S1, None) => Some(manifold.offset() + r),
            _ => None,
        }
    }
}

/// Embeds `op` on `slot` (identity on the other factors) into the listed
/// manifolds; all other blocks are zero.
pub fn embed(op: &CMatrix, slot: Slot, manifolds: &[Manifold]) -> Result<CMatrix> {
    if op.nrows() != op.ncols() || op.nrows() != slot.dim() {
        return Err(Error::SlotDimension { slot, expected: slot.dim(), actual: op.nrows() });
    }
    let i2 = CMatrix::identity(2, 2);
    let i3 = CMatrix::identity(3, 3);
    let mut out = CMatrix::zeros(HILBERT_DIM, HILBERT_DIM);
    for &manifold in manifolds {
        let block = match (manifold, slot) {
            (Manifold::T1, Slot::Radical1) => op.kronecker(&i2).kronecker(&i3),
            (Manifold::T1, Slot::Radical2) => i2.kronecker(op).kronecker(&i3),
            (Manifold::T1, Slot::Coupler) => i2.kronecker(&i2).kronecker(op),
            (m, Slot::Coupler) => return Err(Error::CouplerOutsideTriplet(m)),
            (_, Slot::Radical1) => op.kronecker(&i2),
            (_, Slot::Radical2) => i2.kronecker(op),
        };
        let d = manifold.dim();
        let o = manifold.offset();
        out.view_mut((o, o), (d, d)).copy_from(&block);
    }
    Ok(out)
}

/// Embeds each component of a spin-operator triple.
pub fn embed_ops(ops: &SpinOps, slot: Slot, manifolds: &[Manifold]) -> Result<SpinOps> {
    Ok(SpinOps {
        sx: embed(&ops.sx, slot, manifolds)?,
        sy: embed(&ops.sy, slot, manifolds)?,
        sz: embed(&ops.sz, slot, manifolds)?,
    })
}

/// Total spin on the 20-dimensional space: s₁ + s₂ everywhere plus the
/// coupler spin inside T1.
pub fn total_spin_ops() -> SpinOps {
    let half = spin_matrices(0.5).expect("spin 1/2");
    let one = spin_matrices(1.0).expect("spin 1");
    let all = Manifold::ALL;
    let r1 = embed_ops(&half, Slot::Radical1, &all).expect("radical slot");
    let r2 = embed_ops(&half, Slot::Radical2, &all).expect("radical slot");
    let c = embed_ops(&one, Slot::Coupler, &[Manifold::T1]).expect("coupler slot");
    r1.sum(&r2).sum(&c)
}

fn factorial(n: i32) -> f64 {
    (1..=n).fold(1.0, |acc, k| acc * k as f64)
}

/// ⟨j₁ m₁; j₂ m₂ | J M⟩ with all arguments doubled (Condon–Shortley phase).
pub fn clebsch_gordan(two_j1: i32, two_m1: i32, two_j2: i32, two_m2: i32, two_j: i32, two_m: i32) -> f64 {
    if two_m1 + two_m2 != two_m
        || two_m1.abs() > two_j1
        || two_m2.abs() > two_j2
        || two_m.abs() > two_j
        || two_j > two_j1 + two_j2
        || two_j < (two_j1 - two_j2).abs()
        || (two_j1 + two_m1) % 2 != 0
        || (two_j2 + two_m2) % 2 != 0
        || (two_j + two_m) % 2 != 0
        || (two_j1 + two_j2 + two_j) % 2 != 0
    {
        return 0.0;
    }
    let h = |x: i32| x / 2;
    let pre = ((two_j + 1) as f64
        * factorial(h(two_j + two_j1 - two_j2))
        * factorial(h(two_j - two_j1 + two_j2))
        * factorial(h(two_j1 + two_j2 - two_j))
        / factorial(h(two_j1 + two_j2 + two_j) + 1))
    .sqrt();
    let norm = (factorial(h(two_j + two_m))
        * factorial(h(two_j - two_m))
        * factorial(h(two_j1 - two_m1))
        * factorial(h(two_j1 + two_m1))
        * factorial(h(two_j2 - two_m2))
        * factorial(h(two_j2 + two_m2)))
    .sqrt();
    let mut sum = 0.0;
    for k in 0..=h(two_j1 + two_j2 + two_j) {
        let args = [
            k,
            h(two_j1 + two_j2 - two_j) - k,
            h(two_j1 - two_m1) - k,
            h(two_j2 + two_m2) - k,
            h(two_j - two_j2 + two_m1) + k,
            h(two_j - two_j1 - two_m2) + k,
        ];
        if args.iter().any(|&a| a < 0) {
            continue;
        }
        let denom: f64 = args.iter().map(|&a| factorial(a)).product();
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        sum += sign / denom;
    }
    pre * norm * sum
}

/// A total-spin eigenstate |S, M⟩ inside one manifold.
#[derive(Clone, Debug)]
pub struct CoupledState {
    pub manifold: Manifold,
    /// Total spin S.
    pub s_total: u32,
    /// Projection M.
    pub m_total: i32,
    /// Spin of the radical pair (the intermediate coupling label).
    pub intermediate: u32,
    /// Amplitudes in [`CompositeBasis`] coordinates, zero outside `manifold`.
    pub amplitudes: CVector,
}

impl CoupledState {
    /// |self⟩⟨other| as a 20×20 matrix.
    pub fn outer(&self, other: &CoupledState) -> CMatrix {
        &self.amplitudes * other.amplitudes.adjoint()
    }
}

/// Radical-pair state |s12, m12⟩ as coefficients over the four radical
/// configurations ↑↑, ↑↓, ↓↑, ↓↓.
fn radical_pair_state(s12: u32, m12: i32) -> [f64; 4] {
    let mut out = [0.0; 4];
    for two_m1 in [1i8, -1] {
        for two_m2 in [1i8, -1] {
            out[radical_config_index(two_m1, two_m2)] =
                clebsch_gordan(1, two_m1 as i32, 1, two_m2 as i32, 2 * s12 as i32, 2 * m12);
        }
    }
    out
}

/// Coupled total-spin states of one manifold.
///
/// S0/S1 yield the radical singlet |0,0⟩ then the triplet |1,1⟩, |1,0⟩,
/// |1,−1⟩. T1 yields 12 states sorted by S descending, then intermediate
/// descending, then M descending: S=2 (5), S=1 with s12=1 (3), S=1 with
/// s12=0 (3), S=0 (1).
pub fn coupled_states(manifold: Manifold) -> Vec<CoupledState> {
    let mut out = Vec::new();
    match manifold {
        Manifold::S0 | Manifold::S1 => {
            for s12 in [0u32, 1] {
                for m in (-(s12 as i32)..=s12 as i32).rev() {
                    let coeffs = radical_pair_state(s12, m);
                    let mut amplitudes = CVector::zeros(HILBERT_DIM);
                    for (r, c) in coeffs.iter().enumerate() {
                        amplitudes[manifold.offset() + r] = C64::from(*c);
                    }
                    out.push(CoupledState { manifold, s_total: s12, m_total: m, intermediate: s12, amplitudes });
                }
            }
        }
        Manifold::T1 => {
            let mut labels = Vec::new();
            for s12 in [0u32, 1] {
                for s in s12.abs_diff(1)..=s12 + 1 {
                    labels.push((s, s12));
                }
            }
            labels.sort_by(|a, b| b.cmp(a));
            for (s, s12) in labels {
                for m in (-(s as i32)..=s as i32).rev() {
                    let mut amplitudes = CVector::zeros(HILBERT_DIM);
                    for m12 in -(s12 as i32)..=s12 as i32 {
                        let mc = m - m12;
                        if mc.abs() > 1 {
                            continue;
                        }
                        let cg = clebsch_gordan(2 * s12 as i32, 2 * m12, 2, 2 * mc, 2 * s as i32, 2 * m);
                        if cg == 0.0 {
                            continue;
                        }
                        let pair = radical_pair_state(s12, m12);
                        for (r, c) in pair.iter().enumerate() {
                            let idx = manifold.offset() + 3 * r + coupler_index(mc as i8);
                            amplitudes[idx] += C64::from(cg * c);
                        }
                    }
                    out.push(CoupledState { manifold, s_total: s, m_total: m, intermediate: s12, amplitudes });
                }
            }
        }
    }
    out
}

/// Finds the coupled state with the given quantum numbers.
pub fn find_coupled_state(manifold: Manifold, s_total: u32, m_total: i32, intermediate: u32) -> Option<CoupledState> {
    coupled_states(manifold)
        .into_iter()
        .find(|c| c.s_total == s_total && c.m_total == m_total && c.intermediate == intermediate)
}

/// Unit basis vector for a global index.
pub fn basis_vector(index: usize) -> CVector {
    let mut v = DVector::zeros(HILBERT_DIM);
    v[index] = C64::from(1.0);
    v
}

/// Basis permutation that exchanges the two radicals; an involution.
pub fn radical_swap_permutation() -> Vec<usize> {
    let basis = CompositeBasis::new();
    basis
        .states()
        .iter()
        .map(|s| CompositeBasis::index_of(s.manifold, s.two_m2, s.two_m1, s.coupler_m).expect("swapped state exists"))
        .collect()
}
