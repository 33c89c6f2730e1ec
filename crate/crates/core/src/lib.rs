// Copyright 2026 The radtrip Authors
// SPDX-License-Identifier: Apache-2.0

//! Spin dynamics of a radical–coupler–radical molecule under optical driving.
//!
//! The composite Hilbert space holds two spin-½ radicals and an optically
//! active coupler that can sit in its singlet ground state (S0), its singlet
//! excited state (S1) or its triplet state (T1). That gives a 20-dimensional
//! space and a 400-dimensional Liouville space.
//!
//! Module map:
//!
//! * [`spin`]: spin matrices, Gell-Mann matrices, the composite basis and
//!   coupled total-spin states.
//! * [`hamiltonian`]: exchange, Zeeman, zero-field and optical drive terms.
//! * [`lindblad`]: jump operators, dissipators and the full Liouvillian.
//! * [`dynamics`]: density-matrix propagation and observables.
//! * [`spectra`]: time-resolved EPR intensities and powder averages.
//! * [`exchange`]: exchange couplings from total-energy tables.
//!
//! All energies are stored internally as angular frequencies in rad/ns and
//! all times are in ns. See [`units`].

pub mod dynamics;
pub mod error;
pub mod exchange;
pub mod features;
pub mod hamiltonian;
pub mod linalg;
pub mod lindblad;
pub mod sector;
pub mod spectra;
pub mod spin;
pub mod units;

pub use error::{Error, Result};

use nalgebra::{Complex, DMatrix, DVector};

/// Complex scalar used throughout.
pub type C64 = Complex<f64>;
/// Dense complex matrix (column-major).
pub type CMatrix = DMatrix<C64>;
/// Dense complex column vector.
pub type CVector = DVector<C64>;

/// Dimension of the composite Hilbert space (4 + 4 + 12).
pub const HILBERT_DIM: usize = 20;
/// Dimension of the Liouville space.
pub const LIOUVILLE_DIM: usize = HILBERT_DIM * HILBERT_DIM;
