// Copyright 2026 The radtrip Authors
// SPDX-License-Identifier: Apache-2.0

//! Coherent Hamiltonian of the radical–coupler–radical system.
//!
//! The zero-field tensor is fixed to the molecular frame; orientation only
//! enters through the direction of the static field. The S1 block carries no
//! electronic offset, so the optical drive `V` couples degenerate radical
//! configurations of S0 and S1.

use crate::error::{Error, Result};
use crate::spin::{spin_matrices, Manifold, SpinOps};
use crate::units::{Energy, MU_B_OVER_HBAR};
use crate::{CMatrix, C64, HILBERT_DIM};

/// Time window during which the optical drive is on: `t_on <= t < t_off`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PulseWindow {
    pub t_on: f64,
    pub t_off: f64,
}

impl PulseWindow {
    pub fn new(t_on: f64, t_off: f64) -> Result<Self> {
        if !t_on.is_finite() || !t_off.is_finite() || t_on > t_off {
            return Err(Error::InvalidParameter(format!(
                "pulse window [{t_on}, {t_off}) must be finite with t_on <= t_off"
            )));
        }
        Ok(Self { t_on, t_off })
    }

    /// A window that never switches on.
    pub fn never() -> Self {
        Self { t_on: 0.0, t_off: 0.0 }
    }

    pub fn is_on(&self, t: f64) -> bool {
        t >= self.t_on && t < self.t_off
    }
}

/// Physical parameters. Energies are in rad/ns, the field in mT.
#[derive(Clone, Debug, PartialEq)]
pub struct ModelParams {
    pub j0: f64,
    pub j1: f64,
    pub j2: f64,
    pub j3: f64,
    pub d: f64,
    pub e: f64,
    pub g_radical: f64,
    pub g_coupler: f64,
    pub field_mt: f64,
    /// Optical drive matrix element.
    pub drive: f64,
    pub pulse: PulseWindow,
}

impl Default for ModelParams {
    /// Everything switched off, free-electron-like g-factors.
    fn default() -> Self {
        Self {
            j0: 0.0,
            j1: 0.0,
            j2: 0.0,
            j3: 0.0,
            d: 0.0,
            e: 0.0,
            g_radical: 2.0023,
            g_coupler: 2.0023,
            field_mt: 0.0,
            drive: 0.0,
            pulse: PulseWindow::never(),
        }
    }
}

impl ModelParams {
    pub fn with_j0(mut self, j: Energy) -> Self {
        self.j0 = j.internal();
        self
    }

    pub fn with_j1(mut self, j: Energy) -> Self {
        self.j1 = j.internal();
        self
    }

    pub fn with_j2(mut self, j: Energy) -> Self {
        self.j2 = j.internal();
        self
    }

    pub fn with_j3(mut self, j: Energy) -> Self {
        self.j3 = j.internal();
        self
    }

    pub fn with_zfs(mut self, d: Energy, e: Energy) -> Self {
        self.d = d.internal();
        self.e = e.internal();
        self
    }

    pub fn with_field_mt(mut self, b: f64) -> Self {
        self.field_mt = b;
        self
    }

    pub fn with_drive(mut self, v: Energy, pulse: PulseWindow) -> Self {
        self.drive = v.internal();
        self.pulse = pulse;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let values = [
            ("j0", self.j0),
            ("j1", self.j1),
            ("j2", self.j2),
            ("j3", self.j3),
            ("d", self.d),
            ("e", self.e),
            ("g_radical", self.g_radical),
            ("g_coupler", self.g_coupler),
            ("field", self.field_mt),
            ("drive", self.drive),
        ];
        if let Some((name, v)) = values.iter().find(|(_, v)| !v.is_finite()) {
            return Err(Error::InvalidParameter(format!("{name} = {v} is not finite")));
        }
        if self.field_mt < 0.0 {
            return Err(Error::InvalidParameter(format!("field magnitude {} mT is negative", self.field_mt)));
        }
        PulseWindow::new(self.pulse.t_on, self.pulse.t_off)?;
        Ok(())
    }

    /// Drive amplitude at time `t`.
    pub fn drive_at(&self, t: f64) -> f64 {
        if self.pulse.is_on(t) {
            self.drive
        } else {
            0.0
        }
    }

    /// Times in `(t0, t1)` where the drive switches.
    pub fn switch_times_between(&self, t0: f64, t1: f64) -> Vec<f64> {
        let mut out: Vec<f64> = [self.pulse.t_on, self.pulse.t_off]
            .into_iter()
            .filter(|&s| s > t0 && s < t1 && self.pulse.t_on < self.pulse.t_off)
            .collect();
        out.dedup();
        out
    }
}

/// Direction of the static field in the molecular frame.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Orientation {
    pub theta: f64,
    pub phi: f64,
}

impl Orientation {
    pub fn new(theta: f64, phi: f64) -> Result<Self> {
        let two_pi = 2.0 * std::f64::consts::PI;
        if !(0.0..=std::f64::consts::PI).contains(&theta) || !(0.0..two_pi).contains(&phi) {
            return Err(Error::InvalidParameter(format!(
                "orientation (theta = {theta}, phi = {phi}) outside [0, pi] x [0, 2pi)"
            )));
        }
        Ok(Self { theta, phi })
    }

    /// Field along the molecular z axis.
    pub fn z() -> Self {
        Self { theta: 0.0, phi: 0.0 }
    }

    pub fn field_direction(&self) -> [f64; 3] {
        let (st, ct) = self.theta.sin_cos();
        let (sp, cp) = self.phi.sin_cos();
        [st * cp, st * sp, ct]
    }

    /// Microwave direction, always perpendicular to the static field.
    pub fn mw_direction(&self) -> [f64; 3] {
        let (sp, cp) = self.phi.sin_cos();
        [-sp, cp, 0.0]
    }
}

fn zeeman_scale(g: f64, params: &ModelParams) -> f64 {
    g * MU_B_OVER_HBAR * params.field_mt
}

fn dot(a: &SpinOps, b: &SpinOps) -> CMatrix {
    &a.sx * &b.sx + &a.sy * &b.sy + &a.sz * &b.sz
}

fn kron_ops(ops: &SpinOps, left: usize, right: usize) -> SpinOps {
    let l = CMatrix::identity(left, left);
    let r = CMatrix::identity(right, right);
    let k = |m: &CMatrix| l.kronecker(m).kronecker(&r);
    SpinOps { sx: k(&ops.sx), sy: k(&ops.sy), sz: k(&ops.sz) }
}

/// S0 block: J₀ s₁·s₂ + g_r μ_B B·(s₁ + s₂), radical1 ⊗ radical2 ordering.
pub fn h_ground(params: &ModelParams, orient: &Orientation) -> CMatrix {
    let half = spin_matrices(0.5).expect("spin 1/2");
    let s1 = kron_ops(&half, 1, 2);
    let s2 = kron_ops(&half, 2, 1);
    let n = orient.field_direction();
    let exchange = dot(&s1, &s2) * C64::from(params.j0);
    let zeeman = s1.sum(&s2).along(n) * C64::from(zeeman_scale(params.g_radical, params));
    exchange + zeeman
}

/// T1 block in radical1 ⊗ radical2 ⊗ coupler ordering: radical–coupler and
/// radical–radical exchange, Zeeman terms and the coupler zero-field term.
pub fn h_triplet(params: &ModelParams, orient: &Orientation) -> CMatrix {
    let half = spin_matrices(0.5).expect("spin 1/2");
    let one = spin_matrices(1.0).expect("spin 1");
    let s1 = kron_ops(&half, 1, 6);
    let s2 = kron_ops(&half, 2, 3);
    let sc = kron_ops(&one, 4, 1);
    let n = orient.field_direction();
    let c = C64::from;
    let exchange = dot(&s1, &sc) * c(params.j1) + dot(&sc, &s2) * c(params.j2) + dot(&s1, &s2) * c(params.j3);
    let zeeman = s1.sum(&s2).along(n) * c(zeeman_scale(params.g_radical, params))
        + sc.along(n) * c(zeeman_scale(params.g_coupler, params));
    let zfs = &sc.sz * &sc.sz * c(params.d) + (&sc.sx * &sc.sx - &sc.sy * &sc.sy) * c(params.e);
    exchange + zeeman + zfs
}

/// Full 20×20 Hamiltonian at time `t`.
pub fn h_total(params: &ModelParams, orient: &Orientation, t: f64) -> CMatrix {
    h_total_with_drive(params, orient, params.drive_at(t))
}

/// Full Hamiltonian with an explicit drive amplitude.
pub fn h_total_with_drive(params: &ModelParams, orient: &Orientation, drive: f64) -> CMatrix {
    let mut h = CMatrix::zeros(HILBERT_DIM, HILBERT_DIM);
    let ground = h_ground(params, orient);
    for m in [Manifold::S0, Manifold::S1] {
        h.view_mut((m.offset(), m.offset()), (4, 4)).copy_from(&ground);
    }
    let t1 = Manifold::T1;
    h.view_mut((t1.offset(), t1.offset()), (12, 12)).copy_from(&h_triplet(params, orient));
    if drive != 0.0 {
        let s0 = Manifold::S0.offset();
        let s1 = Manifold::S1.offset();
        for r in 0..4 {
            h[(s0 + r, s1 + r)] = C64::from(drive);
            h[(s1 + r, s0 + r)] = C64::from(drive);
        }
    }
    h
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::units::EnergyUnit;
    use nalgebra::SymmetricEigen;

    fn sorted_eigenvalues(h: &CMatrix) -> Vec<f64> {
        let mut ev: Vec<f64> = SymmetricEigen::new(h.clone()).eigenvalues.iter().copied().collect();
        ev.sort_by(|a, b| a.partial_cmp(b).unwrap());
        ev
    }

    fn assert_close(a: &[f64], b: &[f64], tol: f64) {
        assert_eq!(a.len(), b.len());
        for (x, y) in a.iter().zip(b) {
            assert!((x - y).abs() < tol, "{a:?} vs {b:?}");
        }
    }

    #[test]
    fn heisenberg_pair_spectrum() {
        let p = ModelParams { j0: 3.0, ..Default::default() };
        let ev = sorted_eigenvalues(&h_ground(&p, &Orientation::z()));
        assert_close(&ev, &[-2.25, 0.75, 0.75, 0.75], 1e-12);
    }

    #[test]
    fn pure_zeeman_ground() {
        let p = ModelParams::default().with_field_mt(350.0);
        let w = p.g_radical * MU_B_OVER_HBAR * 350.0;
        let ev = sorted_eigenvalues(&h_ground(&p, &Orientation::z()));
        assert_close(&ev, &[-w, 0.0, 0.0, w], 1e-12);
    }

    #[test]
    fn ground_spectrum_isotropic() {
        let p = ModelParams { j0: 1.3, ..Default::default() }.with_field_mt(120.0);
        let reference = sorted_eigenvalues(&h_ground(&p, &Orientation::z()));
        for k in 0..10 {
            let o = Orientation::new(0.3 * k as f64 % 3.1, (0.77 * k as f64) % std::f64::consts::TAU).unwrap();
            assert_close(&sorted_eigenvalues(&h_ground(&p, &o)), &reference, 1e-10);
        }
    }

    #[test]
    fn stretched_state_energy() {
        let p = ModelParams { j1: 2.0, j2: 2.0, ..Default::default() };
        let h = h_triplet(&p, &Orientation::z());
        // |↑↑,+1⟩ is index 0 of the T1 block.
        assert!((h[(0, 0)].re - 2.0).abs() < 1e-14);
        let ev = sorted_eigenvalues(&h);
        // S=2: J, S=1 (s12=1): -J, S=1 (s12=0): 0, S=0: -2J
        assert_close(&ev, &[-4.0, -2.0, -2.0, -2.0, 0.0, 0.0, 0.0, 2.0, 2.0, 2.0, 2.0, 2.0], 1e-12);
    }

    #[test]
    fn zero_field_only_spectrum() {
        let p = ModelParams { d: 1.7, ..Default::default() };
        let ev = sorted_eigenvalues(&h_triplet(&p, &Orientation::z()));
        let mut expected = vec![0.0; 4];
        expected.extend(vec![1.7; 8]);
        assert_close(&ev, &expected, 1e-12);
    }

    #[test]
    fn drive_only_spectrum_and_gating() {
        let p = ModelParams::default().with_drive(Energy::rad_per_ns(2.5), PulseWindow::new(1.0, 2.0).unwrap());
        let h = h_total(&p, &Orientation::z(), 1.5);
        let ev = sorted_eigenvalues(&h);
        let mut expected = vec![-2.5; 4];
        expected.extend(vec![0.0; 12]);
        expected.extend(vec![2.5; 4]);
        assert_close(&ev, &expected, 1e-12);
        let off = h_total(&p, &Orientation::z(), 2.0);
        assert_eq!(off, h_total(&ModelParams { drive: 0.0, ..p.clone() }, &Orientation::z(), 1.5));
        for i in 0..4 {
            for j in 4..8 {
                assert_eq!(off[(i, j)], C64::from(0.0));
            }
        }
    }

    #[test]
    fn drive_selection_rule() {
        let p = ModelParams::default().with_drive(Energy::rad_per_ns(1.0), PulseWindow::new(0.0, 1.0).unwrap());
        let h = h_total(&p, &Orientation::new(0.4, 1.0).unwrap(), 0.5);
        for i in 0..4 {
            for j in 4..8 {
                let expected = if j - 4 == i { 1.0 } else { 0.0 };
                assert_eq!(h[(i, j)].re, expected);
            }
        }
    }

    #[test]
    fn parameter_validation() {
        assert!(ModelParams { field_mt: -1.0, ..Default::default() }.validate().is_err());
        assert!(ModelParams { j1: f64::NAN, ..Default::default() }.validate().is_err());
        assert!(PulseWindow::new(2.0, 1.0).is_err());
        assert!(Orientation::new(4.0, 0.0).is_err());
        assert!(Orientation::new(1.0, 2.0 * std::f64::consts::PI).is_err());
        let o = Orientation::new(1.1, 2.2).unwrap();
        let d: f64 = o.field_direction().iter().zip(o.mw_direction()).map(|(a, b)| a * b).sum();
        assert!(d.abs() < 1e-15);
    }

    #[test]
    fn unit_round_trip_matrices() {
        let base = ModelParams::default()
            .with_j1(Energy::millitesla(-10.0))
            .with_zfs(Energy::millitesla(20.0), Energy::millitesla(3.0));
        let reference = h_triplet(&base, &Orientation::new(0.7, 1.2).unwrap());
        for unit in [EnergyUnit::Kelvin, EnergyUnit::MegaHertz, EnergyUnit::RadPerNs] {
            let p = ModelParams::default()
                .with_j1(Energy::millitesla(-10.0).to(unit))
                .with_zfs(Energy::millitesla(20.0).to(unit), Energy::millitesla(3.0).to(unit));
            let h = h_triplet(&p, &Orientation::new(0.7, 1.2).unwrap());
            let rel = (&h - &reference).norm() / reference.norm();
            assert!(rel < 1e-12, "{unit}: {rel}");
        }
    }
}
