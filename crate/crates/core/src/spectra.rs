// Copyright 2026 The radtrip Authors
// SPDX-License-Identifier: Apache-2.0

//! Time-resolved EPR intensities and powder averages.
//!
//! The intensity at one orientation is
//! `I(ω) = |Tr{ρ(t) S_mw [i𝓛 − ω]⁻¹ S_mw}|`, with `S_mw` the total spin
//! along the microwave direction.
//!
//! The production path never factors a 400×400 matrix. It restricts 𝓛 to
//! the sector reachable from `ρ(0)` and `S_mw` (see [`crate::sector`]),
//! writes it as a real matrix `L = Q H Qᵀ` with `H` upper Hessenberg, and
//! solves `(iH − ω) y = Qᵀ s` for every ω in O(n²).
//! [`spectrum_single_direct`] keeps the dense LU route for cross-checks.

use std::io::{self, Write};
use std::time::Instant;

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;

use crate::dynamics::DensityMatrix;
use crate::error::{Error, Result};
use crate::hamiltonian::{ModelParams, Orientation};
use crate::linalg::{expm, ShiftedHessenberg, SINGULAR_PIVOT_RATIO};
use crate::lindblad::{devectorize, vectorize, LiouvillianBuilder, RateParams};
use crate::sector::{EvenSubspace, OperatorSector};
use crate::spin::{radical_swap_permutation, total_spin_ops};
use crate::{CMatrix, C64, HILBERT_DIM};

/// Microwave frequencies at one delay time.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectrumGrid {
    pub omegas: Vec<f64>,
    pub field_mt: f64,
    pub time: f64,
}

impl SpectrumGrid {
    pub fn new(omegas: Vec<f64>, field_mt: f64, time: f64) -> Result<Self> {
        if omegas.is_empty() || omegas.iter().any(|w| !w.is_finite()) || omegas.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::FrequencyGrid);
        }
        if !(time >= 0.0 && time.is_finite()) {
            return Err(Error::TimeGrid);
        }
        Ok(Self { omegas, field_mt, time })
    }

    /// `n` points from `lo` to `hi` inclusive.
    pub fn linspace(lo: f64, hi: f64, n: usize, field_mt: f64, time: f64) -> Result<Self> {
        if n == 0 || (n > 1 && hi <= lo) {
            return Err(Error::FrequencyGrid);
        }
        let omegas =
            if n == 1 { vec![lo] } else { (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect() };
        Self::new(omegas, field_mt, time)
    }

    pub fn len(&self) -> usize {
        self.omegas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.omegas.is_empty()
    }

    /// Largest spacing between neighbouring frequencies.
    pub fn max_step(&self) -> f64 {
        self.omegas.windows(2).map(|w| w[1] - w[0]).fold(0.0, f64::max)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SpectrumSource {
    Single(Orientation),
    Powder { n_theta: usize, n_phi: usize, weighted: bool },
}

#[derive(Clone, Debug, PartialEq)]
pub struct Spectrum {
    pub grid: SpectrumGrid,
    pub intensities: Vec<f64>,
    pub source: SpectrumSource,
}

impl Spectrum {
    /// Relative L2 distance `‖a − b‖ / ‖b‖`.
    pub fn relative_l2(&self, reference: &Spectrum) -> f64 {
        let num: f64 = self.intensities.iter().zip(&reference.intensities).map(|(a, b)| (a - b).powi(2)).sum();
        let den: f64 = reference.intensities.iter().map(|b| b * b).sum();
        (num / den).sqrt()
    }

    /// Two columns, `omega_rad_per_ns,intensity`, after `#`-prefixed header
    /// lines.
    pub fn write_csv<W: Write>(&self, mut w: W, header: &[String]) -> io::Result<()> {
        for line in header {
            writeln!(w, "# {line}")?;
        }
        writeln!(w, "# t_ns = {:.12e}", self.grid.time)?;
        writeln!(w, "# field_mT = {:.12e}", self.grid.field_mt)?;
        match self.source {
            SpectrumSource::Single(o) => writeln!(w, "# orientation theta = {:.12e}, phi = {:.12e}", o.theta, o.phi)?,
            SpectrumSource::Powder { n_theta, n_phi, weighted } => {
                writeln!(w, "# powder n_theta = {n_theta}, n_phi = {n_phi}, sin_theta_weighted = {weighted}")?
            }
        }
        writeln!(w, "omega_rad_per_ns,intensity")?;
        for (omega, i) in self.grid.omegas.iter().zip(&self.intensities) {
            writeln!(w, "{omega:.12e},{i:.12e}")?;
        }
        Ok(())
    }
}

/// Total spin along the microwave direction.
pub fn mw_operator(orient: &Orientation) -> CMatrix {
    total_spin_ops().along(orient.mw_direction())
}

/// Solves `(i𝓛 − ω) vec(Y) = vec(X)` by dense LU and returns `Y`.
pub fn resolvent_apply(l: &CMatrix, omega: f64, x: &CMatrix) -> Result<CMatrix> {
    let n2 = l.nrows();
    if x.nrows() * x.ncols() != n2 || !l.is_square() {
        return Err(Error::Dimension(format!(
            "operator {}x{} does not match a {n2}-dimensional Liouville space",
            x.nrows(),
            x.ncols()
        )));
    }
    let a = l * C64::new(0.0, 1.0) - CMatrix::identity(n2, n2) * C64::from(omega);
    let lu = a.lu();
    let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
    for i in 0..n2 {
        let p = lu.u()[(i, i)].norm();
        lo = lo.min(p);
        hi = hi.max(p);
    }
    let ratio = if hi == 0.0 { 0.0 } else { lo / hi };
    if ratio < SINGULAR_PIVOT_RATIO {
        return Err(Error::SingularResolvent { omega, pivot_ratio: ratio });
    }
    let y = lu.solve(&vectorize(x)).ok_or(Error::SingularResolvent { omega, pivot_ratio: ratio })?;
    devectorize(&y)
}

/// Intensities through the dense 400×400 resolvent, one LU per ω.
pub fn spectrum_single_direct(
    rho_t: &DensityMatrix,
    params: &ModelParams,
    rates: &RateParams,
    orient: &Orientation,
    grid: &SpectrumGrid,
) -> Result<Spectrum> {
    let builder = LiouvillianBuilder::new(params, rates)?;
    let l = builder.at_time(orient, grid.time);
    let s = mw_operator(orient);
    let rs = rho_t.matrix() * &s;
    let intensities = grid
        .omegas
        .iter()
        .map(|&w| Ok((&rs * resolvent_apply(&l.matrix, w, &s)?).trace().norm()))
        .collect::<Result<Vec<f64>>>()?;
    Ok(Spectrum { grid: grid.clone(), intensities, source: SpectrumSource::Single(*orient) })
}

/// Intensities of a probe `s` against the functional `Tr(ρ S ·)` of a
/// reduced real generator.
fn hessenberg_intensities(lr: DMatrix<f64>, s: &[C64], c: &[C64], omegas: &[f64]) -> Result<Vec<f64>> {
    let hess = ShiftedHessenberg::new(lr);
    let sf = hess.to_hessenberg_frame(s);
    let cf = hess.to_hessenberg_frame(c);
    omegas
        .iter()
        .map(|&w| {
            let (y, stats) = hess.solve_in_frame(C64::new(0.0, 1.0), C64::from(-w), &sf);
            if stats.ratio() < SINGULAR_PIVOT_RATIO {
                return Err(Error::SingularResolvent { omega: w, pivot_ratio: stats.ratio() });
            }
            Ok(cf.iter().zip(&y).map(|(a, b)| a * b).sum::<C64>().norm())
        })
        .collect()
}

/// Intensities for a given `ρ(t)` at one orientation.
pub fn spectrum_single(
    rho_t: &DensityMatrix,
    params: &ModelParams,
    rates: &RateParams,
    orient: &Orientation,
    grid: &SpectrumGrid,
) -> Result<Spectrum> {
    let builder = LiouvillianBuilder::new(params, rates)?;
    let l = builder.at_time(orient, grid.time);
    let s = mw_operator(orient);
    let sector = OperatorSector::closure(HILBERT_DIM, &[&s], &[&l.matrix])?;
    let rs = rho_t.matrix() * &s;
    let probe: Vec<C64> = sector.coordinates(&s)?.iter().map(|x| C64::from(*x)).collect();
    let intensities = hessenberg_intensities(sector.project(&l.matrix), &probe, &sector.functional(&rs), &grid.omegas)?;
    Ok(Spectrum { grid: grid.clone(), intensities, source: SpectrumSource::Single(*orient) })
}

/// Everything needed to go from `ρ(0)` to a spectrum at any orientation.
#[derive(Clone, Debug)]
pub struct SpectrumJob {
    builder: LiouvillianBuilder,
    rho0: DensityMatrix,
    grid: SpectrumGrid,
    swap: Vec<usize>,
    use_symmetry: bool,
}

/// Relative tolerance for accepting the radical-exchange symmetry.
const SYMMETRY_TOLERANCE: f64 = 1e-13;

impl SpectrumJob {
    pub fn new(params: &ModelParams, rates: &RateParams, rho0: &DensityMatrix, grid: &SpectrumGrid) -> Result<Self> {
        if (params.field_mt - grid.field_mt).abs() > 1e-12 * params.field_mt.abs().max(1.0) {
            return Err(Error::InvalidParameter(format!(
                "grid field {} mT differs from model field {} mT",
                grid.field_mt, params.field_mt
            )));
        }
        Ok(Self {
            builder: LiouvillianBuilder::new(params, rates)?,
            rho0: rho0.clone(),
            grid: grid.clone(),
            swap: radical_swap_permutation(),
            use_symmetry: true,
        })
    }

    pub fn grid(&self) -> &SpectrumGrid {
        &self.grid
    }

    pub fn params(&self) -> &ModelParams {
        self.builder.params()
    }

    /// Propagates `ρ(0)` to the grid time at `orient` and evaluates the
    /// intensities, all inside the reachable sector. When the generator,
    /// `ρ(0)` and the probe are all even under exchange of the radicals the
    /// work is done in the even half of the sector.
    pub fn evaluate(&self, orient: &Orientation) -> Result<Vec<f64>> {
        let params = self.builder.params();
        let t = self.grid.time;
        let l_off = self.builder.with_drive(orient, 0.0);
        let drive = self.builder.drive_generator();
        let s = mw_operator(orient);
        let sector = OperatorSector::closure(HILBERT_DIM, &[self.rho0.matrix(), &s], &[&l_off.matrix, drive])?;
        let mut lr_off = sector.project(&l_off.matrix);
        let mut lr_on = &lr_off + sector.project(drive) * params.drive;
        let mut x: Vec<f64> = sector.coordinates(self.rho0.matrix())?.as_slice().to_vec();
        let mut probe: Vec<f64> = sector.coordinates(&s)?.as_slice().to_vec();

        let even =
            if self.use_symmetry { self.even_subspace(&sector, &[&lr_on, &lr_off], &[&x, &probe]) } else { None };
        if let Some(even) = &even {
            lr_on = even.restrict(&lr_on);
            lr_off = even.restrict(&lr_off);
            x = even.to_subspace(&x);
            probe = even.to_subspace(&probe);
        }

        let mut x = DVector::from_vec(x);
        let mut cuts = vec![0.0];
        cuts.extend(params.switch_times_between(0.0, t));
        cuts.push(t);
        for w in cuts.windows(2) {
            let dt = w[1] - w[0];
            if dt <= 0.0 {
                continue;
            }
            let lr = if params.pulse.is_on(w[0]) { &lr_on } else { &lr_off };
            x = expm(&(lr * dt)) * x;
        }
        let x_full = match &even {
            Some(e) => e.from_subspace(x.as_slice()),
            None => x,
        };
        let rs = sector.reconstruct(&x_full) * &s;
        let mut c = sector.functional(&rs);
        if let Some(e) = &even {
            c = e.to_subspace(&c);
        }
        let probe: Vec<C64> = probe.iter().map(|v| C64::from(*v)).collect();
        let lr_t = if params.pulse.is_on(t) { lr_on } else { lr_off };
        hessenberg_intensities(lr_t, &probe, &c, &self.grid.omegas)
    }

    fn even_subspace(
        &self,
        sector: &OperatorSector,
        generators: &[&DMatrix<f64>],
        vectors: &[&[f64]],
    ) -> Option<EvenSubspace> {
        let action = sector.permutation_action(&self.swap)?;
        if generators.iter().any(|g| EvenSubspace::commutator_residual(&action, g) > SYMMETRY_TOLERANCE) {
            return None;
        }
        let even = EvenSubspace::new(&action)?;
        for v in vectors {
            let scale = v.iter().map(|x| x.abs()).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
            if even.residual(v) > SYMMETRY_TOLERANCE * scale {
                return None;
            }
        }
        Some(even)
    }

    /// Disables the radical-exchange reduction (for cross-checks).
    pub fn without_symmetry(mut self) -> Self {
        self.use_symmetry = false;
        self
    }

    pub fn single(&self, orient: &Orientation) -> Result<Spectrum> {
        Ok(Spectrum {
            grid: self.grid.clone(),
            intensities: self.evaluate(orient)?,
            source: SpectrumSource::Single(*orient),
        })
    }
}

/// Product grid `θᵢ = (i + ½)π/n_θ`, `φⱼ = 2πj/n_φ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PowderGrid {
    pub n_theta: usize,
    pub n_phi: usize,
    /// Weight points by `sin θ` instead of uniformly.
    pub weighted: bool,
}

impl Default for PowderGrid {
    fn default() -> Self {
        Self { n_theta: 50, n_phi: 100, weighted: false }
    }
}

impl PowderGrid {
    pub fn new(n_theta: usize, n_phi: usize, weighted: bool) -> Result<Self> {
        if n_theta == 0 || n_phi == 0 {
            return Err(Error::InvalidParameter("powder grid counts must be positive".into()));
        }
        Ok(Self { n_theta, n_phi, weighted })
    }

    pub fn len(&self) -> usize {
        self.n_theta * self.n_phi
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Orientations, θ-major, with weights summing to one.
    pub fn points(&self) -> Vec<(Orientation, f64)> {
        use std::f64::consts::PI;
        let mut pts = Vec::with_capacity(self.len());
        for i in 0..self.n_theta {
            let theta = (i as f64 + 0.5) * PI / self.n_theta as f64;
            for j in 0..self.n_phi {
                let phi = 2.0 * PI * j as f64 / self.n_phi as f64;
                let w = if self.weighted { theta.sin() } else { 1.0 };
                pts.push((Orientation { theta, phi }, w));
            }
        }
        let total = pairwise_sum(&pts.iter().map(|p| p.1).collect::<Vec<_>>());
        for p in &mut pts {
            p.1 /= total;
        }
        pts
    }
}

fn pairwise_sum(xs: &[f64]) -> f64 {
    match xs.len() {
        0 => 0.0,
        1 => xs[0],
        n => pairwise_sum(&xs[..n / 2]) + pairwise_sum(&xs[n / 2..]),
    }
}

/// Elementwise sum of equal-length rows with a fixed pairwise tree.
pub fn pairwise_sum_rows(rows: &[Vec<f64>]) -> Vec<f64> {
    match rows.len() {
        0 => Vec::new(),
        1 => rows[0].clone(),
        n => {
            let a = pairwise_sum_rows(&rows[..n / 2]);
            let b = pairwise_sum_rows(&rows[n / 2..]);
            a.iter().zip(&b).map(|(x, y)| x + y).collect()
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OrientationTiming {
    pub index: usize,
    pub theta: f64,
    pub phi: f64,
    pub seconds: f64,
}

#[derive(Clone, Debug)]
pub struct PowderResult {
    pub spectrum: Spectrum,
    pub timings: Vec<OrientationTiming>,
}

impl PowderResult {
    pub fn evaluations(&self) -> usize {
        self.timings.len()
    }
}

/// Weighted orientation average on the current rayon pool. The reduction
/// order is fixed, so the result does not depend on the number of workers.
pub fn powder_average(job: &SpectrumJob, powder: &PowderGrid) -> Result<PowderResult> {
    let points = powder.points();
    let evaluated: Vec<Result<(Vec<f64>, f64)>> = points
        .par_iter()
        .map(|(o, w)| {
            let start = Instant::now();
            let spec =
                job.evaluate(o).map_err(|e| Error::Orientation { theta: o.theta, phi: o.phi, source: Box::new(e) })?;
            let weighted = spec.iter().map(|x| x * w).collect();
            Ok((weighted, start.elapsed().as_secs_f64()))
        })
        .collect();
    let mut rows = Vec::with_capacity(points.len());
    let mut timings = Vec::with_capacity(points.len());
    for (index, (res, (o, _))) in evaluated.into_iter().zip(&points).enumerate() {
        let (row, seconds) = res?;
        rows.push(row);
        timings.push(OrientationTiming { index, theta: o.theta, phi: o.phi, seconds });
    }
    Ok(PowderResult {
        spectrum: Spectrum {
            grid: job.grid().clone(),
            intensities: pairwise_sum_rows(&rows),
            source: SpectrumSource::Powder { n_theta: powder.n_theta, n_phi: powder.n_phi, weighted: powder.weighted },
        },
        timings,
    })
}

/// Writes per-orientation wall-clock times.
pub fn write_timings_csv<W: Write>(mut w: W, timings: &[OrientationTiming], header: &[String]) -> io::Result<()> {
    for line in header {
        writeln!(w, "# {line}")?;
    }
    writeln!(w, "index,theta,phi,seconds")?;
    for t in timings {
        writeln!(w, "{},{:.12e},{:.12e},{:.6e}", t.index, t.theta, t.phi, t.seconds)?;
    }
    Ok(())
}

/// Where a scan evaluates its spectra.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ScanMode {
    Single(Orientation),
    Powder(PowderGrid),
}

/// One spectrum per radical–coupler exchange value (rad/ns). Both
/// radical–coupler couplings take the scanned value.
pub fn spectrum_scan_j1(
    params: &ModelParams,
    rates: &RateParams,
    rho0: &DensityMatrix,
    grid: &SpectrumGrid,
    j1_values: &[f64],
    mode: ScanMode,
) -> Result<Vec<Spectrum>> {
    j1_values
        .iter()
        .map(|&j| {
            let p = ModelParams { j1: j, j2: j, ..params.clone() };
            let job = SpectrumJob::new(&p, rates, rho0, grid)?;
            match mode {
                ScanMode::Single(o) => job.single(&o),
                ScanMode::Powder(pg) => Ok(powder_average(&job, &pg)?.spectrum),
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::evolve_to;
    use crate::hamiltonian::PulseWindow;

    fn test_params() -> ModelParams {
        ModelParams {
            j0: 0.3,
            j1: -1.76,
            j2: -1.76,
            d: 3.5,
            e: 0.5,
            g_radical: 2.0023,
            g_coupler: 2.0023,
            field_mt: 350.0,
            drive: 50.0,
            pulse: PulseWindow::new(0.0, 0.0314).unwrap(),
            ..Default::default()
        }
    }

    fn test_rates() -> RateParams {
        RateParams { gamma_radical: 0.2, gamma_triplet: 0.5, k_st: 30.0, k_tg: 0.3, k_eg: 0.2 }
    }

    #[test]
    fn mw_operator_direction() {
        let s = mw_operator(&Orientation::new(0.7, 0.0).unwrap());
        assert!((s - total_spin_ops().sy).norm() < 1e-15);
        for (t, p) in [(0.3, 1.1), (2.0, 5.9), (1.5, 3.0)] {
            let o = Orientation::new(t, p).unwrap();
            let (a, b) = (o.mw_direction(), o.field_direction());
            assert!((a[0] * b[0] + a[1] * b[1] + a[2] * b[2]).abs() < 1e-15);
            let m = mw_operator(&o);
            assert!((&m - m.adjoint()).norm() < 1e-14);
        }
    }

    #[test]
    fn resolvent_of_zero_generator() {
        let l = CMatrix::zeros(16, 16);
        let x = CMatrix::from_fn(4, 4, |i, j| C64::new(i as f64, j as f64));
        let y = resolvent_apply(&l, 1.0, &x).unwrap();
        assert!((y + &x).norm() < 1e-15);
        assert!(matches!(resolvent_apply(&l, 0.0, &x), Err(Error::SingularResolvent { .. })));
        assert!(resolvent_apply(&l, 1.0, &CMatrix::zeros(3, 3)).is_err());
    }

    #[test]
    fn resolvent_of_diagonal_generator() {
        let diag: Vec<C64> = (0..9).map(|k| C64::new(-0.1 * k as f64 - 0.05, 0.7 * k as f64 - 2.0)).collect();
        let l = CMatrix::from_diagonal(&DVector::from_vec(diag.clone()));
        let x = CMatrix::from_fn(3, 3, |i, j| C64::new(1.0 + i as f64, 0.5 - j as f64));
        let omega = 0.37;
        let y = resolvent_apply(&l, omega, &x).unwrap();
        let vx = vectorize(&x);
        let vy = vectorize(&y);
        for k in 0..9 {
            let expected = vx[k] / (C64::new(0.0, 1.0) * diag[k] - omega);
            assert!((vy[k] - expected).norm() < 1e-12 * expected.norm().max(1.0));
        }
        let residual = (&l * C64::new(0.0, 1.0) - CMatrix::identity(9, 9) * C64::from(omega)) * vy - &vx;
        assert!(residual.norm() < 1e-10 * vx.norm());
    }

    #[test]
    fn sector_engine_matches_dense_route() {
        let params = test_params();
        let rates = test_rates();
        let rho0 = crate::dynamics::thermal_ground_state(&params, None).unwrap();
        let o = Orientation::new(1.1, 0.4).unwrap();
        for t in [0.0062, 0.08] {
            let grid = SpectrumGrid::linspace(40.0, 85.0, 7, 350.0, t).unwrap();
            let job = SpectrumJob::new(&params, &rates, &rho0, &grid).unwrap();
            let fast = job.evaluate(&o).unwrap();
            let plain = job.clone().without_symmetry().evaluate(&o).unwrap();
            let rho_t = evolve_to(&params, &rates, &o, &rho0, t).unwrap();
            let direct = spectrum_single_direct(&rho_t, &params, &rates, &o, &grid).unwrap();
            let single = spectrum_single(&rho_t, &params, &rates, &o, &grid).unwrap();
            for k in 0..grid.len() {
                let d = direct.intensities[k];
                assert!((fast[k] - d).abs() <= 1e-8 * d.max(1e-12), "t {t} k {k}: {} vs {d}", fast[k]);
                assert!((single.intensities[k] - d).abs() <= 1e-8 * d.max(1e-12));
                assert!((plain[k] - d).abs() <= 1e-8 * d.max(1e-12));
            }
        }
    }

    #[test]
    fn powder_grid_layout() {
        let g = PowderGrid::default();
        let pts = g.points();
        assert_eq!(pts.len(), 5000);
        assert!((pts.iter().map(|p| p.1).sum::<f64>() - 1.0).abs() < 1e-12);
        assert!(pts.iter().all(|(o, _)| Orientation::new(o.theta, o.phi).is_ok()));
        let w = PowderGrid::new(4, 2, true).unwrap().points();
        assert!(w[0].1 < w[2].1);
        assert!(PowderGrid::new(0, 3, false).is_err());
    }

    #[test]
    fn pairwise_rows_sum() {
        let rows = vec![vec![1.0, 2.0], vec![3.0, 4.0], vec![5.0, 6.0]];
        assert_eq!(pairwise_sum_rows(&rows), vec![9.0, 12.0]);
        assert!(pairwise_sum_rows(&[]).is_empty());
    }

    #[test]
    fn grid_validation() {
        assert!(SpectrumGrid::new(vec![], 350.0, 0.0).is_err());
        assert!(SpectrumGrid::new(vec![1.0, 1.0], 350.0, 0.0).is_err());
        assert!(SpectrumGrid::new(vec![1.0], 350.0, -1.0).is_err());
        let g = SpectrumGrid::linspace(0.0, 1.0, 11, 350.0, 0.0).unwrap();
        assert!((g.max_step() - 0.1).abs() < 1e-15);
    }

    #[test]
    fn csv_layout() {
        let grid = SpectrumGrid::linspace(1.0, 2.0, 2, 350.0, 0.5).unwrap();
        let s = Spectrum { grid, intensities: vec![0.25, 0.5], source: SpectrumSource::Single(Orientation::z()) };
        let mut buf = Vec::new();
        s.write_csv(&mut buf, &["run".to_string()]).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "# run");
        assert!(lines.contains(&"omega_rad_per_ns,intensity"));
        assert_eq!(lines.last().unwrap(), &"2.000000000000e0,5.000000000000e-1");
    }
}
