// Copyright 2026 The radtrip Authors
// SPDX-License-Identifier: Apache-2.0

//! Dense kernels: matrix products, the matrix exponential and shifted
//! Hessenberg solves.

use nalgebra::{ComplexField, DMatrix, SymmetricEigen};

use crate::{CMatrix, C64};

/// Scalars the dense kernels run on (real and complex double precision).
pub trait Scalar: ComplexField<RealField = f64> + Copy {
    fn matmul(a: &DMatrix<Self>, b: &DMatrix<Self>) -> DMatrix<Self>;
}

impl Scalar for f64 {
    fn matmul(a: &DMatrix<f64>, b: &DMatrix<f64>) -> DMatrix<f64> {
        a * b
    }
}

impl Scalar for C64 {
    fn matmul(a: &CMatrix, b: &CMatrix) -> CMatrix {
        assert_eq!(a.ncols(), b.nrows(), "matmul shape mismatch");
        let (m, k, n) = (a.nrows(), a.ncols(), b.ncols());
        let mut c = CMatrix::zeros(m, n);
        if m == 0 || n == 0 || k == 0 {
            return c;
        }
        // SAFETY: Complex<f64> is repr(C) {re, im}, identical to [f64; 2];
        // all three buffers are column-major with the strides given and
        // `c` does not alias `a` or `b`.
        unsafe {
            matrixmultiply::zgemm(
                matrixmultiply::CGemmOption::Standard,
                matrixmultiply::CGemmOption::Standard,
                m,
                k,
                n,
                [1.0, 0.0],
                a.as_ptr() as *const [f64; 2],
                1,
                m as isize,
                b.as_ptr() as *const [f64; 2],
                1,
                k as isize,
                [0.0, 0.0],
                c.as_mut_ptr() as *mut [f64; 2],
                1,
                m as isize,
            );
        }
        c
    }
}

/// Largest absolute column sum.
pub fn norm_1<T: Scalar>(a: &DMatrix<T>) -> f64 {
    a.column_iter().map(|col| col.iter().map(|x| x.modulus()).sum::<f64>()).fold(0.0, f64::max)
}

const PADE_3: [f64; 4] = [120.0, 60.0, 12.0, 1.0];
const PADE_5: [f64; 6] = [30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0];
const PADE_7: [f64; 8] = [17297280.0, 8648640.0, 1995840.0, 277200.0, 25200.0, 1512.0, 56.0, 1.0];
const PADE_9: [f64; 10] =
    [17643225600.0, 8821612800.0, 2075673600.0, 302702400.0, 30270240.0, 2162160.0, 110880.0, 3960.0, 90.0, 1.0];
const PADE_13: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];
#[allow(clippy::excessive_precision)]
const THETA: [f64; 5] =
    [1.495585217958292e-2, 2.539398330063230e-1, 9.504178996162932e-1, 2.097847961257068e0, 5.371920351148152e0];

fn scaled<T: Scalar>(a: &DMatrix<T>, s: f64) -> DMatrix<T> {
    a.map(|x| x.scale(s))
}

fn axpy_into<T: Scalar>(acc: &mut DMatrix<T>, s: f64, x: &DMatrix<T>) {
    acc.zip_apply(x, |a, b| *a += b.scale(s));
}

fn add_identity<T: Scalar>(acc: &mut DMatrix<T>, s: f64) {
    for k in 0..acc.nrows() {
        acc[(k, k)] += T::from_real(s);
    }
}

/// Padé numerator/denominator pieces (U, V) for degrees 3..9.
fn pade_low<T: Scalar>(a: &DMatrix<T>, b: &[f64]) -> (DMatrix<T>, DMatrix<T>) {
    let n = a.nrows();
    let a2 = T::matmul(a, a);
    let mut powers = vec![a2.clone()];
    for _ in 2..b.len() / 2 {
        let next = T::matmul(powers.last().unwrap(), &a2);
        powers.push(next);
    }
    let mut u_inner = DMatrix::<T>::zeros(n, n);
    let mut v = DMatrix::<T>::zeros(n, n);
    add_identity(&mut u_inner, b[1]);
    add_identity(&mut v, b[0]);
    for (k, p) in powers.iter().enumerate() {
        let even = 2 * (k + 1);
        axpy_into(&mut v, b[even], p);
        axpy_into(&mut u_inner, b[even + 1], p);
    }
    (T::matmul(a, &u_inner), v)
}

fn pade_13<T: Scalar>(a: &DMatrix<T>) -> (DMatrix<T>, DMatrix<T>) {
    let b = &PADE_13;
    let a2 = T::matmul(a, a);
    let a4 = T::matmul(&a2, &a2);
    let a6 = T::matmul(&a4, &a2);

    let mut w1 = scaled(&a6, b[13]);
    axpy_into(&mut w1, b[11], &a4);
    axpy_into(&mut w1, b[9], &a2);
    let mut w = T::matmul(&a6, &w1);
    axpy_into(&mut w, b[7], &a6);
    axpy_into(&mut w, b[5], &a4);
    axpy_into(&mut w, b[3], &a2);
    add_identity(&mut w, b[1]);
    let u = T::matmul(a, &w);

    let mut z1 = scaled(&a6, b[12]);
    axpy_into(&mut z1, b[10], &a4);
    axpy_into(&mut z1, b[8], &a2);
    let mut v = T::matmul(&a6, &z1);
    axpy_into(&mut v, b[6], &a6);
    axpy_into(&mut v, b[4], &a4);
    axpy_into(&mut v, b[2], &a2);
    add_identity(&mut v, b[0]);
    (u, v)
}

/// Matrix exponential by scaling and squaring with diagonal Padé
/// approximants of degree 3, 5, 7, 9 or 13 chosen from the 1-norm.
pub fn expm<T: Scalar>(a: &DMatrix<T>) -> DMatrix<T> {
    assert!(a.is_square(), "expm needs a square matrix");
    let n = a.nrows();
    if n == 0 {
        return DMatrix::zeros(0, 0);
    }
    let norm = norm_1(a);
    let (u, v, squarings) = if norm <= THETA[0] {
        let (u, v) = pade_low(a, &PADE_3);
        (u, v, 0)
    } else if norm <= THETA[1] {
        let (u, v) = pade_low(a, &PADE_5);
        (u, v, 0)
    } else if norm <= THETA[2] {
        let (u, v) = pade_low(a, &PADE_7);
        (u, v, 0)
    } else if norm <= THETA[3] {
        let (u, v) = pade_low(a, &PADE_9);
        (u, v, 0)
    } else {
        let s = ((norm / THETA[4]).log2().ceil()).max(0.0) as i32;
        let a_s = scaled(a, 0.5f64.powi(s));
        let (u, v) = pade_13(&a_s);
        (u, v, s)
    };
    let p = &v + &u;
    let q = &v - &u;
    let mut r = q.lu().solve(&p).expect("Pade denominator is nonsingular");
    for _ in 0..squarings {
        r = T::matmul(&r, &r);
    }
    r
}

/// Largest entry of |A − A†|.
pub fn hermiticity_residual(a: &CMatrix) -> f64 {
    let n = a.nrows();
    let mut worst = 0.0f64;
    for j in 0..n {
        for i in 0..=j {
            worst = worst.max((a[(i, j)] - a[(j, i)].conj()).norm());
        }
    }
    worst
}

/// Eigenvalues of the Hermitian part of `a`, ascending.
///
/// Entries below `ε²·max|a|` are flushed to zero first; they shift no
/// eigenvalue by more than `n·ε²·max|a|` but can drive the QR sweeps into
/// underflow and NaN.
pub fn hermitian_eigenvalues(a: &CMatrix) -> Vec<f64> {
    let mut h = (a + a.adjoint()) * C64::from(0.5);
    let floor = f64::EPSILON * f64::EPSILON * h.iter().fold(0.0f64, |m, z| m.max(z.norm()));
    for z in h.iter_mut() {
        if z.norm() < floor {
            *z = C64::from(0.0);
        }
    }
    let mut ev: Vec<f64> = SymmetricEigen::new(h).eigenvalues.iter().copied().collect();
    ev.sort_by(|x, y| x.total_cmp(y));
    ev
}

/// Minimum and maximum pivot magnitudes seen during a factorization.
#[derive(Clone, Copy, Debug)]
pub struct PivotStats {
    pub min: f64,
    pub max: f64,
}

impl PivotStats {
    fn new() -> Self {
        Self { min: f64::INFINITY, max: 0.0 }
    }

    fn record(&mut self, p: f64) {
        self.min = self.min.min(p);
        self.max = self.max.max(p);
    }

    /// Ratio min/max; a cheap lower bound on the reciprocal condition.
    pub fn ratio(&self) -> f64 {
        if self.max == 0.0 {
            0.0
        } else {
            self.min / self.max
        }
    }
}

/// Pivot ratio below which a shifted system is treated as singular.
pub const SINGULAR_PIVOT_RATIO: f64 = 1.0e-14;

/// A real matrix reduced once to Hessenberg form, `A = Q H Qᵀ`, so that
/// shifted systems `(α A + β I) x = b` cost O(n²) each.
#[derive(Clone, Debug)]
pub struct ShiftedHessenberg {
    q: DMatrix<f64>,
    h: DMatrix<f64>,
    /// `h` in row-major order, for the row operations of the solve.
    rows: Vec<f64>,
}

impl ShiftedHessenberg {
    pub fn new(a: DMatrix<f64>) -> Self {
        assert!(a.is_square(), "Hessenberg reduction needs a square matrix");
        let (q, h) = a.hessenberg().unpack();
        let n = h.nrows();
        let rows = (0..n * n).map(|k| h[(k / n, k % n)]).collect();
        Self { q, h, rows }
    }

    pub fn dim(&self) -> usize {
        self.h.nrows()
    }

    pub fn q(&self) -> &DMatrix<f64> {
        &self.q
    }

    pub fn h(&self) -> &DMatrix<f64> {
        &self.h
    }

    /// Qᵀ v for a complex vector.
    pub fn to_hessenberg_frame(&self, v: &[C64]) -> Vec<C64> {
        let n = self.dim();
        (0..n)
            .map(|j| {
                let col = self.q.column(j);
                col.iter().zip(v).map(|(q, x)| x * *q).sum()
            })
            .collect()
    }

    /// Solves `(α H + β I) y = rhs` in the Hessenberg frame using Gaussian
    /// elimination with adjacent-row partial pivoting.
    pub fn solve_in_frame(&self, alpha: C64, beta: C64, rhs: &[C64]) -> (Vec<C64>, PivotStats) {
        let n = self.dim();
        assert_eq!(rhs.len(), n);
        // Row-major working copy of the upper Hessenberg band.
        let mut w = vec![C64::from(0.0); n * n];
        for i in 0..n {
            let start = i.saturating_sub(1);
            for (dst, h) in w[i * n + start..(i + 1) * n].iter_mut().zip(&self.rows[i * n + start..(i + 1) * n]) {
                *dst = alpha * *h;
            }
            w[i * n + i] += beta;
        }
        let mut y = rhs.to_vec();
        let mut stats = PivotStats::new();
        for k in 0..n.saturating_sub(1) {
            let (top, bottom) = w.split_at_mut((k + 1) * n);
            let row_k = &mut top[k * n..];
            let row_k1 = &mut bottom[..n];
            if row_k1[k].norm() > row_k[k].norm() {
                for j in k..n {
                    std::mem::swap(&mut row_k[j], &mut row_k1[j]);
                }
                y.swap(k, k + 1);
            }
            let pivot = row_k[k];
            stats.record(pivot.norm());
            if pivot.norm() == 0.0 {
                continue;
            }
            let factor = row_k1[k] / pivot;
            if factor.norm() != 0.0 {
                for (dst, src) in row_k1[k + 1..].iter_mut().zip(&row_k[k + 1..]) {
                    *dst -= factor * *src;
                }
                let delta = factor * y[k];
                y[k + 1] -= delta;
            }
        }
        if n > 0 {
            stats.record(w[(n - 1) * n + n - 1].norm());
        }
        for i in (0..n).rev() {
            let row = &w[i * n..(i + 1) * n];
            let tail: C64 = row[i + 1..].iter().zip(&y[i + 1..]).map(|(a, b)| a * b).sum();
            y[i] = (y[i] - tail) / row[i];
        }
        (y, stats)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn test_matrix(n: usize, seed: u64) -> CMatrix {
        let mut state = seed;
        let mut next = || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((state >> 11) as f64 / (1u64 << 53) as f64) - 0.5
        };
        CMatrix::from_fn(n, n, |_, _| C64::new(next(), next()))
    }

    #[test]
    fn zgemm_matches_naive_product() {
        let a = test_matrix(7, 1);
        let b = CMatrix::from_fn(7, 5, |i, j| C64::new(i as f64, -(j as f64)));
        let fast = C64::matmul(&a, &b);
        let slow = &a * &b;
        assert!((fast - slow).norm() < 1e-12);
    }

    #[test]
    fn expm_of_zero_and_diagonal() {
        let z = CMatrix::zeros(4, 4);
        assert_eq!(expm(&z), CMatrix::identity(4, 4));
        for scale in [1e-3, 0.2, 0.9, 2.0, 50.0] {
            let d = CMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![
                C64::new(-scale, 0.3 * scale),
                C64::new(0.1 * scale, -scale),
                C64::new(0.0, 0.0),
            ]));
            let e = expm(&d);
            for k in 0..3 {
                let expected = d[(k, k)].exp();
                assert!((e[(k, k)] - expected).norm() < 1e-12 * expected.norm().max(1.0));
            }
        }
    }

    #[test]
    fn expm_agrees_with_nalgebra_across_norms() {
        for (seed, scale) in [(3u64, 0.005), (4, 0.1), (5, 0.5), (6, 1.5), (7, 4.0), (8, 30.0)] {
            let a = test_matrix(6, seed) * C64::from(scale);
            let mine = expm(&a);
            let reference = a.clone().exp();
            let rel = (&mine - &reference).norm() / reference.norm();
            assert!(rel < 1e-11, "scale {scale}: {rel}");
        }
    }

    #[test]
    fn expm_real_matches_complex_path() {
        let a = DMatrix::<f64>::from_fn(5, 5, |i, j| ((i * 3 + j * 7) % 5) as f64 - 2.0);
        let real = expm(&a);
        let complex = expm(&a.map(C64::from));
        assert!((real.map(C64::from) - complex).norm() < 1e-10 * real.norm());
    }

    #[test]
    fn hessenberg_shifted_solve() {
        let a = DMatrix::<f64>::from_fn(9, 9, |i, j| (((i * 7 + j * 13) % 11) as f64 - 5.0) / 3.0);
        let hs = ShiftedHessenberg::new(a.clone());
        let rhs: Vec<C64> = (0..9).map(|k| C64::new(k as f64, 1.0)).collect();
        let alpha = C64::new(0.0, 1.0);
        let beta = C64::new(-0.7, 0.0);
        let rhs_frame = hs.to_hessenberg_frame(&rhs);
        let (y, stats) = hs.solve_in_frame(alpha, beta, &rhs_frame);
        assert!(stats.ratio() > 0.0);
        let x = hs.q().map(C64::from) * nalgebra::DVector::from_vec(y);
        let shifted = a.map(|v| alpha * v) + CMatrix::identity(9, 9) * beta;
        let residual = &shifted * &x - nalgebra::DVector::from_vec(rhs);
        assert!(residual.norm() < 1e-12);
    }

    #[test]
    fn hermitian_helpers() {
        let a = test_matrix(5, 9);
        let h = &a + a.adjoint();
        assert!(hermiticity_residual(&h) < 1e-15);
        assert!(hermiticity_residual(&a) > 1e-3);
        let ev = hermitian_eigenvalues(&CMatrix::identity(3, 3));
        assert_eq!(ev, vec![1.0, 1.0, 1.0]);
    }

    #[test]
    fn eigenvalues_survive_underflowing_blocks() {
        let a = test_matrix(4, 3);
        let big = &a * a.adjoint();
        let mut h = CMatrix::zeros(8, 8);
        h.view_mut((0, 0), (4, 4)).copy_from(&big);
        h.view_mut((4, 4), (4, 4)).copy_from(&(&big * C64::from(1e-305)));
        let ev = hermitian_eigenvalues(&h);
        assert!(ev.iter().all(|x| x.is_finite()));
        let reference = hermitian_eigenvalues(&big);
        assert!((ev[7] - reference[3]).abs() < 1e-12 * reference[3]);
    }
}
