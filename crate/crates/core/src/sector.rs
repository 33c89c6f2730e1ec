// Copyright 2026 The radtrip Authors
// SPDX-License-Identifier: Apache-2.0

//! Invariant operator sectors and their real Hermitian coordinates.
//!
//! Many matrix units `|i⟩⟨j|` are never reached from a given initial state
//! or probe operator. [`OperatorSector::closure`] finds the smallest span
//! of matrix units that contains the seeds and is mapped into itself by the
//! generators, judged from their nonzero patterns. Restricted to a sector
//! closed under `(i, j) ↦ (j, i)`, a Hermiticity-preserving generator is a
//! real matrix in the orthonormal Hermitian basis
//!
//! * `|i⟩⟨i|`
//! * `(|i⟩⟨j| + |j⟩⟨i|)/√2`
//! * `(i|i⟩⟨j| − i|j⟩⟨i|)/√2`, for `i < j`.

use std::collections::VecDeque;
use std::f64::consts::FRAC_1_SQRT_2;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::{CMatrix, C64};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum HermitianElement {
    Diag(usize),
    Sym(usize, usize),
    Antisym(usize, usize),
}

impl HermitianElement {
    /// Nonzero entries `(row, col, value)`.
    fn entries(self) -> ([(usize, usize, C64); 2], usize) {
        let s = FRAC_1_SQRT_2;
        let zero = (0, 0, C64::from(0.0));
        match self {
            HermitianElement::Diag(i) => ([(i, i, C64::from(1.0)), zero], 1),
            HermitianElement::Sym(i, j) => ([(i, j, C64::from(s)), (j, i, C64::from(s))], 2),
            HermitianElement::Antisym(i, j) => ([(i, j, C64::new(0.0, s)), (j, i, C64::new(0.0, -s))], 2),
        }
    }
}

/// A generator-invariant span of matrix units with a real Hermitian basis.
#[derive(Clone, Debug)]
pub struct OperatorSector {
    hilbert_dim: usize,
    elements: Vec<HermitianElement>,
}

impl OperatorSector {
    /// Smallest invariant sector containing the supports of `seeds`, for
    /// superoperators `generators` in column-stacking form.
    pub fn closure(hilbert_dim: usize, seeds: &[&CMatrix], generators: &[&CMatrix]) -> Result<Self> {
        let n2 = hilbert_dim * hilbert_dim;
        for s in seeds {
            if s.nrows() != hilbert_dim || s.ncols() != hilbert_dim {
                return Err(Error::Dimension(format!(
                    "seed is {}x{}, expected {hilbert_dim}x{hilbert_dim}",
                    s.nrows(),
                    s.ncols()
                )));
            }
        }
        for g in generators {
            if g.nrows() != n2 || g.ncols() != n2 {
                return Err(Error::Dimension(format!("generator is {}x{}, expected {n2}x{n2}", g.nrows(), g.ncols())));
            }
        }
        let mut seen = vec![false; n2];
        let mut queue = VecDeque::new();
        let visit = |p: usize, seen: &mut Vec<bool>, queue: &mut VecDeque<usize>| {
            let (i, j) = (p % hilbert_dim, p / hilbert_dim);
            for q in [p, j + hilbert_dim * i] {
                if !seen[q] {
                    seen[q] = true;
                    queue.push_back(q);
                }
            }
        };
        for s in seeds {
            for (p, z) in s.iter().enumerate() {
                if *z != C64::from(0.0) {
                    visit(p, &mut seen, &mut queue);
                }
            }
        }
        while let Some(q) = queue.pop_front() {
            for g in generators {
                for (p, z) in g.column(q).iter().enumerate() {
                    if *z != C64::from(0.0) && !seen[p] {
                        visit(p, &mut seen, &mut queue);
                    }
                }
            }
        }
        let mut elements = Vec::new();
        for i in 0..hilbert_dim {
            if seen[i + hilbert_dim * i] {
                elements.push(HermitianElement::Diag(i));
            }
        }
        for j in 0..hilbert_dim {
            for i in 0..j {
                if seen[i + hilbert_dim * j] {
                    elements.push(HermitianElement::Sym(i, j));
                    elements.push(HermitianElement::Antisym(i, j));
                }
            }
        }
        Ok(Self { hilbert_dim, elements })
    }

    /// The full operator space, without any reduction.
    pub fn full(hilbert_dim: usize) -> Self {
        let seed = CMatrix::from_element(hilbert_dim, hilbert_dim, C64::from(1.0));
        Self::closure(hilbert_dim, &[&seed], &[]).expect("consistent dimensions")
    }

    pub fn dim(&self) -> usize {
        self.elements.len()
    }

    pub fn hilbert_dim(&self) -> usize {
        self.hilbert_dim
    }

    pub fn elements(&self) -> &[HermitianElement] {
        &self.elements
    }

    fn vec_index(&self, row: usize, col: usize) -> usize {
        row + self.hilbert_dim * col
    }

    /// Real matrix of `l` in the Hermitian basis: `Re Tr(T_k L(T_l))`.
    pub fn project(&self, l: &CMatrix) -> DMatrix<f64> {
        let n = self.dim();
        let mut out = DMatrix::zeros(n, n);
        for (c, tl) in self.elements.iter().enumerate() {
            let (src, ns) = tl.entries();
            for (r, tk) in self.elements.iter().enumerate() {
                let (dst, nd) = tk.entries();
                let mut acc = C64::from(0.0);
                for &(a, b, v) in &dst[..nd] {
                    let p = self.vec_index(b, a);
                    for &(cc, d, w) in &src[..ns] {
                        acc += v * l[(p, self.vec_index(cc, d))] * w;
                    }
                }
                out[(r, c)] = acc.re;
            }
        }
        out
    }

    /// `Tr(T_k A)` for every basis element; real for Hermitian `a`.
    pub fn functional(&self, a: &CMatrix) -> Vec<C64> {
        self.elements
            .iter()
            .map(|t| {
                let (e, ne) = t.entries();
                e[..ne].iter().map(|&(i, j, v)| v * a[(j, i)]).sum()
            })
            .collect()
    }

    /// Real coordinates of a Hermitian matrix. Fails when `x` has weight
    /// outside the sector.
    pub fn coordinates(&self, x: &CMatrix) -> Result<DVector<f64>> {
        let coords: Vec<f64> = self.functional(x).iter().map(|z| z.re).collect();
        let v = DVector::from_vec(coords);
        let back = self.reconstruct(&v);
        let miss = (x - back).iter().map(|z| z.norm()).fold(0.0, f64::max);
        let scale = x.iter().map(|z| z.norm()).fold(0.0, f64::max).max(1.0);
        if miss > 1e-12 * scale {
            return Err(Error::Dimension(format!("matrix leaves the sector by {miss:.3e}")));
        }
        Ok(v)
    }

    pub fn reconstruct(&self, coords: &DVector<f64>) -> CMatrix {
        self.reconstruct_complex(&coords.map(C64::from))
    }

    /// `Σ_k z_k T_k` for complex weights.
    pub fn reconstruct_complex(&self, coords: &DVector<C64>) -> CMatrix {
        let mut m = CMatrix::zeros(self.hilbert_dim, self.hilbert_dim);
        for (t, z) in self.elements.iter().zip(coords.iter()) {
            let (e, ne) = t.entries();
            for &(i, j, v) in &e[..ne] {
                m[(i, j)] += v * z;
            }
        }
        m
    }

    /// Action of `X ↦ P X Pᵀ` for a basis permutation `P|i⟩ = |perm[i]⟩`:
    /// element `k` maps to `sign · element[image]`. `None` if the sector
    /// is not closed under the permutation.
    pub fn permutation_action(&self, perm: &[usize]) -> Option<Vec<(usize, f64)>> {
        if perm.len() != self.hilbert_dim {
            return None;
        }
        let lookup: std::collections::HashMap<HermitianElement, usize> =
            self.elements.iter().enumerate().map(|(k, e)| (*e, k)).collect();
        self.elements
            .iter()
            .map(|e| {
                let (image, sign) = match *e {
                    HermitianElement::Diag(i) => (HermitianElement::Diag(perm[i]), 1.0),
                    HermitianElement::Sym(i, j) => {
                        let (a, b) = (perm[i], perm[j]);
                        (HermitianElement::Sym(a.min(b), a.max(b)), 1.0)
                    }
                    HermitianElement::Antisym(i, j) => {
                        let (a, b) = (perm[i], perm[j]);
                        if a < b {
                            (HermitianElement::Antisym(a, b), 1.0)
                        } else {
                            (HermitianElement::Antisym(b, a), -1.0)
                        }
                    }
                };
                lookup.get(&image).map(|&k| (k, sign))
            })
            .collect()
    }
}

/// Orthonormal basis `B` of the coordinates left unchanged by a signed
/// involution of the sector basis. Every column has one or two entries.
#[derive(Clone, Debug)]
pub struct EvenSubspace {
    sector_dim: usize,
    columns: Vec<Vec<(usize, f64)>>,
}

impl EvenSubspace {
    /// `None` unless `action` is a signed involution.
    pub fn new(action: &[(usize, f64)]) -> Option<Self> {
        let mut columns = Vec::new();
        for (k, &(img, sign)) in action.iter().enumerate() {
            let (back, back_sign) = *action.get(img)?;
            if back != k || back_sign != sign {
                return None;
            }
            if img == k {
                if sign > 0.0 {
                    columns.push(vec![(k, 1.0)]);
                }
            } else if k < img {
                columns.push(vec![(k, FRAC_1_SQRT_2), (img, sign * FRAC_1_SQRT_2)]);
            }
        }
        Some(Self { sector_dim: action.len(), columns })
    }

    pub fn dim(&self) -> usize {
        self.columns.len()
    }

    /// `Bᵀ L B`.
    pub fn restrict(&self, l: &DMatrix<f64>) -> DMatrix<f64> {
        let n = self.dim();
        DMatrix::from_fn(n, n, |r, c| {
            let mut acc = 0.0;
            for &(i, a) in &self.columns[r] {
                for &(j, b) in &self.columns[c] {
                    acc += a * l[(i, j)] * b;
                }
            }
            acc
        })
    }

    /// `Bᵀ x` for real or complex coordinates.
    pub fn to_subspace<T>(&self, x: &[T]) -> Vec<T>
    where
        T: Copy + std::iter::Sum<T> + std::ops::Mul<f64, Output = T>,
    {
        self.columns.iter().map(|col| col.iter().map(|&(i, a)| x[i] * a).sum()).collect()
    }

    /// `B z`.
    pub fn from_subspace(&self, z: &[f64]) -> DVector<f64> {
        let mut x = DVector::zeros(self.sector_dim);
        for (col, v) in self.columns.iter().zip(z) {
            for &(i, a) in col {
                x[i] += a * v;
            }
        }
        x
    }

    /// Largest violation of `x = B Bᵀ x`.
    pub fn residual(&self, x: &[f64]) -> f64 {
        let back = self.from_subspace(&self.to_subspace(x));
        back.iter().zip(x).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
    }

    /// Largest violation of `L Π = Π L` for the action that defined this
    /// subspace, relative to the largest entry of `L`.
    pub fn commutator_residual(action: &[(usize, f64)], l: &DMatrix<f64>) -> f64 {
        let scale = l.iter().map(|v| v.abs()).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
        let mut worst = 0.0f64;
        for (k, &(ik, sk)) in action.iter().enumerate() {
            for (m, &(im, sm)) in action.iter().enumerate() {
                worst = worst.max((l[(ik, im)] * sk * sm - l[(k, m)]).abs());
            }
        }
        worst / scale
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lindblad::{commutator_superop, dissipator, vectorize};

    fn toy_hermitian(n: usize, seed: u64) -> CMatrix {
        let mut s = seed;
        let mut next = || {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((s >> 11) as f64 / (1u64 << 53) as f64) - 0.5
        };
        let a = CMatrix::from_fn(n, n, |_, _| C64::new(next(), next()));
        &a + a.adjoint()
    }

    #[test]
    fn full_sector_is_orthonormal_basis() {
        let sec = OperatorSector::full(3);
        assert_eq!(sec.dim(), 9);
        for (k, t) in sec.elements().iter().enumerate() {
            let mut v = DVector::zeros(9);
            v[k] = 1.0;
            let m = sec.reconstruct(&v);
            assert!((&m - m.adjoint()).norm() < 1e-15, "{t:?}");
            let c = sec.functional(&m);
            for (l, z) in c.iter().enumerate() {
                let expected = if l == k { 1.0 } else { 0.0 };
                assert!((z - C64::from(expected)).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn coordinates_round_trip() {
        let sec = OperatorSector::full(4);
        let x = toy_hermitian(4, 9);
        let c = sec.coordinates(&x).unwrap();
        assert!((sec.reconstruct(&c) - x).norm() < 1e-14);
    }

    #[test]
    fn projection_matches_complex_action() {
        let n = 4;
        let h = toy_hermitian(n, 3);
        let mut l0 = CMatrix::zeros(n, n);
        l0[(0, 1)] = C64::from(1.0);
        let mut l1 = CMatrix::zeros(n, n);
        l1[(2, 2)] = C64::from(1.0);
        l1[(3, 3)] = C64::from(-1.0);
        let sup = commutator_superop(&h) + dissipator(&[l0, l1], 0.7);
        let sec = OperatorSector::full(n);
        let lr = sec.project(&sup);
        let x = toy_hermitian(n, 5);
        let direct = &sup * vectorize(&x);
        let via = sec.reconstruct(&(&lr * sec.coordinates(&x).unwrap()));
        assert!((vectorize(&via) - direct).norm() < 1e-12);
    }

    #[test]
    fn closure_finds_block_structure() {
        // Hamiltonian without coupling between {0,1} and {2}.
        let mut h = CMatrix::zeros(3, 3);
        h[(0, 1)] = C64::from(1.0);
        h[(1, 0)] = C64::from(1.0);
        h[(2, 2)] = C64::from(2.0);
        let l = commutator_superop(&h);
        let mut seed = CMatrix::zeros(3, 3);
        seed[(0, 0)] = C64::from(1.0);
        let sec = OperatorSector::closure(3, &[&seed], &[&l]).unwrap();
        assert_eq!(sec.dim(), 4);
        let mut outside = CMatrix::zeros(3, 3);
        outside[(2, 2)] = C64::from(1.0);
        assert!(sec.coordinates(&outside).is_err());
        assert!(OperatorSector::closure(2, &[&seed], &[]).is_err());
    }

    #[test]
    fn even_subspace_of_a_swap() {
        let sec = OperatorSector::full(3);
        // Swap states 0 and 1.
        let action = sec.permutation_action(&[1, 0, 2]).unwrap();
        let even = EvenSubspace::new(&action).unwrap();
        // Operators symmetric under the swap: 9 − dim of the odd part.
        assert_eq!(even.dim(), 5);
        let mut x = CMatrix::zeros(3, 3);
        x[(0, 0)] = C64::from(0.3);
        x[(1, 1)] = C64::from(0.3);
        x[(0, 2)] = C64::new(0.1, 0.2);
        x[(2, 0)] = C64::new(0.1, -0.2);
        x[(1, 2)] = C64::new(0.1, 0.2);
        x[(2, 1)] = C64::new(0.1, -0.2);
        x[(0, 1)] = C64::new(0.0, 0.0);
        let c = sec.coordinates(&x).unwrap();
        assert!(even.residual(c.as_slice()) < 1e-15);
        let z = even.to_subspace(c.as_slice());
        assert!((even.from_subspace(&z) - &c).norm() < 1e-15);
        x[(0, 0)] = C64::from(0.5);
        let c = sec.coordinates(&x).unwrap();
        assert!(even.residual(c.as_slice()) > 0.1);
        assert!(sec.permutation_action(&[0, 1]).is_none());
    }

    #[test]
    fn restriction_of_symmetric_generator() {
        let n = 3;
        let mut h = toy_hermitian(n, 11);
        // Make h invariant under swapping 0 and 1.
        h[(1, 1)] = h[(0, 0)];
        h[(1, 2)] = h[(0, 2)];
        h[(2, 1)] = h[(2, 0)];
        h[(0, 1)] = C64::from(h[(0, 1)].re);
        h[(1, 0)] = h[(0, 1)];
        let sup = commutator_superop(&h);
        let sec = OperatorSector::full(n);
        let lr = sec.project(&sup);
        let action = sec.permutation_action(&[1, 0, 2]).unwrap();
        assert!(EvenSubspace::commutator_residual(&action, &lr) < 1e-14);
        let even = EvenSubspace::new(&action).unwrap();
        let le = even.restrict(&lr);
        let z: Vec<f64> = (0..even.dim()).map(|k| 0.1 * k as f64 - 0.2).collect();
        let full = &lr * even.from_subspace(&z);
        let via = even.from_subspace((&le * DVector::from_vec(z)).as_slice());
        assert!((full - via).norm() < 1e-13);
        let asym = commutator_superop(&toy_hermitian(n, 12));
        assert!(EvenSubspace::commutator_residual(&action, &sec.project(&asym)) > 1e-3);
    }
}
