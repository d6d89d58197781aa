//! The standard symplectic vector space `(V, ω₀)` of dimension `2l`.
//!
//! The adapted basis `e_1..e_2l` has `e_1..e_l` spanning the Lagrangian `L` and
//! `e_{l+1}..e_2l` spanning `L'`, with `ω₀(e_i, e_{l+i}) = 1`. Indices are
//! 0-based in code and 1-based in anything printed.

use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::{self, OperatorMatrix};

/// A vector of `V`, by components against `e_i`.
#[derive(Clone, Debug, PartialEq)]
pub struct Vector<T>(pub Vec<T>);

/// A covector of `V*`, by components against the dual basis `ε^i`.
#[derive(Clone, Debug, PartialEq)]
pub struct Covector<T>(pub Vec<T>);

impl<T: Field> Vector<T> {
    pub fn zero(dim: usize) -> Self {
        Vector(vec![T::zero(); dim])
    }

    /// `e_i` (0-based).
    pub fn basis(dim: usize, i: usize) -> Self {
        let mut v = Self::zero(dim);
        v.0[i] = T::one();
        v
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|x| x.is_zero())
    }

    /// Whether the projection to the Lagrangian `L` (first `l` components) is nonzero.
    pub fn has_lagrangian_part(&self) -> bool {
        let l = self.0.len() / 2;
        self.0[..l].iter().any(|x| !x.is_zero())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }
}

impl<T: Field> Covector<T> {
    pub fn zero(dim: usize) -> Self {
        Covector(vec![T::zero(); dim])
    }

    /// `ε^i` (0-based).
    pub fn basis(dim: usize, i: usize) -> Self {
        let mut v = Self::zero(dim);
        v.0[i] = T::one();
        v
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|x| x.is_zero())
    }

    /// `α(w)`.
    pub fn eval(&self, w: &Vector<T>) -> T {
        self.0.iter().zip(&w.0).fold(T::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SymplecticSpace<T> {
    l: usize,
    omega_lower: Vec<Vec<T>>,
    omega_upper: Vec<Vec<T>>,
}

impl<T: Field> SymplecticSpace<T> {
    /// The standard space of half-dimension `l ≥ 1`.
    pub fn standard(l: usize) -> Result<Self> {
        if l == 0 {
            return Err(Error::contract("symplectic half-dimension l must be at least 1"));
        }
        let n = 2 * l;
        let mut lower = vec![vec![T::zero(); n]; n];
        for i in 0..l {
            lower[i][l + i] = T::one();
            lower[l + i][i] = -T::one();
        }
        // ω_{ij} ω^{kj} = δ_i^k: for each k the row (ω^{kj})_j solves Ω u = e_k.
        let omega = OperatorMatrix::from_dense(&lower);
        let mut upper = vec![vec![T::zero(); n]; n];
        for (k, row) in upper.iter_mut().enumerate() {
            let mut e = vec![T::zero(); n];
            e[k] = T::one();
            *row = linalg::solve(&omega, &e)?.ok_or_else(|| Error::contract("ω₀ is degenerate"))?;
        }
        Ok(SymplecticSpace { l, omega_lower: lower, omega_upper: upper })
    }

    pub fn l(&self) -> usize {
        self.l
    }

    /// `2l`.
    pub fn dim(&self) -> usize {
        2 * self.l
    }

    /// `ω_{ij}`.
    pub fn omega(&self, i: usize, j: usize) -> &T {
        &self.omega_lower[i][j]
    }

    /// `ω^{ij}`.
    pub fn omega_inv(&self, i: usize, j: usize) -> &T {
        &self.omega_upper[i][j]
    }

    pub fn omega_lower(&self) -> &[Vec<T>] {
        &self.omega_lower
    }

    pub fn omega_upper(&self) -> &[Vec<T>] {
        &self.omega_upper
    }

    /// `ω₀(v, w)`.
    pub fn pairing(&self, v: &Vector<T>, w: &Vector<T>) -> T {
        let mut acc = T::zero();
        for (i, vi) in v.0.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
            for (j, wj) in w.0.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
                acc = acc + self.omega_lower[i][j].clone() * vi.clone() * wj.clone();
            }
        }
        acc
    }

    pub fn basis_vector(&self, i: usize) -> Vector<T> {
        Vector::basis(self.dim(), i)
    }

    pub fn basis_covector(&self, i: usize) -> Covector<T> {
        Covector::basis(self.dim(), i)
    }

    /// `α^♯` with `(α^♯)^k = ω^{kj} α_j`, so that `α(w) = ω₀(α^♯, w)`.
    pub fn sharp(&self, alpha: &Covector<T>) -> Vector<T> {
        let n = self.dim();
        Vector(
            (0..n)
                .map(|k| {
                    (0..n).fold(T::zero(), |acc, j| acc + self.omega_upper[k][j].clone() * alpha.0[j].clone())
                })
                .collect(),
        )
    }

    /// Inverse of [`sharp`](Self::sharp): `(v^♭)_j = v^i ω_{ij}`.
    pub fn flat(&self, v: &Vector<T>) -> Covector<T> {
        let n = self.dim();
        Covector(
            (0..n)
                .map(|j| (0..n).fold(T::zero(), |acc, i| acc + v.0[i].clone() * self.omega_lower[i][j].clone()))
                .collect(),
        )
    }

    /// Raises the first index of a rank-2 covariant tensor: `K^i_b = ω^{ic} K_{cb}`.
    pub fn raise_first(&self, k: &[Vec<T>]) -> Vec<Vec<T>> {
        let n = self.dim();
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|b| (0..n).fold(T::zero(), |acc, c| acc + self.omega_upper[i][c].clone() * k[c][b].clone()))
                    .collect()
            })
            .collect()
    }

    /// Lowers the first index of a rank-(1,1) tensor: `K_{ib} = K^t_b ω_{ti}`.
    pub fn lower_first(&self, k: &[Vec<T>]) -> Vec<Vec<T>> {
        let n = self.dim();
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|b| (0..n).fold(T::zero(), |acc, t| acc + k[t][b].clone() * self.omega_lower[t][i].clone()))
                    .collect()
            })
            .collect()
    }

    /// The matrix of `♯` in the bases `ε^i`, `e_i`.
    pub fn sharp_matrix(&self) -> OperatorMatrix<T> {
        OperatorMatrix::from_dense(&self.omega_upper)
    }
}
