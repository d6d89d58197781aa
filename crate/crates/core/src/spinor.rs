//! Polynomial model of symplectic spinors, `S = C[x¹, …, xˡ]`.
//!
//! Clifford multiplication by the adapted basis is `e_a.s = i xᵃ s` and
//! `e_{l+a}.s = ∂s/∂xᵃ` for `a = 1..l`. This is the dense polynomial subspace,
//! not the smooth globalization: multiplication by a vector of `L'` is a pure
//! derivative and kills constants.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};

use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::{self, BasisLabel, OperatorMatrix, SpaceKind};
use crate::symplectic::{SymplecticSpace, Vector};

/// Exponent tuple `(a₁, …, a_l)` of the monomial `(x¹)^a₁ ⋯ (xˡ)^a_l`.
///
/// Ordered by total degree first, then by descending exponent tuples, so that
/// `x¹` comes before `x²` and `(x¹)²` before `x¹x²`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one(l: usize) -> Self {
        Monomial(vec![0; l])
    }

    /// `xᵃ` (0-based variable index).
    pub fn var(l: usize, a: usize) -> Self {
        let mut m = Self::one(l);
        m.0[a] = 1;
        m
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_even(&self) -> bool {
        self.degree().is_multiple_of(2)
    }

    /// All monomials of total degree exactly `d` in `l` variables, ascending order.
    pub fn of_degree(l: usize, d: u32) -> Vec<Monomial> {
        fn rec(l: usize, d: u32, prefix: &mut Vec<u32>, out: &mut Vec<Monomial>) {
            if prefix.len() + 1 == l {
                prefix.push(d);
                out.push(Monomial(prefix.clone()));
                prefix.pop();
                return;
            }
            for first in (0..=d).rev() {
                prefix.push(first);
                rec(l, d - first, prefix, out);
                prefix.pop();
            }
        }
        let mut out = Vec::new();
        if l == 0 {
            if d == 0 {
                out.push(Monomial(vec![]));
            }
            return out;
        }
        rec(l, d, &mut Vec::with_capacity(l), &mut out);
        out
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| other.0.cmp(&self.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A polynomial spinor; stored coefficients are nonzero.
#[derive(Clone, Debug, PartialEq)]
pub struct Spinor<T> {
    l: usize,
    terms: BTreeMap<Monomial, T>,
}

impl<T: Field> Spinor<T> {
    pub fn zero(l: usize) -> Self {
        Spinor { l, terms: BTreeMap::new() }
    }

    pub fn one(l: usize) -> Self {
        Self::monomial(Monomial::one(l), T::one())
    }

    pub fn monomial(m: Monomial, coef: T) -> Self {
        let mut s = Self::zero(m.0.len());
        s.add_term(m, coef);
        s
    }

    pub fn from_terms(l: usize, terms: impl IntoIterator<Item = (Monomial, T)>) -> Self {
        let mut s = Self::zero(l);
        for (m, c) in terms {
            assert_eq!(m.0.len(), l, "monomial arity does not match l");
            s.add_term(m, c);
        }
        s
    }

    pub fn l(&self) -> usize {
        self.l
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &T)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> T {
        self.terms.get(m).cloned().unwrap_or_else(T::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Maximal total degree over the support; `None` for the zero spinor.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    pub fn add_term(&mut self, m: Monomial, coef: T) {
        if coef.is_zero() {
            return;
        }
        match self.terms.remove(&m) {
            Some(c) => {
                let v = c + coef;
                if !v.is_zero() {
                    self.terms.insert(m, v);
                }
            }
            None => {
                self.terms.insert(m, coef);
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-T::one()))
    }

    pub fn scale(&self, c: &T) -> Self {
        if c.is_zero() {
            return Self::zero(self.l);
        }
        Spinor { l: self.l, terms: self.terms.iter().map(|(m, v)| (m.clone(), v.clone() * c.clone())).collect() }
    }

    /// Multiplication by the variable `xᵃ`.
    pub fn mul_var(&self, a: usize) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| {
                let mut m = m.clone();
                m.0[a] += 1;
                (m, c.clone())
            })
            .collect();
        Spinor { l: self.l, terms }
    }

    /// `∂/∂xᵃ`.
    pub fn diff(&self, a: usize) -> Self {
        let mut out = Self::zero(self.l);
        for (m, c) in &self.terms {
            let e = m.0[a];
            if e == 0 {
                continue;
            }
            let mut m = m.clone();
            m.0[a] -= 1;
            out.add_term(m, c.clone() * T::from_int(e as i64));
        }
        out
    }

    /// Clifford multiplication by the basis vector `e_k` (0-based).
    pub fn clifford_basis(&self, k: usize) -> Self {
        if k < self.l {
            self.mul_var(k).scale(&T::imag_unit())
        } else {
            self.diff(k - self.l)
        }
    }

    /// Even and odd total-degree parts.
    pub fn parity_split(&self) -> (Self, Self) {
        let mut even = Self::zero(self.l);
        let mut odd = Self::zero(self.l);
        for (m, c) in &self.terms {
            if m.is_even() {
                even.terms.insert(m.clone(), c.clone());
            } else {
                odd.terms.insert(m.clone(), c.clone());
            }
        }
        (even, odd)
    }
}

/// `v.s`, the linear extension of the generator rules.
pub fn clifford_apply<T: Field>(sp: &SymplecticSpace<T>, v: &Vector<T>, s: &Spinor<T>) -> Spinor<T> {
    assert_eq!(v.dim(), sp.dim(), "vector dimension does not match the space");
    let mut out = Spinor::zero(sp.l());
    for (k, c) in v.0.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
        out = out.add(&s.clifford_basis(k).scale(c));
    }
    out
}

/// `v.w.s − w.v.s + i ω₀(v,w) s`, which vanishes identically.
pub fn commutator_defect<T: Field>(sp: &SymplecticSpace<T>, v: &Vector<T>, w: &Vector<T>, s: &Spinor<T>) -> Spinor<T> {
    let vw = clifford_apply(sp, v, &clifford_apply(sp, w, s));
    let wv = clifford_apply(sp, w, &clifford_apply(sp, v, s));
    let shift = s.scale(&(T::imag_unit() * sp.pairing(v, w)));
    vw.sub(&wv).add(&shift)
}

/// The monomials of degree at most `D` in `l` variables, in [`Monomial`] order.
#[derive(Clone, Debug)]
pub struct SpinorWindow {
    l: usize,
    max_degree: u32,
    basis: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
}

impl SpinorWindow {
    pub fn new(l: usize, max_degree: u32) -> Self {
        let basis: Vec<Monomial> = (0..=max_degree).flat_map(|d| Monomial::of_degree(l, d)).collect();
        let index = basis.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
        SpinorWindow { l, max_degree, basis, index }
    }

    pub fn l(&self) -> usize {
        self.l
    }

    pub fn max_degree(&self) -> u32 {
        self.max_degree
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Monomial] {
        &self.basis
    }

    pub fn index_of(&self, m: &Monomial) -> Option<usize> {
        self.index.get(m).copied()
    }

    pub fn label(&self) -> BasisLabel {
        BasisLabel::new(SpaceKind::Spinors, 0, self.max_degree as usize)
    }

    /// Coordinates of `s`; errors when `s` leaves the window.
    pub fn coordinates<T: Field>(&self, s: &Spinor<T>) -> Result<Vec<T>> {
        let mut v = vec![T::zero(); self.dim()];
        for (m, c) in s.terms() {
            let k = self
                .index_of(m)
                .ok_or_else(|| Error::contract(format!("spinor of degree {} leaves the window", m.degree())))?;
            v[k] = c.clone();
        }
        Ok(v)
    }

    pub fn spinor<T: Field>(&self, coords: &[T]) -> Spinor<T> {
        Spinor::from_terms(self.l, self.basis.iter().cloned().zip(coords.iter().cloned()))
    }
}

/// Matrix of `s ↦ v.s` from the degree-`D` window into the degree-`D+1` window.
pub fn clifford_matrix<T: Field>(sp: &SymplecticSpace<T>, v: &Vector<T>, win: &SpinorWindow) -> OperatorMatrix<T> {
    let target = SpinorWindow::new(win.l(), win.max_degree() + 1);
    let columns = win
        .basis()
        .iter()
        .map(|m| {
            let image = clifford_apply(sp, v, &Spinor::monomial(m.clone(), T::one()));
            image
                .terms()
                .map(|(m, c)| (target.index_of(m).expect("degree grows by at most one"), c.clone()))
                .collect()
        })
        .collect();
    OperatorMatrix::from_sparse_columns(target.dim(), columns).with_labels(win.label(), target.label())
}

/// An exact basis of the kernel of Clifford multiplication by `v ≠ 0` on the window.
pub fn clifford_kernel<T: Field>(sp: &SymplecticSpace<T>, v: &Vector<T>, win: &SpinorWindow) -> Result<Vec<Spinor<T>>> {
    if v.is_zero() {
        return Err(Error::contract("Clifford kernel requested for the zero vector"));
    }
    let m = clifford_matrix(sp, v, win);
    Ok(linalg::kernel_basis(&m).iter().map(|k| win.spinor(k)).collect())
}
