//! Spinor valued exterior forms `Λ^r V* ⊗ S`.
//!
//! A form index is a strictly increasing tuple `I ⊆ {1..2l}`, stored as a bit
//! set. Wedge and contraction compute the permutation sign on insertion or
//! removal so every value has a unique representation.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::{BasisLabel, OperatorMatrix, SpaceKind};
use crate::spinor::{Monomial, Spinor, SpinorWindow};
use crate::symplectic::{Covector, SymplecticSpace, Vector};

/// A sorted set of 0-based covector indices, `ε^{i₁} ∧ ⋯ ∧ ε^{i_r}`.
///
/// Ordered by degree, then lexicographically by the sorted index tuple.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FormIndex(u32);

impl FormIndex {
    pub const EMPTY: FormIndex = FormIndex(0);

    /// From 0-based indices; `None` when an index repeats.
    pub fn from_indices(indices: &[usize]) -> Option<Self> {
        let mut bits = 0u32;
        for &i in indices {
            assert!(i < 32, "form index {i} out of range");
            if bits & (1 << i) != 0 {
                return None;
            }
            bits |= 1 << i;
        }
        Some(FormIndex(bits))
    }

    pub fn degree(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn contains(self, i: usize) -> bool {
        self.0 & (1 << i) != 0
    }

    /// Sorted 0-based indices.
    pub fn indices(self) -> impl Iterator<Item = usize> {
        (0..32).filter(move |&i| self.0 & (1 << i) != 0)
    }

    fn below(self, i: usize) -> u32 {
        (self.0 & ((1u32 << i) - 1)).count_ones()
    }

    /// `ε^i ∧ ε^I = sign · ε^{I ∪ {i}}`; `None` when `i ∈ I`.
    pub fn wedge_left(self, i: usize) -> Option<(bool, FormIndex)> {
        if self.contains(i) {
            return None;
        }
        Some((self.below(i) % 2 == 1, FormIndex(self.0 | (1 << i))))
    }

    /// `ι_{e_i} ε^I = sign · ε^{I \ {i}}`; `None` when `i ∉ I`.
    pub fn contract(self, i: usize) -> Option<(bool, FormIndex)> {
        if !self.contains(i) {
            return None;
        }
        Some((self.below(i) % 2 == 1, FormIndex(self.0 & !(1 << i))))
    }

    /// All `r`-subsets of `{0..n}`, ascending.
    pub fn subsets(n: usize, r: usize) -> Vec<FormIndex> {
        fn rec(start: usize, n: usize, r: usize, bits: u32, out: &mut Vec<FormIndex>) {
            if r == 0 {
                out.push(FormIndex(bits));
                return;
            }
            for i in start..=n - r {
                rec(i + 1, n, r - 1, bits | (1 << i), out);
            }
        }
        let mut out = Vec::new();
        if r <= n {
            rec(0, n, r, 0, &mut out);
        }
        out
    }
}

impl Ord for FormIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| self.indices().cmp(other.indices()))
    }
}

impl PartialOrd for FormIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

pub(crate) fn signed<T: Field>(neg: bool, c: T) -> T {
    if neg {
        -c
    } else {
        c
    }
}

/// A homogeneous element of `Λ^r V* ⊗ S`; stored coefficients are nonzero.
///
/// The zero form lies in every degree, so two zero forms compare equal
/// whatever their recorded `r`.
#[derive(Clone, Debug)]
pub struct SpinorForm<T> {
    l: usize,
    r: usize,
    terms: BTreeMap<(FormIndex, Monomial), T>,
}

impl<T: PartialEq> PartialEq for SpinorForm<T> {
    fn eq(&self, other: &Self) -> bool {
        self.l == other.l && (self.r == other.r || self.terms.is_empty()) && self.terms == other.terms
    }
}

impl<T: Field> SpinorForm<T> {
    pub fn zero(l: usize, r: usize) -> Self {
        SpinorForm { l, r, terms: BTreeMap::new() }
    }

    /// `ε^I ⊗ s`.
    pub fn tensor(form: FormIndex, s: &Spinor<T>) -> Self {
        let mut out = Self::zero(s.l(), form.degree());
        for (m, c) in s.terms() {
            out.add_term(form, m.clone(), c.clone());
        }
        out
    }

    /// A single basis element `ε^I ⊗ x^m`.
    pub fn basis(l: usize, form: FormIndex, m: Monomial) -> Self {
        let mut out = Self::zero(l, form.degree());
        out.add_term(form, m, T::one());
        out
    }

    pub fn l(&self) -> usize {
        self.l
    }

    pub fn form_degree(&self) -> usize {
        self.r
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (FormIndex, &Monomial, &T)> {
        self.terms.iter().map(|((f, m), c)| (*f, m, c))
    }

    /// Highest polynomial degree in the spinor factor; `None` for zero.
    pub fn spinor_degree(&self) -> Option<u32> {
        self.terms.keys().map(|(_, m)| m.degree()).max()
    }

    pub fn add_term(&mut self, form: FormIndex, m: Monomial, coef: T) {
        assert_eq!(form.degree(), self.r, "inhomogeneous spinor form");
        if coef.is_zero() {
            return;
        }
        let key = (form, m);
        match self.terms.remove(&key) {
            Some(c) => {
                let v = c + coef;
                if !v.is_zero() {
                    self.terms.insert(key, v);
                }
            }
            None => {
                self.terms.insert(key, coef);
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        if other.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return other.clone();
        }
        assert_eq!(self.r, other.r, "adding forms of different degree");
        let mut out = self.clone();
        for ((f, m), c) in &other.terms {
            out.add_term(*f, m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-T::one()))
    }

    pub fn scale(&self, c: &T) -> Self {
        if c.is_zero() {
            return Self::zero(self.l, self.r);
        }
        SpinorForm {
            l: self.l,
            r: self.r,
            terms: self.terms.iter().map(|(k, v)| (k.clone(), v.clone() * c.clone())).collect(),
        }
    }

    /// Applies a linear map of the spinor factor, basis element by basis element.
    pub fn map_spinor(&self, f: impl Fn(&Spinor<T>) -> Spinor<T>) -> Self {
        let mut out = Self::zero(self.l, self.r);
        for ((form, m), c) in &self.terms {
            let image = f(&Spinor::monomial(m.clone(), c.clone()));
            for (m2, c2) in image.terms() {
                out.add_term(*form, m2.clone(), c2.clone());
            }
        }
        out
    }

    /// `ε^i ∧ ψ`.
    pub fn wedge_basis(&self, i: usize) -> Self {
        let mut out = Self::zero(self.l, self.r + 1);
        for ((f, m), c) in &self.terms {
            if let Some((neg, g)) = f.wedge_left(i) {
                out.add_term(g, m.clone(), signed(neg, c.clone()));
            }
        }
        out
    }

    /// `ι_{e_i} ψ`. Contracting a 0-form gives the zero 0-form.
    pub fn contract_basis(&self, i: usize) -> Self {
        let mut out = Self::zero(self.l, self.r.saturating_sub(1));
        for ((f, m), c) in &self.terms {
            if let Some((neg, g)) = f.contract(i) {
                out.add_term(g, m.clone(), signed(neg, c.clone()));
            }
        }
        out
    }

    /// `e_k.ψ`, acting on the spinor factor.
    pub fn clifford_basis(&self, k: usize) -> Self {
        self.map_spinor(|s| s.clifford_basis(k))
    }

    /// Splits by parity of the spinor factor.
    pub fn parity_split(&self) -> (Self, Self) {
        let mut even = Self::zero(self.l, self.r);
        let mut odd = Self::zero(self.l, self.r);
        for ((f, m), c) in &self.terms {
            let part = if m.is_even() { &mut even } else { &mut odd };
            part.terms.insert((*f, m.clone()), c.clone());
        }
        (even, odd)
    }
}

/// `ξ ∧ ψ`.
pub fn wedge<T: Field>(xi: &Covector<T>, psi: &SpinorForm<T>) -> SpinorForm<T> {
    let mut out = SpinorForm::zero(psi.l(), psi.form_degree() + 1);
    for (i, c) in xi.0.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
        out = out.add(&psi.wedge_basis(i).scale(c));
    }
    out
}

/// `ι_v ψ`.
pub fn contract<T: Field>(v: &Vector<T>, psi: &SpinorForm<T>) -> SpinorForm<T> {
    let mut out = SpinorForm::zero(psi.l(), psi.form_degree().saturating_sub(1));
    for (i, c) in v.0.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
        out = out.add(&psi.contract_basis(i).scale(c));
    }
    out
}

/// `v.ψ`, Clifford multiplication on the spinor factor.
pub fn clifford_on_form<T: Field>(sp: &SymplecticSpace<T>, v: &Vector<T>, psi: &SpinorForm<T>) -> SpinorForm<T> {
    assert_eq!(v.dim(), sp.dim(), "vector dimension does not match the space");
    let mut out = SpinorForm::zero(psi.l(), psi.form_degree());
    for (k, c) in v.0.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
        out = out.add(&psi.clifford_basis(k).scale(c));
    }
    out
}

/// The basis `(r-subsets of {1..2l}) × (monomials of degree ≤ D)` of a truncation
/// of `Λ^r V* ⊗ S`, ordered form-major.
#[derive(Clone, Debug)]
pub struct FormWindow {
    l: usize,
    r: usize,
    max_degree: u32,
    basis: Vec<(FormIndex, Monomial)>,
    index: HashMap<(FormIndex, Monomial), usize>,
}

impl FormWindow {
    pub fn new(l: usize, r: usize, max_degree: u32) -> Result<Self> {
        if r > 2 * l {
            return Err(Error::contract(format!("form degree {r} exceeds 2l = {}", 2 * l)));
        }
        let spinors = SpinorWindow::new(l, max_degree);
        let basis: Vec<(FormIndex, Monomial)> = FormIndex::subsets(2 * l, r)
            .into_iter()
            .flat_map(|f| spinors.basis().iter().map(move |m| (f, m.clone())))
            .collect();
        let index = basis.iter().cloned().enumerate().map(|(i, k)| (k, i)).collect();
        Ok(FormWindow { l, r, max_degree, basis, index })
    }

    pub fn l(&self) -> usize {
        self.l
    }

    pub fn form_degree(&self) -> usize {
        self.r
    }

    pub fn max_degree(&self) -> u32 {
        self.max_degree
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[(FormIndex, Monomial)] {
        &self.basis
    }

    pub fn basis_form<T: Field>(&self, k: usize) -> SpinorForm<T> {
        let (f, m) = &self.basis[k];
        SpinorForm::basis(self.l, *f, m.clone())
    }

    pub fn label(&self) -> BasisLabel {
        BasisLabel::new(SpaceKind::Forms, self.r, self.max_degree as usize)
    }

    /// Sparse coordinates of `psi`; errors when `psi` leaves the window.
    pub fn sparse_coordinates<T: Field>(&self, psi: &SpinorForm<T>) -> Result<Vec<(usize, T)>> {
        if psi.is_zero() {
            return Ok(vec![]);
        }
        if psi.form_degree() != self.r {
            return Err(Error::contract(format!(
                "form of degree {} does not belong to a degree-{} window",
                psi.form_degree(),
                self.r
            )));
        }
        psi.terms()
            .map(|(f, m, c)| {
                self.index
                    .get(&(f, m.clone()))
                    .map(|&k| (k, c.clone()))
                    .ok_or_else(|| Error::contract(format!("spinor degree {} exceeds window bound {}", m.degree(), self.max_degree)))
            })
            .collect()
    }

    pub fn coordinates<T: Field>(&self, psi: &SpinorForm<T>) -> Result<Vec<T>> {
        let mut v = vec![T::zero(); self.dim()];
        for (k, c) in self.sparse_coordinates(psi)? {
            v[k] = c;
        }
        Ok(v)
    }

    pub fn form<T: Field>(&self, coords: &[T]) -> SpinorForm<T> {
        let mut out = SpinorForm::zero(self.l, self.r);
        for (k, c) in coords.iter().enumerate() {
            let (f, m) = &self.basis[k];
            out.add_term(*f, m.clone(), c.clone());
        }
        out
    }
}

/// The ordered basis descriptors of a window.
pub fn enumerate_basis(l: usize, r: usize, max_degree: u32) -> Result<Vec<(FormIndex, Monomial)>> {
    Ok(FormWindow::new(l, r, max_degree)?.basis)
}

/// Matrix of `op` with columns indexed by `inputs` and rows by `codomain`.
pub fn matrix_on<T, F>(inputs: &[SpinorForm<T>], codomain: &FormWindow, domain_label: BasisLabel, op: F) -> Result<OperatorMatrix<T>>
where
    T: Field,
    F: Fn(&SpinorForm<T>) -> SpinorForm<T> + Sync,
{
    let columns: Result<Vec<Vec<(usize, T)>>> =
        inputs.par_iter().map(|psi| codomain.sparse_coordinates(&op(psi))).collect();
    Ok(OperatorMatrix::from_sparse_columns(codomain.dim(), columns?).with_labels(domain_label, codomain.label()))
}

/// Matrix of `op` between two windows, assembled column by column.
pub fn operator_matrix<T, F>(domain: &FormWindow, codomain: &FormWindow, op: F) -> Result<OperatorMatrix<T>>
where
    T: Field,
    F: Fn(&SpinorForm<T>) -> SpinorForm<T> + Sync,
{
    let inputs: Vec<SpinorForm<T>> = (0..domain.dim()).map(|k| domain.basis_form(k)).collect();
    matrix_on(&inputs, codomain, domain.label(), op)
}

/// A homogeneous element of `Λ^r V*` with no spinor factor.
#[derive(Clone, Debug, PartialEq)]
pub struct ExteriorForm<T> {
    dim: usize,
    r: usize,
    terms: BTreeMap<FormIndex, T>,
}

impl<T: Field> ExteriorForm<T> {
    pub fn zero(dim: usize, r: usize) -> Self {
        ExteriorForm { dim, r, terms: BTreeMap::new() }
    }

    pub fn from_terms(dim: usize, r: usize, terms: impl IntoIterator<Item = (FormIndex, T)>) -> Self {
        let mut out = Self::zero(dim, r);
        for (f, c) in terms {
            out.add_term(f, c);
        }
        out
    }

    pub fn from_covector(xi: &Covector<T>) -> Self {
        Self::from_terms(xi.dim(), 1, xi.0.iter().enumerate().map(|(i, c)| (FormIndex(1 << i), c.clone())))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degree(&self) -> usize {
        self.r
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (FormIndex, &T)> {
        self.terms.iter().map(|(f, c)| (*f, c))
    }

    pub fn coefficient(&self, f: FormIndex) -> T {
        self.terms.get(&f).cloned().unwrap_or_else(T::zero)
    }

    pub fn add_term(&mut self, f: FormIndex, c: T) {
        assert_eq!(f.degree(), self.r, "inhomogeneous exterior form");
        if c.is_zero() {
            return;
        }
        let v = self.terms.remove(&f).map_or(c.clone(), |old| old + c);
        if !v.is_zero() {
            self.terms.insert(f, v);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (f, c) in &other.terms {
            out.add_term(*f, c.clone());
        }
        out
    }

    /// `ξ ∧ self`.
    pub fn wedge_covector(&self, xi: &Covector<T>) -> Self {
        let mut out = Self::zero(self.dim, self.r + 1);
        for (i, a) in xi.0.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            for (f, c) in &self.terms {
                if let Some((neg, g)) = f.wedge_left(i) {
                    out.add_term(g, signed(neg, a.clone() * c.clone()));
                }
            }
        }
        out
    }

    /// Coordinates against the ascending basis of `Λ^r`.
    pub fn coordinates(&self) -> Vec<T> {
        FormIndex::subsets(self.dim, self.r).into_iter().map(|f| self.coefficient(f)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Scalar;

    fn sc(n: i64) -> Scalar {
        Scalar::from_int(n)
    }

    fn f(ix: &[usize]) -> FormIndex {
        FormIndex::from_indices(ix).unwrap()
    }

    fn one(l: usize) -> Spinor<Scalar> {
        Spinor::one(l)
    }

    fn x(l: usize, a: usize) -> Spinor<Scalar> {
        Spinor::monomial(Monomial::var(l, a), sc(1))
    }

    #[test]
    fn form_index_order_is_lexicographic() {
        let subs = FormIndex::subsets(4, 2);
        let tuples: Vec<Vec<usize>> = subs.iter().map(|s| s.indices().collect()).collect();
        assert_eq!(tuples, vec![vec![0, 1], vec![0, 2], vec![0, 3], vec![1, 2], vec![1, 3], vec![2, 3]]);
        let mut sorted = subs.clone();
        sorted.sort();
        assert_eq!(sorted, subs);
        assert_eq!(FormIndex::from_indices(&[1, 1]), None);
    }

    #[test]
    fn wedge_examples() {
        let sp = SymplecticSpace::<Scalar>::standard(1).unwrap();
        let psi = SpinorForm::tensor(f(&[1]), &one(1));
        assert_eq!(wedge(&sp.basis_covector(0), &psi), SpinorForm::tensor(f(&[0, 1]), &one(1)));
        // ε² ∧ ε¹ = −ε¹ ∧ ε²
        let psi1 = SpinorForm::tensor(f(&[0]), &one(1));
        assert_eq!(wedge(&sp.basis_covector(1), &psi1), SpinorForm::tensor(f(&[0, 1]), &one(1)).scale(&sc(-1)));
        let s = x(1, 0).add(&one(1));
        assert!(wedge(&sp.basis_covector(0), &SpinorForm::tensor(f(&[0]), &s)).is_zero());
        let xi = Covector(vec![sc(1), sc(1)]);
        let got = wedge(&xi, &SpinorForm::tensor(FormIndex::EMPTY, &x(1, 0)));
        let want = SpinorForm::tensor(f(&[0]), &x(1, 0)).add(&SpinorForm::tensor(f(&[1]), &x(1, 0)));
        assert_eq!(got, want);
    }

    #[test]
    fn contract_examples() {
        let sp = SymplecticSpace::<Scalar>::standard(1).unwrap();
        let s = x(1, 0).add(&one(1));
        let e1 = sp.basis_vector(0);
        assert_eq!(contract(&e1, &SpinorForm::tensor(f(&[0]), &s)), SpinorForm::tensor(FormIndex::EMPTY, &s));
        assert!(contract(&sp.basis_vector(1), &SpinorForm::tensor(f(&[0]), &s)).is_zero());
        assert_eq!(contract(&e1, &SpinorForm::tensor(f(&[0, 1]), &s)), SpinorForm::tensor(f(&[1]), &s));
        // the second slot picks up a sign
        assert_eq!(
            contract(&sp.basis_vector(1), &SpinorForm::tensor(f(&[0, 1]), &s)),
            SpinorForm::tensor(f(&[0]), &s).scale(&sc(-1))
        );
    }

    #[test]
    fn clifford_on_form_examples() {
        let sp = SymplecticSpace::<Scalar>::standard(1).unwrap();
        let i = Scalar::imag_unit();
        let got = clifford_on_form(&sp, &sp.basis_vector(0), &SpinorForm::tensor(f(&[0]), &x(1, 0)));
        assert_eq!(got, SpinorForm::tensor(f(&[0]), &Spinor::monomial(Monomial(vec![2]), i.clone())));
        assert!(clifford_on_form(&sp, &sp.basis_vector(1), &SpinorForm::tensor(f(&[0]), &one(1))).is_zero());
        let v = Vector(vec![sc(1), sc(1)]);
        let got = clifford_on_form(&sp, &v, &SpinorForm::tensor(FormIndex::EMPTY, &x(1, 0)));
        let want = Spinor::monomial(Monomial(vec![2]), i).add(&one(1));
        assert_eq!(got, SpinorForm::tensor(FormIndex::EMPTY, &want));
    }

    #[test]
    fn window_dimensions() {
        let w = FormWindow::new(1, 1, 0).unwrap();
        assert_eq!(w.dim(), 2);
        assert_eq!(w.basis()[0], (f(&[0]), Monomial::one(1)));
        assert_eq!(w.basis()[1], (f(&[1]), Monomial::one(1)));
        assert_eq!(FormWindow::new(1, 2, 1).unwrap().dim(), 2);
        assert_eq!(FormWindow::new(2, 2, 2).unwrap().dim(), 36);
        assert!(FormWindow::new(1, 3, 0).is_err());
    }

    #[test]
    fn coordinates_round_trip_and_overflow() {
        let w = FormWindow::new(2, 1, 1).unwrap();
        let psi = SpinorForm::tensor(f(&[2]), &x(2, 1)).add(&SpinorForm::tensor(f(&[0]), &one(2)));
        let c = w.coordinates(&psi).unwrap();
        assert_eq!(w.form(&c), psi);
        let big = SpinorForm::tensor(f(&[0]), &x(2, 0).mul_var(0));
        assert!(w.coordinates(&big).is_err());
    }

    #[test]
    fn exterior_wedge() {
        let xi = Covector(vec![sc(1), sc(0), sc(0), sc(0)]);
        let eta = ExteriorForm::from_terms(4, 1, [(f(&[1]), sc(1))]);
        let w = eta.wedge_covector(&xi);
        assert_eq!(w, ExteriorForm::from_terms(4, 2, [(f(&[0, 1]), sc(1))]));
        assert!(w.wedge_covector(&xi).is_zero());
    }
}
