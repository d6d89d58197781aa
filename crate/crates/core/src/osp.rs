//! The osp(1|2) operators `F±`, `E±`, `H` on `E = Λ•V* ⊗ S` and the triangle
//! decomposition of `E` into the components `E^{rj}`.
//!
//! Components are extracted as eigenspaces of `F⁻F⁺`, whose eigenvalue on
//! `E^{rj}` is the scalar `c_{rj}` of [`component_scalar`]. Projectors are the
//! spectral products over those scalars and are applied to sparse forms
//! directly, so they never see a truncation.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::forms::{self, signed, FormIndex, FormWindow, SpinorForm};
use crate::linalg::{self, BasisLabel, OperatorMatrix, SpaceKind};
use crate::spinor::Monomial;
use crate::symplectic::{Covector, SymplecticSpace, Vector};

/// The five generators.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum OspOp {
    FPlus,
    FMinus,
    EPlus,
    EMinus,
    H,
}

impl OspOp {
    pub const ALL: [OspOp; 5] = [OspOp::FPlus, OspOp::FMinus, OspOp::EPlus, OspOp::EMinus, OspOp::H];

    /// Change of form degree.
    pub fn form_shift(self) -> isize {
        match self {
            OspOp::FPlus => 1,
            OspOp::FMinus => -1,
            OspOp::EPlus => 2,
            OspOp::EMinus => -2,
            OspOp::H => 0,
        }
    }

    /// Largest possible increase of the spinor degree.
    pub fn degree_growth(self) -> u32 {
        match self {
            OspOp::FPlus | OspOp::FMinus => 1,
            _ => 2,
        }
    }
}

impl fmt::Display for OspOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OspOp::FPlus => "F+",
            OspOp::FMinus => "F-",
            OspOp::EPlus => "E+",
            OspOp::EMinus => "E-",
            OspOp::H => "H",
        })
    }
}

/// `e_k.x^m`: the image monomial and its coefficient, or `None` when it vanishes.
fn clifford_monomial<T: Field>(l: usize, m: &Monomial, k: usize) -> Option<(Monomial, T)> {
    let mut e = m.0.clone();
    if k < l {
        e[k] += 1;
        Some((Monomial(e), T::imag_unit()))
    } else {
        let a = k - l;
        let p = e[a];
        if p == 0 {
            return None;
        }
        e[a] -= 1;
        Some((Monomial(e), T::from_int(p as i64)))
    }
}

/// `F⁺(α ⊗ s) = (ı/2) Σ ε^i ∧ α ⊗ e_i.s`.
pub fn f_plus<T: Field>(sp: &SymplecticSpace<T>, psi: &SpinorForm<T>) -> SpinorForm<T> {
    let l = sp.l();
    let half_i = T::imag_unit() * T::from_ratio(1, 2);
    let mut out = SpinorForm::zero(l, psi.form_degree() + 1);
    for (f, m, c) in psi.terms() {
        for i in 0..sp.dim() {
            let Some((neg, g)) = f.wedge_left(i) else { continue };
            let Some((m2, k)) = clifford_monomial::<T>(l, m, i) else { continue };
            out.add_term(g, m2, signed(neg, c.clone() * k * half_i.clone()));
        }
    }
    out
}

/// `F⁻(α ⊗ s) = ½ Σ ω^{ij} ι_{e_i}α ⊗ e_j.s`.
pub fn f_minus<T: Field>(sp: &SymplecticSpace<T>, psi: &SpinorForm<T>) -> SpinorForm<T> {
    let l = sp.l();
    let n = sp.dim();
    let half = T::from_ratio(1, 2);
    let mut out = SpinorForm::zero(l, psi.form_degree().saturating_sub(1));
    for (f, m, c) in psi.terms() {
        for i in f.indices() {
            let (neg, g) = f.contract(i).expect("index present");
            for j in 0..n {
                let w = sp.omega_inv(i, j);
                if w.is_zero() {
                    continue;
                }
                let Some((m2, k)) = clifford_monomial::<T>(l, m, j) else { continue };
                out.add_term(g, m2, signed(neg, c.clone() * k * w.clone() * half.clone()));
            }
        }
    }
    out
}

/// `E⁻` by the contraction formula `(ı/2) ω^{ij} ι_{e_i} ι_{e_j} α ⊗ s`.
pub fn e_minus_contraction<T: Field>(sp: &SymplecticSpace<T>, psi: &SpinorForm<T>) -> SpinorForm<T> {
    let half_i = T::imag_unit() * T::from_ratio(1, 2);
    let mut out = SpinorForm::zero(sp.l(), psi.form_degree().saturating_sub(2));
    if psi.form_degree() < 2 {
        return out;
    }
    for (f, m, c) in psi.terms() {
        for j in f.indices() {
            let (n1, g) = f.contract(j).expect("index present");
            for i in g.indices() {
                let w = sp.omega_inv(i, j);
                if w.is_zero() {
                    continue;
                }
                let (n2, h) = g.contract(i).expect("index present");
                out.add_term(h, m.clone(), signed(n1 ^ n2, c.clone() * w.clone() * half_i.clone()));
            }
        }
    }
    out
}

/// Applies one generator. `E± = ±2{F±, F±}` and `H = 2{F⁺, F⁻}`.
pub fn apply_osp<T: Field>(op: OspOp, sp: &SymplecticSpace<T>, psi: &SpinorForm<T>) -> SpinorForm<T> {
    match op {
        OspOp::FPlus => f_plus(sp, psi),
        OspOp::FMinus => f_minus(sp, psi),
        OspOp::EPlus => f_plus(sp, &f_plus(sp, psi)).scale(&T::from_int(4)),
        OspOp::EMinus => f_minus(sp, &f_minus(sp, psi)).scale(&T::from_int(-4)),
        OspOp::H => {
            let a = f_plus(sp, &f_minus(sp, psi));
            let b = f_minus(sp, &f_plus(sp, psi));
            a.add(&b).scale(&T::from_int(2))
        }
    }
}

/// `F⁻F⁺ ψ`.
pub fn casimir<T: Field>(sp: &SymplecticSpace<T>, psi: &SpinorForm<T>) -> SpinorForm<T> {
    f_minus(sp, &f_plus(sp, psi))
}

/// `m_i = min(i, 2l − i)`, the largest component index in form degree `i`.
pub fn m_index(l: usize, i: usize) -> usize {
    i.min(2 * l - i)
}

/// Whether `(i, j)` belongs to the triangle `Ξ`.
pub fn in_triangle(l: usize, i: usize, j: usize) -> bool {
    i <= 2 * l && j <= m_index(l, i)
}

/// A label `(i, j)` of the triangle.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct TriangleLabel {
    pub i: usize,
    pub j: usize,
}

impl TriangleLabel {
    pub fn new(l: usize, i: usize, j: usize) -> Result<Self> {
        if !in_triangle(l, i, j) {
            return Err(Error::contract(format!("({i}, {j}) lies outside the triangle for l = {l}")));
        }
        Ok(TriangleLabel { i, j })
    }

    /// Every label of the triangle, row-major in `i`.
    pub fn all(l: usize) -> Vec<TriangleLabel> {
        (0..=2 * l).flat_map(|i| (0..=m_index(l, i)).map(move |j| TriangleLabel { i, j })).collect()
    }
}

/// `c_{ij}`, the eigenvalue of `F⁻F⁺` on `E^{ij}`.
pub fn component_scalar<T: Field>(l: usize, i: usize, j: usize) -> Result<T> {
    TriangleLabel::new(l, i, j)?;
    let (i, j, l) = (i as i64, j as i64, l as i64);
    Ok(if (i + j) % 2 == 1 {
        T::from_ratio(1 + i - j, 8)
    } else {
        T::from_ratio(i + j - 2 * l, 8)
    })
}

/// The scalars `c_{r0}, …, c_{r m_r}` of one form degree.
pub fn column_scalars<T: Field>(l: usize, r: usize) -> Result<Vec<T>> {
    if r > 2 * l {
        return Err(Error::contract(format!("form degree {r} exceeds 2l = {}", 2 * l)));
    }
    (0..=m_index(l, r)).map(|j| component_scalar(l, r, j)).collect()
}

/// Whether the scalars of every column of the triangle are pairwise distinct.
pub fn scalars_distinct<T: Field>(l: usize) -> bool {
    (0..=2 * l).all(|r| {
        let c: Vec<T> = column_scalars(l, r).expect("in range");
        (0..c.len()).all(|a| (a + 1..c.len()).all(|b| c[a] != c[b]))
    })
}

/// Matrix of an arbitrary form operator between two windows of `l`.
fn window_matrix<T, F>(l: usize, r: usize, d: u32, r_out: usize, d_out: u32, op: F) -> Result<OperatorMatrix<T>>
where
    T: Field,
    F: Fn(&SpinorForm<T>) -> SpinorForm<T> + Sync,
{
    forms::operator_matrix(&FormWindow::new(l, r, d)?, &FormWindow::new(l, r_out, d_out)?, op)
}

/// Matrix of a generator from `W_{r,D}` to the smallest window holding its image.
pub fn osp_matrix<T: Field>(op: OspOp, sp: &SymplecticSpace<T>, r: usize, d: u32) -> Result<OperatorMatrix<T>> {
    let r_out = r as isize + op.form_shift();
    if r_out < 0 || r_out as usize > sp.dim() {
        return Err(Error::contract(format!("{op} maps form degree {r} out of range")));
    }
    window_matrix(sp.l(), r, d, r_out as usize, d + op.degree_growth(), |psi| apply_osp(op, sp, psi))
}

fn kernel_forms<T: Field>(win: &FormWindow, m: &OperatorMatrix<T>) -> Vec<SpinorForm<T>> {
    linalg::kernel_basis(m).iter().map(|v| win.form(v)).collect()
}

/// A basis of `ker F⁻ ∩ W_{j,D}`, the primitive component `E^{jj}` in the window.
pub fn primitive_basis<T: Field>(sp: &SymplecticSpace<T>, j: usize, d: u32) -> Result<Vec<SpinorForm<T>>> {
    let l = sp.l();
    if j > l {
        return Err(Error::contract(format!("primitive components exist for j ≤ l = {l}, got {j}")));
    }
    let win = FormWindow::new(l, j, d)?;
    if j == 0 {
        return Ok((0..win.dim()).map(|k| win.basis_form(k)).collect());
    }
    let m = forms::operator_matrix(&win, &FormWindow::new(l, j - 1, d + 1)?, |psi| f_minus(sp, psi))?;
    Ok(kernel_forms(&win, &m))
}

/// A basis of `ker F⁺ ∩ W_{i,D}` for `i ≥ l`.
pub fn top_basis<T: Field>(sp: &SymplecticSpace<T>, i: usize, d: u32) -> Result<Vec<SpinorForm<T>>> {
    let l = sp.l();
    if i < l || i > 2 * l {
        return Err(Error::contract(format!("F⁺-kernels are taken for l ≤ i ≤ 2l, got {i}")));
    }
    let win = FormWindow::new(l, i, d)?;
    if i == 2 * l {
        return Ok((0..win.dim()).map(|k| win.basis_form(k)).collect());
    }
    let m = forms::operator_matrix(&win, &FormWindow::new(l, i + 1, d + 1)?, |psi| f_plus(sp, psi))?;
    Ok(kernel_forms(&win, &m))
}

/// Matrix of `F⁻F⁺` from `W_{r,D}` into `W_{r,D+2}`.
pub fn casimir_matrix<T: Field>(sp: &SymplecticSpace<T>, r: usize, d: u32) -> Result<OperatorMatrix<T>> {
    window_matrix(sp.l(), r, d, r, d + 2, |psi| casimir(sp, psi))
}

/// Bases of all `E^{rj} ∩ W_{r,D}`, `j = 0..=m_r`, as eigenspaces of `F⁻F⁺`.
pub fn component_bases<T: Field>(sp: &SymplecticSpace<T>, r: usize, d: u32) -> Result<Vec<Vec<SpinorForm<T>>>> {
    let l = sp.l();
    let win = FormWindow::new(l, r, d)?;
    let casimir = casimir_matrix(sp, r, d)?;
    let inclusion = inclusion_matrix::<T>(&win, d + 2)?;
    column_scalars::<T>(l, r)?
        .into_iter()
        .map(|c| Ok(kernel_forms(&win, &casimir.sub(&inclusion.scale(&c)))))
        .collect()
}

/// A basis of `E^{rj} ∩ W_{r,D}`.
pub fn component_basis<T: Field>(sp: &SymplecticSpace<T>, r: usize, j: usize, d: u32) -> Result<Vec<SpinorForm<T>>> {
    let l = sp.l();
    let c: T = component_scalar(l, r, j)?;
    let win = FormWindow::new(l, r, d)?;
    let m = casimir_matrix(sp, r, d)?.sub(&inclusion_matrix::<T>(&win, d + 2)?.scale(&c));
    Ok(kernel_forms(&win, &m))
}

/// A basis of the edge `E^{i,m_i} ∩ W_{i,D}`.
pub fn edge_basis<T: Field>(sp: &SymplecticSpace<T>, i: usize, d: u32) -> Result<Vec<SpinorForm<T>>> {
    if i > sp.dim() {
        return Err(Error::contract(format!("form degree {i} exceeds 2l = {}", sp.dim())));
    }
    component_basis(sp, i, m_index(sp.l(), i), d)
}

/// The inclusion `W_{r,D} → W_{r,D'}`.
fn inclusion_matrix<T: Field>(win: &FormWindow, d_out: u32) -> Result<OperatorMatrix<T>> {
    let target = FormWindow::new(win.l(), win.form_degree(), d_out)?;
    forms::operator_matrix(win, &target, |psi| psi.clone())
}

/// The spectral projector `p^{rj}` applied to `ψ` of form degree `r`.
pub fn component_projector<T: Field>(sp: &SymplecticSpace<T>, j: usize, psi: &SpinorForm<T>) -> Result<SpinorForm<T>> {
    let l = sp.l();
    let r = psi.form_degree();
    let cj: T = component_scalar(l, r, j)?;
    let mut out = psi.clone();
    for (k, ck) in column_scalars::<T>(l, r)?.into_iter().enumerate() {
        if k == j || out.is_zero() {
            continue;
        }
        let denom = cj.clone() - ck.clone();
        out = casimir(sp, &out).sub(&out.scale(&ck)).scale(&(T::one() / denom));
    }
    Ok(out)
}

/// The edge projector `p^r = p^{r,m_r}`.
pub fn edge_projector<T: Field>(sp: &SymplecticSpace<T>, psi: &SpinorForm<T>) -> Result<SpinorForm<T>> {
    component_projector(sp, m_index(sp.l(), psi.form_degree()), psi)
}

/// The closed form coefficients `(β, γ) = (2/(i−l), ı/(i−l))` of the edge
/// projection of a wedge, for `0 ≤ i ≤ l−1`.
pub fn wedge_coefficients<T: Field>(l: usize, i: usize) -> Result<(T, T)> {
    if i >= l {
        return Err(Error::contract(format!("correction terms exist for i < l = {l}, got {i}")));
    }
    let d = i as i64 - l as i64;
    Ok((T::from_ratio(2, d), T::imag_unit() * T::from_ratio(1, d)))
}

/// `σ^ξ_i ψ = p^{i+1}(ξ ∧ ψ)` for `ψ` in the edge `E^{i,m_i}`, by the closed form
/// `ξ∧ψ + β F⁺(ξ^♯.ψ) + γ E⁺(ι_{ξ^♯}ψ)` below the middle and the plain wedge from
/// the middle on.
pub fn project_wedge<T: Field>(sp: &SymplecticSpace<T>, i: usize, xi: &Covector<T>, psi: &SpinorForm<T>) -> Result<SpinorForm<T>> {
    let l = sp.l();
    if i >= 2 * l {
        return Err(Error::contract(format!("wedge projection needs i ≤ 2l − 1 = {}, got {i}", 2 * l - 1)));
    }
    if !psi.is_zero() && psi.form_degree() != i {
        return Err(Error::contract(format!("input has form degree {} instead of {i}", psi.form_degree())));
    }
    let psi = if psi.is_zero() { SpinorForm::zero(l, i) } else { psi.clone() };
    let wedge = forms::wedge(xi, &psi);
    if i >= l {
        return Ok(wedge);
    }
    let (beta, gamma) = wedge_coefficients::<T>(l, i)?;
    let v = sp.sharp(xi);
    let clifford = f_plus(sp, &forms::clifford_on_form(sp, &v, &psi)).scale(&beta);
    let contracted = forms::contract(&v, &psi);
    let e_term = if i == 0 {
        SpinorForm::zero(l, i + 1)
    } else {
        apply_osp(OspOp::EPlus, sp, &contracted).scale(&gamma)
    };
    Ok(wedge.add(&clifford).add(&e_term))
}

/// The coefficients `α_k` of the normal form `p^r = Σ_k α_k (F⁺)^k (F⁻)^k` of the
/// edge projector in form degree `1 ≤ r ≤ l`.
///
/// On `E^{rj}` the operator `(F⁺)^k(F⁻)^k` is the scalar `Π_{t<k} a_{r−t,j}` with
/// `a_{s,j} = ¼(s−l) − c_{sj}` (the eigenvalue of `F⁺F⁻`), so requiring `p^r = 1`
/// on `E^{rr}` and `0` on `E^{rj}`, `j < r`, is a triangular system.
pub fn normal_form_coefficients<T: Field>(l: usize, r: usize) -> Result<Vec<T>> {
    if r == 0 || r > l {
        return Err(Error::contract(format!("normal form is derived for 1 ≤ r ≤ l = {l}, got {r}")));
    }
    let quarter = T::from_ratio(1, 4);
    let a = |s: usize, j: usize| -> Result<T> {
        Ok(quarter.clone() * T::from_int(s as i64 - l as i64) - component_scalar::<T>(l, s, j)?)
    };
    let mut alpha = vec![T::one()];
    for k in 1..=r {
        // Row j = r − k: Σ_{k' ≤ k} α_{k'} P_{k'} = 0, with P_k the only new unknown.
        let j = r - k;
        let mut prod = T::one();
        let mut acc = alpha[0].clone();
        for (kk, ak) in alpha.iter().enumerate().skip(1) {
            prod = prod * a(r - kk + 1, j)?;
            acc = acc + ak.clone() * prod.clone();
        }
        let p_k = prod * a(r - k + 1, j)?;
        if p_k.is_zero() {
            return Err(Error::contract("degenerate normal form system"));
        }
        alpha.push(-acc / p_k);
    }
    Ok(alpha)
}

/// `(β, γ)` recovered from the spectral projector. A coefficient is `None` when
/// the inputs do not determine it (the `γ` term vanishes on 0-forms).
#[derive(Clone, Debug, PartialEq)]
pub struct WedgeFit<T> {
    pub consistent: bool,
    pub beta: Option<T>,
    pub gamma: Option<T>,
}

/// Solves `p^{i+1}(ξ∧ψ) − ξ∧ψ = β F⁺(ξ^♯.ψ) + γ E⁺(ι_{ξ^♯}ψ)` jointly over all
/// `(ξ, ψ)` pairs, which must share one form degree.
pub fn fit_wedge_coefficients<T: Field>(sp: &SymplecticSpace<T>, inputs: &[(Covector<T>, SpinorForm<T>)]) -> Result<WedgeFit<T>> {
    let l = sp.l();
    let mut blocks = Vec::new();
    for (xi, psi) in inputs {
        let wedge = forms::wedge(xi, psi);
        let target = edge_projector(sp, &wedge)?.sub(&wedge);
        let v = sp.sharp(xi);
        let a = f_plus(sp, &forms::clifford_on_form(sp, &v, psi));
        let b = apply_osp(OspOp::EPlus, sp, &forms::contract(&v, psi));
        blocks.push((target, a, b));
    }
    let Some(r) = blocks.iter().flat_map(|(t, a, b)| [t, a, b]).find(|f| !f.is_zero()).map(|f| f.form_degree()) else {
        return Ok(WedgeFit { consistent: true, beta: None, gamma: None });
    };
    let degree = blocks.iter().flat_map(|(t, a, b)| [t, a, b]).filter_map(|f| f.spinor_degree()).max().unwrap_or(0);
    let win = FormWindow::new(l, r, degree)?;
    let mut a_col = Vec::new();
    let mut b_col = Vec::new();
    let mut rhs = Vec::new();
    for (k, (t, a, b)) in blocks.iter().enumerate() {
        let off = k * win.dim();
        a_col.extend(win.sparse_coordinates(a)?.into_iter().map(|(i, c)| (i + off, c)));
        b_col.extend(win.sparse_coordinates(b)?.into_iter().map(|(i, c)| (i + off, c)));
        rhs.extend(win.coordinates(t)?);
    }
    let determined = [!a_col.is_empty(), !b_col.is_empty()];
    let m = OperatorMatrix::from_sparse_columns(rhs.len(), vec![a_col, b_col]);
    let unique = linalg::rank(&m) == determined.iter().filter(|d| **d).count();
    Ok(match linalg::solve(&m, &rhs)? {
        None => WedgeFit { consistent: false, beta: None, gamma: None },
        Some(x) => {
            let pick = |k: usize| (determined[k] && unique).then(|| x[k].clone());
            WedgeFit { consistent: true, beta: pick(0), gamma: pick(1) }
        }
    })
}

/// One row of the triangle in the chain model: `v, F⁺v, …, (F⁺)^{2l−2j} v` for a
/// primitive `v ∈ E^{jj}`.
#[derive(Clone, Debug)]
pub struct Chain<T> {
    pub j: usize,
    pub vectors: Vec<SpinorForm<T>>,
    /// `λ_k` with `F⁻ (F⁺)^k v = λ_k (F⁺)^{k−1} v`, `λ_0 = 0`.
    pub lowering: Vec<T>,
}

/// Which closure properties of the chain model were verified.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InvarianceCertificate {
    /// `F⁺` of every chain top is zero.
    pub raising_closed: bool,
    /// `F⁻` of every chain vector is a multiple of its predecessor.
    pub lowering_closed: bool,
    /// Every chain vector is nonzero.
    pub chains_nonzero: bool,
}

impl InvarianceCertificate {
    pub fn holds(&self) -> bool {
        self.raising_closed && self.lowering_closed && self.chains_nonzero
    }
}

/// The osp(1|2)-closed span `U_D` of the `F⁺`-chains over all primitive window
/// vectors.
#[derive(Clone, Debug)]
pub struct ChainModel<T> {
    pub l: usize,
    pub max_degree: u32,
    pub chains: Vec<Chain<T>>,
    pub certificate: InvarianceCertificate,
}

/// `ψ = λ φ`; `None` when `ψ` is not a multiple of `φ`.
fn ratio<T: Field>(psi: &SpinorForm<T>, phi: &SpinorForm<T>) -> Option<T> {
    let (f, m, c) = phi.terms().next()?;
    let lambda = psi
        .terms()
        .find(|(g, n, _)| *g == f && *n == m)
        .map_or_else(T::zero, |(_, _, d)| d.clone() / c.clone());
    (psi.sub(&phi.scale(&lambda)).is_zero()).then_some(lambda)
}

/// Builds the chain model of `W_{•,D}` and verifies its invariance.
pub fn chain_model<T: Field>(sp: &SymplecticSpace<T>, d: u32) -> Result<ChainModel<T>> {
    let l = sp.l();
    let mut chains = Vec::new();
    let mut cert = InvarianceCertificate { raising_closed: true, lowering_closed: true, chains_nonzero: true };
    for j in 0..=l {
        for v in primitive_basis(sp, j, d)? {
            let mut vectors = vec![v];
            for _ in 0..2 * (l - j) {
                let next = f_plus(sp, vectors.last().expect("nonempty"));
                vectors.push(next);
            }
            let top = f_plus(sp, vectors.last().expect("nonempty"));
            cert.raising_closed &= top.is_zero();
            cert.chains_nonzero &= vectors.iter().all(|u| !u.is_zero());
            let mut lowering = vec![T::zero()];
            cert.lowering_closed &= f_minus(sp, &vectors[0]).is_zero();
            for k in 1..vectors.len() {
                match ratio(&f_minus(sp, &vectors[k]), &vectors[k - 1]) {
                    Some(lambda) => lowering.push(lambda),
                    None => {
                        cert.lowering_closed = false;
                        lowering.push(T::zero());
                    }
                }
            }
            chains.push(Chain { j, vectors, lowering });
        }
    }
    Ok(ChainModel { l, max_degree: d, chains, certificate: cert })
}

impl<T: Field> ChainModel<T> {
    /// Chain vectors lying in `E^{rj}`.
    pub fn component(&self, r: usize, j: usize) -> Vec<&SpinorForm<T>> {
        self.chains.iter().filter(|c| c.j == j && r >= j).filter_map(|c| c.vectors.get(r - j)).collect()
    }

    /// Every chain vector of form degree `r`, with its row index `j`.
    pub fn degree(&self, r: usize) -> Vec<(usize, &SpinorForm<T>)> {
        self.chains.iter().filter(|c| r >= c.j).filter_map(|c| c.vectors.get(r - c.j).map(|v| (c.j, v))).collect()
    }

    /// Highest spinor degree reached by any chain vector.
    pub fn spinor_degree(&self) -> u32 {
        self.chains.iter().flat_map(|c| c.vectors.iter()).filter_map(|v| v.spinor_degree()).max().unwrap_or(0)
    }

    /// Rank of a set of form-degree-`r` vectors of the model.
    pub fn rank_of(&self, r: usize, vectors: &[&SpinorForm<T>]) -> Result<usize> {
        let win = FormWindow::new(self.l, r, self.spinor_degree())?;
        let columns = vectors.iter().map(|v| win.sparse_coordinates(v)).collect::<Result<Vec<_>>>()?;
        let m = OperatorMatrix::from_sparse_columns(win.dim(), columns)
            .with_labels(BasisLabel::new(SpaceKind::Component, r, 0), win.label());
        Ok(linalg::rank(&m))
    }
}

/// `{F⁺, ι_v}ψ − (ı/2) v.ψ`, which vanishes identically.
pub fn fplus_contraction_defect<T: Field>(sp: &SymplecticSpace<T>, v: &Vector<T>, psi: &SpinorForm<T>) -> SpinorForm<T> {
    let a = f_plus(sp, &forms::contract(v, psi));
    let b = forms::contract(v, &f_plus(sp, psi));
    let c = forms::clifford_on_form(sp, v, psi).scale(&(T::imag_unit() * T::from_ratio(1, 2)));
    a.add(&b).sub(&c)
}

/// `[F⁻, v.]ψ − (ı/2) ι_v ψ`, which vanishes identically.
pub fn fminus_clifford_defect<T: Field>(sp: &SymplecticSpace<T>, v: &Vector<T>, psi: &SpinorForm<T>) -> SpinorForm<T> {
    let a = f_minus(sp, &forms::clifford_on_form(sp, v, psi));
    let b = forms::clifford_on_form(sp, v, &f_minus(sp, psi));
    let c = forms::contract(v, psi).scale(&(T::imag_unit() * T::from_ratio(1, 2)));
    a.sub(&b).sub(&c)
}

/// `ψ ↦ ε^I ⊗ x^m` basis forms of degree `r` and spinor degree exactly `deg`.
pub fn homogeneous_basis<T: Field>(l: usize, r: usize, deg: u32) -> Vec<SpinorForm<T>> {
    FormIndex::subsets(2 * l, r)
        .into_iter()
        .flat_map(|f| Monomial::of_degree(l, deg).into_iter().map(move |m| SpinorForm::basis(l, f, m)))
        .collect()
}
