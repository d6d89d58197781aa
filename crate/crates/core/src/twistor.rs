//! Symbols of the symplectic twistor operators and the window-level check that
//! the two truncated symbol sequences are exact.
//!
//! The symbol in degree `i` is `σ^ξ_i = p^{i+1} ∘ (ξ ∧ ·)` on the edge
//! `E^{i,m_i}`. The left sequence runs through `i = 0..l−1`, the right one
//! through `i = l..2l−1`.

use rayon::prelude::*;
use serde::Serialize;
use serde_json::Value;

use crate::codec;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::forms::{self, ExteriorForm, FormIndex, FormWindow, SpinorForm};
use crate::linalg::{self, BasisLabel, OperatorMatrix, SpaceKind};
use crate::osp;
use crate::symplectic::{Covector, SymplecticSpace};

/// `σ^ξ_i ψ` for `ψ` in the edge `E^{i,m_i}`.
pub fn symbol_apply<T: Field>(sp: &SymplecticSpace<T>, i: usize, xi: &Covector<T>, psi: &SpinorForm<T>) -> Result<SpinorForm<T>> {
    if xi.is_zero() {
        return Err(Error::contract("the symbol is taken at a nonzero covector"));
    }
    osp::project_wedge(sp, i, xi, psi)
}

/// How far `σ_i` can raise the spinor degree.
fn degree_growth(l: usize, i: usize) -> u32 {
    if i < l {
        2
    } else {
        1
    }
}

/// The covector whose `♯` is `e_1`.
pub fn canonical_xi<T: Field>(sp: &SymplecticSpace<T>) -> Covector<T> {
    sp.flat(&sp.basis_vector(0))
}

/// Parses `"canonical"` or a comma separated list of `2l` rationals into a
/// nonzero covector.
pub fn parse_xi<T: Field>(sp: &SymplecticSpace<T>, spec: &str) -> Result<Covector<T>> {
    if spec.trim() == "canonical" {
        return Ok(canonical_xi(sp));
    }
    let comps = spec
        .split(',')
        .map(|c| {
            let r = crate::field::parse_rational(c).ok_or_else(|| Error::decode(format!("xi component {c:?} is not a rational")))?;
            T::try_from_re_im(&r, &num_rational::BigRational::from_integer(0.into()))
                .ok_or_else(|| Error::decode("xi component does not fit the field"))
        })
        .collect::<Result<Vec<T>>>()?;
    if comps.len() != sp.dim() {
        return Err(Error::InvalidInput(format!("xi has {} components, expected 2l = {}", comps.len(), sp.dim())));
    }
    let xi = Covector(comps);
    if xi.is_zero() {
        return Err(Error::InvalidInput("xi must be nonzero".into()));
    }
    Ok(xi)
}

/// `σ_i` restricted to an edge basis, as a matrix into `W_{i+1, D+growth}`.
pub struct SymbolMatrix<T> {
    pub i: usize,
    pub domain: Vec<SpinorForm<T>>,
    pub codomain: FormWindow,
    pub matrix: OperatorMatrix<T>,
}

/// Builds the matrix of `σ_i` on `E^{i,m_i} ∩ W_{i,D}`.
pub fn symbol_matrix<T: Field>(sp: &SymplecticSpace<T>, i: usize, xi: &Covector<T>, d: u32) -> Result<SymbolMatrix<T>> {
    let l = sp.l();
    if i >= 2 * l {
        return Err(Error::contract(format!("symbols are defined for i ≤ 2l − 1 = {}, got {i}", 2 * l - 1)));
    }
    if xi.is_zero() {
        return Err(Error::contract("the symbol is taken at a nonzero covector"));
    }
    let domain = osp::edge_basis(sp, i, d)?;
    let codomain = FormWindow::new(l, i + 1, d + degree_growth(l, i))?;
    let label = BasisLabel::new(SpaceKind::Component, i, d as usize);
    let matrix = forms::matrix_on(&domain, &codomain, label, |psi| {
        osp::project_wedge(sp, i, xi, psi).expect("degree checked above")
    })?;
    Ok(SymbolMatrix { i, domain, codomain, matrix })
}

impl<T: Field> SymbolMatrix<T> {
    /// The form with the given coordinates against the edge basis.
    pub fn combine(&self, coords: &[T]) -> SpinorForm<T> {
        let l = self.codomain.l();
        self.domain
            .iter()
            .zip(coords)
            .filter(|(_, c)| !c.is_zero())
            .fold(SpinorForm::zero(l, self.i), |acc, (v, c)| acc.add(&v.scale(c)))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Vacuous,
}

/// Why a position failed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Failure {
    NoPreimageWithinSlack,
    ContractionIdentityViolated,
    NontrivialKernel,
}

/// A position of one of the two sequences at which exactness is checked.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct SymbolPosition {
    pub i: usize,
    pub side: Side,
}

impl SymbolPosition {
    /// Left `0..=l−2`, then right `l+1..=2l`.
    pub fn all(l: usize) -> Vec<SymbolPosition> {
        let left = (0..l.saturating_sub(1)).map(|i| SymbolPosition { i, side: Side::Left });
        let right = (l + 1..=2 * l).map(|i| SymbolPosition { i, side: Side::Right });
        left.chain(right).collect()
    }
}

/// Per kernel vector checks of `ι_{ξ^♯}φ = 0` and `ξ^♯.(ξ^♯.φ) = 0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ContractionCheck {
    pub checked: usize,
    pub contraction_zero: usize,
    pub double_clifford_zero: usize,
}

impl ContractionCheck {
    pub fn holds(&self) -> bool {
        self.contraction_zero == self.checked && self.double_clifford_zero == self.checked
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PositionRecord {
    pub i: usize,
    pub side: Side,
    pub dim_domain: usize,
    pub dim_kernel: usize,
    pub preimages_found: usize,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failure: Option<Failure>,
    /// Smallest slack at which every vector had a preimage.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub min_slack: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub contraction: Option<ContractionCheck>,
    /// On failure: how many vectors are `p^i(ξ ∧ x)` for an arbitrary `x` of form
    /// degree `i−1` in the largest window, not only for `x` in the edge.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub preimages_found_unconstrained: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct XiDescriptor {
    pub spec: String,
    pub components: Value,
    /// Whether `ξ^♯` has a nonzero component along the Lagrangian `L`, the
    /// regime where Clifford multiplication by `ξ^♯` is injective on polynomials.
    pub sharp_has_lagrangian_part: bool,
}

impl XiDescriptor {
    pub fn new<T: Field>(sp: &SymplecticSpace<T>, spec: &str, xi: &Covector<T>) -> Self {
        XiDescriptor {
            spec: spec.to_string(),
            components: codec::encode_scalars(&xi.0),
            sharp_has_lagrangian_part: sp.sharp(xi).has_lagrangian_part(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExactnessReport {
    pub l: usize,
    #[serde(rename = "D")]
    pub d: u32,
    pub slack: u32,
    pub xi: XiDescriptor,
    pub positions: Vec<PositionRecord>,
}

impl ExactnessReport {
    pub fn passed(&self) -> bool {
        self.positions.iter().all(|p| p.status != Status::Fail)
    }
}

/// One consecutive pair of symbols and whether their composite vanished.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CompositeRecord {
    pub i: usize,
    pub side: Side,
    pub dim_domain: usize,
    pub nonzero_images: usize,
    pub status: Status,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ComplexReport {
    pub l: usize,
    #[serde(rename = "D")]
    pub d: u32,
    pub xi: XiDescriptor,
    pub composites: Vec<CompositeRecord>,
}

impl ComplexReport {
    pub fn passed(&self) -> bool {
        self.composites.iter().all(|c| c.status != Status::Fail)
    }
}

/// Checks `σ_{i+1} σ_i = 0` on `E^{i,m_i} ∩ W_{i,D}` for `i = 0..=l−2` and `i = l..=2l−1`.
pub fn check_complex<T: Field>(sp: &SymplecticSpace<T>, d: u32, xi: &Covector<T>, xi_spec: &str) -> Result<ComplexReport> {
    if xi.is_zero() {
        return Err(Error::contract("the symbol is taken at a nonzero covector"));
    }
    let l = sp.l();
    let pairs: Vec<(usize, Side)> = (0..l.saturating_sub(1))
        .map(|i| (i, Side::Left))
        .chain((l..2 * l).map(|i| (i, Side::Right)))
        .collect();
    let composites = pairs
        .par_iter()
        .map(|&(i, side)| {
            let basis = osp::edge_basis(sp, i, d)?;
            let mut nonzero = 0;
            for psi in &basis {
                let once = osp::project_wedge(sp, i, xi, psi)?;
                // σ_{2l} is zero by convention.
                let twice = if i + 1 == 2 * l { SpinorForm::zero(l, 2 * l) } else { osp::project_wedge(sp, i + 1, xi, &once)? };
                nonzero += usize::from(!twice.is_zero());
            }
            let status = if nonzero == 0 { Status::Pass } else { Status::Fail };
            Ok(CompositeRecord { i, side, dim_domain: basis.len(), nonzero_images: nonzero, status })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ComplexReport { l, d, xi: XiDescriptor::new(sp, xi_spec, xi), composites })
}

/// Vectors `φ` whose preimage under `σ_{i−1}` is sought at position `i`.
fn targets<T: Field>(sp: &SymplecticSpace<T>, pos: SymbolPosition, xi: &Covector<T>, d: u32) -> Result<(usize, Vec<SpinorForm<T>>)> {
    let l = sp.l();
    if pos.i == 2 * l {
        let top = osp::edge_basis(sp, pos.i, d)?;
        return Ok((top.len(), top));
    }
    let sym = symbol_matrix(sp, pos.i, xi, d)?;
    let kernel: Vec<SpinorForm<T>> = linalg::kernel_basis(&sym.matrix).iter().map(|v| sym.combine(v)).collect();
    Ok((sym.domain.len(), kernel))
}

/// How many of `targets` lie in `σ_{i−1}(E^{i−1,m_{i−1}} ∩ W_{i−1,D'})`.
fn count_preimages<T: Field>(sp: &SymplecticSpace<T>, i: usize, xi: &Covector<T>, d: u32, targets: &[SpinorForm<T>]) -> Result<usize> {
    let sym = symbol_matrix(sp, i - 1, xi, d)?;
    let needed = targets.iter().filter_map(|t| t.spinor_degree()).max().unwrap_or(0);
    let win = FormWindow::new(sp.l(), i, needed.max(sym.codomain.max_degree()))?;
    let columns = sym
        .domain
        .iter()
        .map(|v| win.sparse_coordinates(&osp::project_wedge(sp, i - 1, xi, v)?))
        .collect::<Result<Vec<_>>>()?;
    let m = OperatorMatrix::from_sparse_columns(win.dim(), columns);
    let rhs = targets.iter().map(|t| win.coordinates(t)).collect::<Result<Vec<_>>>()?;
    Ok(linalg::solve_many(&m, &rhs)?.iter().filter(|x| x.is_some()).count())
}

/// Like [`count_preimages`] with `x` ranging over all of `W_{i−1,D'}`.
fn count_unconstrained_preimages<T: Field>(sp: &SymplecticSpace<T>, i: usize, xi: &Covector<T>, d: u32, targets: &[SpinorForm<T>]) -> Result<usize> {
    let l = sp.l();
    let src = FormWindow::new(l, i - 1, d)?;
    let images = (0..src.dim())
        .into_par_iter()
        .map(|k| osp::edge_projector(sp, &forms::wedge(xi, &src.basis_form(k))))
        .collect::<Result<Vec<_>>>()?;
    let needed = images.iter().chain(targets).filter_map(|t| t.spinor_degree()).max().unwrap_or(0);
    let win = FormWindow::new(l, i, needed)?;
    let columns = images.iter().map(|v| win.sparse_coordinates(v)).collect::<Result<Vec<_>>>()?;
    let m = OperatorMatrix::from_sparse_columns(win.dim(), columns);
    let rhs = targets.iter().map(|t| win.coordinates(t)).collect::<Result<Vec<_>>>()?;
    Ok(linalg::solve_many(&m, &rhs)?.iter().filter(|x| x.is_some()).count())
}

fn contraction_check<T: Field>(sp: &SymplecticSpace<T>, xi: &Covector<T>, kernel: &[SpinorForm<T>]) -> ContractionCheck {
    let v = sp.sharp(xi);
    let mut check = ContractionCheck { checked: kernel.len(), contraction_zero: 0, double_clifford_zero: 0 };
    for phi in kernel {
        check.contraction_zero += usize::from(forms::contract(&v, phi).is_zero());
        let twice = forms::clifford_on_form(sp, &v, &forms::clifford_on_form(sp, &v, phi));
        check.double_clifford_zero += usize::from(twice.is_zero());
    }
    check
}

fn check_position<T: Field>(sp: &SymplecticSpace<T>, pos: SymbolPosition, xi: &Covector<T>, d: u32, slack: u32) -> Result<PositionRecord> {
    let (dim_domain, kernel) = targets(sp, pos, xi, d)?;
    let contraction = (pos.side == Side::Left).then(|| contraction_check(sp, xi, &kernel));
    let mut record = PositionRecord {
        i: pos.i,
        side: pos.side,
        dim_domain,
        dim_kernel: kernel.len(),
        preimages_found: 0,
        status: Status::Pass,
        failure: None,
        min_slack: None,
        contraction,
        preimages_found_unconstrained: None,
    };
    if pos.i == 0 {
        if !kernel.is_empty() {
            record.status = Status::Fail;
            record.failure = Some(Failure::NontrivialKernel);
        }
        return Ok(record);
    }
    for s in 0..=slack {
        record.preimages_found = count_preimages(sp, pos.i, xi, d + s, &kernel)?;
        if record.preimages_found == kernel.len() {
            record.min_slack = Some(s);
            break;
        }
    }
    if record.min_slack.is_none() {
        record.status = Status::Fail;
        record.failure = Some(Failure::NoPreimageWithinSlack);
        record.preimages_found_unconstrained = Some(count_unconstrained_preimages(sp, pos.i, xi, d + slack, &kernel)?);
    }
    if record.contraction.as_ref().is_some_and(|c| !c.holds()) {
        record.status = Status::Fail;
        record.failure.get_or_insert(Failure::ContractionIdentityViolated);
    }
    Ok(record)
}

/// Checks exactness of the truncated symbol sequences on `W_{•,D}`, searching
/// preimages in windows up to `D + slack`.
pub fn check_exactness<T: Field>(sp: &SymplecticSpace<T>, d: u32, xi: &Covector<T>, xi_spec: &str, slack: u32) -> Result<ExactnessReport> {
    if xi.is_zero() {
        return Err(Error::contract("the symbol is taken at a nonzero covector"));
    }
    let l = sp.l();
    let mut positions = SymbolPosition::all(l)
        .par_iter()
        .map(|&pos| check_position(sp, pos, xi, d, slack))
        .collect::<Result<Vec<_>>>()?;
    if l == 1 {
        positions.insert(
            0,
            PositionRecord {
                i: 0,
                side: Side::Left,
                dim_domain: 0,
                dim_kernel: 0,
                preimages_found: 0,
                status: Status::Vacuous,
                failure: None,
                min_slack: None,
                contraction: None,
                preimages_found_unconstrained: None,
            },
        );
    }
    Ok(ExactnessReport { l, d, slack, xi: XiDescriptor::new(sp, xi_spec, xi), positions })
}

/// Solves `ξ ∧ β = ω` for an exterior form `ω` with `ξ ∧ ω = 0`.
pub fn cartan_preimage<T: Field>(xi: &Covector<T>, omega: &ExteriorForm<T>) -> Result<ExteriorForm<T>> {
    let n = xi.dim();
    if xi.is_zero() {
        return Err(Error::contract("ξ must be nonzero"));
    }
    if omega.dim() != n {
        return Err(Error::contract("ξ and ω live on spaces of different dimension"));
    }
    let r = omega.degree();
    if r == 0 {
        return Err(Error::contract("ω must have degree at least 1"));
    }
    if !omega.wedge_covector(xi).is_zero() {
        return Err(Error::contract("ξ ∧ ω ≠ 0, so ω is not divisible by ξ"));
    }
    let domain = FormIndex::subsets(n, r - 1);
    let columns: Vec<Vec<(usize, T)>> = domain
        .iter()
        .map(|f| {
            let img = ExteriorForm::from_terms(n, r - 1, [(*f, T::one())]).wedge_covector(xi);
            img.coordinates().into_iter().enumerate().filter(|(_, c)| !c.is_zero()).collect()
        })
        .collect();
    let m = OperatorMatrix::from_sparse_columns(FormIndex::subsets(n, r).len(), columns);
    let x = linalg::solve(&m, &omega.coordinates())?.ok_or_else(|| Error::contract("no preimage although ξ ∧ ω = 0"))?;
    Ok(ExteriorForm::from_terms(n, r - 1, domain.into_iter().zip(x)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spinor::Spinor;
    use crate::Scalar;

    fn sp(l: usize) -> SymplecticSpace<Scalar> {
        SymplecticSpace::standard(l).unwrap()
    }

    fn f(ix: &[usize]) -> FormIndex {
        FormIndex::from_indices(ix).unwrap()
    }

    #[test]
    fn positions() {
        let p = SymbolPosition::all(3);
        let got: Vec<(usize, Side)> = p.iter().map(|p| (p.i, p.side)).collect();
        assert_eq!(got, vec![(0, Side::Left), (1, Side::Left), (4, Side::Right), (5, Side::Right), (6, Side::Right)]);
        assert_eq!(SymbolPosition::all(1).len(), 1);
    }

    #[test]
    fn canonical_xi_sharp_is_e1() {
        for l in 1..=3 {
            let s = sp(l);
            let xi = canonical_xi(&s);
            assert_eq!(xi, s.basis_covector(l));
            assert_eq!(s.sharp(&xi), s.basis_vector(0));
        }
    }

    #[test]
    fn zero_xi_rejected() {
        let s = sp(2);
        let psi = SpinorForm::tensor(FormIndex::EMPTY, &Spinor::one(2));
        assert!(symbol_apply(&s, 0, &Covector::zero(4), &psi).is_err());
    }

    #[test]
    fn symbol_at_zero_uses_beta() {
        let s = sp(2);
        let xi = canonical_xi(&s);
        let one = Spinor::<Scalar>::one(2);
        let psi = SpinorForm::tensor(FormIndex::EMPTY, &one);
        let got = symbol_apply(&s, 0, &xi, &psi).unwrap();
        let v = s.sharp(&xi);
        let want = forms::wedge(&xi, &psi).add(&osp::f_plus(&s, &forms::clifford_on_form(&s, &v, &psi)).scale(&Scalar::from_ratio(-2, 2)));
        assert_eq!(got, want);
    }

    #[test]
    fn symbol_above_middle_is_wedge() {
        let s = sp(2);
        let xi = canonical_xi(&s);
        for psi in osp::edge_basis(&s, 3, 1).unwrap() {
            assert_eq!(symbol_apply(&s, 3, &xi, &psi).unwrap(), forms::wedge(&xi, &psi));
        }
    }

    #[test]
    fn cartan_examples() {
        let xi = Covector::<Scalar>::basis(4, 0);
        let omega = ExteriorForm::from_terms(4, 2, [(f(&[0, 1]), Scalar::from_int(1))]);
        let beta = cartan_preimage(&xi, &omega).unwrap();
        assert_eq!(beta.wedge_covector(&xi), omega);
        assert_eq!(beta.coefficient(f(&[1])), Scalar::from_int(1));
        let zero = ExteriorForm::zero(4, 2);
        assert!(cartan_preimage(&xi, &zero).unwrap().wedge_covector(&xi).is_zero());
        let bad = ExteriorForm::from_terms(4, 1, [(f(&[1]), Scalar::from_int(1))]);
        assert!(cartan_preimage(&xi, &bad).is_err());
    }

    #[test]
    fn l1_is_vacuous_on_the_left() {
        let s = sp(1);
        let report = check_exactness(&s, 1, &canonical_xi(&s), "canonical", 2).unwrap();
        assert_eq!(report.positions[0].status, Status::Vacuous);
        assert_eq!(report.positions[0].side, Side::Left);
    }
}
