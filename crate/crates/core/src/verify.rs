//! Verification suites that bundle the checks of the other modules into
//! serializable reports. Every report lists its entries in a fixed order.

use rayon::prelude::*;
use serde::Serialize;
use serde_json::Value;

use crate::codec::encode_scalar;
use crate::curvature::{self, CurvatureTensor};
use crate::error::Result;
use crate::field::Field;
use crate::forms::{self, FormWindow, SpinorForm};
use crate::osp::{self, OspOp};
use crate::symplectic::{Covector, SymplecticSpace};
use crate::twistor::{self, ComplexReport, ExactnessReport, Status};

fn status(ok: bool) -> Status {
    if ok {
        Status::Pass
    } else {
        Status::Fail
    }
}

/// One identity checked on every basis vector of a window.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdentityCheck {
    pub name: String,
    pub r: usize,
    pub checked: usize,
    pub defects: usize,
    pub status: Status,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RelationsReport {
    pub l: usize,
    #[serde(rename = "D")]
    pub d: u32,
    pub identities: Vec<IdentityCheck>,
}

impl RelationsReport {
    pub fn passed(&self) -> bool {
        self.identities.iter().all(|c| c.status == Status::Pass)
    }
}

fn basis_forms<T: Field>(l: usize, r: usize, d: u32) -> Result<Vec<SpinorForm<T>>> {
    let win = FormWindow::new(l, r, d)?;
    Ok((0..win.dim()).map(|k| win.basis_form(k)).collect())
}

fn identity<T: Field>(name: &str, r: usize, basis: &[SpinorForm<T>], holds: impl Fn(&SpinorForm<T>) -> bool + Sync) -> IdentityCheck {
    let defects = basis.par_iter().filter(|psi| !holds(psi)).count();
    IdentityCheck { name: name.into(), r, checked: basis.len(), defects, status: status(defects == 0) }
}

fn parity_flips<T: Field>(psi: &SpinorForm<T>, image: &SpinorForm<T>) -> bool {
    let (even, _) = psi.parity_split();
    let input_even = !even.is_zero();
    let (img_even, img_odd) = image.parity_split();
    if input_even {
        img_even.is_zero()
    } else {
        img_odd.is_zero()
    }
}

/// The operator identities of the osp(1|2) action on every window `W_{r,D}`.
pub fn relations_suite<T: Field>(sp: &SymplecticSpace<T>, d: u32) -> Result<RelationsReport> {
    let l = sp.l();
    let n = sp.dim();
    let op = |o: OspOp, psi: &SpinorForm<T>| osp::apply_osp(o, sp, psi);
    let mut identities = Vec::new();
    for r in 0..=n {
        let basis = basis_forms::<T>(l, r, d)?;
        identities.push(identity("[E+,E-] = H", r, &basis, |psi| {
            let lhs = op(OspOp::EPlus, &op(OspOp::EMinus, psi)).sub(&op(OspOp::EMinus, &op(OspOp::EPlus, psi)));
            lhs.sub(&op(OspOp::H, psi)).is_zero()
        }));
        identities.push(identity("[E+,E-] = 2H", r, &basis, |psi| {
            let lhs = op(OspOp::EPlus, &op(OspOp::EMinus, psi)).sub(&op(OspOp::EMinus, &op(OspOp::EPlus, psi)));
            lhs.sub(&op(OspOp::H, psi).scale(&T::from_int(2))).is_zero()
        }));
        identities.push(identity("[E-,F+] = -F-", r, &basis, |psi| {
            let lhs = op(OspOp::EMinus, &op(OspOp::FPlus, psi)).sub(&op(OspOp::FPlus, &op(OspOp::EMinus, psi)));
            lhs.add(&op(OspOp::FMinus, psi)).is_zero()
        }));
        let h_scalar = T::from_ratio(r as i64 - l as i64, 2);
        identities.push(identity("H = (r-l)/2 Id", r, &basis, |psi| op(OspOp::H, psi).sub(&psi.scale(&h_scalar)).is_zero()));
        identities.push(identity("{F+, i_v} = (i/2) v.", r, &basis, |psi| {
            (0..n).all(|k| osp::fplus_contraction_defect(sp, &sp.basis_vector(k), psi).is_zero())
        }));
        identities.push(identity("[F-, v.] = (i/2) i_v", r, &basis, |psi| {
            (0..n).all(|k| osp::fminus_clifford_defect(sp, &sp.basis_vector(k), psi).is_zero())
        }));
        identities.push(identity("E- = (i/2) w^ij i_i i_j", r, &basis, |psi| {
            op(OspOp::EMinus, psi).sub(&osp::e_minus_contraction(sp, psi)).is_zero()
        }));
        identities.push(identity("E+ acts on forms only", r, &basis, |psi| {
            let (_, m, _) = psi.terms().next().expect("basis form");
            op(OspOp::EPlus, psi).terms().all(|(_, m2, _)| m2 == m)
        }));
        identities.push(identity("F+ and F- flip spinor parity", r, &basis, |psi| {
            parity_flips(psi, &op(OspOp::FPlus, psi)) && parity_flips(psi, &op(OspOp::FMinus, psi))
        }));
    }
    Ok(RelationsReport { l, d, identities })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScalarEntry {
    pub i: usize,
    pub j: usize,
    pub c: Value,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ComponentEntry {
    pub r: usize,
    pub j: usize,
    pub dim: usize,
    /// Basis vectors on which `F⁻F⁺` acts as `c_{rj}`.
    pub eigen_verified: usize,
    pub status: Status,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CrossCheck {
    pub i: usize,
    pub dim_eigen: usize,
    pub dim_kernel: usize,
    pub kernel: String,
    pub status: Status,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChainEntry {
    pub r: usize,
    pub j: usize,
    pub chains: usize,
    pub rank: usize,
    pub status: Status,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChainSummary {
    pub certificate: osp::InvarianceCertificate,
    pub spinor_degree: u32,
    pub dim: usize,
    pub entries: Vec<ChainEntry>,
    /// `(vector, k)` pairs checked for `p^{rk} u = δ_{jk} u`.
    pub projector_checks: usize,
    pub projector_failures: usize,
    pub status: Status,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NeighbourCheck {
    pub checked: usize,
    pub violations: usize,
    pub status: Status,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DecomposeReport {
    pub l: usize,
    #[serde(rename = "D")]
    pub d: u32,
    pub scalar_table: Vec<ScalarEntry>,
    pub scalars_distinct: bool,
    pub components: Vec<ComponentEntry>,
    pub primitive_cross_check: Vec<CrossCheck>,
    pub top_cross_check: Vec<CrossCheck>,
    pub chain_model: ChainSummary,
    pub neighbours: NeighbourCheck,
}

impl DecomposeReport {
    pub fn passed(&self) -> bool {
        self.scalars_distinct
            && self.components.iter().all(|c| c.status == Status::Pass)
            && self.primitive_cross_check.iter().all(|c| c.status == Status::Pass)
            && self.top_cross_check.iter().all(|c| c.status == Status::Pass)
            && self.chain_model.status == Status::Pass
            && self.neighbours.status == Status::Pass
    }
}

/// Whether `F⁻F⁺ ψ = c ψ`.
pub fn is_eigenvector<T: Field>(sp: &SymplecticSpace<T>, psi: &SpinorForm<T>, c: &T) -> bool {
    osp::casimir(sp, psi).sub(&psi.scale(c)).is_zero()
}

/// Verifies the chain model of `W_{•,D}`: invariance, dimensions per
/// component and that the projectors resolve the identity on it.
pub fn chain_summary<T: Field>(sp: &SymplecticSpace<T>, d: u32) -> Result<ChainSummary> {
    let l = sp.l();
    let model = osp::chain_model(sp, d)?;
    let mut entries = Vec::new();
    let mut dim = 0;
    let mut ok = model.certificate.holds();
    for r in 0..=2 * l {
        let all: Vec<&SpinorForm<T>> = model.degree(r).into_iter().map(|(_, v)| v).collect();
        let total = model.rank_of(r, &all)?;
        dim += total;
        let mut sum = 0;
        for j in 0..=osp::m_index(l, r) {
            let vs = model.component(r, j);
            let rank = model.rank_of(r, &vs)?;
            sum += vs.len();
            let good = rank == vs.len();
            ok &= good;
            entries.push(ChainEntry { r, j, chains: vs.len(), rank, status: status(good) });
        }
        ok &= total == sum;
    }
    let pairs: Vec<(usize, usize, &SpinorForm<T>)> = (0..=2 * l)
        .flat_map(|r| model.degree(r).into_iter().map(move |(j, v)| (r, j, v)))
        .collect();
    let results = pairs
        .par_iter()
        .map(|&(r, j, v)| {
            let mut fails = 0;
            let mut checks = 0;
            for k in 0..=osp::m_index(l, r) {
                let p = osp::component_projector(sp, k, v)?;
                let good = if k == j { p == *v } else { p.is_zero() };
                checks += 1;
                fails += usize::from(!good);
            }
            Ok((checks, fails))
        })
        .collect::<Result<Vec<_>>>()?;
    let projector_checks = results.iter().map(|x| x.0).sum();
    let projector_failures = results.iter().map(|x| x.1).sum::<usize>();
    ok &= projector_failures == 0;
    Ok(ChainSummary {
        certificate: model.certificate.clone(),
        spinor_degree: model.spinor_degree(),
        dim,
        entries,
        projector_checks,
        projector_failures,
        status: status(ok),
    })
}

/// `p^{r+1,k}(ξ∧ψ) = 0` for `k ∉ {j−1, j, j+1}`, over all component basis
/// vectors `ψ ∈ E^{rj}`, `r < 2l`, and all basis covectors `ξ`.
pub fn neighbour_check<T: Field>(sp: &SymplecticSpace<T>, bases: &[Vec<Vec<SpinorForm<T>>>]) -> Result<NeighbourCheck> {
    let l = sp.l();
    let n = sp.dim();
    let jobs: Vec<(usize, usize, &SpinorForm<T>)> = bases
        .iter()
        .enumerate()
        .take(n)
        .flat_map(|(r, row)| row.iter().enumerate().flat_map(move |(j, vs)| vs.iter().map(move |v| (r, j, v))))
        .collect();
    let counts = jobs
        .par_iter()
        .map(|&(r, j, psi)| {
            let mut checked = 0;
            let mut bad = 0;
            for a in 0..n {
                let w = forms::wedge(&sp.basis_covector(a), psi);
                for k in 0..=osp::m_index(l, r + 1) {
                    if k + 1 >= j && k <= j + 1 {
                        continue;
                    }
                    checked += 1;
                    bad += usize::from(!osp::component_projector(sp, k, &w)?.is_zero());
                }
            }
            Ok((checked, bad))
        })
        .collect::<Result<Vec<_>>>()?;
    let checked = counts.iter().map(|c| c.0).sum();
    let violations = counts.iter().map(|c| c.1).sum::<usize>();
    Ok(NeighbourCheck { checked, violations, status: status(violations == 0) })
}

/// Scalar table, component bases, their cross-checks, the chain model and the
/// neighbour rule for wedges.
pub fn decompose_suite<T: Field>(sp: &SymplecticSpace<T>, d: u32) -> Result<DecomposeReport> {
    let l = sp.l();
    let scalar_table = osp::TriangleLabel::all(l)
        .into_iter()
        .map(|t| Ok(ScalarEntry { i: t.i, j: t.j, c: encode_scalar(&osp::component_scalar::<T>(l, t.i, t.j)?) }))
        .collect::<Result<Vec<_>>>()?;
    let bases = (0..=2 * l).into_par_iter().map(|r| osp::component_bases(sp, r, d)).collect::<Result<Vec<_>>>()?;
    let mut components = Vec::new();
    for (r, row) in bases.iter().enumerate() {
        for (j, vs) in row.iter().enumerate() {
            let c: T = osp::component_scalar(l, r, j)?;
            let eigen_verified = vs.par_iter().filter(|v| is_eigenvector(sp, v, &c)).count();
            components.push(ComponentEntry { r, j, dim: vs.len(), eigen_verified, status: status(eigen_verified == vs.len()) });
        }
    }
    let primitive_cross_check = (0..=l)
        .map(|j| {
            let dim_kernel = osp::primitive_basis(sp, j, d)?.len();
            let dim_eigen = bases[j][j].len();
            Ok(CrossCheck { i: j, dim_eigen, dim_kernel, kernel: "F-".into(), status: status(dim_eigen == dim_kernel) })
        })
        .collect::<Result<Vec<_>>>()?;
    let top_cross_check = (l..=2 * l)
        .map(|i| {
            let dim_kernel = osp::top_basis(sp, i, d)?.len();
            let dim_eigen = bases[i][osp::m_index(l, i)].len();
            Ok(CrossCheck { i, dim_eigen, dim_kernel, kernel: "F+".into(), status: status(dim_eigen == dim_kernel) })
        })
        .collect::<Result<Vec<_>>>()?;
    let chain_model = chain_summary(sp, d)?;
    let neighbours = neighbour_check(sp, &bases)?;
    Ok(DecomposeReport {
        l,
        d,
        scalar_table,
        scalars_distinct: osp::scalars_distinct::<T>(l),
        components,
        primitive_cross_check,
        top_cross_check,
        chain_model,
        neighbours,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProjectionCheck {
    pub i: usize,
    pub checked: usize,
    pub mismatches: usize,
    pub status: Status,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CoefficientCheck {
    pub i: usize,
    /// `α_0, …, α_{i+1}` of the normal form of `p^{i+1}`.
    pub alpha: Vec<Value>,
    pub alpha1_expected: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha2_expected: Option<Value>,
    pub beta: Value,
    pub gamma: Value,
    pub beta_from_alpha: Value,
    pub gamma_from_alpha: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta_fit: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma_fit: Option<Value>,
    pub status: Status,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProjectReport {
    pub l: usize,
    #[serde(rename = "D")]
    pub d: u32,
    pub projections: Vec<ProjectionCheck>,
    pub coefficients: Vec<CoefficientCheck>,
}

impl ProjectReport {
    pub fn passed(&self) -> bool {
        self.projections.iter().all(|c| c.status == Status::Pass) && self.coefficients.iter().all(|c| c.status == Status::Pass)
    }
}

/// Checks the closed-form projection on every edge basis vector and basis
/// covector, and recovers its coefficients two ways.
pub fn project_suite<T: Field>(sp: &SymplecticSpace<T>, d: u32) -> Result<ProjectReport> {
    let l = sp.l();
    let n = sp.dim();
    let edges = (0..n).into_par_iter().map(|i| osp::edge_basis(sp, i, d)).collect::<Result<Vec<_>>>()?;
    let projections = edges
        .par_iter()
        .enumerate()
        .map(|(i, basis)| {
            let mut mismatches = 0;
            for psi in basis {
                for a in 0..n {
                    let xi = sp.basis_covector(a);
                    let closed = osp::project_wedge(sp, i, &xi, psi)?;
                    let spectral = osp::edge_projector(sp, &forms::wedge(&xi, psi))?;
                    mismatches += usize::from(closed != spectral);
                }
            }
            Ok(ProjectionCheck { i, checked: basis.len() * n, mismatches, status: status(mismatches == 0) })
        })
        .collect::<Result<Vec<_>>>()?;
    let mut coefficients = Vec::new();
    for (i, basis) in edges.iter().enumerate().take(l) {
        let alpha: Vec<T> = osp::normal_form_coefficients(l, i + 1)?;
        let (beta, gamma) = osp::wedge_coefficients::<T>(l, i)?;
        let gap = (l - i) as i64;
        let a1 = T::from_ratio(4, gap);
        let a2 = (i >= 1).then(|| T::from_ratio(16, gap));
        let beta_from_alpha = -alpha[1].clone() / T::from_int(2);
        let gamma_from_alpha = alpha.get(2).map_or_else(|| gamma.clone(), |a| -(T::imag_unit() * a.clone()) / T::from_int(16));
        let inputs: Vec<(Covector<T>, SpinorForm<T>)> =
            basis.iter().flat_map(|psi| (0..n).map(move |a| (sp.basis_covector(a), psi.clone()))).collect();
        let fit = osp::fit_wedge_coefficients(sp, &inputs)?;
        let mut ok = alpha[1] == a1 && a2.as_ref().is_none_or(|a2| alpha[2] == *a2);
        ok &= beta_from_alpha == beta && gamma_from_alpha == gamma && fit.consistent;
        ok &= fit.beta.as_ref().is_none_or(|b| *b == beta) && fit.gamma.as_ref().is_none_or(|g| *g == gamma);
        ok &= fit.beta.is_some() || basis.is_empty();
        coefficients.push(CoefficientCheck {
            i,
            alpha: alpha.iter().map(encode_scalar).collect(),
            alpha1_expected: encode_scalar(&a1),
            alpha2_expected: a2.as_ref().map(encode_scalar),
            beta: encode_scalar(&beta),
            gamma: encode_scalar(&gamma),
            beta_from_alpha: encode_scalar(&beta_from_alpha),
            gamma_from_alpha: encode_scalar(&gamma_from_alpha),
            beta_fit: fit.beta.as_ref().map(encode_scalar),
            gamma_fit: fit.gamma.as_ref().map(encode_scalar),
            status: status(ok),
        });
    }
    Ok(ProjectReport { l, d, projections, coefficients })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SymbolReport {
    pub complex: ComplexReport,
    pub exactness: ExactnessReport,
}

impl SymbolReport {
    pub fn passed(&self) -> bool {
        self.complex.passed() && self.exactness.passed()
    }
}

pub fn symbol_suite<T: Field>(sp: &SymplecticSpace<T>, d: u32, xi: &Covector<T>, xi_spec: &str, slack: u32) -> Result<SymbolReport> {
    Ok(SymbolReport {
        complex: twistor::check_complex(sp, d, xi, xi_spec)?,
        exactness: twistor::check_exactness(sp, d, xi, xi_spec, slack)?,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CurvatureReport {
    pub l: usize,
    pub ricci: Value,
    pub weyl: Value,
    pub ricci_type: bool,
    pub normalization: Value,
    /// Symmetry in the first index pair, checked but not required.
    pub pair_symmetric: bool,
    pub ricci_trace_zero: bool,
}

/// Splits a valid curvature tensor into its Ricci and Weyl parts.
pub fn curvature_suite<T: Field>(sp: &SymplecticSpace<T>, r: &CurvatureTensor<T>) -> Result<CurvatureReport> {
    let sigma = curvature::ricci_contract(sp, r)?;
    let weyl = curvature::weyl_part(sp, r)?;
    Ok(CurvatureReport {
        l: r.l(),
        ricci: sigma.to_json(),
        ricci_type: weyl.is_zero(),
        weyl: weyl.to_json(),
        normalization: encode_scalar(&T::from_int(curvature::RICCI_NORMALIZATION)),
        pair_symmetric: r.is_pair_symmetric(),
        ricci_trace_zero: sigma.symplectic_trace(sp).is_zero(),
    })
}
