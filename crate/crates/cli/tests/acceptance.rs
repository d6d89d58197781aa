//! Acceptance suite: one PASS/FAIL line per criterion with its runtime limit.
//!
//! Two criteria fail for mathematical reasons that the suite pins down
//! exactly (see `KNOWN_FAILURES`). The process exits nonzero when any
//! criterion deviates from its recorded outcome, including a known failure
//! changing shape or starting to pass.

use std::collections::BTreeSet;
use std::process::Command;
use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};
use num_traits::{One, Zero};
use twistor_core::curvature;
use twistor_core::forms::{self, FormWindow};
use twistor_core::osp::{self, OspOp};
use twistor_core::spinor::{commutator_defect, Monomial, Spinor};
use twistor_core::twistor::{self, Failure, Side, Status};
use twistor_core::{verify, CurvatureTensor, Field, OperatorMatrix, Scalar, SpinorForm, SymplecticSpace};

type Sp = SymplecticSpace;
type Matrix = OperatorMatrix<Scalar>;
/// Number, name, runtime limit in seconds and the check.
type Criterion = (usize, &'static str, u64, fn() -> Verdict);

struct Verdict {
    passed: bool,
    detail: String,
    /// A fingerprint of a failure, compared against `KNOWN_FAILURES`.
    failure_pattern: Option<String>,
}

impl Verdict {
    fn pass(detail: impl Into<String>) -> Self {
        Verdict { passed: true, detail: detail.into(), failure_pattern: None }
    }

    fn fail(detail: impl Into<String>, pattern: impl Into<String>) -> Self {
        Verdict { passed: false, detail: detail.into(), failure_pattern: Some(pattern.into()) }
    }
}

const KNOWN_FAILURES: &[(usize, &str)] = &[
    (2, "[E+,E-] = H fails exactly off r = l; [E+,E-] = 2H holds everywhere"),
    (
        7,
        "right i = l+1 has no edge preimage for D >= 1 while unconstrained preimages exist; \
         l = 3 left i = 1 violates the contraction identity for D >= 2",
    ),
];

fn space(l: usize) -> Sp {
    SymplecticSpace::standard(l).expect("l >= 1")
}

fn criterion_1() -> Verdict {
    let mut checked = 0usize;
    let mut defects = 0usize;
    for l in 1..=3 {
        let sp = space(l);
        let monomials: Vec<Monomial> = (0..=6).flat_map(|d| Monomial::of_degree(l, d)).collect();
        for a in 0..sp.dim() {
            for b in 0..sp.dim() {
                let (v, w) = (sp.basis_vector(a), sp.basis_vector(b));
                for m in &monomials {
                    let s = Spinor::monomial(m.clone(), Scalar::one());
                    checked += 1;
                    defects += usize::from(!commutator_defect(&sp, &v, &w, &s).is_zero());
                }
            }
        }
    }
    let detail = format!("{checked} (pair, monomial) cases, {defects} nonzero defects");
    if defects == 0 {
        Verdict::pass(detail)
    } else {
        Verdict::fail(detail, "commutation defect")
    }
}

/// Matrix of `op` from `W_{r,d}` to `W_{r_out,d_out}`, zero when a degree leaves `0..=2l`.
fn mat(sp: &Sp, r: isize, d: u32, r_out: isize, d_out: u32, op: impl Fn(&SpinorForm) -> SpinorForm + Sync) -> Option<Matrix> {
    let n = sp.dim() as isize;
    if !(0..=n).contains(&r) || !(0..=n).contains(&r_out) {
        return None;
    }
    let dom = FormWindow::new(sp.l(), r as usize, d).unwrap();
    let cod = FormWindow::new(sp.l(), r_out as usize, d_out).unwrap();
    Some(forms::operator_matrix(&dom, &cod, op).unwrap())
}

fn gen(sp: &Sp, op: OspOp, r: isize, d: u32) -> Option<Matrix> {
    let r_out = r + op.form_shift();
    mat(sp, r, d, r_out, d + op.degree_growth(), |psi| osp::apply_osp(op, sp, psi))
}

/// `a ∘ b`, treating `None` as a zero map.
fn comp(a: Option<Matrix>, b: Option<Matrix>) -> Option<Matrix> {
    Some(a?.compose(&b?))
}

fn embed(sp: &Sp, r: isize, d: u32, d_out: u32) -> Option<Matrix> {
    mat(sp, r, d, r, d_out, |psi| psi.clone())
}

/// `Σ c_k M_k − rhs`, all maps sharing one domain and codomain; zero maps are skipped.
fn defect(terms: Vec<(Scalar, Option<Matrix>)>) -> bool {
    let mut acc: Option<Matrix> = None;
    for (c, m) in terms {
        if let Some(m) = m {
            let m = m.scale(&c);
            acc = Some(match acc {
                Some(a) => a.add(&m),
                None => m,
            });
        }
    }
    acc.is_some_and(|a| !a.is_zero())
}

fn criterion_2() -> Verdict {
    let one = Scalar::one;
    let half_i = Scalar::imag_unit() * Scalar::from_ratio(1, 2);
    let mut failing: BTreeSet<String> = BTreeSet::new();
    let mut double_h_defects = 0;
    let mut cases = 0;
    for l in 2..=3usize {
        let sp = space(l);
        let n = sp.dim() as isize;
        for d in 0..=3u32 {
            for r in 0..=n {
                cases += 1;
                let comm = || {
                    vec![
                        (one(), comp(gen(&sp, OspOp::EPlus, r - 2, d + 2), gen(&sp, OspOp::EMinus, r, d))),
                        (-one(), comp(gen(&sp, OspOp::EMinus, r + 2, d + 2), gen(&sp, OspOp::EPlus, r, d))),
                    ]
                };
                let h_embedded = || comp(embed(&sp, r, d + 2, d + 4), gen(&sp, OspOp::H, r, d));
                let mut t = comm();
                t.push((-one(), h_embedded()));
                if defect(t) {
                    failing.insert(format!("[E+,E-]=H l={l} r={r}"));
                }
                let mut t = comm();
                t.push((-Scalar::from_int(2), h_embedded()));
                double_h_defects += usize::from(defect(t));

                let t = vec![
                    (one(), comp(gen(&sp, OspOp::EMinus, r + 1, d + 1), gen(&sp, OspOp::FPlus, r, d))),
                    (-one(), comp(gen(&sp, OspOp::FPlus, r - 2, d + 2), gen(&sp, OspOp::EMinus, r, d))),
                    (one(), comp(embed(&sp, r - 1, d + 1, d + 3), gen(&sp, OspOp::FMinus, r, d))),
                ];
                if defect(t) {
                    failing.insert(format!("[E-,F+]=-F- l={l} r={r}"));
                }

                let t = vec![(one(), gen(&sp, OspOp::H, r, d)), (-Scalar::from_ratio(r as i64 - l as i64, 2), embed(&sp, r, d, d + 2))];
                if defect(t) {
                    failing.insert(format!("H l={l} r={r}"));
                }

                for k in 0..sp.dim() {
                    let v = sp.basis_vector(k);
                    let iota = |r: isize, d: u32| mat(&sp, r, d, r - 1, d, |psi| forms::contract(&v, psi));
                    let cliff = |r: isize, d: u32| mat(&sp, r, d, r, d + 1, |psi| forms::clifford_on_form(&sp, &v, psi));
                    let t = vec![
                        (one(), comp(gen(&sp, OspOp::FPlus, r - 1, d), iota(r, d))),
                        (one(), comp(iota(r + 1, d + 1), gen(&sp, OspOp::FPlus, r, d))),
                        (-half_i.clone(), cliff(r, d)),
                    ];
                    if defect(t) {
                        failing.insert(format!("{{F+,i_v}} l={l} r={r}"));
                    }
                    let t = vec![
                        (one(), comp(gen(&sp, OspOp::FMinus, r, d + 1), cliff(r, d))),
                        (-one(), comp(cliff(r - 1, d + 1), gen(&sp, OspOp::FMinus, r, d))),
                        (-half_i.clone(), comp(embed(&sp, r - 1, d, d + 2), iota(r, d))),
                    ];
                    if defect(t) {
                        failing.insert(format!("[F-,v.] l={l} r={r}"));
                    }
                }
            }
        }
    }
    let detail = format!(
        "{cases} (l, D, r) windows; failing: {}; [E+,E-] = 2H defects: {double_h_defects}",
        if failing.is_empty() { "none".to_string() } else { failing.iter().cloned().collect::<Vec<_>>().join(", ") }
    );
    if failing.is_empty() {
        return Verdict::pass(detail);
    }
    let only_commutator_off_middle = failing.iter().all(|f| f.starts_with("[E+,E-]=H"))
        && (2..=3usize).all(|l| (0..=2 * l).all(|r| failing.contains(&format!("[E+,E-]=H l={l} r={r}")) == (r != l)));
    let pattern = if only_commutator_off_middle && double_h_defects == 0 {
        KNOWN_FAILURES[0].1.to_string()
    } else {
        failing.iter().cloned().collect::<Vec<_>>().join("; ")
    };
    Verdict::fail(detail, pattern)
}

fn criterion_3() -> Verdict {
    let mut vectors = 0;
    let mut bad = 0;
    for l in 1..=3 {
        let sp = space(l);
        for d in 0..=2 {
            for r in 0..=2 * l {
                for (j, basis) in osp::component_bases(&sp, r, d).unwrap().iter().enumerate() {
                    let c: Scalar = osp::component_scalar(l, r, j).unwrap();
                    vectors += basis.len();
                    bad += basis.iter().filter(|v| !verify::is_eigenvector(&sp, v, &c)).count();
                }
            }
        }
    }
    let not_distinct: Vec<usize> = (1..=6).filter(|&l| !osp::scalars_distinct::<Scalar>(l)).collect();
    let detail = format!("{vectors} component vectors (l <= 3, D <= 2), {bad} off-eigenvalue; columns with repeated scalars: {not_distinct:?}");
    if bad == 0 && not_distinct.is_empty() {
        Verdict::pass(detail)
    } else {
        Verdict::fail(detail, "scalar table")
    }
}

fn criterion_4() -> Verdict {
    let mut lines = Vec::new();
    let mut ok = true;
    for l in 2..=3 {
        let sp = space(l);
        for d in 0..=2 {
            let s = verify::chain_summary(&sp, d).unwrap();
            ok &= s.status == Status::Pass;
            lines.push(format!("l={l} D={d} dim={} projector checks={}", s.dim, s.projector_checks));
        }
    }
    let detail = lines.join("; ");
    if ok {
        Verdict::pass(detail)
    } else {
        Verdict::fail(detail, "chain model")
    }
}

fn criterion_5() -> Verdict {
    let (mut checked, mut violations) = (0, 0);
    for l in 2..=3 {
        let sp = space(l);
        for d in 0..=2 {
            let bases: Vec<_> = (0..=2 * l).map(|r| osp::component_bases(&sp, r, d).unwrap()).collect();
            let c = verify::neighbour_check(&sp, &bases).unwrap();
            checked += c.checked;
            violations += c.violations;
        }
    }
    let detail = format!("{checked} projections p^(r+1,k)(xi ^ psi) with |k - j| > 1, {violations} nonzero");
    if violations == 0 {
        Verdict::pass(detail)
    } else {
        Verdict::fail(detail, "neighbour rule")
    }
}

fn criterion_6() -> Verdict {
    let (mut checked, mut mismatches, mut coefficient_failures) = (0, 0, 0);
    for l in 2..=3 {
        let sp = space(l);
        for d in 0..=2 {
            let rep = verify::project_suite(&sp, d).unwrap();
            checked += rep.projections.iter().map(|p| p.checked).sum::<usize>();
            mismatches += rep.projections.iter().map(|p| p.mismatches).sum::<usize>();
            coefficient_failures += rep.coefficients.iter().filter(|c| c.status != Status::Pass).count();
        }
    }
    let detail = format!("{checked} edge inputs, {mismatches} mismatches, {coefficient_failures} coefficient mismatches");
    if mismatches == 0 && coefficient_failures == 0 {
        Verdict::pass(detail)
    } else {
        Verdict::fail(detail, "projection")
    }
}

fn criterion_7() -> Verdict {
    let mut failures: Vec<String> = Vec::new();
    let mut complex_ok = true;
    let mut pattern_ok = true;
    let mut kernels = 0;
    for l in 2..=3usize {
        let sp = space(l);
        let xi = twistor::canonical_xi(&sp);
        for d in 0..=3 {
            let rep = verify::symbol_suite(&sp, d, &xi, "canonical", 4).unwrap();
            complex_ok &= rep.complex.passed();
            for p in &rep.exactness.positions {
                kernels += p.dim_kernel;
                if p.status != Status::Fail {
                    continue;
                }
                let side = if p.side == Side::Left { "left" } else { "right" };
                failures.push(format!("l={l} D={d} {side} i={} ({}/{} preimages)", p.i, p.preimages_found, p.dim_kernel));
                let expected = match (p.side, p.failure) {
                    (Side::Right, Some(Failure::NoPreimageWithinSlack)) => {
                        p.i == l + 1 && p.preimages_found_unconstrained == Some(p.dim_kernel)
                    }
                    (Side::Left, Some(Failure::ContractionIdentityViolated)) => l == 3 && p.i == 1,
                    _ => false,
                };
                pattern_ok &= expected;
            }
            let right_fails = rep.exactness.positions.iter().any(|p| p.side == Side::Right && p.i == l + 1 && p.status == Status::Fail);
            let left_fails = rep.exactness.positions.iter().any(|p| p.side == Side::Left && p.i == 1 && p.status == Status::Fail);
            pattern_ok &= right_fails == (d >= 1) && left_fails == (l == 3 && d >= 2);
        }
    }
    let detail = format!(
        "composites zero: {complex_ok}; {kernels} kernel vectors; failing positions: {}",
        if failures.is_empty() { "none".to_string() } else { failures.join(", ") }
    );
    if complex_ok && failures.is_empty() {
        return Verdict::pass(detail);
    }
    let pattern = if complex_ok && pattern_ok { KNOWN_FAILURES[1].1.to_string() } else { failures.join("; ") };
    Verdict::fail(detail, pattern)
}

fn criterion_8() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut problems = Vec::new();
    let mut factors: BTreeSet<String> = BTreeSet::new();
    for l in 1..=3 {
        let sp = space(l);
        for _ in 0..100 {
            let sigma = curvature::random_symmetric::<Scalar>(l, &mut rng);
            let t = curvature::sigma_tilde(&sp, &sigma).unwrap();
            if !(t.is_antisymmetric() && t.satisfies_bianchi()) {
                problems.push(format!("l={l}: sigma_tilde violates the invariants"));
            }
            if !curvature::weyl_part(&sp, &t).unwrap().is_zero() {
                problems.push(format!("l={l}: nonzero Weyl part of a Ricci-type tensor"));
            }
            if l == 2 && !sigma.is_zero() {
                let back = curvature::ricci_contract(&sp, &t).unwrap();
                let k = sigma.entries().iter().position(|x| !x.is_zero()).unwrap();
                let factor = back.entries()[k].clone() / sigma.entries()[k].clone();
                if back != sigma.scale(&factor) {
                    problems.push("ricci(sigma_tilde(sigma)) is not proportional to sigma".into());
                }
                factors.insert(twistor_core::field::display_scalar(&factor));
            }
        }
    }
    let sp1 = space(1);
    let basis = curvature::curvature_space_basis(&sp1, false);
    for _ in 0..100 {
        let r: CurvatureTensor = curvature::random_curvature(&sp1, &basis, &mut rng);
        if !curvature::is_ricci_type(&sp1, &r).unwrap() {
            problems.push("l=1 tensor with nonzero Weyl part".into());
        }
    }
    let expected = twistor_core::field::display_scalar(&Scalar::from_int(curvature::RICCI_NORMALIZATION));
    if factors.len() != 1 || !factors.contains(&expected) {
        problems.push(format!("normalization factors {factors:?}, constant {expected}"));
    }
    let detail = format!("300 random sigma, 100 random l=1 tensors; normalization factors {factors:?}");
    if problems.is_empty() {
        Verdict::pass(detail)
    } else {
        Verdict::fail(format!("{detail}; {}", problems.join("; ")), "curvature")
    }
}

fn run_cli(args: &[&str]) -> (Vec<u8>, i32) {
    let out = Command::new(env!("CARGO_BIN_EXE_twistor")).args(args).output().expect("binary runs");
    (out.stdout, out.status.code().unwrap_or(-1))
}

fn criterion_9() -> Verdict {
    let dir = tempfile::tempdir().unwrap();
    let zero = dir.path().join("zero.json");
    std::fs::write(&zero, CurvatureTensor::zero(2).to_json().to_string()).unwrap();
    let zero = zero.to_str().unwrap().to_string();
    let runs: Vec<Vec<&str>> = vec![
        vec!["relations", "--l", "2", "--degree", "2"],
        vec!["decompose", "--l", "2", "--degree", "2"],
        vec!["project", "--l", "2", "--degree", "2", "--format", "text"],
        vec!["symbol-check", "--l", "2", "--degree", "2", "--slack", "4"],
        vec!["symbol-check", "--l", "2", "--degree", "1", "--xi", "1,0,0,1/2"],
        vec!["curvature", "--input", &zero],
        vec!["gen-curvature", "--l", "3", "--seed", "11"],
    ];
    let mut differing = Vec::new();
    for args in &runs {
        let digests: Vec<_> = (0..2)
            .map(|k| {
                let path = dir.path().join(format!("out{k}"));
                let mut full = args.clone();
                full.extend(["--out", path.to_str().unwrap()]);
                let (_, code_file) = run_cli(&full);
                let (stdout, code) = run_cli(args);
                let file = std::fs::read(&path).unwrap_or_default();
                (Sha256::digest(&stdout), Sha256::digest(&file), code, code_file, stdout == file)
            })
            .collect();
        if digests[0] != digests[1] || !digests[0].4 {
            differing.push(args.join(" "));
        }
    }
    let detail = format!("{} commands run twice to stdout and to --out", runs.len());
    if differing.is_empty() {
        Verdict::pass(detail)
    } else {
        Verdict::fail(format!("{detail}; differing: {}", differing.join(" | ")), "determinism")
    }
}

fn main() {
    let criteria: Vec<Criterion> = vec![
        (1, "Clifford commutation relation", 10, criterion_1),
        (2, "osp(1|2) operator identities as matrices", 60, criterion_2),
        (3, "Casimir scalar table", 60, criterion_3),
        (4, "chain model resolution", 120, criterion_4),
        (5, "neighbour rule for wedges", 120, criterion_5),
        (6, "closed-form edge projection", 120, criterion_6),
        (7, "symbol sequence complex and exactness", 600, criterion_7),
        (8, "Ricci and Weyl split", 30, criterion_8),
        (9, "CLI determinism", 120, criterion_9),
    ];
    let mut unexpected = Vec::new();
    for (n, name, limit, check) in criteria {
        let start = Instant::now();
        let mut verdict = check();
        let elapsed = start.elapsed();
        if elapsed > Duration::from_secs(limit) {
            verdict.passed = false;
            verdict.failure_pattern = Some("time limit".into());
            verdict.detail.push_str("; time limit exceeded");
        }
        let tag = if verdict.passed { "PASS" } else { "FAIL" };
        println!("criterion {n} {tag} {name} ({:.2} s, limit {limit} s): {}", elapsed.as_secs_f64(), verdict.detail);
        let known = KNOWN_FAILURES.iter().find(|(k, _)| *k == n).map(|(_, p)| *p);
        match (known, &verdict.failure_pattern) {
            (None, None) => {}
            (Some(p), Some(f)) if p == f => println!("  known failure: {p}"),
            (Some(p), None) => unexpected.push(format!("criterion {n} now passes; update the known failure \"{p}\"")),
            (_, Some(f)) => unexpected.push(format!("criterion {n}: {f}")),
        }
    }
    if !unexpected.is_empty() {
        for u in &unexpected {
            eprintln!("unexpected outcome: {u}");
        }
        std::process::exit(1);
    }
}
