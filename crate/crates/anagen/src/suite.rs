//! The `verify` orchestration: every module's invariant checks, driven by a
//! [`SuiteConfig`].
//!
//! Each suite draws from its own ChaCha stream of the configured seed, so a
//! change to one suite never perturbs the inputs of another. A check that
//! raises an error is recorded as a failure with a NaN residual.

use anagen_core::continuation::{
    composition_check, counterexample_weak_continuity, geometric_weights, inverse_check, multiplicative_check,
    norm_gap_report, real_shift_check, star_check, three_lines_check,
};
use anagen_core::graph::{
    dual_generator_check, graph_intersection_check, graph_product, hinfty_basis, kaplansky_truncation,
    membership_residual, natural_involution, selfadjoint_structure_check, tensor_uniqueness_check, GraphElement,
};
use anagen_core::group::{
    in_domain_sequence, Carrier, DiagonalGroup, EmbeddedCornerGroup, GeometricSequence, GroupOrigin,
    ImplementedGroup, OneParameterGroup, SequenceModel,
};
use anagen_core::linalg::{eig_hermitian, matrix_power, PositiveMatrix};
use anagen_core::modular::{
    build_modular, build_markov, verify_bcm_closure, verify_bcm_commutation, verify_j_intertwine, verify_kms,
    FaithfulState,
};
use anagen_core::smearing::{
    approximation_check, closed_form_check, contractivity_check, core_theorem_check, graph_criterion,
    shifted_consistency_check, support_preservation, verify_commutation, SmearingOperator,
};
use anagen_core::{c64, sample, CMatrix, Report, Tolerances, C64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::config::SuiteConfig;
use crate::error::CliError;

/// Shifted quadrature is checked only for `n·|Im z|` up to this value; the
/// integrand cancels by a factor `e^{n²(Im z)²}`.
pub const SHIFT_LIMIT: f64 = 3.0;
/// Largest inner-group dimension used with quadrature.
const SMEAR_MATRIX_MAX: usize = 8;
/// Largest inner-group dimension for subspace computations on `M_d`.
const SUBSPACE_MAX: usize = 4;
/// Intertwiner spaces solve a `d⁴ x d⁴` nullspace problem.
const TENSOR_MAX: usize = 3;
const DUAL_DIAGONAL_MAX: usize = 16;
const HINFTY_MAX: usize = 8;
const TRUNCATION_MAX: usize = 16;
const MODULAR_MAX: usize = 8;
const MINUS_I: C64 = C64::new(0.0, -1.0);

/// One row of the machine-readable report.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Record {
    pub suite: &'static str,
    pub name: &'static str,
    pub anchor: &'static str,
    pub inputs: String,
    pub inputs_digest: String,
    pub residual: f64,
    pub tolerance: f64,
    pub passed: bool,
}

/// Everything `verify` produced.
#[derive(Debug, Clone, Default)]
pub struct Outcome {
    pub records: Vec<Record>,
    /// Sample points left out, with the reason.
    pub skipped: Vec<String>,
}

impl Outcome {
    pub fn failures(&self) -> impl Iterator<Item = &Record> {
        self.records.iter().filter(|r| !r.passed)
    }

    pub fn all_passed(&self) -> bool {
        self.records.iter().all(|r| r.passed)
    }
}

fn digest(seed: u64, suite: &str, name: &str, inputs: &str) -> String {
    let mut h = Sha256::new();
    h.update(seed.to_le_bytes());
    for part in [suite, name, inputs] {
        h.update((part.len() as u64).to_le_bytes());
        h.update(part.as_bytes());
    }
    h.finalize().iter().take(8).map(|b| format!("{b:02x}")).collect()
}

struct Collector<'a> {
    suite: &'static str,
    seed: u64,
    tol: Tolerances,
    out: &'a mut Outcome,
}

impl Collector<'_> {
    fn push(&mut self, r: Report, context: &str) {
        let inputs = match (context.is_empty(), r.inputs.is_empty()) {
            (true, _) => r.inputs,
            (false, true) => context.to_string(),
            (false, false) => format!("{context} {}", r.inputs),
        };
        self.out.records.push(Record {
            suite: self.suite,
            name: r.check,
            anchor: r.anchor,
            inputs_digest: digest(self.seed, self.suite, r.check, &inputs),
            inputs,
            residual: r.residual,
            tolerance: r.tolerance,
            passed: r.passed,
        });
    }

    /// Records a fallible check; an error becomes a failing row.
    fn check(
        &mut self,
        name: &'static str,
        anchor: &'static str,
        context: &str,
        run: impl FnOnce(&Tolerances) -> anagen_core::Result<Report>,
    ) {
        let tol = self.tol;
        let r = run(&tol).unwrap_or_else(|e| Report::residual(name, anchor, format!("error: {e}"), f64::NAN, 0.0));
        self.push(r, context);
    }

    fn skip(&mut self, what: String) {
        self.out.skipped.push(format!("{}: {what}", self.suite));
    }
}

fn stream(seed: u64, id: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(id);
    r
}

fn ok<T>(r: &anagen_core::Result<T>) -> anagen_core::Result<&T> {
    r.as_ref().map_err(Clone::clone)
}

fn relative(diff: f64, scale: f64) -> f64 {
    if scale > 0.0 { diff / scale } else { diff }
}

fn random_implemented(d: usize, rng: &mut ChaCha8Rng) -> anagen_core::Result<ImplementedGroup> {
    ImplementedGroup::new(sample::hermitian(d, 1.0, rng))
}

fn random_diagonal(len: usize, bound: f64, model: SequenceModel, rng: &mut ChaCha8Rng) -> anagen_core::Result<DiagonalGroup> {
    DiagonalGroup::new((0..len).map(|_| rng.gen_range(-bound..=bound)).collect(), model)
}

/// Integer exponents centered on `0`, at most `|λ| <= 6`.
fn centered_window(len: usize) -> anagen_core::Result<DiagonalGroup> {
    let len = len.min(13);
    let shift = ((len - 1) / 2) as f64;
    DiagonalGroup::new((0..len).map(|k| k as f64 - shift).collect(), SequenceModel::C0)
}

fn matrix_core(cfg: &SuiteConfig, c: &mut Collector) {
    for (i, &d) in cfg.dims.iter().enumerate() {
        let mut rng = stream(cfg.seed, 100 + i as u64);
        let h = sample::hermitian(d, 1.0, &mut rng);
        let ctx = format!("d={d}");
        c.check("eig_reconstruction", "spectral-calculus", &ctx, |tol| {
            let e = eig_hermitian(&h)?;
            let residual = relative(e.reconstruct().dist(&h), h.op_norm());
            Ok(Report::residual("eig_reconstruction", "spectral-calculus", String::new(), residual, tol.reconstruction)
                .and(&Report::residual("eig_unitarity", "spectral-calculus", String::new(), e.unitarity_defect(), tol.reconstruction)))
        });
        let (w1, w2) = (sample::complex(&mut rng), sample::complex(&mut rng));
        c.check("power_group_law", "functional-calculus", &ctx, |tol| {
            let p = PositiveMatrix::exp_of(&h)?;
            let lhs = &matrix_power(&p, w1) * &matrix_power(&p, w2);
            let rhs = matrix_power(&p, w1 + w2);
            let residual = relative(lhs.dist(&rhs), rhs.op_norm());
            Ok(Report::residual("power_group_law", "functional-calculus", format!("w1={w1:.3} w2={w2:.3}"), residual, tol.algebra))
        });
    }
}

fn law_and_isometry<G: OneParameterGroup>(g: &G, x: &G::Element, s: f64, t: f64, tol: &Tolerances) -> anagen_core::Result<Report> {
    let nested = g.apply(s, &g.apply(t, x)?)?;
    let direct = g.apply(s + t, x)?;
    let law = relative(nested.distance(&direct), direct.norm());
    let iso = relative((g.apply(t, x)?.norm() - x.norm()).abs(), x.norm());
    Ok(Report::residual("group_law", "one-parameter-group", format!("s={s} t={t}"), law, tol.group_law)
        .and(&Report::residual("isometry", "one-parameter-group", format!("t={t}"), iso, tol.group_law)))
}

fn group_models(cfg: &SuiteConfig, c: &mut Collector) {
    let (s, t) = (0.83, -2.1);
    for (i, &d) in cfg.dims.iter().enumerate() {
        let mut rng = stream(cfg.seed, 200 + i as u64);
        let x = sample::sequence(d, &mut rng);
        let diag = random_diagonal(d, 3.0, SequenceModel::C0, &mut rng);
        c.check("group_law", "one-parameter-group", &format!("diagonal d={d}"), |tol| law_and_isometry(&diag?, &x, s, t, tol));
        let m = sample::matrix(d, &mut rng);
        let inner = random_implemented(d, &mut rng);
        c.check("group_law", "one-parameter-group", &format!("implemented d={d}"), |tol| law_and_isometry(&inner?, &m, s, t, tol));
        let corner = random_diagonal(d, 3.0, SequenceModel::Linf, &mut rng).map(EmbeddedCornerGroup::new);
        let b = sample::block_element(d, &mut rng);
        c.check("group_law", "one-parameter-group", &format!("corner d={d}"), |tol| law_and_isometry(&corner?, &b, s, t, tol));
    }
}

fn continuation(cfg: &SuiteConfig, c: &mut Collector) {
    for (i, &d) in cfg.dims.iter().enumerate() {
        let mut rng = stream(cfg.seed, 300 + i as u64);
        let g = match random_implemented(d, &mut rng) {
            Ok(g) => g,
            Err(e) => {
                c.check("multiplicative", "domain-subalgebra", &format!("implemented d={d}"), |_| Err(e));
                continue;
            }
        };
        let diag = random_diagonal(d, 3.0, SequenceModel::C0, &mut rng);
        let corner = random_diagonal(d, 2.0, SequenceModel::Linf, &mut rng).map(EmbeddedCornerGroup::new);
        let (x, y) = (sample::matrix(d, &mut rng), sample::matrix(d, &mut rng));
        let seq = sample::sequence(d, &mut rng);
        let (b1, b2) = (sample::block_element(d, &mut rng), sample::block_element(d, &mut rng));
        for &z in &cfg.z_values {
            let ctx = format!("implemented d={d}");
            c.check("multiplicative", "domain-subalgebra", &ctx, |tol| multiplicative_check(&g, z, &x, &y, tol));
            c.check("star", "domain-star", &ctx, |tol| star_check(&g, z, &x, tol));
            c.check("real_shift", "orbit-extension", &ctx, |tol| real_shift_check(&g, 0.8, z, &x, tol));
            c.check("inverse", "generator-inverse", &ctx, |tol| inverse_check(&g, z, &x, tol));
            c.check("composition", "generator-composition", &ctx, |tol| composition_check(&g, z, z * 0.5, &x, tol));
            c.check("three_lines", "three-lines-bound", &ctx, |tol| Ok(three_lines_check(&g, z, &x, 21)?.report(tol)));
            let ctx = format!("diagonal d={d}");
            c.check("three_lines", "three-lines-bound", &ctx, |tol| Ok(three_lines_check(ok(&diag)?, z, &seq, 21)?.report(tol)));
            c.check("real_shift", "orbit-extension", &ctx, |tol| real_shift_check(ok(&diag)?, -1.4, z, &seq, tol));
            let ctx = format!("corner d={d}");
            let cg = ok(&corner);
            c.check("multiplicative", "domain-subalgebra", &ctx, |tol| multiplicative_check(cg.clone()?, z, &b1, &b2, tol));
            c.check("star", "domain-star", &ctx, |tol| star_check(cg?, z, &b1, tol));
        }
    }
    let ce = &cfg.counterexample;
    let f = ce.build().expect("schedule checked by validate");
    let to = ce.to.min(f.len());
    c.check("counterexample_gap", "weak-not-norm-regular", "", |tol| norm_gap_report(&f, ce.from, to, tol));
    c.check("counterexample_weak", "weak-not-norm-regular", &format!("N={}", f.len()), |tol| {
        let (a, tail) = geometric_weights(f.len());
        Ok(counterexample_weak_continuity(&f, &a, tail, ce.to.max(2))?.report(tol))
    });
}

fn smearing(cfg: &SuiteConfig, c: &mut Collector) {
    for (ni, &n) in cfg.n_values.iter().enumerate() {
        let r = match SmearingOperator::new(n) {
            Ok(r) => r,
            Err(e) => {
                c.check("smear_closed_form", "smearing-operator", &format!("n={n}"), |_| Err(e));
                continue;
            }
        };
        for (i, &d) in cfg.dims.iter().enumerate() {
            let mut rng = stream(cfg.seed, 400 + 64 * ni as u64 + i as u64);
            let window = centered_window(d.max(2));
            let seq = window.as_ref().map(|w| sample::sequence(w.carrier_size(), &mut rng)).map_err(Clone::clone);
            let dm = d.min(SMEAR_MATRIX_MAX);
            let inner = random_implemented(dm, &mut rng);
            let x = sample::matrix(dm, &mut rng);
            let corner = random_diagonal(d.min(SMEAR_MATRIX_MAX), 3.0, SequenceModel::C0, &mut rng).map(EmbeddedCornerGroup::new);
            let b = sample::block_element(d.min(SMEAR_MATRIX_MAX), &mut rng);
            let wctx = format!("window d={}", d.clamp(2, 13));
            let ictx = format!("implemented d={dm}");
            let cctx = format!("corner d={}", d.min(SMEAR_MATRIX_MAX));
            let w = ok(&window);
            let s = ok(&seq);
            c.check("smear_closed_form", "smearing-operator", &wctx, |tol| closed_form_check(&r, w.clone()?, s.clone()?, tol));
            c.check("smear_closed_form", "smearing-operator", &ictx, |tol| closed_form_check(&r, ok(&inner)?, &x, tol));
            c.check("smear_contractive", "smearing-operator", &ictx, |_| contractivity_check(&r, ok(&inner)?, &x));
            c.check("smear_approximation", "smearing-approximate-identity", &wctx, |_| approximation_check(&r, w.clone()?, s.clone()?));
            c.check("smear_support", "smearing-invariant-subspace", &wctx, |tol| {
                let w = w.clone()?;
                let mut sparse = s.clone()?.clone();
                for (k, v) in sparse.0.iter_mut().enumerate() {
                    if k % 2 == 1 {
                        *v = C64::new(0.0, 0.0);
                    }
                }
                Ok(support_preservation(&r, w, &sparse, tol)?.report())
            });
            c.check("smear_commutation", "smearing-commutes", &ictx, |tol| verify_commutation(&r, ok(&inner)?, 0.6, None, &x, tol));
            for &z in &cfg.z_values {
                if n * z.im.abs() > SHIFT_LIMIT {
                    c.skip(format!("n={n} z={z}: n|Im z| > {SHIFT_LIMIT}"));
                    continue;
                }
                c.check("smear_shifted", "contour-shift", &wctx, |tol| shifted_consistency_check(&r, w.clone()?, z, s.clone()?, tol));
                c.check("smear_shifted", "contour-shift", &ictx, |tol| shifted_consistency_check(&r, ok(&inner)?, z, &x, tol));
                c.check("smear_shifted", "contour-shift", &cctx, |tol| shifted_consistency_check(&r, ok(&corner)?, z, &b, tol));
                c.check("smear_commutation", "smearing-commutes", &ictx, |tol| verify_commutation(&r, ok(&inner)?, -1.1, Some(z), &x, tol));
                c.check("graph_criterion", "graph-criterion", &ictx, |tol| {
                    let g = ok(&inner)?;
                    let y = g.continue_to(z, &x)?;
                    let member = graph_criterion(&r, g, z, &x, &y, tol)?;
                    let off = y.minus(&CMatrix::identity(dm).scale(c64(0.5, 0.0)));
                    let outsider = graph_criterion(&r, g, z, &x, &off, tol)?;
                    let mut rep = Report::residual("graph_criterion", "graph-criterion", format!("z={z}"), member.residual, tol.criterion);
                    rep.passed &= member.consistent && !outsider.holds && outsider.consistent;
                    Ok(rep)
                });
            }
        }
    }
    for (i, &d) in cfg.dims.iter().enumerate() {
        let dm = d.min(SMEAR_MATRIX_MAX);
        let mut rng = stream(cfg.seed, 490 + i as u64);
        let g = random_implemented(dm, &mut rng);
        for &z in &cfg.z_values {
            c.check("core", "smeared-core", &format!("implemented d={dm}"), |tol| {
                let g = ok(&g)?;
                let r = SmearingOperator::new(1.0)?;
                let core = g.basis().iter().map(|e| anagen_core::smearing::smear(&r, g, e)).collect::<anagen_core::Result<Vec<_>>>()?;
                core_theorem_check(g, z, &core, tol)
            });
        }
    }
}

fn graph(cfg: &SuiteConfig, c: &mut Collector) {
    for (i, &d) in cfg.dims.iter().enumerate() {
        let mut rng = stream(cfg.seed, 500 + i as u64);
        let ds = d.min(SUBSPACE_MAX);
        let ctx = format!("implemented d={ds}");
        let g = random_implemented(ds, &mut rng);
        let (x, y) = (sample::matrix(ds, &mut rng), sample::matrix(ds, &mut rng));
        let gr = ok(&g);
        for &z in &cfg.z_values {
            c.check("graph_product", "graph-algebra", &ctx, |tol| {
                let g = gr.clone()?;
                let p = graph_product(g, &GraphElement::from_first(g, z, x.clone())?, &GraphElement::from_first(g, z, y.clone())?)?;
                Ok(Report::residual("graph_product", "graph-algebra", format!("z={z}"), membership_residual(g, z, p.first(), p.second())?, tol.algebra))
            });
        }
        c.check("natural_involution", "graph-involution", &ctx, |tol| {
            let g = gr.clone()?;
            let inv = natural_involution(g, &GraphElement::from_first(g, MINUS_I, x.clone())?)?;
            Ok(Report::residual("natural_involution", "graph-involution", "z=-i".into(), membership_residual(g, MINUS_I, inv.first(), inv.second())?, tol.algebra))
        });
        c.check("selfadjoint_structure", "graph-selfadjoint-part", &ctx, |tol| selfadjoint_structure_check(gr.clone()?, tol));

        let dh = d.clamp(2, HINFTY_MAX);
        let mut logs = Vec::with_capacity(dh);
        let mut acc: f64 = rng.gen_range(-1.0..1.0);
        for _ in 0..dh {
            logs.push(acc);
            acc += rng.gen_range(0.05..0.8);
        }
        c.check("hinfty_basis", "hinfty-lower-triangular", &format!("d={dh}"), |_| {
            let h = hinfty_basis(&ImplementedGroup::from_positive(PositiveMatrix::from_log_diag(&logs), GroupOrigin::Generator))?;
            let mut expected: Vec<(usize, usize)> = (0..dh).flat_map(|j| (0..=j).map(move |k| (j, k))).collect();
            let mut got = h.units.clone();
            expected.sort_unstable();
            got.sort_unstable();
            Ok(Report::boolean("hinfty_basis", "hinfty-lower-triangular", format!("dim={}", h.dim), got == expected))
        });

        let nt = d.clamp(2, TRUNCATION_MAX);
        let corner = EmbeddedCornerGroup::new(DiagonalGroup::integer(nt, SequenceModel::Linf).expect("integer model"));
        let raw = sample::block_element(nt, &mut rng);
        c.check("kaplansky_truncation", "graph-unit-ball-density", &format!("n={nt}"), |tol| {
            let scale = raw.norm().max(corner.continue_to(MINUS_I, &raw)?.norm());
            let x = raw.scaled(c64(1.0 / scale, 0.0));
            let cutoffs: Vec<usize> = (0..=nt).collect();
            Ok(kaplansky_truncation(&corner, &x, &cutoffs, tol)?.report())
        });

        let dd = d.clamp(2, DUAL_DIAGONAL_MAX);
        let dual_diag = random_diagonal(dd, 3.0, SequenceModel::C0, &mut rng);
        let dual_corner = random_diagonal(ds, 1.5, SequenceModel::C0, &mut rng).map(EmbeddedCornerGroup::new);
        for &z in &cfg.z_values {
            c.check("dual_generator", "dual-generator", &format!("diagonal d={dd}"), |tol| dual_generator_check(ok(&dual_diag)?, z, tol));
            c.check("dual_generator", "dual-generator", &ctx, |tol| dual_generator_check(gr.clone()?, z, tol));
            c.check("dual_generator", "dual-generator", &format!("corner d={ds}"), |tol| dual_generator_check(ok(&dual_corner)?, z, tol));
        }

        let mut trng = stream(cfg.seed, 550 + i as u64);
        let dt = d.min(TENSOR_MAX);
        let ga = random_implemented(dt, &mut trng);
        let gb = random_implemented(dt, &mut trng);
        let times = [0.3, 1.7, -2.5];
        c.check("tensor_uniqueness", "intertwiner-uniqueness", "same group", |tol| tensor_uniqueness_check(ok(&ga)?, ok(&ga)?, 8, &times, &mut trng, tol));
        c.check("tensor_uniqueness", "intertwiner-uniqueness", "two groups", |tol| tensor_uniqueness_check(ok(&ga)?, ok(&gb)?, 8, &times, &mut trng, tol));
    }
    c.check("domain_gap", "domain-gap", "", |_| {
        let seq = GeometricSequence::from_log_ratio(c64(1.0, 0.0), -1.0, 0)?;
        let g = DiagonalGroup::integer(16, SequenceModel::Linf)?;
        let m = in_domain_sequence(&seq, &g, MINUS_I)?;
        let (flags, rep) = graph_intersection_check(&EmbeddedCornerGroup::new(g), &seq, MINUS_I)?;
        let rep = rep.and(&Report::boolean("domain_gap", "domain-gap", String::new(), m.linf && !m.c0 && flags.strict_gap()));
        Ok(Report { check: "domain_gap", anchor: "domain-gap", inputs: "x=(e^-k) z=-i".into(), ..rep })
    });
}

fn state_for(spec: &crate::config::StateSpec) -> anagen_core::Result<FaithfulState> {
    let u = spec.unitary_seed.map(|s| sample::unitary(spec.eigenvalues.len(), &mut ChaCha8Rng::seed_from_u64(s)));
    FaithfulState::from_spectrum(&spec.eigenvalues, u.as_ref())
}

fn kms_checks(c: &mut Collector, ctx: &str, state: anagen_core::Result<FaithfulState>, rng: &mut ChaCha8Rng) {
    let md = state.and_then(build_modular);
    let d = md.as_ref().map_or(2, |m| m.dim());
    let a = sample::matrix(d, rng);
    let mdr = ok(&md);
    c.check("modular_structure", "modular-data", ctx, |tol| mdr.clone()?.report(tol));
    c.check("kms_positive", "kms-characterization", ctx, |tol| {
        let md = mdr.clone()?;
        let out = verify_kms(md, &a, &md.sigma_minus_i(&a), tol)?;
        let bound = tol.kms * a.op_norm() * md.state().rho().op_norm();
        let mut r = Report::residual("kms_positive", "kms-characterization", format!("d={d}"), out.residual, bound);
        r.passed &= out.holds && out.consistent;
        Ok(r)
    });
    c.check("kms_negative", "kms-characterization", ctx, |tol| {
        let md = mdr.clone()?;
        let b = &md.sigma_minus_i(&a) + &CMatrix::unit(d, 0, 0).scale(c64(0.1 * a.op_norm(), 0.0));
        let out = verify_kms(md, &a, &b, tol)?;
        Ok(Report::boolean("kms_negative", "kms-characterization", format!("d={d}"), !out.holds && out.consistent))
    });
}

fn modular(cfg: &SuiteConfig, c: &mut Collector) {
    let mut rng = stream(cfg.seed, 600);
    for spec in &cfg.states {
        let ctx = format!("state={:?}@{:?}", spec.eigenvalues, spec.unitary_seed);
        kms_checks(c, &ctx, state_for(spec), &mut rng);
    }
    for (i, &d) in cfg.dims.iter().enumerate() {
        let dm = d.clamp(2, MODULAR_MAX);
        let mut r = stream(cfg.seed, 610 + i as u64);
        let rho = sample::density(dm, 0.05, &mut r);
        kms_checks(c, &format!("random d={dm}"), FaithfulState::new(&rho), &mut r);
    }

    let tol = c.tol;
    let seed = cfg.seed;
    let z_values = cfg.z_values.clone();
    let per_setup: Vec<Vec<Report>> = (0..cfg.markov_setups)
        .into_par_iter()
        .map(|k| {
            let mut r = stream(seed, 1000 + k as u64);
            let d = r.gen_range(2..=4);
            let blocks = sample::blocks(d, &mut r);
            let rho = sample::block_density(&blocks, 0.05, &mut r);
            let ctx = format!("setup={k}");
            let setup = FaithfulState::new(&rho).and_then(|s| build_markov(s, &blocks, &tol));
            let ms = match setup {
                Ok(ms) => ms,
                Err(e) => return vec![Report::residual("markov_setup", "markov-commutation", format!("{ctx} error: {e}"), f64::NAN, 0.0)],
            };
            let mut out: Vec<Report> = [0.7, -0.7, 2.3, -2.3].iter().map(|&t| verify_bcm_commutation(&ms, t, &tol)).collect();
            let mut zs = vec![c64(0.0, -0.5), c64(0.0, -1.0), c64(1.0, 1.0)];
            for &z in &z_values {
                if !zs.contains(&z) {
                    zs.push(z);
                }
            }
            out.extend(zs.into_iter().map(|z| verify_bcm_closure(&ms, z, &tol)));
            out.push(verify_j_intertwine(&ms, &tol));
            out.into_iter().map(|mut r| {
                r.inputs = format!("{ctx} {}", r.inputs);
                r
            }).collect()
        })
        .collect();
    for r in per_setup.into_iter().flatten() {
        c.push(r, "");
    }
}

type SuiteFn = fn(&SuiteConfig, &mut Collector);

/// Suite names in run order.
pub const SUITES: [&str; 6] = ["matrix_core", "group_models", "continuation", "smearing", "graph", "modular"];

/// Runs every suite. Fails only on an invalid config; check failures are
/// recorded in the outcome.
pub fn run(cfg: &SuiteConfig) -> Result<Outcome, CliError> {
    cfg.validate()?;
    let tol = cfg.tolerances();
    let suites: [SuiteFn; 6] = [matrix_core, group_models, continuation, smearing, graph, modular];
    let mut out = Outcome::default();
    for (name, suite) in SUITES.iter().zip(suites) {
        let mut c = Collector { suite: name, seed: cfg.seed, tol, out: &mut out };
        suite(cfg, &mut c);
    }
    Ok(out)
}

