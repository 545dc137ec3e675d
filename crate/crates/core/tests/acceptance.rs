//! Acceptance suite: one line per criterion, `PASS` or `FAIL`.
//!
//! Runs without the libtest harness so the lines always reach stdout.
//! Criteria listed in `KNOWN_FAILURES` are reported as `FAIL` and must keep
//! failing; any other failure makes the target exit nonzero.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use anagen_core::continuation::{
    counterexample_weak_continuity, geometric_weights, multiplicative_check, norm_gap_report, star_check,
    three_lines_check, DiscCounterexample,
};
use anagen_core::graph::{dual_generator_check, graph_intersection_check, hinfty_basis, kaplansky_truncation, tensor_uniqueness_check};
use anagen_core::group::{
    in_domain_sequence, Carrier, DiagonalGroup, EmbeddedCornerGroup, GeometricSequence, GroupOrigin, ImplementedGroup,
    OneParameterGroup, SequenceModel,
};
use anagen_core::linalg::{CMatrix, PositiveMatrix};
use anagen_core::modular::{
    build_modular, random_markov_setup, verify_bcm_closure, verify_bcm_commutation, verify_j_intertwine, verify_kms,
    FaithfulState,
};
use anagen_core::smearing::{shifted_consistency_check, smear, SmearingOperator};
use anagen_core::{c64, sample, Tolerances, C64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// The weak pairing in criterion 7 decays like `1/n`, not below `1e-6`.
const KNOWN_FAILURES: &[usize] = &[7];

const SMEARING_NS: [f64; 5] = [0.25, 0.5, 1.0, 2.0, 4.0];

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: String) -> Outcome {
    Outcome { passed, detail }
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn within(elapsed: Duration, budget_s: f64) -> bool {
    elapsed.as_secs_f64() <= budget_s
}

fn random_implemented(d: usize, scale: f64, rng: &mut ChaCha8Rng) -> ImplementedGroup {
    ImplementedGroup::new(sample::hermitian(d, scale, rng)).expect("Hermitian generator")
}

fn random_diagonal(n: usize, bound: f64, rng: &mut ChaCha8Rng) -> DiagonalGroup {
    let model = if rng.gen_bool(0.5) { SequenceModel::C0 } else { SequenceModel::Linf };
    DiagonalGroup::new((0..n).map(|_| rng.gen_range(-bound..=bound)).collect(), model).unwrap()
}

fn c1_smearing_oracle() -> Outcome {
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    let mut cases = 0;
    let mut r = rng(101);
    let mut carriers: Vec<Vec<f64>> = vec![(0..=24).map(|k| -6.0 + 0.5 * k as f64).collect()];
    for _ in 0..8 {
        carriers.push((0..10).map(|_| r.gen_range(-6.0..=6.0)).collect());
    }
    for lambdas in &carriers {
        let g = DiagonalGroup::new(lambdas.clone(), SequenceModel::C0).unwrap();
        let x = sample::sequence(lambdas.len(), &mut r);
        for n in SMEARING_NS {
            let y = smear(&SmearingOperator::new(n).unwrap(), &g, &x).unwrap();
            for (k, l) in lambdas.iter().enumerate() {
                let exact = x.0[k] * (-l * l / (4.0 * n * n)).exp();
                worst = worst.max((y.0[k] - exact).norm());
            }
            cases += 1;
        }
    }
    let elapsed = start.elapsed();
    outcome(
        worst <= 1e-8 && within(elapsed, 5.0),
        format!("{cases} carrier/n cases, max abs error {worst:.2e} (<= 1e-8), {:.2}s (<= 5s)", elapsed.as_secs_f64()),
    )
}

/// `|Im z| <= min(2, 3/n)`: the shifted integrand is amplified by
/// `e^{n² Im(z)²}` and cancellation costs that many ulps.
fn shift_point(n: f64, rng: &mut ChaCha8Rng) -> C64 {
    sample::strip_point(2.0, 2.0f64.min(3.0 / n), rng)
}

/// Integer exponents `k - s` over a window containing `0`. Without a
/// frequency near `0`, `R_n` damps every component and `α_z` then
/// amplifies the absolute quadrature error of `R_n x` relative to the result.
fn integer_window(rng: &mut ChaCha8Rng) -> DiagonalGroup {
    let len = rng.gen_range(2..=8);
    let shift = rng.gen_range(0..len) as f64;
    let model = if rng.gen_bool(0.5) { SequenceModel::C0 } else { SequenceModel::Linf };
    DiagonalGroup::new((0..len).map(|k| k as f64 - shift).collect(), model).unwrap()
}

fn c2_contour_shift() -> Outcome {
    let start = Instant::now();
    let tol = Tolerances::default();
    let mut r = rng(202);
    let mut worst: f64 = 0.0;
    let mut cases = 0;
    let mut failed = 0;
    let mut record = |rep: anagen_core::Report| {
        worst = worst.max(rep.residual);
        cases += 1;
        failed += usize::from(!rep.passed);
    };
    for i in 0..80 {
        let n = SMEARING_NS[i % 5];
        let g = integer_window(&mut r);
        let x = sample::sequence(g.carrier_size(), &mut r);
        let z = shift_point(n, &mut r);
        record(shifted_consistency_check(&SmearingOperator::new(n).unwrap(), &g, z, &x, &tol).unwrap());
    }
    for i in 0..80 {
        let n = SMEARING_NS[i % 5];
        let g = random_implemented(r.gen_range(2..=6), 1.0, &mut r);
        let x = sample::matrix(g.dim(), &mut r);
        let z = shift_point(n, &mut r);
        record(shifted_consistency_check(&SmearingOperator::new(n).unwrap(), &g, z, &x, &tol).unwrap());
    }
    for i in 0..80 {
        let n = SMEARING_NS[i % 5];
        let g = EmbeddedCornerGroup::new(random_diagonal(r.gen_range(2..=6), 3.0, &mut r));
        let x = sample::block_element(g.len(), &mut r);
        let z = shift_point(n, &mut r);
        record(shifted_consistency_check(&SmearingOperator::new(n).unwrap(), &g, z, &x, &tol).unwrap());
    }
    let elapsed = start.elapsed();
    outcome(
        failed == 0 && cases >= 200 && within(elapsed, 30.0),
        format!(
            "{cases} cases over diagonal/implemented/corner, max rel error {worst:.2e} (<= 1e-8), {:.2}s (<= 30s)",
            elapsed.as_secs_f64()
        ),
    )
}

fn c3_algebra_closure() -> Outcome {
    let tol = Tolerances::default();
    let mut r = rng(303);
    let mut worst: f64 = 0.0;
    let mut failed = 0;
    for _ in 0..100 {
        let g = random_implemented(r.gen_range(2..=6), 1.0, &mut r);
        let x = sample::matrix(g.dim(), &mut r);
        let y = sample::matrix(g.dim(), &mut r);
        let z = sample::strip_point(2.0, 2.0, &mut r);
        for rep in [multiplicative_check(&g, z, &x, &y, &tol).unwrap(), star_check(&g, z, &x, &tol).unwrap()] {
            worst = worst.max(rep.residual);
            failed += usize::from(!rep.passed);
        }
    }
    outcome(failed == 0, format!("100 implemented groups, max rel residual {worst:.2e} (<= 1e-9)"))
}

fn c4_three_lines() -> Outcome {
    let tol = Tolerances::default();
    let mut r = rng(404);
    let mut worst = f64::NEG_INFINITY;
    let mut failed = 0;
    for i in 0..50 {
        let z = sample::strip_point(2.0, 2.0, &mut r);
        let report = match i % 3 {
            0 => {
                let g = random_diagonal(r.gen_range(2..=8), 3.0, &mut r);
                let x = sample::sequence(g.carrier_size(), &mut r);
                three_lines_check(&g, z, &x, 21).unwrap()
            }
            1 => {
                let g = random_implemented(r.gen_range(2..=6), 1.0, &mut r);
                let x = sample::matrix(g.dim(), &mut r);
                three_lines_check(&g, z, &x, 21).unwrap()
            }
            _ => {
                let g = EmbeddedCornerGroup::new(random_diagonal(r.gen_range(2..=6), 2.0, &mut r));
                let x = sample::block_element(g.len(), &mut r);
                three_lines_check(&g, z, &x, 21).unwrap()
            }
        };
        worst = worst.max(report.excess());
        failed += usize::from(!report.report(&tol).passed);
    }
    outcome(failed == 0, format!("50 triples on 21x21 lattices, max excess over bound {worst:.2e} (<= 1e-9)"))
}

fn c5_kms() -> Outcome {
    let tol = Tolerances::default();
    let mut r = rng(505);
    let mut failed = 0;
    let mut worst_pos: f64 = 0.0;
    let mut weakest_neg = f64::INFINITY;
    for _ in 0..50 {
        let d = r.gen_range(2..=6);
        let md = build_modular(FaithfulState::new(&sample::density(d, 0.05, &mut r)).unwrap()).unwrap();
        let a = sample::matrix(d, &mut r);
        let b = md.sigma_minus_i(&a);
        let pos = verify_kms(&md, &a, &b, &tol).unwrap();
        let shifted = &b + &CMatrix::unit(d, 0, 0).scale(c64(0.1 * a.op_norm(), 0.0));
        let neg = verify_kms(&md, &a, &shifted, &tol).unwrap();
        worst_pos = worst_pos.max(pos.residual);
        weakest_neg = weakest_neg.min(neg.residual);
        failed += usize::from(!(pos.holds && pos.consistent && !neg.holds && neg.consistent));
    }
    outcome(
        failed == 0,
        format!("50 states, positive residual <= {worst_pos:.2e}, negative residual >= {weakest_neg:.2e}"),
    )
}

fn c6_markov() -> Outcome {
    let tol = Tolerances::default();
    let mut r = rng(606);
    let mut worst: f64 = 0.0;
    let mut failed = 0;
    for _ in 0..20 {
        let ms = random_markov_setup(&mut r, &tol).unwrap();
        let mut reports: Vec<_> = [0.7, -0.7, 2.3, -2.3].iter().map(|&t| verify_bcm_commutation(&ms, t, &tol)).collect();
        for z in [c64(0.0, -0.5), c64(0.0, -1.0), c64(1.0, 1.0)] {
            reports.push(verify_bcm_closure(&ms, z, &tol));
        }
        reports.push(verify_j_intertwine(&ms, &tol));
        for rep in reports {
            worst = worst.max(rep.residual);
            failed += usize::from(!(rep.passed && rep.residual <= 1e-8));
        }
    }
    outcome(failed == 0, format!("20 block setups, max residual {worst:.2e} (<= 1e-8)"))
}

fn c7_counterexample() -> Outcome {
    let start = Instant::now();
    let tol = Tolerances::default();
    let f = DiscCounterexample::cubic();
    let gap = norm_gap_report(&f, 10, 40, &tol).unwrap();
    let (a, tail) = geometric_weights(f.len());
    let weak = counterexample_weak_continuity(&f, &a, tail, 40).unwrap();
    let weak_report = weak.report(&tol);
    let elapsed = start.elapsed();
    outcome(
        gap.passed && weak_report.passed && within(elapsed, 2.0),
        format!(
            "min norm gap {:.6} (>= 0.99), weak pairing at n=40 {:.3e} (<= 1e-6), {:.3}s (<= 2s)",
            gap.residual,
            weak.last(),
            elapsed.as_secs_f64()
        ),
    )
}

fn c8_domain_gap() -> Outcome {
    let seq = GeometricSequence::from_log_ratio(c64(1.0, 0.0), -1.0, 0).unwrap();
    let g = DiagonalGroup::integer(16, SequenceModel::Linf).unwrap();
    let m = in_domain_sequence(&seq, &g, c64(0.0, -1.0)).unwrap();
    let corner = EmbeddedCornerGroup::new(g);
    let (flags, rep) = graph_intersection_check(&corner, &seq, c64(0.0, -1.0)).unwrap();
    outcome(
        m.linf && !m.c0 && rep.passed && flags.strict_gap(),
        format!("(e^-n): linf-domain={} c0-domain={} strict gap={}", m.linf, m.c0, flags.strict_gap()),
    )
}

fn c9_kaplansky() -> Outcome {
    let tol = Tolerances::default();
    let mut r = rng(909);
    let mut failed = 0;
    let mut worst: f64 = 0.0;
    let minus_i = c64(0.0, -1.0);
    for i in 0..20 {
        let n = r.gen_range(4..=12);
        let inner = if i % 2 == 0 {
            DiagonalGroup::integer(n, SequenceModel::Linf).unwrap()
        } else {
            random_diagonal(n, 3.0, &mut r)
        };
        let corner = EmbeddedCornerGroup::new(inner);
        let x = sample::block_element(n, &mut r);
        let scale = x.norm().max(corner.continue_to(minus_i, &x).unwrap().norm());
        let x = x.scaled(c64(1.0 / scale, 0.0));
        let cutoffs: Vec<usize> = (0..=n).collect();
        let rep = kaplansky_truncation(&corner, &x, &cutoffs, &tol).unwrap();
        worst = worst.max(rep.steps.iter().map(|s| s.norm.max(s.continued_norm)).fold(0.0, f64::max));
        let last_gap = rep.steps.last().map_or(1.0, |s| s.entry_gap);
        failed += usize::from(!(rep.passed() && last_gap == 0.0));
    }
    outcome(failed == 0, format!("20 corner elements, max graph-ball norm {worst:.15} (<= 1 + 1e-12)"))
}

fn c10_dual() -> Outcome {
    let tol = Tolerances::default();
    let mut r = rng(1010);
    let mut worst: f64 = 0.0;
    let mut failed = 0;
    let mut max_dim = 0;
    for i in 0..20 {
        let z = sample::strip_point(2.0, 2.0, &mut r);
        let (rep, dim) = match i % 3 {
            0 => {
                let g = random_diagonal(r.gen_range(2..=16), 3.0, &mut r);
                (dual_generator_check(&g, z, &tol).unwrap(), g.carrier_size())
            }
            1 => {
                let g = random_implemented(r.gen_range(2..=4), 0.5, &mut r);
                (dual_generator_check(&g, z, &tol).unwrap(), g.dim() * g.dim())
            }
            _ => {
                let g = EmbeddedCornerGroup::new(random_diagonal(r.gen_range(1..=4), 1.5, &mut r));
                (dual_generator_check(&g, z, &tol).unwrap(), 4 * g.len())
            }
        };
        max_dim = max_dim.max(dim);
        worst = worst.max(rep.residual);
        failed += usize::from(!rep.passed);
    }
    outcome(failed == 0, format!("20 carriers (dim <= {max_dim}), max residual {worst:.2e} (<= 1e-9)"))
}

fn c11_hinfty() -> Outcome {
    let mut r = rng(1111);
    let mut failed = 0;
    for _ in 0..20 {
        let d = r.gen_range(2..=8);
        let mut logs = Vec::with_capacity(d);
        let mut acc = r.gen_range(-1.0..1.0);
        for _ in 0..d {
            logs.push(acc);
            acc += r.gen_range(0.05..0.8);
        }
        let g = ImplementedGroup::from_positive(PositiveMatrix::from_log_diag(&logs), GroupOrigin::Generator);
        match hinfty_basis(&g) {
            Ok(h) => {
                let mut expected: Vec<(usize, usize)> = (0..d).flat_map(|j| (0..=j).map(move |k| (j, k))).collect();
                let mut got = h.units.clone();
                expected.sort_unstable();
                got.sort_unstable();
                failed += usize::from(got != expected);
            }
            Err(_) => failed += 1,
        }
    }
    outcome(failed == 0, "20 strictly increasing diagonal P (d <= 8), basis = {e_jk : k <= j}, limsup test agrees".into())
}

fn c12_tensor() -> Outcome {
    let tol = Tolerances::default();
    let mut r = rng(1212);
    let mut worst: f64 = 0.0;
    let mut failed = 0;
    for i in 0..10 {
        let ga = random_implemented(r.gen_range(2..=4), 1.0, &mut r);
        let gb = if i % 2 == 0 { ga.clone() } else { random_implemented(r.gen_range(2..=4), 1.0, &mut r) };
        let rep = tensor_uniqueness_check(&ga, &gb, 16, &[0.3, 1.7, -2.5], &mut r, &tol).unwrap();
        worst = worst.max(rep.residual);
        failed += usize::from(!rep.passed);
    }
    outcome(failed == 0, format!("10 group pairs x 16 intertwiners, max residual {worst:.2e} (<= 1e-9)"))
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 12] = [
        ("smearing oracle agreement", c1_smearing_oracle),
        ("contour-shift consistency", c2_contour_shift),
        ("algebra closure", c3_algebra_closure),
        ("three-lines bound", c4_three_lines),
        ("KMS characterization", c5_kms),
        ("Markov intertwiners", c6_markov),
        ("counterexample reproduction", c7_counterexample),
        ("domain-gap reproduction", c8_domain_gap),
        ("Kaplansky truncation", c9_kaplansky),
        ("dual-generator equality", c10_dual),
        ("H-infinity lower-triangular basis", c11_hinfty),
        ("generator determines group", c12_tensor),
    ];
    let mut unexpected = Vec::new();
    for (i, (name, run)) in criteria.iter().enumerate() {
        let number = i + 1;
        let o = run();
        let status = if o.passed { "PASS" } else { "FAIL" };
        let known = KNOWN_FAILURES.contains(&number);
        let suffix = if known && !o.passed { " [known failure, see README]" } else { "" };
        println!("{status} criterion {number:>2} {name}: {}{suffix}", o.detail);
        if o.passed == known {
            unexpected.push(number);
        }
    }
    if unexpected.is_empty() {
        println!("acceptance: all criteria match expectations");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: unexpected outcome for criteria {unexpected:?}");
        ExitCode::FAILURE
    }
}
