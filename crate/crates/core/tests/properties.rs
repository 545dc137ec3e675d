//! Property tests for the invariants of every module. Instances are built
//! from proptest-drawn seeds and parameters.

use anagen_core::continuation::{multiplicative_check, real_shift_check, star_check, three_lines_check};
use anagen_core::graph::{
    dual_generator_check, graph_product, hinfty_basis, kaplansky_truncation, natural_involution, selfadjoint_part,
    GraphElement, MINUS_I,
};
use anagen_core::group::{
    BlockElement, Carrier, DiagonalGroup, EmbeddedCornerGroup, GroupOrigin, ImplementedGroup, OneParameterGroup,
    Sequence, SequenceModel, StarAlgebra,
};
use anagen_core::linalg::{eig_hermitian, matrix_power, CMatrix, PositiveMatrix};
use anagen_core::modular::{build_modular, markov_suite, random_markov_setup, verify_kms, FaithfulState};
use anagen_core::smearing::{
    approximation_check, closed_form_smear, contractivity_check, shifted_consistency_check, smear, SmearingOperator,
};
use anagen_core::{c64, sample, Tolerances, C64};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn implemented(d: usize, r: &mut ChaCha8Rng) -> ImplementedGroup {
    ImplementedGroup::new(sample::hermitian(d, 1.0, r)).unwrap()
}

fn diagonal(n: usize, r: &mut ChaCha8Rng) -> DiagonalGroup {
    DiagonalGroup::new((0..n).map(|_| r.gen_range(-4.0..4.0)).collect(), SequenceModel::Linf).unwrap()
}

fn corner(n: usize, r: &mut ChaCha8Rng) -> EmbeddedCornerGroup {
    EmbeddedCornerGroup::new(diagonal(n, r))
}

fn group_law<G: OneParameterGroup>(g: &G, x: &G::Element, s: f64, t: f64) -> f64 {
    let nested = g.apply(s, &g.apply(t, x).unwrap()).unwrap();
    nested.distance(&g.apply(s + t, x).unwrap())
}

fn isometry_defect<G: OneParameterGroup>(g: &G, x: &G::Element, t: f64) -> f64 {
    (g.apply(t, x).unwrap().norm() - x.norm()).abs()
}

fn complex_in(bound_re: f64, bound_im: f64) -> impl Strategy<Value = C64> {
    (-bound_re..=bound_re, -bound_im..=bound_im).prop_map(|(a, b)| c64(a, b))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn eig_reconstructs(seed in any::<u64>(), d in 1usize..12, scale in 0.01f64..100.0) {
        let a = sample::hermitian(d, scale, &mut rng(seed));
        let e = eig_hermitian(&a).unwrap();
        prop_assert!(e.reconstruct().dist(&a) <= 1e-10 * a.op_norm().max(f64::MIN_POSITIVE));
        prop_assert!(e.unitarity_defect() <= 1e-12);
    }

    #[test]
    fn matrix_power_group_law(seed in any::<u64>(), d in 1usize..7, w1 in complex_in(2.0, 2.0), w2 in complex_in(2.0, 2.0)) {
        let p = PositiveMatrix::new(&sample::density(d, 0.2, &mut rng(seed))).unwrap();
        let lhs = &matrix_power(&p, w1) * &matrix_power(&p, w2);
        let rhs = matrix_power(&p, w1 + w2);
        prop_assert!(lhs.dist(&rhs) <= 1e-9 * rhs.op_norm());
    }

    #[test]
    fn imaginary_powers_are_unitary(seed in any::<u64>(), d in 1usize..7, t in -10.0f64..10.0) {
        let p = PositiveMatrix::new(&sample::density(d, 0.1, &mut rng(seed))).unwrap();
        let u = matrix_power(&p, c64(0.0, t));
        prop_assert!((&u.adjoint() * &u).dist(&CMatrix::identity(d)) <= 1e-9);
    }

    #[test]
    fn group_law_and_isometry(seed in any::<u64>(), s in -10.0f64..10.0, t in -10.0f64..10.0) {
        let mut r = rng(seed);
        let g = diagonal(r.gen_range(1..10), &mut r);
        let x = sample::sequence(g.carrier_size(), &mut r);
        prop_assert!(group_law(&g, &x, s, t) <= 1e-10);
        prop_assert!(isometry_defect(&g, &x, t) <= 1e-10);

        let g = implemented(r.gen_range(1..6), &mut r);
        let x = sample::matrix(g.dim(), &mut r);
        prop_assert!(group_law(&g, &x, s, t) <= 1e-10 * x.op_norm().max(1.0));
        prop_assert!(isometry_defect(&g, &x, t) <= 1e-10);

        let g = corner(r.gen_range(1..6), &mut r);
        let x = sample::block_element(g.len(), &mut r);
        prop_assert!(group_law(&g, &x, s, t) <= 1e-10);
        prop_assert!(isometry_defect(&g, &x, t) <= 1e-10);
    }

    #[test]
    fn implemented_groups_are_star_automorphisms(seed in any::<u64>(), t in -10.0f64..10.0) {
        let mut r = rng(seed);
        let g = implemented(r.gen_range(1..6), &mut r);
        let (x, y) = (sample::matrix(g.dim(), &mut r), sample::matrix(g.dim(), &mut r));
        let lhs = g.apply(t, &(&x * &y)).unwrap();
        let rhs = &g.apply(t, &x).unwrap() * &g.apply(t, &y).unwrap();
        prop_assert!(lhs.dist(&rhs) <= 1e-9 * x.op_norm() * y.op_norm());
        prop_assert!(g.apply(t, &x.adjoint()).unwrap().dist(&g.apply(t, &x).unwrap().adjoint()) <= 1e-10 * x.op_norm());
    }

    #[test]
    fn continuation_identities(seed in any::<u64>(), z in complex_in(3.0, 2.0), t in -5.0f64..5.0) {
        let tol = Tolerances::default();
        let mut r = rng(seed);
        let g = implemented(r.gen_range(1..6), &mut r);
        let x = sample::matrix_with_norm(g.dim(), 1.0, &mut r);
        let y = sample::matrix_with_norm(g.dim(), 1.0, &mut r);
        let star = star_check(&g, z, &x, &tol).unwrap();
        prop_assert!(star.residual <= 1e-10, "{:?}", star);
        prop_assert!(multiplicative_check(&g, z, &x, &y, &tol).unwrap().passed);
        prop_assert!(real_shift_check(&g, t, z, &x, &tol).unwrap().passed);
        let gd = diagonal(5, &mut r);
        prop_assert!(real_shift_check(&gd, t, z, &sample::sequence(5, &mut r), &tol).unwrap().passed);
    }

    #[test]
    fn three_lines_on_lattices(seed in any::<u64>(), z in complex_in(2.0, 2.0)) {
        let tol = Tolerances::default();
        let mut r = rng(seed);
        let g = implemented(r.gen_range(1..5), &mut r);
        let x = sample::matrix(g.dim(), &mut r);
        prop_assert!(three_lines_check(&g, z, &x, 9).unwrap().report(&tol).passed);
        let g = corner(3, &mut r);
        let x = sample::block_element(3, &mut r);
        prop_assert!(three_lines_check(&g, z, &x, 9).unwrap().report(&tol).passed);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn smearing_matches_closed_form(lambda in -6.0f64..6.0, n in 0.25f64..4.0) {
        let g = DiagonalGroup::new(vec![lambda], SequenceModel::C0).unwrap();
        let y = smear(&SmearingOperator::new(n).unwrap(), &g, &Sequence::delta(1, 0)).unwrap();
        prop_assert!((y.0[0] - c64((-lambda * lambda / (4.0 * n * n)).exp(), 0.0)).norm() <= 1e-8);
    }

    #[test]
    fn smearing_contracts(seed in any::<u64>(), n in 0.25f64..4.0) {
        let mut r = rng(seed);
        let r_n = SmearingOperator::new(n).unwrap();
        let g = implemented(r.gen_range(1..5), &mut r);
        prop_assert!(contractivity_check(&r_n, &g, &sample::matrix(g.dim(), &mut r)).unwrap().passed);
        let g = corner(3, &mut r);
        prop_assert!(contractivity_check(&r_n, &g, &sample::block_element(3, &mut r)).unwrap().passed);
        let g = diagonal(6, &mut r);
        prop_assert!(contractivity_check(&r_n, &g, &sample::sequence(6, &mut r)).unwrap().passed);
    }

    #[test]
    fn shifted_smearing_is_consistent(seed in any::<u64>(), n in 0.25f64..2.0, re in -2.0f64..2.0, frac in -1.0f64..1.0) {
        let tol = Tolerances::default();
        let mut r = rng(seed);
        // n|Im z| <= 3 keeps the e^{n² Im(z)²} cancellation in range.
        let z = c64(re, frac * 2.0f64.min(3.0 / n));
        let g = implemented(r.gen_range(1..5), &mut r);
        let x = sample::matrix(g.dim(), &mut r);
        let rep = shifted_consistency_check(&SmearingOperator::new(n).unwrap(), &g, z, &x, &tol).unwrap();
        prop_assert!(rep.passed, "{:?}", rep);
    }

    #[test]
    fn smearing_approaches_identity(seed in any::<u64>()) {
        let mut r = rng(seed);
        let g = diagonal(6, &mut r);
        let x = sample::sequence(6, &mut r);
        let mut last = f64::INFINITY;
        for n in [1.0, 2.0, 4.0, 8.0, 16.0] {
            let rep = approximation_check(&SmearingOperator::new(n).unwrap(), &g, &x).unwrap();
            prop_assert!(rep.passed, "{:?}", rep);
            prop_assert!(rep.residual <= last + 1e-15);
            last = rep.residual;
        }
        let exact = closed_form_smear(16.0, &g, &x).unwrap();
        prop_assert!(exact.distance(&x) <= last + 1e-12);
    }

    #[test]
    fn graph_is_a_star_algebra(seed in any::<u64>()) {
        let mut r = rng(seed);
        let g = implemented(r.gen_range(1..5), &mut r);
        let a = GraphElement::from_first(&g, MINUS_I, sample::matrix(g.dim(), &mut r)).unwrap();
        let b = GraphElement::from_first(&g, MINUS_I, sample::matrix(g.dim(), &mut r)).unwrap();
        let ab = graph_product(&g, &a, &b).unwrap();
        let lhs = natural_involution(&g, &ab).unwrap();
        let rhs = graph_product(&g, &natural_involution(&g, &b).unwrap(), &natural_involution(&g, &a).unwrap()).unwrap();
        let scale = lhs.first().op_norm().max(lhs.second().op_norm()).max(1.0);
        prop_assert!(lhs.first().dist(rhs.first()).max(lhs.second().dist(rhs.second())) <= 1e-9 * scale);
        let twice = natural_involution(&g, &natural_involution(&g, &a).unwrap()).unwrap();
        prop_assert!(twice.first().dist(a.first()) <= 1e-12 && twice.second().dist(a.second()) <= 1e-12);

        let c = corner(3, &mut r);
        let u = GraphElement::from_first(&c, MINUS_I, sample::block_element(3, &mut r)).unwrap();
        let v = GraphElement::from_first(&c, MINUS_I, sample::block_element(3, &mut r)).unwrap();
        prop_assert!(graph_product(&c, &u, &v).is_ok());
    }

    #[test]
    fn fixed_points_are_selfadjoint_graph_elements(seed in any::<u64>()) {
        let mut r = rng(seed);
        let g = implemented(r.gen_range(1..5), &mut r);
        for x in selfadjoint_part(&g).unwrap() {
            let h = &x + &x.adjoint();
            let e = GraphElement::new(&g, MINUS_I, h.clone(), h.clone()).unwrap();
            let s = natural_involution(&g, &e).unwrap();
            prop_assert!(s.first().dist(&h) <= 1e-10 * h.op_norm().max(1.0));
        }
    }

    #[test]
    fn hinfty_is_closed_under_composition(seed in any::<u64>(), d in 2usize..7) {
        let mut r = rng(seed);
        let logs: Vec<f64> = (0..d).map(|_| r.gen_range(-2.0..2.0)).collect();
        let g = ImplementedGroup::from_positive(PositiveMatrix::from_log_diag(&logs), GroupOrigin::Generator);
        let h = hinfty_basis(&g).unwrap();
        for &(j, k) in &h.units {
            for &(k2, l) in &h.units {
                if k == k2 {
                    prop_assert!(h.contains(j, l));
                }
            }
        }
    }

    #[test]
    fn dual_graphs_agree(seed in any::<u64>(), z in complex_in(2.0, 2.0)) {
        let tol = Tolerances::default();
        let mut r = rng(seed);
        prop_assert!(dual_generator_check(&implemented(r.gen_range(1..5), &mut r), z, &tol).unwrap().passed);
        prop_assert!(dual_generator_check(&diagonal(r.gen_range(1..17), &mut r), z, &tol).unwrap().passed);
    }

    #[test]
    fn truncation_stays_in_ball(seed in any::<u64>(), n in 1usize..10) {
        let tol = Tolerances::default();
        let mut r = rng(seed);
        let c = corner(n, &mut r);
        let x: BlockElement = sample::block_element(n, &mut r);
        let scale = x.norm().max(c.continue_to(MINUS_I, &x).unwrap().norm());
        let x = x.scaled(c64(1.0 / scale, 0.0));
        let rep = kaplansky_truncation(&c, &x, &(0..=n).collect::<Vec<_>>(), &tol).unwrap();
        prop_assert!(rep.passed());
    }

    #[test]
    fn modular_invariants(seed in any::<u64>(), t in -5.0f64..5.0) {
        let tol = Tolerances::default();
        let mut r = rng(seed);
        let d = r.gen_range(1..7);
        let md = build_modular(FaithfulState::new(&sample::density(d, 0.05, &mut r)).unwrap()).unwrap();
        prop_assert!(md.s_squared_defect() <= 1e-9);
        prop_assert!(md.delta_spectrum_defect().unwrap() <= 1e-9);
        let x = sample::matrix(d, &mut r);
        prop_assert!(md.invariance_defect(t, &x).unwrap() <= 1e-10);
        let a = sample::matrix(d, &mut r);
        let b = md.sigma_minus_i(&a);
        prop_assert!(verify_kms(&md, &a, &b, &tol).unwrap().holds);
        let off = &b + &CMatrix::unit(d, 0, 0).scale(c64(0.1 * a.op_norm(), 0.0));
        prop_assert!(!verify_kms(&md, &a, &off, &tol).unwrap().holds);
    }

    #[test]
    fn markov_checks_pass(seed in any::<u64>()) {
        let tol = Tolerances::default();
        let ms = random_markov_setup(&mut rng(seed), &tol).unwrap();
        for rep in markov_suite(&ms, &tol) {
            prop_assert!(rep.passed, "{:?}", rep);
        }
    }
}

#[test]
fn diagonal_groups_are_not_multiplicative() {
    let g = DiagonalGroup::integer(4, SequenceModel::C0).unwrap();
    let x = Sequence::delta(4, 1);
    let lhs = g.apply(1.0, &x.product(&x)).unwrap();
    let rhs = g.apply(1.0, &x).unwrap().product(&g.apply(1.0, &x).unwrap());
    assert!(lhs.distance(&rhs) > 0.1);
    assert!(!g.is_automorphism());
}
