//! The `continue`, `counterexample` and `demo` verbs.

use anagen_core::continuation::{alpha_z_spectral, geometric_weights, three_lines_check, DiscCounterexample};
use anagen_core::group::{
    in_domain_sequence, Carrier, DiagonalGroup, EmbeddedCornerGroup, GeometricSequence, OneParameterGroup,
    SequenceModel,
};
use anagen_core::modular::{build_modular, random_markov_setup, verify_kms, FaithfulState};
use anagen_core::smearing::{smear_shifted, SmearingOperator};
use anagen_core::{c64, CMatrix, Tolerances, C64};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::config::CounterexampleConfig;
use crate::error::CliError;
use crate::spec::{ElementSpec, GroupSpec};
use crate::suite::SHIFT_LIMIT;

/// One coordinate of `α_z(x)` by both routes.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ContinueRow {
    pub index: usize,
    pub spectral_re: f64,
    pub spectral_im: f64,
    pub quadrature_re: f64,
    pub quadrature_im: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ContinueResult {
    pub rows: Vec<ContinueRow>,
    /// `‖spectral - quadrature‖` in the model norm.
    pub discrepancy: f64,
    /// The same, relative to `max(1, ‖spectral‖)`.
    pub relative: f64,
    pub n: f64,
}

impl ContinueResult {
    pub fn spectral(&self) -> Vec<C64> {
        self.rows.iter().map(|r| c64(r.spectral_re, r.spectral_im)).collect()
    }
}

/// Smearing parameter balancing the two error sources of the quadrature
/// route: the deconvolution factor `e^{ω²/(4n²)}` and the cancellation
/// factor `e^{n² (Im z)²}`.
pub fn default_n(bandwidth: f64, z: C64) -> f64 {
    let y = z.im.abs();
    if y == 0.0 {
        return (bandwidth / 2.0).max(1.0);
    }
    (bandwidth / (2.0 * y)).sqrt().clamp(0.25, SHIFT_LIMIT / y)
}

fn both_routes<G: OneParameterGroup>(g: &G, z: C64, x: &G::Element, n: Option<f64>) -> Result<ContinueResult, CliError> {
    let n = n.unwrap_or_else(|| default_n(g.bandwidth(), z));
    let spectral = alpha_z_spectral(g, z, x)?;
    // α_z(x) = R_n^{-1} α_z(R_n x), with α_z(R_n x) by quadrature.
    let shifted = smear_shifted(&SmearingOperator::new(n)?, g, z, x)?;
    let quadrature = g.spectral_map(&shifted, |w| C64::new(w * w / (4.0 * n * n), 0.0).exp())?;
    let discrepancy = spectral.distance(&quadrature);
    let rows = spectral
        .coords()
        .into_iter()
        .zip(quadrature.coords())
        .enumerate()
        .map(|(index, (s, q))| ContinueRow { index, spectral_re: s.re, spectral_im: s.im, quadrature_re: q.re, quadrature_im: q.im })
        .collect();
    Ok(ContinueResult { rows, discrepancy, relative: discrepancy / spectral.norm().max(1.0), n })
}

/// `α_z(x)` by spectral calculus and by smeared quadrature.
pub fn run_continue(group: &GroupSpec, z: C64, element: &ElementSpec, n: Option<f64>) -> Result<ContinueResult, CliError> {
    match group {
        GroupSpec::Diagonal(g) => both_routes(g, z, &element.sequence(g.carrier_size())?, n),
        GroupSpec::Implemented(g) => both_routes(g, z, &element.matrix(g.dim())?, n),
        GroupSpec::Corner(g) => both_routes(g, z, &element.block(g.len())?, n),
    }
}

/// Plain-text rendering of a [`ContinueResult`].
pub fn continue_text(res: &ContinueResult, z: C64) -> String {
    let mut s = format!("alpha_z(x) for z = {z}, quadrature route with n = {}\n", res.n);
    s.push_str(&format!("{:>5}  {:>24}  {:>24}\n", "index", "spectral", "quadrature"));
    for r in &res.rows {
        s.push_str(&format!(
            "{:>5}  {:>11.6e} {:>+11.6e}i  {:>11.6e} {:>+11.6e}i\n",
            r.index, r.spectral_re, r.spectral_im, r.quadrature_re, r.quadrature_im
        ));
    }
    s.push_str(&format!("discrepancy {:.3e} (relative {:.3e})\n", res.discrepancy, res.relative));
    s
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CounterexampleRow {
    pub n: usize,
    pub norm_gap: f64,
    pub weak_pairing: f64,
}

/// Rows `n = from..=to`: the sup-norm gap `max_m |F_m(e^{iπ/n}) - F_m(1)|`
/// over the `N` components and the truncated pairing against `a_m = 2^{-m}`.
pub fn counterexample_table(cfg: &CounterexampleConfig) -> Result<Vec<CounterexampleRow>, CliError> {
    cfg.validate()?;
    let f: DiscCounterexample = cfg.build()?;
    let (a, _) = geometric_weights(f.len());
    Ok((cfg.from..=cfg.to)
        .map(|n| {
            let norm_gap = (1..=f.len()).map(|m| f.component_gap(m, n)).fold(0.0, f64::max);
            let weak_pairing = a.iter().enumerate().map(|(i, am)| am * f.component_difference(i + 1, n)).sum::<C64>().norm();
            CounterexampleRow { n, norm_gap, weak_pairing }
        })
        .collect())
}

pub const DEMOS: [&str; 5] = ["counterexample", "domain-gap", "kms", "markov", "three-lines"];

/// Short narrated runs of single checks.
pub fn demo(name: &str, seed: u64) -> Result<String, CliError> {
    let tol = Tolerances::default();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut s = String::new();
    match name {
        "counterexample" => {
            let rows = counterexample_table(&CounterexampleConfig::default())?;
            s.push_str("F_m(w) = exp(m^3 (e^{-iπ/m} w - 1)), N = 64, sampled at w = e^{iπ/n}\n");
            s.push_str("    n   norm gap   weak pairing\n");
            for r in rows.iter().step_by(5) {
                s.push_str(&format!("{:>5}   {:.6}   {:.3e}\n", r.n, r.norm_gap, r.weak_pairing));
            }
            s.push_str("the sup-norm gap stays near 1 while pairings against summable weights decay\n");
        }
        "domain-gap" => {
            let seq = GeometricSequence::from_log_ratio(c64(1.0, 0.0), -1.0, 0)?;
            let g = DiagonalGroup::integer(16, SequenceModel::Linf)?;
            let m = in_domain_sequence(&seq, &g, c64(0.0, -1.0))?;
            let image = seq.continued(c64(0.0, -1.0))?;
            s.push_str("x = (e^{-k}), λ_k = k, z = -i\n");
            s.push_str(&format!("alpha_z(x) has ratio {:.6} (constant sequence)\n", image.ratio()));
            s.push_str(&format!("x in l-infinity domain: {}\nx in c0 domain: {}\n", m.linf, m.c0));
        }
        "kms" => {
            let md = build_modular(FaithfulState::from_spectrum(&[2.0, 1.0], None)?)?;
            let a = CMatrix::unit(2, 0, 1);
            let b = md.sigma_minus_i(&a);
            let pos = verify_kms(&md, &a, &b, &tol)?;
            let neg = verify_kms(&md, &a, &a, &tol)?;
            s.push_str("ρ = diag(2/3, 1/3), a = e_01\n");
            s.push_str(&format!("σ_{{-i}}(a) = ρ a ρ^{{-1}} has (0,1) entry {:.6}\n", b[(0, 1)].re));
            s.push_str(&format!("KMS with b = σ_{{-i}}(a): holds = {}, residual {:.2e}\n", pos.holds, pos.residual));
            s.push_str(&format!("KMS with b = a: holds = {}, residual {:.2e}\n", neg.holds, neg.residual));
        }
        "markov" => {
            let ms = random_markov_setup(&mut rng, &tol)?;
            s.push_str(&format!("blocks {:?} in M_{}\n", ms.blocks(), ms.ambient().dim()));
            for r in anagen_core::modular::markov_suite(&ms, &tol) {
                s.push_str(&format!("{:<16} {:<28} residual {:.2e} passed {}\n", r.check, r.inputs, r.residual, r.passed));
            }
        }
        "three-lines" => {
            let g = EmbeddedCornerGroup::new(DiagonalGroup::new(vec![-1.0, 0.5, 2.0], SequenceModel::C0)?);
            let x = anagen_core::sample::block_element(3, &mut rng);
            let z = c64(0.4, -1.2);
            let t = three_lines_check(&g, z, &x, 21)?;
            s.push_str(&format!("corner group, z = {z}, 21x21 lattice on the strip\n"));
            let max = t.norms.iter().copied().fold(0.0, f64::max);
            s.push_str(&format!("max norm on lattice {max:.6}, bound {:.6}, excess {:.2e}\n", t.bound, t.excess()));
        }
        _ => {
            return Err(CliError::ConfigInvalid(format!("unknown demo '{name}' (available: {})", DEMOS.join(", "))));
        }
    }
    Ok(s)
}
