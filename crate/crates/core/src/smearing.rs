//! The Gaussian smearing operator
//! `R_n(x) = (n/√π) ∫ exp(-n²t²) α_t(x) dt` and its contour-shifted form
//! `α_z(R_n(x)) = (n/√π) ∫ exp(-n²(t-z)²) α_t(x) dt`, both evaluated by
//! composite Gauss-Legendre quadrature of the orbit.
//!
//! Closed forms come from the spectral splitting: on a component of
//! frequency `ω`, `R_n` multiplies by `exp(-ω²/(4n²))` and `α_z` by
//! `exp(iωz)`. Multipliers are formed from their logarithms.

use alloc::format;
use alloc::vec::Vec;

use core::f64::consts::PI;
#[allow(unused_imports)] // unused when std is in the dependency graph
use num_traits::Float;

use crate::error::{Error, Result};
use crate::group::{Carrier, DiagonalGroup, OneParameterGroup};
use crate::report::Report;
use crate::tolerance::Tolerances;
use crate::C64;

/// Largest discarded Gaussian tail mass accepted before evaluation.
pub const TAIL_LIMIT: f64 = 1e-12;

/// Tail mass targeted by default schemes, far below double precision so
/// that strongly damped results keep their relative accuracy.
const DEFAULT_TAIL: f64 = 1e-24;

/// Minimum number of panels in a default scheme.
const MIN_PANELS: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuadratureRule {
    Trapezoid,
    /// Composite Gauss-Legendre with the given number of nodes per panel.
    GaussLegendrePanels(usize),
}

/// Quadrature over `[c - T, c + T]` where `c = Re z` is the centre of the
/// (shifted) Gaussian. `step` is the trapezoid spacing or the panel width.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureScheme {
    half_width: f64,
    step: f64,
    rule: QuadratureRule,
}

impl QuadratureScheme {
    pub fn new(half_width: f64, step: f64, rule: QuadratureRule) -> Result<Self> {
        if !(half_width > 0.0 && step > 0.0) || !half_width.is_finite() {
            return Err(Error::InvalidParameter("quadrature needs T > 0 and h > 0"));
        }
        if half_width / step < 8.0 {
            return Err(Error::InvalidParameter("quadrature needs T/h >= 8"));
        }
        if let QuadratureRule::GaussLegendrePanels(0) = rule {
            return Err(Error::InvalidParameter("Gauss-Legendre panels need at least one node"));
        }
        Ok(Self { half_width, step, rule })
    }

    /// Default scheme for sharpness `n`, shift `z` and orbit bandwidth `ω`:
    /// order-8 panels, `T = max(6/n, 6n(1+|Im z|))` widened until the tail
    /// is below `1e-24` (well inside the certified `1e-12`), and panel width
    /// resolving both the Gaussian and the oscillation `ω + 2n²|Im z|`.
    pub fn default_for(n: f64, z: C64, bandwidth: f64) -> Self {
        let y = z.im.abs();
        let mut half_width = (6.0 / n).max(6.0 * n * (1.0 + y));
        while log_tail_bound(n, z, half_width) > DEFAULT_TAIL.ln() {
            half_width *= 1.25;
        }
        let frequency = bandwidth + 2.0 * n * n * y;
        let step = (2.0 * half_width / MIN_PANELS as f64).min(0.5 / n).min(1.5 / frequency.max(1e-300));
        Self { half_width, step, rule: QuadratureRule::GaussLegendrePanels(8) }
    }

    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn rule(&self) -> QuadratureRule {
        self.rule
    }

    pub fn panels(&self) -> usize {
        (2.0 * self.half_width / self.step).ceil() as usize
    }

    pub fn node_count(&self) -> usize {
        match self.rule {
            QuadratureRule::Trapezoid => self.panels() + 1,
            QuadratureRule::GaussLegendrePanels(k) => self.panels() * k,
        }
    }

    /// Upper bound on `(n/√π) ∫_{|t-Re z|>T} |exp(-n²(t-z)²)| dt`.
    pub fn tail_bound(&self, n: f64, z: C64) -> f64 {
        log_tail_bound(n, z, self.half_width).exp()
    }

    /// Errors with `TailBoundViolated` unless the tail is at most `1e-12`.
    pub fn certify(&self, n: f64, z: C64) -> Result<f64> {
        let bound = self.tail_bound(n, z);
        if bound.is_nan() || bound > TAIL_LIMIT {
            return Err(Error::TailBoundViolated { bound, limit: TAIL_LIMIT });
        }
        Ok(bound)
    }

    /// Nodes and weights on `[center - T, center + T]`, grouped by panel.
    pub fn panel_nodes(&self, center: f64) -> Vec<Vec<(f64, f64)>> {
        let panels = self.panels();
        let width = 2.0 * self.half_width / panels as f64;
        let start = center - self.half_width;
        match self.rule {
            QuadratureRule::Trapezoid => {
                let mut out: Vec<Vec<(f64, f64)>> = (0..panels)
                    .map(|p| alloc::vec![(start + p as f64 * width, if p == 0 { width / 2.0 } else { width })])
                    .collect();
                out.push(alloc::vec![(center + self.half_width, width / 2.0)]);
                out
            }
            QuadratureRule::GaussLegendrePanels(k) => {
                let (x, w) = gauss_legendre(k);
                (0..panels)
                    .map(|p| {
                        let mid = start + (p as f64 + 0.5) * width;
                        x.iter().zip(&w).map(|(xi, wi)| (mid + 0.5 * width * xi, 0.5 * width * wi)).collect()
                    })
                    .collect()
            }
        }
    }
}

/// `ln` of `e^{n²y²} erfc(nT)` bounded by `e^{n²y² - n²T²} / (nT√π)`.
fn log_tail_bound(n: f64, z: C64, half_width: f64) -> f64 {
    let a = n * half_width;
    let y = n * z.im;
    y * y - a * a - (a * PI.sqrt()).ln()
}

/// Gauss-Legendre nodes and weights on `[-1, 1]`, by Newton iteration on
/// the Legendre recurrence.
pub fn gauss_legendre(order: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = alloc::vec![0.0; order];
    let mut weights = alloc::vec![0.0; order];
    let nf = order as f64;
    for i in 0..order.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for j in 2..=order {
                let jf = j as f64;
                let p2 = ((2.0 * jf - 1.0) * x * p1 - (jf - 1.0) * p0) / jf;
                p0 = p1;
                p1 = p2;
            }
            let p = if order == 1 { x } else { p1 };
            let pm1 = if order == 1 { 1.0 } else { p0 };
            dp = nf * (x * p - pm1) / (x * x - 1.0);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        if order == 1 {
            x = 0.0;
            dp = 1.0;
        }
        nodes[i] = -x;
        nodes[order - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[order - 1 - i] = w;
    }
    (nodes, weights)
}

/// Sums in a fixed balanced binary tree, independent of how the leaves
/// were produced.
pub fn pairwise_sum<E: Carrier>(mut items: Vec<E>) -> Option<E> {
    if items.is_empty() {
        return None;
    }
    while items.len() > 1 {
        let mut next = Vec::with_capacity(items.len().div_ceil(2));
        let mut it = items.into_iter();
        while let Some(mut a) = it.next() {
            if let Some(b) = it.next() {
                a.axpy(C64::new(1.0, 0.0), &b);
            }
            next.push(a);
        }
        items = next;
    }
    items.pop()
}

/// `R_n` with sharpness `n > 0`. Without an explicit scheme each evaluation
/// uses [`QuadratureScheme::default_for`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SmearingOperator {
    n: f64,
    scheme: Option<QuadratureScheme>,
}

impl SmearingOperator {
    pub fn new(n: f64) -> Result<Self> {
        if !(n > 0.0 && n.is_finite()) {
            return Err(Error::InvalidParameter("smearing parameter n must be positive"));
        }
        Ok(Self { n, scheme: None })
    }

    pub fn with_scheme(n: f64, scheme: QuadratureScheme) -> Result<Self> {
        Ok(Self { scheme: Some(scheme), ..Self::new(n)? })
    }

    pub fn n(&self) -> f64 {
        self.n
    }

    /// The scheme used for shift `z`, after tail certification.
    pub fn scheme_for<G: OneParameterGroup>(&self, group: &G, z: C64) -> Result<(QuadratureScheme, f64)> {
        let scheme = self.scheme.unwrap_or_else(|| QuadratureScheme::default_for(self.n, z, group.bandwidth()));
        let tail = scheme.certify(self.n, z)?;
        Ok((scheme, tail))
    }

    /// Amplification `e^{n² Im(z)²}` of the shifted integrand; the shifted
    /// quadrature loses about `log10` of this many digits to cancellation.
    pub fn shift_amplification(&self, z: C64) -> f64 {
        (self.n * self.n * z.im * z.im).exp()
    }

    fn integrate<G: OneParameterGroup>(&self, group: &G, z: C64, x: &G::Element) -> Result<G::Element> {
        group.check_shape(x)?;
        let (scheme, _) = self.scheme_for(group, z)?;
        let n2 = self.n * self.n;
        let scale = self.n / PI.sqrt();
        let y = z.im;
        let mut partials = Vec::with_capacity(scheme.panels() + 1);
        for panel in scheme.panel_nodes(z.re) {
            let mut acc = x.zeros_like();
            for (t, w) in panel {
                let s = t - z.re;
                // -n²(t - z)² = -n²s² + n²y² + 2i n² s y
                let weight = C64::new(-n2 * s * s + n2 * y * y, 2.0 * n2 * s * y).exp() * (scale * w);
                acc.axpy(weight, &group.apply(t, x)?);
            }
            partials.push(acc);
        }
        Ok(pairwise_sum(partials).unwrap_or_else(|| x.zeros_like()))
    }
}

/// `R_n(x)` by quadrature.
pub fn smear<G: OneParameterGroup>(r: &SmearingOperator, group: &G, x: &G::Element) -> Result<G::Element> {
    r.integrate(group, C64::new(0.0, 0.0), x)
}

/// `α_z(R_n(x))` by quadrature of the shifted Gaussian.
pub fn smear_shifted<G: OneParameterGroup>(
    r: &SmearingOperator,
    group: &G,
    z: C64,
    x: &G::Element,
) -> Result<G::Element> {
    r.integrate(group, z, x)
}

/// `R_n(x)` from the spectral multipliers `exp(-ω²/(4n²))`.
pub fn closed_form_smear<G: OneParameterGroup>(n: f64, group: &G, x: &G::Element) -> Result<G::Element> {
    group.spectral_map(x, |w| C64::new(-w * w / (4.0 * n * n), 0.0).exp())
}

/// `α_z(R_n(x))` from the spectral multipliers `exp(iωz - ω²/(4n²))`.
pub fn closed_form_smear_shifted<G: OneParameterGroup>(
    n: f64,
    group: &G,
    z: C64,
    x: &G::Element,
) -> Result<G::Element> {
    group.spectral_map(x, |w| (C64::new(0.0, w) * z - w * w / (4.0 * n * n)).exp())
}

fn relative(diff: f64, scale: f64) -> f64 {
    if scale > 0.0 { diff / scale } else { diff }
}

/// Quadrature `R_n(x)` against the closed form (absolute, model norm).
pub fn closed_form_check<G: OneParameterGroup>(
    r: &SmearingOperator,
    group: &G,
    x: &G::Element,
    tol: &Tolerances,
) -> Result<Report> {
    let (scheme, tail) = r.scheme_for(group, C64::new(0.0, 0.0))?;
    let quad = smear(r, group, x)?;
    let exact = closed_form_smear(r.n, group, x)?;
    Ok(Report::residual("smear_closed_form", "smearing-operator", format!("n={}", r.n), quad.distance(&exact), tol.closed_form)
        .with_values(alloc::vec![scheme.node_count() as f64, tail]))
}

/// Shifted quadrature against `α_z` applied (spectrally) to the unshifted
/// quadrature, relative to the size of the result.
pub fn shifted_consistency_check<G: OneParameterGroup>(
    r: &SmearingOperator,
    group: &G,
    z: C64,
    x: &G::Element,
    tol: &Tolerances,
) -> Result<Report> {
    let (scheme, tail) = r.scheme_for(group, z)?;
    let shifted = smear_shifted(r, group, z, x)?;
    let spectral = group.continue_to(z, &smear(r, group, x)?)?;
    let residual = relative(shifted.distance(&spectral), spectral.norm());
    Ok(Report::residual("smear_shifted", "contour-shift", format!("n={} z={z}", r.n), residual, tol.cross_path)
        .with_values(alloc::vec![scheme.node_count() as f64, tail]))
}

/// `‖α_t(R_n x) - R_n(α_t x)‖`, and optionally the same for complex `z`
/// with `α_z` taken spectrally.
pub fn verify_commutation<G: OneParameterGroup>(
    r: &SmearingOperator,
    group: &G,
    t: f64,
    z: Option<C64>,
    x: &G::Element,
    tol: &Tolerances,
) -> Result<Report> {
    let lhs = group.apply(t, &smear(r, group, x)?)?;
    let rhs = smear(r, group, &group.apply(t, x)?)?;
    let mut residual = lhs.distance(&rhs);
    let mut values = alloc::vec![residual];
    if let Some(z) = z {
        let lhs = group.continue_to(z, &smear(r, group, x)?)?;
        let rhs = smear(r, group, &group.continue_to(z, x)?)?;
        let rz = relative(lhs.distance(&rhs), rhs.norm());
        values.push(rz);
        residual = residual.max(rz);
    }
    Ok(Report::residual("smear_commutation", "smearing-commutes", format!("n={} t={t} z={z:?}", r.n), residual, tol.closed_form)
        .with_values(values))
}

/// `‖R_n(x)‖ <= ‖x‖` up to `1e-9`.
pub fn contractivity_check<G: OneParameterGroup>(r: &SmearingOperator, group: &G, x: &G::Element) -> Result<Report> {
    let excess = (smear(r, group, x)?.norm() - x.norm()).max(0.0);
    Ok(Report::residual("smear_contractive", "smearing-operator", format!("n={}", r.n), excess, 1e-9))
}

/// Support of `R_n(x)` on a diagonal carrier.
#[derive(Debug, Clone, PartialEq)]
pub struct SupportReport {
    pub support_in: Vec<usize>,
    pub support_out: Vec<usize>,
    /// `min ln|multiplier|` over the support of `x` (`0` if empty).
    pub min_log_multiplier: f64,
}

impl SupportReport {
    pub fn preserved(&self) -> bool {
        self.support_in == self.support_out
    }

    pub fn report(&self) -> Report {
        Report::boolean("smear_support", "smearing-invariant-subspace", format!("|supp x|={}", self.support_in.len()), self.preserved())
            .with_values(alloc::vec![self.min_log_multiplier])
    }
}

/// The coordinate support of `x` is preserved by `R_n`: every multiplier
/// `exp(-λ_k²/(4n²))` is nonzero. Decided from the log-space multipliers;
/// the quadrature value is compared wherever the multiplier exceeds `1e-6`.
pub fn support_preservation(
    r: &SmearingOperator,
    group: &DiagonalGroup,
    x: &crate::group::Sequence,
    tol: &Tolerances,
) -> Result<SupportReport> {
    group.check_shape(x)?;
    let support_in = x.support();
    let logs: Vec<f64> = group.exponents().iter().map(|l| -l * l / (4.0 * r.n * r.n)).collect();
    let support_out: Vec<usize> = support_in.iter().copied().filter(|&k| (x.0[k].norm().ln() + logs[k]).is_finite()).collect();
    let min_log_multiplier = support_in.iter().map(|&k| logs[k]).fold(0.0, f64::min);
    let quad = smear(r, group, x)?;
    for ((xk, qk), &lk) in x.0.iter().zip(&quad.0).zip(&logs) {
        if lk > (1e-6f64).ln() {
            let gap = (qk - xk * lk.exp()).norm();
            if gap > tol.closed_form {
                return Err(Error::NotInvariant { residual: gap });
            }
        }
    }
    Ok(SupportReport { support_in, support_out, min_log_multiplier })
}

/// Outcome of the smeared graph criterion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GraphCriterion {
    /// `‖α_z(R_n x) - R_n y‖` by quadrature, relative to `max(1, ‖R_n y‖)`.
    pub residual: f64,
    pub holds: bool,
    /// The same quantity from spectral closed forms.
    pub spectral_residual: f64,
    /// Whether the quadrature and spectral decisions agree.
    pub consistent: bool,
}

/// Decides `(x, y) ∈ G(α_z)` through `α_z(R_n x) = R_n y`.
pub fn graph_criterion<G: OneParameterGroup>(
    r: &SmearingOperator,
    group: &G,
    z: C64,
    x: &G::Element,
    y: &G::Element,
    tol: &Tolerances,
) -> Result<GraphCriterion> {
    let lhs = smear_shifted(r, group, z, x)?;
    let rhs = smear(r, group, y)?;
    let residual = lhs.distance(&rhs) / rhs.norm().max(1.0);
    let holds = residual <= tol.criterion;
    let diff = group.continue_to(z, x)?.minus(y);
    let smeared_diff = closed_form_smear(r.n, group, &diff)?;
    let spectral_residual = smeared_diff.norm() / closed_form_smear(r.n, group, y)?.norm().max(1.0);
    let consistent = holds == (spectral_residual <= tol.criterion);
    Ok(GraphCriterion { residual, holds, spectral_residual, consistent })
}

fn span_coords<E: Carrier>(items: &[E]) -> Vec<Vec<C64>> {
    items.iter().map(Carrier::coords).collect()
}

/// Checks that `D` is a core for `α_z`: it spans the carrier, is invariant
/// under the group (sampled times), and its graph spans the full graph.
pub fn core_theorem_check<G: OneParameterGroup>(
    group: &G,
    z: C64,
    d: &[G::Element],
    tol: &Tolerances,
) -> Result<Report> {
    let basis = group.basis();
    let dim = basis.len();
    let q = crate::linalg::orthonormal_basis(&span_coords(d), tol.rank);
    if q.len() < dim {
        return Err(Error::NotDense { rank: q.len(), dim });
    }
    let mut moved = Vec::new();
    for t in [0.37, -1.3, 2.9] {
        for e in d {
            moved.push(group.apply(t, e)?.coords());
        }
    }
    let scale = d.iter().map(Carrier::norm).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
    let invariance = crate::linalg::projection_residual(&q, &moved) / scale;
    if invariance > tol.invariance {
        return Err(Error::NotInvariant { residual: invariance });
    }
    let pair = |e: &G::Element| -> Result<Vec<C64>> {
        let mut c = e.coords();
        c.extend(group.continue_to(z, e)?.coords());
        Ok(c)
    };
    let from_d = d.iter().map(pair).collect::<Result<Vec<_>>>()?;
    let full = basis.iter().map(pair).collect::<Result<Vec<_>>>()?;
    let qd = crate::linalg::orthonormal_basis(&from_d, tol.rank);
    let qf = crate::linalg::orthonormal_basis(&full, tol.rank);
    let residual = crate::linalg::projection_residual(&qd, &qf).max(crate::linalg::projection_residual(&qf, &qd));
    let mut r = Report::residual("core", "smeared-core", format!("z={z} |D|={}", d.len()), residual, tol.cross_path);
    r.passed &= qd.len() == qf.len();
    Ok(r.with_values(alloc::vec![qd.len() as f64, qf.len() as f64, invariance]))
}

/// `‖R_n(x) - x‖ <= max_k λ_k²/(4n²) ‖x‖ (1 + 1e-6)` on a diagonal carrier.
pub fn approximation_check(
    r: &SmearingOperator,
    group: &DiagonalGroup,
    x: &crate::group::Sequence,
) -> Result<Report> {
    let err = smear(r, group, x)?.distance(x);
    let lmax = group.bandwidth();
    let bound = lmax * lmax / (4.0 * r.n * r.n) * x.norm() * (1.0 + 1e-6);
    let mut rep = Report::residual("smear_approximation", "smearing-approximate-identity", format!("n={}", r.n), err, bound);
    rep.passed = err <= bound + 1e-12;
    Ok(rep)
}
