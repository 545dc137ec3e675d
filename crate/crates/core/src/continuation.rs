//! Analytic extensions `α_z` on strips and the checks built on them.
//!
//! On a finite carrier every orbit `t ↦ α_t(x)` is entire, and `α_z` is
//! evaluated in closed form by each group's spectral formula. The
//! quadrature route in [`crate::smearing`] is the independent cross-check.

use alloc::format;
use alloc::vec::Vec;

use core::f64::consts::PI;
#[allow(unused_imports)] // unused when std is in the dependency graph
use num_traits::Float;

use crate::error::{Error, Result};
use crate::group::{Carrier, OneParameterGroup, StarAlgebra};
use crate::report::Report;
use crate::tolerance::Tolerances;
use crate::C64;

/// The closed strip `S(z)` between `ℝ` and `ℝ + z` (just `ℝ` for real `z`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Strip {
    anchor: C64,
}

impl Strip {
    pub fn new(anchor: C64) -> Result<Self> {
        if !anchor.re.is_finite() || !anchor.im.is_finite() {
            return Err(Error::InvalidParameter("strip anchor must be finite"));
        }
        Ok(Self { anchor })
    }

    pub fn anchor(&self) -> C64 {
        self.anchor
    }

    pub fn contains(&self, w: C64) -> bool {
        if self.anchor.im == 0.0 {
            return w.im == 0.0;
        }
        let s = w.im / self.anchor.im;
        (0.0..=1.0).contains(&s)
    }

    /// `grid × grid` points: heights evenly spaced from `0` to `Im z`, real
    /// parts spanning one unit beyond `[min(0, Re z), max(0, Re z)]`.
    pub fn lattice(&self, grid: usize) -> Vec<C64> {
        let lo = self.anchor.re.min(0.0) - 1.0;
        let hi = self.anchor.re.max(0.0) + 1.0;
        let step = |i: usize| if grid > 1 { i as f64 / (grid - 1) as f64 } else { 0.0 };
        let mut out = Vec::with_capacity(grid * grid);
        for i in 0..grid {
            let y = self.anchor.im * step(i);
            for j in 0..grid {
                out.push(C64::new(lo + (hi - lo) * step(j), y));
            }
        }
        out
    }
}

/// `α_z(x)` by spectral calculus.
pub fn alpha_z_spectral<G: OneParameterGroup>(group: &G, z: C64, x: &G::Element) -> Result<G::Element> {
    group.continue_to(z, x)
}

fn relative(diff: f64, scale: f64) -> f64 {
    if scale > 0.0 { diff / scale } else { diff }
}

fn same_side(z1: C64, z2: C64) -> bool {
    !(z1.im * z2.im < 0.0)
}

/// `α_{z₁}(α_{z₂}(x)) = α_{z₁+z₂}(x)` for `z₁, z₂` on the same side of the
/// real axis. `values` holds the norms of both sides.
pub fn composition_check<G: OneParameterGroup>(
    group: &G,
    z1: C64,
    z2: C64,
    x: &G::Element,
    tol: &Tolerances,
) -> Result<Report> {
    if !same_side(z1, z2) {
        return Err(Error::SideMismatch);
    }
    let nested = group.continue_to(z1, &group.continue_to(z2, x)?)?;
    let direct = group.continue_to(z1 + z2, x)?;
    let residual = relative(nested.distance(&direct), direct.norm());
    Ok(Report::residual("composition", "generator-composition", format!("z1={z1} z2={z2}"), residual, tol.algebra)
        .with_values(alloc::vec![nested.norm(), direct.norm()]))
}

/// `α_{-z}(α_z(x)) = x`.
pub fn inverse_check<G: OneParameterGroup>(group: &G, z: C64, x: &G::Element, tol: &Tolerances) -> Result<Report> {
    let back = group.continue_to(-z, &group.continue_to(z, x)?)?;
    let residual = relative(back.distance(x), x.norm());
    Ok(Report::residual("inverse", "generator-inverse", format!("z={z}"), residual, tol.algebra))
}

/// `α_t(α_z(x)) = α_{z+t}(x)` for real `t`.
pub fn real_shift_check<G: OneParameterGroup>(
    group: &G,
    t: f64,
    z: C64,
    x: &G::Element,
    tol: &Tolerances,
) -> Result<Report> {
    let lhs = group.apply(t, &group.continue_to(z, x)?)?;
    let rhs = group.continue_to(z + t, x)?;
    let residual = relative(lhs.distance(&rhs), rhs.norm());
    Ok(Report::residual("real_shift", "orbit-extension", format!("t={t} z={z}"), residual, tol.group_law))
}

/// `α_z(xy) = α_z(x) α_z(y)`.
pub fn multiplicative_check<G>(group: &G, z: C64, x: &G::Element, y: &G::Element, tol: &Tolerances) -> Result<Report>
where
    G: OneParameterGroup,
    G::Element: StarAlgebra,
{
    let lhs = group.continue_to(z, &x.product(y))?;
    let rhs = group.continue_to(z, x)?.product(&group.continue_to(z, y)?);
    let residual = relative(lhs.distance(&rhs), rhs.norm().max(x.norm() * y.norm()));
    Ok(Report::residual("multiplicative", "domain-subalgebra", format!("z={z}"), residual, tol.algebra))
}

/// `α_{z̄}(x*) = α_z(x)*`.
pub fn star_check<G>(group: &G, z: C64, x: &G::Element, tol: &Tolerances) -> Result<Report>
where
    G: OneParameterGroup,
    G::Element: StarAlgebra,
{
    let lhs = group.continue_to(z.conj(), &x.star())?;
    let rhs = group.continue_to(z, x)?.star();
    let residual = relative(lhs.distance(&rhs), rhs.norm());
    Ok(Report::residual("star", "domain-star", format!("z={z}"), residual, tol.group_law))
}

/// Norms of `α_w(x)` on a strip lattice against the three-lines bound.
#[derive(Debug, Clone, PartialEq)]
pub struct ThreeLines {
    pub strip: Strip,
    pub points: Vec<C64>,
    pub norms: Vec<f64>,
    /// `max(‖x‖, ‖α_z(x)‖)`.
    pub bound: f64,
}

impl ThreeLines {
    /// Largest `‖α_w(x)‖ - M` over the lattice.
    pub fn excess(&self) -> f64 {
        self.norms.iter().map(|n| n - self.bound).fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn report(&self, tol: &Tolerances) -> Report {
        let excess = self.excess().max(0.0);
        Report::residual(
            "three_lines",
            "three-lines-bound",
            format!("z={} lattice={}", self.strip.anchor(), self.points.len()),
            excess,
            tol.three_lines,
        )
        .with_values(alloc::vec![self.bound, self.norms.iter().copied().fold(0.0, f64::max)])
    }
}

/// Evaluates `‖α_w(x)‖` on a `grid × grid` lattice of `S(z)`.
pub fn three_lines_check<G: OneParameterGroup>(group: &G, z: C64, x: &G::Element, grid: usize) -> Result<ThreeLines> {
    if grid < 2 {
        return Err(Error::InvalidParameter("three-lines lattice needs grid >= 2"));
    }
    let strip = Strip::new(z)?;
    let points = strip.lattice(grid);
    let norms = points.iter().map(|&w| group.continue_to(w, x).map(|y| y.norm())).collect::<Result<Vec<_>>>()?;
    let bound = x.norm().max(group.continue_to(z, x)?.norm());
    Ok(ThreeLines { strip, points, norms, bound })
}

/// The disc map `F(w) = (exp(k_m(e^{-iπ/m} w - 1)))_{m >= 1}` truncated to
/// `N = k.len()` components. It is weakly regular on the closed disc but
/// not norm-continuous at `w = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscCounterexample {
    k: Vec<u64>,
}

impl DiscCounterexample {
    /// `k` must be strictly increasing.
    pub fn new(k: Vec<u64>) -> Result<Self> {
        if k.is_empty() {
            return Err(Error::InvalidParameter("counterexample needs at least one component"));
        }
        if k.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidParameter("k must be strictly increasing"));
        }
        Ok(Self { k })
    }

    /// `k_m = m^power` for `m = 1..=n`.
    pub fn power_schedule(n: usize, power: u32) -> Result<Self> {
        Self::new((1..=n as u64).map(|m| m.pow(power)).collect())
    }

    /// The default schedule `k_m = m³` with `N = 64`.
    pub fn cubic() -> Self {
        Self::power_schedule(64, 3).expect("m^3 is increasing")
    }

    pub fn len(&self) -> usize {
        self.k.len()
    }

    pub fn is_empty(&self) -> bool {
        self.k.is_empty()
    }

    pub fn k(&self) -> &[u64] {
        &self.k
    }

    /// `ln F_m(w)` for `m = 1..=N`.
    pub fn log_component(&self, m: usize, w: C64) -> C64 {
        let rot = C64::from_polar(1.0, -PI / m as f64);
        (rot * w - 1.0) * self.k[m - 1] as f64
    }

    pub fn component(&self, m: usize, w: C64) -> C64 {
        self.log_component(m, w).exp()
    }

    /// `ln F_m(e^{iθ})`, with the rotation folded into the angle so that
    /// `θ = π/m` gives exactly `0`. `cos φ - 1` is evaluated as
    /// `-2 sin²(φ/2)`.
    pub fn log_component_on_circle(&self, m: usize, theta: f64) -> C64 {
        let phi = theta - PI / m as f64;
        let k = self.k[m - 1] as f64;
        let half = (phi / 2.0).sin();
        C64::new(-2.0 * k * half * half, k * phi.sin())
    }

    /// `|F_m(e^{iπ/n}) - F_m(1)|`.
    pub fn component_gap(&self, m: usize, n: usize) -> f64 {
        let at = self.log_component_on_circle(m, PI / n as f64).exp();
        let base = self.log_component_on_circle(m, 0.0).exp();
        (at - base).norm()
    }

    /// `F_m(e^{iπ/n}) - F_m(1)`.
    pub fn component_difference(&self, m: usize, n: usize) -> C64 {
        self.log_component_on_circle(m, PI / n as f64).exp() - self.log_component_on_circle(m, 0.0).exp()
    }
}

/// `‖F(e^{iπ/n}) - F(1)‖_∞` over the truncated components.
pub fn counterexample_norm_gap(f: &DiscCounterexample, n: usize) -> Result<f64> {
    if n == 0 || n > f.len() {
        return Err(Error::IndexOutOfRange { index: n, len: f.len() });
    }
    Ok((1..=f.len()).map(|m| f.component_gap(m, n)).fold(0.0, f64::max))
}

/// The lower bound `|1 - exp(k_n(e^{-iπ/n} - 1))|` given by component `n`.
pub fn norm_gap_lower_bound(f: &DiscCounterexample, n: usize) -> Result<f64> {
    if n == 0 || n > f.len() {
        return Err(Error::IndexOutOfRange { index: n, len: f.len() });
    }
    Ok(f.component_gap(n, n))
}

/// `|⟨a, F(e^{iπ/n}) - F(1)⟩|` for `n = 2..=n_max`.
#[derive(Debug, Clone, PartialEq)]
pub struct WeakContinuity {
    pub n: Vec<usize>,
    pub values: Vec<f64>,
    /// Bound on the contribution of the discarded tail `Σ_{m>N} |a_m|`,
    /// doubled since `|F_m| <= 1`.
    pub tail_bound: f64,
}

impl WeakContinuity {
    pub fn last(&self) -> f64 {
        self.values.last().copied().unwrap_or(0.0) + self.tail_bound
    }

    pub fn report(&self, tol: &Tolerances) -> Report {
        Report::residual(
            "counterexample_weak",
            "weak-not-norm-regular",
            format!("n=2..{}", self.n.last().copied().unwrap_or(2)),
            self.last(),
            tol.weak_decay,
        )
        .with_values(self.values.clone())
    }
}

/// Weak pairing of the counterexample against `a` (`a[m-1]` pairs with
/// component `m`). `tail_mass` is `Σ |a_m|` over components beyond the
/// truncation.
pub fn counterexample_weak_continuity(
    f: &DiscCounterexample,
    a: &[C64],
    tail_mass: f64,
    n_max: usize,
) -> Result<WeakContinuity> {
    if a.len() > f.len() {
        return Err(Error::IndexOutOfRange { index: a.len(), len: f.len() });
    }
    let ns: Vec<usize> = (2..=n_max).collect();
    let values = ns
        .iter()
        .map(|&n| a.iter().enumerate().map(|(i, am)| am * f.component_difference(i + 1, n)).sum::<C64>().norm())
        .collect();
    Ok(WeakContinuity { n: ns, values, tail_bound: 2.0 * tail_mass.abs() })
}

/// The weights `a_m = 2^{-m}`, `m = 1..=n`, with their tail mass `2^{-n}`.
pub fn geometric_weights(n: usize) -> (Vec<C64>, f64) {
    let a = (1..=n).map(|m| C64::new((-(m as f64)).exp2(), 0.0)).collect();
    (a, (-(n as f64)).exp2())
}

/// Norm-gap report over `n_lo..=n_hi`: passes iff every gap is at least
/// `tol.norm_gap`.
pub fn norm_gap_report(f: &DiscCounterexample, n_lo: usize, n_hi: usize, tol: &Tolerances) -> Result<Report> {
    let gaps = (n_lo..=n_hi).map(|n| counterexample_norm_gap(f, n)).collect::<Result<Vec<_>>>()?;
    let worst = gaps.iter().copied().fold(f64::INFINITY, f64::min);
    let mut r = Report::residual(
        "counterexample_gap",
        "weak-not-norm-regular",
        format!("n={n_lo}..{n_hi} N={}", f.len()),
        worst,
        tol.norm_gap,
    )
    .with_values(gaps);
    r.passed = worst >= tol.norm_gap;
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::c64;
    use crate::group::{DiagonalGroup, ImplementedGroup, Sequence, SequenceModel};
    use crate::linalg::CMatrix;

    fn diag(n: usize) -> DiagonalGroup {
        DiagonalGroup::integer(n, SequenceModel::C0).unwrap()
    }

    #[test]
    fn strip_membership() {
        let s = Strip::new(c64(0.5, -1.0)).unwrap();
        assert!(s.contains(c64(10.0, -0.5)));
        assert!(s.contains(c64(-3.0, 0.0)));
        assert!(!s.contains(c64(0.0, 0.1)));
        assert!(!s.contains(c64(0.0, -1.01)));
        let real = Strip::new(c64(2.0, 0.0)).unwrap();
        assert!(real.contains(c64(-7.0, 0.0)));
        assert!(!real.contains(c64(0.0, 1e-9)));
    }

    #[test]
    fn alpha_examples() {
        let x = Sequence(alloc::vec![c64(1.0, 0.0), c64(0.5, 0.5), c64(0.0, -2.0)]);
        let y = alpha_z_spectral(&diag(3), c64(0.0, -1.0), &x).unwrap();
        for k in 0..3 {
            assert!((y.0[k] - x.0[k] * (k as f64).exp()).norm() < 1e-14);
        }
        assert_eq!(alpha_z_spectral(&diag(3), c64(0.0, 0.0), &x).unwrap(), x);

        let g = ImplementedGroup::new(CMatrix::from_real_diag(&[0.0, 1.0])).unwrap();
        let e12 = CMatrix::unit(2, 0, 1);
        let y = alpha_z_spectral(&g, c64(0.0, -1.0), &e12).unwrap();
        assert!(y.dist(&e12.scale(c64((-1.0f64).exp(), 0.0))) < 1e-15);
    }

    #[test]
    fn composition_examples() {
        let tol = Tolerances::default();
        let g = ImplementedGroup::new(CMatrix::from_real_rows(&[&[0.3, 0.2], &[0.2, -0.4]])).unwrap();
        let x = CMatrix::from_fn(2, 2, |i, j| c64(i as f64 + 0.5, j as f64));
        let half = c64(0.0, -0.5);
        assert!(composition_check(&g, half, half, &x, &tol).unwrap().passed);
        assert!(composition_check(&g, half, c64(0.0, 0.0), &x, &tol).unwrap().passed);
        assert_eq!(composition_check(&g, half, c64(0.0, 0.5), &x, &tol), Err(Error::SideMismatch));
        let s = Sequence(alloc::vec![c64(1.0, 0.0), c64(0.0, 1.0), c64(2.0, 0.0)]);
        assert!(inverse_check(&diag(3), c64(0.0, -1.0), &s, &tol).unwrap().passed);
    }

    #[test]
    fn three_lines_examples() {
        let g = diag(2);
        let x = Sequence(alloc::vec![c64(1.0, 0.0), c64(1.0, 0.0)]);
        let tl = three_lines_check(&g, c64(0.0, -1.0), &x, 5).unwrap();
        assert!((tl.bound - core::f64::consts::E).abs() < 1e-14);
        assert!(tl.excess() <= 1e-12);
        // Row i sits at height -i/4 where the norm is e^{i/4}.
        for (p, n) in tl.points.iter().zip(&tl.norms) {
            assert!((n - (-p.im).exp()).abs() < 1e-13);
        }

        let fixed = Sequence(alloc::vec![c64(0.3, 0.4), c64(0.0, 0.0)]);
        let tl = three_lines_check(&g, c64(1.0, 2.0), &fixed, 4).unwrap();
        assert!(tl.norms.iter().all(|n| (n - 0.5).abs() < 1e-15));

        let tracial = ImplementedGroup::modular(&CMatrix::identity(2).scale(c64(0.5, 0.0))).unwrap();
        let x = CMatrix::from_fn(2, 2, |i, j| c64(i as f64, j as f64 + 1.0));
        let tl = three_lines_check(&tracial, c64(0.0, 1.5), &x, 3).unwrap();
        let nx = x.op_norm();
        assert!(tl.norms.iter().all(|n| (n - nx).abs() < 1e-12));

        assert!(three_lines_check(&g, c64(0.0, 1.0), &x4(), 1).is_err());
    }

    fn x4() -> Sequence {
        Sequence(alloc::vec![c64(1.0, 0.0); 2])
    }

    #[test]
    fn counterexample_gap_oracles() {
        let f = DiscCounterexample::cubic();
        // n = 10: Re(k_n(e^{-iπ/n} - 1)) = 1000 (cos(π/10) - 1) ≈ -48.9, so the
        // gap is 1 to within e^{-48}.
        let gap = counterexample_norm_gap(&f, 10).unwrap();
        assert!((gap - 1.0).abs() <= 1e-20, "{gap}");
        // n = 2: |1 - e^{-8} e^{-8i}| by direct scalar evaluation.
        let direct = (c64(1.0, 0.0) - c64(-8.0, -8.0).exp()).norm();
        assert!((norm_gap_lower_bound(&f, 2).unwrap() - direct).abs() < 1e-15);
        assert!(counterexample_norm_gap(&f, 2).unwrap() >= direct);
        assert!(matches!(counterexample_norm_gap(&f, 65), Err(Error::IndexOutOfRange { .. })));
    }

    #[test]
    fn zero_exponent_component_has_no_gap() {
        let f = DiscCounterexample::new(alloc::vec![0, 5, 9]).unwrap();
        assert_eq!(f.component_gap(1, 3), 0.0);
    }

    #[test]
    fn schedule_must_increase() {
        assert!(DiscCounterexample::new(alloc::vec![1, 1]).is_err());
    }

    #[test]
    fn single_component_pairing_vanishes_slowly() {
        let f = DiscCounterexample::cubic();
        let mut a = alloc::vec![c64(0.0, 0.0); 3];
        a[2] = c64(1.0, 0.0);
        let wc = counterexample_weak_continuity(&f, &a, 0.0, 60).unwrap();
        assert!(wc.values.last().unwrap() < &wc.values[5]);
        let zero = counterexample_weak_continuity(&f, &[c64(0.0, 0.0); 4], 0.0, 10).unwrap();
        assert!(zero.values.iter().all(|v| *v == 0.0));
    }
}
