//! The graph `G(α_z) = {(a, α_z a)}` as an algebra, its natural involution
//! at `z = -i`, spectral subspaces and the finite-dimensional shadows of the
//! density, duality and uniqueness statements about graphs.

use alloc::format;
use alloc::vec::Vec;

#[allow(unused_imports)] // unused when std is in the dependency graph
use num_traits::Float;
use rand::Rng;

use crate::error::{Error, Result};
use crate::group::{
    in_domain_sequence, BlockElement, Carrier, DiagonalGroup, EmbeddedCornerGroup, GeometricSequence,
    ImplementedGroup, OneParameterGroup, Sequence, StarAlgebra,
};
use crate::linalg::{nullspace, orthonormal_basis, projection_residual, subspace_equal_vectors, subspace_intersection, CMatrix};
use crate::report::Report;
use crate::tolerance::Tolerances;
use crate::C64;

/// Relative tolerance of the graph membership test.
pub const MEMBERSHIP_TOL: f64 = 1e-8;

/// The exponent of the natural involution.
pub const MINUS_I: C64 = C64::new(0.0, -1.0);

fn relative_gap<E: Carrier>(computed: &E, claimed: &E) -> f64 {
    let diff = computed.distance(claimed);
    if diff == 0.0 {
        return 0.0;
    }
    diff / computed.norm().max(claimed.norm()).max(f64::MIN_POSITIVE)
}

/// `‖b - α_z a‖ / max(‖α_z a‖, ‖b‖)`.
pub fn membership_residual<G: OneParameterGroup>(group: &G, z: C64, a: &G::Element, b: &G::Element) -> Result<f64> {
    group.check_shape(b)?;
    Ok(relative_gap(&group.continue_to(z, a)?, b))
}

/// A pair `(a, b)` with `b = α_z(a)`, verified on construction.
#[derive(Debug, Clone, PartialEq)]
pub struct GraphElement<E> {
    first: E,
    second: E,
    z: C64,
}

impl<E: Carrier> GraphElement<E> {
    pub fn new<G: OneParameterGroup<Element = E>>(group: &G, z: C64, first: E, second: E) -> Result<Self> {
        let residual = membership_residual(group, z, &first, &second)?;
        if !(residual <= MEMBERSHIP_TOL) {
            return Err(Error::NotInGraph { residual });
        }
        Ok(Self { first, second, z })
    }

    /// `(a, α_z a)`.
    pub fn from_first<G: OneParameterGroup<Element = E>>(group: &G, z: C64, first: E) -> Result<Self> {
        let second = group.continue_to(z, &first)?;
        Ok(Self { first, second, z })
    }

    pub fn first(&self) -> &E {
        &self.first
    }

    pub fn second(&self) -> &E {
        &self.second
    }

    pub fn z(&self) -> C64 {
        self.z
    }
}

/// `(a₁a₂, b₁b₂)`; the result passes the membership test, so the graph of
/// an automorphism group is closed under products.
pub fn graph_product<G>(group: &G, g1: &GraphElement<G::Element>, g2: &GraphElement<G::Element>) -> Result<GraphElement<G::Element>>
where
    G: OneParameterGroup,
    G::Element: StarAlgebra,
{
    if !group.is_automorphism() {
        return Err(Error::IsometryOnlyCarrier);
    }
    if g1.z != g2.z {
        return Err(Error::InvalidParameter("graph elements for different exponents"));
    }
    GraphElement::new(group, g1.z, g1.first.product(&g2.first), g1.second.product(&g2.second))
}

/// `(a, b) ↦ (b*, a*)` on `G(α_{-i})`.
pub fn natural_involution<G>(group: &G, g: &GraphElement<G::Element>) -> Result<GraphElement<G::Element>>
where
    G: OneParameterGroup,
    G::Element: StarAlgebra,
{
    if g.z != MINUS_I {
        return Err(Error::WrongExponent);
    }
    let out = GraphElement::new(group, g.z, g.second.star(), g.first.star())?;
    let back_first = out.second.star();
    let back_second = out.first.star();
    let defect = relative_gap(&g.first, &back_first).max(relative_gap(&g.second, &back_second));
    if defect > 1e-10 {
        return Err(Error::NotInGraph { residual: defect });
    }
    Ok(out)
}

/// Groups indices whose values agree within `tol` (input order kept).
fn value_clusters(values: &[f64], tol: f64) -> Vec<Vec<usize>> {
    let mut out: Vec<(f64, Vec<usize>)> = Vec::new();
    for (i, &v) in values.iter().enumerate() {
        match out.iter_mut().find(|(c, _)| (c - v).abs() <= tol) {
            Some((_, members)) => members.push(i),
            None => out.push((v, alloc::vec![i])),
        }
    }
    out.into_iter().map(|(_, m)| m).collect()
}

/// Basis of the fixed-point algebra `{x : α_t(x) = x ∀t}`, the commutant of
/// `P`, built from its eigenspaces. Each `(x, x)` is checked to lie in the
/// graph of `α_{-i}` and to be fixed by the natural involution.
pub fn selfadjoint_part(group: &ImplementedGroup) -> Result<Vec<CMatrix>> {
    let p = group.positive();
    let v = p.vectors();
    let d = p.dim();
    let logs = p.log_eigenvalues();
    let scale = logs.iter().map(|l| l.abs()).fold(1.0, f64::max);
    let mut out = Vec::new();
    for cluster in value_clusters(logs, 1e-9 * scale) {
        for &j in &cluster {
            for &k in &cluster {
                // V e_jk V* = v_j v_k^*
                out.push(CMatrix::from_fn(d, d, |r, c| v[(r, j)] * v[(c, k)].conj()));
            }
        }
    }
    for x in &out {
        // (h, h) needs h = h*, so test the Hermitian and skew parts.
        for h in [x + &x.adjoint(), (x - &x.adjoint()).scale(C64::new(0.0, 1.0))] {
            let g = GraphElement::new(group, MINUS_I, h.clone(), h.clone())?;
            let s = natural_involution(group, &g)?;
            let defect = relative_gap(&h, &s.first).max(relative_gap(&h, &s.second));
            if defect > 1e-10 {
                return Err(Error::NotInGraph { residual: defect });
            }
        }
    }
    Ok(out)
}

fn pair_coords(a: &CMatrix, b: &CMatrix) -> Vec<C64> {
    let mut v = a.to_vec();
    v.extend(b.to_vec());
    v
}

/// The two finite-dimensional identities about `𝒜 = G(α_{-i})` and
/// `𝒜* = {(a*, b*) : (a, b) ∈ 𝒜}`: `𝒜 ∩ 𝒜* = {(x, x) : x invariant}` and
/// `𝒜 + 𝒜* = {(x, y) : x - y ∈ span{v - α_t v}}`.
pub fn selfadjoint_structure_check(group: &ImplementedGroup, tol: &Tolerances) -> Result<Report> {
    let basis = group.basis();
    let graph: Vec<Vec<C64>> =
        basis.iter().map(|e| Ok(pair_coords(e, &group.continue_to(MINUS_I, e)?))).collect::<Result<_>>()?;
    let starred: Vec<Vec<C64>> = basis
        .iter()
        .map(|e| Ok(pair_coords(&e.adjoint(), &group.continue_to(MINUS_I, e)?.adjoint())))
        .collect::<Result<_>>()?;
    let fixed = selfadjoint_part(group)?;
    let diagonal: Vec<Vec<C64>> = fixed.iter().map(|x| pair_coords(x, x)).collect();
    let cap = subspace_intersection(&graph, &starred, tol.rank);
    let cap_ok = subspace_equal_vectors(&cap, &diagonal, tol.invariance)?;

    let mut moved = Vec::new();
    for t in [1.0, core::f64::consts::SQRT_2, core::f64::consts::PI / 3f64.sqrt()] {
        for e in &basis {
            moved.push(e - &group.apply(t, e)?);
        }
    }
    let zero = group.zero();
    let mut target: Vec<Vec<C64>> = basis.iter().map(|e| pair_coords(e, e)).collect();
    target.extend(moved.iter().map(|w| pair_coords(w, &zero)));
    let mut sum = graph.clone();
    sum.extend(starred);
    let sum_ok = subspace_equal_vectors(&sum, &target, tol.invariance)?;

    let d = group.dim();
    Ok(Report::boolean("selfadjoint_structure", "graph-selfadjoint-part", format!("d={d}"), cap_ok && sum_ok)
        .with_values(alloc::vec![cap.len() as f64, fixed.len() as f64, orthonormal_basis(&sum, tol.rank).len() as f64]))
}

/// Matrix units `e_{jk}` whose orbit `α_{in}(e_{jk})` stays bounded in the
/// sense `limsup ‖α_{in}(e_{jk})‖^{1/n} <= 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralSubspace {
    pub dim: usize,
    /// `(j, k)` index pairs, zero based.
    pub units: Vec<(usize, usize)>,
    /// `p_k / p_j` for each unit.
    pub ratios: Vec<f64>,
}

impl SpectralSubspace {
    pub fn contains(&self, j: usize, k: usize) -> bool {
        self.units.contains(&(j, k))
    }

    pub fn matrices(&self) -> Vec<CMatrix> {
        self.units.iter().map(|&(j, k)| CMatrix::unit(self.dim, j, k)).collect()
    }
}

/// `H∞(α)` for `P` diagonal in the standard basis: `e_{jk}` belongs iff
/// `p_k/p_j <= 1`. The root test `‖α_{in}(e_{jk})‖^{1/n} = p_k/p_j` is
/// confirmed for `n = 1..12`.
pub fn hinfty_basis(group: &ImplementedGroup) -> Result<SpectralSubspace> {
    let log_p = group.positive().log();
    let d = log_p.rows();
    let scale = log_p.max_abs().max(1.0);
    let off = (0..d).flat_map(|j| (0..d).filter(move |&k| k != j).map(move |k| (j, k))).map(|(j, k)| log_p[(j, k)].norm()).fold(0.0, f64::max);
    if off > 1e-12 * scale {
        return Err(Error::NotDiagonal);
    }
    let l: Vec<f64> = (0..d).map(|j| log_p[(j, j)].re).collect();
    let mut units = Vec::new();
    let mut ratios = Vec::new();
    for j in 0..d {
        for k in 0..d {
            let log_ratio = l[k] - l[j];
            let e = CMatrix::unit(d, j, k);
            for n in 1..=12 {
                let norm = group.continue_to(C64::new(0.0, n as f64), &e)?.op_norm();
                let root = norm.ln() / n as f64;
                if (root - log_ratio).abs() > 1e-9 * (1.0 + log_ratio.abs()) {
                    return Err(Error::NotInvariant { residual: (root - log_ratio).abs() });
                }
            }
            let ratio = log_ratio.exp();
            if ratio <= 1.0 + 1e-12 {
                units.push((j, k));
                ratios.push(ratio);
            }
        }
    }
    Ok(SpectralSubspace { dim: d, units, ratios })
}

/// One row of [`kaplansky_truncation`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncationStep {
    pub cutoff: usize,
    pub norm: f64,
    pub continued_norm: f64,
    /// Largest entry difference to the untruncated element.
    pub entry_gap: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TruncationReport {
    pub steps: Vec<TruncationStep>,
    pub in_ball: bool,
    pub finitely_supported: bool,
    pub converges: bool,
}

impl TruncationReport {
    pub fn passed(&self) -> bool {
        self.in_ball && self.finitely_supported && self.converges
    }

    pub fn report(&self) -> Report {
        let worst = self.steps.iter().map(|s| s.norm.max(s.continued_norm)).fold(0.0, f64::max);
        Report::boolean("kaplansky_truncation", "graph-unit-ball-density", format!("cutoffs={}", self.steps.len()), self.passed())
            .with_values(alloc::vec![worst])
    }
}

/// Truncates `X` in the unit ball of `G(τ_{-i})` to its first `k` entries
/// for each cutoff, and records that the truncations stay in the ball and
/// converge entrywise to `X`.
pub fn kaplansky_truncation(
    corner: &EmbeddedCornerGroup,
    x: &BlockElement,
    cutoffs: &[usize],
    tol: &Tolerances,
) -> Result<TruncationReport> {
    let graph_norm = |e: &BlockElement| -> Result<(f64, f64)> { Ok((e.norm(), corner.continue_to(MINUS_I, e)?.norm())) };
    let (n0, c0) = graph_norm(x)?;
    if n0.max(c0) > 1.0 + tol.truncation {
        return Err(Error::NotInUnitBall { norm: n0.max(c0) });
    }
    let len = x.len();
    let mut steps = Vec::new();
    let (mut in_ball, mut finitely_supported, mut converges) = (true, true, true);
    for &k in cutoffs {
        let xk = x.truncated(k);
        let (norm, continued_norm) = graph_norm(&xk)?;
        in_ball &= norm.max(continued_norm) <= 1.0 + tol.truncation;
        let coords = xk.coords();
        let orig = x.coords();
        for block in 0..4 {
            for i in 0..len {
                let (a, b) = (coords[block * len + i], orig[block * len + i]);
                if i < k {
                    converges &= a == b;
                } else {
                    finitely_supported &= a == C64::new(0.0, 0.0);
                }
            }
        }
        steps.push(TruncationStep { cutoff: k, norm, continued_norm, entry_gap: xk.max_entry_diff(x) });
    }
    Ok(TruncationReport { steps, in_ball, finitely_supported, converges })
}

/// Carriers with a nondegenerate bilinear pairing `⟨μ, x⟩` (sum or trace)
/// and the adjoint group `⟨α_t* μ, x⟩ = ⟨μ, α_t x⟩`.
pub trait DualPairing: OneParameterGroup {
    /// `π(x)` with `⟨μ, x⟩ = Σ_i μ_i π(x)_i` in model coordinates.
    fn pairing_coords(&self, x: &Self::Element) -> Vec<C64>;

    /// `α_z*` on the dual, by spectral calculus of the adjoint group.
    fn dual_continue_to(&self, z: C64, mu: &Self::Element) -> Result<Self::Element>;
}

impl DualPairing for DiagonalGroup {
    fn pairing_coords(&self, x: &Sequence) -> Vec<C64> {
        x.0.clone()
    }

    fn dual_continue_to(&self, z: C64, mu: &Sequence) -> Result<Sequence> {
        self.spectral_map(mu, |w| (C64::new(0.0, w) * z).exp())
    }
}

impl DualPairing for ImplementedGroup {
    /// `tr(μx)`.
    fn pairing_coords(&self, x: &CMatrix) -> Vec<C64> {
        x.transpose().into_vec()
    }

    fn dual_continue_to(&self, z: C64, mu: &CMatrix) -> Result<CMatrix> {
        self.spectral_map(mu, |w| (C64::new(0.0, -w) * z).exp())
    }
}

impl DualPairing for EmbeddedCornerGroup {
    /// Entrywise trace pairing of the 2x2 blocks: `b` pairs with `c`.
    fn pairing_coords(&self, x: &BlockElement) -> Vec<C64> {
        let mut v = x.a.clone();
        v.extend_from_slice(&x.c);
        v.extend_from_slice(&x.b);
        v.extend_from_slice(&x.d);
        v
    }

    fn dual_continue_to(&self, z: C64, mu: &BlockElement) -> Result<BlockElement> {
        self.spectral_map(mu, |w| (C64::new(0.0, -w) * z).exp())
    }
}

/// Compares two constructions of the graph of the dual generator at `z`:
/// the spectral one `{(μ, α*_z μ)}` and the annihilator
/// `(jG(α_z))^⊥` with `j(x, y) = (-y, x)`.
pub fn dual_generator_check<G: DualPairing>(group: &G, z: C64, tol: &Tolerances) -> Result<Report> {
    let basis = group.basis();
    let dim = basis.len();
    if dim > 16 {
        return Err(Error::InvalidParameter("dual generator check needs carrier dimension <= 16"));
    }
    let spectral: Vec<Vec<C64>> = basis
        .iter()
        .map(|mu| {
            let mut v = mu.coords();
            v.extend(group.dual_continue_to(z, mu)?.coords());
            Ok(v)
        })
        .collect::<Result<_>>()?;
    // (μ, ν) annihilates (-α_z x, x) iff -⟨μ, α_z x⟩ + ⟨ν, x⟩ = 0.
    let mut rows = Vec::with_capacity(2 * dim * dim);
    for x in &basis {
        let tx = group.continue_to(z, x)?;
        rows.extend(group.pairing_coords(&tx).into_iter().map(|c| -c));
        rows.extend(group.pairing_coords(x));
    }
    let m = CMatrix::new(dim, 2 * dim, rows)?;
    let annihilator = nullspace(&m, tol.rank);
    let equal = subspace_equal_vectors(&spectral, &annihilator, tol.dual)?;
    let q = orthonormal_basis(&spectral, tol.rank);
    let residual = projection_residual(&q, &annihilator);
    let mut r = Report::residual("dual_generator", "dual-generator", format!("dim={dim} z={z}"), residual, tol.dual);
    r.passed &= equal;
    Ok(r.with_values(alloc::vec![q.len() as f64, annihilator.len() as f64]))
}

/// Outcome of [`graph_intersection_check`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IntersectionFlags {
    pub domain_c0: bool,
    pub domain_linf: bool,
    pub image_c0: bool,
    pub image_linf: bool,
    pub sequence_c0: bool,
}

impl IntersectionFlags {
    /// `x ∈ D(α^A)` iff `x ∈ D(α^M)` with `x, α_z x ∈ A`.
    pub fn consistent(&self) -> bool {
        self.domain_c0 == (self.domain_linf && self.sequence_c0 && self.image_c0)
    }

    /// `x ∈ A ∩ D(α^M_z)` but `x ∉ D(α^A_z)`.
    pub fn strict_gap(&self) -> bool {
        self.sequence_c0 && self.domain_linf && !self.domain_c0
    }
}

/// The graph of the `c₀` model is the part of the `ℓ∞` graph with both
/// legs in `c₀`. Also compares the symbolic image with the corner action on
/// the truncation carried by `corner`.
pub fn graph_intersection_check(
    corner: &EmbeddedCornerGroup,
    seq: &GeometricSequence,
    z: C64,
) -> Result<(IntersectionFlags, Report)> {
    let m = in_domain_sequence(seq, corner.inner(), z)?;
    let image = seq.continued(z)?;
    let flags = IntersectionFlags {
        domain_c0: m.c0,
        domain_linf: m.linf,
        image_c0: image.vanishes_at_infinity(),
        image_linf: image.is_bounded(),
        sequence_c0: seq.vanishes_at_infinity(),
    };
    let n = corner.len();
    let x = corner.b_corner(seq.truncate(n).0)?;
    let moved = corner.continue_to(z, &x)?;
    let expected = image.truncate(n);
    let residual = moved.b.iter().zip(&expected.0).map(|(a, b)| (a - b).norm() / b.norm().max(1.0)).fold(0.0, f64::max);
    let report = Report::boolean("graph_intersection", "graph-intersection", format!("{seq:?} z={z}"), flags.consistent() && residual <= 1e-12)
        .with_values(alloc::vec![
            flags.domain_c0 as u8 as f64,
            flags.domain_linf as u8 as f64,
            flags.image_c0 as u8 as f64,
            flags.image_linf as u8 as f64,
            flags.strict_gap() as u8 as f64,
        ]);
    Ok((flags, report))
}

/// All maps `θ : M_{dA} → M_{dB}` with `θ ∘ α_{-i} = β_{-i} ∘ θ`, as
/// `dB² x dA²` matrices acting on row-major vectorizations.
pub fn intertwiner_space(ga: &ImplementedGroup, gb: &ImplementedGroup, tol: &Tolerances) -> Result<Vec<CMatrix>> {
    let (da, db) = (ga.dim(), gb.dim());
    if da > 4 || db > 4 {
        return Err(Error::InvalidParameter("intertwiner space needs d <= 4"));
    }
    let sa = ga.superoperator(MINUS_I);
    let sb = gb.superoperator(MINUS_I);
    let (rows, cols) = (db * db, da * da);
    // vec(ΘS_A) = (I ⊗ S_Aᵀ) vec Θ and vec(S_B Θ) = (S_B ⊗ I) vec Θ.
    let lhs = CMatrix::identity(rows).kron(&sa.transpose());
    let rhs = sb.kron(&CMatrix::identity(cols));
    let kernel = nullspace(&(&lhs - &rhs), tol.rank);
    kernel.into_iter().map(|v| CMatrix::new(rows, cols, v)).collect()
}

fn apply_map(theta: &CMatrix, x: &CMatrix, out_dim: usize) -> Result<CMatrix> {
    CMatrix::new(out_dim, out_dim, theta * x.as_slice())
}

/// Samples random elements of the intertwiner space and checks
/// `θ(α_t x) = β_t(θ x)` for every listed `t` and matrix unit `x`.
pub fn tensor_uniqueness_check(
    ga: &ImplementedGroup,
    gb: &ImplementedGroup,
    samples: usize,
    t_values: &[f64],
    rng: &mut impl Rng,
    tol: &Tolerances,
) -> Result<Report> {
    let space = intertwiner_space(ga, gb, tol)?;
    let inputs = format!("dA={} dB={} samples={samples}", ga.dim(), gb.dim());
    if space.is_empty() {
        return Ok(Report::boolean("tensor_uniqueness", "intertwiner-uniqueness", inputs, true)
            .with_note("empty intertwiner space"));
    }
    let db = gb.dim();
    let mut worst: f64 = 0.0;
    for _ in 0..samples {
        let mut theta = CMatrix::zeros(db * db, ga.dim() * ga.dim());
        for n in &space {
            theta.axpy(crate::sample::complex(rng), n);
        }
        let scale = theta.frobenius_norm();
        if scale > 0.0 {
            theta = theta.scale(C64::new(1.0 / scale, 0.0));
        }
        for &t in t_values {
            for x in ga.basis() {
                let lhs = apply_map(&theta, &ga.apply(t, &x)?, db)?;
                let rhs = gb.apply(t, &apply_map(&theta, &x, db)?)?;
                worst = worst.max(lhs.dist(&rhs));
            }
        }
    }
    Ok(Report::residual("tensor_uniqueness", "intertwiner-uniqueness", inputs, worst, tol.intertwine)
        .with_values(alloc::vec![space.len() as f64]))
}
