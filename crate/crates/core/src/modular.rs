//! Modular theory of a faithful state `φ = tr(ρ ·)` on `M_d`.
//!
//! Conventions: `Λ(x) = x ρ^{1/2}` with `⟨a, b⟩ = tr(a* b)`,
//! `Δ(y) = ρ y ρ^{-1}`, `J(y) = y*`, so that `S = J Δ^{1/2}` maps `Λ(x)` to
//! `Λ(x*)`. Superoperators act on row-major `vec(y)`, where
//! `vec(A Y B) = (A ⊗ Bᵀ) vec(Y)`.
//!
//! Markov maps are inclusions `Φ : D → M_d` of block-diagonal subalgebras
//! whose blocks are compatible with `ρ`.

use alloc::format;
use alloc::vec::Vec;

use rand::Rng;

use crate::error::{Error, Result};
use crate::group::{ImplementedGroup, OneParameterGroup};
use crate::linalg::{eig_hermitian, CMatrix, PositiveMatrix};
use crate::report::Report;
use crate::tolerance::Tolerances;
use crate::C64;

const ZERO: C64 = C64::new(0.0, 0.0);

/// Faithfulness floor on the smallest eigenvalue of `ρ`.
pub const FAITHFUL_FLOOR: f64 = 1e-8;

/// A density matrix with unit trace and spectrum bounded below by
/// [`FAITHFUL_FLOOR`].
#[derive(Debug, Clone, PartialEq)]
pub struct FaithfulState {
    rho: CMatrix,
    density: PositiveMatrix,
}

impl FaithfulState {
    pub fn new(rho: &CMatrix) -> Result<Self> {
        let trace = rho.trace();
        if (trace.re - 1.0).abs() > 1e-10 || trace.im.abs() > 1e-10 {
            return Err(Error::NotAState { trace: trace.re });
        }
        let eig = eig_hermitian(rho)?;
        let min = eig.eigenvalues().iter().copied().fold(f64::INFINITY, f64::min);
        if !(min >= FAITHFUL_FLOOR) {
            return Err(Error::NotFaithful { min_eigenvalue: min });
        }
        let density = PositiveMatrix::new(rho)?;
        Ok(Self { rho: rho.hermitian_part(), density })
    }

    /// `U diag(p) U*`, with `p` normalized to unit sum.
    pub fn from_spectrum(eigenvalues: &[f64], unitary: Option<&CMatrix>) -> Result<Self> {
        let total: f64 = eigenvalues.iter().sum();
        if !(total > 0.0) {
            return Err(Error::NotAState { trace: total });
        }
        let diag = CMatrix::from_real_diag(&eigenvalues.iter().map(|p| p / total).collect::<Vec<_>>());
        let rho = match unitary {
            Some(u) => (&(u * &diag) * &u.adjoint()).hermitian_part(),
            None => diag,
        };
        Self::new(&rho)
    }

    pub fn dim(&self) -> usize {
        self.rho.rows()
    }

    pub fn rho(&self) -> &CMatrix {
        &self.rho
    }

    pub fn density(&self) -> &PositiveMatrix {
        &self.density
    }

    /// `φ(x) = tr(ρx)`.
    pub fn expectation(&self, x: &CMatrix) -> C64 {
        (&self.rho * x).trace()
    }
}

/// The GNS data of a [`FaithfulState`], with invariants checked at build.
#[derive(Debug, Clone)]
pub struct ModularData {
    state: FaithfulState,
    rho_half: CMatrix,
    rho_inv: CMatrix,
    delta: CMatrix,
    sigma: ImplementedGroup,
}

/// Builds [`ModularData`] and asserts `S Λ(x) = Λ(x*)` on matrix units,
/// positivity of `Δ` and antiunitarity of `J`.
pub fn build_modular(state: FaithfulState) -> Result<ModularData> {
    let p = state.density();
    let rho_half = p.power(C64::new(0.5, 0.0));
    let rho_inv = p.inverse();
    let delta = state.rho().kron(&rho_inv.transpose());
    let sigma = ImplementedGroup::modular(state.rho())?;
    let md = ModularData { state, rho_half, rho_inv, delta, sigma };

    let d = md.dim();
    let tol = 1e-9;
    for x in md.sigma.basis() {
        let defect = md.s(&md.lambda(&x)).dist(&md.lambda(&x.adjoint()));
        if defect > tol {
            return Err(Error::NotInvariant { residual: defect });
        }
    }
    let spectrum = crate::linalg::eig_hermitian_with(&md.delta, 1e-9)?;
    let min = spectrum.eigenvalues()[0];
    if !(min > 0.0) {
        return Err(Error::NotPositive { min_eigenvalue: min });
    }
    let units = md.sigma.basis();
    for a in units.iter().take(d + 1) {
        for b in &units {
            let lhs = gns_inner(&md.j(a), &md.j(b));
            let rhs = gns_inner(a, b).conj();
            if (lhs - rhs).norm() > tol {
                return Err(Error::NotInvariant { residual: (lhs - rhs).norm() });
            }
        }
    }
    Ok(md)
}

/// `⟨a, b⟩ = tr(a* b)`.
pub fn gns_inner(a: &CMatrix, b: &CMatrix) -> C64 {
    a.as_slice().iter().zip(b.as_slice()).map(|(x, y)| x.conj() * y).sum()
}

impl ModularData {
    pub fn state(&self) -> &FaithfulState {
        &self.state
    }

    pub fn dim(&self) -> usize {
        self.state.dim()
    }

    /// `σ_t(x) = ρ^{it} x ρ^{-it}`.
    pub fn sigma(&self) -> &ImplementedGroup {
        &self.sigma
    }

    /// Matrix of `Δ` on row-major `vec`.
    pub fn delta_matrix(&self) -> &CMatrix {
        &self.delta
    }

    /// Matrix of `Δ^w`.
    pub fn delta_power_matrix(&self, w: C64) -> CMatrix {
        let p = self.state.density();
        p.power(w).kron(&p.power(-w).transpose())
    }

    /// `Δ^w(y) = ρ^w y ρ^{-w}`.
    pub fn delta_power(&self, w: C64, y: &CMatrix) -> CMatrix {
        let p = self.state.density();
        &(&p.power(w) * y) * &p.power(-w)
    }

    pub fn delta(&self, y: &CMatrix) -> CMatrix {
        &(self.state.rho() * y) * &self.rho_inv
    }

    pub fn lambda(&self, x: &CMatrix) -> CMatrix {
        x * &self.rho_half
    }

    pub fn j(&self, y: &CMatrix) -> CMatrix {
        y.adjoint()
    }

    /// `S = J Δ^{1/2}`.
    pub fn s(&self, y: &CMatrix) -> CMatrix {
        self.j(&self.delta_power(C64::new(0.5, 0.0), y))
    }

    /// `max ‖S²ξ - ξ‖` over matrix units.
    pub fn s_squared_defect(&self) -> f64 {
        self.sigma.basis().iter().map(|e| self.s(&self.s(e)).dist(e)).fold(0.0, f64::max)
    }

    /// Sorted eigenvalues of the `Δ` matrix against sorted ratios
    /// `ρ_j/ρ_k`, relative to the largest ratio.
    pub fn delta_spectrum_defect(&self) -> Result<f64> {
        let eig = crate::linalg::eig_hermitian_with(&self.delta, 1e-9)?;
        let p = self.state.density().eigenvalues();
        let mut ratios: Vec<f64> = p.iter().flat_map(|a| p.iter().map(move |b| a / b)).collect();
        ratios.sort_by(f64::total_cmp);
        let scale = ratios.last().copied().unwrap_or(1.0);
        Ok(eig.eigenvalues().iter().zip(&ratios).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max) / scale)
    }

    /// `|φ(σ_t x) - φ(x)|`.
    pub fn invariance_defect(&self, t: f64, x: &CMatrix) -> Result<f64> {
        Ok((self.state.expectation(&self.sigma.apply(t, x)?) - self.state.expectation(x)).norm())
    }

    /// `σ_{-i}(a) = ρ a ρ^{-1}`.
    pub fn sigma_minus_i(&self, a: &CMatrix) -> CMatrix {
        self.delta(a)
    }

    /// Structural checks: `S² = 1`, spectrum of `Δ`, invariance of `φ` on
    /// the matrix units at a few times.
    pub fn report(&self, tol: &Tolerances) -> Result<Report> {
        let s2 = self.s_squared_defect();
        let spec = self.delta_spectrum_defect()?;
        let mut inv: f64 = 0.0;
        for t in [0.4, -1.7, 3.1] {
            for x in self.sigma.basis() {
                inv = inv.max(self.invariance_defect(t, &x)?);
            }
        }
        let d = self.dim();
        Ok(Report::residual("modular_structure", "modular-data", format!("d={d}"), s2.max(spec), tol.kms)
            .and(&Report::residual("state_invariance", "modular-data", format!("d={d}"), inv, 1e-10))
            .with_values(alloc::vec![s2, spec, inv])
            .with_note("the Tomita algebra is all of M_d in finite dimensions"))
    }
}

/// Outcome of [`verify_kms`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KmsOutcome {
    pub holds: bool,
    /// `max_x |tr(ρax) - tr(ρxb)|` over matrix units `x`.
    pub residual: f64,
    /// `‖b - ρaρ^{-1}‖`.
    pub sigma_residual: f64,
    /// Whether the trace test and the comparison with `σ_{-i}(a)` agree.
    pub consistent: bool,
}

/// Tests `φ(ax) = φ(xb)` on all matrix units `x` (to `1e-9 ‖a‖ ‖ρ‖`) and
/// compares with `b = σ_{-i}(a)`.
pub fn verify_kms(md: &ModularData, a: &CMatrix, b: &CMatrix, tol: &Tolerances) -> Result<KmsOutcome> {
    let d = md.dim();
    if a.shape() != (d, d) || b.shape() != (d, d) {
        return Err(Error::ShapeMismatch { expected: format!("{d}x{d}"), found: format!("{}x{}", b.rows(), b.cols()) });
    }
    let rho = md.state.rho();
    let mut residual: f64 = 0.0;
    for x in md.sigma.basis() {
        let lhs = md.state.expectation(&(a * &x));
        let rhs = md.state.expectation(&(&x * b));
        residual = residual.max((lhs - rhs).norm());
    }
    let bound = tol.kms * a.op_norm().max(f64::MIN_POSITIVE) * rho.op_norm();
    let holds = residual <= bound;
    let target = md.sigma_minus_i(a);
    let sigma_residual = b.dist(&target);
    let consistent = holds == (sigma_residual <= tol.kms * target.op_norm().max(a.op_norm()).max(f64::MIN_POSITIVE));
    Ok(KmsOutcome { holds, residual, sigma_residual, consistent })
}

/// An inclusion `Φ : D → M_d` of a block-diagonal subalgebra together with
/// the GNS map `T Λ_N(x) = Λ_M(Φ(x))`.
#[derive(Debug, Clone)]
pub struct MarkovSetup {
    ambient: ModularData,
    blocks: Vec<usize>,
    offsets: Vec<usize>,
    /// `ρ_N`, one positive block per summand of `D`.
    restricted: Vec<PositiveMatrix>,
    /// `d² x dim D` matrix of `T`.
    t: CMatrix,
}

/// Builds the inclusion for `blocks` (summing to `d`). `T` is assembled as
/// `R_N` (right multiplication by `ρ_N^{-1/2}`, blockwise) followed by the
/// inclusion and `L_M` (right multiplication by `ρ^{1/2}`).
pub fn build_markov(ambient: FaithfulState, blocks: &[usize], tol: &Tolerances) -> Result<MarkovSetup> {
    let d = ambient.dim();
    if blocks.iter().sum::<usize>() != d || blocks.contains(&0) {
        return Err(Error::ShapeMismatch { expected: format!("block sizes summing to {d}"), found: format!("{blocks:?}") });
    }
    let mut offsets = Vec::with_capacity(blocks.len());
    let mut acc = 0;
    for &b in blocks {
        offsets.push(acc);
        acc += b;
    }
    let block_of = |i: usize| offsets.iter().rposition(|&o| o <= i).unwrap_or(0);
    let rho = ambient.rho().clone();
    let mut off: f64 = 0.0;
    for i in 0..d {
        for j in 0..d {
            if block_of(i) != block_of(j) {
                off = off.max(rho[(i, j)].norm());
            }
        }
    }
    if off > 1e-12 {
        return Err(Error::NotBlockCompatible { size: off });
    }
    let restricted = blocks
        .iter()
        .zip(&offsets)
        .map(|(&b, &o)| PositiveMatrix::new(&CMatrix::from_fn(b, b, |i, j| rho[(o + i, o + j)])))
        .collect::<Result<Vec<_>>>()?;
    let md = build_modular(ambient)?;
    let mut setup = MarkovSetup { ambient: md, blocks: blocks.to_vec(), offsets, restricted, t: CMatrix::zeros(0, 0) };

    let half_inv: Vec<CMatrix> = setup.restricted.iter().map(|p| p.power(C64::new(-0.5, 0.0))).collect();
    let n = setup.sub_dim();
    let mut columns = Vec::with_capacity(n);
    for unit in 0..n {
        let mut xi = alloc::vec![ZERO; n];
        xi[unit] = C64::new(1.0, 0.0);
        let x = setup.embed(&setup.blockwise(&xi, |k, m| m * &half_inv[k]));
        columns.push(setup.ambient.lambda(&x).into_vec());
    }
    setup.t = CMatrix::from_columns(&columns);

    let gram = &setup.t.adjoint() * &setup.t;
    let isometry = gram.dist(&CMatrix::identity(n));
    if isometry > 1e-9 {
        return Err(Error::NotInvariant { residual: isometry });
    }
    for t in [0.7, -0.7, 2.3, -2.3] {
        let w = C64::new(0.0, t);
        let r = setup.intertwining_residual(w);
        if r > tol.markov {
            return Err(Error::NotInvariant { residual: r });
        }
    }
    Ok(setup)
}

impl MarkovSetup {
    pub fn ambient(&self) -> &ModularData {
        &self.ambient
    }

    pub fn blocks(&self) -> &[usize] {
        &self.blocks
    }

    pub fn t_matrix(&self) -> &CMatrix {
        &self.t
    }

    /// `dim D = Σ b²`.
    pub fn sub_dim(&self) -> usize {
        self.blocks.iter().map(|b| b * b).sum()
    }

    /// Applies `f` to each block of the coordinate vector of `D`.
    fn blockwise(&self, xi: &[C64], f: impl Fn(usize, &CMatrix) -> CMatrix) -> Vec<C64> {
        let mut out = Vec::with_capacity(xi.len());
        let mut start = 0;
        for (k, &b) in self.blocks.iter().enumerate() {
            let m = CMatrix::new(b, b, xi[start..start + b * b].to_vec()).expect("block coordinates");
            out.extend(f(k, &m).into_vec());
            start += b * b;
        }
        out
    }

    /// `Φ`: block coordinates to a block-diagonal `d x d` matrix.
    pub fn embed(&self, xi: &[C64]) -> CMatrix {
        let d = self.ambient.dim();
        let mut out = CMatrix::zeros(d, d);
        let mut start = 0;
        for (&b, &o) in self.blocks.iter().zip(&self.offsets) {
            for i in 0..b {
                for j in 0..b {
                    out[(o + i, o + j)] = xi[start + i * b + j];
                }
            }
            start += b * b;
        }
        out
    }

    /// Block coordinates of the block-diagonal part of `x`.
    pub fn restrict(&self, x: &CMatrix) -> Vec<C64> {
        let mut out = Vec::with_capacity(self.sub_dim());
        for (&b, &o) in self.blocks.iter().zip(&self.offsets) {
            for i in 0..b {
                for j in 0..b {
                    out.push(x[(o + i, o + j)]);
                }
            }
        }
        out
    }

    /// Matrix of `Δ_N^w` on block coordinates.
    pub fn delta_n_power(&self, w: C64) -> CMatrix {
        let n = self.sub_dim();
        let cols: Vec<Vec<C64>> = (0..n)
            .map(|unit| {
                let mut xi = alloc::vec![ZERO; n];
                xi[unit] = C64::new(1.0, 0.0);
                self.blockwise(&xi, |k, m| &(&self.restricted[k].power(w) * m) * &self.restricted[k].power(-w))
            })
            .collect();
        CMatrix::from_columns(&cols)
    }

    /// `‖T Δ_N^w - Δ_M^w T‖ / max(‖T Δ_N^w‖, ‖Δ_M^w T‖)`.
    pub fn intertwining_residual(&self, w: C64) -> f64 {
        let lhs = &self.t * &self.delta_n_power(w);
        let rhs = &self.ambient.delta_power_matrix(w) * &self.t;
        let scale = lhs.op_norm().max(rhs.op_norm()).max(f64::MIN_POSITIVE);
        lhs.dist(&rhs) / scale
    }

    /// `J_φ T J_ρ ξ` for block coordinates `ξ`.
    pub fn jtj(&self, xi: &[C64]) -> Vec<C64> {
        let conj_xi = self.blockwise(xi, |_, m| m.adjoint());
        let v = &self.t * conj_xi.as_slice();
        let d = self.ambient.dim();
        CMatrix::new(d, d, v).expect("GNS vector").adjoint().into_vec()
    }
}

/// `‖Δ_M^{-t} T Δ_N^{t} - T‖ <= 1e-8 ‖T‖`.
pub fn verify_bcm_commutation(ms: &MarkovSetup, t: f64, tol: &Tolerances) -> Report {
    let w = C64::new(t, 0.0);
    let lhs = &(&ms.ambient.delta_power_matrix(-w) * &ms.t) * &ms.delta_n_power(w);
    let residual = lhs.dist(&ms.t) / ms.t.op_norm();
    Report::residual("bcm_commutation", "markov-commutation", format!("blocks={:?} t={t}", ms.blocks), residual, tol.markov)
}

/// `T Δ_N^z = Δ_M^z T`, relative; the tolerance loosens for `|z| > 2`.
pub fn verify_bcm_closure(ms: &MarkovSetup, z: C64, tol: &Tolerances) -> Report {
    let limit = if z.norm() > 2.0 { tol.markov_far } else { tol.markov };
    Report::residual("bcm_closure", "markov-closure", format!("blocks={:?} z={z}", ms.blocks), ms.intertwining_residual(z), limit)
}

/// `J_φ T J_ρ = T` as a real-linear map, tested on `ξ` and `iξ` for every
/// coordinate unit, together with `Φ σ^ρ_{i/2} = σ^φ_{i/2} Φ` on `D`.
pub fn verify_j_intertwine(ms: &MarkovSetup, tol: &Tolerances) -> Report {
    let n = ms.sub_dim();
    let mut residual: f64 = 0.0;
    let half = C64::new(-0.5, 0.0);
    for unit in 0..n {
        for phase in [C64::new(1.0, 0.0), C64::new(0.0, 1.0)] {
            let mut xi = alloc::vec![ZERO; n];
            xi[unit] = phase;
            let lhs = ms.jtj(&xi);
            let rhs = &ms.t * xi.as_slice();
            residual = residual.max(lhs.iter().zip(&rhs).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max));
        }
        // σ_{i/2}(x) = ρ^{-1/2} x ρ^{1/2}
        let mut xi = alloc::vec![ZERO; n];
        xi[unit] = C64::new(1.0, 0.0);
        let inner = ms.embed(&ms.blockwise(&xi, |k, m| &(&ms.restricted[k].power(half) * m) * &ms.restricted[k].power(-half)));
        let outer = ms.ambient.delta_power(half, &ms.embed(&xi));
        residual = residual.max(inner.dist(&outer) / outer.op_norm().max(1.0));
    }
    Report::residual("j_intertwine", "markov-j-intertwine", format!("blocks={:?}", ms.blocks), residual, tol.markov)
}

/// A random setup: `d ∈ {2, 3, 4}`, random blocks, random block-diagonal
/// faithful `ρ` (eigenvalues at least about `0.05/d`).
pub fn random_markov_setup(rng: &mut impl Rng, tol: &Tolerances) -> Result<MarkovSetup> {
    let d = rng.gen_range(2..=4);
    let blocks = crate::sample::blocks(d, rng);
    let rho = crate::sample::block_density(&blocks, 0.05, rng);
    build_markov(FaithfulState::new(&rho)?, &blocks, tol)
}

/// The three Markov checks at fixed sample points.
pub fn markov_suite(ms: &MarkovSetup, tol: &Tolerances) -> Vec<Report> {
    let mut out = alloc::vec![
        verify_bcm_commutation(ms, 0.0, tol),
        verify_bcm_commutation(ms, 1.5, tol),
        verify_bcm_commutation(ms, -0.8, tol),
    ];
    for z in [C64::new(0.0, -0.5), C64::new(0.7, 1.2), C64::new(3.0, 2.0)] {
        out.push(verify_bcm_closure(ms, z, tol));
    }
    out.push(verify_j_intertwine(ms, tol));
    out
}
