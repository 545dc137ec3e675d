use alloc::format;
use alloc::vec::Vec;

use super::{Carrier, OneParameterGroup};
use crate::error::{Error, Result};
use crate::linalg::{CMatrix, PositiveMatrix};
use crate::C64;

/// Where an inner group came from; recorded for reports only.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GroupOrigin {
    /// `P = e^H` for a given Hermitian generator.
    Generator,
    /// Modular group of a faithful state, `H = ln ρ`.
    Modular,
}

/// Inner automorphism group `τ_t(x) = P^{it} x P^{-it}` of `M_d`, with
/// `P = e^H`.
#[derive(Debug, Clone, PartialEq)]
pub struct ImplementedGroup {
    generator: CMatrix,
    p: PositiveMatrix,
    origin: GroupOrigin,
}

impl ImplementedGroup {
    /// `H` must be Hermitian.
    pub fn new(generator: CMatrix) -> Result<Self> {
        let p = PositiveMatrix::exp_of(&generator)?;
        Ok(Self { generator: generator.hermitian_part(), p, origin: GroupOrigin::Generator })
    }

    pub fn from_positive(p: PositiveMatrix, origin: GroupOrigin) -> Self {
        Self { generator: p.log(), p, origin }
    }

    /// `σ_t(x) = ρ^{it} x ρ^{-it}` for a density matrix `ρ`.
    ///
    /// `ρ` must be strictly positive with unit trace (within `1e-10`).
    pub fn modular(rho: &CMatrix) -> Result<Self> {
        let trace = rho.trace();
        if (trace.re - 1.0).abs() > 1e-10 || trace.im.abs() > 1e-10 {
            return Err(Error::NotAState { trace: trace.re });
        }
        let p = PositiveMatrix::new(rho).map_err(|e| match e {
            Error::NotPositive { .. } | Error::NotHermitian { .. } => Error::NotAState { trace: trace.re },
            other => other,
        })?;
        Ok(Self::from_positive(p, GroupOrigin::Modular))
    }

    pub fn dim(&self) -> usize {
        self.p.dim()
    }

    pub fn generator(&self) -> &CMatrix {
        &self.generator
    }

    pub fn positive(&self) -> &PositiveMatrix {
        &self.p
    }

    pub fn origin(&self) -> GroupOrigin {
        self.origin
    }

    /// `u_z = P^{iz}`.
    pub fn implementer(&self, z: C64) -> CMatrix {
        self.p.power(C64::new(0.0, 1.0) * z)
    }

    /// Matrix of `x ↦ α_z(x)` on row-major `vec(x)`.
    pub fn superoperator(&self, z: C64) -> CMatrix {
        let left = self.implementer(z);
        let right = self.implementer(-z);
        left.kron(&right.transpose())
    }
}

impl OneParameterGroup for ImplementedGroup {
    type Element = CMatrix;

    fn apply(&self, t: f64, x: &CMatrix) -> Result<CMatrix> {
        self.continue_to(C64::new(t, 0.0), x)
    }

    fn continue_to(&self, z: C64, x: &CMatrix) -> Result<CMatrix> {
        self.check_shape(x)?;
        Ok(&(&self.implementer(z) * x) * &self.implementer(-z))
    }

    /// In the eigenbasis of `H` the unit `E_{jk}` has frequency `λ_j - λ_k`.
    fn spectral_map(&self, x: &CMatrix, f: impl Fn(f64) -> C64) -> Result<CMatrix> {
        self.check_shape(x)?;
        let v = self.p.vectors();
        let l = self.p.log_eigenvalues();
        let mut y = &(&v.adjoint() * x) * v;
        for j in 0..self.dim() {
            for k in 0..self.dim() {
                y[(j, k)] *= f(l[j] - l[k]);
            }
        }
        Ok(&(v * &y) * &v.adjoint())
    }

    fn is_automorphism(&self) -> bool {
        true
    }

    fn check_shape(&self, x: &CMatrix) -> Result<()> {
        if x.shape() != (self.dim(), self.dim()) {
            return Err(Error::ShapeMismatch {
                expected: format!("{0}x{0} matrix", self.dim()),
                found: x.shape_label(),
            });
        }
        Ok(())
    }

    fn zero(&self) -> CMatrix {
        CMatrix::zeros(self.dim(), self.dim())
    }

    fn basis(&self) -> Vec<CMatrix> {
        let d = self.dim();
        (0..d * d).map(|i| CMatrix::unit(d, i / d, i % d)).collect()
    }

    fn bandwidth(&self) -> f64 {
        let l = self.p.log_eigenvalues();
        match (l.first(), l.last()) {
            (Some(a), Some(b)) => b - a,
            _ => 0.0,
        }
    }

    fn frequencies(&self) -> Vec<f64> {
        let l = self.p.log_eigenvalues();
        l.iter().flat_map(|a| l.iter().map(move |b| a - b)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::c64;
    use crate::group::StarAlgebra;
    use core::f64::consts::PI;

    #[test]
    fn quarter_period_on_e12() {
        let g = ImplementedGroup::new(CMatrix::from_real_diag(&[0.0, 1.0])).unwrap();
        let y = g.apply(PI / 2.0, &CMatrix::unit(2, 0, 1)).unwrap();
        let expected = CMatrix::unit(2, 0, 1).scale(c64(0.0, -1.0));
        assert!(y.dist(&expected) < 1e-15);
    }

    #[test]
    fn modular_group_examples() {
        let rho = CMatrix::from_real_diag(&[2.0 / 3.0, 1.0 / 3.0]);
        let g = ImplementedGroup::modular(&rho).unwrap();
        let t = 0.83;
        let y = g.apply(t, &CMatrix::unit(2, 0, 1)).unwrap();
        // (2/3)^{it} (1/3)^{-it} = 2^{it}
        let expected = CMatrix::unit(2, 0, 1).scale(c64(0.0, t * 2f64.ln()).exp());
        assert!(y.dist(&expected) < 1e-14);
        let fixed = g.apply(t, &CMatrix::unit(2, 0, 0)).unwrap();
        assert!(fixed.dist(&CMatrix::unit(2, 0, 0)) < 1e-15);

        let tracial = ImplementedGroup::modular(&CMatrix::identity(3).scale(c64(1.0 / 3.0, 0.0))).unwrap();
        let x = CMatrix::from_fn(3, 3, |i, j| c64(i as f64, j as f64 - 1.0));
        assert!(tracial.apply(5.0, &x).unwrap().dist(&x) < 1e-13);
    }

    #[test]
    fn modular_rejects_non_states() {
        assert!(matches!(
            ImplementedGroup::modular(&CMatrix::from_real_diag(&[0.5, 0.6])),
            Err(Error::NotAState { .. })
        ));
        assert!(matches!(
            ImplementedGroup::modular(&CMatrix::from_real_diag(&[1.0, 0.0])),
            Err(Error::NotAState { .. })
        ));
    }

    #[test]
    fn spectral_route_agrees_with_formula() {
        let h = CMatrix::from_fn(3, 3, |i, j| {
            if i == j { c64(i as f64 * 0.7, 0.0) } else { c64(0.2, 0.1 * (j as f64 - i as f64)) }
        });
        let g = ImplementedGroup::new(h).unwrap();
        let x = CMatrix::from_fn(3, 3, |i, j| c64((i + 2 * j) as f64 * 0.1, 0.3));
        let z = c64(0.4, -1.3);
        let direct = g.continue_to(z, &x).unwrap();
        let spectral = g.spectral_map(&x, |w| (c64(0.0, w) * z).exp()).unwrap();
        assert!(direct.dist(&spectral) < 1e-12);
        let sup = &g.superoperator(z) * x.as_slice();
        for (a, b) in sup.iter().zip(direct.as_slice()) {
            assert!((a - b).norm() < 1e-12);
        }
        // automorphism
        let y = CMatrix::from_fn(3, 3, |i, j| c64(0.5 - i as f64, j as f64));
        let lhs = g.apply(1.1, &x.product(&y)).unwrap();
        let rhs = g.apply(1.1, &x).unwrap().product(&g.apply(1.1, &y).unwrap());
        assert!(lhs.dist(&rhs) < 1e-12);
    }
}
