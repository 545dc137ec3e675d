use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;


use super::{Carrier, OneParameterGroup, Sequence};
use crate::error::{Error, Result};
use crate::C64;

/// Which infinite sequence space the truncated model stands for. The
/// truncations are the same finite vectors; the flag matters for exact
/// domain questions on [`super::GeometricSequence`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SequenceModel {
    /// Sequences vanishing at infinity, norm-continuous group.
    C0,
    /// Bounded sequences, weak*-continuous group.
    Linf,
}

/// Multiplier group `α_t(x) = (e^{iλ_k t} x_k)` on `N` coordinates.
///
/// The weights `p_k = e^{λ_k}` are stored as exponents. This is an isometry
/// group for the sup norm but not an automorphism group of the pointwise
/// product unless every `λ_k` is zero.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagonalGroup {
    exponents: Vec<f64>,
    model: SequenceModel,
}

impl DiagonalGroup {
    pub fn new(exponents: Vec<f64>, model: SequenceModel) -> Result<Self> {
        if exponents.is_empty() {
            return Err(Error::InvalidParameter("diagonal group needs at least one coordinate"));
        }
        if exponents.iter().any(|l| !l.is_finite()) {
            return Err(Error::InvalidParameter("exponents must be finite"));
        }
        Ok(Self { exponents, model })
    }

    /// `λ_k = k` for `k = 0..n`.
    pub fn integer(n: usize, model: SequenceModel) -> Result<Self> {
        Self::new((0..n).map(|k| k as f64).collect(), model)
    }

    pub fn exponents(&self) -> &[f64] {
        &self.exponents
    }

    pub fn model(&self) -> SequenceModel {
        self.model
    }

    pub fn carrier_size(&self) -> usize {
        self.exponents.len()
    }

    /// True for the model `λ_k = k` (positions counted from zero).
    pub fn is_integer_model(&self) -> bool {
        self.exponents.iter().enumerate().all(|(k, &l)| l == k as f64)
    }

    fn multiply(&self, x: &Sequence, f: impl Fn(f64) -> C64) -> Result<Sequence> {
        self.check_shape(x)?;
        Ok(Sequence(self.exponents.iter().zip(&x.0).map(|(&l, &v)| f(l) * v).collect()))
    }
}

impl OneParameterGroup for DiagonalGroup {
    type Element = Sequence;

    fn apply(&self, t: f64, x: &Sequence) -> Result<Sequence> {
        self.multiply(x, |l| C64::new(0.0, l * t).exp())
    }

    fn continue_to(&self, z: C64, x: &Sequence) -> Result<Sequence> {
        self.multiply(x, |l| (C64::new(0.0, l) * z).exp())
    }

    fn spectral_map(&self, x: &Sequence, f: impl Fn(f64) -> C64) -> Result<Sequence> {
        self.multiply(x, f)
    }

    fn is_automorphism(&self) -> bool {
        self.exponents.iter().all(|&l| l == 0.0)
    }

    fn check_shape(&self, x: &Sequence) -> Result<()> {
        if x.len() != self.carrier_size() {
            return Err(Error::ShapeMismatch {
                expected: format!("sequence of length {}", self.carrier_size()),
                found: x.shape_label(),
            });
        }
        Ok(())
    }

    fn zero(&self) -> Sequence {
        Sequence::zeros(self.carrier_size())
    }

    fn basis(&self) -> Vec<Sequence> {
        (0..self.carrier_size()).map(|k| Sequence::delta(self.carrier_size(), k)).collect()
    }

    fn bandwidth(&self) -> f64 {
        self.exponents.iter().map(|l| l.abs()).fold(0.0, f64::max)
    }

    fn frequencies(&self) -> Vec<f64> {
        self.exponents.clone()
    }
}

impl core::fmt::Display for DiagonalGroup {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        let model = match self.model {
            SequenceModel::C0 => "c0",
            SequenceModel::Linf => "linf",
        };
        let ex: Vec<String> = self.exponents.iter().map(|l| format!("{l}")).collect();
        write!(f, "diagonal[{model}; {}]", ex.join(","))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::c64;
    use crate::group::StarAlgebra;
    use core::f64::consts::PI;

    fn x4() -> Sequence {
        Sequence(alloc::vec![c64(1.0, 0.5), c64(-0.3, 0.0), c64(0.0, 2.0), c64(0.7, -0.7)])
    }

    #[test]
    fn identity_at_zero_and_periodic() {
        let g = DiagonalGroup::integer(4, SequenceModel::C0).unwrap();
        assert_eq!(g.apply(0.0, &x4()).unwrap(), x4());
        let back = g.apply(2.0 * PI, &x4()).unwrap();
        assert!(back.distance(&x4()) < 1e-14);
    }

    #[test]
    fn is_not_multiplicative() {
        let g = DiagonalGroup::integer(4, SequenceModel::C0).unwrap();
        let x = Sequence::delta(4, 1);
        let lhs = g.apply(1.0, &x.product(&x)).unwrap();
        let rhs = g.apply(1.0, &x).unwrap().product(&g.apply(1.0, &x).unwrap());
        // e^{i} versus e^{2i}
        assert!(lhs.distance(&rhs) > 0.1);
        assert!(!g.is_automorphism());
    }

    #[test]
    fn continuation_at_minus_i_multiplies_by_e_to_the_n() {
        let g = DiagonalGroup::integer(4, SequenceModel::Linf).unwrap();
        let y = g.continue_to(c64(0.0, -1.0), &x4()).unwrap();
        for (k, (a, b)) in y.0.iter().zip(&x4().0).enumerate() {
            assert!((a - b * (k as f64).exp()).norm() < 1e-13);
        }
    }

    #[test]
    fn shape_checked() {
        let g = DiagonalGroup::integer(3, SequenceModel::C0).unwrap();
        assert!(matches!(g.apply(0.1, &x4()), Err(Error::ShapeMismatch { .. })));
    }
}
