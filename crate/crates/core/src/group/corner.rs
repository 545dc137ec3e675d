use alloc::format;
use alloc::vec::Vec;

use super::{BlockElement, Carrier, DiagonalGroup, OneParameterGroup};
use crate::error::{Error, Result};
use crate::C64;

/// The diagonal group embedded in the automorphism group
/// `τ_t(X) = u_t X u_{-t}` with `u_t = diag(P^{it}, 1)` acting on 2x2 block
/// elements over the sequence model.
///
/// The diagonal blocks are fixed, `b ↦ P^{it} b` and `c ↦ c P^{-it}`.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddedCornerGroup {
    inner: DiagonalGroup,
}

/// Wraps a diagonal group in its corner embedding.
pub fn build_corner(group: DiagonalGroup) -> EmbeddedCornerGroup {
    EmbeddedCornerGroup { inner: group }
}

impl EmbeddedCornerGroup {
    pub fn new(inner: DiagonalGroup) -> Self {
        build_corner(inner)
    }

    pub fn inner(&self) -> &DiagonalGroup {
        &self.inner
    }

    pub fn len(&self) -> usize {
        self.inner.carrier_size()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Element with only the `b` corner set.
    pub fn b_corner(&self, b: Vec<C64>) -> Result<BlockElement> {
        let z = alloc::vec![C64::new(0.0, 0.0); self.len()];
        let e = BlockElement::new(z.clone(), b, z.clone(), z)?;
        self.check_shape(&e)?;
        Ok(e)
    }

    fn map(&self, x: &BlockElement, f: impl Fn(f64) -> C64) -> Result<BlockElement> {
        self.check_shape(x)?;
        let mut out = x.clone();
        for (k, &l) in self.inner.exponents().iter().enumerate() {
            out.b[k] *= f(l);
            out.c[k] *= f(-l);
        }
        Ok(out)
    }
}

impl OneParameterGroup for EmbeddedCornerGroup {
    type Element = BlockElement;

    fn apply(&self, t: f64, x: &BlockElement) -> Result<BlockElement> {
        self.map(x, |l| C64::new(0.0, l * t).exp())
    }

    fn continue_to(&self, z: C64, x: &BlockElement) -> Result<BlockElement> {
        self.map(x, |l| (C64::new(0.0, l) * z).exp())
    }

    fn spectral_map(&self, x: &BlockElement, f: impl Fn(f64) -> C64) -> Result<BlockElement> {
        self.check_shape(x)?;
        let one = f(0.0);
        let mut out = self.map(x, &f)?;
        for v in out.a.iter_mut().chain(out.d.iter_mut()) {
            *v *= one;
        }
        Ok(out)
    }

    fn is_automorphism(&self) -> bool {
        true
    }

    fn check_shape(&self, x: &BlockElement) -> Result<()> {
        if x.len() != self.len() {
            return Err(Error::ShapeMismatch {
                expected: format!("2x2 block element of length {}", self.len()),
                found: x.shape_label(),
            });
        }
        Ok(())
    }

    fn zero(&self) -> BlockElement {
        BlockElement::zeros(self.len())
    }

    fn basis(&self) -> Vec<BlockElement> {
        let n = self.len();
        let z = self.zero();
        (0..4 * n)
            .map(|i| {
                let mut c = alloc::vec![C64::new(0.0, 0.0); 4 * n];
                c[i] = C64::new(1.0, 0.0);
                z.with_coords(&c)
            })
            .collect()
    }

    fn bandwidth(&self) -> f64 {
        self.inner.bandwidth()
    }

    fn frequencies(&self) -> Vec<f64> {
        let n = self.len();
        let ex = self.inner.exponents();
        let mut out = alloc::vec![0.0; n];
        out.extend_from_slice(ex);
        out.extend(ex.iter().map(|l| -l));
        out.extend(core::iter::repeat(0.0).take(n));
        out
    }
}
