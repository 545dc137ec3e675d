//! One-parameter groups on finite-dimensional carriers.
//!
//! Every group here is diagonalizable: the carrier splits into spectral
//! components on which `α_t` acts by `e^{iωt}` for a real frequency `ω`.
//! [`OneParameterGroup::spectral_map`] exposes that splitting and is the
//! route used for closed forms. [`OneParameterGroup::apply`] and
//! [`OneParameterGroup::continue_to`] evaluate the defining formula of each
//! model directly (for inner groups, `P^{iz} x P^{-iz}`).

mod carrier;
mod corner;
mod diagonal;
mod implemented;
mod sequence;

pub use carrier::{BlockElement, Carrier, Sequence, StarAlgebra};
pub use corner::{build_corner, EmbeddedCornerGroup};
pub use diagonal::{DiagonalGroup, SequenceModel};
pub use implemented::{GroupOrigin, ImplementedGroup};
pub use sequence::{in_domain_sequence, DomainMembership, GeometricSequence};

use alloc::vec::Vec;

use crate::error::Result;
use crate::C64;

pub trait OneParameterGroup {
    type Element: Carrier;

    /// `α_t(x)` for real `t`.
    fn apply(&self, t: f64, x: &Self::Element) -> Result<Self::Element>;

    /// The analytic extension `α_z(x)`. Every element of a finite carrier is
    /// entire for the group, so this is defined for all `z`.
    fn continue_to(&self, z: C64, x: &Self::Element) -> Result<Self::Element>;

    /// Multiplies the spectral component of frequency `ω` by `f(ω)`.
    fn spectral_map(&self, x: &Self::Element, f: impl Fn(f64) -> C64) -> Result<Self::Element>;

    /// Whether every `α_t` is multiplicative (an automorphism group) rather
    /// than only isometric.
    fn is_automorphism(&self) -> bool;

    fn check_shape(&self, x: &Self::Element) -> Result<()>;

    fn zero(&self) -> Self::Element;

    /// A linear basis of the carrier.
    fn basis(&self) -> Vec<Self::Element>;

    /// Largest `|ω|` among spectral frequencies.
    fn bandwidth(&self) -> f64;

    /// The spectral frequencies, with multiplicity.
    fn frequencies(&self) -> Vec<f64>;
}

/// The modular group `σ_t(x) = ρ^{it} x ρ^{-it}` of a density matrix.
pub fn build_modular_group(rho: &crate::CMatrix) -> Result<ImplementedGroup> {
    ImplementedGroup::modular(rho)
}
