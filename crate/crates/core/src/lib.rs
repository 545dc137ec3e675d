//! Analytic generators of one-parameter isometry and automorphism groups,
//! instantiated on finite-dimensional carriers.
//!
//! The crate is `no_std` (it needs `alloc`). Everything here is a pure
//! function of immutable inputs; IO, configuration and report files live in
//! the `anagen` companion crate.
//!
//! Layout:
//!
//! - [`linalg`]: dense complex matrices, a cyclic Jacobi eigensolver for
//!   Hermitian matrices, spectral functional calculus and subspace utilities.
//! - [`group`]: the carriers. Diagonal multiplier groups on truncated
//!   sequence spaces, inner groups `x -> P^{it} x P^{-it}` on `M_d`, the 2x2
//!   corner embedding of a diagonal group, and exact geometric sequences for
//!   the infinite sequence models.
//! - [`continuation`]: `alpha_z` by spectral calculus, strip geometry,
//!   three-lines bounds and the weakly-but-not-norm regular disc map.
//! - [`smearing`]: the Gaussian smearing operator computed by panel
//!   quadrature and the checks built on it.
//! - [`graph`]: graphs of analytic generators as algebras, spectral
//!   subspaces, duality and intertwiners.
//! - [`modular`]: finite-dimensional modular theory of a faithful state,
//!   KMS and Markov intertwiners.
#![no_std]
// Negated comparisons make NaN fail validity tests.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod continuation;
pub mod error;
pub mod graph;
pub mod group;
pub mod linalg;
pub mod modular;
pub mod report;
pub mod sample;
pub mod smearing;
pub mod tolerance;

pub use error::{Error, Result};
pub use linalg::{CMatrix, EigenDecomposition, PositiveMatrix};
pub use num_complex::Complex64 as C64;
pub use report::Report;
pub use tolerance::Tolerances;

/// `sqrt(-1)`.
pub const I: C64 = C64::new(0.0, 1.0);

/// Shorthand for a complex number.
#[inline]
pub fn c64(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}
