//! Command-line verification suite for `anagen-core`.
//!
//! The binary exposes four verbs: `verify` runs every invariant suite and
//! writes a flat JSON or CSV report; `continue` evaluates `α_z(x)` by
//! spectral calculus and by smeared quadrature; `counterexample` tabulates
//! the disc map that is weakly but not norm continuous; `demo` narrates a
//! single check.

// Negated comparisons make NaN fail validity tests.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod commands;
pub mod config;
pub mod error;
pub mod output;
pub mod spec;
pub mod suite;

pub use config::{Format, SuiteConfig};
pub use error::{CliError, ParseError};
