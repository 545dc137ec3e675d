//! Flat check records shared by every verification routine.

use alloc::string::String;
use alloc::vec::Vec;

/// Outcome of one numerical check.
///
/// `anchor` is a stable key naming the mathematical statement the check
/// exercises; the CLI writes it to every report row.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub check: &'static str,
    pub anchor: &'static str,
    pub inputs: String,
    pub residual: f64,
    pub tolerance: f64,
    pub passed: bool,
    /// Check-specific measurements (lattice norms, gaps, ...).
    pub values: Vec<f64>,
    pub note: Option<String>,
}

impl Report {
    /// A check that passes iff `residual <= tolerance` (NaN fails).
    pub fn residual(check: &'static str, anchor: &'static str, inputs: String, residual: f64, tolerance: f64) -> Self {
        Self { check, anchor, inputs, residual, tolerance, passed: residual <= tolerance, values: Vec::new(), note: None }
    }

    /// A boolean check; the residual is recorded as 0 or 1.
    pub fn boolean(check: &'static str, anchor: &'static str, inputs: String, passed: bool) -> Self {
        Self {
            check,
            anchor,
            inputs,
            residual: if passed { 0.0 } else { 1.0 },
            tolerance: 0.0,
            passed,
            values: Vec::new(),
            note: None,
        }
    }

    pub fn with_values(mut self, values: Vec<f64>) -> Self {
        self.values = values;
        self
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    /// Both this and `other` must pass; keeps the worse residual ratio.
    pub fn and(mut self, other: &Report) -> Self {
        self.passed &= other.passed;
        if other.residual / other.tolerance.max(f64::MIN_POSITIVE)
            > self.residual / self.tolerance.max(f64::MIN_POSITIVE)
        {
            self.residual = other.residual;
            self.tolerance = other.tolerance;
        }
        self
    }
}
