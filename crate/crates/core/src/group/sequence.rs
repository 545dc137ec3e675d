#[allow(unused_imports)] // unused when std is in the dependency graph
use num_traits::Float;

use super::{DiagonalGroup, Sequence};
use crate::error::{Error, Result};
use crate::C64;

/// The infinite sequence `x_n = c·r^n` for `n >= n₀` and `0` below,
/// with the ratio kept as `ln r` so that domain predicates are exact.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeometricSequence {
    coefficient: C64,
    log_ratio: f64,
    start_index: i64,
}

impl GeometricSequence {
    /// `r` must be positive and finite.
    pub fn new(coefficient: C64, ratio: f64, start_index: i64) -> Result<Self> {
        if !(ratio > 0.0 && ratio.is_finite()) {
            return Err(Error::InvalidParameter("ratio must be positive"));
        }
        Self::from_log_ratio(coefficient, ratio.ln(), start_index)
    }

    /// `x_n = c·e^{n·log_ratio}`.
    pub fn from_log_ratio(coefficient: C64, log_ratio: f64, start_index: i64) -> Result<Self> {
        if !log_ratio.is_finite() || !coefficient.re.is_finite() || !coefficient.im.is_finite() {
            return Err(Error::InvalidParameter("sequence parameters must be finite"));
        }
        if coefficient == C64::new(0.0, 0.0) {
            return Ok(Self::zero());
        }
        Ok(Self { coefficient, log_ratio, start_index })
    }

    /// The canonical zero sequence (`c = 0, r = 1, n₀ = 0`).
    pub fn zero() -> Self {
        Self { coefficient: C64::new(0.0, 0.0), log_ratio: 0.0, start_index: 0 }
    }

    pub fn is_zero(&self) -> bool {
        self.coefficient == C64::new(0.0, 0.0)
    }

    pub fn coefficient(&self) -> C64 {
        self.coefficient
    }

    pub fn ratio(&self) -> f64 {
        self.log_ratio.exp()
    }

    pub fn log_ratio(&self) -> f64 {
        self.log_ratio
    }

    pub fn start_index(&self) -> i64 {
        self.start_index
    }

    pub fn value(&self, n: i64) -> C64 {
        if n < self.start_index {
            C64::new(0.0, 0.0)
        } else {
            self.coefficient * (n as f64 * self.log_ratio).exp()
        }
    }

    /// Member of `ℓ∞`.
    pub fn is_bounded(&self) -> bool {
        self.is_zero() || self.log_ratio <= 0.0
    }

    /// Member of `c₀`.
    pub fn vanishes_at_infinity(&self) -> bool {
        self.is_zero() || self.log_ratio < 0.0
    }

    /// Entries `0..n` as a truncated sequence.
    pub fn truncate(&self, n: usize) -> Sequence {
        Sequence((0..n as i64).map(|k| self.value(k)).collect())
    }

    /// `α_z` for the `λ_n = n` group and purely imaginary `z`: the image is
    /// again geometric, with `ln r` shifted by `-Im z`.
    pub fn continued(&self, z: C64) -> Result<Self> {
        if z.re != 0.0 {
            return Err(Error::InvalidParameter("sequence continuation needs purely imaginary z"));
        }
        Self::from_log_ratio(self.coefficient, self.log_ratio - z.im, self.start_index)
    }
}

/// Exact membership of a geometric sequence in the domain of `α_z` for the
/// `λ_n = n` group, in each infinite model.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DomainMembership {
    pub linf: bool,
    pub c0: bool,
}

/// Decides `x ∈ D(α_z)` in the `ℓ∞` and `c₀` models.
///
/// On the strip `S(z)` the orbit of `x` has entries `c·(r e^{-Im w})^n`;
/// the extension is bounded iff `r e^{-s} <= 1` for every `s` between `0`
/// and `Im z`, and vanishes at infinity (uniformly, hence norm-continuously)
/// iff the inequality is strict.
pub fn in_domain_sequence(seq: &GeometricSequence, group: &DiagonalGroup, z: C64) -> Result<DomainMembership> {
    if !group.is_integer_model() {
        return Err(Error::UnsupportedGroup("domain predicates need the λ_k = k model"));
    }
    if seq.is_zero() {
        return Ok(DomainMembership { linf: true, c0: true });
    }
    let worst = seq.log_ratio + (-z.im).max(0.0);
    Ok(DomainMembership { linf: worst <= 0.0, c0: worst < 0.0 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::c64;
    use crate::group::SequenceModel;

    fn integer() -> DiagonalGroup {
        DiagonalGroup::integer(8, SequenceModel::Linf).unwrap()
    }

    #[test]
    fn e_to_the_minus_n_is_only_in_the_bounded_domain() {
        let seq = GeometricSequence::from_log_ratio(c64(1.0, 0.0), -1.0, 0).unwrap();
        let m = in_domain_sequence(&seq, &integer(), c64(0.0, -1.0)).unwrap();
        assert_eq!(m, DomainMembership { linf: true, c0: false });
    }

    #[test]
    fn faster_decay_is_in_both() {
        let seq = GeometricSequence::from_log_ratio(c64(1.0, 0.0), -2.0, 0).unwrap();
        let m = in_domain_sequence(&seq, &integer(), c64(0.0, -1.0)).unwrap();
        assert_eq!(m, DomainMembership { linf: true, c0: true });
        let image = seq.continued(c64(0.0, -1.0)).unwrap();
        assert!(image.vanishes_at_infinity());
        assert_eq!(image.log_ratio(), -1.0);
    }

    #[test]
    fn zero_is_canonical_and_everywhere() {
        let z = GeometricSequence::new(c64(0.0, 0.0), 7.0, -3).unwrap();
        assert_eq!(z, GeometricSequence::zero());
        let m = in_domain_sequence(&z, &integer(), c64(0.0, -1.0)).unwrap();
        assert_eq!(m, DomainMembership { linf: true, c0: true });
    }

    #[test]
    fn upper_half_plane_only_needs_boundedness() {
        let seq = GeometricSequence::from_log_ratio(c64(1.0, 0.0), 0.0, 0).unwrap();
        let m = in_domain_sequence(&seq, &integer(), c64(0.0, 1.0)).unwrap();
        assert_eq!(m, DomainMembership { linf: true, c0: false });
    }

    #[test]
    fn rejects_other_weights() {
        let g = DiagonalGroup::new(alloc::vec![0.0, 2.0], SequenceModel::C0).unwrap();
        let r = in_domain_sequence(&GeometricSequence::zero(), &g, c64(0.0, -1.0));
        assert!(matches!(r, Err(Error::UnsupportedGroup(_))));
    }

    #[test]
    fn truncation_and_values() {
        let seq = GeometricSequence::new(c64(2.0, 0.0), 0.5, 1).unwrap();
        let t = seq.truncate(4);
        assert_eq!(t.0[0], c64(0.0, 0.0));
        assert!((t.0[3] - c64(0.25, 0.0)).norm() < 1e-15);
    }
}
