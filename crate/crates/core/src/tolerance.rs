//! Every numerical threshold used by the checks, in one record.
//!
//! Residuals are compared against these after scaling where the check says
//! "relative". Defaults are the working tolerances for double precision on
//! carriers of dimension at most 64.

/// Thresholds for all checks. `Default` gives the standard values; the CLI
/// can override any field by name.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Relative asymmetry accepted by the Hermitian eigensolver.
    pub hermitian: f64,
    /// Eigendecomposition reconstruction and unitarity.
    pub reconstruction: f64,
    /// Comparisons of two independent numerical routes.
    pub cross_path: f64,
    /// Group law and isometry on real times.
    pub group_law: f64,
    /// Multiplicativity, `*`-compatibility and functional-calculus group law.
    pub algebra: f64,
    /// Quadrature against closed forms.
    pub closed_form: f64,
    /// Boolean graph criterion built from two quadratures.
    pub criterion: f64,
    /// Slack on three-lines bounds.
    pub three_lines: f64,
    /// KMS trace identity and modular-data identities.
    pub kms: f64,
    /// Markov intertwiner identities.
    pub markov: f64,
    /// Markov closure identity for `|z| > 2`.
    pub markov_far: f64,
    /// Dual-graph subspace comparison.
    pub dual: f64,
    /// Intertwining residual for sampled generator intertwiners.
    pub intertwine: f64,
    /// Slack on the graph-ball norm of truncations.
    pub truncation: f64,
    /// Weak pairing of the disc counterexample at the last sampled index.
    pub weak_decay: f64,
    /// Lower bound on the norm gap of the disc counterexample.
    pub norm_gap: f64,
    /// Relative rank cutoff for subspace computations.
    pub rank: f64,
    /// Invariance check for a candidate core.
    pub invariance: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            hermitian: 1e-12,
            reconstruction: 1e-10,
            cross_path: 1e-8,
            group_law: 1e-10,
            algebra: 1e-9,
            closed_form: 1e-8,
            criterion: 1e-7,
            three_lines: 1e-9,
            kms: 1e-9,
            markov: 1e-8,
            markov_far: 1e-7,
            dual: 1e-9,
            intertwine: 1e-9,
            truncation: 1e-12,
            weak_decay: 1e-6,
            norm_gap: 0.99,
            rank: 1e-10,
            invariance: 1e-9,
        }
    }
}

impl Tolerances {
    /// Field names accepted by [`Tolerances::set`].
    pub const NAMES: [&'static str; 18] = [
        "hermitian",
        "reconstruction",
        "cross_path",
        "group_law",
        "algebra",
        "closed_form",
        "criterion",
        "three_lines",
        "kms",
        "markov",
        "markov_far",
        "dual",
        "intertwine",
        "truncation",
        "weak_decay",
        "norm_gap",
        "rank",
        "invariance",
    ];

    fn slot(&mut self, name: &str) -> Option<&mut f64> {
        Some(match name {
            "hermitian" => &mut self.hermitian,
            "reconstruction" => &mut self.reconstruction,
            "cross_path" => &mut self.cross_path,
            "group_law" => &mut self.group_law,
            "algebra" => &mut self.algebra,
            "closed_form" => &mut self.closed_form,
            "criterion" => &mut self.criterion,
            "three_lines" => &mut self.three_lines,
            "kms" => &mut self.kms,
            "markov" => &mut self.markov,
            "markov_far" => &mut self.markov_far,
            "dual" => &mut self.dual,
            "intertwine" => &mut self.intertwine,
            "truncation" => &mut self.truncation,
            "weak_decay" => &mut self.weak_decay,
            "norm_gap" => &mut self.norm_gap,
            "rank" => &mut self.rank,
            "invariance" => &mut self.invariance,
            _ => return None,
        })
    }

    /// Overrides one field. Returns `false` for an unknown name.
    pub fn set(&mut self, name: &str, value: f64) -> bool {
        match self.slot(name) {
            Some(slot) => {
                *slot = value;
                true
            }
            None => false,
        }
    }

    pub fn get(&self, name: &str) -> Option<f64> {
        let mut copy = *self;
        copy.slot(name).map(|v| *v)
    }
}
