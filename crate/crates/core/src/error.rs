use alloc::string::String;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("matrix is not Hermitian (asymmetry {asymmetry:.3e})")]
    NotHermitian { asymmetry: f64 },
    #[error("Jacobi iteration did not converge after {sweeps} sweeps")]
    ConvergenceFailure { sweeps: usize },
    #[error("matrix is not strictly positive (min eigenvalue {min_eigenvalue:.3e})")]
    NotPositive { min_eigenvalue: f64 },
    #[error("shape mismatch: expected {expected}, found {found}")]
    ShapeMismatch { expected: String, found: String },
    #[error("matrix entries must be finite")]
    NonFinite,
    #[error("unsupported group: {0}")]
    UnsupportedGroup(&'static str),
    #[error("density is not a state (trace {trace})")]
    NotAState { trace: f64 },
    #[error("state is not faithful (min eigenvalue {min_eigenvalue:.3e})")]
    NotFaithful { min_eigenvalue: f64 },
    #[error("exponents lie on opposite sides of the real axis")]
    SideMismatch,
    #[error("index {index} out of range (length {len})")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("discarded Gaussian tail {bound:.3e} exceeds {limit:.1e}")]
    TailBoundViolated { bound: f64, limit: f64 },
    #[error("elements do not span the carrier (rank {rank} of {dim})")]
    NotDense { rank: usize, dim: usize },
    #[error("subspace is not invariant under the group (residual {residual:.3e})")]
    NotInvariant { residual: f64 },
    #[error("products are only defined on graphs of automorphism groups")]
    IsometryOnlyCarrier,
    #[error("the natural involution needs z = -i")]
    WrongExponent,
    #[error("positive operator is not diagonal in the standard basis")]
    NotDiagonal,
    #[error("element is outside the unit ball of the graph (norm {norm})")]
    NotInUnitBall { norm: f64 },
    #[error("density has off-block entries of size {size:.3e}")]
    NotBlockCompatible { size: f64 },
    #[error("pair is not in the graph (residual {residual:.3e})")]
    NotInGraph { residual: f64 },
    #[error("invalid parameter: {0}")]
    InvalidParameter(&'static str),
}
