use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid ring descriptor: {0}")]
    InvalidRing(String),
    #[error("modulus rejected: its reduction mod {p} is not irreducible of degree {s}")]
    RejectedModulus { p: u64, s: usize },
    #[error("the canonical-digit representative set only exists for Z/p^r (s = 1)")]
    InvalidConvention,
    #[error("operands belong to different rings")]
    MixedRings,
    #[error("element is not a unit")]
    NotAUnit,
    #[error("digit {index} is not a member of the representative set")]
    DigitNotInT { index: usize },
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("the zero matrix has no standard form")]
    ZeroMatrix,
    #[error("dimension mismatch: {0}")]
    SizeMismatch(String),
    #[error("method precondition violated: {0}")]
    MethodPreconditionViolated(String),
    #[error("enumeration budget exceeded: {attempted} evaluations requested, budget {budget}")]
    BudgetExceeded { attempted: u128, budget: u128 },
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("row {0} of the encoder is zero")]
    ZeroRow(usize),
    #[error("code is not delay-free: G(0) rows are not gamma-linearly independent")]
    NotDelayFree,
    #[error("encoder is not reduced: leading coefficient rows are gamma-linearly dependent")]
    NotReduced,
    #[error("ν = {nu} does not divide k = {k}")]
    NuNotDividingK { nu: usize, k: usize },
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("row degrees {0:?} are not all equal to delta/k")]
    UnequalRowDegrees(Vec<usize>),
    #[error("rows are not linearly independent over the ring")]
    DependentRows,
    #[error("bad layer row counts: {0}")]
    BadCounts(String),
    #[error("matrix is not (reverse) gamma-superregular")]
    NotSuperregular,
    #[error("extracted blocks are inconsistent: {0}")]
    InconsistentBlocks(String),
    #[error("rows do not form a gamma-basis: {0}")]
    NotGammaEncoder(String),
    #[error("claimed {field} = {claimed} but computed {computed}")]
    ClaimMismatch {
        field: &'static str,
        claimed: usize,
        computed: usize,
    },
    #[error("unknown strategy '{0}'")]
    UnknownStrategy(String),
    #[error("malformed input: {0}")]
    Format(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Format(e.to_string())
    }
}
