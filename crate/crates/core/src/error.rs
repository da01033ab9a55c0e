use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("unsupported stencil order {0} (expected 2 or 4)")]
    InvalidStencil(usize),
    #[error("mass must be positive, got {0}")]
    NonPositiveMass(f64),
    #[error("unknown unit `{unit}` for {kind}")]
    UnknownUnit { unit: String, kind: String },
    #[error("cannot parse quantity `{0}`")]
    BadQuantity(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("composite dimension {0} exceeds the addressable limit")]
    DimensionOverflow(u128),
    #[error("invalid model parameter: {0}")]
    InvalidParameter(String),
    #[error("Hermite recurrence not representable for n = {n} on this grid")]
    HermiteRange { n: usize },
    #[error("eigensolver did not converge: {converged} of {requested} pairs after {iterations} iterations")]
    NoConvergence {
        converged: usize,
        requested: usize,
        iterations: usize,
    },
    #[error("operator is not Hermitian (defect {0:e})")]
    NotHermitian(f64),
    #[error("representation mismatch: {0}")]
    RepresentationMismatch(String),
    #[error("conditional solve set is not phase aligned")]
    Unaligned,
    #[error("surface has no interior minimum")]
    NoMinimum,
    #[error("Fock truncation loses {0:e} of the norm")]
    TruncationLoss(f64),
    #[error("config error:\n{}", .0.join("\n"))]
    Config(Vec<String>),
    #[error("resource estimate {estimate} exceeds cap {cap}")]
    ResourceCap { estimate: u128, cap: u128 },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
