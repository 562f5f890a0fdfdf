use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("weight {0} is not positive")]
    NonPositiveWeight(f64),
    #[error("weights sum to {0}, not 1 (tolerance 1e-12)")]
    WeightsDoNotSumToOne(f64),
    #[error("atoms {0} and {1} are identical")]
    DuplicateAtom(usize, usize),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("invalid embedding slots")]
    InvalidSlots,
    #[error("affine map is degenerate: |det| <= 1e-12")]
    DegenerateMap,
    #[error("invalid interval [{0}, {1}]")]
    InvalidInterval(f64, f64),
    #[error("invalid path: {0}")]
    InvalidPath(&'static str),
    #[error("path constraints do not cover [0, 1]")]
    InvalidConstraintCover,
    #[error("surviving box count exceeded cap of {0}")]
    BudgetExceeded(usize),
    #[error("no certifiable map found")]
    NotFound,
    #[error("invalid weight literal {0:?}")]
    InvalidWeight(String),
    #[error("distribution file: {0}")]
    ParseDistribution(String),
    #[error("certificate: {0}")]
    MalformedCertificate(String),
    #[error("certificate re-check failed: {0}")]
    RecheckFailed(String),
}
