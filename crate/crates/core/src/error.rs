use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("malformed program: {0}")]
    MalformedProgram(String),
    #[error("parameter out of range: {0}")]
    OutOfRange(String),
    #[error("incompatible symmetry group: {0}")]
    IncompatibleGroup(String),
    #[error("degenerate configuration: {0}")]
    DegenerateConfiguration(String),
    #[error("invalid subdivision: {0}")]
    InvalidSubdivision(String),
    #[error("subdivision is not regular")]
    NonRegular,
    #[error("enumeration size guard: {0}")]
    SizeGuard(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("point is not in the finite support")]
    NotInSupport,
    #[error("cell is not full-dimensional")]
    NotFullDimensional,
    #[error("polynomial has no finite coefficient")]
    EmptySupport,
    #[error("player weight {0} is zero")]
    ZeroWeight(usize),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("rendering needs a 2-dimensional input, got dimension {0}")]
    RenderDimension(usize),
    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
