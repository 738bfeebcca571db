use thiserror::Error;

/// Errors surfaced by the exact-algebra layers.
#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("incompatible operands: {0}")]
    IncompatibleOperands(String),

    #[error("degree guard exceeded: result degree {degree} > guard {guard}")]
    DegreeGuard { degree: u32, guard: u32 },

    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("inhomogeneous entry at ({row},{col}): {msg}")]
    Inhomogeneous { row: usize, col: usize, msg: String },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("index {index} out of range 1..={max}")]
    IndexOutOfRange { index: usize, max: usize },

    #[error("row {row} of d2 contains a unit entry; not a minimal direction")]
    NotMinimalDirection { row: usize },

    #[error("twist inference failed: {0}")]
    TwistInference(String),

    #[error("lift failed: {0}")]
    LiftFailed(String),

    #[error("fixture mismatch: {0}")]
    FixtureMismatch(String),

    #[error("construction error: {0}")]
    Construction(String),

    #[error("unsupported input: {0}")]
    UnsupportedInput(String),

    #[error("family is degenerate: {0}")]
    FamilyDegenerate(String),
}

pub type Result<T> = std::result::Result<T, Error>;
