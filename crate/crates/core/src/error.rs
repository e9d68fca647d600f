use thiserror::Error;

/// Errors raised by ray-space computations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {found}")]
    Dimension { expected: usize, found: usize },

    #[error("unsupported dimension {0}: {1}")]
    UnsupportedDimension(usize, &'static str),

    #[error("zero vector has no ray")]
    ZeroVector,

    #[error("amplitudes must be finite")]
    NonFinite,

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("value out of domain: {0}")]
    Domain(String),

    #[error("orthogonal states{}: phase comparison undefined", .index.map(|i| format!(" at index {i}")).unwrap_or_default())]
    Orthogonality { index: Option<usize> },

    #[error("degenerate geodesic: rays coincide or are orthogonal (overlap {overlap:.3e})")]
    DegenerateGeodesic { overlap: f64 },

    #[error("degenerate triangle: {0}")]
    DegenerateTriangle(String),

    #[error("inconsistent geometry: {0}")]
    Consistency(String),

    #[error("vector is orthogonal to the reference vector")]
    NotInPc,

    #[error("imaginary part of the Bargmann invariant vanishes at the start of the deformation")]
    OnBoundary,

    #[error("ray is not covered by the oracle table")]
    NotCovered,

    #[error("no ray triple with nonzero Im(Δ) found after {0} draws")]
    SearchExhausted(usize),

    #[error("map is not an isometry (max overlap deviation {0:.3e})")]
    NotIsometry(f64),

    #[error("io: {0}")]
    Io(String),

    #[error("parse: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Process exit status for the command-line front end:
    /// 2 input/validation, 3 degenerate geometry, 4 hypothesis violation.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Dimension { .. }
            | Error::UnsupportedDimension(..)
            | Error::ZeroVector
            | Error::NonFinite
            | Error::InvalidInput(_)
            | Error::Domain(_)
            | Error::NotCovered
            | Error::Io(_)
            | Error::Parse(_) => 2,
            Error::Orthogonality { .. }
            | Error::DegenerateGeodesic { .. }
            | Error::DegenerateTriangle(_)
            | Error::Consistency(_)
            | Error::NotInPc
            | Error::OnBoundary => 3,
            Error::SearchExhausted(_) | Error::NotIsometry(_) => 4,
        }
    }
}
