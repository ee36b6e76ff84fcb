use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("malformed input: {0}")]
    Parse(String),

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("invalid ambient space: {0}")]
    InvalidAmbient(String),

    #[error("classes live on different ambient spaces")]
    AmbientMismatch,

    #[error("degree mismatch: expected {expected}, found {found}")]
    DegreeMismatch { expected: u32, found: u32 },

    #[error("invalid hypersurface class: {0}")]
    InvalidHypersurface(String),

    #[error("group is infinite (invariant factors {0})")]
    InfiniteGroup(String),

    #[error("assumption `{assumption}` does not apply in degree {degree}: {reason}")]
    InapplicableAssumption {
        assumption: String,
        degree: u32,
        reason: String,
    },

    #[error("obstruction criterion is only available for total dimension 4, got {0}")]
    DimensionUnsupported(u32),

    #[error("Sq^2 descent check failed: {0}")]
    DescentFailure(String),
}

impl Error {
    /// Stable identifier used in structured (JSON) error output.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Parse(_) => "Parse",
            Error::Shape(_) => "Shape",
            Error::InvalidAmbient(_) => "InvalidAmbient",
            Error::AmbientMismatch => "AmbientMismatch",
            Error::DegreeMismatch { .. } => "DegreeMismatch",
            Error::InvalidHypersurface(_) => "InvalidHypersurface",
            Error::InfiniteGroup(_) => "InfiniteGroup",
            Error::InapplicableAssumption { .. } => "InapplicableAssumption",
            Error::DimensionUnsupported(_) => "DimensionUnsupported",
            Error::DescentFailure(_) => "DescentFailure",
        }
    }

    /// Errors caused by malformed user input rather than by the mathematics.
    pub fn is_input_error(&self) -> bool {
        matches!(self, Error::Parse(_) | Error::Shape(_) | Error::InvalidAmbient(_))
    }
}
