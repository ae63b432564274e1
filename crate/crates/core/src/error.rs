use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Everything that can go wrong in the library.
///
/// Numeric payloads are stored as `f64` so the error type stays independent
/// of the scalar type parameter.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("vectors must have at least one entry")]
    EmptyVector,

    #[error("entry {index} is not a finite real ({value})")]
    NonFinite { index: usize, value: f64 },

    #[error("the bottom element has no multiplicative inverse")]
    BottomNotInvertible,

    #[error("scaling by bottom leaves the space of finite vectors")]
    BottomScaling,

    #[error("ball radius must be strictly positive, got {0}")]
    RadiusNotAboveUnit(f64),

    #[error("combination coefficients must have maximum 0, got {0}")]
    CoefficientsNotNormalized(f64),

    #[error("combination has no finite coefficient")]
    EmptyCombination,

    #[error("functional has no finite coefficient")]
    DegenerateFunctional,

    #[error("polytope needs at least one generator")]
    NoGenerators,

    #[error("point is not a member of the polytope (reconstruction gap {gap}, top coefficient {top})")]
    NotAMember { gap: f64, top: f64 },

    #[error("no point of the polytope lies below the target values (top coefficient {0})")]
    EmptySublevel(f64),

    #[error("matrix row {0} has no finite entry")]
    EmptyRow(usize),

    #[error("the graph of the matrix has no cycle")]
    NoCycle,

    #[error("oracle problem too large: {0}")]
    ProblemTooLarge(String),

    #[error("variable x{index} out of range for dimension {dim}")]
    VariableOutOfRange { index: usize, dim: usize },

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Stable identifier used in machine-readable output.
    pub fn code(&self) -> &'static str {
        match self {
            Error::DimensionMismatch { .. } => "DimensionMismatch",
            Error::EmptyVector => "EmptyVector",
            Error::NonFinite { .. } => "NonFinite",
            Error::BottomNotInvertible => "BottomNotInvertible",
            Error::BottomScaling => "BottomScaling",
            Error::RadiusNotAboveUnit(_) => "RadiusNotAboveUnit",
            Error::CoefficientsNotNormalized(_) => "CoefficientsNotNormalized",
            Error::EmptyCombination => "EmptyCombination",
            Error::DegenerateFunctional => "DegenerateFunctional",
            Error::NoGenerators => "NoGenerators",
            Error::NotAMember { .. } => "NotAMember",
            Error::EmptySublevel(_) => "EmptySublevel",
            Error::EmptyRow(_) => "EmptyRow",
            Error::NoCycle => "NoCycle",
            Error::ProblemTooLarge(_) => "ProblemTooLarge",
            Error::VariableOutOfRange { .. } => "VariableOutOfRange",
            Error::Parse(_) => "Parse",
        }
    }

    /// True for errors caused by malformed input rather than by the
    /// mathematics of a well-formed problem.
    pub fn is_schema_error(&self) -> bool {
        matches!(
            self,
            Error::DimensionMismatch { .. }
                | Error::EmptyVector
                | Error::NonFinite { .. }
                | Error::DegenerateFunctional
                | Error::NoGenerators
                | Error::EmptyRow(_)
                | Error::VariableOutOfRange { .. }
                | Error::Parse(_)
        )
    }
}

pub(crate) fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}
