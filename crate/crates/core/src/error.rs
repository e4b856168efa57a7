use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("precision cap of {0} bits exceeded")]
    PrecisionCap(u32),
    #[error("operation requires a finite point")]
    FiniteRequired,
    #[error("map lies on the degenerate hypersurface at infinity")]
    DegenerateAtInfinity,
    #[error("degree {degree} exceeds the degree cap {cap}")]
    OverflowGuard { degree: u64, cap: u64 },
    #[error("value is too close to a critical value")]
    NearCritical,
    #[error("map is not simple")]
    NotSimple,
    #[error("irreducibility of the fiber product is not certified")]
    IrreducibilityUnknown,
    #[error("precondition not certified: {0}")]
    PreconditionUncertified(String),
    #[error("decompositions have different lengths")]
    LengthMismatch,
    #[error("input is not a semiconjugacy")]
    InputNotSemiconjugate,
    #[error("reference data does not separate candidates")]
    DegenerateReferenceData,
    #[error("no admissible base point found")]
    NearCriticalBase,
    #[error("parse error at {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("degenerate map: {0}")]
    DegenerateMap(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    /// Stable upper-case code used in reports.
    pub fn code(&self) -> &'static str {
        match self {
            Error::PrecisionCap(_) => "PRECISION_CAP",
            Error::FiniteRequired => "FINITE_REQUIRED",
            Error::DegenerateAtInfinity => "DEGENERATE_AT_INFINITY",
            Error::OverflowGuard { .. } => "OVERFLOW_GUARD",
            Error::NearCritical => "NEAR_CRITICAL",
            Error::NotSimple => "NOT_SIMPLE",
            Error::IrreducibilityUnknown => "IRREDUCIBILITY_UNKNOWN",
            Error::PreconditionUncertified(_) => "PRECONDITION_UNCERTIFIED",
            Error::LengthMismatch => "LENGTH_MISMATCH",
            Error::InputNotSemiconjugate => "INPUT_NOT_SEMICONJUGATE",
            Error::DegenerateReferenceData => "DEGENERATE_REFERENCE_DATA",
            Error::NearCriticalBase => "NEAR_CRITICAL_BASE",
            Error::Parse { .. } => "PARSE_ERROR",
            Error::DegenerateMap(_) => "DEGENERATE_MAP",
            Error::InvalidArgument(_) => "INVALID_ARGUMENT",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
