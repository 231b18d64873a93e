use thiserror::Error;

use crate::digits::Kind;

/// Errors raised by the library. Every variant has a stable machine-readable
/// [`code`](Error::code) used by the command-line front end.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("basis element {value} at position {position} is below 2")]
    ElementTooSmall { position: usize, value: u64 },

    #[error("periodic part must not be empty")]
    EmptyPeriod,

    #[error("digit {digit} at position {position} is not below element {element}")]
    DigitOutOfRange {
        position: usize,
        digit: u64,
        element: u64,
    },

    #[error("exact value unavailable (needs an eventually periodic basis and a known tail)")]
    ExactUnavailable,

    #[error("{0} lies outside the domain of the basis")]
    OutOfDomain(String),

    #[error("no terminating or periodic expansion within {0} digits")]
    HorizonExceeded(usize),

    #[error("operation requires {0}")]
    UnsupportedBasis(&'static str),

    #[error("digit kind {0:?} is not accepted here")]
    UnsupportedKind(Kind),

    #[error("truncated tail: digits past the prefix are unknown")]
    TruncatedTail,

    #[error("digit shift undefined at position {position}: digit {digit} does not fit element {element}")]
    NotWellDefined {
        position: usize,
        digit: u64,
        element: u64,
    },

    #[error("degenerate denominator")]
    DegenerateDenominator,

    #[error("selection digit {digit} at position {position} is neither 0 nor {allowed}")]
    InvalidSelection {
        position: usize,
        digit: u64,
        allowed: u64,
    },

    #[error("enumeration of {count} items exceeds the limit {limit}")]
    CombinatorialLimit { count: u128, limit: u64 },

    #[error("basis is unbounded; cylinder covers are not known to be faithful")]
    GateFailed,

    #[error("enclosure refinement did not settle within {0} terms")]
    Undecidable(usize),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    /// Stable identifier of the error variant.
    pub fn code(&self) -> &'static str {
        match self {
            Error::ElementTooSmall { .. } => "ElementTooSmall",
            Error::EmptyPeriod => "EmptyPeriod",
            Error::DigitOutOfRange { .. } => "DigitOutOfRange",
            Error::ExactUnavailable => "ExactUnavailable",
            Error::OutOfDomain(_) => "OutOfDomain",
            Error::HorizonExceeded(_) => "HorizonExceeded",
            Error::UnsupportedBasis(_) => "UnsupportedBasis",
            Error::UnsupportedKind(_) => "UnsupportedKind",
            Error::TruncatedTail => "TruncatedTail",
            Error::NotWellDefined { .. } => "NotWellDefined",
            Error::DegenerateDenominator => "DegenerateDenominator",
            Error::InvalidSelection { .. } => "InvalidSelection",
            Error::CombinatorialLimit { .. } => "CombinatorialLimit",
            Error::GateFailed => "GateFailed",
            Error::Undecidable(_) => "Undecidable",
            Error::InvalidArgument(_) => "InvalidArgument",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
