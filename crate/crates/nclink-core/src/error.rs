//! Error type shared by all modules.

use core::fmt;

/// Everything that can go wrong inside the core primitives.
///
/// The static strings name the offending argument or invariant; they are
/// meant for operators reading a log, not for programmatic matching beyond
/// the variant itself.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Error {
    /// An argument violated a documented precondition.
    InvalidArgument(&'static str),
    /// A complex point does not lie on the sum-constellation grid.
    NotAConstellationPoint,
    /// A size (users, antennas, slots) outside the supported range.
    UnsupportedSize(&'static str),
    /// A geometry query outside the validity region of the path-loss model.
    OutOfModelRange(&'static str),
    /// Matrix or vector dimensions do not line up.
    DimensionMismatch(&'static str),
    /// An internal quantity violated an invariant that the inputs should
    /// have guaranteed; indicates a bug or numerically hostile input.
    InternalConsistency(&'static str),
    /// A detector could not produce a decision (e.g. singular equalizer).
    DetectionFailure(&'static str),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidArgument(what) => write!(f, "invalid argument: {what}"),
            Error::NotAConstellationPoint => {
                write!(f, "point is not on the sum-constellation grid")
            }
            Error::UnsupportedSize(what) => write!(f, "unsupported size: {what}"),
            Error::OutOfModelRange(what) => write!(f, "outside model validity range: {what}"),
            Error::DimensionMismatch(what) => write!(f, "dimension mismatch: {what}"),
            Error::InternalConsistency(what) => write!(f, "internal consistency: {what}"),
            Error::DetectionFailure(what) => write!(f, "detection failure: {what}"),
        }
    }
}

impl core::error::Error for Error {}
