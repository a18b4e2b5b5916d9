//! Error types shared across the crate.

use thiserror::Error;

/// Errors raised by curve, projection, track and handlebody operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// The annulus has no canonical triangulation; annular data is handled
    /// by the dedicated annular model in the projection module.
    #[error("the annulus S_{{0,2}} has no canonical triangulation")]
    AnnulusUnsupported,

    /// A surface failed a structural validity check.
    #[error("invalid surface: {0}")]
    InvalidSurface(String),

    /// Raw edge weights cannot be realized by any curve system.
    #[error("inconsistent normal coordinates: {0}")]
    InconsistentCoordinates(String),

    /// Two curves that should live on the same surface do not.
    #[error("surface mismatch: {0}")]
    SurfaceMismatch(String),

    /// An index into a marking, cut system or track was out of range.
    #[error("invalid index {0}")]
    InvalidIndex(usize),

    /// The subsurface carries no essential curve, so surgery is undefined.
    #[error("subsurface is simple (carries no essential curve)")]
    SimpleSubsurface,

    /// The curve misses the annulus, so the annular projection is empty.
    #[error("curve misses the annulus")]
    MissesAnnulus,

    /// A projection argument misses the subsurface.  The payload names
    /// which input (0 or 1) was at fault.
    #[error("input {0} misses the subsurface")]
    MissesSubsurface(usize),

    /// A relative arc complex needs a non-empty boundary subset.
    #[error("empty boundary subset for relative arc complex")]
    EmptyDelta,

    /// A curve was required to be tight with respect to a reference system.
    #[error("curve is not tight: {0}")]
    NotTight(String),

    /// An operation needed an essential curve but got a trivial one.
    #[error("trivial curve")]
    TrivialCurve,

    /// Splitting is undefined at a switch with a zero-weight branch; a
    /// slide applies instead.
    #[error("zero-weight branch at switch {0}; split undefined")]
    ZeroWeightSwitch(usize),

    /// A splitting sequence exceeded its termination guard.  This always
    /// indicates a bug, never a legitimate long computation.
    #[error("splitting sequence exceeded the termination bound {0}")]
    NonTermination(usize),

    /// The train track has no branches.
    #[error("empty train track")]
    EmptyTrack,

    /// No boundary compression of the disk exists disjoint from the
    /// fixed multicurve; the compression sequence has ended.
    #[error("no boundary compression available")]
    NoCompressionAvailable,

    /// Gilman chord checks need loops of length at least 8.
    #[error("loop too short: length {0} < 8")]
    LoopTooShort(usize),

    /// Generic unsupported-input error with a documented reason.
    #[error("unsupported: {0}")]
    Unsupported(String),

    /// A JSON artifact failed schema validation.  The payload carries a
    /// JSON-pointer-style path to the offending element.
    #[error("schema violation at {pointer}: {message}")]
    Schema { pointer: String, message: String },
}

impl Error {
    pub fn schema(pointer: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Schema {
            pointer: pointer.into(),
            message: message.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
