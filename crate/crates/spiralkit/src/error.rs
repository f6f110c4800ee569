use thiserror::Error;

/// Broad failure classes. The CLI maps them to exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    Validation,
    Infeasible,
    Resolution,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("point coincides with the center of the inversion circle")]
    InversionCenterHit,
    #[error("the two end points coincide")]
    CoincidentEndpoints,
    #[error("sampling too coarse at sample {index}: {detail}")]
    ResolutionTooCoarse { index: usize, detail: String },
    #[error("crossing counters disagree: N=({n1},{n2}) M=({m1},{m2})")]
    CounterMismatch { n1: i64, n2: i64, m1: i64, m2: i64 },
    #[error("lense is degenerate (sin omega = 0)")]
    DegenerateLense,
    #[error("contact point is at infinity")]
    ContactAtInfinity,
    #[error("point is a pole of the biarc family")]
    PolePoint,
    #[error("end data do not describe a non-biarc spiral pair (Q = {q})")]
    NotASpiralPair { q: f64 },
    #[error("no spiral exists: {0}")]
    NoSpiralExists(Reason),
    #[error("circles are not disjoint (Q = {q})")]
    NotDisjoint { q: f64 },
    #[error("consecutive points {index} and {next} coincide", next = index + 1)]
    DegenerateTriple { index: usize },
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("internal consistency check failed: {0}")]
    Internal(String),
}

/// Why no spiral joins the given end data.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Reason {
    QPositive,
    VogtSign,
    CircularCoincidence,
}

impl std::fmt::Display for Reason {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Reason::QPositive => "Q is not negative",
            Reason::VogtSign => "boundary angles violate the sign/range conditions",
            Reason::CircularCoincidence => "end data lie on one circle",
        })
    }
}

impl Error {
    pub fn class(&self) -> ErrorClass {
        match self {
            Error::ResolutionTooCoarse { .. } | Error::CounterMismatch { .. } => {
                ErrorClass::Resolution
            }
            Error::NoSpiralExists(_)
            | Error::NotASpiralPair { .. }
            | Error::NotDisjoint { .. }
            | Error::DegenerateLense
            | Error::ContactAtInfinity
            | Error::Internal(_) => ErrorClass::Infeasible,
            _ => ErrorClass::Validation,
        }
    }

    /// Stable machine-readable tag.
    pub fn code(&self) -> &'static str {
        match self {
            Error::InversionCenterHit => "InversionCenterHit",
            Error::CoincidentEndpoints => "CoincidentEndpoints",
            Error::ResolutionTooCoarse { .. } => "ResolutionTooCoarse",
            Error::CounterMismatch { .. } => "CounterMismatch",
            Error::DegenerateLense => "DegenerateLense",
            Error::ContactAtInfinity => "ContactAtInfinity",
            Error::PolePoint => "PolePoint",
            Error::NotASpiralPair { .. } => "NotASpiralPair",
            Error::NoSpiralExists(_) => "NoSpiralExists",
            Error::NotDisjoint { .. } => "NotDisjoint",
            Error::DegenerateTriple { .. } => "DegenerateTriple",
            Error::InvalidInput(_) => "InvalidInput",
            Error::Internal(_) => "Internal",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
