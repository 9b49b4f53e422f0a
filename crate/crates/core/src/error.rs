use thiserror::Error;

use crate::poly::roots::RootSet;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },

    #[error("unknown identifier `{name}` at byte {pos}")]
    UnknownIdentifier { name: String, pos: usize },

    #[error("malformed value `{text}`: {msg}")]
    Format { text: String, msg: String },

    #[error("division by the zero polynomial")]
    DivisionByZero,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("root finder did not converge after {iterations} iterations ({} roots recovered)", partial.total_multiplicity())]
    NoConvergence { iterations: usize, partial: RootSet },

    #[error("all characteristic roots are zero")]
    AllRootsZero,

    #[error("atom is not periodic: {0}")]
    NotPeriodic(String),

    #[error("all {count} samples were pole-flagged")]
    AllSamplesSingular { count: usize },

    #[error("{flagged} of {total} quadrature nodes are singular at r = {radius}")]
    TooManyPoles { flagged: usize, total: usize, radius: f64 },

    #[error("winding number {value} is not within 0.1 of an integer on box [{}, {}] x [{}, {}]", rect[0], rect[1], rect[2], rect[3])]
    NonIntegerWinding { value: f64, rect: [f64; 4] },

    #[error("argument tracking failed: {0}")]
    Contour(String),

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("ambiguous pairing: {0}")]
    AmbiguousPairing(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}
