//! Error types shared across the crate.

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Failures of graph construction and validation.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum GraphError {
    #[error("dangling reference: edge `{edge}` refers to unknown vertex `{vertex}`")]
    DanglingReference { edge: String, vertex: String },
    #[error("duplicate {what} id `{id}`")]
    DuplicateId { what: &'static str, id: String },
    #[error("graph is disconnected: vertex `{0}` is unreachable")]
    Disconnected(String),
    #[error("graph has no vertices")]
    Empty,
    #[error("vertex `{0}` has no incident edges")]
    IsolatedVertex(String),
    #[error("edge `{edge}`: field `{field}`: {reason}")]
    InvalidEdge {
        edge: String,
        field: &'static str,
        reason: String,
    },
    #[error("vertex `{vertex}` declared as {declared} but has degree {degree}")]
    KindMismatch {
        vertex: String,
        declared: String,
        degree: usize,
    },
    #[error("edge `{edge}` of length {length} is too short for eps = {eps} (need length > 2 eps)")]
    EdgeTooShort { edge: String, length: f64, eps: f64 },
    #[error("transverse section: {0}")]
    Transverse(String),
    #[error(transparent)]
    Profile(#[from] ProfileError),
}

/// Failures of fiber profile construction or evaluation.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ProfileError {
    #[error("coordinate {0} lies outside [0, 1]")]
    OutOfRange(f64),
    #[error("poly_bump exponent must be >= 3, got {0}")]
    Exponent(i64),
    #[error("profile radius is not positive ({value} at xi = {xi})")]
    NonPositive { xi: f64, value: f64 },
    #[error("table profile: {0}")]
    Table(String),
    #[error("non-finite parameter: {0}")]
    NonFinite(&'static str),
}

/// Top-level error for numerical operations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Profile(#[from] ProfileError),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("graph file: {0}")]
    Parse(String),
    #[error("non-finite potential value at xi = {0}")]
    NonFinitePotential(f64),
    #[error("closed-form vertex matrix has a pole ({0}); use the direct star solve")]
    PoleAtVertex(String),
    #[error("singular {system} system at k = {k} (condition number {condition:.3e})")]
    Singular {
        system: &'static str,
        k: f64,
        condition: f64,
    },
    #[error("no scattering channels: graph has no infinite edges")]
    NoChannels,
    #[error("graph has infinite edges; spectrum requires a compact graph")]
    NotCompact,
    #[error("numeric failure: {0}")]
    Numeric(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}
