use thiserror::Error;

/// Errors raised across the schema, similarity and model modules.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("state space is empty")]
    EmptyStateSpace,

    #[error("duplicate state identifier `{0}`")]
    DuplicateState(String),

    #[error("map `{name}` has {got} entries, expected {expected}")]
    TableLength {
        name: String,
        got: usize,
        expected: usize,
    },

    #[error("map `{name}` sends state {state} to {image}, outside 0..{len}")]
    ImageOutOfRange {
        name: String,
        state: usize,
        image: usize,
        len: usize,
    },

    #[error("state index {index} out of range for {len} states")]
    StateOutOfRange { index: usize, len: usize },

    #[error("map `{0}` has an inverse table that does not invert it")]
    BadInverse(String),

    #[error("kinematic set lists the same map twice (`{first}` and `{second}`)")]
    DuplicateMap { first: String, second: String },

    #[error("reversibility flag is {declared} but the kinematic set {reason}")]
    ReversibilityMismatch { declared: bool, reason: String },

    #[error("n_steps must be at least 1")]
    NoSteps,

    #[error("instance has {got} maps, schema expects {expected}")]
    LengthMismatch { got: usize, expected: usize },

    #[error("map at step {step} is not in the kinematic set")]
    NotKinematic { step: usize },

    #[error("transformed map for interval {interval} left the kinematic set")]
    TransformEscapes { interval: usize },

    #[error("schema is not reversible")]
    NotReversible,

    #[error("schema is not transitive: no kinematic map carries the initial state across")]
    NoTransport,

    #[error("{what} of size {size} exceeds the limit {limit}")]
    TooLarge {
        what: &'static str,
        size: usize,
        limit: usize,
    },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("proposition `{name}` failed to evaluate: {reason}")]
    PredicateFailure { name: String, reason: String },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("matrix is not unitary (deviation {deviation:e})")]
    NotUnitary { deviation: f64 },

    #[error("matrix is not Hermitian (deviation {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("vector is not normalized (norm {norm})")]
    NotNormalized { norm: f64 },

    #[error("integration produced a non-finite state at t = {time}")]
    NonFinite { time: f64 },

    #[error("malformed schema document: {0}")]
    Malformed(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
