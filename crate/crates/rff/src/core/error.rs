use thiserror::Error;

use super::adapter::Capability;

/// Failure reported by a domain adapter operation.
#[derive(Debug, Error)]
pub enum AdapterError {
    /// Every candidate the operation could produce is ruled out, either by
    /// the avoid set or by structural bounds. The engine treats this as an
    /// exhausted level and backtracks; it is not a fault.
    #[error("exhausted: {0}")]
    Exhausted(String),
    /// The adapter cannot make progress and retrying will not help. The
    /// engine ends the run with an `Unsolved` outcome carrying this reason.
    #[error("adapter failure: {0}")]
    Failed(String),
    /// The adapter does not provide this operation.
    #[error("unsupported operation: {0}")]
    Unsupported(&'static str),
}

impl AdapterError {
    pub fn failed(msg: impl Into<String>) -> Self {
        AdapterError::Failed(msg.into())
    }

    pub fn exhausted(msg: impl Into<String>) -> Self {
        AdapterError::Exhausted(msg.into())
    }

    /// True for errors that mean "this level has no alternatives left"
    /// rather than "the adapter is broken".
    pub fn is_exhausted(&self) -> bool {
        matches!(self, AdapterError::Exhausted(_))
    }
}

/// Rejected engine configuration or adapter/engine mismatch.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum ConfigError {
    #[error("max_steps must be at least 1")]
    ZeroMaxSteps,
    #[error("width must be at least 1")]
    ZeroWidth,
    #[error("engine requires a {required:?} adapter, got {found:?}")]
    CapabilityMismatch {
        required: Capability,
        found: Capability,
    },
}

/// A serialized trace that does not round-trip.
#[derive(Debug, Error)]
#[error("trace parse error at line {line}: {message}")]
pub struct TraceParseError {
    pub line: usize,
    pub message: String,
}
