//! Domain-neutral building blocks shared by both engines: states, targets,
//! avoid sets, traces, configuration, and the adapter contract.

mod adapter;
mod avoid;
mod config;
mod error;
mod state;
mod trace;

pub use adapter::{
    BackwardOutcome, Capability, DomainAdapter, ForwardOutcome, Frame, SearchPath, Verdict,
};
pub use avoid::{AvoidEntry, AvoidSet, AvoidView};
pub use config::{BackwardMode, EngineConfig};
pub use error::{AdapterError, ConfigError, TraceParseError};
pub use state::{ProblemState, TargetState};
pub use trace::{EventDetail, EventKind, Outcome, SearchTrace, TraceBuilder, TraceEvent};
