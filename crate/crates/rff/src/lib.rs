#![forbid(unsafe_code)]

//! Bidirectional, target-guided search.
//!
//! A run alternates two directions of work. A *last-step generator*
//! decomposes the current target into the state that sits one step before it,
//! naming the transition between them explicitly. A *stepwise forward
//! reasoner* then advances the problem state one step toward that fresher,
//! closer target. Because every forward step is aimed at a concrete
//! intermediate target instead of the far-away goal, the search space stays
//! narrow and failed branches are cheap to abandon.
//!
//! Two engines drive every run:
//!
//! * [`engines::run_rff_t`] treats the solution as one branch of a search
//!   tree. It keeps a per-depth avoid set of failed `(state, target)`
//!   attempts, verifies complete paths, and backtracks to the depth a
//!   verifier names.
//! * [`engines::run_rff_g`] treats the solution as a directed acyclic graph
//!   of facts. State only grows; the run stops once the goal information is
//!   established. No backtracking, no verifier.
//!
//! Both engines are generic over a [`core::DomainAdapter`]. The crate ships
//! three adapter families: the exact-arithmetic Game of 24 oracle
//! ([`game24`]), a synthetic multi-step arithmetic domain with known DAG
//! structure ([`mathdag`]), and chat-completion adapters speaking an
//! OpenAI-compatible wire format ([`llm`]). [`baselines`] adds a single
//! forward chain and a breadth-limited forward tree under the same
//! visited-state accounting, and [`bench`] runs datasets through any of the
//! methods and aggregates accuracy and search cost.
//!
//! Start with the runnable examples (`cargo run --example solve_game24`);
//! each one exercises a single capability end to end.

pub mod baselines;
pub mod bench;
pub mod core;
pub mod engines;
pub mod game24;
pub mod llm;
pub mod mathdag;

pub use crate::core::{
    AdapterError, AvoidEntry, AvoidSet, AvoidView, BackwardMode, BackwardOutcome, Capability,
    ConfigError, DomainAdapter, EngineConfig, EventDetail, EventKind, ForwardOutcome, Frame,
    Outcome, ProblemState, SearchPath, SearchTrace, TargetState, TraceEvent, Verdict,
};
pub use engines::{run_rff_g, run_rff_t, set_backward_mode};
