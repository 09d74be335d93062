//! Chat-completion adapters: the engines' five operations implemented by
//! prompting an OpenAI-compatible endpoint, with a documented reply
//! grammar, local re-validation of every checkable claim, retrying
//! transport, and cassette record/replay for network-free determinism.

mod client;
mod config;
mod game24;
mod math;
pub mod parse;
pub mod stub;
mod template;
mod transport;

pub use client::{ChatClient, ChatExchange, Role};
pub use config::LlmConfig;
pub use game24::Game24Llm;
pub use math::MathLlm;
pub use template::{PromptTemplate, TemplateDomain, TemplateRole, TemplateSet};
pub use transport::{
    completion_body, request_hash, Cassette, CassetteEntry, ChatTransport, HttpTransport,
    RecordingTransport, ReplayTransport, ScriptedTransport, TransportReply,
};

use thiserror::Error;

/// Failures of the chat backend, distinct from engine-level outcomes.
#[derive(Debug, Error)]
pub enum LlmError {
    /// Connectivity, malformed bodies, retryable statuses after retries.
    #[error("transport error: {0}")]
    Transport(String),
    #[error("timed out: {0}")]
    Timeout(String),
    /// 401/403; never retried.
    #[error("authentication rejected: {0}")]
    Auth(String),
    /// A reply that does not match the documented grammar.
    #[error("parse error: {0}")]
    Parse(String),
    /// Cassette miss or IO failure during record/replay.
    #[error("cassette error: {0}")]
    Cassette(String),
}
