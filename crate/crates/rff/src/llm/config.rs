use std::time::Duration;

use serde::{Deserialize, Serialize};

/// Connection and sampling settings for a chat-completion endpoint.
///
/// The API key is sourced from the environment variable named by
/// `api_key_env` and never serialized or logged.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LlmConfig {
    pub base_url: String,
    pub model: String,
    pub api_key_env: String,
    pub temperature: f64,
    pub max_retries: u32,
    #[serde(with = "duration_ms")]
    pub timeout: Duration,
    /// Few-shot example count the prompt templates should assume.
    pub shots: u32,
    /// First retry delay; doubles per attempt.
    #[serde(with = "duration_ms")]
    pub backoff_base: Duration,
    /// Global cap on in-flight requests across concurrent runs.
    pub max_concurrent: usize,
}

impl LlmConfig {
    /// Puzzle-style sampling: temperature 0.7.
    pub fn game24(base_url: impl Into<String>, model: impl Into<String>) -> Self {
        LlmConfig {
            base_url: base_url.into(),
            model: model.into(),
            api_key_env: "OPENAI_API_KEY".to_string(),
            temperature: 0.7,
            max_retries: 4,
            timeout: Duration::from_secs(60),
            shots: 1,
            backoff_base: Duration::from_millis(250),
            max_concurrent: 4,
        }
    }

    /// Math-problem settings: greedy decoding, one shot.
    pub fn math(base_url: impl Into<String>, model: impl Into<String>) -> Self {
        LlmConfig {
            temperature: 0.0,
            ..LlmConfig::game24(base_url, model)
        }
    }

    pub fn with_backoff_base(mut self, backoff: Duration) -> Self {
        self.backoff_base = backoff;
        self
    }

    pub fn with_max_retries(mut self, retries: u32) -> Self {
        self.max_retries = retries;
        self
    }
}

mod duration_ms {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(d: &Duration, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_u64(d.as_millis() as u64)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Duration, D::Error> {
        let ms = u64::deserialize(d)?;
        Ok(Duration::from_millis(ms))
    }
}
