//! Retrying chat client over a pluggable transport.

use std::sync::{Arc, Condvar, Mutex};

use super::config::LlmConfig;
use super::transport::{request_hash, ChatTransport, HttpTransport};
use super::LlmError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Role {
    System,
    User,
    Assistant,
}

impl Role {
    fn tag(self) -> &'static str {
        match self {
            Role::System => "system",
            Role::User => "user",
            Role::Assistant => "assistant",
        }
    }
}

/// One successful exchange: the assistant text, the request hash recorded
/// in traces and cassettes, and how many retries it took.
#[derive(Clone, Debug)]
pub struct ChatExchange {
    pub reply: String,
    pub request_hash: String,
    pub retries: u32,
}

/// Counting semaphore bounding in-flight requests across shared clients.
struct Limiter {
    slots: Mutex<usize>,
    freed: Condvar,
}

impl Limiter {
    fn new(slots: usize) -> Self {
        Limiter {
            slots: Mutex::new(slots.max(1)),
            freed: Condvar::new(),
        }
    }

    fn acquire(&self) {
        let mut slots = self.slots.lock().expect("limiter lock");
        while *slots == 0 {
            slots = self.freed.wait(slots).expect("limiter wait");
        }
        *slots -= 1;
    }

    fn release(&self) {
        *self.slots.lock().expect("limiter lock") += 1;
        self.freed.notify_one();
    }
}

/// Shareable across concurrent runs; each call is independent, retried with
/// exponential backoff on transport failures, timeouts, 429s, and 5xx
/// statuses. Authentication failures are never retried.
pub struct ChatClient {
    cfg: LlmConfig,
    transport: Arc<dyn ChatTransport>,
    limiter: Arc<Limiter>,
}

impl ChatClient {
    pub fn new(cfg: LlmConfig, transport: Arc<dyn ChatTransport>) -> Self {
        let limiter = Arc::new(Limiter::new(cfg.max_concurrent));
        ChatClient {
            cfg,
            transport,
            limiter,
        }
    }

    /// Client over a live HTTP endpoint described by the config.
    pub fn over_http(cfg: LlmConfig) -> Result<Self, LlmError> {
        let transport = Arc::new(HttpTransport::new(&cfg)?);
        Ok(ChatClient::new(cfg, transport))
    }

    pub fn config(&self) -> &LlmConfig {
        &self.cfg
    }

    fn request_body(&self, messages: &[(Role, String)]) -> String {
        let rendered: Vec<serde_json::Value> = messages
            .iter()
            .map(|(role, content)| {
                serde_json::json!({"role": role.tag(), "content": content})
            })
            .collect();
        serde_json::json!({
            "model": self.cfg.model,
            "messages": rendered,
            "temperature": self.cfg.temperature,
        })
        .to_string()
    }

    /// One completion. The returned exchange records the request hash so
    /// traces stay joinable with cassettes.
    pub fn chat(&self, messages: &[(Role, String)]) -> Result<ChatExchange, LlmError> {
        let body = self.request_body(messages);
        let hash = request_hash(&body);
        let mut last_error = LlmError::Transport("no attempt made".to_string());
        for attempt in 0..=self.cfg.max_retries {
            if attempt > 0 {
                let backoff = self.cfg.backoff_base.saturating_mul(1 << (attempt - 1).min(8));
                std::thread::sleep(backoff);
            }
            self.limiter.acquire();
            let sent = self.transport.send(&body);
            self.limiter.release();
            match sent {
                Ok(reply) => match reply.status {
                    200 => match extract_content(&reply.body) {
                        Ok(content) => {
                            return Ok(ChatExchange {
                                reply: content,
                                request_hash: hash,
                                retries: attempt,
                            })
                        }
                        Err(e) => last_error = e,
                    },
                    401 | 403 => {
                        return Err(LlmError::Auth(format!(
                            "status {}: {}",
                            reply.status,
                            excerpt(&reply.body)
                        )))
                    }
                    429 => {
                        last_error =
                            LlmError::Transport(format!("status 429: {}", excerpt(&reply.body)))
                    }
                    status if status >= 500 => {
                        last_error = LlmError::Transport(format!(
                            "status {status}: {}",
                            excerpt(&reply.body)
                        ))
                    }
                    status => {
                        return Err(LlmError::Transport(format!(
                            "unretryable status {status}: {}",
                            excerpt(&reply.body)
                        )))
                    }
                },
                Err(e @ (LlmError::Transport(_) | LlmError::Timeout(_))) => last_error = e,
                Err(other) => return Err(other),
            }
        }
        Err(last_error)
    }
}

fn excerpt(body: &str) -> String {
    let trimmed: String = body.chars().take(120).collect();
    trimmed.replace('\n', " ")
}

/// Pulls the assistant text out of a chat-completion body; anything else is
/// a transport-level malformation reported with a body excerpt.
fn extract_content(body: &str) -> Result<String, LlmError> {
    let value: serde_json::Value = serde_json::from_str(body)
        .map_err(|_| LlmError::Transport(format!("malformed body: {}", excerpt(body))))?;
    value["choices"][0]["message"]["content"]
        .as_str()
        .map(str::to_string)
        .ok_or_else(|| LlmError::Transport(format!("no completion content: {}", excerpt(body))))
}
