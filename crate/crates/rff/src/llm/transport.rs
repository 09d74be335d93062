//! Pluggable wire layer: live HTTP, scripted replies, and cassette
//! record/replay keyed by request content hash.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::path::{Path, PathBuf};
use std::sync::Mutex;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::LlmError;
use crate::llm::config::LlmConfig;

/// Raw outcome of one request: HTTP status plus body text.
#[derive(Clone, Debug)]
pub struct TransportReply {
    pub status: u16,
    pub body: String,
}

/// One request on the wire; errors here are transport-level (connectivity,
/// timeouts), not HTTP statuses.
pub trait ChatTransport: Send + Sync {
    fn send(&self, request_body: &str) -> Result<TransportReply, LlmError>;
}

/// Content hash used as the cassette key and recorded in traces.
pub fn request_hash(body: &str) -> String {
    let digest = Sha256::digest(body.as_bytes());
    digest.iter().fold(String::new(), |mut acc, b| {
        acc.push_str(&format!("{b:02x}"));
        acc
    })
}

pub struct HttpTransport {
    client: reqwest::blocking::Client,
    url: String,
    api_key: Option<String>,
}

impl HttpTransport {
    pub fn new(cfg: &LlmConfig) -> Result<Self, LlmError> {
        let client = reqwest::blocking::Client::builder()
            .timeout(cfg.timeout)
            .build()
            .map_err(|e| LlmError::Transport(e.to_string()))?;
        let url = format!("{}/chat/completions", cfg.base_url.trim_end_matches('/'));
        Ok(HttpTransport {
            client,
            url,
            api_key: std::env::var(&cfg.api_key_env).ok(),
        })
    }
}

impl ChatTransport for HttpTransport {
    fn send(&self, request_body: &str) -> Result<TransportReply, LlmError> {
        let mut req = self
            .client
            .post(&self.url)
            .header("content-type", "application/json")
            .body(request_body.to_string());
        if let Some(key) = &self.api_key {
            req = req.header("authorization", format!("Bearer {key}"));
        }
        let resp = req.send().map_err(|e| {
            if e.is_timeout() {
                LlmError::Timeout(e.to_string())
            } else {
                LlmError::Transport(e.to_string())
            }
        })?;
        let status = resp.status().as_u16();
        let body = resp
            .text()
            .map_err(|e| LlmError::Transport(e.to_string()))?;
        Ok(TransportReply { status, body })
    }
}

/// Scripted transport for tests and offline recording: pops one reply per
/// request.
pub struct ScriptedTransport {
    replies: Mutex<VecDeque<TransportReply>>,
}

impl ScriptedTransport {
    pub fn new(replies: Vec<TransportReply>) -> Self {
        ScriptedTransport {
            replies: Mutex::new(replies.into()),
        }
    }

    /// Wraps plain assistant texts into 200-status chat completions.
    pub fn from_contents(contents: Vec<&str>) -> Self {
        ScriptedTransport::new(
            contents
                .into_iter()
                .map(|c| TransportReply {
                    status: 200,
                    body: completion_body(c),
                })
                .collect(),
        )
    }
}

/// Renders a minimal OpenAI-compatible completion body around a reply text.
pub fn completion_body(content: &str) -> String {
    serde_json::json!({
        "id": "scripted",
        "object": "chat.completion",
        "choices": [{
            "index": 0,
            "message": {"role": "assistant", "content": content},
            "finish_reason": "stop"
        }]
    })
    .to_string()
}

impl ChatTransport for ScriptedTransport {
    fn send(&self, _request_body: &str) -> Result<TransportReply, LlmError> {
        self.replies
            .lock()
            .expect("script lock")
            .pop_front()
            .ok_or_else(|| LlmError::Transport("script exhausted".to_string()))
    }
}

/// Recorded request/reply pairs, keyed by request hash; repeated identical
/// requests append to the same entry and replay in order.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct Cassette {
    pub entries: BTreeMap<String, CassetteEntry>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CassetteEntry {
    pub request: String,
    pub replies: Vec<String>,
}

impl Cassette {
    pub fn load(path: &Path) -> Result<Cassette, LlmError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| LlmError::Cassette(format!("read {}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| LlmError::Cassette(e.to_string()))
    }

    pub fn save(&self, path: &Path) -> Result<(), LlmError> {
        let text =
            serde_json::to_string_pretty(self).map_err(|e| LlmError::Cassette(e.to_string()))?;
        std::fs::write(path, text)
            .map_err(|e| LlmError::Cassette(format!("write {}: {e}", path.display())))
    }

    pub fn record(&mut self, request: &str, reply_body: &str) {
        let hash = request_hash(request);
        let entry = self.entries.entry(hash).or_insert_with(|| CassetteEntry {
            request: request.to_string(),
            replies: Vec::new(),
        });
        entry.replies.push(reply_body.to_string());
    }
}

/// Replays a cassette with the network fully out of the loop; a request
/// without a recorded reply is an error, never a live call.
pub struct ReplayTransport {
    cassette: Cassette,
    cursors: Mutex<HashMap<String, usize>>,
}

impl ReplayTransport {
    pub fn new(cassette: Cassette) -> Self {
        ReplayTransport {
            cassette,
            cursors: Mutex::new(HashMap::new()),
        }
    }

    pub fn from_file(path: &Path) -> Result<Self, LlmError> {
        Ok(ReplayTransport::new(Cassette::load(path)?))
    }
}

impl ChatTransport for ReplayTransport {
    fn send(&self, request_body: &str) -> Result<TransportReply, LlmError> {
        let hash = request_hash(request_body);
        let entry = self.cassette.entries.get(&hash).ok_or_else(|| {
            LlmError::Cassette(format!("no recorded reply for request {hash}"))
        })?;
        let mut cursors = self.cursors.lock().expect("cursor lock");
        let cursor = cursors.entry(hash.clone()).or_insert(0);
        let reply = entry.replies.get(*cursor).ok_or_else(|| {
            LlmError::Cassette(format!("cassette exhausted for request {hash}"))
        })?;
        *cursor += 1;
        Ok(TransportReply {
            status: 200,
            body: reply.clone(),
        })
    }
}

/// Wraps any transport and records successful replies to a cassette file,
/// written through on every exchange.
pub struct RecordingTransport<T: ChatTransport> {
    inner: T,
    cassette: Mutex<Cassette>,
    path: PathBuf,
}

impl<T: ChatTransport> RecordingTransport<T> {
    pub fn new(inner: T, path: PathBuf) -> Self {
        RecordingTransport {
            inner,
            cassette: Mutex::new(Cassette::default()),
            path,
        }
    }
}

impl<T: ChatTransport> ChatTransport for RecordingTransport<T> {
    fn send(&self, request_body: &str) -> Result<TransportReply, LlmError> {
        let reply = self.inner.send(request_body)?;
        if reply.status == 200 {
            let mut cassette = self.cassette.lock().expect("cassette lock");
            cassette.record(request_body, &reply.body);
            cassette.save(&self.path)?;
        }
        Ok(reply)
    }
}
