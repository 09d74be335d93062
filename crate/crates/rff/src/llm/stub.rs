//! Minimal scripted chat-completion endpoint over a local socket, for
//! tests and offline examples. Each incoming request consumes the next
//! scripted reply; the server stops after the script is drained.

use std::io::{BufRead, BufReader, Read, Write};
use std::net::TcpListener;
use std::thread::JoinHandle;

use super::transport::completion_body;

/// One scripted response.
#[derive(Clone, Debug)]
pub enum StubReply {
    /// 200 with the text wrapped in a chat-completion body.
    Content(String),
    /// Arbitrary status and raw body.
    Status(u16, String),
}

impl StubReply {
    pub fn content(text: &str) -> StubReply {
        StubReply::Content(text.to_string())
    }
}

pub struct StubServer {
    base_url: String,
    handle: Option<JoinHandle<Vec<String>>>,
}

impl StubServer {
    /// Binds a local port and serves the script in order.
    pub fn start(script: Vec<StubReply>) -> std::io::Result<StubServer> {
        let listener = TcpListener::bind("127.0.0.1:0")?;
        let base_url = format!("http://{}", listener.local_addr()?);
        let handle = std::thread::spawn(move || serve(listener, script));
        Ok(StubServer {
            base_url,
            handle: Some(handle),
        })
    }

    /// Endpoint root, e.g. `http://127.0.0.1:39141`.
    pub fn base_url(&self) -> &str {
        &self.base_url
    }

    /// Waits for the script to drain and returns the request bodies seen.
    pub fn finish(mut self) -> Vec<String> {
        self.handle
            .take()
            .expect("finish is called once")
            .join()
            .expect("stub server thread")
    }
}

impl Drop for StubServer {
    fn drop(&mut self) {
        if let Some(handle) = self.handle.take() {
            // unblock the acceptor if the script was not drained
            let _ = std::net::TcpStream::connect(
                self.base_url.trim_start_matches("http://"),
            );
            let _ = handle.join();
        }
    }
}

fn serve(listener: TcpListener, script: Vec<StubReply>) -> Vec<String> {
    let mut seen = Vec::new();
    for reply in script {
        let Ok((stream, _)) = listener.accept() else {
            break;
        };
        match handle_connection(stream, &reply) {
            Some(body) => seen.push(body),
            None => break,
        }
    }
    seen
}

fn handle_connection(stream: std::net::TcpStream, reply: &StubReply) -> Option<String> {
    let mut reader = BufReader::new(stream);
    let mut content_length = 0usize;
    loop {
        let mut line = String::new();
        if reader.read_line(&mut line).ok()? == 0 {
            return None;
        }
        let line = line.trim_end();
        if line.is_empty() {
            break;
        }
        if let Some(v) = line
            .to_ascii_lowercase()
            .strip_prefix("content-length:")
            .map(str::trim)
            .and_then(|v| v.parse::<usize>().ok())
        {
            content_length = v;
        }
    }
    let mut body = vec![0u8; content_length];
    reader.read_exact(&mut body).ok()?;
    let body = String::from_utf8_lossy(&body).to_string();

    let (status, payload) = match reply {
        StubReply::Content(text) => (200, completion_body(text)),
        StubReply::Status(status, raw) => (*status, raw.clone()),
    };
    let reason = match status {
        200 => "OK",
        401 => "Unauthorized",
        429 => "Too Many Requests",
        500 => "Internal Server Error",
        _ => "Status",
    };
    let response = format!(
        "HTTP/1.1 {status} {reason}\r\ncontent-type: application/json\r\ncontent-length: {}\r\nconnection: close\r\n\r\n{payload}",
        payload.len()
    );
    let mut stream = reader.into_inner();
    stream.write_all(response.as_bytes()).ok()?;
    stream.flush().ok()?;
    Some(body)
}
