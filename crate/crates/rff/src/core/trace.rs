//! Replayable run logs.
//!
//! A trace serializes to line-delimited text, one event per line, so golden
//! files can be compared byte for byte. The format is pinned:
//!
//! ```text
//! #rff-trace v1
//! #run=<escaped run header: domain, engine, config echo>
//! <seq>\t<kind>\t<depth>\t<field>=<value>...
//! #visited=<n>
//! #outcome=solved\t<answer> | unsolved\t<reason> | steplimit
//! ```
//!
//! Field order per kind is fixed; optional fields (`req`, `raw`) are omitted
//! entirely when absent. Values escape `\`, tab, and newline as `\\`, `\t`,
//! `\n`. Event kinds and their fields:
//!
//! * `backward`: `target`, `note`, then optional `req`, `raw`
//! * `forward`:  `state`, `move`, `avoid`, then optional `req`, `raw`
//! * `check`:    `state`, `target`, `pass`
//! * `verify`:   `verdict` (`valid` or `revisit`), `to` when revisiting
//! * `backtrack`: `to`, `state`, `target` (the condemned pair)
//! * `output`:   `answer`
//!
//! For a `backtrack` line the depth column records the depth whose
//! production was abandoned, so `to` is always strictly smaller.

use super::error::TraceParseError;

/// What a run ended with.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    Solved(String),
    Unsolved(String),
    StepLimit,
}

impl Outcome {
    pub fn is_solved(&self) -> bool {
        matches!(self, Outcome::Solved(_))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EventKind {
    BackwardStep,
    ForwardStep,
    StateCheck,
    Verify,
    Backtrack,
    Output,
}

impl EventKind {
    fn tag(self) -> &'static str {
        match self {
            EventKind::BackwardStep => "backward",
            EventKind::ForwardStep => "forward",
            EventKind::StateCheck => "check",
            EventKind::Verify => "verify",
            EventKind::Backtrack => "backtrack",
            EventKind::Output => "output",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EventDetail {
    Backward {
        target: String,
        note: String,
        req: Option<String>,
        raw: Option<String>,
    },
    Forward {
        state: String,
        provenance: String,
        avoid_len: usize,
        req: Option<String>,
        raw: Option<String>,
    },
    Check {
        state: String,
        target: String,
        passed: bool,
    },
    Verify {
        /// `None` means the path verified; `Some(j)` names the depth to
        /// revisit.
        revisit: Option<usize>,
    },
    Backtrack {
        to: usize,
        state: String,
        target: String,
    },
    Output {
        answer: String,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceEvent {
    pub seq: u64,
    pub kind: EventKind,
    pub depth: usize,
    pub detail: EventDetail,
}

/// Ordered event log with the visited-state counter and the outcome.
///
/// `visited_states` equals the number of `ForwardStep` events at every
/// prefix of the log; the engines maintain that equality and tests assert
/// it from serialized traces alone.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchTrace {
    pub header: String,
    pub events: Vec<TraceEvent>,
    pub visited_states: u64,
    pub outcome: Outcome,
}

fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '\\' => out.push_str("\\\\"),
            '\t' => out.push_str("\\t"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            _ => out.push(c),
        }
    }
    out
}

fn unescape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    let mut chars = s.chars();
    while let Some(c) = chars.next() {
        if c != '\\' {
            out.push(c);
            continue;
        }
        match chars.next() {
            Some('\\') => out.push('\\'),
            Some('t') => out.push('\t'),
            Some('n') => out.push('\n'),
            Some('r') => out.push('\r'),
            Some(other) => {
                out.push('\\');
                out.push(other);
            }
            None => out.push('\\'),
        }
    }
    out
}

impl SearchTrace {
    pub fn forward_step_count(&self) -> u64 {
        self.events
            .iter()
            .filter(|e| e.kind == EventKind::ForwardStep)
            .count() as u64
    }

    pub fn serialize(&self) -> String {
        let mut out = String::new();
        out.push_str("#rff-trace v1\n");
        out.push_str("#run=");
        out.push_str(&escape(&self.header));
        out.push('\n');
        for ev in &self.events {
            out.push_str(&format!("{}\t{}\t{}", ev.seq, ev.kind.tag(), ev.depth));
            let mut field = |k: &str, v: &str| {
                out.push('\t');
                out.push_str(k);
                out.push('=');
                out.push_str(&escape(v));
            };
            match &ev.detail {
                EventDetail::Backward {
                    target,
                    note,
                    req,
                    raw,
                } => {
                    field("target", target);
                    field("note", note);
                    if let Some(r) = req {
                        field("req", r);
                    }
                    if let Some(r) = raw {
                        field("raw", r);
                    }
                }
                EventDetail::Forward {
                    state,
                    provenance,
                    avoid_len,
                    req,
                    raw,
                } => {
                    field("state", state);
                    field("move", provenance);
                    field("avoid", &avoid_len.to_string());
                    if let Some(r) = req {
                        field("req", r);
                    }
                    if let Some(r) = raw {
                        field("raw", r);
                    }
                }
                EventDetail::Check {
                    state,
                    target,
                    passed,
                } => {
                    field("state", state);
                    field("target", target);
                    field("pass", if *passed { "true" } else { "false" });
                }
                EventDetail::Verify { revisit } => match revisit {
                    None => field("verdict", "valid"),
                    Some(j) => {
                        field("verdict", "revisit");
                        field("to", &j.to_string());
                    }
                },
                EventDetail::Backtrack { to, state, target } => {
                    field("to", &to.to_string());
                    field("state", state);
                    field("target", target);
                }
                EventDetail::Output { answer } => field("answer", answer),
            }
            out.push('\n');
        }
        out.push_str(&format!("#visited={}\n", self.visited_states));
        match &self.outcome {
            Outcome::Solved(answer) => {
                out.push_str(&format!("#outcome=solved\t{}\n", escape(answer)))
            }
            Outcome::Unsolved(reason) => {
                out.push_str(&format!("#outcome=unsolved\t{}\n", escape(reason)))
            }
            Outcome::StepLimit => out.push_str("#outcome=steplimit\n"),
        }
        out
    }

    pub fn parse(text: &str) -> Result<SearchTrace, TraceParseError> {
        let err = |line: usize, message: &str| TraceParseError {
            line,
            message: message.to_string(),
        };
        let mut header = String::new();
        let mut events = Vec::new();
        let mut visited: Option<u64> = None;
        let mut outcome: Option<Outcome> = None;
        for (idx, line) in text.lines().enumerate() {
            let lineno = idx + 1;
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix('#') {
                if rest.starts_with("rff-trace") {
                    continue;
                } else if let Some(v) = rest.strip_prefix("run=") {
                    header = unescape(v);
                } else if let Some(v) = rest.strip_prefix("visited=") {
                    visited =
                        Some(v.parse().map_err(|_| err(lineno, "bad visited counter"))?);
                } else if let Some(v) = rest.strip_prefix("outcome=") {
                    let mut parts = v.splitn(2, '\t');
                    let tag = parts.next().unwrap_or_default();
                    let payload = parts.next().map(unescape).unwrap_or_default();
                    outcome = Some(match tag {
                        "solved" => Outcome::Solved(payload),
                        "unsolved" => Outcome::Unsolved(payload),
                        "steplimit" => Outcome::StepLimit,
                        _ => return Err(err(lineno, "unknown outcome tag")),
                    });
                } else {
                    return Err(err(lineno, "unknown trailer"));
                }
                continue;
            }
            let mut cols = line.split('\t');
            let seq: u64 = cols
                .next()
                .and_then(|c| c.parse().ok())
                .ok_or_else(|| err(lineno, "bad seq"))?;
            let kind = cols.next().ok_or_else(|| err(lineno, "missing kind"))?;
            let depth: usize = cols
                .next()
                .and_then(|c| c.parse().ok())
                .ok_or_else(|| err(lineno, "bad depth"))?;
            let mut fields: Vec<(String, String)> = Vec::new();
            for col in cols {
                let (k, v) = col
                    .split_once('=')
                    .ok_or_else(|| err(lineno, "field without '='"))?;
                fields.push((k.to_string(), unescape(v)));
            }
            let get = |name: &str| -> Option<String> {
                fields
                    .iter()
                    .find(|(k, _)| k == name)
                    .map(|(_, v)| v.clone())
            };
            let need = |name: &str| -> Result<String, TraceParseError> {
                get(name).ok_or_else(|| err(lineno, "missing field"))
            };
            let (kind, detail) = match kind {
                "backward" => (
                    EventKind::BackwardStep,
                    EventDetail::Backward {
                        target: need("target")?,
                        note: need("note")?,
                        req: get("req"),
                        raw: get("raw"),
                    },
                ),
                "forward" => (
                    EventKind::ForwardStep,
                    EventDetail::Forward {
                        state: need("state")?,
                        provenance: need("move")?,
                        avoid_len: need("avoid")?
                            .parse()
                            .map_err(|_| err(lineno, "bad avoid count"))?,
                        req: get("req"),
                        raw: get("raw"),
                    },
                ),
                "check" => (
                    EventKind::StateCheck,
                    EventDetail::Check {
                        state: need("state")?,
                        target: need("target")?,
                        passed: need("pass")? == "true",
                    },
                ),
                "verify" => (
                    EventKind::Verify,
                    EventDetail::Verify {
                        revisit: match need("verdict")?.as_str() {
                            "valid" => None,
                            "revisit" => Some(
                                need("to")?
                                    .parse()
                                    .map_err(|_| err(lineno, "bad revisit depth"))?,
                            ),
                            _ => return Err(err(lineno, "unknown verdict")),
                        },
                    },
                ),
                "backtrack" => (
                    EventKind::Backtrack,
                    EventDetail::Backtrack {
                        to: need("to")?
                            .parse()
                            .map_err(|_| err(lineno, "bad backtrack depth"))?,
                        state: need("state")?,
                        target: need("target")?,
                    },
                ),
                "output" => (
                    EventKind::Output,
                    EventDetail::Output {
                        answer: need("answer")?,
                    },
                ),
                _ => return Err(err(lineno, "unknown event kind")),
            };
            events.push(TraceEvent {
                seq,
                kind,
                depth,
                detail,
            });
        }
        Ok(SearchTrace {
            header,
            events,
            visited_states: visited.ok_or_else(|| err(0, "missing visited trailer"))?,
            outcome: outcome.ok_or_else(|| err(0, "missing outcome trailer"))?,
        })
    }
}

/// Accumulates events with a monotone sequence counter; the engines own one
/// per run.
#[derive(Debug)]
pub struct TraceBuilder {
    header: String,
    events: Vec<TraceEvent>,
    seq: u64,
    visited: u64,
}

impl TraceBuilder {
    pub fn new(header: impl Into<String>) -> Self {
        TraceBuilder {
            header: header.into(),
            events: Vec::new(),
            seq: 0,
            visited: 0,
        }
    }

    fn push(&mut self, kind: EventKind, depth: usize, detail: EventDetail) {
        self.events.push(TraceEvent {
            seq: self.seq,
            kind,
            depth,
            detail,
        });
        self.seq += 1;
    }

    pub fn backward(
        &mut self,
        depth: usize,
        target: String,
        note: String,
        req: Option<String>,
        raw: Option<String>,
    ) {
        self.push(
            EventKind::BackwardStep,
            depth,
            EventDetail::Backward {
                target,
                note,
                req,
                raw,
            },
        );
    }

    /// Records one forward expansion and charges one visited state.
    pub fn forward(
        &mut self,
        depth: usize,
        state: String,
        provenance: String,
        avoid_len: usize,
        req: Option<String>,
        raw: Option<String>,
    ) {
        self.visited += 1;
        self.push(
            EventKind::ForwardStep,
            depth,
            EventDetail::Forward {
                state,
                provenance,
                avoid_len,
                req,
                raw,
            },
        );
    }

    pub fn check(&mut self, depth: usize, state: String, target: String, passed: bool) {
        self.push(
            EventKind::StateCheck,
            depth,
            EventDetail::Check {
                state,
                target,
                passed,
            },
        );
    }

    pub fn verify(&mut self, depth: usize, revisit: Option<usize>) {
        self.push(EventKind::Verify, depth, EventDetail::Verify { revisit });
    }

    pub fn backtrack(&mut self, depth: usize, to: usize, state: String, target: String) {
        debug_assert!(to < depth, "backtrack must name a shallower depth");
        self.push(
            EventKind::Backtrack,
            depth,
            EventDetail::Backtrack { to, state, target },
        );
    }

    pub fn output(&mut self, depth: usize, answer: String) {
        self.push(EventKind::Output, depth, EventDetail::Output { answer });
    }

    pub fn visited(&self) -> u64 {
        self.visited
    }

    pub fn finish(self, outcome: Outcome) -> SearchTrace {
        SearchTrace {
            header: self.header,
            events: self.events,
            visited_states: self.visited,
            outcome,
        }
    }
}
