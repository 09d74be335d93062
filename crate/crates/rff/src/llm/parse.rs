//! The documented reply grammar. Templates instruct fixed line formats;
//! these parsers extract them and nothing else. Failures are typed, never
//! silent defaults, with one exception: verifier replies fall back to a
//! caller-supplied depth, the clamp rule the engines document.

use regex::Regex;
use std::sync::OnceLock;

use super::LlmError;
use crate::game24::{parse_rat, ArithMove, NumberSet, Rat};

fn move_re() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| {
        Regex::new(r"(-?\d+(?:/\d+)?)\s*([+*/-])\s*(-?\d+(?:/\d+)?)\s*=\s*(-?\d+(?:/\d+)?)")
            .expect("static pattern")
    })
}

/// First `a op b = c` found anywhere in the text, exact or not; the caller
/// decides what to do with lies.
pub fn parse_move(reply: &str) -> Result<ArithMove, LlmError> {
    let caps = move_re()
        .captures(reply)
        .ok_or_else(|| LlmError::Parse(format!("no move of the form a op b = c in {reply:?}")))?;
    let text = format!("{} {} {} = {}", &caps[1], &caps[2], &caps[3], &caps[4]);
    ArithMove::parse(&text).ok_or_else(|| LlmError::Parse(format!("unparseable move {text:?}")))
}

/// `Target: <numbers>, because <a op b = v>`. The transition is mandatory;
/// replies without it are rejected.
pub fn parse_target(reply: &str) -> Result<(NumberSet, ArithMove), LlmError> {
    static RE: OnceLock<Regex> = OnceLock::new();
    let re = RE.get_or_init(|| {
        Regex::new(r"(?im)^\s*target\s*:\s*([-0-9/\s]+?)\s*,?\s*(?:because|since)\s+(.+)$")
            .expect("static pattern")
    });
    let caps = re.captures(reply).ok_or_else(|| {
        LlmError::Parse(format!(
            "no 'Target: <numbers>, because <transition>' line in {reply:?}"
        ))
    })?;
    let numbers: Option<Vec<Rat>> = caps[1].split_whitespace().map(parse_rat).collect();
    let numbers =
        numbers.ok_or_else(|| LlmError::Parse(format!("bad target numbers in {reply:?}")))?;
    if numbers.is_empty() {
        return Err(LlmError::Parse(format!("empty target set in {reply:?}")));
    }
    let transition = parse_move(&caps[2])?;
    Ok((NumberSet::from_values(numbers), transition))
}

/// `Need: <name>, because <rationale>` for math targets.
pub fn parse_need(reply: &str) -> Result<(String, String), LlmError> {
    static RE: OnceLock<Regex> = OnceLock::new();
    let re = RE.get_or_init(|| {
        Regex::new(r"(?im)^\s*need\s*:\s*([A-Za-z_][A-Za-z0-9_]*)\s*,?\s*(?:because|since)\s+(.+)$")
            .expect("static pattern")
    });
    let caps = re.captures(reply).ok_or_else(|| {
        LlmError::Parse(format!(
            "no 'Need: <name>, because <rationale>' line in {reply:?}"
        ))
    })?;
    Ok((caps[1].to_string(), caps[2].trim().to_string()))
}

/// `Fact: <name> = <value>`; decimal values become exact rationals.
pub fn parse_fact(reply: &str) -> Result<(String, Rat), LlmError> {
    static RE: OnceLock<Regex> = OnceLock::new();
    let re = RE.get_or_init(|| {
        Regex::new(r"(?im)^\s*fact\s*:\s*([A-Za-z_][A-Za-z0-9_]*)\s*=\s*(-?\d+(?:[./]\d+)?)")
            .expect("static pattern")
    });
    let caps = re.captures(reply).ok_or_else(|| {
        LlmError::Parse(format!("no 'Fact: <name> = <value>' line in {reply:?}"))
    })?;
    let value = parse_number(&caps[2])
        .ok_or_else(|| LlmError::Parse(format!("bad fact value in {reply:?}")))?;
    Ok((caps[1].to_string(), value))
}

/// Integers, fractions, or decimals, all as exact rationals.
pub fn parse_number(text: &str) -> Option<Rat> {
    let text = text.trim();
    if let Some((whole, frac)) = text.split_once('.') {
        let scale = 10i64.checked_pow(frac.len() as u32)?;
        let whole_part = parse_rat(whole)?;
        let frac_part = parse_rat(frac)?;
        let signed_frac = if whole.starts_with('-') {
            -frac_part
        } else {
            frac_part
        };
        return Some(whole_part + signed_frac / parse_rat(&scale.to_string())?);
    }
    parse_rat(text)
}

/// Yes/no verdict: the first standalone yes or no token decides.
pub fn parse_verdict(reply: &str) -> Result<bool, LlmError> {
    static RE: OnceLock<Regex> = OnceLock::new();
    let re = RE.get_or_init(|| Regex::new(r"(?i)\b(yes|no)\b").expect("static pattern"));
    let caps = re
        .captures(reply)
        .ok_or_else(|| LlmError::Parse(format!("no yes/no verdict in {reply:?}")))?;
    Ok(caps[1].eq_ignore_ascii_case("yes"))
}

/// Verifier reply: `valid`/`correct` accepts the path; otherwise the first
/// integer names the step to revisit, clamped by the caller; anything else
/// falls back to `default_step` (the documented clamp rule).
pub fn parse_backtrack(reply: &str, default_step: usize) -> Option<usize> {
    static VALID: OnceLock<Regex> = OnceLock::new();
    let valid = VALID.get_or_init(|| Regex::new(r"(?i)\b(valid|correct)\b").expect("static"));
    if valid.is_match(reply) {
        return None;
    }
    static INT: OnceLock<Regex> = OnceLock::new();
    let int = INT.get_or_init(|| Regex::new(r"\d+").expect("static"));
    let step = int
        .find(reply)
        .and_then(|m| m.as_str().parse::<usize>().ok())
        .unwrap_or(default_step);
    Some(step)
}

/// `Answer: <text>`; falls back to the last non-empty line.
pub fn parse_answer(reply: &str) -> Result<String, LlmError> {
    static RE: OnceLock<Regex> = OnceLock::new();
    let re =
        RE.get_or_init(|| Regex::new(r"(?im)^\s*answer\s*:\s*(.+)$").expect("static pattern"));
    if let Some(caps) = re.captures(reply) {
        return Ok(caps[1].trim().to_string());
    }
    reply
        .lines()
        .rev()
        .map(str::trim)
        .find(|l| !l.is_empty())
        .map(str::to_string)
        .ok_or_else(|| LlmError::Parse("empty reply".to_string()))
}
