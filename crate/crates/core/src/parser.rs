//! Parses raw model generations into validated score vectors.
//!
//! The expected shape is an optional `<think>…</think>` block followed by a
//! `<answer>…</answer>` block containing a JSON object with the five numeric
//! score keys. Parsing is total: every input maps to a verdict, never an
//! error.

use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

use crate::score::{Score, ScoreVector};

/// Outcome class of a parse, ordered from success to the most specific
/// failure.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    /// Answer block present, JSON valid, all five scores in range.
    Valid,
    /// No well-delimited `<answer>…</answer>` block.
    InvalidStructure,
    /// Answer block present but not parseable JSON.
    InvalidJson,
    /// JSON parsed but is not an object with five numeric score keys.
    InvalidSchema,
    /// All keys present and numeric, but some score outside `[1, 5]`.
    OutOfRangeScore,
}

impl Verdict {
    pub fn name(self) -> &'static str {
        match self {
            Verdict::Valid => "valid",
            Verdict::InvalidStructure => "invalid_structure",
            Verdict::InvalidJson => "invalid_json",
            Verdict::InvalidSchema => "invalid_schema",
            Verdict::OutOfRangeScore => "out_of_range_score",
        }
    }
}

/// A raw generation plus everything extracted from it.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelOutput {
    pub raw: String,
    pub think: Option<String>,
    pub answer_json: Option<Value>,
    pub scores: Option<ScoreVector>,
    pub verdict: Verdict,
}

impl ModelOutput {
    pub fn is_valid(&self) -> bool {
        self.verdict == Verdict::Valid
    }
}

/// Extracts the span between the first `<tag>` and the first following
/// `</tag>`.
fn first_block<'a>(raw: &'a str, tag: &str) -> Option<&'a str> {
    let open = format!("<{tag}>");
    let close = format!("</{tag}>");
    let start = raw.find(&open)? + open.len();
    let rest = &raw[start..];
    let end = rest.find(&close)?;
    Some(&rest[..end])
}

/// Looks up a key case-insensitively (after trimming) and requires a JSON
/// number. Quoted numerals are a schema violation.
fn numeric_key(obj: &serde_json::Map<String, Value>, key: &str) -> Result<f64, Verdict> {
    let found = obj
        .iter()
        .find(|(k, _)| k.trim().eq_ignore_ascii_case(key));
    match found {
        Some((_, Value::Number(n))) => n.as_f64().ok_or(Verdict::InvalidSchema),
        Some(_) => Err(Verdict::InvalidSchema),
        None => Err(Verdict::InvalidSchema),
    }
}

/// Parses a raw generation. Only the first `<think>` and `<answer>` blocks
/// are honored; extra JSON keys are ignored.
pub fn parse_output(raw: &str) -> ModelOutput {
    let think = first_block(raw, "think").map(|s| s.to_owned());

    let mut out = ModelOutput {
        raw: raw.to_owned(),
        think,
        answer_json: None,
        scores: None,
        verdict: Verdict::InvalidStructure,
    };

    let answer = match first_block(raw, "answer") {
        Some(span) => span,
        None => return out,
    };

    let value: Value = match serde_json::from_str(answer) {
        Ok(v) => v,
        Err(_) => {
            out.verdict = Verdict::InvalidJson;
            return out;
        }
    };

    let obj = match value.as_object() {
        Some(o) => o.clone(),
        None => {
            out.answer_json = Some(value);
            out.verdict = Verdict::InvalidSchema;
            return out;
        }
    };
    out.answer_json = Some(Value::Object(obj.clone()));

    let mut values = [0.0f64; 5];
    for (slot, key) in values
        .iter_mut()
        .zip(["object", "background", "text", "layout", "overall"])
    {
        match numeric_key(&obj, key) {
            Ok(v) => *slot = v,
            Err(verdict) => {
                out.verdict = verdict;
                return out;
            }
        }
    }

    let scores = (|| -> Result<ScoreVector, crate::score::ScoreError> {
        Ok(ScoreVector::new(
            Score::new(values[0])?,
            Score::new(values[1])?,
            Score::new(values[2])?,
            Score::new(values[3])?,
            Score::new(values[4])?,
        ))
    })();
    match scores {
        Ok(v) => {
            out.scores = Some(v);
            out.verdict = Verdict::Valid;
        }
        Err(_) => out.verdict = Verdict::OutOfRangeScore,
    }
    out
}

/// How many decode attempts a sample gets before it is marked invalid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RetryPolicy {
    pub max_attempts: u32,
}

impl Default for RetryPolicy {
    fn default() -> Self {
        RetryPolicy { max_attempts: 3 }
    }
}

impl RetryPolicy {
    pub fn new(max_attempts: u32) -> Result<Self, RetryPolicyError> {
        if max_attempts == 0 {
            return Err(RetryPolicyError::ZeroAttempts);
        }
        Ok(RetryPolicy { max_attempts })
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum RetryPolicyError {
    #[error("max_attempts must be at least 1")]
    ZeroAttempts,
}

/// Result of a retried parse: the final output and how many generator calls
/// were spent.
#[derive(Debug, Clone, PartialEq)]
pub struct ParseAttempt {
    pub output: ModelOutput,
    pub attempts_used: u32,
}

/// Generator failure surfaced through [`attempt_parse`], with the attempt
/// count at the point of failure.
#[derive(Debug, Error)]
#[error("generator failed on attempt {attempts}: {source}")]
pub struct GeneratorError<E: std::error::Error> {
    pub attempts: u32,
    #[source]
    pub source: E,
}

/// Invokes `generator` up to `policy.max_attempts` times, returning the
/// first valid output or the last invalid one. Callers map a final invalid
/// output to reward zero.
pub fn attempt_parse<E, F>(
    mut generator: F,
    policy: RetryPolicy,
) -> Result<ParseAttempt, GeneratorError<E>>
where
    E: std::error::Error,
    F: FnMut() -> Result<String, E>,
{
    let mut last = None;
    for attempt in 1..=policy.max_attempts {
        let raw = generator().map_err(|source| GeneratorError {
            attempts: attempt,
            source,
        })?;
        let output = parse_output(&raw);
        let done = output.is_valid();
        last = Some(ParseAttempt {
            output,
            attempts_used: attempt,
        });
        if done {
            break;
        }
    }
    Ok(last.expect("max_attempts >= 1"))
}
