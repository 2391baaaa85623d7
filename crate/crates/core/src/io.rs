//! JSON Lines ingest/emit helpers and the shared batch line formats.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::parser::Verdict;
use crate::score::ScoreVector;

#[derive(Debug, Error)]
pub enum IoError {
    #[error("cannot read {path}: {source}")]
    Read {
        path: String,
        source: std::io::Error,
    },
    #[error("cannot write {path}: {source}")]
    Write {
        path: String,
        source: std::io::Error,
    },
    #[error("{path}:{line}: {source}")]
    Parse {
        path: String,
        line: usize,
        source: serde_json::Error,
    },
}

/// Reads a JSONL file into records; the error carries the offending line
/// number.
pub fn read_jsonl<T: DeserializeOwned>(path: &Path) -> Result<Vec<T>, IoError> {
    let display = path.display().to_string();
    let file = File::open(path).map_err(|source| IoError::Read {
        path: display.clone(),
        source,
    })?;
    let reader = BufReader::new(file);
    let mut records = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line.map_err(|source| IoError::Read {
            path: display.clone(),
            source,
        })?;
        if line.trim().is_empty() {
            continue;
        }
        let record = serde_json::from_str(&line).map_err(|source| IoError::Parse {
            path: display.clone(),
            line: idx + 1,
            source,
        })?;
        records.push(record);
    }
    Ok(records)
}

/// Writes records as one JSON object per line.
pub fn write_jsonl<T: Serialize>(path: &Path, records: &[T]) -> Result<(), IoError> {
    let display = path.display().to_string();
    let mk_err = |source| IoError::Write {
        path: display.clone(),
        source,
    };
    let file = File::create(path).map_err(mk_err)?;
    let mut writer = BufWriter::new(file);
    for record in records {
        let line = serde_json::to_string(record).expect("line formats serialize");
        writeln!(writer, "{line}").map_err(mk_err)?;
    }
    writer.flush().map_err(mk_err)?;
    Ok(())
}

/// Batch input line: one raw generation per id.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RawLine {
    pub id: String,
    pub raw: String,
}

/// Batch parse output line.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParsedLine {
    pub id: String,
    pub verdict: Verdict,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scores: Option<ScoreVector>,
}

/// Batch reward input line: raw generation plus ground-truth scores.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RewardInputLine {
    pub id: String,
    pub raw: String,
    pub gt_scores: ScoreVector,
}

/// Batch reward output line.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RewardOutputLine {
    pub id: String,
    pub r_fmt: f64,
    pub r_acc: f64,
    pub r_dist: f64,
    pub r_score: f64,
    pub total: f64,
}

/// A parsed prediction: one score vector per id.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PredictionLine {
    pub id: String,
    pub scores: ScoreVector,
}

/// One text-metrics case.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TextCaseLine {
    pub case_id: String,
    pub model: String,
    #[serde(default)]
    pub gt_phrases: Vec<String>,
    #[serde(default)]
    pub pred_phrases: Vec<String>,
    #[serde(default)]
    pub gt_text: String,
    #[serde(default)]
    pub pred_text: String,
}

/// Per-model benchmark score line (human or model judge).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchScoreLine {
    pub case_id: String,
    pub model: String,
    pub scores: ScoreVector,
}

#[cfg(test)]
mod tests {
    use super::*;
    use tempfile::tempdir;

    #[test]
    fn jsonl_round_trip() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("raw.jsonl");
        let lines = vec![
            RawLine {
                id: "a".into(),
                raw: "<answer>{}</answer>".into(),
            },
            RawLine {
                id: "b".into(),
                raw: "双十一".into(),
            },
        ];
        write_jsonl(&path, &lines).unwrap();
        let back: Vec<RawLine> = read_jsonl(&path).unwrap();
        assert_eq!(lines, back);
    }

    #[test]
    fn parse_error_carries_line_number() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("bad.jsonl");
        std::fs::write(&path, "{\"id\":\"a\",\"raw\":\"x\"}\nnot json\n").unwrap();
        let err = read_jsonl::<RawLine>(&path).unwrap_err();
        match err {
            IoError::Parse { line, .. } => assert_eq!(line, 2),
            other => panic!("unexpected error: {other}"),
        }
    }

    #[test]
    fn blank_lines_skipped() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("sparse.jsonl");
        std::fs::write(&path, "\n{\"id\":\"a\",\"raw\":\"x\"}\n\n").unwrap();
        let recs: Vec<RawLine> = read_jsonl(&path).unwrap();
        assert_eq!(recs.len(), 1);
    }
}
