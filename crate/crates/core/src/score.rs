//! Score, tier, and dimension domain model shared by every other module.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// The five scored dimensions, in canonical order.
///
/// The first four are the "sub-dimensions"; `Overall` summarises commercial
/// usability and is excluded from the sub-score vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Dimension {
    Object,
    Background,
    Text,
    Layout,
    Overall,
}

impl Dimension {
    /// All five dimensions in canonical order.
    pub const ALL: [Dimension; 5] = [
        Dimension::Object,
        Dimension::Background,
        Dimension::Text,
        Dimension::Layout,
        Dimension::Overall,
    ];

    /// The four sub-dimensions in canonical order (Overall excluded).
    pub const SUB: [Dimension; 4] = [
        Dimension::Object,
        Dimension::Background,
        Dimension::Text,
        Dimension::Layout,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Dimension::Object => "object",
            Dimension::Background => "background",
            Dimension::Text => "text",
            Dimension::Layout => "layout",
            Dimension::Overall => "overall",
        }
    }
}

impl fmt::Display for Dimension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Error, Clone, Copy, PartialEq)]
pub enum ScoreError {
    #[error("score {0} outside the valid range [1.0, 5.0]")]
    OutOfRange(f64),
    #[error("score is not a finite number")]
    NotFinite,
}

/// A quality score in `[1.0, 5.0]`. Out-of-range values are rejected at
/// construction, never clamped.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Score(f64);

impl Score {
    pub const MIN: f64 = 1.0;
    pub const MAX: f64 = 5.0;

    pub fn new(raw: f64) -> Result<Self, ScoreError> {
        if !raw.is_finite() {
            return Err(ScoreError::NotFinite);
        }
        if !(Self::MIN..=Self::MAX).contains(&raw) {
            return Err(ScoreError::OutOfRange(raw));
        }
        Ok(Score(raw))
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn tier(self) -> Tier {
        tier_of(self)
    }
}

impl Serialize for Score {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_f64(self.0)
    }
}

impl<'de> Deserialize<'de> for Score {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let raw = f64::deserialize(deserializer)?;
        Score::new(raw).map_err(serde::de::Error::custom)
    }
}

/// Expert-defined quality tiers anchoring the continuous scale.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Tier {
    Poor,
    Good,
    Excellent,
}

/// Maps a score to its tier: poor `[1.0, 3.0)`, good `[3.0, 4.0)`,
/// excellent `[4.0, 5.0]`.
pub fn tier_of(score: Score) -> Tier {
    let v = score.value();
    if v >= 4.0 {
        Tier::Excellent
    } else if v >= 3.0 {
        Tier::Good
    } else {
        Tier::Poor
    }
}

/// One score per dimension.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScoreVector {
    pub object: Score,
    pub background: Score,
    pub text: Score,
    pub layout: Score,
    pub overall: Score,
}

impl ScoreVector {
    pub fn new(
        object: Score,
        background: Score,
        text: Score,
        layout: Score,
        overall: Score,
    ) -> Self {
        Self {
            object,
            background,
            text,
            layout,
            overall,
        }
    }

    /// Builds a vector from raw values in canonical order
    /// (object, background, text, layout, overall).
    pub fn from_values(values: [f64; 5]) -> Result<Self, ScoreError> {
        Ok(Self {
            object: Score::new(values[0])?,
            background: Score::new(values[1])?,
            text: Score::new(values[2])?,
            layout: Score::new(values[3])?,
            overall: Score::new(values[4])?,
        })
    }

    pub fn get(&self, dim: Dimension) -> Score {
        match dim {
            Dimension::Object => self.object,
            Dimension::Background => self.background,
            Dimension::Text => self.text,
            Dimension::Layout => self.layout,
            Dimension::Overall => self.overall,
        }
    }

    /// All five values in canonical order.
    pub fn values(&self) -> [f64; 5] {
        [
            self.object.value(),
            self.background.value(),
            self.text.value(),
            self.layout.value(),
            self.overall.value(),
        ]
    }

    /// The 4D sub-score vector (Overall excluded), canonical order.
    pub fn sub_vector(&self) -> [f64; 4] {
        [
            self.object.value(),
            self.background.value(),
            self.text.value(),
            self.layout.value(),
        ]
    }
}

/// Where a dataset image came from. Serialization names are stable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SourceKind {
    MerchantHq,
    MerchantLq,
    OpenSource,
    AiGenerated,
    AiEdited,
    Professional,
}

impl SourceKind {
    /// All sources in canonical order.
    pub const ALL: [SourceKind; 6] = [
        SourceKind::MerchantHq,
        SourceKind::MerchantLq,
        SourceKind::OpenSource,
        SourceKind::AiGenerated,
        SourceKind::AiEdited,
        SourceKind::Professional,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SourceKind::MerchantHq => "merchant_hq",
            SourceKind::MerchantLq => "merchant_lq",
            SourceKind::OpenSource => "open_source",
            SourceKind::AiGenerated => "ai_generated",
            SourceKind::AiEdited => "ai_edited",
            SourceKind::Professional => "professional",
        }
    }
}

impl fmt::Display for SourceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Issue tags per sub-dimension. Keys absent in the input deserialize as
/// empty lists.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct TagSet {
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub object: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub background: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub text: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub layout: Vec<String>,
}

impl TagSet {
    pub fn for_dimension(&self, dim: Dimension) -> &[String] {
        match dim {
            Dimension::Object => &self.object,
            Dimension::Background => &self.background,
            Dimension::Text => &self.text,
            Dimension::Layout => &self.layout,
            Dimension::Overall => &[],
        }
    }
}

/// One dataset row: an image id, its source, expert scores, issue tags, and
/// an optional chain-of-thought rationale.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnnotationRecord {
    pub id: String,
    pub source: SourceKind,
    pub scores: ScoreVector,
    #[serde(default)]
    pub tags: TagSet,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cot: Option<String>,
}

#[derive(Debug, Error, PartialEq)]
pub enum RecordError {
    #[error("record has an empty id")]
    EmptyId,
    #[error("duplicate record id: {0}")]
    DuplicateId(String),
    #[error("record {id}: unknown {dimension} tag: {tag}")]
    UnknownTag {
        id: String,
        dimension: Dimension,
        tag: String,
    },
}

/// The per-dimension issue-tag checklist. Validation is opt-in so foreign
/// datasets with their own tag vocabularies still load.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TagTaxonomy {
    pub object: Vec<String>,
    pub background: Vec<String>,
    pub text: Vec<String>,
    pub layout: Vec<String>,
}

/// Default taxonomy shipped with the crate, mirroring the annotation
/// checklist.
pub const DEFAULT_TAXONOMY_JSON: &str = include_str!("../data/tag_taxonomy.json");

impl TagTaxonomy {
    pub fn builtin() -> Self {
        serde_json::from_str(DEFAULT_TAXONOMY_JSON).expect("builtin taxonomy is valid JSON")
    }

    pub fn from_json(json: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(json)
    }

    fn tags_for(&self, dim: Dimension) -> &[String] {
        match dim {
            Dimension::Object => &self.object,
            Dimension::Background => &self.background,
            Dimension::Text => &self.text,
            Dimension::Layout => &self.layout,
            Dimension::Overall => &[],
        }
    }

    /// A tag is valid if it is in the checklist for its dimension or is a
    /// free-form `other:` entry.
    pub fn is_valid(&self, dim: Dimension, tag: &str) -> bool {
        tag.starts_with("other:") || self.tags_for(dim).iter().any(|t| t == tag)
    }
}

/// Checks id uniqueness/non-emptiness across a record set and, when a
/// taxonomy is given, tag membership.
pub fn validate_records(
    records: &[AnnotationRecord],
    taxonomy: Option<&TagTaxonomy>,
) -> Result<(), RecordError> {
    let mut seen: BTreeMap<&str, ()> = BTreeMap::new();
    for rec in records {
        if rec.id.is_empty() {
            return Err(RecordError::EmptyId);
        }
        if seen.insert(&rec.id, ()).is_some() {
            return Err(RecordError::DuplicateId(rec.id.clone()));
        }
        if let Some(tax) = taxonomy {
            for dim in Dimension::SUB {
                for tag in rec.tags.for_dimension(dim) {
                    if !tax.is_valid(dim, tag) {
                        return Err(RecordError::UnknownTag {
                            id: rec.id.clone(),
                            dimension: dim,
                            tag: tag.clone(),
                        });
                    }
                }
            }
        }
    }
    Ok(())
}
