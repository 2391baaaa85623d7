//! Dataset-level analytics over a loaded annotation set: inter-dimension
//! correlation, weakest-link attribution, score/CoT distributions,
//! character-level edit rate, and per-source means.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::score::{AnnotationRecord, Dimension, SourceKind};
use crate::stats::{plcc, PairedSeries, StatError};
use crate::text::levenshtein;

#[derive(Debug, Error, PartialEq)]
pub enum AnalysisError {
    #[error("need at least {need} records, got {got}")]
    TooFewRecords { need: usize, got: usize },
    #[error("original text is empty")]
    EmptyOriginal,
    #[error("bins must be at least 1")]
    ZeroBins,
}

/// 4x4 Pearson correlation matrix over the sub-dimensions. Entries are
/// `None` when one of the two series was constant.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrelationMatrix {
    /// Row/column order follows the canonical sub-dimension order.
    pub entries: [[Option<f64>; 4]; 4],
    /// Mean of the defined upper-triangle entries.
    pub mean_offdiag: Option<f64>,
    /// Sub-dimensions whose series was constant.
    pub degenerate: Vec<Dimension>,
}

/// Pairwise Pearson correlations between the four sub-dimension score
/// series, plus the mean of the six upper-triangle entries.
pub fn correlation_matrix(records: &[AnnotationRecord]) -> Result<CorrelationMatrix, AnalysisError> {
    if records.len() < 2 {
        return Err(AnalysisError::TooFewRecords {
            need: 2,
            got: records.len(),
        });
    }
    let series: Vec<Vec<f64>> = Dimension::SUB
        .iter()
        .map(|&d| records.iter().map(|r| r.scores.get(d).value()).collect())
        .collect();

    let mut entries = [[None; 4]; 4];
    let mut degenerate = Vec::new();
    for i in 0..4 {
        entries[i][i] = Some(1.0);
        let constant = series[i].windows(2).all(|w| w[0] == w[1]);
        if constant {
            degenerate.push(Dimension::SUB[i]);
        }
    }
    let mut upper = Vec::new();
    for i in 0..4 {
        for j in (i + 1)..4 {
            let pair = PairedSeries::new(series[i].clone(), series[j].clone())
                .expect("finite equal-length series");
            match plcc(&pair) {
                Ok(r) => {
                    entries[i][j] = Some(r);
                    entries[j][i] = Some(r);
                    upper.push(r);
                }
                Err(StatError::DegenerateSeries) => {}
                Err(e) => unreachable!("unexpected correlation error: {e}"),
            }
        }
    }
    let mean_offdiag = if upper.is_empty() {
        None
    } else {
        Some(upper.iter().sum::<f64>() / upper.len() as f64)
    };
    Ok(CorrelationMatrix {
        entries,
        mean_offdiag,
        degenerate,
    })
}

/// Bottleneck attribution over low-quality records.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeakestLinkReport {
    /// Records with any sub-dimension strictly below the threshold.
    pub flagged: usize,
    pub total: usize,
    /// Bottleneck counts per sub-dimension, canonical order.
    pub counts: BTreeMap<Dimension, usize>,
    /// Bottleneck share per sub-dimension, in percent of flagged records.
    pub percentages: BTreeMap<Dimension, f64>,
    /// Flagged records whose minimum was shared by several dimensions
    /// (attributed to the canonically first one).
    pub ties: usize,
}

/// Flags records whose minimum sub-dimension score is strictly below
/// `threshold` and attributes each to its argmin sub-dimension. Ties go to
/// the canonically first dimension and are counted separately.
pub fn weakest_link(records: &[AnnotationRecord], threshold: f64) -> WeakestLinkReport {
    let mut counts: BTreeMap<Dimension, usize> = Dimension::SUB.iter().map(|&d| (d, 0)).collect();
    let mut flagged = 0usize;
    let mut ties = 0usize;
    for rec in records {
        let vals: Vec<(Dimension, f64)> = Dimension::SUB
            .iter()
            .map(|&d| (d, rec.scores.get(d).value()))
            .collect();
        let min = vals.iter().map(|(_, v)| *v).fold(f64::INFINITY, f64::min);
        if min < threshold {
            flagged += 1;
            // first dimension attaining the minimum wins
            let bottleneck = vals.iter().find(|(_, v)| *v == min).unwrap().0;
            *counts.get_mut(&bottleneck).unwrap() += 1;
            if vals.iter().filter(|(_, v)| *v == min).count() > 1 {
                ties += 1;
            }
        }
    }
    let percentages = counts
        .iter()
        .map(|(&d, &c)| {
            let pct = if flagged == 0 {
                0.0
            } else {
                100.0 * c as f64 / flagged as f64
            };
            (d, pct)
        })
        .collect();
    WeakestLinkReport {
        flagged,
        total: records.len(),
        counts,
        percentages,
        ties,
    }
}

/// Histogram plus summary statistics for one scalar sample.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistributionSummary {
    /// Left edges of each bin; the final bin is closed on the right.
    pub bin_edges: Vec<f64>,
    pub bin_counts: Vec<usize>,
    pub n: usize,
    pub mean: f64,
    pub median: f64,
    /// Population standard deviation.
    pub std: f64,
}

fn summarize(values: &[f64], lo: f64, hi: f64, bins: usize) -> DistributionSummary {
    let n = values.len();
    let width = (hi - lo) / bins as f64;
    let mut bin_counts = vec![0usize; bins];
    for &v in values {
        // upper bin is closed so hi itself is representable
        let mut idx = ((v - lo) / width).floor() as usize;
        if idx >= bins {
            idx = bins - 1;
        }
        bin_counts[idx] += 1;
    }
    let bin_edges = (0..=bins).map(|i| lo + i as f64 * width).collect();

    let mean = values.iter().sum::<f64>() / n as f64;
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n as f64;
    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let median = if n % 2 == 1 {
        sorted[n / 2]
    } else {
        (sorted[n / 2 - 1] + sorted[n / 2]) / 2.0
    };
    DistributionSummary {
        bin_edges,
        bin_counts,
        n,
        mean,
        median,
        std: var.sqrt(),
    }
}

/// Equal-width histogram of one score dimension over `[1, 5]`.
pub fn score_distribution(
    records: &[AnnotationRecord],
    dim: Dimension,
    bins: usize,
) -> Result<DistributionSummary, AnalysisError> {
    if bins == 0 {
        return Err(AnalysisError::ZeroBins);
    }
    if records.is_empty() {
        return Err(AnalysisError::TooFewRecords { need: 1, got: 0 });
    }
    let values: Vec<f64> = records.iter().map(|r| r.scores.get(dim).value()).collect();
    Ok(summarize(&values, 1.0, 5.0, bins))
}

/// Histogram of CoT character counts (Unicode scalar values) over
/// `[0, max]`. Records without a CoT are skipped.
pub fn cot_length_distribution(
    records: &[AnnotationRecord],
    bins: usize,
) -> Result<DistributionSummary, AnalysisError> {
    if bins == 0 {
        return Err(AnalysisError::ZeroBins);
    }
    let lengths: Vec<f64> = records
        .iter()
        .filter_map(|r| r.cot.as_ref())
        .map(|c| c.chars().count() as f64)
        .collect();
    if lengths.is_empty() {
        return Err(AnalysisError::TooFewRecords { need: 1, got: 0 });
    }
    let hi = lengths.iter().cloned().fold(0.0f64, f64::max).max(1.0);
    Ok(summarize(&lengths, 0.0, hi, bins))
}

/// Character-level edit rate: `100 * levenshtein(original, edited) /
/// chars(original)`. Can exceed 100 when edits grow the text past the
/// original length.
pub fn cot_edit_rate(original: &str, edited: &str) -> Result<f64, AnalysisError> {
    let orig_len = original.chars().count();
    if orig_len == 0 {
        return Err(AnalysisError::EmptyOriginal);
    }
    Ok(100.0 * levenshtein(original, edited) as f64 / orig_len as f64)
}

/// Mean score per (source, dimension); sources with no records are absent
/// from the map.
pub fn per_source_means(
    records: &[AnnotationRecord],
) -> BTreeMap<SourceKind, BTreeMap<Dimension, f64>> {
    let mut sums: BTreeMap<SourceKind, (usize, BTreeMap<Dimension, f64>)> = BTreeMap::new();
    for rec in records {
        let entry = sums
            .entry(rec.source)
            .or_insert_with(|| (0, Dimension::ALL.iter().map(|&d| (d, 0.0)).collect()));
        entry.0 += 1;
        for dim in Dimension::ALL {
            *entry.1.get_mut(&dim).unwrap() += rec.scores.get(dim).value();
        }
    }
    sums.into_iter()
        .map(|(src, (count, totals))| {
            let means = totals
                .into_iter()
                .map(|(d, t)| (d, t / count as f64))
                .collect();
            (src, means)
        })
        .collect()
}
