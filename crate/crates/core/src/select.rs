//! Source-stratified selection of the highest-error samples: per-source
//! floor quotas proportional to population, then the top errors within each
//! source.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::score::{AnnotationRecord, ScoreVector, SourceKind};
use crate::stats::mse;

#[derive(Debug, Error, PartialEq)]
pub enum SelectError {
    #[error("no prediction for id {0}")]
    MissingPrediction(String),
    #[error("total population is zero")]
    EmptyPopulation,
    #[error("error value for id {0} is not finite and nonnegative")]
    InvalidError(String),
}

/// One sample's scoring error.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorRecord {
    pub id: String,
    pub source: SourceKind,
    pub error: f64,
}

/// Per-source quotas for a target subset size `k`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelectionPlan {
    pub k: usize,
    pub populations: BTreeMap<SourceKind, usize>,
    /// `floor(k * n_s / total)` per source; never redistributed.
    pub quotas: BTreeMap<SourceKind, usize>,
    /// `k - sum(quotas)`, lost to flooring.
    pub remainder: usize,
}

/// Mean squared error of each prediction against its annotation, over all
/// five dimensions.
pub fn compute_errors(
    preds: &BTreeMap<String, ScoreVector>,
    gts: &[AnnotationRecord],
) -> Result<Vec<ErrorRecord>, SelectError> {
    gts.iter()
        .map(|gt| {
            let pred = preds
                .get(&gt.id)
                .ok_or_else(|| SelectError::MissingPrediction(gt.id.clone()))?;
            Ok(ErrorRecord {
                id: gt.id.clone(),
                source: gt.source,
                error: mse(pred, &gt.scores),
            })
        })
        .collect()
}

/// Floor quotas per source: `K_s = floor(K * N_s / sum N)`. The floor
/// remainder is reported, not redistributed.
pub fn plan_quotas(
    populations: &BTreeMap<SourceKind, usize>,
    k: usize,
) -> Result<SelectionPlan, SelectError> {
    let total: usize = populations.values().sum();
    if total == 0 {
        return Err(SelectError::EmptyPopulation);
    }
    let quotas: BTreeMap<SourceKind, usize> = populations
        .iter()
        .map(|(&src, &n)| (src, k * n / total))
        .collect();
    let assigned: usize = quotas.values().sum();
    Ok(SelectionPlan {
        k,
        populations: populations.clone(),
        quotas,
        remainder: k - assigned,
    })
}

/// Counts records per source.
pub fn populations(errors: &[ErrorRecord]) -> BTreeMap<SourceKind, usize> {
    let mut counts = BTreeMap::new();
    for e in errors {
        *counts.entry(e.source).or_insert(0usize) += 1;
    }
    counts
}

fn sort_descending(bucket: &mut Vec<&ErrorRecord>) {
    bucket.sort_by(|a, b| {
        b.error
            .partial_cmp(&a.error)
            .unwrap()
            .then_with(|| a.id.cmp(&b.id))
    });
}

/// Takes the top `K_s` errors per source (ties broken by ascending id) and
/// returns the union in canonical source order, highest error first within
/// each source.
pub fn select_hard(
    errors: &[ErrorRecord],
    plan: &SelectionPlan,
) -> Result<Vec<String>, SelectError> {
    for e in errors {
        if !e.error.is_finite() || e.error < 0.0 {
            return Err(SelectError::InvalidError(e.id.clone()));
        }
    }
    let mut selected = Vec::new();
    for src in SourceKind::ALL {
        let quota = plan.quotas.get(&src).copied().unwrap_or(0);
        if quota == 0 {
            continue;
        }
        let mut bucket: Vec<&ErrorRecord> = errors.iter().filter(|e| e.source == src).collect();
        sort_descending(&mut bucket);
        assert!(quota <= bucket.len(), "floor quota cannot exceed population");
        selected.extend(bucket[..quota].iter().map(|e| e.id.clone()));
    }
    Ok(selected)
}

/// Tops the stratified selection up to exactly `k` from the globally
/// largest remaining errors.
pub fn select_hard_filled(
    errors: &[ErrorRecord],
    plan: &SelectionPlan,
) -> Result<Vec<String>, SelectError> {
    let mut selected = select_hard(errors, plan)?;
    let need = plan.k.saturating_sub(selected.len()).min(errors.len() - selected.len());
    if need > 0 {
        let taken: std::collections::BTreeSet<&String> = selected.iter().collect();
        let mut rest: Vec<&ErrorRecord> =
            errors.iter().filter(|e| !taken.contains(&e.id)).collect();
        sort_descending(&mut rest);
        let extra: Vec<String> = rest[..need].iter().map(|e| e.id.clone()).collect();
        selected.extend(extra);
    }
    Ok(selected)
}

/// The main-text reading: a plain global top-`k` by error, ignoring
/// sources.
pub fn select_hard_global(errors: &[ErrorRecord], k: usize) -> Result<Vec<String>, SelectError> {
    for e in errors {
        if !e.error.is_finite() || e.error < 0.0 {
            return Err(SelectError::InvalidError(e.id.clone()));
        }
    }
    let mut all: Vec<&ErrorRecord> = errors.iter().collect();
    sort_descending(&mut all);
    Ok(all
        .iter()
        .take(k)
        .map(|e| e.id.clone())
        .collect())
}
