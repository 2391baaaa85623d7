//! Subject-fidelity aggregation over precomputed visual features. Feature
//! extraction happens upstream; this module only compares and averages.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum FidelityError {
    #[error("vector lengths differ: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("zero-norm vector")]
    ZeroVector,
    #[error("no records for model")]
    NoRecords,
}

/// Precomputed features for one generated poster.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureRecord {
    pub case_id: String,
    pub model: String,
    pub dino_ref: Vec<f64>,
    pub dino_gen: Vec<f64>,
    pub clip_ref: Vec<f64>,
    pub clip_gen: Vec<f64>,
    /// Perceptual distance computed upstream; absent when the pipeline
    /// skipped it.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lpips: Option<f64>,
}

/// Cosine similarity between two equal-length, non-zero vectors.
pub fn cosine_sim(a: &[f64], b: &[f64]) -> Result<f64, FidelityError> {
    if a.len() != b.len() || a.is_empty() {
        return Err(FidelityError::LengthMismatch(a.len(), b.len()));
    }
    let dot: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
    let na: f64 = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let nb: f64 = b.iter().map(|x| x * x).sum::<f64>().sqrt();
    if na == 0.0 || nb == 0.0 {
        return Err(FidelityError::ZeroVector);
    }
    Ok(dot / (na * nb))
}

/// One model's aggregated fidelity numbers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FidelityRow {
    pub dino_sim_mean: f64,
    pub clip_score_mean: f64,
    /// Mean of available LPIPS values; `None` when no case carried one.
    pub lpips_mean: Option<f64>,
    /// (cases with LPIPS, total cases) for the coverage note.
    pub lpips_coverage: (usize, usize),
    pub n: usize,
}

/// Per-case DINO and CLIP cosines averaged over a model's cases; LPIPS is
/// passed through and averaged over the cases that have it.
pub fn fidelity_row(records: &[FeatureRecord]) -> Result<FidelityRow, FidelityError> {
    if records.is_empty() {
        return Err(FidelityError::NoRecords);
    }
    let mut dino_sum = 0.0;
    let mut clip_sum = 0.0;
    let mut lpips_sum = 0.0;
    let mut lpips_n = 0usize;
    for rec in records {
        dino_sum += cosine_sim(&rec.dino_ref, &rec.dino_gen)?;
        clip_sum += cosine_sim(&rec.clip_ref, &rec.clip_gen)?;
        if let Some(l) = rec.lpips {
            lpips_sum += l;
            lpips_n += 1;
        }
    }
    let n = records.len();
    Ok(FidelityRow {
        dino_sim_mean: dino_sum / n as f64,
        clip_score_mean: clip_sum / n as f64,
        lpips_mean: (lpips_n > 0).then(|| lpips_sum / lpips_n as f64),
        lpips_coverage: (lpips_n, n),
        n,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const EPS: f64 = 1e-9;

    #[test]
    fn cosine_examples() {
        assert!((cosine_sim(&[1.0, 2.0], &[1.0, 2.0]).unwrap() - 1.0).abs() < EPS);
        assert!(cosine_sim(&[1.0, 0.0], &[0.0, 1.0]).unwrap().abs() < EPS);
        assert!(
            (cosine_sim(&[1.0, 0.0], &[1.0, 1.0]).unwrap() - 1.0 / 2.0f64.sqrt()).abs() < EPS
        );
    }

    #[test]
    fn cosine_scale_invariance() {
        let a = [0.3, -0.7, 0.1];
        let b = [1.2, 0.4, -0.9];
        let scaled: Vec<f64> = a.iter().map(|x| x * 17.5).collect();
        assert!((cosine_sim(&a, &b).unwrap() - cosine_sim(&scaled, &b).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn cosine_errors() {
        assert_eq!(
            cosine_sim(&[1.0], &[1.0, 2.0]),
            Err(FidelityError::LengthMismatch(1, 2))
        );
        assert_eq!(
            cosine_sim(&[0.0, 0.0], &[1.0, 2.0]),
            Err(FidelityError::ZeroVector)
        );
    }

    fn rec(case_id: &str, dino: f64, lpips: Option<f64>) -> FeatureRecord {
        // dino vectors chosen so cosine with the reference equals `dino`
        let angle = dino.acos();
        FeatureRecord {
            case_id: case_id.into(),
            model: "m".into(),
            dino_ref: vec![1.0, 0.0],
            dino_gen: vec![angle.cos(), angle.sin()],
            clip_ref: vec![1.0, 1.0],
            clip_gen: vec![1.0, 1.0],
            lpips,
        }
    }

    #[test]
    fn row_identity_case() {
        let r = rec("c1", 1.0, Some(0.0));
        let row = fidelity_row(&[r]).unwrap();
        assert!((row.dino_sim_mean - 1.0).abs() < EPS);
        assert!((row.clip_score_mean - 1.0).abs() < EPS);
        assert_eq!(row.lpips_mean, Some(0.0));
    }

    #[test]
    fn row_means_and_coverage() {
        let rows = vec![rec("c1", 0.6, Some(0.5)), rec("c2", 0.8, None)];
        let row = fidelity_row(&rows).unwrap();
        assert!((row.dino_sim_mean - 0.7).abs() < EPS);
        assert_eq!(row.lpips_mean, Some(0.5));
        assert_eq!(row.lpips_coverage, (1, 2));
    }

    #[test]
    fn row_no_records() {
        assert_eq!(fidelity_row(&[]), Err(FidelityError::NoRecords));
    }
}
