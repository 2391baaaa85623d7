//! Correlation, accuracy, and agreement statistics.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::score::ScoreVector;

#[derive(Debug, Error, PartialEq)]
pub enum StatError {
    #[error("series lengths differ: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("series too short: need at least {need}, got {got}")]
    TooShort { need: usize, got: usize },
    #[error("series contains a non-finite value")]
    NotFinite,
    #[error("degenerate (constant) series: correlation undefined")]
    DegenerateSeries,
    #[error("empty series")]
    EmptySeries,
    #[error("no unit has two or more coded values")]
    NoPairableUnits,
}

/// A prediction/ground-truth pair of equal-length series.
#[derive(Debug, Clone, PartialEq)]
pub struct PairedSeries {
    pred: Vec<f64>,
    gt: Vec<f64>,
}

impl PairedSeries {
    pub fn new(pred: Vec<f64>, gt: Vec<f64>) -> Result<Self, StatError> {
        if pred.len() != gt.len() {
            return Err(StatError::LengthMismatch(pred.len(), gt.len()));
        }
        if pred.iter().chain(&gt).any(|v| !v.is_finite()) {
            return Err(StatError::NotFinite);
        }
        Ok(PairedSeries { pred, gt })
    }

    pub fn len(&self) -> usize {
        self.pred.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pred.is_empty()
    }

    pub fn pred(&self) -> &[f64] {
        &self.pred
    }

    pub fn gt(&self) -> &[f64] {
        &self.gt
    }
}

fn pearson_raw(a: &[f64], b: &[f64]) -> Result<f64, StatError> {
    let n = a.len() as f64;
    let mean_a = a.iter().sum::<f64>() / n;
    let mean_b = b.iter().sum::<f64>() / n;
    let mut cov = 0.0;
    let mut var_a = 0.0;
    let mut var_b = 0.0;
    for (x, y) in a.iter().zip(b) {
        let dx = x - mean_a;
        let dy = y - mean_b;
        cov += dx * dy;
        var_a += dx * dx;
        var_b += dy * dy;
    }
    if var_a == 0.0 || var_b == 0.0 {
        return Err(StatError::DegenerateSeries);
    }
    Ok(cov / (var_a.sqrt() * var_b.sqrt()))
}

/// Pearson product-moment correlation (PLCC).
pub fn plcc(s: &PairedSeries) -> Result<f64, StatError> {
    if s.len() < 2 {
        return Err(StatError::TooShort {
            need: 2,
            got: s.len(),
        });
    }
    pearson_raw(&s.pred, &s.gt)
}

/// Mean (fractional) ranks, 1-based; ties share the average of their
/// positions.
pub fn fractional_ranks(values: &[f64]) -> Vec<f64> {
    let mut idx: Vec<usize> = (0..values.len()).collect();
    idx.sort_by(|&i, &j| values[i].partial_cmp(&values[j]).unwrap());
    let mut ranks = vec![0.0; values.len()];
    let mut i = 0;
    while i < idx.len() {
        let mut j = i;
        while j + 1 < idx.len() && values[idx[j + 1]] == values[idx[i]] {
            j += 1;
        }
        // positions i..=j are tied; average of 1-based ranks
        let avg = (i + j) as f64 / 2.0 + 1.0;
        for &k in &idx[i..=j] {
            ranks[k] = avg;
        }
        i = j + 1;
    }
    ranks
}

/// Spearman rank correlation (SRCC): Pearson over tie-averaged ranks.
pub fn srcc(s: &PairedSeries) -> Result<f64, StatError> {
    if s.len() < 2 {
        return Err(StatError::TooShort {
            need: 2,
            got: s.len(),
        });
    }
    let ra = fractional_ranks(&s.pred);
    let rb = fractional_ranks(&s.gt);
    pearson_raw(&ra, &rb)
}

/// Percentage of pairs whose absolute error is at most `k` (inclusive).
pub fn acc_at_k(s: &PairedSeries, k: f64) -> Result<f64, StatError> {
    if s.is_empty() {
        return Err(StatError::EmptySeries);
    }
    let hits = s
        .pred
        .iter()
        .zip(&s.gt)
        .filter(|(p, g)| (*p - *g).abs() <= k)
        .count();
    Ok(100.0 * hits as f64 / s.len() as f64)
}

/// Units-by-coders grid of optionally missing scores.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReliabilityMatrix {
    /// One row per unit, one entry per coder; `None` marks a missing cell.
    pub units: Vec<Vec<Option<f64>>>,
}

impl ReliabilityMatrix {
    pub fn new(units: Vec<Vec<Option<f64>>>) -> Self {
        ReliabilityMatrix { units }
    }

    /// Values of units that have at least two coded cells.
    fn pairable_units(&self) -> Vec<Vec<f64>> {
        self.units
            .iter()
            .map(|row| row.iter().filter_map(|c| *c).collect::<Vec<f64>>())
            .filter(|vals| vals.len() >= 2)
            .collect()
    }
}

/// Interval Krippendorff's alpha, with a degeneracy flag for the all-equal
/// case.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AlphaResult {
    pub alpha: f64,
    /// True when expected disagreement was zero (all pairable values
    /// identical); alpha is 1.0 by convention in that case.
    pub degenerate: bool,
}

/// Interval-scale Krippendorff's alpha, `1 - D_o / D_e` with squared
/// difference distance, over units with at least two coded values.
pub fn krippendorff_alpha_interval(m: &ReliabilityMatrix) -> Result<AlphaResult, StatError> {
    let units = m.pairable_units();
    if units.is_empty() {
        return Err(StatError::NoPairableUnits);
    }
    let all: Vec<f64> = units.iter().flatten().copied().collect();
    let n = all.len() as f64;

    // observed: within-unit mean squared difference, pair-normalized by m_u - 1
    let mut d_o = 0.0;
    for vals in &units {
        let m_u = vals.len();
        let mut unit_sum = 0.0;
        for i in 0..m_u {
            for j in 0..m_u {
                if i != j {
                    let d = vals[i] - vals[j];
                    unit_sum += d * d;
                }
            }
        }
        d_o += unit_sum / (m_u as f64 - 1.0);
    }
    d_o /= n;

    // expected: squared difference over all cross-unit value pairs
    let mut d_e = 0.0;
    for i in 0..all.len() {
        for j in 0..all.len() {
            if i != j {
                let d = all[i] - all[j];
                d_e += d * d;
            }
        }
    }
    d_e /= n * (n - 1.0);

    if d_e == 0.0 {
        return Ok(AlphaResult {
            alpha: 1.0,
            degenerate: true,
        });
    }
    Ok(AlphaResult {
        alpha: 1.0 - d_o / d_e,
        degenerate: false,
    })
}

/// Percentage of within-unit coder pairs whose absolute difference is at
/// most `margin` (inclusive).
pub fn loose_accuracy(m: &ReliabilityMatrix, margin: f64) -> Result<f64, StatError> {
    let units = m.pairable_units();
    if units.is_empty() {
        return Err(StatError::NoPairableUnits);
    }
    let mut pairs = 0usize;
    let mut within = 0usize;
    for vals in &units {
        for i in 0..vals.len() {
            for j in (i + 1)..vals.len() {
                pairs += 1;
                if (vals[i] - vals[j]).abs() <= margin {
                    within += 1;
                }
            }
        }
    }
    Ok(100.0 * within as f64 / pairs as f64)
}

/// Mean squared error over all five dimensions.
pub fn mse(pred: &ScoreVector, gt: &ScoreVector) -> f64 {
    pred.values()
        .iter()
        .zip(gt.values())
        .map(|(p, g)| (p - g) * (p - g))
        .sum::<f64>()
        / 5.0
}
