//! The GRPO reward: a binary format term plus a score term combining
//! tier-aware accuracy with an exponential distance penalty, and the
//! group-relative advantage standardization used downstream.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::parser::ModelOutput;
use crate::score::ScoreVector;

fn default_tau() -> f64 {
    0.2
}
fn default_lambda_score() -> f64 {
    0.65
}
fn default_alpha() -> f64 {
    0.5
}
fn default_tier_penalty() -> f64 {
    0.7
}
fn default_lambda_fmt() -> f64 {
    1.0
}
fn default_group_size() -> usize {
    4
}
fn default_advantage_epsilon() -> f64 {
    1e-8
}

/// Reward hyperparameters.
///
/// `lambda_fmt` has no published value; 1.0 is this toolbox's default and is
/// configurable.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RewardConfig {
    /// Accuracy tolerance: a dimension scores iff |pred - gt| <= tau.
    pub tau: f64,
    /// Weight of the accuracy term inside the score reward, in [0, 1].
    pub lambda_score: f64,
    /// Scale of the exponential distance penalty, > 0.
    pub alpha: f64,
    /// Multiplier applied when prediction and ground truth fall in
    /// different tiers, in (0, 1].
    pub tier_penalty: f64,
    /// Weight of the binary format reward, >= 0.
    pub lambda_fmt: f64,
    /// Number of sampled continuations per prompt, >= 2.
    pub group_size: usize,
    /// Additive guard on the advantage denominator, > 0.
    pub advantage_epsilon: f64,
}

impl Default for RewardConfig {
    fn default() -> Self {
        RewardConfig {
            tau: default_tau(),
            lambda_score: default_lambda_score(),
            alpha: default_alpha(),
            tier_penalty: default_tier_penalty(),
            lambda_fmt: default_lambda_fmt(),
            group_size: default_group_size(),
            advantage_epsilon: default_advantage_epsilon(),
        }
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum RewardError {
    #[error("expected {expected} rewards (group size), got {actual}")]
    LengthMismatch { expected: usize, actual: usize },
    #[error("invalid reward config: {0}")]
    InvalidConfig(String),
}

impl RewardConfig {
    pub fn validate(&self) -> Result<(), RewardError> {
        let bad = |msg: &str| Err(RewardError::InvalidConfig(msg.to_string()));
        if !(self.tau > 0.0) {
            return bad("tau must be > 0");
        }
        if !(0.0..=1.0).contains(&self.lambda_score) {
            return bad("lambda_score must be in [0, 1]");
        }
        if !(self.alpha > 0.0) {
            return bad("alpha must be > 0");
        }
        if !(self.tier_penalty > 0.0 && self.tier_penalty <= 1.0) {
            return bad("tier_penalty must be in (0, 1]");
        }
        if !(self.lambda_fmt >= 0.0) {
            return bad("lambda_fmt must be >= 0");
        }
        if self.group_size < 2 {
            return bad("group_size must be >= 2");
        }
        if !(self.advantage_epsilon > 0.0) {
            return bad("advantage_epsilon must be > 0");
        }
        Ok(())
    }
}

/// All reward components for one output.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RewardBreakdown {
    pub r_fmt: f64,
    pub r_acc: f64,
    pub r_dist: f64,
    pub r_score: f64,
    pub total: f64,
}

impl RewardBreakdown {
    pub fn zero() -> Self {
        RewardBreakdown {
            r_fmt: 0.0,
            r_acc: 0.0,
            r_dist: 0.0,
            r_score: 0.0,
            total: 0.0,
        }
    }
}

/// 1 iff the output parsed as a valid score object, else 0.
pub fn format_reward(output: &ModelOutput) -> f64 {
    if output.is_valid() {
        1.0
    } else {
        0.0
    }
}

/// Per-dimension hit rate with the tier-crossing penalty:
/// mean over the five dimensions of `p_i * 1(|pred_i - gt_i| <= tau)`,
/// where `p_i` is `tier_penalty` when the two scores fall in different
/// tiers and 1 otherwise. The indicator boundary is inclusive.
pub fn accuracy_reward(pred: &ScoreVector, gt: &ScoreVector, cfg: &RewardConfig) -> f64 {
    let pred_v = pred.values();
    let gt_v = gt.values();
    let mut sum = 0.0;
    for dim in 0..5 {
        // inclusive boundary; the slack absorbs representation error so a
        // difference of exactly tau (e.g. 3.1 - 2.9) still counts
        if (pred_v[dim] - gt_v[dim]).abs() - cfg.tau <= 1e-12 {
            let p = crate::score::Dimension::ALL[dim];
            let penalty = if pred.get(p).tier() != gt.get(p).tier() {
                cfg.tier_penalty
            } else {
                1.0
            };
            sum += penalty;
        }
    }
    sum / 5.0
}

/// Exponential penalty on the Euclidean distance between the two 4D
/// sub-score vectors: `exp(-alpha * ||v_pred - v_gt||_2)`.
pub fn distribution_reward(pred: &ScoreVector, gt: &ScoreVector, cfg: &RewardConfig) -> f64 {
    let a = pred.sub_vector();
    let b = gt.sub_vector();
    let dist2: f64 = a.iter().zip(&b).map(|(x, y)| (x - y) * (x - y)).sum();
    (-cfg.alpha * dist2.sqrt()).exp()
}

/// Full reward for one output against ground truth. Invalid outputs zero
/// the entire breakdown, not just the format term.
pub fn total_reward(output: &ModelOutput, gt: &ScoreVector, cfg: &RewardConfig) -> RewardBreakdown {
    let pred = match (&output.scores, output.is_valid()) {
        (Some(p), true) => p,
        _ => return RewardBreakdown::zero(),
    };
    let r_acc = accuracy_reward(pred, gt, cfg);
    let r_dist = distribution_reward(pred, gt, cfg);
    let r_score = cfg.lambda_score * r_acc + (1.0 - cfg.lambda_score) * r_dist;
    RewardBreakdown {
        r_fmt: 1.0,
        r_acc,
        r_dist,
        r_score,
        total: r_score + cfg.lambda_fmt,
    }
}

/// Standardizes a group of rewards into advantages:
/// `(r_k - mean) / (pop_std + epsilon)`.
pub fn group_advantages(rewards: &[f64], cfg: &RewardConfig) -> Result<Vec<f64>, RewardError> {
    if rewards.len() != cfg.group_size {
        return Err(RewardError::LengthMismatch {
            expected: cfg.group_size,
            actual: rewards.len(),
        });
    }
    let n = rewards.len() as f64;
    let mean = rewards.iter().sum::<f64>() / n;
    let var = rewards.iter().map(|r| (r - mean) * (r - mean)).sum::<f64>() / n;
    let denom = var.sqrt() + cfg.advantage_epsilon;
    Ok(rewards.iter().map(|r| (r - mean) / denom).collect())
}
