//! Evaluation toolbox for multi-dimensional e-commerce poster quality
//! scoring: score/tier domain model, structured-output parsing, the GRPO
//! reward, agreement and correlation statistics, dataset analytics,
//! hard-sample selection, and text/fidelity benchmark metrics.

pub mod analysis;
pub mod fidelity;
pub mod io;
pub mod parser;
pub mod reward;
pub mod score;
pub mod select;
pub mod stats;
pub mod text;

pub use parser::{attempt_parse, parse_output, ModelOutput, RetryPolicy, Verdict};
pub use reward::{
    accuracy_reward, distribution_reward, format_reward, group_advantages, total_reward,
    RewardBreakdown, RewardConfig,
};
pub use score::{
    tier_of, AnnotationRecord, Dimension, Score, ScoreVector, SourceKind, Tier,
};
