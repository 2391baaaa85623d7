//! Property tests for the invariants each module guarantees.

use proptest::prelude::*;

use posterqa_core::analysis::cot_edit_rate;
use posterqa_core::parser::parse_output;
use posterqa_core::reward::{
    accuracy_reward, distribution_reward, group_advantages, RewardConfig,
};
use posterqa_core::score::{AnnotationRecord, Score, ScoreVector, SourceKind, TagSet};
use posterqa_core::stats::{acc_at_k, fractional_ranks, srcc, PairedSeries};
use posterqa_core::text::{bag_of_chars_cosine, levenshtein, normalized_levenshtein_sim, TextPair};

fn score_strategy() -> impl Strategy<Value = f64> {
    (10u32..=50).prop_map(|n| n as f64 / 10.0)
}

fn score_vector_strategy() -> impl Strategy<Value = ScoreVector> {
    [
        score_strategy(),
        score_strategy(),
        score_strategy(),
        score_strategy(),
        score_strategy(),
    ]
    .prop_map(|v| ScoreVector::from_values(v).unwrap())
}

proptest! {
    #[test]
    fn score_range_enforced(raw in -100.0f64..100.0) {
        match Score::new(raw) {
            Ok(s) => prop_assert!((1.0..=5.0).contains(&s.value())),
            Err(_) => prop_assert!(!(1.0..=5.0).contains(&raw)),
        }
    }

    #[test]
    fn reward_bounds_and_symmetry(a in score_vector_strategy(), b in score_vector_strategy()) {
        let cfg = RewardConfig::default();
        let acc = accuracy_reward(&a, &b, &cfg);
        let dist = distribution_reward(&a, &b, &cfg);
        prop_assert!((0.0..=1.0).contains(&acc));
        prop_assert!(dist > 0.0 && dist <= 1.0);
        prop_assert!((acc - accuracy_reward(&b, &a, &cfg)).abs() < 1e-12);
        prop_assert!((dist - distribution_reward(&b, &a, &cfg)).abs() < 1e-12);
    }

    #[test]
    fn distribution_alpha_squaring(a in score_vector_strategy(), b in score_vector_strategy()) {
        let cfg = RewardConfig::default();
        let doubled = RewardConfig { alpha: 2.0 * cfg.alpha, ..cfg };
        let d = distribution_reward(&a, &b, &cfg);
        prop_assert!((distribution_reward(&a, &b, &doubled) - d * d).abs() < 1e-12);
    }

    #[test]
    fn advantages_center_on_zero(rewards in proptest::collection::vec(0.0f64..2.0, 4)) {
        let cfg = RewardConfig::default();
        let adv = group_advantages(&rewards, &cfg).unwrap();
        let mean: f64 = adv.iter().sum::<f64>() / adv.len() as f64;
        prop_assert!(mean.abs() < 1e-9);
    }

    #[test]
    fn srcc_monotone_transform_invariance(
        pairs in proptest::collection::vec((-50.0f64..50.0, -50.0f64..50.0), 3..15),
    ) {
        let (values, gt): (Vec<f64>, Vec<f64>) = pairs.into_iter().unzip();
        let transformed: Vec<f64> = values.iter().map(|v| (v / 10.0).exp()).collect();
        let s1 = srcc(&PairedSeries::new(values, gt.clone()).unwrap());
        let s2 = srcc(&PairedSeries::new(transformed, gt).unwrap());
        match (s1, s2) {
            (Ok(a), Ok(b)) => prop_assert!((a - b).abs() < 1e-9),
            (Err(_), Err(_)) => {}
            other => prop_assert!(false, "mismatched outcomes: {other:?}"),
        }
    }

    #[test]
    fn ranks_are_a_permutation_sum(values in proptest::collection::vec(-10.0f64..10.0, 1..20)) {
        let ranks = fractional_ranks(&values);
        let n = values.len() as f64;
        let sum: f64 = ranks.iter().sum();
        prop_assert!((sum - n * (n + 1.0) / 2.0).abs() < 1e-9);
    }

    #[test]
    fn acc_at_k_monotone_in_k(
        pairs in proptest::collection::vec((1.0f64..5.0, 1.0f64..5.0), 1..20),
        k1 in 0.01f64..2.0,
        k2 in 0.01f64..2.0,
    ) {
        let (pred, gt): (Vec<f64>, Vec<f64>) = pairs.into_iter().unzip();
        let s = PairedSeries::new(pred, gt).unwrap();
        let (lo, hi) = if k1 <= k2 { (k1, k2) } else { (k2, k1) };
        prop_assert!(acc_at_k(&s, lo).unwrap() <= acc_at_k(&s, hi).unwrap());
        prop_assert_eq!(acc_at_k(&s, f64::INFINITY).unwrap(), 100.0);
    }

    #[test]
    fn parse_never_panics(raw in ".*") {
        let _ = parse_output(&raw);
    }

    #[test]
    fn valid_parse_round_trips(v in score_vector_strategy()) {
        let raw = format!(
            "<think>t</think><answer>{}</answer>",
            serde_json::to_string(&v).unwrap()
        );
        let out = parse_output(&raw);
        prop_assert!(out.is_valid());
        prop_assert_eq!(out.scores.unwrap(), v);
    }

    #[test]
    fn levenshtein_triangle_inequality(
        a in "[ab字]{0,12}",
        b in "[ab字]{0,12}",
        c in "[ab字]{0,12}",
    ) {
        let ab = levenshtein(&a, &b);
        let bc = levenshtein(&b, &c);
        let ac = levenshtein(&a, &c);
        prop_assert!(ac <= ab + bc);
        prop_assert_eq!(levenshtein(&a, &b), levenshtein(&b, &a));
    }

    #[test]
    fn lev_sim_identity(a in ".{0,20}", b in ".{0,20}") {
        let sim = normalized_levenshtein_sim(&TextPair::new(a.clone(), b.clone()));
        prop_assert!((0.0..=1.0).contains(&sim));
        if a == b {
            prop_assert_eq!(sim, 1.0);
        } else {
            prop_assert!(sim < 1.0);
        }
    }

    #[test]
    fn cosine_permutation_invariance(chars in proptest::collection::vec(proptest::char::range('a', 'f'), 1..20)) {
        let original: String = chars.iter().collect();
        let mut reversed = chars.clone();
        reversed.reverse();
        let permuted: String = reversed.into_iter().collect();
        let sim = bag_of_chars_cosine(&TextPair::new(original, permuted));
        prop_assert!((sim - 1.0).abs() < 1e-12);
    }

    #[test]
    fn edit_rate_self_is_zero(s in ".{1,30}") {
        prop_assert_eq!(cot_edit_rate(&s, &s).unwrap(), 0.0);
    }

    #[test]
    fn record_serde_round_trip(
        v in score_vector_strategy(),
        id in "[a-z0-9]{1,8}",
        cot in proptest::option::of(".{0,40}"),
    ) {
        let rec = AnnotationRecord {
            id,
            source: SourceKind::AiGenerated,
            scores: v,
            tags: TagSet::default(),
            cot,
        };
        let json = serde_json::to_string(&rec).unwrap();
        let back: AnnotationRecord = serde_json::from_str(&json).unwrap();
        prop_assert_eq!(rec, back);
    }
}
