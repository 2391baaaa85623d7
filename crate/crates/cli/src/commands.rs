//! Subcommand implementations. All aggregation is keyed and sorted before
//! emission so output bytes are identical regardless of thread count.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use posterqa_core::analysis::{
    correlation_matrix, cot_length_distribution, per_source_means, score_distribution,
    weakest_link, DistributionSummary,
};
use posterqa_core::fidelity::{fidelity_row, FeatureRecord};
use posterqa_core::io::{
    read_jsonl, write_jsonl, BenchScoreLine, ParsedLine, PredictionLine, RawLine,
    RewardOutputLine, TextCaseLine,
};
use posterqa_core::parser::parse_output;
use posterqa_core::reward::total_reward;
use posterqa_core::score::{AnnotationRecord, Dimension, ScoreVector, TagTaxonomy};
use posterqa_core::select::{
    compute_errors, plan_quotas, populations, select_hard, select_hard_filled,
    select_hard_global, SelectionPlan,
};
use posterqa_core::stats::{acc_at_k, plcc, srcc, PairedSeries, StatError};
use posterqa_core::text::{
    bag_of_chars_cosine, normalized_levenshtein_sim, phrase_f1, PhraseSet, TextPair,
};

use crate::config::{file_digest, OutputFormat, RemainderPolicy, ToolConfig};
use crate::report::{
    BenchReport, DimensionStats, EvalReport, FidelityBlock, ModelBenchReport, Provenance,
    TextBlock,
};

/// Acc@k map key: "0.5", "1.0" (always carries a decimal point).
fn k_label(k: f64) -> String {
    let mut s = format!("{k}");
    if !s.contains('.') {
        s.push_str(".0");
    }
    s
}

fn provenance(cfg: &ToolConfig, inputs: &[(&str, &Path)]) -> Result<Provenance> {
    let mut digests = BTreeMap::new();
    for (label, path) in inputs {
        digests.insert(format!("{label}:{}", path.display()), file_digest(path)?);
    }
    Ok(Provenance::new(cfg.hash(), digests))
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        std::fs::create_dir_all(parent)?;
    }
    let text = serde_json::to_string_pretty(value)?;
    std::fs::write(path, text + "\n")
        .with_context(|| format!("cannot write {}", path.display()))?;
    Ok(())
}

// ---- parse -------------------------------------------------------------

pub fn cmd_parse(input: &Path, out: &Path) -> Result<()> {
    let lines: Vec<RawLine> = read_jsonl(input)?;
    let parsed: Vec<ParsedLine> = lines
        .par_iter()
        .map(|line| {
            let output = parse_output(&line.raw);
            ParsedLine {
                id: line.id.clone(),
                verdict: output.verdict,
                scores: output.scores,
            }
        })
        .collect();

    let mut counts: BTreeMap<&'static str, usize> = BTreeMap::new();
    for p in &parsed {
        *counts.entry(p.verdict.name()).or_insert(0) += 1;
    }
    write_jsonl(out, &parsed)?;
    println!("parsed {} lines:", parsed.len());
    for (verdict, count) in counts {
        println!("  {verdict}: {count}");
    }
    Ok(())
}

// ---- reward ------------------------------------------------------------

pub fn cmd_reward(cfg: &ToolConfig, pred: &Path, gt: &Path, out: &Path) -> Result<()> {
    let preds: Vec<RawLine> = read_jsonl(pred)?;
    let gts: Vec<AnnotationRecord> = read_jsonl(gt)?;
    let gt_map: BTreeMap<&str, &ScoreVector> =
        gts.iter().map(|r| (r.id.as_str(), &r.scores)).collect();

    for p in &preds {
        if !gt_map.contains_key(p.id.as_str()) {
            bail!("missing ground truth for id {}", p.id);
        }
    }

    let mut rewards: Vec<RewardOutputLine> = preds
        .par_iter()
        .map(|p| {
            let output = parse_output(&p.raw);
            let b = total_reward(&output, gt_map[p.id.as_str()], &cfg.reward);
            RewardOutputLine {
                id: p.id.clone(),
                r_fmt: b.r_fmt,
                r_acc: b.r_acc,
                r_dist: b.r_dist,
                r_score: b.r_score,
                total: b.total,
            }
        })
        .collect();
    rewards.sort_by(|a, b| a.id.cmp(&b.id));
    write_jsonl(out, &rewards)?;

    let totals: Vec<f64> = rewards.iter().map(|r| r.total).collect();
    let n = totals.len().max(1) as f64;
    println!(
        "rewards for {} samples: mean {:.6}, min {:.6}, max {:.6}",
        rewards.len(),
        totals.iter().sum::<f64>() / n,
        totals.iter().cloned().fold(f64::INFINITY, f64::min),
        totals.iter().cloned().fold(f64::NEG_INFINITY, f64::max),
    );
    Ok(())
}

// ---- eval --------------------------------------------------------------

pub fn cmd_eval(
    cfg: &ToolConfig,
    pred: &Path,
    gt: &Path,
    out: &Path,
    format: OutputFormat,
) -> Result<()> {
    let preds: Vec<PredictionLine> = read_jsonl(pred)?;
    let gts: Vec<AnnotationRecord> = read_jsonl(gt)?;
    let report = build_eval_report(cfg, &preds, &gts, provenance(cfg, &[("pred", pred), ("gt", gt)])?)?;

    write_json(out, &report)?;
    match format {
        OutputFormat::Json => {}
        OutputFormat::Md => {
            let rendered = report.to_markdown();
            std::fs::write(out.with_extension("md"), &rendered)?;
            print!("{rendered}");
        }
        OutputFormat::Csv => {
            let rendered = report.to_csv();
            std::fs::write(out.with_extension("csv"), &rendered)?;
            print!("{rendered}");
        }
    }
    println!(
        "evaluated {} aligned samples ({} exceptions)",
        report.n,
        report.exceptions.len()
    );
    Ok(())
}

pub fn build_eval_report(
    cfg: &ToolConfig,
    preds: &[PredictionLine],
    gts: &[AnnotationRecord],
    provenance: Provenance,
) -> Result<EvalReport> {
    let gt_map: BTreeMap<&str, &ScoreVector> =
        gts.iter().map(|r| (r.id.as_str(), &r.scores)).collect();
    let pred_ids: BTreeSet<&str> = preds.iter().map(|p| p.id.as_str()).collect();

    let mut exceptions = BTreeMap::new();
    for p in preds {
        if !gt_map.contains_key(p.id.as_str()) {
            exceptions.insert(p.id.clone(), "missing_ground_truth".to_string());
        }
    }
    for g in gts {
        if !pred_ids.contains(g.id.as_str()) {
            exceptions.insert(g.id.clone(), "missing_prediction".to_string());
        }
    }

    let mut joined: Vec<(&PredictionLine, &ScoreVector)> = preds
        .iter()
        .filter_map(|p| gt_map.get(p.id.as_str()).map(|gt| (p, *gt)))
        .collect();
    joined.sort_by(|a, b| a.0.id.cmp(&b.0.id));
    if joined.len() < 2 {
        bail!("need at least 2 aligned samples, got {}", joined.len());
    }

    let dim_stats: Vec<(String, DimensionStats)> = Dimension::ALL
        .par_iter()
        .map(|&dim| {
            let pred_series: Vec<f64> = joined
                .iter()
                .map(|(p, _)| p.scores.get(dim).value())
                .collect();
            let gt_series: Vec<f64> = joined.iter().map(|(_, g)| g.get(dim).value()).collect();
            let series = PairedSeries::new(pred_series, gt_series).expect("aligned series");

            let flatten = |r: Result<f64, StatError>| match r {
                Ok(v) => (Some(v), false),
                Err(StatError::DegenerateSeries) => (None, true),
                Err(e) => unreachable!("unexpected stat error: {e}"),
            };
            let (plcc_v, d1) = flatten(plcc(&series));
            let (srcc_v, d2) = flatten(srcc(&series));
            let acc = cfg
                .k_values
                .iter()
                .map(|&k| (k_label(k), acc_at_k(&series, k).expect("non-empty")))
                .collect();
            (
                dim.name().to_string(),
                DimensionStats {
                    plcc: plcc_v,
                    srcc: srcc_v,
                    acc,
                    n: series.len(),
                    degenerate: d1 || d2,
                },
            )
        })
        .collect();

    Ok(EvalReport {
        provenance,
        n: joined.len(),
        dimensions: dim_stats.into_iter().collect(),
        exceptions,
    })
}

// ---- select-hard -------------------------------------------------------

#[derive(Debug, Serialize, Deserialize)]
pub struct SelectionReport {
    pub selected: Vec<String>,
    pub plan: SelectionPlan,
    pub mode: String,
}

pub fn cmd_select_hard(
    cfg: &ToolConfig,
    pred: &Path,
    gt: &Path,
    k: usize,
    global: bool,
    fill_remainder: bool,
    out: &Path,
) -> Result<()> {
    let preds: Vec<PredictionLine> = read_jsonl(pred)?;
    let gts: Vec<AnnotationRecord> = read_jsonl(gt)?;
    let pred_map: BTreeMap<String, ScoreVector> =
        preds.into_iter().map(|p| (p.id, p.scores)).collect();
    let errors = compute_errors(&pred_map, &gts).map_err(|e| anyhow!(e.to_string()))?;
    let plan = plan_quotas(&populations(&errors), k).map_err(|e| anyhow!(e.to_string()))?;

    let fill = fill_remainder || cfg.remainder_policy == RemainderPolicy::Fill;
    let (selected, mode) = if global {
        (
            select_hard_global(&errors, k).map_err(|e| anyhow!(e.to_string()))?,
            "global",
        )
    } else if fill {
        (
            select_hard_filled(&errors, &plan).map_err(|e| anyhow!(e.to_string()))?,
            "stratified_filled",
        )
    } else {
        (
            select_hard(&errors, &plan).map_err(|e| anyhow!(e.to_string()))?,
            "stratified",
        )
    };

    println!(
        "selected {} of {} samples (mode {mode}, floor remainder {})",
        selected.len(),
        errors.len(),
        plan.remainder
    );
    write_json(
        out,
        &SelectionReport {
            selected,
            plan,
            mode: mode.to_string(),
        },
    )?;
    Ok(())
}

// ---- stats -------------------------------------------------------------

fn distribution_csv(summary: &DistributionSummary) -> String {
    let mut out = String::from("bin_lo,bin_hi,count\n");
    for (i, count) in summary.bin_counts.iter().enumerate() {
        let _ = writeln!(
            out,
            "{},{},{count}",
            summary.bin_edges[i], summary.bin_edges[i + 1]
        );
    }
    let _ = writeln!(out, "# n={} mean={} median={} std={}", summary.n, summary.mean, summary.median, summary.std);
    out
}

pub fn cmd_stats(cfg: &ToolConfig, input: &Path, out_dir: &Path) -> Result<()> {
    let records: Vec<AnnotationRecord> = read_jsonl(input)?;
    if let Some(tax_path) = &cfg.tag_taxonomy {
        let tax = TagTaxonomy::from_json(&std::fs::read_to_string(tax_path)?)?;
        posterqa_core::score::validate_records(&records, Some(&tax))
            .map_err(|e| anyhow!(e.to_string()))?;
    } else {
        posterqa_core::score::validate_records(&records, None)
            .map_err(|e| anyhow!(e.to_string()))?;
    }
    std::fs::create_dir_all(out_dir)?;

    for dim in Dimension::ALL {
        let summary =
            score_distribution(&records, dim, cfg.bins).map_err(|e| anyhow!(e.to_string()))?;
        std::fs::write(
            out_dir.join(format!("distribution_{}.csv", dim.name())),
            distribution_csv(&summary),
        )?;
    }

    if let Ok(cot) = cot_length_distribution(&records, cfg.bins) {
        std::fs::write(out_dir.join("cot_length.csv"), distribution_csv(&cot))?;
    }

    let matrix = correlation_matrix(&records).map_err(|e| anyhow!(e.to_string()))?;
    let mut csv = String::from("dim");
    for d in Dimension::SUB {
        let _ = write!(csv, ",{}", d.name());
    }
    csv.push('\n');
    for (i, d) in Dimension::SUB.iter().enumerate() {
        let _ = write!(csv, "{}", d.name());
        for j in 0..4 {
            match matrix.entries[i][j] {
                Some(v) => {
                    let _ = write!(csv, ",{v}");
                }
                None => csv.push_str(",n/a"),
            }
        }
        csv.push('\n');
    }
    std::fs::write(out_dir.join("correlation_matrix.csv"), csv)?;

    let wl = weakest_link(&records, cfg.weakest_link_threshold);
    let mut csv = String::from("dimension,count,percentage\n");
    for (dim, count) in &wl.counts {
        let _ = writeln!(csv, "{},{count},{:.1}", dim.name(), wl.percentages[dim]);
    }
    let _ = writeln!(csv, "# flagged={} of {} ties={}", wl.flagged, wl.total, wl.ties);
    std::fs::write(out_dir.join("weakest_link.csv"), csv)?;

    let means = per_source_means(&records);
    let mut csv = String::from("source");
    for d in Dimension::ALL {
        let _ = write!(csv, ",{}", d.name());
    }
    csv.push('\n');
    for (src, dims) in &means {
        let _ = write!(csv, "{src}");
        for d in Dimension::ALL {
            let _ = write!(csv, ",{}", dims[&d]);
        }
        csv.push('\n');
    }
    std::fs::write(out_dir.join("per_source_means.csv"), csv)?;

    println!(
        "stats over {} records: mean inter-dimension correlation {}, {} flagged low-quality ({} ties)",
        records.len(),
        matrix
            .mean_offdiag
            .map_or_else(|| "n/a".to_string(), |v| format!("{v:.3}")),
        wl.flagged,
        wl.ties
    );
    Ok(())
}

// ---- text-metrics ------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TextCaseResult {
    pub case_id: String,
    pub model: String,
    pub phrase_f1: f64,
    pub char_sim: f64,
    pub lev_sim: f64,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct TextMetricsReport {
    pub cases: Vec<TextCaseResult>,
    pub per_model: BTreeMap<String, TextBlock>,
}

pub fn text_metrics_report(cases: &[TextCaseLine]) -> TextMetricsReport {
    let mut results: Vec<TextCaseResult> = cases
        .par_iter()
        .map(|case| {
            let gt = PhraseSet::new(&case.gt_phrases);
            let pred = PhraseSet::new(&case.pred_phrases);
            let pair = TextPair::new(case.gt_text.clone(), case.pred_text.clone());
            TextCaseResult {
                case_id: case.case_id.clone(),
                model: case.model.clone(),
                phrase_f1: phrase_f1(&gt, &pred),
                char_sim: bag_of_chars_cosine(&pair),
                lev_sim: normalized_levenshtein_sim(&pair),
            }
        })
        .collect();
    results.sort_by(|a, b| (&a.model, &a.case_id).cmp(&(&b.model, &b.case_id)));

    let mut per_model: BTreeMap<String, TextBlock> = BTreeMap::new();
    let mut grouped: BTreeMap<&str, Vec<&TextCaseResult>> = BTreeMap::new();
    for r in &results {
        grouped.entry(&r.model).or_default().push(r);
    }
    for (model, rs) in grouped {
        let n = rs.len();
        per_model.insert(
            model.to_string(),
            TextBlock {
                phrase_f1_mean: rs.iter().map(|r| r.phrase_f1).sum::<f64>() / n as f64,
                char_sim_mean: rs.iter().map(|r| r.char_sim).sum::<f64>() / n as f64,
                lev_sim_mean: rs.iter().map(|r| r.lev_sim).sum::<f64>() / n as f64,
                n,
            },
        );
    }
    TextMetricsReport {
        cases: results,
        per_model,
    }
}

pub fn cmd_text_metrics(input: &Path, out: &Path) -> Result<()> {
    let cases: Vec<TextCaseLine> = read_jsonl(input)?;
    let report = text_metrics_report(&cases);
    write_json(out, &report)?;
    println!(
        "text metrics over {} cases, {} models",
        report.cases.len(),
        report.per_model.len()
    );
    Ok(())
}

// ---- fidelity ----------------------------------------------------------

#[derive(Debug, Serialize, Deserialize)]
pub struct FidelityReport {
    pub per_model: BTreeMap<String, FidelityBlock>,
}

pub fn fidelity_report(records: &[FeatureRecord]) -> Result<FidelityReport> {
    let mut grouped: BTreeMap<&str, Vec<FeatureRecord>> = BTreeMap::new();
    for r in records {
        grouped.entry(&r.model).or_default().push(r.clone());
    }
    let mut per_model = BTreeMap::new();
    for (model, mut rs) in grouped {
        rs.sort_by(|a, b| a.case_id.cmp(&b.case_id));
        let row = fidelity_row(&rs).map_err(|e| anyhow!("{model}: {e}"))?;
        per_model.insert(
            model.to_string(),
            FidelityBlock {
                dino_sim_mean: row.dino_sim_mean,
                clip_score_mean: row.clip_score_mean,
                lpips_mean: row.lpips_mean,
                lpips_covered: row.lpips_coverage.0,
                n: row.n,
            },
        );
    }
    Ok(FidelityReport { per_model })
}

pub fn cmd_fidelity(input: &Path, out: &Path) -> Result<()> {
    let records: Vec<FeatureRecord> = read_jsonl(input)?;
    let report = fidelity_report(&records)?;
    write_json(out, &report)?;
    println!("fidelity rows for {} models", report.per_model.len());
    Ok(())
}

// ---- bench-report ------------------------------------------------------

#[allow(clippy::too_many_arguments)]
pub fn cmd_bench_report(
    cfg: &ToolConfig,
    human: Option<&Path>,
    model_scores: Option<&Path>,
    text: Option<&Path>,
    fidelity: Option<&Path>,
    out_dir: &Path,
) -> Result<()> {
    if human.is_none() && model_scores.is_none() && text.is_none() && fidelity.is_none() {
        bail!("bench-report needs at least one input block");
    }

    let human_lines: Vec<BenchScoreLine> = match human {
        Some(p) => read_jsonl(p)?,
        None => Vec::new(),
    };
    let model_lines: Vec<BenchScoreLine> = match model_scores {
        Some(p) => read_jsonl(p)?,
        None => Vec::new(),
    };
    let text_report: Option<TextMetricsReport> = match text {
        Some(p) => {
            let cases: Vec<TextCaseLine> = read_jsonl(p)?;
            Some(text_metrics_report(&cases))
        }
        None => None,
    };
    let fidelity_rep: Option<FidelityReport> = match fidelity {
        Some(p) => {
            let records: Vec<FeatureRecord> = read_jsonl(p)?;
            Some(fidelity_report(&records)?)
        }
        None => None,
    };

    let mut inputs: Vec<(&str, &Path)> = Vec::new();
    if let Some(p) = human {
        inputs.push(("human", p));
    }
    if let Some(p) = model_scores {
        inputs.push(("model_scores", p));
    }
    if let Some(p) = text {
        inputs.push(("text", p));
    }
    if let Some(p) = fidelity {
        inputs.push(("fidelity", p));
    }
    let provenance = provenance(cfg, &inputs)?;

    let report = build_bench_report(
        provenance,
        &human_lines,
        &model_lines,
        text_report.as_ref(),
        fidelity_rep.as_ref(),
    )?;

    std::fs::create_dir_all(out_dir)?;
    for m in &report.models {
        write_json(&out_dir.join(format!("{}.json", m.model)), m)?;
    }
    write_json(&out_dir.join("report.json"), &report)?;
    let mut md = String::from("## Benchmark scores\n\n");
    md.push_str(&report.scores_table_markdown());
    md.push_str("\n## Auxiliary metrics\n\n");
    md.push_str(&report.auxiliary_table_markdown());
    std::fs::write(out_dir.join("report.md"), &md)?;
    println!("bench report for {} models written to {}", report.models.len(), out_dir.display());
    Ok(())
}

fn dim_means(lines: &[&BenchScoreLine]) -> BTreeMap<String, f64> {
    Dimension::ALL
        .iter()
        .map(|&d| {
            let mean = lines
                .iter()
                .map(|l| l.scores.get(d).value())
                .sum::<f64>()
                / lines.len() as f64;
            (d.name().to_string(), mean)
        })
        .collect()
}

pub fn build_bench_report(
    provenance: Provenance,
    human: &[BenchScoreLine],
    model_scores: &[BenchScoreLine],
    text: Option<&TextMetricsReport>,
    fidelity: Option<&FidelityReport>,
) -> Result<BenchReport> {
    let mut models: BTreeSet<String> = BTreeSet::new();
    models.extend(human.iter().map(|l| l.model.clone()));
    models.extend(model_scores.iter().map(|l| l.model.clone()));
    if let Some(t) = text {
        models.extend(t.per_model.keys().cloned());
    }
    if let Some(f) = fidelity {
        models.extend(f.per_model.keys().cloned());
    }

    let mut blocks = Vec::new();
    for model in models {
        let h: Vec<&BenchScoreLine> = human.iter().filter(|l| l.model == model).collect();
        let m: Vec<&BenchScoreLine> = model_scores.iter().filter(|l| l.model == model).collect();

        // human-vs-model correlation over shared cases, overall dimension
        let (hm_plcc, hm_srcc) = if !h.is_empty() && !m.is_empty() {
            let m_map: BTreeMap<&str, f64> = m
                .iter()
                .map(|l| (l.case_id.as_str(), l.scores.overall.value()))
                .collect();
            let mut shared: Vec<(&str, f64, f64)> = h
                .iter()
                .filter_map(|l| {
                    m_map
                        .get(l.case_id.as_str())
                        .map(|&mv| (l.case_id.as_str(), l.scores.overall.value(), mv))
                })
                .collect();
            shared.sort_by(|a, b| a.0.cmp(b.0));
            if shared.len() >= 2 {
                let hs: Vec<f64> = shared.iter().map(|s| s.1).collect();
                let ms: Vec<f64> = shared.iter().map(|s| s.2).collect();
                let series = PairedSeries::new(hs, ms).expect("finite scores");
                (plcc(&series).ok(), srcc(&series).ok())
            } else {
                (None, None)
            }
        } else {
            (None, None)
        };

        blocks.push(ModelBenchReport {
            model: model.clone(),
            human_means: (!h.is_empty()).then(|| dim_means(&h)),
            model_means: (!m.is_empty()).then(|| dim_means(&m)),
            human_model_plcc: hm_plcc,
            human_model_srcc: hm_srcc,
            text: text.and_then(|t| t.per_model.get(&model).cloned()),
            fidelity: fidelity.and_then(|f| f.per_model.get(&model).cloned()),
        });
    }
    Ok(BenchReport {
        provenance,
        models: blocks,
    })
}

// ---- fixture -----------------------------------------------------------

/// Generates a deterministic synthetic benchmark fixture for demos and
/// end-to-end tests.
pub fn cmd_fixture(seed: u64, models: usize, cases: usize, out_dir: &Path) -> Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    std::fs::create_dir_all(out_dir)?;

    let model_names: Vec<String> = (0..models).map(|i| format!("model_{i}")).collect();
    let grid_score = |rng: &mut ChaCha8Rng| (rng.gen_range(10..=50) as f64) / 10.0;
    let random_vector = |rng: &mut ChaCha8Rng| {
        let mut v = [0.0; 5];
        for slot in &mut v {
            *slot = grid_score(rng);
        }
        ScoreVector::from_values(v).expect("grid scores are in range")
    };

    let mut human = Vec::new();
    let mut model_lines = Vec::new();
    let mut text_cases = Vec::new();
    let mut features = Vec::new();
    for model in &model_names {
        for c in 0..cases {
            let case_id = format!("case_{c:03}");
            human.push(BenchScoreLine {
                case_id: case_id.clone(),
                model: model.clone(),
                scores: random_vector(&mut rng),
            });
            model_lines.push(BenchScoreLine {
                case_id: case_id.clone(),
                model: model.clone(),
                scores: random_vector(&mut rng),
            });
            let phrases: Vec<String> = (0..rng.gen_range(1..5))
                .map(|p| format!("phrase_{p}"))
                .collect();
            text_cases.push(TextCaseLine {
                case_id: case_id.clone(),
                model: model.clone(),
                gt_phrases: phrases.clone(),
                pred_phrases: phrases
                    .iter()
                    .filter(|_| rng.gen_bool(0.8))
                    .cloned()
                    .collect(),
                gt_text: "限时特惠全场包邮".to_string(),
                pred_text: if rng.gen_bool(0.5) {
                    "限时特惠全场包邮".to_string()
                } else {
                    "限时特惠全场".to_string()
                },
            });
            let vector = |rng: &mut ChaCha8Rng| -> Vec<f64> {
                (0..8).map(|_| rng.gen_range(-1.0..1.0)).collect()
            };
            features.push(FeatureRecord {
                case_id,
                model: model.clone(),
                dino_ref: vector(&mut rng),
                dino_gen: vector(&mut rng),
                clip_ref: vector(&mut rng),
                clip_gen: vector(&mut rng),
                lpips: rng.gen_bool(0.75).then(|| rng.gen_range(0.0..1.2)),
            });
        }
    }
    write_jsonl(&out_dir.join("human_scores.jsonl"), &human)?;
    write_jsonl(&out_dir.join("model_scores.jsonl"), &model_lines)?;
    write_jsonl(&out_dir.join("text_cases.jsonl"), &text_cases)?;
    write_jsonl(&out_dir.join("fidelity_features.jsonl"), &features)?;

    // eval-shaped fixture: one annotation set plus aligned predictions
    let mut gts = Vec::new();
    let mut preds = Vec::new();
    for i in 0..cases.max(4) {
        let gt = random_vector(&mut rng);
        gts.push(AnnotationRecord {
            id: format!("img_{i:03}"),
            source: posterqa_core::score::SourceKind::ALL[i % 6],
            scores: gt,
            tags: Default::default(),
            cot: None,
        });
        preds.push(PredictionLine {
            id: format!("img_{i:03}"),
            scores: random_vector(&mut rng),
        });
    }
    write_jsonl(&out_dir.join("annotations.jsonl"), &gts)?;
    write_jsonl(&out_dir.join("predictions.jsonl"), &preds)?;
    println!(
        "fixture with {models} models x {cases} cases written to {}",
        out_dir.display()
    );
    Ok(())
}
