//! Report structures and table rendering. Every number in a rendered table
//! comes verbatim from the JSON representation; formatting fixes
//! correlations to 3 decimals, accuracies to 1, benchmark scores to 2.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use posterqa_core::score::Dimension;

/// Provenance block attached to every report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub toolbox_version: String,
    pub config_hash: String,
    /// Input path -> SHA-256 digest.
    pub inputs: BTreeMap<String, String>,
}

impl Provenance {
    pub fn new(config_hash: String, inputs: BTreeMap<String, String>) -> Self {
        Provenance {
            toolbox_version: env!("CARGO_PKG_VERSION").to_string(),
            config_hash,
            inputs,
        }
    }
}

/// Correlation/accuracy cell for one dimension.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DimensionStats {
    pub plcc: Option<f64>,
    pub srcc: Option<f64>,
    /// Keyed by the k threshold rendered with one decimal (e.g. "0.5").
    pub acc: BTreeMap<String, f64>,
    pub n: usize,
    pub degenerate: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub provenance: Provenance,
    pub n: usize,
    /// Keyed by dimension name, canonical iteration order when rendered.
    pub dimensions: BTreeMap<String, DimensionStats>,
    /// Input ids that could not be evaluated, with the reason.
    pub exceptions: BTreeMap<String, String>,
}

pub fn fmt_corr(v: Option<f64>) -> String {
    v.map_or_else(|| "n/a".to_string(), |v| format!("{v:.3}"))
}

pub fn fmt_acc(v: f64) -> String {
    format!("{v:.1}")
}

pub fn fmt_bench(v: f64) -> String {
    format!("{v:.2}")
}

impl EvalReport {
    pub fn to_markdown(&self) -> String {
        let mut k_labels: Vec<String> = self
            .dimensions
            .values()
            .flat_map(|d| d.acc.keys().cloned())
            .collect();
        k_labels.sort();
        k_labels.dedup();

        let mut out = String::new();
        out.push_str("| Dimension | PLCC | SRCC |");
        for k in &k_labels {
            out.push_str(&format!(" Acc@{k} |"));
        }
        out.push('\n');
        out.push_str("|---|---|---|");
        for _ in &k_labels {
            out.push_str("---|");
        }
        out.push('\n');
        for dim in Dimension::ALL {
            if let Some(stats) = self.dimensions.get(dim.name()) {
                out.push_str(&format!(
                    "| {} | {} | {} |",
                    dim.name(),
                    fmt_corr(stats.plcc),
                    fmt_corr(stats.srcc)
                ));
                for k in &k_labels {
                    match stats.acc.get(k) {
                        Some(&v) => out.push_str(&format!(" {} |", fmt_acc(v))),
                        None => out.push_str(" n/a |"),
                    }
                }
                out.push('\n');
            }
        }
        out
    }

    pub fn to_csv(&self) -> String {
        let mut k_labels: Vec<String> = self
            .dimensions
            .values()
            .flat_map(|d| d.acc.keys().cloned())
            .collect();
        k_labels.sort();
        k_labels.dedup();

        let mut out = String::from("dimension,plcc,srcc");
        for k in &k_labels {
            out.push_str(&format!(",acc@{k}"));
        }
        out.push('\n');
        for dim in Dimension::ALL {
            if let Some(stats) = self.dimensions.get(dim.name()) {
                out.push_str(&format!(
                    "{},{},{}",
                    dim.name(),
                    fmt_corr(stats.plcc),
                    fmt_corr(stats.srcc)
                ));
                for k in &k_labels {
                    match stats.acc.get(k) {
                        Some(&v) => out.push_str(&format!(",{}", fmt_acc(v))),
                        None => out.push_str(",n/a"),
                    }
                }
                out.push('\n');
            }
        }
        out
    }
}

/// Per-model merged benchmark block; absent inputs stay `None`, never
/// fabricated.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelBenchReport {
    pub model: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub human_means: Option<BTreeMap<String, f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub model_means: Option<BTreeMap<String, f64>>,
    /// Human-vs-model correlation over shared cases, overall dimension.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub human_model_plcc: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub human_model_srcc: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub text: Option<TextBlock>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fidelity: Option<FidelityBlock>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TextBlock {
    pub phrase_f1_mean: f64,
    /// Bag-of-characters cosine (the toolbox `char_sim` definition).
    pub char_sim_mean: f64,
    /// Normalized Levenshtein similarity (the alternative definition).
    pub lev_sim_mean: f64,
    pub n: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FidelityBlock {
    pub dino_sim_mean: f64,
    pub clip_score_mean: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lpips_mean: Option<f64>,
    pub lpips_covered: usize,
    pub n: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchReport {
    pub provenance: Provenance,
    pub models: Vec<ModelBenchReport>,
}

impl BenchReport {
    /// Human/model paired score columns per dimension.
    pub fn scores_table_markdown(&self) -> String {
        let mut out = String::from("| Model |");
        for dim in Dimension::ALL {
            out.push_str(&format!(" {} (Human / Model) |", dim.name()));
        }
        out.push_str("\n|---|");
        for _ in Dimension::ALL {
            out.push_str("---|");
        }
        out.push('\n');
        for m in &self.models {
            out.push_str(&format!("| {} |", m.model));
            for dim in Dimension::ALL {
                let human = m
                    .human_means
                    .as_ref()
                    .and_then(|h| h.get(dim.name()))
                    .map_or_else(|| "-".to_string(), |&v| fmt_bench(v));
                let model = m
                    .model_means
                    .as_ref()
                    .and_then(|h| h.get(dim.name()))
                    .map_or_else(|| "-".to_string(), |&v| fmt_bench(v));
                out.push_str(&format!(" {human} / {model} |"));
            }
            out.push('\n');
        }
        out
    }

    /// Fidelity and text-accuracy columns.
    pub fn auxiliary_table_markdown(&self) -> String {
        let mut out = String::from(
            "| Model | DINO Sim | LPIPS | CLIP Score | Phrase F1 | Char Sim |\n|---|---|---|---|---|---|\n",
        );
        for m in &self.models {
            let f = m.fidelity.as_ref();
            let t = m.text.as_ref();
            let cell = |v: Option<f64>| v.map_or_else(|| "-".to_string(), fmt_bench);
            out.push_str(&format!(
                "| {} | {} | {} | {} | {} | {} |\n",
                m.model,
                cell(f.map(|f| f.dino_sim_mean)),
                cell(f.and_then(|f| f.lpips_mean)),
                cell(f.map(|f| f.clip_score_mean)),
                cell(t.map(|t| t.phrase_f1_mean)),
                cell(t.map(|t| t.char_sim_mean)),
            ));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn markdown_formats_to_fixed_decimals() {
        let mut acc = BTreeMap::new();
        acc.insert("0.5".to_string(), 51.04321);
        let mut dims = BTreeMap::new();
        dims.insert(
            "overall".to_string(),
            DimensionStats {
                plcc: Some(0.42468),
                srcc: Some(0.43319),
                acc,
                n: 10,
                degenerate: false,
            },
        );
        let report = EvalReport {
            provenance: Provenance::new("h".into(), BTreeMap::new()),
            n: 10,
            dimensions: dims,
            exceptions: BTreeMap::new(),
        };
        let md = report.to_markdown();
        assert!(md.contains("0.425"));
        assert!(md.contains("0.433"));
        assert!(md.contains("51.0"));
        let csv = report.to_csv();
        assert!(csv.contains("overall,0.425,0.433,51.0"));
    }
}
