//! `posterqa` — deterministic evaluation toolbox for multi-dimensional
//! poster quality scoring.
//!
//! Exit codes: 0 success, 1 fatal input/schema error, 2 configuration error.

mod commands;
mod config;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Result;
use clap::{Parser, Subcommand};

use config::{OutputFormat, RemainderPolicy, ToolConfig};

#[derive(Parser)]
#[command(
    name = "posterqa",
    version,
    about = "Deterministic scoring, statistics and reporting for poster quality evaluation"
)]
struct Cli {
    /// Path to a JSON or TOML configuration file.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Worker threads for parallel sections (0 = all cores). Output is
    /// byte-identical regardless of this setting.
    #[arg(long, global = true, default_value_t = 0)]
    jobs: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse raw model outputs into structured verdicts and scores.
    Parse {
        /// JSONL with {"id", "raw"} lines.
        input: PathBuf,
        /// Output JSONL path.
        #[arg(long)]
        out: PathBuf,
    },
    /// Compute reward breakdowns for raw predictions against ground truth.
    Reward {
        /// JSONL with {"id", "raw"} prediction lines.
        pred: PathBuf,
        /// JSONL with annotation records.
        #[arg(long)]
        gt: PathBuf,
        /// Output JSONL path.
        #[arg(long)]
        out: PathBuf,
    },
    /// Per-dimension PLCC / SRCC / Acc@k evaluation report.
    Eval {
        /// JSONL with {"id", "scores"} prediction lines.
        pred: PathBuf,
        /// JSONL with annotation records.
        #[arg(long)]
        gt: PathBuf,
        /// Output path (JSON; markdown/CSV written alongside when selected).
        #[arg(long)]
        out: PathBuf,
        /// Report rendering format.
        #[arg(long, value_enum)]
        format: Option<OutputFormat>,
    },
    /// Select the K hardest samples by prediction error.
    SelectHard {
        /// JSONL with {"id", "scores"} prediction lines.
        pred: PathBuf,
        /// JSONL with annotation records.
        #[arg(long)]
        gt: PathBuf,
        /// Target subset size.
        #[arg(long)]
        k: usize,
        /// Rank globally instead of stratifying by source.
        #[arg(long)]
        global: bool,
        /// Override the remainder policy from the config.
        #[arg(long, value_enum)]
        remainder: Option<RemainderPolicy>,
        /// Output JSON path.
        #[arg(long)]
        out: PathBuf,
    },
    /// Dataset statistics: distributions, correlations, weakest links.
    Stats {
        /// JSONL with annotation records.
        input: PathBuf,
        /// Directory for the emitted CSV/JSON artifacts.
        #[arg(long)]
        out_dir: PathBuf,
    },
    /// Text accuracy metrics: phrase F1, character similarity, edit distance.
    TextMetrics {
        /// JSONL with text comparison cases.
        input: PathBuf,
        /// Output JSON path.
        #[arg(long)]
        out: PathBuf,
    },
    /// Aggregate precomputed fidelity features (DINO/CLIP/LPIPS) per model.
    Fidelity {
        /// JSONL with per-case feature records.
        input: PathBuf,
        /// Output JSON path.
        #[arg(long)]
        out: PathBuf,
    },
    /// Merge score, text and fidelity inputs into a benchmark report.
    BenchReport {
        /// JSONL with human benchmark scores.
        #[arg(long)]
        human: Option<PathBuf>,
        /// JSONL with model benchmark scores.
        #[arg(long)]
        model_scores: Option<PathBuf>,
        /// JSONL with text comparison cases.
        #[arg(long)]
        text: Option<PathBuf>,
        /// JSONL with fidelity feature records.
        #[arg(long)]
        fidelity: Option<PathBuf>,
        /// Directory for report.json, report.md and per-model JSON.
        #[arg(long)]
        out_dir: PathBuf,
    },
    /// Generate a seeded synthetic fixture for smoke tests and demos.
    Fixture {
        /// RNG seed; the same seed always produces identical files.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Number of synthetic models.
        #[arg(long, default_value_t = 5)]
        models: usize,
        /// Number of synthetic cases per model.
        #[arg(long, default_value_t = 64)]
        cases: usize,
        /// Directory for the generated JSONL files.
        #[arg(long)]
        out_dir: PathBuf,
    },
}

fn load_config(path: Option<&PathBuf>) -> Result<ToolConfig> {
    match path {
        Some(p) => ToolConfig::load(p),
        None => Ok(ToolConfig::default()),
    }
}

fn run(cli: Cli, cfg: &ToolConfig) -> Result<()> {
    match cli.command {
        Command::Parse { input, out } => commands::cmd_parse(&input, &out),
        Command::Reward { pred, gt, out } => commands::cmd_reward(cfg, &pred, &gt, &out),
        Command::Eval {
            pred,
            gt,
            out,
            format,
        } => commands::cmd_eval(cfg, &pred, &gt, &out, format.unwrap_or(cfg.format)),
        Command::SelectHard {
            pred,
            gt,
            k,
            global,
            remainder,
            out,
        } => {
            let fill = matches!(
                remainder.unwrap_or(cfg.remainder_policy),
                RemainderPolicy::Fill
            );
            commands::cmd_select_hard(cfg, &pred, &gt, k, global, fill, &out)
        }
        Command::Stats { input, out_dir } => commands::cmd_stats(cfg, &input, &out_dir),
        Command::TextMetrics { input, out } => commands::cmd_text_metrics(&input, &out),
        Command::Fidelity { input, out } => commands::cmd_fidelity(&input, &out),
        Command::BenchReport {
            human,
            model_scores,
            text,
            fidelity,
            out_dir,
        } => commands::cmd_bench_report(
            cfg,
            human.as_deref(),
            model_scores.as_deref(),
            text.as_deref(),
            fidelity.as_deref(),
            &out_dir,
        ),
        Command::Fixture {
            seed,
            models,
            cases,
            out_dir,
        } => commands::cmd_fixture(seed, models, cases, &out_dir),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();

    let cfg = match load_config(cli.config.as_ref()) {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("configuration error: {e:#}");
            return ExitCode::from(2);
        }
    };

    if let Err(e) = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.jobs)
        .build_global()
    {
        eprintln!("configuration error: {e}");
        return ExitCode::from(2);
    }

    match run(cli, &cfg) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
