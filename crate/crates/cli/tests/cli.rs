//! End-to-end round trips for every subcommand, driving the installed
//! binary exactly as a user would.

use std::path::Path;
use std::process::{Command, Output};

fn run(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_posterqa"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn run_ok(dir: &Path, args: &[&str]) -> Output {
    let out = run(dir, args);
    assert!(
        out.status.success(),
        "`posterqa {}` failed:\n{}",
        args.join(" "),
        String::from_utf8_lossy(&out.stderr)
    );
    out
}

fn write(dir: &Path, name: &str, content: &str) {
    std::fs::write(dir.join(name), content).unwrap();
}

const VALID_RAW: &str = r#"<think>checked every dimension</think><answer>{"object":4.5,"background":4.0,"text":3.5,"layout":4.0,"overall":4.0}</answer>"#;

fn gt_line(id: &str, source: &str, v: [f64; 5]) -> String {
    format!(
        r#"{{"id":"{id}","source":"{source}","scores":{{"object":{},"background":{},"text":{},"layout":{},"overall":{}}},"tags":{{}},"cot":"looks fine"}}"#,
        v[0], v[1], v[2], v[3], v[4]
    )
}

fn pred_line(id: &str, v: [f64; 5]) -> String {
    format!(
        r#"{{"id":"{id}","scores":{{"object":{},"background":{},"text":{},"layout":{},"overall":{}}}}}"#,
        v[0], v[1], v[2], v[3], v[4]
    )
}

#[test]
fn parse_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    write(
        dir.path(),
        "raw.jsonl",
        &format!(
            "{}\n{}\n",
            format!(r#"{{"id":"a","raw":"{}"}}"#, VALID_RAW.replace('"', "\\\"")),
            r#"{"id":"b","raw":"<think>x</think>"}"#
        ),
    );
    run_ok(dir.path(), &["parse", "raw.jsonl", "--out", "parsed.jsonl"]);
    let parsed = std::fs::read_to_string(dir.path().join("parsed.jsonl")).unwrap();
    let lines: Vec<serde_json::Value> = parsed
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(lines.len(), 2);
    assert_eq!(lines[0]["verdict"], "valid");
    assert_eq!(lines[0]["scores"]["object"], 4.5);
    assert_eq!(lines[1]["verdict"], "invalid_structure");
    assert!(lines[1].get("scores").is_none());
}

#[test]
fn reward_matches_library_values() {
    let dir = tempfile::tempdir().unwrap();
    write(
        dir.path(),
        "raw.jsonl",
        &format!(r#"{{"id":"a","raw":"{}"}}"#, VALID_RAW.replace('"', "\\\"")),
    );
    // ground truth equal to the prediction: perfect accuracy and distance
    write(
        dir.path(),
        "gt.jsonl",
        &gt_line("a", "merchant_hq", [4.5, 4.0, 3.5, 4.0, 4.0]),
    );
    run_ok(
        dir.path(),
        &["reward", "raw.jsonl", "--gt", "gt.jsonl", "--out", "r.jsonl"],
    );
    let line: serde_json::Value = serde_json::from_str(
        std::fs::read_to_string(dir.path().join("r.jsonl"))
            .unwrap()
            .lines()
            .next()
            .unwrap(),
    )
    .unwrap();
    assert_eq!(line["r_fmt"], 1.0);
    assert_eq!(line["r_acc"], 1.0);
    assert_eq!(line["r_dist"], 1.0);
    assert_eq!(line["total"], 2.0);
}

#[test]
fn reward_missing_ground_truth_is_fatal() {
    let dir = tempfile::tempdir().unwrap();
    write(
        dir.path(),
        "raw.jsonl",
        &format!(r#"{{"id":"zzz","raw":"{}"}}"#, VALID_RAW.replace('"', "\\\"")),
    );
    write(
        dir.path(),
        "gt.jsonl",
        &gt_line("a", "merchant_hq", [4.0, 4.0, 4.0, 4.0, 4.0]),
    );
    let out = run(
        dir.path(),
        &["reward", "raw.jsonl", "--gt", "gt.jsonl", "--out", "r.jsonl"],
    );
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("zzz"));
}

#[test]
fn eval_reports_all_dimensions() {
    let dir = tempfile::tempdir().unwrap();
    let mut gt = String::new();
    let mut pred = String::new();
    let vals = [
        [4.0, 3.0, 2.0, 4.5, 3.5],
        [2.0, 4.0, 3.0, 1.5, 2.5],
        [3.0, 2.0, 4.0, 3.5, 4.5],
        [1.0, 5.0, 1.0, 2.5, 1.5],
    ];
    for (i, v) in vals.iter().enumerate() {
        gt.push_str(&gt_line(&format!("s{i}"), "merchant_hq", *v));
        gt.push('\n');
        let mut shifted = *v;
        shifted[0] = (shifted[0] + 0.5).min(5.0);
        pred.push_str(&pred_line(&format!("s{i}"), shifted));
        pred.push('\n');
    }
    write(dir.path(), "gt.jsonl", &gt);
    write(dir.path(), "pred.jsonl", &pred);
    run_ok(
        dir.path(),
        &[
            "eval",
            "pred.jsonl",
            "--gt",
            "gt.jsonl",
            "--out",
            "eval.json",
            "--format",
            "md",
        ],
    );
    let report: serde_json::Value = serde_json::from_str(
        &std::fs::read_to_string(dir.path().join("eval.json")).unwrap(),
    )
    .unwrap();
    assert_eq!(report["n"], 4);
    for dim in ["object", "background", "text", "layout", "overall"] {
        let stats = &report["dimensions"][dim];
        assert!(stats["plcc"].is_number(), "plcc missing for {dim}");
        assert!(stats["acc"]["0.5"].is_number());
        assert!(stats["acc"]["1.0"].is_number());
    }
    // overall is an exact match, object is shifted by +0.5 (inclusive at k=0.5)
    assert_eq!(report["dimensions"]["overall"]["acc"]["0.5"], 100.0);
    assert_eq!(report["dimensions"]["object"]["acc"]["0.5"], 100.0);
    // --format md writes a sibling markdown rendering
    let md = std::fs::read_to_string(dir.path().join("eval.md")).unwrap();
    assert!(md.contains("| Dimension | PLCC | SRCC |"));
}

#[test]
fn select_hard_respects_floor_quotas() {
    let dir = tempfile::tempdir().unwrap();
    let mut gt = String::new();
    let mut pred = String::new();
    let sources = [
        "merchant_hq",
        "merchant_hq",
        "merchant_hq",
        "ai_generated",
        "ai_generated",
    ];
    for (i, src) in sources.iter().enumerate() {
        let v = [3.0, 3.0, 3.0, 3.0, 3.0];
        gt.push_str(&gt_line(&format!("s{i}"), src, v));
        gt.push('\n');
        let mut p = v;
        p[4] = 3.0 + 0.3 * (i as f64); // increasing error with index
        pred.push_str(&pred_line(&format!("s{i}"), p));
        pred.push('\n');
    }
    write(dir.path(), "gt.jsonl", &gt);
    write(dir.path(), "pred.jsonl", &pred);
    run_ok(
        dir.path(),
        &[
            "select-hard",
            "pred.jsonl",
            "--gt",
            "gt.jsonl",
            "--k",
            "3",
            "--out",
            "sel.json",
        ],
    );
    let sel: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("sel.json")).unwrap())
            .unwrap();
    // floor quotas: merchant_hq 3*3/5=1, ai_generated 3*2/5=1, remainder 1
    assert_eq!(sel["plan"]["remainder"], 1);
    let ids: Vec<&str> = sel["selected"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r.as_str().unwrap())
        .collect();
    assert_eq!(ids, vec!["s2", "s4"]);

    // --remainder fill tops the subset up to exactly k
    run_ok(
        dir.path(),
        &[
            "select-hard",
            "pred.jsonl",
            "--gt",
            "gt.jsonl",
            "--k",
            "3",
            "--remainder",
            "fill",
            "--out",
            "sel_fill.json",
        ],
    );
    let sel: serde_json::Value = serde_json::from_str(
        &std::fs::read_to_string(dir.path().join("sel_fill.json")).unwrap(),
    )
    .unwrap();
    assert_eq!(sel["selected"].as_array().unwrap().len(), 3);
}

#[test]
fn stats_writes_all_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let mut gt = String::new();
    for i in 0..6 {
        let base = 1.5 + 0.5 * (i as f64);
        gt.push_str(&gt_line(
            &format!("s{i}"),
            if i % 2 == 0 { "merchant_hq" } else { "open_source" },
            [base, base, (base - 0.5).max(1.0), base, base],
        ));
        gt.push('\n');
    }
    write(dir.path(), "ann.jsonl", &gt);
    run_ok(dir.path(), &["stats", "ann.jsonl", "--out-dir", "stats"]);
    for name in [
        "correlation_matrix.csv",
        "weakest_link.csv",
        "cot_length.csv",
        "per_source_means.csv",
        "distribution_overall.csv",
        "distribution_object.csv",
        "distribution_background.csv",
        "distribution_text.csv",
        "distribution_layout.csv",
    ] {
        assert!(
            dir.path().join("stats").join(name).exists(),
            "missing artifact {name}"
        );
    }
}

#[test]
fn text_metrics_and_fidelity_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    write(
        dir.path(),
        "text.jsonl",
        concat!(
            r#"{"case_id":"c1","model":"m","gt_phrases":["限时特惠","买一送一"],"gt_text":"限时特惠 买一送一","pred_phrases":["限时特惠"],"pred_text":"限时特惠"}"#,
            "\n"
        ),
    );
    run_ok(
        dir.path(),
        &["text-metrics", "text.jsonl", "--out", "text.json"],
    );
    let rep: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("text.json")).unwrap())
            .unwrap();
    // one of two reference phrases matched: P=1, R=0.5, F1=2/3
    let f1 = rep["per_model"]["m"]["phrase_f1_mean"].as_f64().unwrap();
    assert!((f1 - 2.0 / 3.0).abs() < 1e-9);

    write(
        dir.path(),
        "fid.jsonl",
        concat!(
            r#"{"case_id":"c1","model":"m","dino_ref":[1.0,0.0],"dino_gen":[1.0,0.0],"clip_ref":[0.5,0.5],"clip_gen":[0.5,0.5],"lpips":0.2}"#,
            "\n",
            r#"{"case_id":"c2","model":"m","dino_ref":[0.0,1.0],"dino_gen":[1.0,0.0],"clip_ref":[1.0,0.0],"clip_gen":[0.0,1.0]}"#,
            "\n"
        ),
    );
    run_ok(dir.path(), &["fidelity", "fid.jsonl", "--out", "fid.json"]);
    let rep: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("fid.json")).unwrap())
            .unwrap();
    let m = &rep["per_model"]["m"];
    assert_eq!(m["dino_sim_mean"], 0.5); // mean of 1.0 and 0.0
    assert_eq!(m["lpips_mean"], 0.2); // only the covered case contributes
    assert_eq!(m["lpips_covered"], 1);
    assert_eq!(m["n"], 2);
}

#[test]
fn config_error_exits_2_and_bad_input_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "bad.toml", "[reward]\ntau = -1.0\n");
    write(dir.path(), "raw.jsonl", r#"{"id":"a","raw":"x"}"#);
    let out = run(
        dir.path(),
        &[
            "--config",
            "bad.toml",
            "parse",
            "raw.jsonl",
            "--out",
            "p.jsonl",
        ],
    );
    assert_eq!(out.status.code(), Some(2));

    let out = run(
        dir.path(),
        &["parse", "no_such_file.jsonl", "--out", "p.jsonl"],
    );
    assert_eq!(out.status.code(), Some(1));

    write(dir.path(), "malformed.jsonl", "{not json}\n");
    let out = run(
        dir.path(),
        &["parse", "malformed.jsonl", "--out", "p.jsonl"],
    );
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn config_overrides_reward_parameters() {
    let dir = tempfile::tempdir().unwrap();
    // tau = 1.0 makes a 0.5-point miss count as accurate
    write(dir.path(), "cfg.toml", "[reward]\ntau = 1.0\n");
    write(
        dir.path(),
        "raw.jsonl",
        &format!(r#"{{"id":"a","raw":"{}"}}"#, VALID_RAW.replace('"', "\\\"")),
    );
    write(
        dir.path(),
        "gt.jsonl",
        // 0.5 away from the prediction on every dimension, same tier
        &gt_line("a", "merchant_hq", [4.0, 4.5, 3.0, 4.5, 4.5]),
    );
    run_ok(
        dir.path(),
        &[
            "--config",
            "cfg.toml",
            "reward",
            "raw.jsonl",
            "--gt",
            "gt.jsonl",
            "--out",
            "r.jsonl",
        ],
    );
    let line: serde_json::Value = serde_json::from_str(
        std::fs::read_to_string(dir.path().join("r.jsonl"))
            .unwrap()
            .lines()
            .next()
            .unwrap(),
    )
    .unwrap();
    assert_eq!(line["r_acc"], 1.0);
}
