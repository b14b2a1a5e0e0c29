use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn ocrgen(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ocrgen"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn stderr_json(out: &Output) -> Value {
    let text = String::from_utf8_lossy(&out.stderr);
    assert_eq!(text.trim().lines().count(), 1, "stderr: {text}");
    serde_json::from_str(text.trim()).expect("stderr is one JSON line")
}

#[test]
fn render_writes_nonblank_png() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("x.png");
    let res = ocrgen(&[
        "render",
        "--label",
        "H_{2}O",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(res.status.success(), "{res:?}");
    let bytes = fs::read(&out).unwrap();
    assert_eq!(&bytes[1..4], b"PNG");
    let fit = dir.path().join("fit.png");
    let res = ocrgen(&[
        "render",
        "--label",
        "$H_{2}O$",
        "--fit",
        "--out",
        fit.to_str().unwrap(),
    ]);
    assert!(res.status.success());
}

#[test]
fn evaluate_identical_files_scores_100() {
    let dir = tempfile::tempdir().unwrap();
    let refs = dir.path().join("refs.txt");
    fs::write(&refs, "a b c d e\nH_{2}O + NaCl\n\\alpha^{2} x y z\n").unwrap();
    let report = dir.path().join("report.json");
    let res = ocrgen(&[
        "evaluate",
        "--refs",
        refs.to_str().unwrap(),
        "--hyps",
        refs.to_str().unwrap(),
        "--out",
        report.to_str().unwrap(),
    ]);
    assert!(res.status.success(), "{res:?}");
    let v = stdout_json(&res);
    for k in ["bleu4", "edit", "exact_match"] {
        assert!((v[k].as_f64().unwrap() - 100.0).abs() < 1e-9, "{k}");
    }
    assert_eq!(v["n_records"], 3);
    assert_eq!(v["tokenizer_mode"], "latex");
    let file: Value = serde_json::from_str(&fs::read_to_string(report).unwrap()).unwrap();
    assert_eq!(file, v);
}

#[test]
fn evaluate_jsonl_and_mismatch() {
    let dir = tempfile::tempdir().unwrap();
    let refs = dir.path().join("refs.jsonl");
    let hyps = dir.path().join("hyps.jsonl");
    fs::write(&refs, "\"abc\"\n{\"label\": \"xy\"}\n").unwrap();
    fs::write(&hyps, "\"abd\"\n\"xy\"\n").unwrap();
    let res = ocrgen(&[
        "evaluate",
        "--refs",
        refs.to_str().unwrap(),
        "--hyps",
        hyps.to_str().unwrap(),
    ]);
    assert!(res.status.success(), "{res:?}");
    let v = stdout_json(&res);
    assert!((v["edit"].as_f64().unwrap() - 80.0).abs() < 1e-9);
    assert_eq!(v["exact_match"], 50.0);

    fs::write(&hyps, "\"abd\"\n").unwrap();
    let res = ocrgen(&[
        "evaluate",
        "--refs",
        refs.to_str().unwrap(),
        "--hyps",
        hyps.to_str().unwrap(),
    ]);
    assert_eq!(res.status.code(), Some(2));
    assert_eq!(stderr_json(&res)["error"], "metrics");
}

fn generate(root: &Path, jobs: &str) -> String {
    let res = ocrgen(&[
        "--seed",
        "17",
        "--set",
        "plan.counts.english=0",
        "--set",
        "plan.counts.chem=6",
        "--set",
        "plan.counts.numeric=6",
        "generate",
        "--out",
        root.to_str().unwrap(),
        "--jobs",
        jobs,
    ]);
    assert!(res.status.success(), "{res:?}");
    let v = stdout_json(&res);
    assert_eq!(v["records"], 12);
    v["manifest_hash"].as_str().unwrap().to_owned()
}

#[test]
fn generate_twice_prints_same_hash() {
    let dir = tempfile::tempdir().unwrap();
    let a = generate(&dir.path().join("a"), "1");
    let b = generate(&dir.path().join("b"), "3");
    assert_eq!(a, b);
    assert_eq!(
        fs::read(dir.path().join("a/manifest.jsonl")).unwrap(),
        fs::read(dir.path().join("b/manifest.jsonl")).unwrap()
    );

    let res = ocrgen(&["stats", dir.path().join("a").to_str().unwrap()]);
    assert!(res.status.success());
    let table = String::from_utf8(res.stdout).unwrap();
    assert!(table.contains("Avg # Characters / Record"));
    assert!(table.lines().last().unwrap().contains('6'));

    let res = ocrgen(&[
        "inspect",
        "--manifest",
        dir.path().join("a").to_str().unwrap(),
        "--id",
        "chem_0000000",
    ]);
    assert!(res.status.success(), "{res:?}");
    assert!(String::from_utf8(res.stdout).unwrap().contains("Run("));
}

#[test]
fn config_file_and_seed_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("plan.json");
    fs::write(
        &cfg,
        r#"{"plan": {"counts": {"english": 0, "chem": 2, "numeric": 0}, "master_seed": 1}}"#,
    )
    .unwrap();
    let run = |seed: &str, out: &str| {
        let res = ocrgen(&[
            "--config",
            cfg.to_str().unwrap(),
            "--seed",
            seed,
            "generate",
            "--out",
            dir.path().join(out).to_str().unwrap(),
        ]);
        assert!(res.status.success(), "{res:?}");
        stdout_json(&res)["manifest_hash"]
            .as_str()
            .unwrap()
            .to_owned()
    };
    assert_ne!(run("1", "s1"), run("2", "s2"));
    let plan: Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("s2/plan.json")).unwrap())
            .unwrap();
    assert_eq!(plan["plan"]["master_seed"], 2);
}

#[test]
fn transform_directory() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("in");
    fs::create_dir(&input).unwrap();
    for name in ["a.png", "b.png"] {
        let res = ocrgen(&[
            "render",
            "--label",
            "x^{2}",
            "--out",
            input.join(name).to_str().unwrap(),
        ]);
        assert!(res.status.success());
    }
    let out = dir.path().join("out");
    let res = ocrgen(&[
        "--set",
        "plan.transforms.pad_prob=1",
        "--set",
        "plan.transforms.pad_max=5",
        "transform",
        "--input",
        input.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(res.status.success(), "{res:?}");
    let lines = String::from_utf8(res.stdout).unwrap();
    assert_eq!(lines.lines().count(), 2);
    assert!(out.join("a.png").exists() && out.join("b.png").exists());
}

#[test]
fn help_lists_config_keys() {
    let res = ocrgen(&["--help"]);
    assert!(res.status.success());
    let text = String::from_utf8(res.stdout).unwrap();
    for key in [
        "plan.counts.english",
        "plan.splits.train",
        "plan.english.line_break_prob",
        "plan.chem.max_compounds",
        "plan.numeric.decimal_max",
        "plan.transforms.bold_n",
        "plan.render.canvas_width",
        "plan.max_retries",
        "metrics.tokenizer",
        "external.max_width",
    ] {
        assert!(text.contains(key), "missing {key}");
    }
}

#[test]
fn exit_codes_and_error_lines() {
    let res = ocrgen(&["frobnicate"]);
    assert_eq!(res.status.code(), Some(1));
    assert_eq!(stderr_json(&res)["error"], "usage");

    let res = ocrgen(&["--set", "plan.no_such_key=1", "stats", "."]);
    assert_eq!(res.status.code(), Some(2));
    assert_eq!(stderr_json(&res)["error"], "config");

    let dir = tempfile::tempdir().unwrap();
    let res = ocrgen(&[
        "render",
        "--label",
        "\\foo",
        "--out",
        dir.path().join("x.png").to_str().unwrap(),
    ]);
    assert_eq!(res.status.code(), Some(2));
    assert_eq!(stderr_json(&res)["error"], "parse");

    let res = ocrgen(&["generate", "--out", dir.path().join("d").to_str().unwrap()]);
    assert_eq!(res.status.code(), Some(2), "english without a corpus");
}
