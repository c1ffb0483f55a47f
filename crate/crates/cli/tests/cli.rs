use std::path::Path;
use std::process::{Command, Output};

const SMALL: &str = r#"
seed = 11

[dataset.synth]
recordings_per_class = 1

[evaluate]
folds = 4
subsets = ["ICS + Freq", "HOSA"]

[[evaluate.classifiers]]
kind = "knn"
k = 1

[elm]
activations = ["sig"]
tries = 3

[sweep]
classifier = { kind = "knn", k = 1 }
dims = [2, "full"]
"#;

fn myoact(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_myoact"))
        .current_dir(dir)
        .args(args)
        .output()
        .unwrap()
}

fn ok(dir: &Path, args: &[&str]) -> String {
    let out = myoact(dir, args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn small_run() -> tempfile::TempDir {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("run.toml"), SMALL).unwrap();
    for cmd in ["synth", "extract"] {
        ok(dir.path(), &["--config", "run.toml", cmd]);
    }
    dir
}

#[test]
fn small_pipeline_end_to_end() {
    let dir = small_run();
    let d = dir.path();
    let csv = std::fs::read_to_string(d.join("out/features/features.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next().unwrap().split(',').count(), 306);
    assert_eq!(lines.count(), 52);

    for cmd in ["train", "evaluate", "sweep-pca", "report"] {
        ok(d, &["--config", "run.toml", cmd]);
    }
    assert!(d.join("out/models/1-nn__ics-freq.json").is_file());
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(d.join("out/reports/evaluation.json")).unwrap()).unwrap();
    assert_eq!(report["rows"], 52);
    assert_eq!(report["results"].as_array().unwrap().len(), 2);
    assert_eq!(report["elm"][0]["tries"].as_array().unwrap().len(), 3);
    let summary = std::fs::read_to_string(d.join("out/reports/summary.md")).unwrap();
    assert!(summary.contains("Kappa"), "{summary}");
}

#[test]
fn reruns_are_byte_identical() {
    let dir = small_run();
    let d = dir.path();
    ok(d, &["--config", "run.toml", "evaluate"]);
    let first = std::fs::read(d.join("out/reports/evaluation.json")).unwrap();
    let features = std::fs::read(d.join("out/features/features.csv")).unwrap();
    ok(d, &["--config", "run.toml", "extract"]);
    ok(d, &["--config", "run.toml", "--threads", "1", "evaluate"]);
    assert_eq!(std::fs::read(d.join("out/features/features.csv")).unwrap(), features);
    assert_eq!(std::fs::read(d.join("out/reports/evaluation.json")).unwrap(), first);
}

#[test]
fn too_many_folds_fails() {
    let dir = small_run();
    let d = dir.path();
    std::fs::write(d.join("bad.toml"), SMALL.replace("folds = 4", "folds = 60")).unwrap();
    let out = myoact(d, &["--config", "bad.toml", "evaluate"]);
    assert!(!out.status.success());
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("error:"), "{err}");
}

#[test]
fn config_errors_are_reported() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    std::fs::write(d.join("typo.toml"), "seed = 1\n[evaluate]\nfolds_count = 3\n").unwrap();
    assert!(!myoact(d, &["--config", "typo.toml", "synth"]).status.success());
    std::fs::write(d.join("noseed.toml"), "out = \"o\"\n").unwrap();
    let out = myoact(d, &["--config", "noseed.toml", "synth"]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("seed"));
    assert!(!myoact(d, &["--seed", "1", "evaluate"]).status.success());
}
