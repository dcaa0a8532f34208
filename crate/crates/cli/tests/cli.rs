//! End-to-end tests of the `overheadnn` binary: exit codes, file outputs,
//! and byte-identical reruns.

use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_overheadnn"))
}

fn run(args: &[&str], dir: &Path) -> Output {
    bin().args(args).current_dir(dir).output().expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8_lossy(&output.stdout).into_owned()
}

fn stderr(output: &Output) -> String {
    String::from_utf8_lossy(&output.stderr).into_owned()
}

fn synth_52(dir: &Path) {
    let out = run(&["synth", "--n", "52", "--seed", "23", "--out", "."], dir);
    assert!(out.status.success(), "{}", stderr(&out));
    assert!(dir.join("projects.csv").exists());
    assert!(dir.join("ground_truth.json").exists());
}

#[test]
fn validate_accepts_a_clean_synthetic_file() {
    let dir = tempfile::tempdir().unwrap();
    synth_52(dir.path());
    let out = run(&["validate", "--data", "projects.csv"], dir.path());
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert!(stdout(&out).contains("52 records OK"));
}

#[test]
fn validate_reports_each_bad_row_with_exit_1() {
    let dir = tempfile::tempdir().unwrap();
    synth_52(dir.path());
    let text = std::fs::read_to_string(dir.path().join("projects.csv")).unwrap();
    let mut lines: Vec<String> = text.lines().map(str::to_string).collect();
    // Corrupt the first data row's firm-category field.
    let mut fields: Vec<&str> = lines[1].split(',').collect();
    fields[1] = "Zeroth";
    lines[1] = fields.join(",");
    std::fs::write(dir.path().join("broken.csv"), lines.join("\n")).unwrap();

    let out = run(&["validate", "--data", "broken.csv"], dir.path());
    assert_eq!(out.status.code(), Some(1));
    let printed = stdout(&out);
    assert!(printed.contains("row 1"), "{printed}");
    assert!(printed.contains("Zeroth"), "{printed}");
}

#[test]
fn missing_files_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["validate", "--data", "absent.csv"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["evaluate", "--model", "absent.json", "--data", "absent.csv"], dir.path());
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn synth_is_byte_identical_per_seed_and_rejects_n_zero() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a");
    let b = dir.path().join("b");
    std::fs::create_dir_all(&a).unwrap();
    std::fs::create_dir_all(&b).unwrap();
    for target in [&a, &b] {
        let out = run(
            &["synth", "--n", "52", "--seed", "9", "--out", target.to_str().unwrap()],
            dir.path(),
        );
        assert!(out.status.success());
    }
    assert_eq!(
        std::fs::read(a.join("projects.csv")).unwrap(),
        std::fs::read(b.join("projects.csv")).unwrap()
    );
    assert_eq!(
        std::fs::read(a.join("ground_truth.json")).unwrap(),
        std::fs::read(b.join("ground_truth.json")).unwrap()
    );

    let out = run(&["synth", "--n", "0"], dir.path());
    assert_eq!(out.status.code(), Some(2));
}

fn quick_sweep_args<'a>(extra: &[&'a str]) -> Vec<&'a str> {
    let mut args = vec![
        "sweep",
        "--data",
        "projects.csv",
        "--seed-split",
        "5",
        "--seed-train",
        "2024",
        "--max-epochs",
        "60",
        "--patience",
        "30",
    ];
    args.extend_from_slice(extra);
    args
}

#[test]
fn sweep_writes_reports_and_model_and_reruns_identically() {
    let dir = tempfile::tempdir().unwrap();
    synth_52(dir.path());

    let out = run(&quick_sweep_args(&["--out", "."]), dir.path());
    assert!(out.status.success(), "{}", stderr(&out));
    let printed = stdout(&out);
    assert!(printed.contains("learning_rule=back-propagation"), "{printed}");

    for file in ["sweep_report.csv", "sweep_report.txt", "best_model.json", "best_trial.json"] {
        assert!(dir.path().join(file).exists(), "missing {file}");
    }
    let pointer: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("best_trial.json")).unwrap())
            .unwrap();
    let trial_no = pointer["trial_no"].as_u64().unwrap();
    assert!((1..=58).contains(&trial_no), "trial {trial_no}");

    // Rerun into a second directory: byte-identical artifacts.
    let second = dir.path().join("again");
    std::fs::create_dir_all(&second).unwrap();
    let out = run(&quick_sweep_args(&["--out", "again"]), dir.path());
    assert!(out.status.success());
    for file in ["sweep_report.csv", "sweep_report.txt", "best_model.json", "best_trial.json"] {
        assert_eq!(
            std::fs::read(dir.path().join(file)).unwrap(),
            std::fs::read(second.join(file)).unwrap(),
            "{file} differs between identical runs"
        );
    }
}

#[test]
fn train_builds_the_requested_topology_and_rejects_deep_ones() {
    let dir = tempfile::tempdir().unwrap();
    synth_52(dir.path());

    let out = run(
        &[
            "train", "--topology", "10-13-1:sigmoid", "--data", "projects.csv", "--out", ".",
            "--max-epochs", "50", "--patience", "25",
        ],
        dir.path(),
    );
    assert!(out.status.success(), "{}", stderr(&out));
    let model: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("model.json")).unwrap())
            .unwrap();
    assert_eq!(model["topology"]["hidden"][0]["nodes"], 13);
    assert_eq!(model["topology"]["hidden"][0]["transfer"], "sigmoid");
    assert!(dir.path().join("training_report.json").exists());

    let out = run(
        &["train", "--topology", "10-6-4-1:tangent", "--data", "projects.csv", "--out", ".",
          "--max-epochs", "50", "--patience", "25"],
        dir.path(),
    );
    assert!(out.status.success());
    let model: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("model.json")).unwrap())
            .unwrap();
    assert_eq!(model["topology"]["hidden"][1]["nodes"], 4);

    let out = run(&["train", "--topology", "10-1-1-1-1", "--data", "projects.csv"], dir.path());
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("at most two hidden layers"));
}

#[test]
fn evaluate_replays_a_pairs_file() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("pairs.csv"),
        "actual,predicted\n8.13,8.32294\n9.51,9.07061\n10.86,10.59704\n10.84,11.11394\n11.43,11.3421\n",
    )
    .unwrap();
    let out = run(
        &["evaluate", "--pairs", "pairs.csv", "--threshold", "2.476118"],
        dir.path(),
    );
    assert!(out.status.success(), "{}", stderr(&out));
    let printed = stdout(&out);
    assert!(printed.contains("(+) 4.620294"), "{printed}");
    assert!(printed.contains("(-) 2.527122"), "{printed}");
    assert!(printed.contains("rms=0.276480"), "{printed}");

    // Threshold is mandatory in pairs mode.
    let out = run(&["evaluate", "--pairs", "pairs.csv"], dir.path());
    assert_eq!(out.status.code(), Some(2));

    // Empty pairs file is a domain failure.
    std::fs::write(dir.path().join("empty.csv"), "actual,predicted\n").unwrap();
    let out = run(&["evaluate", "--pairs", "empty.csv", "--threshold", "1"], dir.path());
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("no records"));
}

#[test]
fn evaluate_scores_a_model_on_data() {
    let dir = tempfile::tempdir().unwrap();
    synth_52(dir.path());
    let out = run(&quick_sweep_args(&["--out", "."]), dir.path());
    assert!(out.status.success());

    let out = run(
        &["evaluate", "--model", "best_model.json", "--data", "projects.csv", "--format", "json"],
        dir.path(),
    );
    assert!(out.status.success(), "{}", stderr(&out));
    let eval: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(eval["summary"]["n"], 52);
    assert!(eval["summary"]["accuracy"].as_f64().unwrap() > 0.0);
}

#[test]
fn predict_prints_two_decimal_predictions_in_input_order() {
    let dir = tempfile::tempdir().unwrap();
    synth_52(dir.path());
    let out = run(&quick_sweep_args(&["--out", "."]), dir.path());
    assert!(out.status.success());

    let out = run(
        &["predict", "--model", "best_model.json", "--data", "projects.csv"],
        dir.path(),
    );
    assert!(out.status.success(), "{}", stderr(&out));
    let printed = stdout(&out);
    let lines: Vec<&str> = printed.lines().collect();
    assert!(lines[0].starts_with("model "), "{}", lines[0]);
    assert!(lines[0].contains("threshold ±"), "{}", lines[0]);
    assert_eq!(lines.len(), 53); // header + 52 predictions
    assert!(lines[1].starts_with("s001 "), "{}", lines[1]);
    assert!(lines[52].starts_with("s052 "), "{}", lines[52]);
    let value = lines[1].split_whitespace().nth(1).unwrap();
    assert!(value.contains('.') && value.split('.').nth(1).unwrap().len() == 2, "{value}");
}

#[test]
fn predict_accepts_value_args_and_names_bad_fields() {
    let dir = tempfile::tempdir().unwrap();
    synth_52(dir.path());
    let out = run(&quick_sweep_args(&["--out", "."]), dir.path());
    assert!(out.status.success());

    let values = [
        "Construction Firm Category=First Category",
        "Project Size=120.5",
        "Project Duration=18",
        "Project Type=Residential",
        "Project Location=Delta",
        "Type-Nature of Client=Private",
        "Type of Contract=Lump Sum",
        "Contractor-Joint Venture=None",
        "Special Site Preparation Requirements=Minor",
        "Project need for Extra-man Power=No",
    ];
    let mut args = vec!["predict", "--model", "best_model.json"];
    for v in &values {
        args.push("--value");
        args.push(v);
    }
    let out = run(&args, dir.path());
    assert!(out.status.success(), "{}", stderr(&out));
    assert!(stdout(&out).lines().count() == 2);

    // Unknown label: domain failure naming the field.
    let bad_args: Vec<&str> = args
        .iter()
        .map(|s| if *s == values[3] { "Project Type=Castle" } else { *s })
        .collect();
    let out = run(&bad_args, dir.path());
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("Project Type"), "{}", stderr(&out));

    // Missing factor: usage failure naming the field.
    let out = run(&args[..args.len() - 2], dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("Project need for Extra-man Power"));
}

#[test]
fn config_file_supplies_flags_and_flags_override_it() {
    let dir = tempfile::tempdir().unwrap();
    synth_52(dir.path());
    std::fs::write(
        dir.path().join("run.json"),
        r#"{"data": "projects.csv", "seed_split": 5, "seed_train": 2024,
            "training": {"max_epochs": 60, "patience_epochs": 30}}"#,
    )
    .unwrap();

    let out = run(&["--config", "run.json", "sweep", "--out", "."], dir.path());
    assert!(out.status.success(), "{}", stderr(&out));
    let from_config = std::fs::read(dir.path().join("sweep_report.csv")).unwrap();

    // The same settings passed as flags produce the identical report.
    let second = dir.path().join("flags");
    std::fs::create_dir_all(&second).unwrap();
    let out = run(&quick_sweep_args(&["--out", "flags"]), dir.path());
    assert!(out.status.success());
    assert_eq!(from_config, std::fs::read(second.join("sweep_report.csv")).unwrap());

    // A flag overrides the config file: a different split changes the report.
    let third = dir.path().join("override");
    std::fs::create_dir_all(&third).unwrap();
    let out = run(
        &["--config", "run.json", "sweep", "--seed-split", "6", "--out", "override"],
        dir.path(),
    );
    assert!(out.status.success());
    assert_ne!(from_config, std::fs::read(third.join("sweep_report.csv")).unwrap());
}
