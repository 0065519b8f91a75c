use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use llp_lab::format::{load_collection, save_collection};

fn llp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_llp")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn write_config(dir: &Path, body: &str) -> PathBuf {
    let path = dir.join("cfg.yaml");
    std::fs::write(&path, body).unwrap();
    path
}

const SMALL: &str = "data:\n  source: synthetic\n  n_bags: 80\n  n_test: 100\nq: 5\nunion:\n  t: 3\nsample:\n  s: 200\ntrain:\n  epochs: 5\nruns: 2\n";

#[test]
fn run_writes_report_and_sidecar() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), SMALL);
    let out = dir.path().join("report.csv");
    let o = llp(&["run", "--config", p(&cfg), "--output", p(&out)]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = std::fs::read_to_string(&out).unwrap();
    assert_eq!(csv.lines().count(), 3);
    let summary = std::fs::read_to_string(dir.path().join("report.summary.txt")).unwrap();
    assert!(summary.contains("runs: 2"));
    assert!(dir.path().join("report.run1.clf").exists());

    let again = dir.path().join("again.csv");
    assert!(llp(&["run", "--config", p(&cfg), "--output", p(&again)])
        .status
        .success());
    assert_eq!(std::fs::read(&out).unwrap(), std::fs::read(&again).unwrap());
}

#[test]
fn flags_override_config() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), SMALL);
    let o = llp(&["run", "--config", p(&cfg), "--runs", "1", "--t", "2", "--seed", "4"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("runs: 1\n") && text.contains("t: 2\n") && text.contains("sd_defined: false"));
    assert!(text.contains("\n0,4,"));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), SMALL);
    assert_eq!(
        llp(&["run", "--config", p(&cfg), "--epsilon", "0.1"]).status.code(),
        Some(2)
    );
    let missing = write_config(
        dir.path(),
        "data:\n  source: tabular\n  path: nowhere.csv\n  schema: {target: y, positive: ['1']}\nq: 5\nunion: {t: 2}\nsample: {s: 10}\n",
    );
    assert_eq!(llp(&["run", "--config", p(&missing)]).status.code(), Some(6));
    let bad = dir.path().join("bad.txt");
    std::fs::write(&bad, "header llp 1 1 1\nx 0 - 0\nb 4 0.5 1 0\n").unwrap();
    assert_eq!(
        llp(&[
            "convert",
            "--input",
            p(&bad),
            "--output",
            p(&dir.path().join("o")),
            "--T",
            "3"
        ])
        .status
        .code(),
        Some(3)
    );
    assert_eq!(llp(&["verify", "mil", "--alpha", "1/2"]).status.code(), Some(2));
}

#[test]
fn verify_mil_reports_each_property() {
    let o = llp(&["verify", "mil", "--weightings", "10"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    for key in [
        "trivial_accuracy.value: 0.500000",
        "no_strong_optimum.status: pass",
        "offsets_disjoint.status: pass",
        "weak_exists_adversarial.status: pass",
        "adversarial_duality_gap.status: pass",
        "result: pass",
    ] {
        assert!(text.contains(key), "{key}\n{text}");
    }
}

#[test]
fn verify_llp_reports_exact_optimum() {
    let o = llp(&["verify", "llp", "--n-pairs", "8"]);
    let text = stdout(&o);
    assert!(text.contains("trivial_accuracy.value: 0.500000"), "{text}");
    assert!(text.contains("best_labeling_exact.value"));
    assert!(text.contains("random_halfspace_mean.status: pass"));
}

#[test]
fn convert_uniform_pair() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("w.txt");
    std::fs::write(
        &input,
        "header llp 1 2 2\nx 0 - 0.5\nx 1 - -0.5\nb 1 0.5 1 0\nb 0 0.5 1 1\n",
    )
    .unwrap();
    let output = dir.path().join("u.txt");
    let o = llp(&["convert", "--input", p(&input), "--output", p(&output), "--T", "5"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(
        text.contains("output_bags: 8\n") && text.contains("drift_bound: 0.25\n"),
        "{text}"
    );
    let back = load_collection(&output).unwrap();
    assert_eq!(back.len(), 8);
    assert!(!back.is_weighted());
    let unweighted = dir.path().join("u2.txt");
    assert_eq!(
        llp(&["convert", "--input", p(&output), "--output", p(&unweighted), "--T", "5"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn gen_outputs_load_back() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), SMALL);
    let (bags, test) = (dir.path().join("bags.txt"), dir.path().join("test.txt"));
    assert!(llp(&[
        "gen",
        "data",
        "--config",
        p(&cfg),
        "--out",
        p(&bags),
        "--test-out",
        p(&test)
    ])
    .status
    .success());
    let c = load_collection(&bags).unwrap();
    assert_eq!(c.len(), 80);
    assert_eq!(load_collection(&test).unwrap().table().len(), 100);

    let unions = dir.path().join("unions.txt");
    assert!(llp(&[
        "gen",
        "union",
        "--input",
        p(&bags),
        "--t",
        "3",
        "--s",
        "25",
        "--out",
        p(&unions)
    ])
    .status
    .success());
    assert_eq!(load_collection(&unions).unwrap().len(), 25);

    let mil = dir.path().join("mil.txt");
    assert!(llp(&["gen", "mil", "--out", p(&mil)]).status.success());
    let m = load_collection(&mil).unwrap();
    assert_eq!((m.len(), m.table().len()), (32, 16));
    save_collection(&m, &dir.path().join("copy.txt")).unwrap();

    let l = dir.path().join("llp.txt");
    assert!(llp(&["gen", "llp", "--n-pairs", "12", "--out", p(&l)]).status.success());
    assert_eq!(load_collection(&l).unwrap().len(), 12);
}
