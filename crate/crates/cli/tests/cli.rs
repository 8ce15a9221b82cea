//! Integration tests driving the `hyperrec` binary.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_hyperrec"))
}

fn run(dir: &Path, args: &[&str]) -> Output {
    bin()
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn run_ok(dir: &Path, args: &[&str]) -> String {
    let out = run(dir, args);
    assert!(
        out.status.success(),
        "command {args:?} failed:\nstdout: {}\nstderr: {}",
        String::from_utf8_lossy(&out.stdout),
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).expect("utf-8 output")
}

fn write(dir: &Path, name: &str, contents: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

fn field(output: &str, key: &str) -> String {
    let prefix = format!("{key}=");
    output
        .split_whitespace()
        .find_map(|tok| tok.strip_prefix(&prefix))
        .unwrap_or_else(|| panic!("no {key}= field in output:\n{output}"))
        .to_string()
}

#[test]
fn project_weight_matches_pair_count_oracle() {
    let dir = tempfile::tempdir().unwrap();
    // 2 instances of {a,b,c} (3 pairs each) + 1 instance of {a,b}
    write(dir.path(), "h.txt", "a b c # m=2\na b\n");
    let out = run_ok(dir.path(), &["project", "-i", "h.txt", "-o", "g.txt"]);
    assert_eq!(field(&out, "total-weight"), (2 * 3 + 1).to_string());
    assert_eq!(field(&out, "edges"), "3");
    assert!(dir.path().join("g.txt.ids").exists());
    let g = std::fs::read_to_string(dir.path().join("g.txt")).unwrap();
    assert!(g.lines().any(|l| l == "a b 3"), "graph was:\n{g}");
}

#[test]
fn project_empty_input_warns_but_succeeds() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "h.txt", "% nothing here\n");
    let out = run(dir.path(), &["project", "-i", "h.txt", "-o", "g.txt"]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("no hyperedges"));
    assert_eq!(
        std::fs::read_to_string(dir.path().join("g.txt")).unwrap(),
        ""
    );
}

#[test]
fn split_halves_and_is_byte_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let lines: String = (0..100)
        .map(|i| format!("{} {}\n", i % 7, i % 7 + 1 + i / 7))
        .collect();
    write(dir.path(), "h.txt", &lines);
    let out = run_ok(
        dir.path(),
        &[
            "split",
            "-i",
            "h.txt",
            "--seed",
            "9",
            "--out-source",
            "s.txt",
            "--out-target",
            "t.txt",
        ],
    );
    assert_eq!(field(&out, "source-instances"), "50");
    assert_eq!(field(&out, "target-instances"), "50");
    let s1 = std::fs::read(dir.path().join("s.txt")).unwrap();
    let t1 = std::fs::read(dir.path().join("t.txt")).unwrap();
    run_ok(
        dir.path(),
        &[
            "split",
            "-i",
            "h.txt",
            "--seed",
            "9",
            "--out-source",
            "s2.txt",
            "--out-target",
            "t2.txt",
        ],
    );
    assert_eq!(s1, std::fs::read(dir.path().join("s2.txt")).unwrap());
    assert_eq!(t1, std::fs::read(dir.path().join("t2.txt")).unwrap());
}

#[test]
fn split_by_timestamp_sends_earlier_instances_to_source() {
    let dir = tempfile::tempdir().unwrap();
    write(
        dir.path(),
        "h.txt",
        "a b @t=4\nc d @t=1\ne f @t=3\ng h @t=2\n",
    );
    run_ok(
        dir.path(),
        &[
            "split",
            "-i",
            "h.txt",
            "--mode",
            "timestamp",
            "--out-source",
            "s.txt",
            "--out-target",
            "t.txt",
        ],
    );
    let s = std::fs::read_to_string(dir.path().join("s.txt")).unwrap();
    let t = std::fs::read_to_string(dir.path().join("t.txt")).unwrap();
    assert!(s.contains("c d") && s.contains("g h"), "source was:\n{s}");
    assert!(t.contains("a b") && t.contains("e f"), "target was:\n{t}");
}

/// Three disjoint triangles plus pairs: enough structure for a separable
/// training set.
fn toy_source() -> &'static str {
    "a b c\nd e f\ng h i\nj k\nl m\n"
}

#[test]
fn train_rejects_mismatched_graph() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "h.txt", toy_source());
    run_ok(dir.path(), &["project", "-i", "h.txt", "-o", "g.txt"]);
    let mut g = std::fs::read_to_string(dir.path().join("g.txt")).unwrap();
    g.push_str("a d 1\n");
    write(dir.path(), "bad.txt", &g);
    let out = run(
        dir.path(),
        &[
            "train",
            "--graph",
            "bad.txt",
            "--hypergraph",
            "h.txt",
            "-o",
            "m.json",
        ],
    );
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("clique expansion"));
}

#[test]
fn train_reaches_full_accuracy_on_separable_toy_data_and_model_reloads() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "h.txt", toy_source());
    run_ok(dir.path(), &["project", "-i", "h.txt", "-o", "g.txt"]);
    let out = run_ok(
        dir.path(),
        &[
            "train",
            "--graph",
            "g.txt",
            "--hypergraph",
            "h.txt",
            "-o",
            "m.json",
            "--epochs",
            "150",
            "--hidden-size",
            "16",
            "--dump-features",
            "f.tsv",
        ],
    );
    assert_eq!(field(&out, "training-accuracy"), "1.0000");
    let dump = std::fs::read_to_string(dir.path().join("f.tsv")).unwrap();
    let first = dump.lines().next().unwrap();
    assert_eq!(first.split('\t').count(), 24); // 23 features + label

    // model is loadable by reconstruct
    let out = run_ok(
        dir.path(),
        &[
            "reconstruct",
            "--graph",
            "g.txt",
            "--model",
            "m.json",
            "-o",
            "r.txt",
        ],
    );
    assert_eq!(field(&out, "instances"), "5");
    let out = run_ok(
        dir.path(),
        &[
            "evaluate", "--truth", "h.txt", "--recon", "r.txt", "--mode", "reduced",
        ],
    );
    assert_eq!(field(&out, "jaccard"), "1.000000");
}

#[test]
fn reconstruct_disjoint_pairs_equals_input_semantically() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "h.txt", "p q\nr s\nt u\nt u\n");
    run_ok(dir.path(), &["project", "-i", "h.txt", "-o", "g.txt"]);
    // filtering alone resolves disjoint pairs, no model needed for marioh?
    // marioh still requires a model flag; use a trained one from the same data
    write(dir.path(), "src.txt", "a b\nc d\ne f g\n");
    run_ok(dir.path(), &["project", "-i", "src.txt", "-o", "sg.txt"]);
    run_ok(
        dir.path(),
        &[
            "train",
            "--graph",
            "sg.txt",
            "--hypergraph",
            "src.txt",
            "-o",
            "m.json",
            "--epochs",
            "30",
        ],
    );
    run_ok(
        dir.path(),
        &[
            "reconstruct",
            "--graph",
            "g.txt",
            "--model",
            "m.json",
            "-o",
            "r.txt",
        ],
    );
    let out = run_ok(
        dir.path(),
        &["evaluate", "--truth", "h.txt", "--recon", "r.txt"],
    );
    assert_eq!(field(&out, "multi-jaccard"), "1.000000");
}

#[test]
fn reconstruct_maxclique_bypasses_the_model() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "g.txt", "a b 1\na c 1\nb c 1\n");
    let out = run_ok(
        dir.path(),
        &[
            "reconstruct",
            "--graph",
            "g.txt",
            "--method",
            "maxclique",
            "-o",
            "r.txt",
        ],
    );
    assert_eq!(field(&out, "unique-hyperedges"), "1");
    let r = std::fs::read_to_string(dir.path().join("r.txt")).unwrap();
    assert_eq!(r.trim(), "a b c");

    let out = run_ok(
        dir.path(),
        &[
            "reconstruct",
            "--graph",
            "g.txt",
            "--method",
            "cover",
            "-o",
            "r2.txt",
        ],
    );
    assert_eq!(field(&out, "unique-hyperedges"), "1");
}

#[test]
fn reconstruct_marioh_without_model_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "g.txt", "a b 1\n");
    let out = run(
        dir.path(),
        &["reconstruct", "--graph", "g.txt", "-o", "r.txt"],
    );
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("--model"));
}

#[test]
fn trace_records_the_threshold_decay() {
    let dir = tempfile::tempdir().unwrap();
    // a triangle survives filtering, so iterations run until theta decays
    write(dir.path(), "src.txt", "a b c\nd e\nf g\n");
    run_ok(dir.path(), &["project", "-i", "src.txt", "-o", "sg.txt"]);
    run_ok(
        dir.path(),
        &[
            "train",
            "--graph",
            "sg.txt",
            "--hypergraph",
            "src.txt",
            "-o",
            "m.json",
            "--epochs",
            "5",
            "--hidden-size",
            "4",
        ],
    );
    write(dir.path(), "g.txt", "x y 1\nx z 1\ny z 1\n");
    run_ok(
        dir.path(),
        &[
            "reconstruct",
            "--graph",
            "g.txt",
            "--model",
            "m.json",
            "-o",
            "r.txt",
            "--theta-init",
            "0.8",
            "--alpha",
            "0.05",
            "--trace",
            "trace.tsv",
        ],
    );
    let trace = std::fs::read_to_string(dir.path().join("trace.tsv")).unwrap();
    let thetas: Vec<f64> = trace
        .lines()
        .skip(2)
        .map(|l| l.split('\t').nth(1).unwrap().parse().unwrap())
        .collect();
    for (k, theta) in thetas.iter().enumerate() {
        let expected = (0.8 - k as f64 * 0.04).max(0.0);
        assert!(
            (theta - expected).abs() < 1e-9,
            "iteration {k}: {theta} vs {expected}"
        );
    }
}

#[test]
fn evaluate_identical_files_scores_one() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "h.txt", "a b c # m=2\nd e\n");
    let out = run_ok(
        dir.path(),
        &["evaluate", "--truth", "h.txt", "--recon", "h.txt"],
    );
    assert_eq!(field(&out, "jaccard"), "1.000000");
    assert_eq!(field(&out, "multi-jaccard"), "1.000000");
}

#[test]
fn evaluate_reduced_mode_forgets_multiplicities() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "truth.txt", "a b # m=3\n");
    write(dir.path(), "recon.txt", "a b\n");
    let preserved = run_ok(
        dir.path(),
        &[
            "evaluate",
            "--truth",
            "truth.txt",
            "--recon",
            "recon.txt",
            "--mode",
            "preserved",
        ],
    );
    assert_eq!(field(&preserved, "multi-jaccard"), "0.333333");
    let reduced = run_ok(
        dir.path(),
        &[
            "evaluate",
            "--truth",
            "truth.txt",
            "--recon",
            "recon.txt",
            "--mode",
            "reduced",
        ],
    );
    assert_eq!(field(&reduced, "multi-jaccard"), "1.000000");
    assert_eq!(field(&reduced, "jaccard"), "1.000000");
}

#[test]
fn stats_of_a_single_pair_hyperedge() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "h.txt", "1 2\n");
    let out = run_ok(dir.path(), &["stats", "--hypergraph", "h.txt"]);
    assert_eq!(field(&out, "projection-edges"), "1");
    assert_eq!(field(&out, "avg-edge-weight"), "1.0000");
    assert_eq!(field(&out, "unique-hyperedges"), "1");
}

#[test]
fn synth_is_deterministic_and_honors_instance_count() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_ok(
        dir.path(),
        &[
            "synth",
            "--nodes",
            "40",
            "--hyperedges",
            "63",
            "--seed",
            "5",
            "-o",
            "a.txt",
        ],
    );
    assert_eq!(field(&out, "instances"), "63");
    run_ok(
        dir.path(),
        &[
            "synth",
            "--nodes",
            "40",
            "--hyperedges",
            "63",
            "--seed",
            "5",
            "-o",
            "b.txt",
        ],
    );
    assert_eq!(
        std::fs::read(dir.path().join("a.txt")).unwrap(),
        std::fs::read(dir.path().join("b.txt")).unwrap()
    );
    // a loaded synthetic hypergraph reports the requested instance count
    let out = run_ok(dir.path(), &["stats", "--hypergraph", "a.txt"]);
    assert_eq!(field(&out, "hyperedge-instances"), "63");
}

#[test]
fn missing_input_file_exits_with_io_code() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(dir.path(), &["stats", "--hypergraph", "nope.txt"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn parse_error_reports_line_and_exits_validation() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "h.txt", "a b\na b # m=x\n");
    let out = run(dir.path(), &["stats", "--hypergraph", "h.txt"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains(":2:"));
}

#[test]
fn singleton_handling_is_configurable() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "h.txt", "a b\nc\n");
    let strict = run(dir.path(), &["stats", "--hypergraph", "h.txt"]);
    assert_eq!(strict.status.code(), Some(1));
    let lax = run(
        dir.path(),
        &["stats", "--hypergraph", "h.txt", "--skip-invalid"],
    );
    assert!(lax.status.success());
    assert!(String::from_utf8_lossy(&lax.stderr).contains("skipped"));
}

#[test]
fn help_lists_search_defaults() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_ok(dir.path(), &["reconstruct", "--help"]);
    assert!(
        out.contains("default: 0.05"),
        "alpha default missing:\n{out}"
    );
    assert!(
        out.contains("default: 0.9"),
        "theta default missing:\n{out}"
    );
    assert!(out.contains("default: 10"), "r default missing:\n{out}");
    let out = run_ok(dir.path(), &["train", "--help"]);
    assert!(out.contains("default: 64") && out.contains("default: 0.001"));
    assert!(
        out.contains("default: 100") && out.contains("default: 128") && out.contains("default: 5")
    );
}
