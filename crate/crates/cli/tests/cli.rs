use std::path::PathBuf;
use std::process::{Command, Output};

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/data").join(name)
}

fn sllm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sllm"))
        .args(args)
        .env_remove("SLLM_EMBEDDINGS_DIR")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn prove_prints_both_views() {
    let o = sllm(&["prove", "n, n\\s -> s"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("(ldiv-l 1 1"));
    assert!(out.contains("[\\L]"));
}

#[test]
fn unprovable_sequent_exits_one() {
    let o = sllm(&["prove", "n -> s"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("unprovable within depth 40"));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(sllm(&["prove"]).status.code(), Some(2));
    assert_eq!(sllm(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(sllm(&["prove", "n -> n", "--k0", "lots"]).status.code(), Some(2));
}

#[test]
fn all_prints_several_derivations() {
    let o = sllm(&["prove", "!(@n), n\\n\\s -> s", "--all", "--limit", "3"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).matches("(axiom").count() >= 2);
}

#[test]
fn proof_file_compiles() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("proof.sexpr");
    let o = sllm(&["prove", "n, n\\s -> s", "--output", file.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let o = sllm(&["compile", file.to_str().unwrap(), "--dims", "n=2,s=3", "--matrix"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let out = stdout(&o);
    assert!(out.contains('3'));
}

#[test]
fn demo_matches_its_oracle() {
    for name in ["anaphora", "ellipsis", "parasitic-gap"] {
        let o = sllm(&["demo", name]);
        assert_eq!(o.status.code(), Some(0), "{name}");
        assert!(stdout(&o).contains("matches oracle: yes"), "{name}");
    }
}

#[test]
fn eval_on_the_toy_lexicon() {
    let lex = data("toy_lexicon.tsv");
    let emb = data("toy_w2v.txt");
    let o = sllm(&[
        "eval",
        "doctor run company",
        "--lexicon",
        lex.to_str().unwrap(),
        "--embeddings",
        emb.to_str().unwrap(),
        "--dims",
        "n=4,s=4",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("meaning"));
}

fn experiment_args(report: &str, w2v: &str, dataset: &str, svo: &str) -> Vec<String> {
    [
        "experiment",
        "--dataset",
        dataset,
        "--svo",
        svo,
        "--embeddings",
        &format!("w2v={w2v}"),
        "--report-path",
        report,
    ]
    .iter()
    .map(|s| s.to_string())
    .collect()
}

#[test]
fn experiment_writes_a_report() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("report.tsv");
    let args = experiment_args(
        report.to_str().unwrap(),
        data("toy_w2v.txt").to_str().unwrap(),
        data("toy_ellsim.tsv").to_str().unwrap(),
        data("toy_svo.tsv").to_str().unwrap(),
    );
    let args: Vec<&str> = args.iter().map(String::as_str).collect();
    let o = sllm(&args);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(&report).unwrap();
    assert!(text.lines().count() > 1);
    assert!(report.with_extension("cosines.tsv").exists());
}

#[test]
fn embeddings_dir_resolves_relative_paths() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("report.tsv");
    let args = experiment_args(
        report.to_str().unwrap(),
        "toy_w2v.txt",
        data("toy_ellsim.tsv").to_str().unwrap(),
        data("toy_svo.tsv").to_str().unwrap(),
    );
    let without = sllm(&args.iter().map(String::as_str).collect::<Vec<_>>());
    assert_ne!(without.status.code(), Some(0));
    let o = Command::new(env!("CARGO_BIN_EXE_sllm"))
        .args(&args)
        .env("SLLM_EMBEDDINGS_DIR", data(""))
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(report.exists());
}
