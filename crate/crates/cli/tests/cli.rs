use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

const TABLE1: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/../core/fixtures/table1.seq");

fn clickclust(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_clickclust"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json_of(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("single JSON document")
}

fn write(dir: &Path, name: &str, body: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

/// Twenty sessions dominated by `frontpage`, twenty by `opinion`.
fn two_blob_log() -> String {
    let mut text = String::from("frontpage news tech local opinion on-air\n");
    for (main, side) in [(1, 2), (5, 6)] {
        for i in 0..20 {
            let mut row = vec![main.to_string(); 10 + i % 5];
            row.extend(std::iter::repeat_n(side.to_string(), i % 3));
            text.push_str(&row.join(" "));
            text.push('\n');
        }
    }
    text
}

#[test]
fn stats_on_table1() {
    let doc = json_of(&clickclust(&["stats", "--input", TABLE1]));
    assert_eq!(doc["num_sessions"], 13);
    assert_eq!(doc["total_visits"], 53);
    assert_eq!(doc["num_categories"], 17);
    assert_eq!(doc["metadata"]["command"], "stats");
    assert_eq!(doc["metadata"]["inputs"][0]["sha256"].as_str().unwrap().len(), 64);
}

#[test]
fn stats_on_one_row() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "one.seq", "3 2 2 4\n");
    let dict = write(dir.path(), "dict.txt", "frontpage news tech local\n");
    let doc = json_of(&clickclust(&["stats", "--input", s(&f), "--dictionary", s(&dict)]));
    assert_eq!(doc["avg_visits"], 4.0);
    assert_eq!(doc["num_categories"], 4);
}

#[test]
fn stats_csv() {
    let out = clickclust(&["stats", "--input", TABLE1, "--format", "csv"]);
    assert!(out.status.success());
    assert_eq!(
        String::from_utf8(out.stdout).unwrap(),
        "num_sessions,total_visits,avg_visits,num_categories,length_min,length_max\n13,53,4.076923,17,1,13\n"
    );
}

#[test]
fn tolerance_json_matches_worked_example() {
    let doc = json_of(&clickclust(&["tolerance", "--input", TABLE1, "--p", "0.5", "--format", "json"]));
    assert_eq!(doc["threshold"], 0.5);
    let clusters: Vec<Vec<usize>> = serde_json::from_value(doc["clusters"].clone()).unwrap();
    assert_eq!(
        clusters,
        vec![vec![1, 5, 7, 11, 13], vec![2], vec![3], vec![4], vec![6, 8], vec![9], vec![10], vec![12]]
    );
    let r6 = &doc["upper_approximations"][5];
    assert_eq!(r6["item"], 6);
    assert_eq!(r6["class"], serde_json::json!([6, 8]));
}

#[test]
fn tolerance_at_p_one_still_merges_identical_sets() {
    let doc = json_of(&clickclust(&["tolerance", "--input", TABLE1, "--p", "1.0"]));
    let clusters: Vec<Vec<usize>> = serde_json::from_value(doc["clusters"].clone()).unwrap();
    assert!(clusters.contains(&vec![1, 5, 7, 11, 13]));
}

#[test]
fn tolerance_rejects_bad_threshold() {
    let out = clickclust(&["tolerance", "--input", TABLE1, "--p", "1.5"]);
    assert_eq!(out.status.code(), Some(1));
    let out = clickclust(&["tolerance", "--input", TABLE1, "--p", "0"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn tolerance_streaming_and_matrix_dump() {
    let dir = tempfile::tempdir().unwrap();
    let m = dir.path().join("sim.csv");
    let full = json_of(&clickclust(&["tolerance", "-i", TABLE1, "--matrix-out", s(&m)]));
    let streamed = json_of(&clickclust(&["tolerance", "-i", TABLE1, "--streaming"]));
    assert_eq!(full["clusters"], streamed["clusters"]);
    assert!(streamed.get("upper_approximations").is_none());
    let csv = std::fs::read_to_string(&m).unwrap();
    assert_eq!(csv.lines().count(), 14);
    assert!(csv.lines().nth(4).unwrap().starts_with("4,0,0,0,1,"));

    let csv = clickclust(&["tolerance", "-i", TABLE1, "--format", "csv"]);
    let text = String::from_utf8(csv.stdout).unwrap();
    assert!(text.starts_with("item_id,cluster_id\n1,1\n"));
    assert_eq!(text.lines().count(), 14);
}

#[test]
fn fcm_is_deterministic_and_alpha_zero_runs() {
    let a = clickclust(&["fcm", "--input", TABLE1, "--alpha", "0.5"]);
    let b = clickclust(&["fcm", "--input", TABLE1, "--alpha", "0.5"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let doc = json_of(&a);
    let clusters: Vec<Vec<usize>> = serde_json::from_value(doc["clusters"].clone()).unwrap();
    assert!(clusters.contains(&vec![1, 5, 7, 11, 13]));
    assert!(clusters.contains(&vec![6, 8]));
    assert_eq!(doc["memberships"].as_array().unwrap().len(), 13);
    assert_eq!(doc["objective_trace"].as_array().unwrap().len(), doc["iterations"].as_u64().unwrap() as usize);

    let zero = json_of(&clickclust(&["fcm", "--input", TABLE1, "--alpha", "0"]));
    assert_eq!(zero["converged"], true);
}

#[test]
fn fcm_two_blob_fixture() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "blobs.seq", &two_blob_log());
    let doc = json_of(&clickclust(&["fcm", "-i", s(&f), "--alpha", "0.5", "-m", "2"]));
    assert_eq!(doc["converged"], true);
    let clusters: Vec<Vec<usize>> = serde_json::from_value(doc["clusters"].clone()).unwrap();
    assert_eq!(clusters, vec![(1..=20).collect::<Vec<_>>(), (21..=40).collect()]);
}

#[test]
fn fcm_rejects_bad_parameters() {
    for args in [
        &["--alpha", "1.5"][..],
        &["-m", "1"],
        &["--beta", "1"],
        &["--epsilon", "0"],
        &["--weights", "entropy"],
        &["--vectorize", "binary"],
        &["--merge-p", "2"],
        &["--threads", "0"],
    ] {
        let mut all = vec!["fcm", "-i", TABLE1];
        all.extend_from_slice(args);
        assert_eq!(clickclust(&all).status.code(), Some(1), "{args:?}");
    }
}

#[test]
fn fcm_with_weights_and_merge() {
    let doc = json_of(&clickclust(&["fcm", "-i", TABLE1, "--weights", "gain_ratio", "--merge-p", "0.5"]));
    assert_eq!(doc["weights"]["method"], "gain_ratio");
    assert_eq!(doc["weights"]["weights"].as_array().unwrap().len(), 17);
    let clusters: Vec<Vec<usize>> = serde_json::from_value(doc["clusters"].clone()).unwrap();
    assert_eq!(clusters.iter().map(Vec::len).sum::<usize>(), 13);
}

#[test]
fn membership_guard_beyond_ten_thousand() {
    let dir = tempfile::tempdir().unwrap();
    let mut text = String::from("a b c\n");
    for i in 0..10_001 {
        text.push_str(["1 1\n", "2\n", "3 3 1\n"][i % 3]);
    }
    let f = write(dir.path(), "big.seq", &text);
    let doc = json_of(&clickclust(&["fcm", "-i", s(&f)]));
    assert!(doc.get("memberships").is_none());
    let doc = json_of(&clickclust(&["fcm", "-i", s(&f), "--emit-memberships"]));
    assert_eq!(doc["memberships"].as_array().unwrap().len(), 10_001);
}

#[test]
fn eval_reports() {
    let dir = tempfile::tempdir().unwrap();
    let c = write(dir.path(), "c.json", r#"{"clusters": [[1, 2, 3], [4, 5]]}"#);
    let l = write(dir.path(), "l.csv", "item_id,cluster_id\n1,1\n2,1\n3,2\n4,2\n5,2\n");
    let doc = json_of(&clickclust(&["eval", "--clusters", s(&c), "--labels", s(&l)]));
    assert!((doc["purity"].as_f64().unwrap() - 0.8).abs() < 1e-12);
    assert!((doc["inverse_purity"].as_f64().unwrap() - 0.8).abs() < 1e-12);
    assert!((doc["purity_f"].as_f64().unwrap() - 0.8).abs() < 1e-12);
    assert_eq!(doc["n"], 5);

    let same = json_of(&clickclust(&["eval", "--clusters", s(&c), "--labels", s(&c), "--per-pair"]));
    for key in ["purity", "inverse_purity", "purity_f"] {
        assert_eq!(same[key], 1.0);
    }
    assert_eq!(same["per_pair"].as_array().unwrap().len(), 2);

    let csv = clickclust(&["eval", "--clusters", s(&c), "--labels", s(&c), "--format", "csv"]);
    assert_eq!(String::from_utf8(csv.stdout).unwrap(), "purity,inverse_purity,purity_f,n\n1,1,1,5\n");
}

#[test]
fn eval_accepts_tolerance_output() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("tol.json");
    assert!(clickclust(&["tolerance", "-i", TABLE1, "-o", s(&out)]).status.success());
    let fcm = dir.path().join("fcm.csv");
    assert!(clickclust(&["fcm", "-i", TABLE1, "--format", "csv", "-o", s(&fcm)]).status.success());
    let doc = json_of(&clickclust(&["eval", "--clusters", s(&fcm), "--labels", s(&out)]));
    assert_eq!(doc["n"], 13);
}

#[test]
fn eval_universe_mismatch() {
    let dir = tempfile::tempdir().unwrap();
    let c = write(dir.path(), "c.json", r#"{"clusters": [[1, 2, 3]]}"#);
    let l = write(dir.path(), "l.json", r#"{"clusters": [[1, 2], [4]]}"#);
    let out = clickclust(&["eval", "--clusters", s(&c), "--labels", s(&l)]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("[3]") && err.contains("[4]"), "{err}");
}

#[test]
fn input_errors_exit_two_with_line() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "bad.seq", "a b c\n1 2\n1 x\n");
    let out = clickclust(&["stats", "-i", s(&f)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8(out.stderr).unwrap().contains("line 3"));
    let f = write(dir.path(), "range.seq", "a b c\n1 4\n");
    assert_eq!(clickclust(&["stats", "-i", s(&f)]).status.code(), Some(2));
    assert_eq!(clickclust(&["stats", "-i", "/does/not/exist"]).status.code(), Some(2));
    assert_eq!(clickclust(&["stats"]).status.code(), Some(1));
    assert_eq!(clickclust(&["frobnicate"]).status.code(), Some(1));
}

#[test]
fn config_files() {
    let dir = tempfile::tempdir().unwrap();
    let json = write(dir.path(), "c.json", &format!(r#"{{"input": "{TABLE1}", "p": 1.0, "format": "csv"}}"#));
    let out = clickclust(&["tolerance", "--config", s(&json)]);
    assert!(out.status.success());
    assert!(String::from_utf8(out.stdout).unwrap().starts_with("item_id,cluster_id"));

    // flags win over the file
    let doc = json_of(&clickclust(&["tolerance", "--config", s(&json), "--format", "json", "--p", "0.5"]));
    assert_eq!(doc["threshold"], 0.5);

    let toml = write(dir.path(), "c.toml", &format!("input = \"{TABLE1}\"\nalpha = 0.0\nmax_iter = 5\n"));
    let doc = json_of(&clickclust(&["fcm", "--config", s(&toml)]));
    assert_eq!(doc["metadata"]["config"]["alpha"], 0.0);
    assert_eq!(doc["metadata"]["config"]["max_iter"], 5);

    let bad = write(dir.path(), "bad.json", r#"{"alhpa": 0.5}"#);
    assert_eq!(clickclust(&["fcm", "-i", TABLE1, "--config", s(&bad)]).status.code(), Some(1));
}
