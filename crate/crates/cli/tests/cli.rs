use std::process::{Command, Output};

use ehrhart_cli::record::{read_store, ResultRecord};

fn kostka(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kostka"))
        .args(args)
        .env_remove("KOSTKA_STORE")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn ehrhart_reports_dimension() {
    let o = kostka(&["ehrhart", "--lambda", "3,2,1", "-w", "1,1,1,1,1,1"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("dimension  7"), "{text}");
    assert!(text.contains("verified   yes"));
}

#[test]
fn skew_hstar_with_oracle() {
    let o = kostka(&["hstar", "--lambda", "4,3,1", "--mu", "2,1", "-w", "2,2,1", "--oracle"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("h*         (1, 3, 2)"), "{text}");
    assert!(text.contains("oracle     agrees"));
}

#[test]
fn fence_hstar_both_ways() {
    let expected = "(1, 133, 2475, 12331, 20641, 12331, 2475, 133, 1)";
    for extra in [None, Some("--linext")] {
        let mut args = vec!["order", "hstar", "--poset", "fence:10"];
        args.extend(extra);
        let o = kostka(&args);
        assert!(o.status.success());
        assert!(stdout(&o).contains(expected), "{}", stdout(&o));
    }
}

#[test]
fn linear_extension_count() {
    let o = kostka(&["order", "linext", "--poset", "shape:4,3,2,1", "--json"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(v["linear_extensions"], "768");
}

#[test]
fn exit_codes() {
    assert_eq!(kostka(&["ehrhart", "--lambda", "4,3", "--mu", "2,1", "-w", "2,2,2"]).status.code(), Some(1));
    assert_eq!(kostka(&["ehrhart", "--lambda", "3,x", "-w", "1"]).status.code(), Some(1));
    assert_eq!(kostka(&["order", "ehrhart", "--poset", "blob:3"]).status.code(), Some(1));
    assert_eq!(kostka(&["birkhoff", "--ell", "7"]).status.code(), Some(3));
    assert_eq!(kostka(&["birkhoff", "--ell", "3"]).status.code(), Some(0));
}

#[test]
fn json_output_round_trips() {
    let o = kostka(&["hstar", "--lambda", "3,3", "-w", "2,2,2", "--json"]);
    assert!(o.status.success());
    let rec: ResultRecord = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert!(rec.reverify());
    assert_eq!(rec.dimension, rec.polynomial().unwrap().degree().unwrap());
    let again = serde_json::to_string(&rec).unwrap();
    assert_eq!(serde_json::from_str::<ResultRecord>(&again).unwrap(), rec);
}

#[test]
fn batch_resumes_without_duplicates() {
    let dir = tempfile::tempdir().unwrap();
    let store = dir.path().join("results.jsonl");
    let s = store.to_str().unwrap();
    let args = ["batch", "--size", "5", "--weight-pattern", "2,1^(N-2)", "--out", s];
    assert!(kostka(&args).status.success());
    let first = read_store(&store).unwrap();
    assert_eq!(first.len(), 6, "the shape (1^5) has no SSYT of content (2,1,1,1)");

    // drop the last record and leave a torn line behind, as after a crash
    let text = std::fs::read_to_string(&store).unwrap();
    let mut lines: Vec<&str> = text.lines().collect();
    lines.pop();
    let torn = format!("{}\n{{\"input\":{{\"fam", lines.join("\n"));
    std::fs::write(&store, torn).unwrap();

    assert!(kostka(&args).status.success());
    let second = read_store(&store).unwrap();
    assert_eq!(second.len(), first.len());
    let mut keys: Vec<String> = second.iter().map(|r| r.input.key()).collect();
    keys.sort();
    keys.dedup();
    assert_eq!(keys.len(), first.len());

    let check = kostka(&["check", "--store", s]);
    assert!(check.status.success(), "{}", String::from_utf8_lossy(&check.stderr));
}

#[test]
fn check_flags_tampered_store() {
    let dir = tempfile::tempdir().unwrap();
    let store = dir.path().join("results.jsonl");
    let s = store.to_str().unwrap();
    assert!(kostka(&["batch", "--size", "4", "--weight-pattern", "1^N", "--out", s]).status.success());
    let mut records = read_store(&store).unwrap();
    let last = records.last_mut().unwrap();
    last.transcript.last_mut().unwrap().value += 1;
    let lines: Vec<String> = records.iter().map(|r| serde_json::to_string(r).unwrap()).collect();
    std::fs::write(&store, lines.join("\n") + "\n").unwrap();
    assert_eq!(kostka(&["check", "--store", s]).status.code(), Some(2));
}

#[test]
fn perm_search_small_radius() {
    let o = kostka(&["perm-search", "--base", "3,2,1", "--radius", "1"]);
    assert!(o.status.success());
    assert!(stdout(&o).is_empty());
    assert!(String::from_utf8_lossy(&o.stderr).contains("searched 4 candidates"));
}
