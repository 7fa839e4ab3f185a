use std::process::Command;

use serde_json::Value;

fn repzeta(args: &[&str], cache: &std::path::Path) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_repzeta")).args(args).env("REPZETA_CACHE", cache).output().unwrap();
    (out.status.code().unwrap_or(-1), String::from_utf8(out.stdout).unwrap())
}

/// Every number in the payload is carried as a decimal string.
fn no_json_numbers(v: &Value) -> bool {
    match v {
        Value::Number(_) => false,
        Value::Array(a) => a.iter().all(no_json_numbers),
        Value::Object(o) => o.iter().all(|(_, v)| no_json_numbers(v)),
        _ => true,
    }
}

#[test]
fn verify_reports_and_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let (code, out) = repzeta(&["verify", "--theorem", "sl2-podd", "--q", "3", "--m", "1", "--levels", "3"], dir.path());
    assert_eq!(code, 0);
    assert!(out.contains("Equal through level 3"), "{out}");
    let (code, out) = repzeta(&["verify", "--theorem", "quat-pcs", "--q", "5", "--m", "1", "--levels", "3"], dir.path());
    assert_eq!(code, 1);
    assert!(out.contains("FirstMismatch(degree 1"), "{out}");
    let (code, _) = repzeta(&["verify", "--theorem", "sl3-p3", "--q", "5", "--levels", "2"], dir.path());
    assert_eq!(code, 2);
    let (code, _) = repzeta(&["verify", "--theorem", "sl2-podd", "--q", "3", "--levels", "6", "--budget", "5"], dir.path());
    assert_eq!(code, 2);
    let (code, _) = repzeta(&["verify", "--no-such-flag"], dir.path());
    assert_eq!(code, 2);
}

#[test]
fn orbit_csv_and_abscissa() {
    let dir = tempfile::tempdir().unwrap();
    let (code, out) = repzeta(&["orbits", "--algebra", "sl3", "--q", "3", "--emit", "csv"], dir.path());
    assert_eq!(code, 0);
    let rows: Vec<&str> = out.lines().skip(1).collect();
    assert_eq!(rows.len(), 6);
    let types: Vec<&str> = rows.iter().map(|r| r.split(',').next().unwrap()).collect();
    assert_eq!(types, ["A", "B", "C", "D", "E", "F"]);
    let (code, out) = repzeta(&["abscissa", "--family", "sln", "--n", "4"], dir.path());
    assert_eq!(code, 0);
    assert!(out.contains("1/2 <= alpha <= 3"), "{out}");
}

#[test]
fn json_schema_and_determinism() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        &["--format", "json", "zeta", "--algebra", "sl2", "--q", "5", "--levels", "3"][..],
        &["--format", "json", "closed-form", "--formula", "thm_sl3_p3", "--q", "3", "--bound", "1000"][..],
        &["--format", "json", "orbits", "--algebra", "sl2", "--q", "7"][..],
        &["--format", "json", "assemble", "--group", "sl1", "--q", "5"][..],
    ] {
        let (c1, first) = repzeta(args, dir.path());
        let (c2, second) = repzeta(args, dir.path());
        assert_eq!((c1, c2), (0, 0), "{args:?}");
        assert_eq!(first, second, "{args:?}: output differs on a warm cache");
        let v: Value = serde_json::from_str(&first).unwrap();
        assert_eq!(v["metadata"]["tool"], "repzeta");
        assert!(v["metadata"]["refs"].is_array());
        if args[2] != "assemble" {
            assert!(no_json_numbers(&v["result"]), "{args:?}");
        }
    }
}

#[test]
fn cache_administration() {
    let dir = tempfile::tempdir().unwrap();
    let (code, _) = repzeta(&["zeta", "--algebra", "sl3", "--q", "3", "--levels", "2"], dir.path());
    assert_eq!(code, 0);
    let (_, list) = repzeta(&["cache", "list"], dir.path());
    let keys: Vec<&str> = list.lines().map(|l| l.split(' ').next().unwrap()).collect();
    assert!(!keys.is_empty());
    let mut sorted = keys.clone();
    sorted.sort();
    assert_eq!(keys, sorted);
    let (_, stats) = repzeta(&["cache", "stats"], dir.path());
    assert!(stats.contains("q=3 e=1 c=1"), "{stats}");
    let (code, out) = repzeta(&["cache", "evict", "0000000000000000"], dir.path());
    assert_eq!(code, 0);
    assert!(out.is_empty());
    let (code, out) = repzeta(&["cache", "evict", keys[0]], dir.path());
    assert_eq!(code, 0);
    assert!(out.contains("evicted"));
}
