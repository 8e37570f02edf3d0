use std::process::{Command, Output};

use serde_json::Value;

fn mekr(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mekr")).args(args).output().expect("spawn mekr")
}

fn records(out: &Output) -> Vec<Value> {
    serde_json::from_slice::<Value>(&out.stdout).expect("json report").as_array().unwrap().clone()
}

fn failing(out: &Output) -> Vec<(String, Option<u64>, Option<u64>)> {
    records(out)
        .iter()
        .filter(|r| r["status"] == "fail")
        .map(|r| (r["claim"].as_str().unwrap().to_string(), r["k"].as_u64(), r["n"].as_u64()))
        .collect()
}

#[test]
fn spectra_k2() {
    let out = mekr(&["spectra", "--k", "2", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let rs = records(&out);
    let m = rs.iter().find(|r| r["claim"] == "spectra.matching").unwrap();
    assert_eq!(m["computed"], "{2^1, (-1)^2}");
    assert_eq!(m["status"], "pass");
}

#[test]
fn ekr_k3() {
    let out = mekr(&["ekr", "--k", "3", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let rs = records(&out);
    let get = |c: &str| rs.iter().find(|r| r["claim"] == c).unwrap()["computed"].clone();
    assert_eq!(get("ekr.alpha"), "3");
    assert_eq!(get("ekr.maximum_cocliques"), "15");
    assert_eq!(get("ekr.ratio_tightness"), "15");
    assert!(rs.iter().all(|r| r["status"] == "pass"));
}

#[test]
fn cap_exits_3() {
    let out = mekr(&["all", "--k", "7"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("--max-k 6"));
    assert!(out.stdout.is_empty());
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(mekr(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(mekr(&["counts", "--bogus"]).status.code(), Some(2));
    assert_eq!(mekr(&["counts", "--k", "0"]).status.code(), Some(2));
    assert_eq!(mekr(&["counts", "--format", "xml"]).status.code(), Some(2));
}

#[test]
fn default_run_fails_only_on_known_deviations() {
    let out = mekr(&["all", "--format", "json"]);
    assert_eq!(out.status.code(), Some(1));
    let f = |c: &str, k: Option<u64>, n: Option<u64>| (c.to_string(), k, n);
    let expected = vec![
        f("counts.degree_truncated_sum", Some(2), None),
        f("counts.degree_truncated_sum", Some(3), None),
        f("spectra.strict_bound", Some(3), None),
        f("spectra.character_sum.printed_prefactor", Some(3), None),
        f("counts.degree_truncated_sum", Some(4), None),
        f("spectra.character_sum.printed_prefactor", Some(4), None),
        f("reps.small_degree", None, Some(10)),
    ];
    assert_eq!(failing(&out), expected);
}

#[test]
fn k4_fails_only_on_the_truncated_sum_and_prefactor() {
    for cmd in ["graph", "ekr", "polytope", "cayley"] {
        let out = mekr(&[cmd, "--k", "4", "--format", "json"]);
        assert_eq!(out.status.code(), Some(0), "{cmd}");
    }
    let out = mekr(&["counts", "--k", "4", "--format", "json"]);
    assert_eq!(failing(&out), vec![("counts.degree_truncated_sum".to_string(), Some(4), None)]);
    let out = mekr(&["spectra", "--k", "4", "--format", "json"]);
    assert_eq!(failing(&out), vec![("spectra.character_sum.printed_prefactor".to_string(), Some(4), None)]);
}

#[test]
fn reports_are_byte_identical() {
    let a = mekr(&["all", "--k", "3", "--format", "json"]);
    let b = mekr(&["all", "--k", "3", "--format", "json", "--threads", "1"]);
    assert_eq!(a.stdout, b.stdout);
    assert!(records(&a).iter().all(|r| r["elapsed_ms"].is_null()));
}

#[test]
fn timings_fill_elapsed() {
    let out = mekr(&["counts", "--k", "3", "--format", "json", "--timings"]);
    assert!(records(&out).iter().all(|r| r["elapsed_ms"].is_u64()));
}

#[test]
fn csv_and_text_formats() {
    let csv = String::from_utf8(mekr(&["counts", "--k", "3", "--format", "csv"]).stdout).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("claim,k,n,expected,computed,status,elapsed_ms"));
    assert_eq!(lines.next(), Some("counts.matchings,3,,15,15,pass,"));
    let text = String::from_utf8(mekr(&["counts", "--k", "3"]).stdout).unwrap();
    assert!(text.starts_with("claim"));
    assert!(text.ends_with("5 records, 1 failed, 0 skipped\n"));
}

#[test]
fn kneser_through_spectra() {
    let out = mekr(&["spectra", "--k", "2", "--n", "5", "--format", "json"]);
    let rs = records(&out);
    let kn = rs.iter().find(|r| r["claim"] == "spectra.kneser").unwrap();
    assert_eq!(kn["computed"], "{3^1, 1^5, (-2)^4}");
    assert_eq!(kn["status"], "pass");
}

#[test]
fn reps_single_n() {
    let out = mekr(&["reps", "--n", "11", "--k", "3", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let out = mekr(&["reps", "--n", "10", "--k", "3", "--format", "json"]);
    assert_eq!(failing(&out), vec![("reps.small_degree".to_string(), None, Some(10))]);
}

#[test]
fn out_and_export() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("report.json");
    let artifacts = dir.path().join("artifacts");
    let out = mekr(&[
        "all",
        "--k",
        "3",
        "--format",
        "json",
        "--out",
        report.to_str().unwrap(),
        "--export",
        artifacts.to_str().unwrap(),
    ]);
    assert!(out.stdout.is_empty());
    let body: Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert!(body.as_array().unwrap().len() > 30);
    for name in ["m6.dimacs", "spectrum_m6.csv", "cocliques_m6.json", "incidence_m6.txt"] {
        assert!(artifacts.join(name).is_file(), "{name}");
    }
    let dimacs = std::fs::read_to_string(artifacts.join("m6.dimacs")).unwrap();
    assert!(dimacs.contains("p edge 15 60"));
    let spectrum = std::fs::read_to_string(artifacts.join("spectrum_m6.csv")).unwrap();
    assert!(spectrum.starts_with("graph,eigenvalue,multiplicity,labels\nM(6),8,1,[6]\n"));
}
