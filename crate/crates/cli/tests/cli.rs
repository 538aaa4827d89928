//! Runs the built binary end to end.

use std::collections::BTreeMap;
use std::path::Path;
use std::process::{Command, Output};

fn echobd(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_echobd"))
        .args(args)
        .env_remove("ECHOBD_THREADS")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write(dir: &Path, name: &str, body: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn indices_table() {
    let o = echobd(&["indices", "--r", "1.4142", "--n", "5"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "n,cz\n1,3\n2,5\n3,9\n4,11\n5,15\n");
    let bad = echobd(&["indices", "--r", "1/2", "--n", "4"]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn verify_all_is_reproducible() {
    let args = ["verify", "all", "--seed", "7", "--jmax", "6", "--mmax", "6", "--models", "6", "--deterministic"];
    let a = echobd(&args);
    assert_eq!(a.status.code(), Some(0), "{}", stdout(&a));
    let mut single = args.to_vec();
    single.extend(["--threads", "1"]);
    let b = echobd(&single);
    assert_eq!(a.stdout, b.stdout);
    assert!(stdout(&a).ends_with("summary: 18 run(s), 0 failed\n"));
}

#[test]
fn scan_finds_two_tori_per_slope() {
    let dir = tempfile::tempdir().unwrap();
    let profile = write(
        dir.path(),
        "alpha_delta.json",
        r#"{"schema": 1, "construction": {"alpha_delta": {"delta": "0.1414213", "anchor": ["24", "2"], "eps_prox": null}}}"#,
    );
    let o = echobd(&["scan-orbits", "--profile", &profile, "--L", "50", "--qmax", "100"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("parameter,a,b,slope,action"));
    let mut per_slope: BTreeMap<String, usize> = BTreeMap::new();
    for l in lines {
        *per_slope.entry(l.split(',').nth(3).unwrap().to_string()).or_default() += 1;
    }
    assert!(!per_slope.is_empty());
    assert!(per_slope.values().all(|&c| c == 2), "{per_slope:?}");
    let check = echobd(&["check-profile", "--profile", &profile]);
    assert_eq!(check.status.code(), Some(0), "{}", stdout(&check));
}

#[test]
fn non_contact_profile_fails_the_check() {
    let dir = tempfile::tempdir().unwrap();
    // f = 1 + x, g = 1 + x: fg' − f'g vanishes identically.
    let profile = write(
        dir.path(),
        "flat.json",
        r#"{"schema": 1, "construction": {"pieces": {"side": "torus", "pieces": [{"start": "1", "end": "2", "f": ["1", "1"], "g": ["1", "1"]}]}}}"#,
    );
    let o = echobd(&["check-profile", "--profile", &profile]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("contact condition: FAIL"));
}

#[test]
fn plot_is_standalone_svg() {
    let dir = tempfile::tempdir().unwrap();
    let profile = write(dir.path(), "ex2.json", r#"{"schema": 1, "construction": {"example_two": {"c": "3"}}}"#);
    let out = dir.path().join("ex2.svg");
    let o = echobd(&["plot-profile", "--profile", &profile, "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let svg = std::fs::read_to_string(out).unwrap();
    assert!(svg.contains("<svg") && svg.contains("version=\"1.1\""));
}

#[test]
fn generated_model_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let model = dir.path().join("m.json");
    let g = echobd(&["gen-model", "--seed", "3", "--orbits", "3", "--out", model.to_str().unwrap()]);
    assert_eq!(g.status.code(), Some(0));
    let m = model.to_str().unwrap();
    let h = echobd(&["homology", "--model", m, "--variant", "flat"]);
    assert_eq!(h.status.code(), Some(0));
    assert!(stdout(&h).starts_with("degree,dim\n"));
    let p = echobd(&["pages", "--model", m, "--filtration", "g", "--r", "2"]);
    assert_eq!(p.status.code(), Some(0));
    assert!(stdout(&p).starts_with("filtration,page,level,degree,dim,rank\n"));
    let v = echobd(&["verify", "main", "--models", "0", "--model", m, "--deterministic"]);
    assert_eq!(v.status.code(), Some(0), "{}", stdout(&v));
}

#[test]
fn invalid_model_names_the_violation() {
    let dir = tempfile::tempdir().unwrap();
    let model = write(
        dir.path(),
        "bad.json",
        r#"{"schema": 1, "j_bound": 4,
            "orbits": [{"name": "a", "kind": "elliptic", "action": 1.0, "page_degree": 1, "degree": 1},
                       {"name": "b", "kind": "elliptic", "action": 2.0, "page_degree": 1, "degree": 2}],
            "d_flat": {"a": ["b"]}}"#,
    );
    let o = echobd(&["homology", "--model", &model]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("lower the degree"), "{err}");
    let schema = write(dir.path(), "v2.json", r#"{"schema": 2, "j_bound": 4, "orbits": []}"#);
    let o = echobd(&["homology", "--model", &schema]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(echobd(&["verify", "solid-torus", "--r-list", "1.5,2.5"]).status.code(), Some(2));
}

#[test]
fn csv_tables_are_written() {
    let dir = tempfile::tempdir().unwrap();
    let o = echobd(&["verify", "solid-torus", "--csv-dir", dir.path().to_str().unwrap(), "--deterministic"]);
    assert_eq!(o.status.code(), Some(0));
    let limit = std::fs::read_to_string(dir.path().join("solid-torus_stages_limit.csv")).unwrap();
    assert!(limit.starts_with("grade,dim\n0,1\n1,0\n"));
}
