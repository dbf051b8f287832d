use std::fs;
use std::process::{Command, Output};

use flipgraph::cache::{CacheHeader, ExplorationCache};
use flipgraph::frame::FrameSpec;
use flipgraph::{CanonicalKey, SurfaceSig};
use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_flipgraph")).args(args).output().expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn json(args: &[&str]) -> Value {
    serde_json::from_str(&stdout(args)).unwrap()
}

#[test]
fn surface_info() {
    let v = json(&["surface", "--surface", "disk:6", "--json"]);
    assert_eq!(v["kappa"], 9);
    assert_eq!(v["regime"], "Finite");
    assert_eq!(json(&["surface", "--surface", "pdisk:2,1", "--json"])["regime"], "GrowthPolynomial");
    let raw = r#"{"genus":0,"punctures":4,"boundary":[]}"#;
    assert_eq!(json(&["surface", "--surface", raw, "--json"])["regime"], "Unknown");
}

#[test]
fn explore_tables() {
    let v = json(&["explore", "--surface", "cyl:1,1", "--radius", "10", "--json"]);
    let sizes: Vec<u64> = v["ball_sizes"].as_array().unwrap().iter().map(|x| x.as_u64().unwrap()).collect();
    assert_eq!(sizes, (0..=10).map(|k| 2 * k + 1).collect::<Vec<_>>());
    let v = json(&["explore", "--surface", "disk:6", "--radius", "9", "--json"]);
    assert_eq!(v["vertices"], 14);
    assert_eq!(v["closed"], true);
    let v = json(&["explore", "--surface", "sphere:3", "--radius", "20", "--json"]);
    assert_eq!(v["closed"], true);
}

#[test]
fn caches_export_and_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.fgc");
    let b = dir.path().join("b.fgc");
    stdout(&["explore", "--surface", "cyl:1,1", "--radius", "2", "--cache", a.to_str().unwrap()]);
    stdout(&["explore", "--surface", "cyl:1,1", "--radius", "2", "--cache", b.to_str().unwrap()]);
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());

    let dot = stdout(&["export", a.to_str().unwrap()]);
    assert_eq!(dot.matches(" -- ").count(), 4);
    assert_eq!(dot.matches("[label=").count(), 5);

    let h = dir.path().join("h.fgc");
    stdout(&["explore", "--surface", "disk:6", "--radius", "9", "--cache", h.to_str().unwrap()]);
    let v = json(&["export", "--cache", h.to_str().unwrap(), "--format", "json"]);
    let nodes = v["nodes"].as_array().unwrap();
    assert_eq!(nodes.len(), 14);
    assert!(nodes.iter().all(|n| n["neighbors"].as_array().unwrap().len() == 3));
    let cache = ExplorationCache::from_bytes(&fs::read(&h).unwrap()).unwrap();
    assert_eq!(cache.edge_count(), 21);
    for (n, r) in nodes.iter().zip(&cache.records) {
        assert_eq!(CanonicalKey::from_hex(n["key"].as_str().unwrap()).unwrap(), r.key);
    }
}

#[test]
fn empty_cache_exports_its_header() {
    let sig: SurfaceSig = "disk:5".parse().unwrap();
    let empty = ExplorationCache {
        header: CacheHeader { surface: sig.clone(), frame: FrameSpec { root: sig, contractions: vec![] } },
        root: CanonicalKey(vec![]),
        radius: 0,
        reached: 0,
        partial: false,
        closed: false,
        records: vec![],
    };
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("e.fgc");
    fs::write(&p, empty.to_bytes()).unwrap();
    let v = json(&["export", p.to_str().unwrap(), "--format", "json"]);
    assert_eq!(v["nodes"].as_array().unwrap().len(), 0);
    assert_eq!(v["format"], "FGC1");
}

#[test]
fn geodesics_and_distances() {
    let v = json(&["geodesics", "gamma:0", "gamma:5"]);
    assert_eq!(v["distance"], 5);
    assert_eq!(v["count"], "1");
    assert_eq!(stdout(&["distance", "gamma:-3", "gamma:4"]).trim(), "7");
    let v = json(&["geodesics", "base", "walk:8", "--surface", "disk:7", "--seed", "3", "--list", "100"]);
    let count: usize = v["count"].as_str().unwrap().parse().unwrap();
    assert_eq!(v["geodesics"].as_array().unwrap().len(), count.min(100));
}

#[test]
fn contract_then_section() {
    let dir = tempfile::tempdir().unwrap();
    let t = dir.path().join("t.json");
    let c = dir.path().join("c.json");
    fs::write(&t, stdout(&["contract", "walk:5", "--surface", "disk:7", "--arc", "5,6", "--removed", "6"])).unwrap();
    let small: Value = serde_json::from_str(&fs::read_to_string(&t).unwrap()).unwrap();
    assert_eq!(small["arcs"].as_array().unwrap().len(), 9);
    let lifted = stdout(&["section", t.to_str().unwrap()]);
    fs::write(&c, &lifted).unwrap();
    let again = stdout(&["contract", c.to_str().unwrap(), "--arc", "5,6", "--removed", "6"]);
    assert_eq!(again, fs::read_to_string(&t).unwrap());
}

#[test]
fn bounds_table() {
    let out = stdout(&["bounds", "--surface", "sphere:5", "--radius", "6"]);
    let mut lines = out.lines();
    assert_eq!(lines.next().unwrap(), "k\tnaive_upper\twitness_count\texp_lower");
    assert_eq!(lines.count(), 6);
    let v = json(&["bounds", "--surface", "cyl:2,1", "--radius", "2", "--json"]);
    assert!(v["rows"][0]["cylinder_upper"].is_string());
}

#[test]
fn verify_exit_codes() {
    let out = run(&["verify", "gamma", "--radius", "10", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["pass"], true);
    assert_eq!(v["options"]["radius"], 10);

    assert_eq!(run(&["verify", "nope"]).status.code(), Some(3));
    assert_eq!(run(&["verify", "polynomial", "--surface", "pdisk:3,1"]).status.code(), Some(1));
    assert_eq!(run(&["verify", "exponential", "--budget-states", "20"]).status.code(), Some(2));
    assert_eq!(run(&["explore", "--surface", "sphere:5", "--radius", "6", "--budget-states", "100"]).status.code(), Some(2));
    assert_eq!(run(&["surface", "--surface", "disk:2"]).status.code(), Some(3));
    assert_eq!(run(&["distance", "missing.json", "gamma:0"]).status.code(), Some(3));
}

#[test]
fn verify_catalan_text() {
    let out = stdout(&["verify", "catalan"]);
    assert_eq!(out.lines().filter(|l| l.starts_with("PASS catalan")).count(), 6);
    assert!(out.trim_end().ends_with("catalan: PASS"));
}
