use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use regionloc::io::{parse_center_table, parse_grid};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_regionloc"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn path(dir: &Path, name: &str) -> String {
    dir.join(name).to_str().unwrap().to_string()
}

const TABLE_INSTANCE: &str = r#"{
  "sites": [[189,25],[186,66],[184,112],[186,149],[169,162],[148,183],[73,183],[121,136],[151,98],[163,38],
            [157,15],[108,30],[115,23],[133,83],[72,27],[75,93],[76,93],[19,19],[28,46],[7,90],
            [22,106],[42,93],[10,132],[11,165],[31,138],[30,168],[67,163],[67,150],[84,154]],
  "demands": [9,10,2,10,7,1,3,6,10,10,2,10,10,5,9,2,5,10,8,10,7,1,9,10,7,8,8,4,7],
  "c": 200, "L": 50, "M": 10000, "mode": "squared"
}"#;

#[test]
fn genmap_is_byte_identical_per_seed() {
    let dir = tempfile::tempdir().unwrap();
    let mut outputs = Vec::new();
    for (name, seed) in [("a", "5"), ("b", "5"), ("c", "6")] {
        let map = path(dir.path(), &format!("{name}.csv"));
        let dem = path(dir.path(), &format!("{name}.json"));
        let out = run(&["genmap", "--seed", seed, "--out", &map, "--demands-out", &dem]);
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
        outputs.push((fs::read(&map).unwrap(), fs::read(&dem).unwrap()));
    }
    assert_eq!(outputs[0], outputs[1]);
    assert_ne!(outputs[0].0, outputs[2].0);

    let map = parse_grid(std::str::from_utf8(&outputs[0].0).unwrap()).unwrap();
    assert_eq!((map.width(), map.height(), map.len()), (200, 200, 29));
    let demands: Vec<u32> = serde_json::from_slice(&outputs[0].1).unwrap();
    assert_eq!(demands.len(), 29);
    assert!(demands.iter().all(|d| (1..=10).contains(d)));
}

#[test]
fn full_concavity() {
    let out = run(&["genmap", "--width", "60", "--height", "60", "--regions", "5", "--bias", "1", "--seed", "2"]);
    assert!(out.status.success());
    let map = parse_grid(std::str::from_utf8(&out.stdout).unwrap()).unwrap();
    assert_eq!(map.len(), 5);
    assert!(map.regions().iter().all(|r| !r.is_convex()));
}

#[test]
fn case_one_centers_differ() {
    let dir = tempfile::tempdir().unwrap();
    let map = path(dir.path(), "f1.csv");
    assert!(run(&["fixture", "1", "--out", &map]).status.success());
    for mode in ["squared", "euclidean"] {
        let out = run(&["--mode", mode, "centers", &map]);
        assert!(out.status.success());
        let rows = parse_center_table(std::str::from_utf8(&out.stdout).unwrap()).unwrap();
        assert_eq!(rows.len(), 2);
        assert!(rows[0].differs, "ring must not sit on its own centroid ({mode})");
        assert!(!rows[1].differs);
        assert_eq!(rows[0].geo, rows[1].geo);
    }
    let out = run(&["centers", &map, "--integer-centers"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().nth(1).unwrap().starts_with("1,7,7,"), "{text}");
}

#[test]
fn distance_matrix_csv() {
    let dir = tempfile::tempdir().unwrap();
    let map = path(dir.path(), "f2.csv");
    assert!(run(&["fixture", "2", "--out", &map]).status.success());
    let out = run(&["distmat", &map]);
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "region,1,2,3\n1,0,8,15\n2,8,0,7\n3,15,7,0\n");
    let out = run(&["distmat", &map, "--geometric"]);
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "region,1,2,3\n1,0,5,15\n2,5,0,10\n3,15,10,0\n");
}

#[test]
fn table_instance_solves() {
    let dir = tempfile::tempdir().unwrap();
    let inst = path(dir.path(), "inst.json");
    let sol = path(dir.path(), "sol.json");
    let rep = path(dir.path(), "report.json");
    fs::write(&inst, TABLE_INSTANCE).unwrap();
    let out = run(&["solve", "--instance", &inst, "--out", &sol, "--report", &rep]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let summary = String::from_utf8(out.stdout).unwrap();
    assert!(summary.contains("open facilities: 5"));
    assert!(summary.contains("cost: 1000"));

    let doc: serde_json::Value = serde_json::from_str(&fs::read_to_string(&sol).unwrap()).unwrap();
    assert_eq!(doc["status"], "OPTIMAL");
    assert_eq!(doc["cost"], 1000.0);
    let open: Vec<usize> = doc["open"]
        .as_array()
        .unwrap()
        .iter()
        .enumerate()
        .filter(|(_, v)| v.as_bool().unwrap())
        .map(|(i, _)| i)
        .collect();
    assert_eq!(open, vec![0, 1, 6, 11, 15]);
    assert_eq!(doc["assign"].as_array().unwrap().len(), 29);

    let report: serde_json::Value = serde_json::from_str(&fs::read_to_string(&rep).unwrap()).unwrap();
    assert!(report["wall_time_ms"].is_number());

    // solution file carries no timing, so reruns are byte-identical
    let first = fs::read(&sol).unwrap();
    assert!(run(&["solve", "--instance", &inst, "--out", &sol]).status.success());
    assert_eq!(fs::read(&sol).unwrap(), first);
}

#[test]
fn unservable_demand_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let map = path(dir.path(), "f1.csv");
    let dem = path(dir.path(), "d.json");
    let sol = path(dir.path(), "sol.json");
    assert!(run(&["fixture", "1", "--out", &map]).status.success());
    fs::write(&dem, "[60, 1]").unwrap();

    let out = run(&["solve", &map, "--demands", &dem]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("unservable demand"));

    let out = run(&["solve", &map, "--demands", &dem, "--relaxed", "--out", &sol]);
    assert_eq!(out.status.code(), Some(3));
    let doc: serde_json::Value = serde_json::from_str(&fs::read_to_string(&sol).unwrap()).unwrap();
    assert_eq!(doc["status"], "INFEASIBLE");
}

#[test]
fn usage_and_input_errors() {
    assert_eq!(run(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(run(&["fixture", "4"]).status.code(), Some(1));
    assert_eq!(run(&["--mode", "cubic", "fixture", "1"]).status.code(), Some(1));
    assert_eq!(run(&["--help"]).status.code(), Some(0));

    let dir = tempfile::tempdir().unwrap();
    let bad = path(dir.path(), "bad.csv");
    fs::write(&bad, "1,2\n1\n").unwrap();
    let out = run(&["centers", &bad]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty());
    assert_eq!(run(&["centers", &path(dir.path(), "missing.csv")]).status.code(), Some(2));
    assert_eq!(run(&["lp", "--p", "0.5", "0", "0", "3", "4"]).status.code(), Some(2));
}

#[test]
fn lp_command() {
    let out = run(&["lp", "--p", "2", "0", "0", "3", "4"]);
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "5\n");
    let out = run(&["lp", "--p", "1", "-1", "0", "3", "4"]);
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "8\n");
}

#[test]
fn render_marks_open_facilities() {
    let dir = tempfile::tempdir().unwrap();
    let map = path(dir.path(), "m.csv");
    let dem = path(dir.path(), "d.json");
    let sol = path(dir.path(), "s.json");
    let centers = path(dir.path(), "c.csv");
    let svg = path(dir.path(), "m.svg");
    assert!(run(&["genmap", "--seed", "4", "--out", &map, "--demands-out", &dem]).status.success());
    assert!(run(&["centers", &map, "--demands", &dem, "--out", &centers]).status.success());
    assert!(run(&["solve", &map, "--demands", &dem, "--out", &sol]).status.success());
    let out = run(&["render", &map, "--centers", &centers, "--solution", &sol, "--demands", &dem, "--out", &svg]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));

    let doc: serde_json::Value = serde_json::from_str(&fs::read_to_string(&sol).unwrap()).unwrap();
    let k = doc["open"].as_array().unwrap().iter().filter(|v| v.as_bool().unwrap()).count();
    let text = fs::read_to_string(&svg).unwrap();
    assert_eq!(text.matches(r#"class="facility""#).count(), k);
    assert_eq!(text.matches(r#"class="region""#).count(), 29);
    assert_eq!(text.matches(r#"class="geo-center""#).count(), 29);
    assert_eq!(text.matches(r#"class="alg-center""#).count(), 29);
    assert_eq!(text.matches(r#"class="assignment""#).count(), 29 - k);

    // a solution for a different map is rejected
    let other = path(dir.path(), "f1.csv");
    assert!(run(&["fixture", "1", "--out", &other]).status.success());
    assert_ne!(run(&["render", &other, "--solution", &sol]).status.code(), Some(0));
}

#[test]
fn polygon_maps_are_accepted() {
    let dir = tempfile::tempdir().unwrap();
    let map = path(dir.path(), "poly.json");
    fs::write(
        &map,
        r#"{"width":6,"height":4,"regions":[
            {"id":1,"rings":[[[0,0],[3,0],[3,4],[0,4]]]},
            {"id":2,"rings":[[[3,0],[6,0],[6,4],[3,4]]]}]}"#,
    )
    .unwrap();
    let out = run(&["distmat", &map]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "region,1,2\n1,0,3\n2,3,0\n");
}
