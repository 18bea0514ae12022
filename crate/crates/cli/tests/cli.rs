use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn nash_atlas(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nash-atlas")).args(args).env_remove("NASH_ATLAS_SEED").output().expect("binary runs")
}

fn read_csv(path: &Path) -> (Vec<String>, Vec<Vec<f64>>) {
    let text = fs::read_to_string(path).unwrap();
    let mut lines = text.lines();
    let header = lines.next().expect("header row").split(',').map(String::from).collect();
    let rows = lines.map(|l| l.split(',').map(|v| v.parse().unwrap()).collect()).collect();
    (header, rows)
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("JSON on stdout")
}

#[test]
fn weld_two_quadrants_report() {
    let out = nash_atlas(&["weld", "--orthants", "++,--", "--json", "-"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json(&out);
    assert_eq!(doc["details"]["trace"], serde_json::json!([2, 1]));
    assert_eq!(doc["details"]["components"], serde_json::json!([["++"], ["--"]]));
    assert_eq!(doc["details"]["pivots"], serde_json::json!([0]));
    assert_eq!(doc["details"]["family"], "++,-+");
    assert!(doc["checks"].as_array().unwrap().iter().all(|c| c["status"] == "pass"));
}

#[test]
fn report_fields_in_schema_order() {
    let out = nash_atlas(&["weld", "--orthants", "+-", "--json", "-"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let keys: Vec<&str> = text
        .lines()
        .skip_while(|l| !l.contains("\"checks\""))
        .skip(2)
        .take(9)
        .map(|l| l.trim().split('"').nth(1).unwrap())
        .collect();
    assert_eq!(keys, ["check", "citation", "status", "max_error", "tolerance", "samples", "seed", "wall_ms", "failures"]);
}

#[test]
fn unknown_subcommand_is_a_usage_error() {
    let out = nash_atlas(&["frobnicate"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("Usage"));
}

#[test]
fn bad_input_is_a_usage_error() {
    assert_eq!(nash_atlas(&["weld", "--orthants", "+-,+"]).status.code(), Some(2));
    assert_eq!(nash_atlas(&["catalog", "verify", "nope"]).status.code(), Some(2));
    assert_eq!(nash_atlas(&["simplex", "order", "/nonexistent/file"]).status.code(), Some(2));
}

#[test]
fn failing_check_exits_one() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("apart.txt");
    fs::write(&path, "(0, 0); (1, 0); (0, 1)\n(0, 0); (-1, 0); (0, -1)\n").unwrap();
    let out = nash_atlas(&["simplex", "order", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn catalog_list_names_every_map() {
    let out = nash_atlas(&["catalog", "list"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    for name in nash_atlas_core::catalog::NAMES {
        assert!(text.lines().any(|l| l.starts_with(name)), "{name} missing");
    }
}

#[test]
fn catalog_verify_emits_json() {
    let out = nash_atlas(&["catalog", "verify", "open01", "--json", "-"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json(&out);
    let names: Vec<&str> = doc["checks"].as_array().unwrap().iter().map(|c| c["check"].as_str().unwrap()).collect();
    assert_eq!(names, ["catalog.open01.image", "catalog.open01.inverse"]);
}

#[test]
fn parabola_double_cloud() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("double.csv");
    let out = nash_atlas(&["double", "--model", "interval", "--check", "fiber", "--emit-cloud", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let (header, rows) = read_csv(&path);
    assert_eq!(header, ["x1", "t"]);
    assert_eq!(rows.len(), 100);
    for r in rows {
        assert!((r[1] * r[1] - r[0]).abs() < 1e-9, "{r:?}");
    }
}

#[test]
fn drill_fiber_cloud_is_the_unit_circle() {
    let dir = TempDir::new().unwrap();
    let spec = dir.path().join("plane.txt");
    fs::write(&spec, "ambient 2\ncenter 0\n").unwrap();
    let path = dir.path().join("fiber.csv");
    let out = nash_atlas(&[
        "drill",
        "--spec",
        spec.to_str().unwrap(),
        "--check",
        "fiber",
        "--emit-cloud",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let (header, rows) = read_csv(&path);
    assert_eq!(header, ["x1", "x2", "w1", "w2"]);
    assert!(!rows.is_empty());
    for r in rows {
        assert_eq!((r[0], r[1]), (0.0, 0.0));
        assert!((r[2].hypot(r[3]) - 1.0).abs() < 1e-12, "{r:?}");
    }
}

#[test]
fn empty_cloud_is_header_only() {
    let dir = TempDir::new().unwrap();
    let set = dir.path().join("set.txt");
    fs::write(&set, "x1^2 + x2^2 < 1\n").unwrap();
    let path = dir.path().join("empty.csv");
    let out = nash_atlas(&["sample", "--set", set.to_str().unwrap(), "-n", "0", "--emit-cloud", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(fs::read_to_string(&path).unwrap(), "x1,x2\n");
}

#[test]
fn sampled_set_cloud_lies_in_the_set() {
    let dir = TempDir::new().unwrap();
    let set = dir.path().join("set.txt");
    fs::write(&set, "x1^2 + x2^2 < 1 && x1 > 0\n\nx2 > 1\n").unwrap();
    let path = dir.path().join("cloud.csv");
    let out = nash_atlas(&["sample", "--set", set.to_str().unwrap(), "-n", "200", "--emit-cloud", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let (_, rows) = read_csv(&path);
    assert_eq!(rows.len(), 200);
    for r in rows {
        assert!((r[0] * r[0] + r[1] * r[1] < 1.0 && r[0] > 0.0) || r[1] > 1.0, "{r:?}");
    }
}

#[test]
fn seed_comes_from_the_environment() {
    let run = |env: Option<&str>, args: &[&str]| {
        let mut c = Command::new(env!("CARGO_BIN_EXE_nash-atlas"));
        c.args(args).env_remove("NASH_ATLAS_SEED");
        if let Some(v) = env {
            c.env("NASH_ATLAS_SEED", v);
        }
        serde_json::from_slice::<serde_json::Value>(&c.output().unwrap().stdout).unwrap()["seed"].clone()
    };
    let args = ["weld", "--orthants", "++", "--json", "-"];
    assert_eq!(run(Some("7"), &args), 7);
    assert_eq!(run(None, &args), 0);
    assert_eq!(run(Some("7"), &["weld", "--orthants", "++", "--seed", "9", "--json", "-"]), 9);
}

#[test]
fn tolerance_override_reaches_the_report() {
    let out = nash_atlas(&["double", "--model", "disk", "--check", "onto", "--tol", "0.5", "--json", "-"]);
    assert_eq!(json(&out)["checks"][0]["tolerance"], 0.5);
}

#[test]
fn simplex_subcommands() {
    let dir = TempDir::new().unwrap();
    let pair = dir.path().join("pair.txt");
    fs::write(&pair, "(0, 0); (1, 0); (0, 1)\n(1, 1); (1, 0); (0, 1)\n").unwrap();
    let p = pair.to_str().unwrap();
    let erase = json(&nash_atlas(&["simplex", "erase", p, "--json", "-"]));
    assert_eq!(erase["details"]["tau"], "(1, 0); (0, 1)");
    assert_eq!(erase["passed"], true);
    let order = json(&nash_atlas(&["simplex", "order", p, "--json", "-"]));
    assert_eq!(order["details"]["order"].as_array().unwrap().len(), 2);
    let one = dir.path().join("one.txt");
    fs::write(&one, "(0, 0); (2, 0); (0, 2)\n").unwrap();
    let sub = json(&nash_atlas(&["simplex", "subdivide", one.to_str().unwrap(), "--facets", "0,1", "--json", "-"]));
    assert_eq!(sub["passed"], true);
    assert!(sub["details"]["parts"].as_array().unwrap().len() >= 2);
}
