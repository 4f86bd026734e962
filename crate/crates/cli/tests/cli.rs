use std::path::Path;
use std::process::Command;

use ramsey_forge::construct::{construct, ConstructionKind, ConstructionParams};
use ramsey_forge::{ColoredHost, KnownValuesTable, Shape, SimpleGraph};
use serde_json::Value;

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

impl Run {
    fn json(&self) -> Value {
        serde_json::from_str(&self.stdout).unwrap_or_else(|e| panic!("stdout is not JSON ({e}): {}", self.stdout))
    }
}

fn run_env(args: &[&str], env: &[(&str, &str)]) -> Run {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_ramsey-forge"));
    cmd.args(args).env_remove("RAMSEY_FORGE_JOBS");
    for (k, v) in env {
        cmd.env(k, v);
    }
    let out = cmd.output().expect("binary runs");
    Run {
        code: out.status.code().unwrap_or(-1),
        stdout: String::from_utf8_lossy(&out.stdout).into_owned(),
        stderr: String::from_utf8_lossy(&out.stderr).into_owned(),
    }
}

fn run(args: &[&str]) -> Run {
    run_env(args, &[])
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn host_json(h: &ColoredHost) -> String {
    serde_json::to_string(h).unwrap()
}

const P3: &str = "Bg";
const K3: &str = "Bw";

fn two_k2() -> String {
    SimpleGraph::complete(2).copies(2).to_graph6()
}

#[test]
fn three_color_ramsey_of_p3() {
    let r = run(&["--no-meta", "ramsey", "--graph", P3, "--colors", "3", "--nmax", "6"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let v = r.json();
    assert_eq!(v["value"], 5);
    assert_eq!(v["status"], "EXACT");
    assert_eq!(v["input"]["command"], "ramsey");
}

#[test]
fn ramsey_sweep_that_stops_early_exits_one() {
    let r = run(&["--no-meta", "ramsey", "--graph", K3, "--colors", "2", "--nmax", "5"]);
    assert_eq!(r.code, 1);
    assert_eq!(r.json()["status"], "LOWER_BOUND");
    assert_eq!(r.json()["lower_bound"], 6);
}

#[test]
fn two_color_ramsey_of_triangles() {
    let r = run(&["--no-meta", "ramsey", "--components", "Bw,Bw", "--nmax", "6"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert_eq!(r.json()["value"], 6);
}

#[test]
fn construction_of_two_triangles_verifies() {
    let dir = tempfile::tempdir().unwrap();
    let cert = dir.path().join("c.json");
    let r = run(&["construct", "--kind", "r3-iii", "--components", "Bw,Bw", "--verify", "--emit-certificate", path_str(&cert)]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let v = r.json();
    assert_eq!(v["verification"]["all_pass"], true);
    assert!(v["verification"]["checks"].as_array().unwrap().iter().all(|c| c["verdict"] == "PASS"));
    assert_eq!(v["host"]["n"], 15);

    let back = run(&["verify", path_str(&cert)]);
    assert_eq!(back.code, 0, "{}", back.stderr);
    let b = back.json();
    assert_eq!(b["verdict"], "PASS");
    assert_eq!(b["recorded_matches"], true);
}

#[test]
fn tampered_construction_certificate_fails() {
    let dir = tempfile::tempdir().unwrap();
    let cert = dir.path().join("c.json");
    let r = run(&["--no-meta", "construct", "--kind", "r3-iii", "--components", "Bw,Bw", "--emit-certificate", path_str(&cert)]);
    assert_eq!(r.code, 0);
    let mut v = r.json();
    let colors = v["host"]["colors"].as_array_mut().unwrap();
    // the first edge has color 1; give the second edge a different existing color
    let other = colors.iter().find(|c| **c != colors[0]).cloned().unwrap();
    colors[1] = other;
    std::fs::write(&cert, serde_json::to_string(&v).unwrap()).unwrap();
    let back = run(&["verify", path_str(&cert)]);
    assert_eq!(back.code, 1);
    assert_eq!(back.json()["verdict"], "FAIL");
}

#[test]
fn search_for_two_edges_on_six_vertices_is_exhausted() {
    let g = two_k2();
    let r = run(&["--no-meta", "search", "--shape", "complete", "--n", "6", "--budget", "unbounded", "--forbid-mono-g6", &g, "--forbid-rainbow", "5"]);
    assert_eq!(r.code, 1);
    let v = r.json();
    assert_eq!(v["status"], "EXHAUSTED");
    assert!(v.get("witness").is_none());
}

#[test]
fn search_witness_round_trips_through_verify() {
    let dir = tempfile::tempdir().unwrap();
    let cert = dir.path().join("s.json");
    let g = two_k2();
    let r = run(&["search", "--n", "5", "--forbid-mono-g6", &g, "--forbid-rainbow", "5", "--emit-certificate", path_str(&cert)]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert_eq!(r.json()["status"], "WITNESS");
    let witness = r.json()["witness"].clone();

    let back = run(&["verify", path_str(&cert)]);
    assert_eq!(back.code, 0, "{}", back.stdout);
    assert_eq!(back.json()["verdict"], "PASS");

    // the witness itself passes the host check
    let check = run(&["verify", "--host", &witness.to_string(), "--graph", &g, "--forbid-rainbow", "5"]);
    assert_eq!(check.code, 0);
    assert_eq!(check.json()["verdict"], "PASS");
}

#[test]
fn forged_search_witness_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let cert = dir.path().join("s.json");
    let g = two_k2();
    let r = run(&["--no-meta", "search", "--n", "5", "--forbid-mono-g6", &g, "--forbid-rainbow", "5", "--emit-certificate", path_str(&cert)]);
    assert_eq!(r.code, 0);
    let mut v = r.json();
    v["witness"] = serde_json::to_value(ColoredHost::from_fn(Shape::Complete { n: 5 }, |_, _| 1)).unwrap();
    std::fs::write(&cert, v.to_string()).unwrap();
    let back = run(&["verify", path_str(&cert)]);
    assert_eq!(back.code, 1);
    let b = back.json();
    assert_eq!(b["verdict"], "FAIL");
    assert!(b["issues"].as_array().unwrap().iter().any(|i| i.as_str().unwrap().contains("monochromatic")));
}

#[test]
fn host_check_reports_monochromatic_copy() {
    let host = ColoredHost::from_fn(Shape::Complete { n: 4 }, |_, _| 1);
    let r = run(&["verify", "--host", &host_json(&host), "--graph", K3]);
    assert_eq!(r.code, 1);
    assert_eq!(r.json()["monochromatic"]["found"], true);
}

#[test]
fn input_errors_exit_two_with_one_line() {
    for args in [
        vec!["search", "--n", "3", "--forbid-mono-g6", "zz"],
        vec!["ramsey", "--colors", "3"],
        vec!["constrained", "--graph", P3, "--forbid-rainbow", "6"],
        vec!["--jobs", "0", "ramsey", "--graph", P3],
        vec!["structure", "--tripartite", "2,2,2", "--components", "Bw,Bg"],
        vec!["verify", "/nonexistent/cert.json"],
        vec!["ramsey", "--no-such-flag"],
    ] {
        let r = run(&args);
        assert_eq!(r.code, 2, "{args:?}: {}", r.stdout);
        assert!(r.stdout.is_empty(), "{args:?}");
        assert!(!r.stderr.trim().is_empty(), "{args:?}");
    }
    let r = run(&["search", "--n", "3", "--forbid-mono-g6", "zz"]);
    assert_eq!(r.stderr.trim().lines().count(), 1);
}

#[test]
fn identical_invocations_are_byte_identical_without_meta() {
    let args = ["--no-meta", "constrained", "--graph", P3, "--forbid-rainbow", "5", "--nmax", "6"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.code, 0);
    assert_eq!(a.stdout, b.stdout);
    assert!(!a.stdout.contains("wall_time_ms"));
    assert!(!a.stdout.contains("\"meta\""));
    assert_eq!(a.json()["value"], 5);
    assert_eq!(a.json()["ramsey"]["value"], 5);

    let with_meta = run(&args[1..]).json();
    assert_eq!(with_meta["meta"]["tool"], "ramsey-forge");
}

#[test]
fn compact_output_is_one_line() {
    let r = run(&["--compact", "invariants", "--graph", K3]);
    assert_eq!(r.stdout.trim_end().lines().count(), 1);
}

#[test]
fn invariants_of_five_cycle() {
    let c5 = SimpleGraph::cycle(5).to_graph6();
    let r = run(&["--no-meta", "invariants", "--graph", &c5]);
    assert_eq!(r.code, 0);
    let v = r.json();
    assert_eq!(v["invariants"]["chromatic_number"], 3);
    assert_eq!(v["invariants"]["chromatic_surplus"], 1);
    assert_eq!(v["color_critical"]["critical"], true);
    assert_eq!(v["decomposition_family"]["members"], serde_json::json!(["A_"]));
}

#[test]
fn graph_file_input_matches_inline() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("g.g6");
    std::fs::write(&f, format!("{K3}\n")).unwrap();
    let a = run(&["--no-meta", "invariants", "--graph-file", path_str(&f)]);
    let b = run(&["--no-meta", "invariants", "--graph", K3]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn timeout_is_reported_and_exits_one() {
    let r = run(&["--no-meta", "--time-limit", "0.05", "search", "--n", "10", "--budget", "3", "--forbid-mono-g6", K3]);
    assert_eq!(r.code, 1, "{}", r.stderr);
    let v = r.json();
    assert_eq!(v["status"], "TIMEOUT");
    assert!(v["nodes_explored"].as_u64().unwrap() > 0);
}

#[test]
fn jobs_default_comes_from_environment() {
    let r = run_env(&["--no-meta", "ramsey", "--graph", P3, "--nmax", "4"], &[("RAMSEY_FORGE_JOBS", "3")]);
    assert_eq!(r.json()["input"]["options"]["jobs"], 3);
    let r = run_env(&["--no-meta", "--jobs", "2", "ramsey", "--graph", P3, "--nmax", "4"], &[("RAMSEY_FORGE_JOBS", "3")]);
    assert_eq!(r.json()["input"]["options"]["jobs"], 2);
}

#[test]
fn parallel_search_agrees_with_sequential() {
    let g = two_k2();
    let base = ["--no-meta", "search", "--n", "5", "--forbid-mono-g6", g.as_str(), "--forbid-rainbow", "5"];
    let seq = run(&base).json();
    let par = run(&[&["--jobs", "4"][..], &base[..]].concat()).json();
    assert_eq!(seq["status"], par["status"]);
    assert_eq!(seq["witness"], par["witness"]);
}

#[test]
fn constrained_number_of_p3_with_rainbow_p4() {
    let r = run(&["--no-meta", "constrained", "--graph", P3, "--forbid-rainbow", "4", "--nmax", "6"]);
    assert_eq!(r.code, 0);
    let v = r.json();
    assert_eq!(v["value"], 5);
    assert_eq!(v["lower_bound_holds"], true);
}

#[test]
fn bipartite_numbers_for_small_star() {
    let star = SimpleGraph::star(2).to_graph6();
    let r = run(&["--no-meta", "bipartite", "--graph", &star, "--forbid-rainbow", "4", "--nmax", "5"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert_eq!(r.json()["value"], 3);
    let r = run(&["--no-meta", "bipartite", "--graph", &star, "--colors", "2", "--nmax", "5"]);
    assert_eq!(r.code, 0);
    assert_eq!(r.json()["value"], 3);
    assert_eq!(r.json()["blowup_lower_bound"], 3);
}

#[test]
fn structure_recovers_generated_partition() {
    let table = KnownValuesTable::new();
    let params = ConstructionParams { part_sizes: Some(vec![4, 3, 2]), seed: Some(5), ..Default::default() };
    let res = construct(ConstructionKind::NoRainbowP5Shape, &[], &params, &table).unwrap();
    let k3x2 = SimpleGraph::complete(3).copies(2).to_graph6();
    let r = run(&["--no-meta", "structure", "--host", &host_json(&res.host), "--graph", &k3x2]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let v = r.json();
    assert_eq!(v["report"]["verdict"], "PASS");
    assert!(v["rainbow_path"].is_null());
    // colour-1-only vertices may move to the largest part
    let sizes = v["extended_sizes"]["sorted_sizes"].as_array().unwrap();
    assert_eq!(sizes.iter().map(|s| s.as_u64().unwrap()).sum::<u64>(), 9);
}

#[test]
fn structure_absent_for_one_color_host() {
    let host = ColoredHost::from_fn(Shape::Complete { n: 4 }, |_, _| 1);
    let r = run(&["--no-meta", "structure", "--host", &host_json(&host)]);
    assert_eq!(r.code, 1);
    assert!(r.json()["partition"].is_null());
}

#[test]
fn bipartite_structure_case_b_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let cert = dir.path().join("b.json");
    let table = KnownValuesTable::new();
    let params = ConstructionParams {
        u_sizes: Some(vec![2, 1, 1]),
        v_sizes: Some(vec![1, 2, 1]),
        seed: Some(1),
        ..Default::default()
    };
    let res = construct(ConstructionKind::BipartiteNoRainbowP5B, &[], &params, &table).unwrap();
    let r = run(&["--no-meta", "structure", "--host", &host_json(&res.host), "--forbid-rainbow", "5", "--emit-certificate", path_str(&cert)]);
    assert_eq!(r.code, 0, "{}{}", r.stdout, r.stderr);
    let v = r.json();
    assert_eq!(v["rainbow_path_free"], true);
    assert!(v["structure"].is_object());
    assert_eq!(v["report"]["verdict"], "PASS");
    assert_eq!(run(&["verify", path_str(&cert)]).code, 0);
}

#[test]
fn tripartite_queries() {
    let r = run(&["--no-meta", "structure", "--tripartite", "2,2,2", "--components", "Bw,Bw"]);
    assert_eq!(r.code, 0);
    assert_eq!(r.json()["route"], "CONDITION_II");
    let r = run(&["--no-meta", "structure", "--tripartite", "2,2,1", "--components", "Bw,Bw"]);
    assert_eq!(r.code, 1);
    assert_eq!(r.json()["contains"], false);
    let c5 = SimpleGraph::cycle(5).to_graph6();
    let r = run(&["--no-meta", "structure", "--tripartite", "3,3,2", "--components", &format!("{c5},{K3}")]);
    assert_eq!(r.code, 0);
}

#[test]
fn oracle_json_and_tables() {
    let dir = tempfile::tempdir().unwrap();
    let cert = dir.path().join("o.json");
    let r = run(&["--no-meta", "oracle", "--graph", K3, "--emit-certificate", path_str(&cert)]);
    assert_eq!(r.code, 0);
    let v = r.json();
    assert_eq!(v["applicability"]["certified"], true);
    assert!(v["bounds"]["entries"].as_array().unwrap().iter().any(|e| e["rule"] == "burr" && e["value"] == 5));
    assert_eq!(run(&["verify", path_str(&cert)]).code, 0);

    let human = run(&["oracle", "--graph", K3, "--human"]);
    assert_eq!(human.code, 0);
    assert!(human.stdout.contains("thm-connected-or-bipartite"));
    assert!(human.stdout.contains("equality certified: true"));
}

#[test]
fn table_file_feeds_constructions() {
    let dir = tempfile::tempdir().unwrap();
    let table_path = dir.path().join("t.json");
    // R(K_3, K_3) = 6
    let mut t = KnownValuesTable::new();
    let k3 = SimpleGraph::complete(3);
    t.insert(ramsey_forge::table::key_pair(&k3, &k3), 6, "R(3,3)").unwrap();
    std::fs::write(&table_path, serde_json::to_string(&t).unwrap()).unwrap();

    let missing = run(&["construct", "--kind", "r3-i", "--components", "Bw", "--verify"]);
    assert_eq!(missing.code, 2);
    assert!(missing.stderr.contains("missing table entry"));

    let r = run(&["--no-meta", "--table", path_str(&table_path), "construct", "--kind", "r3-i", "--components", "Bw", "--verify"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert_eq!(r.json()["verification"]["all_pass"], true);
}

#[test]
fn seed_controls_random_inner_colors() {
    let args = |seed: &str| {
        run(&["--no-meta", "--seed", seed, "construct", "--kind", "no-rainbow-p5-shape", "--part-sizes", "5,4,3", "--verify"])
    };
    let a = args("11");
    let b = args("11");
    assert_eq!(a.code, 0, "{}", a.stderr);
    assert_eq!(a.stdout, b.stdout);
    let differs = (12..20).any(|s| args(&s.to_string()).json()["host"] != a.json()["host"]);
    assert!(differs);
}
