use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::{json, Value};
use sha2::{Digest, Sha256};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_k3curves")).args(args).output().unwrap()
}

fn json_of(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn tmp(name: &str, contents: &str) -> PathBuf {
    let path = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(format!("{}-{name}", std::process::id()));
    std::fs::write(&path, contents).unwrap();
    path
}

#[test]
fn exact_constants() {
    assert_eq!(json_of(&run(&["yz", "--gmax", "4"])), json!([1, 24, 324, 3200, 25650]));
    assert_eq!(json_of(&run(&["eps", "--p", "2", "--q", "3"])), json!(2));
    assert_eq!(json_of(&run(&["localring", "colength", "--ideal", "x + y, x*y"])), json!({"value": 2}));
    assert_eq!(json_of(&run(&["localring", "colength", "--ideal", "x^2"])), json!({"value": "unbounded"}));
    assert_eq!(json_of(&run(&["localring", "milnor", "--f", "y^2 - x^3"])), json!({"value": 2}));
    assert_eq!(json_of(&run(&["localring", "section", "--sing", "node", "--a", "1", "--b", "-1"])), json!({"a": "1", "b": "-1", "value": 2}));
}

#[test]
fn large_counts_become_strings() {
    let v = json_of(&run(&["yz", "--gmax", "25"]));
    assert_eq!(v[10], json!(639_249_300u64));
    assert_eq!(v[24], json!("16610409114771900"));
    assert_eq!(v[25], json!("46925988716146176"));
    let v = json_of(&run(&["eps", "--p", "40", "--q", "41"]));
    assert!(v.is_string());
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["yz"]).status.code(), Some(2));
    assert_eq!(run(&["localring", "colength", "--ideal", "x + w"]).status.code(), Some(2));
    assert_eq!(run(&["eps", "--p", "2", "--q", "4"]).status.code(), Some(1));
    assert_eq!(run(&["monodromy", "certify", "--degree", "7", "--loops", "1"]).status.code(), Some(1));
    let cfg = tmp("bad.cfg", "colour = red\n");
    assert_eq!(run(&["yz", "--gmax", "1", "--config", cfg.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn identity_generators_are_not_transitive() {
    let perms = tmp("id.json", "[[0,1,2],[0,1,2]]");
    let v = json_of(&run(&["group", "analyze", "--perms", perms.to_str().unwrap()]));
    assert_eq!(v["transitive"], json!(false));
    assert_eq!(v["orbits"], json!(3));
    let perms = tmp("s4.json", "[[1,2,3,0],[1,0,2,3]]");
    let v = json_of(&run(&["group", "analyze", "--perms", perms.to_str().unwrap()]));
    assert_eq!(v["certified_symmetric"], json!(true));
    assert_eq!(v["order"], json!(24));
}

#[test]
fn same_seed_gives_identical_output() {
    for args in [
        &["incidence", "sample", "--seed", "5"][..],
        &["incidence", "singularities", "--seed", "5", "--cusp"],
        &["glue", "--random-nodes", "2", "--seed", "3"],
        &["localring", "section", "--sing", "cusp", "--seed", "9"],
    ] {
        let a = run(args);
        let b = run(args);
        assert!(a.status.success(), "{args:?}: {}", String::from_utf8_lossy(&a.stderr));
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
    let a = run(&["incidence", "sample", "--seed", "5"]);
    let c = run(&["incidence", "sample", "--seed", "6"]);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn manifest_digest_matches_output_file() {
    let out = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(format!("{}-rank.json", std::process::id()));
    let status = run(&["incidence", "rank", "--seed", "2", "--out", out.to_str().unwrap()]).status;
    assert!(status.success());
    let bytes = std::fs::read(&out).unwrap();
    let manifest: Value =
        serde_json::from_slice(&std::fs::read(format!("{}.manifest.json", out.display())).unwrap()).unwrap();
    assert_eq!(manifest["output_digest"], json!(format!("sha256:{}", hex::encode(Sha256::digest(&bytes)))));
    assert_eq!(manifest["subcommand"], json!("incidence"));
    assert_eq!(manifest["seed"], json!(2));
    let v: Value = serde_json::from_slice(&bytes).unwrap();
    assert_eq!(v["rank"], json!(4));
    assert_eq!(v["rank_last_three_columns"], json!(3));
}

#[test]
fn plane_target_from_config() {
    let cfg = tmp("p2.cfg", "# plane quartics\ntarget = p2\nmu = 3\nlambda = 5\n");
    let v = json_of(&run(&["incidence", "rank", "--config", cfg.to_str().unwrap()]));
    assert_eq!(v["rank"], json!(8));
    assert_eq!(v["kernel_dimension"], json!(7));
    let v = json_of(&run(&["incidence", "singularities", "--config", cfg.to_str().unwrap()]));
    assert_eq!(v["double_points"].as_array().unwrap().len(), 3);
}

#[test]
fn glue_from_files() {
    let g = tmp("g.txt", "y^4 + z^4 + t^4");
    let h = tmp("h.txt", "x^4 + y^4 + z^4");
    let v = json_of(&run(&["glue", "--g", g.to_str().unwrap(), "--h", h.to_str().unwrap()]));
    assert_eq!(v["lambda"], json!("1"));
    assert_eq!(v["surface"]["certificate"], json!([]));
    let bad = tmp("h2.txt", "x^4 + 2*y^4 + z^4");
    assert_eq!(run(&["glue", "--g", g.to_str().unwrap(), "--h", bad.to_str().unwrap()]).status.code(), Some(1));
}

#[test]
fn solve_a_small_system() {
    let sys = tmp("sys.txt", "x^2 + y^2 - 5\nx*y - 2\n");
    let v = json_of(&run(&["solve", "--system", sys.to_str().unwrap(), "--seed", "1"]));
    assert_eq!(v["variables"], json!(["x", "y"]));
    let sols = v["solutions"]["solutions"].as_array().unwrap();
    assert_eq!(sols.len(), 4);
    for s in sols {
        let x = s["point"][0][0].as_f64().unwrap();
        let y = s["point"][1][0].as_f64().unwrap();
        assert!((x * y - 2.0).abs() < 1e-9 && (x * x + y * y - 5.0).abs() < 1e-9);
    }
}
