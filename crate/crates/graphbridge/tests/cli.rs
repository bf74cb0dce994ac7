use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

fn fixtures() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

fn graphbridge(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_graphbridge"))
        .args(args)
        .output()
        .expect("spawn graphbridge")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn validate_minimal_dataset() {
    let o = graphbridge(&["validate", path_str(&fixtures().join("datasets/minimal.json"))]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "0 violations");
}

#[test]
fn validate_names_dangling_edge() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("d.json");
    fs::write(
        &path,
        r#"{"frames": [{"id": "f1", "label": "T1", "order": 0}],
            "nodes": [{"id": "a", "frames": ["f1"]}, {"id": "b", "frames": ["f1"]}],
            "edges": [{"source": "a", "target": "ghost", "frames": ["f1"]}]}"#,
    )
    .unwrap();
    let o = graphbridge(&["validate", path_str(&path)]);
    assert_eq!(o.status.code(), Some(1));
    let out = stdout(&o);
    assert!(out.contains("violation: dangling endpoint: (a,ghost)"), "{out}");
    assert!(out.ends_with("1 violations\n"), "{out}");
}

#[test]
fn validate_reports_malformed_json() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("d.json");
    fs::write(&path, "{\"frames\": [").unwrap();
    let o = graphbridge(&["validate", path_str(&path)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).starts_with("malformed dataset document"));
}

#[test]
fn missing_file_is_an_error() {
    let o = graphbridge(&["validate", "/nonexistent/data.json"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("/nonexistent/data.json"));
}

/// Restates every dataset invariant with plain loops over the JSON tree.
fn brute_force_valid(doc: &Value) -> bool {
    let frames = doc["frames"].as_array().unwrap();
    let nodes = doc["nodes"].as_array().unwrap();
    let edges = doc["edges"].as_array().unwrap();
    let frame_known = |f: &Value| frames.iter().any(|d| d["id"] == *f);
    for (i, a) in frames.iter().enumerate() {
        for b in &frames[i + 1..] {
            if a["id"] == b["id"] || a["order"] == b["order"] {
                return false;
            }
        }
    }
    for (i, a) in nodes.iter().enumerate() {
        if nodes[i + 1..].iter().any(|b| b["id"] == a["id"]) {
            return false;
        }
        let fs = a["frames"].as_array().unwrap();
        if fs.is_empty() || !fs.iter().all(frame_known) {
            return false;
        }
        if let Some(c) = a.get("community").and_then(Value::as_object) {
            if !c.keys().all(|k| fs.iter().any(|f| f == k)) {
                return false;
            }
        }
    }
    let node = |id: &Value| nodes.iter().find(|n| n["id"] == *id);
    for (i, e) in edges.iter().enumerate() {
        let (s, t) = (&e["source"], &e["target"]);
        if s == t {
            return false;
        }
        let (Some(ns), Some(nt)) = (node(s), node(t)) else {
            return false;
        };
        for other in &edges[i + 1..] {
            let (os, ot) = (&other["source"], &other["target"]);
            if (os == s && ot == t) || (os == t && ot == s) {
                return false;
            }
        }
        for f in e["frames"].as_array().unwrap() {
            let present = |n: &Value| n["frames"].as_array().unwrap().contains(f);
            if !frame_known(f) || !present(ns) || !present(nt) {
                return false;
            }
        }
    }
    true
}

fn mutate(rng: &mut ChaCha8Rng, doc: &mut Value) {
    let ids = ["a", "b", "c", "d", "e", "f", "g", "h", "i", "j", "k", "l", "zz"];
    let frames = ["t1", "t2", "t3", "t9"];
    let nodes = doc["nodes"].as_array_mut().unwrap();
    match rng.gen_range(0..9) {
        0 => {
            let k = rng.gen_range(0..nodes.len());
            nodes.remove(k);
        }
        1 => {
            let mut copy = nodes.choose(rng).unwrap().clone();
            copy["frames"] = json!([frames[rng.gen_range(0..3)]]);
            nodes.push(copy);
        }
        2 => {
            let n = nodes.choose_mut(rng).unwrap();
            let fs = n["frames"].as_array_mut().unwrap();
            let k = rng.gen_range(0..fs.len());
            fs.remove(k);
        }
        3 => {
            let n = nodes.choose_mut(rng).unwrap();
            n["frames"].as_array_mut().unwrap().push(json!(frames.choose(rng).unwrap()));
        }
        4 => {
            let n = nodes.choose_mut(rng).unwrap();
            n["community"] = json!({ *frames.choose(rng).unwrap(): "Z" });
        }
        5 => {
            let e = json!({
                "source": ids.choose(rng).unwrap(),
                "target": ids.choose(rng).unwrap(),
                "frames": [frames.choose(rng).unwrap()],
            });
            doc["edges"].as_array_mut().unwrap().push(e);
        }
        6 => {
            let edges = doc["edges"].as_array_mut().unwrap();
            let e = edges.choose_mut(rng).unwrap();
            e["frames"].as_array_mut().unwrap().push(json!(frames.choose(rng).unwrap()));
        }
        7 => {
            let fr = doc["frames"].as_array_mut().unwrap();
            let k = rng.gen_range(0..fr.len());
            fr[k]["order"] = json!(rng.gen_range(0..4));
        }
        _ => {
            let edges = doc["edges"].as_array_mut().unwrap();
            let e = edges.choose_mut(rng).unwrap().clone();
            let swapped = json!({"source": e["target"], "target": e["source"], "frames": e["frames"]});
            edges.push(swapped);
        }
    }
}

#[test]
fn fuzzed_corpus_matches_brute_force_checker() {
    let base: Value =
        serde_json::from_slice(&fs::read(fixtures().join("datasets/dynamic_communities.json")).unwrap()).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(0x66757a7a);
    let mut verdicts = BTreeMap::new();
    for k in 0..100 {
        let mut doc = base.clone();
        for _ in 0..rng.gen_range(1..=2) {
            mutate(&mut rng, &mut doc);
        }
        let path = dir.path().join(format!("m{k:03}.json"));
        fs::write(&path, doc.to_string()).unwrap();
        let o = graphbridge(&["validate", path_str(&path)]);
        let expected = brute_force_valid(&doc);
        assert_eq!(o.status.code() == Some(0), expected, "case {k}: {}\n{doc}", stdout(&o));
        *verdicts.entry(expected).or_insert(0) += 1;
    }
    assert!(verdicts.len() == 2, "corpus lacks variety: {verdicts:?}");
}

#[test]
fn layout_prints_unit_square_positions() {
    let dir = tempfile::tempdir().unwrap();
    let specs = dir.path().join("views.json");
    fs::write(&specs, r#"[{"viewId": "t1", "kind": "frame", "frameId": "t1"}]"#).unwrap();
    let data = fixtures().join("datasets/dynamic_communities.json");
    let run = |seed: &str| {
        let o = graphbridge(&["layout", path_str(&data), "--views", path_str(&specs), "--seed", seed, "--iterations", "50"]);
        assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
        stdout(&o)
    };
    let out = run("7");
    assert_eq!(out, run("7"));
    assert_ne!(out, run("8"));
    let layouts: Value = serde_json::from_str(&out).unwrap();
    let positions = layouts[0]["positions"].as_object().unwrap();
    assert_eq!(positions.len(), 10);
    for p in positions.values() {
        for c in p.as_array().unwrap() {
            assert!((0.0..=1.0).contains(&c.as_f64().unwrap()));
        }
    }
}

#[test]
fn illegal_step_stops_the_run() {
    let dir = tempfile::tempdir().unwrap();
    let o = graphbridge(&[
        "run",
        path_str(&fixtures().join("scenarios/illegal_drop.json")),
        "--out",
        path_str(dir.path()),
    ]);
    assert_eq!(o.status.code(), Some(1));
    let manifest: Value = serde_json::from_slice(&fs::read(dir.path().join("manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["exitCode"], 1);
    let last = manifest["files"].as_array().unwrap().last().unwrap().as_str().unwrap();
    assert!(last.ends_with("-error.json"), "{last}");
    let error: Value = serde_json::from_slice(&fs::read(dir.path().join(last)).unwrap()).unwrap();
    assert_eq!(error["code"], "IllegalTransition");
}

#[test]
fn scenario_run_writes_five_frames() {
    let dir = tempfile::tempdir().unwrap();
    let o = graphbridge(&[
        "run",
        path_str(&fixtures().join("scenarios/drag_preview/scenario.json")),
        "--out",
        path_str(dir.path()),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let frames: Vec<_> = fs::read_dir(dir.path().join("frames")).unwrap().collect();
    assert_eq!(frames.len(), 5);
}

#[test]
fn rerun_replaces_previous_output() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let scenario = fixtures().join("scenarios/drag_preview/scenario.json");
    graphbridge(&["run", path_str(&scenario), "--out", path_str(&out)]);
    fs::write(out.join("events/9999-stale.json"), "{}").unwrap();
    let o = graphbridge(&["run", path_str(&scenario), "--out", path_str(&out)]);
    assert_eq!(o.status.code(), Some(0));
    assert!(!out.join("events/9999-stale.json").exists());
}

#[test]
fn schema_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("s.json");
    fs::write(&path, r#"{"dataset": "x.json", "views": [], "steps": []}"#).unwrap();
    let o = graphbridge(&["run", path_str(&path), "--out", path_str(&dir.path().join("o"))]);
    assert_eq!(o.status.code(), Some(2));
}
