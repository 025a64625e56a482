use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output};
use std::sync::Arc;

use gct_core::io::{self, graph_to_json};
use gct_core::{run_pipeline, build_delta_category, ConeMode, Environment, Graph};
use gct_testkit::{audit_result, graphs_iso};
use serde_json::Value;

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn gct(files: &[PathBuf], args: &[&str]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_gct"));
    for f in files {
        cmd.arg("-w").arg(f);
    }
    cmd.args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("JSON output")
}

fn temp(text: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    f
}

fn graph_of(v: &Value) -> Arc<Graph> {
    let vs: Vec<String> = v["vertices"].as_array().unwrap().iter().map(|x| x.as_str().unwrap().to_owned()).collect();
    let es: Vec<(String, String, String)> = v["edges"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| {
            let s = |k: &str| e[k].as_str().unwrap().to_owned();
            (s("id"), s("src"), s("tgt"))
        })
        .collect();
    Arc::new(Graph::new(vs, es).expect("result graph is well formed"))
}

#[test]
fn validate_reports_counts() {
    let o = gct(&[data("running.json")], &["validate"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("ok: 7 graphs, 5 morphisms, 2 rules, 2 systems"), "{}", stdout(&o));
}

#[test]
fn two_monic_matches_of_the_larger_rule() {
    let o = gct(&[data("running.json")], &["match", "rho'", "G", "--mono"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.starts_with("2 matches of rho' in G"), "{out}");
    assert!(out.contains("[l->a, r->b | e->e1]"));
    assert!(out.contains("[l->a, r->b | e->e2]"));
}

#[test]
fn gct_on_the_running_example() {
    let o = gct(&[data("running.json")], &["--json", "gct", "S", "G"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["coherent"], true);
    let res = &v["results"][0];
    let h = graph_of(&res["H"]);
    assert_eq!((h.vertex_count(), h.edge_count()), (3, 4));
    assert_eq!(graph_of(&res["C"]).vertex_count(), 2);

    // the same run through the library, checked by the oracles
    let ws = io::parse_str(&std::fs::read_to_string(data("running.json")).unwrap()).unwrap();
    let g = ws.graph("G").unwrap();
    let delta = build_delta_category(ws.system("S").unwrap(), g, &Environment::new(gct_core::RuleKind::DpoMono)).unwrap();
    let out = run_pipeline(&delta, ConeMode::First).unwrap();
    let lib = &out.results()[0];
    assert_eq!(graph_to_json(lib.result()), res["H"]);
    let a = audit_result(&delta, lib);
    assert!(a.ok() && a.skipped == 0, "{:?}", a.failures);
}

#[test]
fn text_output_of_gct() {
    let o = gct(&[data("running.json")], &["gct", "S", "G"]);
    let out = stdout(&o);
    assert!(out.starts_with("Δ: 4 objects, 4 non-identity morphisms\n"), "{out}");
    assert!(out.contains("\nC = "));
    assert!(out.contains("\nh = "));
}

#[test]
fn merging_on_two_points() {
    for (system, vertices) in [("S", 4), ("S'", 3)] {
        let o = gct(&[data("running.json")], &["--json", "gct", system, "G2"]);
        assert_eq!(o.status.code(), Some(0), "{system}");
        let h = graph_of(&json(&o)["results"][0]["H"]);
        assert_eq!((h.vertex_count(), h.edge_count()), (vertices, 0), "{system}");
    }
}

#[test]
fn restriction_to_one_object() {
    let o = gct(&[data("running.json")], &["delta", "S", "G"]);
    let out = stdout(&o);
    let first = out.lines().nth(1).unwrap().split_whitespace().next().unwrap().to_owned();
    let o = gct(&[data("running.json")], &["--json", "gct", "S", "G", "--restrict", &first]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["objects"].as_array().unwrap().len(), 1);
    let o = gct(&[data("running.json")], &["gct", "S", "G", "--restrict", "nobody"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn conflicting_pair_is_not_coherent() {
    let o = gct(&[data("conflict.json")], &["coherence", "Conflict", "G"]);
    assert_eq!(o.status.code(), Some(3));
    assert_eq!(stdout(&o), "not globally coherent\n");
    let o = gct(&[data("conflict.json")], &["gct", "Conflict", "G"]);
    assert_eq!(o.status.code(), Some(3));
    let o = gct(&[data("conflict.json")], &["coherence", "KeepOnly", "G"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "globally coherent\n");
}

#[test]
fn copying_with_sqpo() {
    let o = gct(&[data("copy.json")], &["--json", "apply", "copy", "G", "--match", "0"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    let d = graph_of(&v["D"]);
    assert_eq!((d.vertex_count(), d.edge_count()), (3, 2));
    let expect = Arc::new(Graph::new(["1", "2", "3"], [("x", "1", "3"), ("y", "2", "3")]).unwrap());
    assert!(graphs_iso(&d, &expect));
}

#[test]
fn gluing_failure_has_its_own_exit_code() {
    let ws = temp(
        r#"{"graphs": {"G": {"vertices": ["a", "b"], "edges": [{"id": "e", "src": "a", "tgt": "b"}]},
                       "one": {"vertices": ["x"]}, "none": {}},
            "rules": {"kill": {"kind": "DPO", "L": "one", "K": "none", "R": "none", "l": {}, "r": {}}}}"#,
    );
    let o = gct(&[ws.path().into()], &["apply", "kill", "G", "--match", "0"]);
    assert_eq!(o.status.code(), Some(4), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(String::from_utf8_lossy(&o.stderr).contains("GC2"));
    let o = gct(&[ws.path().into()], &["apply", "kill", "G", "--match", "5"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn broken_morphism_is_a_validation_error() {
    let ws = temp(
        r#"{"graphs": {"A": {"vertices": ["x", "y"], "edges": [{"id": "e", "src": "x", "tgt": "y"}]}},
            "morphisms": {"bad": {"dom": "A", "cod": "A", "vmap": {"x": "y", "y": "x"}, "emap": {"e": "e"}}}}"#,
    );
    let o = gct(&[ws.path().into()], &["validate"]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("/morphisms/bad") && err.contains('e'), "{err}");
}

#[test]
fn unknown_entities_and_empty_workspace() {
    let o = gct(&[data("running.json")], &["gct", "Nope", "G"]);
    assert_eq!(o.status.code(), Some(2));
    let o = gct(&[data("running.json")], &["--json", "match", "ghost", "G"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(json(&o)["error"].as_str().unwrap().contains("ghost"));
    let empty = temp("{}");
    let o = gct(&[empty.path().into()], &["validate"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("ok: 0 graphs"));
}

#[test]
fn sums_of_systems() {
    let other = temp(
        r#"{"graphs": {"pt": {"vertices": ["v"]}},
            "rules": {"noop": {"kind": "DPOm", "L": "pt", "K": "pt", "R": "pt",
                               "l": {"vmap": {"v": "v"}}, "r": {"vmap": {"v": "v"}}}},
            "systems": {"Other": {"rules": ["noop"]}}}"#,
    );
    let files = [data("running.json"), other.path().into()];
    let o = gct(&files, &["--json", "delta", "S+Other", "G"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(json(&o)["objects"].as_array().unwrap().len(), 6);
    let o = gct(&files, &["gct", "S+Other", "G"]);
    assert_eq!(o.status.code(), Some(0));
    // a rule in both summands
    let o = gct(&[data("running.json")], &["delta", "S+S'", "G"]);
    assert_eq!(o.status.code(), Some(2));
    // two documents defining the same graph
    let o = gct(&[data("running.json"), data("copy.json")], &["validate"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn dot_export() {
    let o = gct(&[data("running.json")], &["export", "--dot", "G"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(
        stdout(&o),
        "digraph \"G\" {\n  \"a\";\n  \"b\";\n  \"a\" -> \"b\" [label=\"e1\"];\n  \"a\" -> \"b\" [label=\"e2\"];\n}\n"
    );
    let o = gct(&[data("running.json")], &["export", "--dot", "rho'.R"]);
    assert!(stdout(&o).contains("\"l\" -> \"m\" [label=\"a\"];"));
}
