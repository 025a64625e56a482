//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Run with `cargo test -p gct-cli --test acceptance -- --nocapture` to see
//! the report.

use std::path::PathBuf;
use std::process::Command;
use std::sync::Arc;
use std::time::{Duration, Instant};

use gct_core::cat_ops::final_pullback_complement;
use gct_core::environment::{direct_transformation, DirectTransformation};
use gct_core::io::{self, Workspace};
use gct_core::{
    build_delta_category, close_rule_system, enumerate_homomorphisms, run_pipeline, ConeMode, DeltaCategory,
    GctOutcome, GctResult, Graph, RuleKind, RuleSystem,
};
use gct_testkit::gen::named;
use gct_testkit::oracle::fpbc_is_terminal;
use gct_testkit::suites::{gluing_inheritance, right_fullness, terminal_collapse, unique_d, Report};
use gct_testkit::{audit_delta, audit_result, audit_transformation, graphs_iso, spans_iso, Audit};

/// Instances per kind for the randomized criteria.
const RANDOM_INSTANCES: usize = 100;
const RIGHT_FULL_INSTANCES: usize = 50;
/// End-to-end budget for the running example.
const RUNNING_BUDGET: Duration = Duration::from_secs(1);
/// Size bound on the pullback complements compared against the copy result.
const FPBC_MAX_VERTICES: usize = 4;
const FPBC_MAX_EDGES: usize = 3;

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn workspace(name: &str) -> Workspace {
    io::parse_str(&std::fs::read_to_string(data(name)).unwrap()).unwrap()
}

struct Run {
    delta: DeltaCategory,
    results: Vec<GctResult>,
}

fn run(ws: &Workspace, system: &RuleSystem, graph: &str) -> Run {
    let g = ws.graph(graph).unwrap_or_else(|| panic!("graph {graph}"));
    let env = ws.environment_for(system);
    let delta = build_delta_category(system, g, &env).unwrap();
    let results = match run_pipeline(&delta, ConeMode::First).unwrap() {
        GctOutcome::Coherent(r) => r,
        GctOutcome::NotCoherent => Vec::new(),
    };
    Run { delta, results }
}

/// `l -> m -> r` with both edges doubled.
fn doubled_path() -> Arc<Graph> {
    named("h", 3, &[(0, 1), (0, 1), (1, 2), (1, 2)])
}

struct Criteria {
    lines: Vec<(bool, String)>,
    audit: Audit,
}

impl Criteria {
    fn record(&mut self, n: usize, ok: bool, what: impl Into<String>) {
        let line = format!("[{}] {n}. {}", if ok { "PASS" } else { "FAIL" }, what.into());
        println!("{line}");
        self.lines.push((ok, line));
    }

    fn audit_run(&mut self, r: &Run) {
        self.audit.merge(audit_delta(&r.delta));
        for res in &r.results {
            self.audit.merge(audit_result(&r.delta, res));
        }
    }

    fn audit_report(&mut self, r: &Report) {
        self.audit.merge(r.audit.clone());
    }
}

fn describe(r: &Report) -> String {
    let mut s = r.to_string();
    if let Some(f) = r.failures.first() {
        s.push_str(&format!("; first: {f}"));
    }
    s
}

#[test]
fn acceptance() {
    let mut c = Criteria {
        lines: Vec::new(),
        audit: Audit::default(),
    };
    let ws = workspace("running.json");
    let s = ws.system("S").unwrap();
    let s2 = ws.system("S'").unwrap();

    // 1
    let start = Instant::now();
    let text = std::fs::read_to_string(data("running.json")).unwrap();
    let timed_ws = io::parse_str(&text).unwrap();
    let one = run(&timed_ws, timed_ws.system("S").unwrap(), "G");
    let elapsed = start.elapsed();
    let h1 = one.results.first().map(|r| r.result().clone());
    let ok = one.delta.objects().len() == 4
        && one.delta.non_identities().count() == 4
        && one.results.len() == 1
        && graphs_iso(one.results[0].context_graph(), &named("c", 2, &[]))
        && h1.as_ref().is_some_and(|h| graphs_iso(h, &doubled_path()))
        && elapsed < RUNNING_BUDGET;
    c.record(
        1,
        ok,
        format!(
            "running example: Δ {} objects / {} non-identities, C {}, H {}, {:?}",
            one.delta.objects().len(),
            one.delta.non_identities().count(),
            one.results.first().map_or("-".into(), |r| r.context_graph().to_string()),
            h1.as_ref().map_or("-".into(), |h| h.to_string()),
            elapsed
        ),
    );
    c.audit_run(&one);

    // 2
    let two = run(&ws, s2, "G");
    let plus_minus: Vec<_> = two
        .delta
        .non_identities()
        .filter(|m| {
            let rule = |i: usize| two.delta.object(i).rule.name.clone();
            rule(m.src) == "rho" && rule(m.dst) == "rho"
        })
        .collect();
    let both_ways = plus_minus.len() == 2 && plus_minus[0].src == plus_minus[1].dst && plus_minus[0].dst == plus_minus[1].src;
    let same_h = match (two.results.first(), one.results.first()) {
        (Some(a), Some(b)) => spans_iso((a.f(), a.h()), (b.f(), b.h())),
        _ => false,
    };
    c.record(
        2,
        two.delta.objects().len() == 4 && two.delta.non_identities().count() == 6 && both_ways && same_h,
        format!(
            "automorphism extension: Δ' {} non-identities ({} between δ+ and δ-), same span as 1: {same_h}",
            two.delta.non_identities().count(),
            plus_minus.len()
        ),
    );
    c.audit_run(&two);

    // 3
    let merged_s = run(&ws, s, "G2");
    let merged_s2 = run(&ws, s2, "G2");
    let size = |r: &Run| r.results.first().map(|x| (x.result().vertex_count(), x.result().edge_count()));
    c.record(
        3,
        size(&merged_s) == Some((4, 0)) && size(&merged_s2) == Some((3, 0)),
        format!("merging on two points: S gives {:?}, S' gives {:?}", size(&merged_s), size(&merged_s2)),
    );
    c.audit_run(&merged_s);
    c.audit_run(&merged_s2);

    // 4
    let big = ws.rule("rho'").unwrap().clone();
    let only_big = close_rule_system("OnlyBig", RuleKind::DpoMono, vec![big.clone()], Vec::new()).unwrap();
    let empty = run(&ws, &only_big, "G2");
    let g2 = ws.graph("G2").unwrap();
    let empty_ok = empty.delta.is_empty()
        && empty.results.len() == 1
        && empty.results[0].f().is_iso()
        && empty.results[0].h().is_iso()
        && graphs_iso(empty.results[0].result(), g2);
    let single = run(&ws, &only_big, "arrow");
    let single_ok = single.delta.objects().len() == 1
        && single.results.len() == 1
        && {
            let t = single.delta.object(0);
            let r = &single.results[0];
            spans_iso((r.f(), r.h()), (&t.f, &t.g))
        };
    c.record(
        4,
        empty_ok && single_ok,
        format!("degenerate Δ: empty gives C = G and H ≅ G: {empty_ok}; singleton gives H ≅ H_δ: {single_ok}"),
    );
    c.audit_run(&empty);
    c.audit_run(&single);

    // 5
    let mut ok5 = true;
    let mut parts = Vec::new();
    for kind in RuleKind::ALL {
        let r = terminal_collapse(kind, RANDOM_INSTANCES, 50, true);
        ok5 &= r.instances >= RANDOM_INSTANCES && r.failed == 0;
        parts.push(format!("{kind}: {}/{} ok ({} with ≥2 objects)", r.instances - r.failed.min(r.instances), r.instances, r.nontrivial));
        if r.failed > 0 {
            parts.push(describe(&r));
        }
        c.audit_report(&r);
    }
    c.record(5, ok5, format!("terminal object collapse: {}", parts.join(", ")));

    // 6
    let a = c.audit.clone();
    c.record(
        6,
        a.ok() && a.checked > 0,
        format!(
            "universal-property oracles: {}/{} constructions confirmed, {} beyond the size bound{}",
            a.checked - a.failures.len(),
            a.checked,
            a.skipped,
            a.failures.first().map_or(String::new(), |f| format!("; first failure: {f}"))
        ),
    );

    // 7
    let mut glue_checks = 0;
    let mut glue_failed = 0;
    let mut first = None;
    for kind in [RuleKind::Dpo, RuleKind::DpoMono] {
        let r = gluing_inheritance(kind, RANDOM_INSTANCES, 70, false);
        glue_checks += r.checks;
        glue_failed += r.failed;
        if first.is_none() {
            first = r.failures.first().map(|f| format!("{kind} {f}"));
        }
    }
    let mut gc1_failed = 0;
    for kind in [RuleKind::Dpo, RuleKind::DpoMono] {
        gc1_failed += gluing_inheritance(kind, RANDOM_INSTANCES, 70, true).failed;
    }
    let mut d_ok = true;
    let mut d_parts = Vec::new();
    for kind in RuleKind::ALL {
        let r = unique_d(kind, RANDOM_INSTANCES, 71);
        d_ok &= r.passed(RANDOM_INSTANCES);
        d_parts.push(format!("{kind} {}/{}", r.audit.checked - r.audit.failures.len(), r.audit.checked));
    }
    c.record(
        7,
        glue_failed == 0 && d_ok,
        format!(
            "gluing inheritance: {glue_failed}/{glue_checks} induced matches fail (identification alone: {gc1_failed} fail){}; unique d: {}",
            first.map_or(String::new(), |f| format!(", e.g. {f}")),
            d_parts.join(", ")
        ),
    );

    // 8
    let copy_ws = workspace("copy.json");
    let copy = copy_ws.rule("copy").unwrap();
    let g = copy_ws.graph("G").unwrap();
    let m = enumerate_homomorphisms(copy.lhs(), g, true)
        .into_iter()
        .find(|m| g.vertex(m.v(0)) == "a")
        .expect("match on the source vertex");
    let t: DirectTransformation = direct_transformation(copy, &m, None).unwrap();
    let fp = final_pullback_complement(&m, &copy.l).unwrap();
    let same_construction = fp.f == t.f && fp.k == t.k;
    let d_shape = (t.context().vertex_count(), t.context().edge_count());
    let terminal = fpbc_is_terminal(&m, &copy.l, &t.f, &t.k, FPBC_MAX_VERTICES, FPBC_MAX_EDGES);
    c.audit.merge(audit_transformation(&t));
    let rf = right_fullness(RuleKind::SqpoMono, RIGHT_FULL_INSTANCES, 80);
    c.record(
        8,
        d_shape == (3, 2) && same_construction && terminal.is_some() && rf.passed(RIGHT_FULL_INSTANCES),
        format!(
            "SqPO copy: D has {} vertices / {} edges, terminal among {} complements (≤{FPBC_MAX_VERTICES} vertices, ≤{FPBC_MAX_EDGES} edges); right-fullness: {}",
            d_shape.0,
            d_shape.1,
            terminal.map_or("-".into(), |n| n.to_string()),
            describe(&rf)
        ),
    );

    // 9
    let cli = |system: &str| {
        let o = Command::new(env!("CARGO_BIN_EXE_gct"))
            .arg("-w")
            .arg(data("conflict.json"))
            .args(["coherence", system, "G"])
            .output()
            .unwrap();
        (o.status.code(), String::from_utf8_lossy(&o.stdout).trim().to_owned())
    };
    let conflict = cli("Conflict");
    let keep = cli("KeepOnly");
    c.record(
        9,
        conflict == (Some(3), "not globally coherent".into()) && keep == (Some(0), "globally coherent".into()),
        format!("conflict pair: {conflict:?}; without the deletion: {keep:?}"),
    );

    let failed: Vec<&String> = c.lines.iter().filter(|(ok, _)| !ok).map(|(_, l)| l).collect();
    assert!(failed.is_empty(), "criteria not met:\n{}", failed.iter().map(|s| s.as_str()).collect::<Vec<_>>().join("\n"));
}
