use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use gct_core::environment::{co_matches, direct_transformation, EnvError, Environment};
use gct_core::gct::{find_coherent_cone_systems, GctError};
use gct_core::io::{self, Workspace};
use gct_core::{
    build_summed_delta, enumerate_homomorphisms, run_pipeline, ConeMode, DeltaCategory, GctOutcome,
    Graph, GraphMorphism, RuleSystem,
};

#[derive(Parser)]
#[command(version, about = "Rule-based graph rewriting with global coherent transformations")]
struct Cli {
    /// Workspace file (JSON); may be given several times
    #[arg(short, long = "workspace", global = true)]
    workspace: Vec<PathBuf>,

    /// Print structured JSON instead of text
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Load and check every entity of the workspace
    Validate,
    /// List the matches of a rule's left-hand side in a graph
    Match {
        rule: String,
        graph: String,
        /// Only monic matches (the default for DPOm and SqPOm rules)
        #[arg(long)]
        mono: bool,
    },
    /// Apply a rule at one of its matches
    Apply {
        rule: String,
        graph: String,
        #[arg(long = "match")]
        index: usize,
        /// Co-match index, for PBPO rules
        #[arg(long, default_value_t = 0)]
        co_match: usize,
    },
    /// Build the category of transformations of a graph by a system
    Delta { system: String, graph: String },
    /// Decide whether Δ admits a coherent system of cones
    Coherence {
        system: String,
        graph: String,
        #[arg(long)]
        all: bool,
    },
    /// Compute the global coherent transformation
    Gct {
        system: String,
        graph: String,
        /// One result per coherent cone system, up to span isomorphism
        #[arg(long)]
        all: bool,
        /// Restrict Δ to the full subcategory on these objects
        #[arg(long, value_delimiter = ',')]
        restrict: Option<Vec<String>>,
    },
    /// Export a graph in Graphviz format
    Export {
        #[arg(long)]
        dot: String,
    },
}

enum Failure {
    Validation(String),
    NotCoherent(Output),
    Gluing(String),
    Other(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Other(_) => 1,
            Failure::Validation(_) => 2,
            Failure::NotCoherent(_) => 3,
            Failure::Gluing(_) => 4,
        }
    }
}

impl From<EnvError> for Failure {
    fn from(e: EnvError) -> Self {
        match e {
            EnvError::Gluing(_) => Failure::Gluing(e.to_string()),
            _ => Failure::Validation(e.to_string()),
        }
    }
}

impl From<GctError> for Failure {
    fn from(e: GctError) -> Self {
        match e {
            GctError::Env(e) => e.into(),
            other => Failure::Other(other.to_string()),
        }
    }
}

struct Output {
    text: String,
    json: Value,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            emit(&cli, &out);
            ExitCode::SUCCESS
        }
        Err(f) => {
            let code = f.code();
            match f {
                Failure::NotCoherent(out) => emit(&cli, &out),
                Failure::Validation(m) | Failure::Gluing(m) | Failure::Other(m) => {
                    if cli.json {
                        println!("{}", json!({ "error": m }));
                    }
                    eprintln!("error: {m}");
                }
            }
            ExitCode::from(code)
        }
    }
}

fn emit(cli: &Cli, out: &Output) {
    if cli.json {
        println!("{}", serde_json::to_string_pretty(&out.json).expect("serializable"));
    } else {
        print!("{}", out.text);
    }
}

fn load(paths: &[PathBuf]) -> Result<Workspace, Failure> {
    let mut texts = Vec::new();
    for p in paths {
        let t = std::fs::read_to_string(p).map_err(|e| Failure::Other(format!("{}: {e}", p.display())))?;
        texts.push((p.display().to_string(), t));
    }
    let refs: Vec<(&str, &str)> = texts.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
    io::parse_inputs(&refs).map_err(|e| Failure::Validation(e.to_string()))
}

fn run(cli: &Cli) -> Result<Output, Failure> {
    let ws = load(&cli.workspace)?;
    match &cli.command {
        Command::Validate => Ok(validate(&ws)),
        Command::Match { rule, graph, mono } => matches(&ws, rule, graph, *mono),
        Command::Apply {
            rule,
            graph,
            index,
            co_match,
        } => apply(&ws, rule, graph, *index, *co_match),
        Command::Delta { system, graph } => {
            let delta = delta(&ws, system, graph)?;
            Ok(Output {
                text: delta_text(&delta),
                json: io::delta_to_json(&delta),
            })
        }
        Command::Coherence { system, graph, all } => coherence(&ws, system, graph, *all),
        Command::Gct {
            system,
            graph,
            all,
            restrict,
        } => gct(&ws, system, graph, *all, restrict.as_deref()),
        Command::Export { dot } => {
            let g = ws
                .find_graph(dot)
                .ok_or_else(|| Failure::Validation(format!("unknown graph `{dot}`")))?;
            let text = io::to_dot(dot, &g);
            Ok(Output {
                json: json!({ "dot": text }),
                text,
            })
        }
    }
}

fn validate(ws: &Workspace) -> Output {
    let mut text = String::new();
    let _ = writeln!(
        text,
        "ok: {} graphs, {} morphisms, {} rules, {} systems",
        ws.graphs.len(),
        ws.morphisms.len(),
        ws.rules.len(),
        ws.systems.len()
    );
    for (n, s) in &ws.systems {
        let _ = writeln!(
            text,
            "system {n} ({}): {} rules, {} morphisms after closure",
            s.kind,
            s.rules().len(),
            s.morphisms().len()
        );
    }
    let json = json!({
        "graphs": ws.graphs.keys().collect::<Vec<_>>(),
        "morphisms": ws.morphisms.keys().collect::<Vec<_>>(),
        "rules": ws.rules.keys().collect::<Vec<_>>(),
        "systems": ws.systems.iter().map(|(n, s)| (n.clone(), json!({
            "kind": s.kind.as_str(),
            "rules": s.rules().iter().map(|r| r.name.clone()).collect::<Vec<_>>(),
            "morphisms": s.morphisms().iter().map(|m| m.name.clone()).collect::<Vec<_>>(),
        }))).collect::<serde_json::Map<_, _>>(),
    });
    Output { text, json }
}

fn lookup_graph(ws: &Workspace, name: &str) -> Result<Arc<Graph>, Failure> {
    ws.graph(name)
        .cloned()
        .ok_or_else(|| Failure::Validation(format!("unknown graph `{name}`")))
}

fn lookup_rule(ws: &Workspace, name: &str) -> Result<Arc<gct_core::Rule>, Failure> {
    ws.rule(name)
        .cloned()
        .ok_or_else(|| Failure::Validation(format!("unknown rule `{name}`")))
}

/// `S` or a sum `S1+S2`.
fn lookup_systems<'w>(ws: &'w Workspace, spec: &str) -> Result<(Vec<&'w RuleSystem>, Environment), Failure> {
    let mut systems = Vec::new();
    let mut env = Environment::empty();
    for name in spec.split('+') {
        let s = ws
            .system(name)
            .ok_or_else(|| Failure::Validation(format!("unknown system `{name}`")))?;
        env = env.sum(&ws.environment_for(s));
        systems.push(s);
    }
    Ok((systems, env))
}

fn map_text(m: &GraphMorphism) -> String {
    let vs: Vec<String> = m.vertex_pairs().map(|(a, b)| format!("{a}->{b}")).collect();
    let es: Vec<String> = m.edge_pairs().map(|(a, b)| format!("{a}->{b}")).collect();
    if es.is_empty() {
        format!("[{}]", vs.join(", "))
    } else {
        format!("[{} | {}]", vs.join(", "), es.join(", "))
    }
}

fn matches(ws: &Workspace, rule: &str, graph: &str, mono: bool) -> Result<Output, Failure> {
    let r = lookup_rule(ws, rule)?;
    let g = lookup_graph(ws, graph)?;
    let list = enumerate_homomorphisms(r.lhs(), &g, mono || r.kind.is_mono());
    let mut text = format!("{} matches of {rule} in {graph}\n", list.len());
    for (i, m) in list.iter().enumerate() {
        let _ = writeln!(text, "  #{i} {}", map_text(m));
    }
    let json = json!({
        "rule": rule, "graph": graph,
        "matches": list.iter().map(io::maps_to_json).collect::<Vec<_>>(),
    });
    Ok(Output { text, json })
}

fn apply(ws: &Workspace, rule: &str, graph: &str, index: usize, co: usize) -> Result<Output, Failure> {
    let r = lookup_rule(ws, rule)?;
    let g = lookup_graph(ws, graph)?;
    let list = enumerate_homomorphisms(r.lhs(), &g, r.kind.is_mono());
    let m = list
        .get(index)
        .ok_or_else(|| Failure::Validation(format!("{rule} has {} matches in {graph}, no #{index}", list.len())))?;
    let t_g = if r.typing.is_some() {
        let cms = co_matches(&r, m);
        Some(
            cms.get(co)
                .cloned()
                .ok_or_else(|| Failure::Validation(format!("match #{index} has {} co-matches, no #{co}", cms.len())))?,
        )
    } else {
        None
    };
    let t = direct_transformation(&r, m, t_g.as_ref())?;
    let mut text = String::new();
    let _ = writeln!(text, "{} step of {rule} on {graph} at match #{index}", r.kind);
    let _ = writeln!(text, "G = {}", t.input());
    let _ = writeln!(text, "D = {}", t.context());
    let _ = writeln!(text, "H = {}", t.result());
    for (name, map) in [("m", &t.m), ("k", &t.k), ("f", &t.f), ("n", &t.n), ("g", &t.g)] {
        let _ = writeln!(text, "{name} = {}", map_text(map));
    }
    if let Some(c) = &t.typing {
        for (name, map) in [("t_G", &c.t_g), ("t_D", &c.t_d), ("t_H", &c.t_h)] {
            let _ = writeln!(text, "{name} = {}", map_text(map));
        }
    }
    Ok(Output {
        text,
        json: io::transformation_to_json(&t),
    })
}

fn delta(ws: &Workspace, system: &str, graph: &str) -> Result<DeltaCategory, Failure> {
    let (systems, env) = lookup_systems(ws, system)?;
    let g = lookup_graph(ws, graph)?;
    Ok(build_summed_delta(&systems, &g, &env)?)
}

fn delta_text(delta: &DeltaCategory) -> String {
    let mut text = format!(
        "Δ: {} objects, {} non-identity morphisms\n",
        delta.objects().len(),
        delta.non_identities().count()
    );
    for o in delta.objects() {
        let t = &o.transformation;
        let _ = writeln!(text, "  {} : m = {}  H = {}", o.name, map_text(&t.m), t.result());
    }
    for m in delta.non_identities() {
        let _ = writeln!(
            text,
            "  {} : {} -> {}  over {}",
            m.name,
            delta.objects()[m.src].name,
            delta.objects()[m.dst].name,
            m.mu.sigma.name
        );
    }
    for f in delta.failures() {
        let _ = writeln!(text, "  not induced: {} at {}: {}", f.morphism, f.target, f.reason);
    }
    for s in delta.skipped() {
        let _ = writeln!(text, "  skipped match of {} {}: {}", s.rule, map_text(&s.m), s.reason);
    }
    text
}

fn coherence(ws: &Workspace, system: &str, graph: &str, all: bool) -> Result<Output, Failure> {
    let delta = delta(ws, system, graph)?;
    let mode = if all { ConeMode::All } else { ConeMode::First };
    let found = find_coherent_cone_systems(&delta, mode);
    let json = json!({
        "objects": delta.objects().len(),
        "coherent": !found.is_empty(),
        "cone_systems": found.len(),
    });
    if found.is_empty() {
        return Err(Failure::NotCoherent(Output {
            text: "not globally coherent\n".into(),
            json,
        }));
    }
    let text = if all {
        format!("globally coherent: {} cone systems\n", found.len())
    } else {
        "globally coherent\n".into()
    };
    Ok(Output { text, json })
}

fn gct(ws: &Workspace, system: &str, graph: &str, all: bool, restrict: Option<&[String]>) -> Result<Output, Failure> {
    let mut delta = delta(ws, system, graph)?;
    if let Some(names) = restrict {
        delta = delta.restrict(names)?;
    }
    let mode = if all { ConeMode::All } else { ConeMode::First };
    let outcome = run_pipeline(&delta, mode)?;
    let GctOutcome::Coherent(results) = outcome else {
        return Err(Failure::NotCoherent(Output {
            text: "not globally coherent\n".into(),
            json: json!({ "coherent": false }),
        }));
    };
    let mut text = format!(
        "Δ: {} objects, {} non-identity morphisms\n",
        delta.objects().len(),
        delta.non_identities().count()
    );
    for (i, r) in results.iter().enumerate() {
        if results.len() > 1 {
            let _ = writeln!(text, "result #{i}");
        }
        let _ = writeln!(text, "G = {}", delta.input());
        let _ = writeln!(text, "C = {}", r.context_graph());
        let _ = writeln!(text, "H = {}", r.result());
        let _ = writeln!(text, "f = {}", map_text(r.f()));
        let _ = writeln!(text, "h = {}", map_text(r.h()));
    }
    let json = json!({
        "coherent": true,
        "objects": delta.objects().iter().map(|o| o.name.clone()).collect::<Vec<_>>(),
        "results": results.iter().map(|r| io::gct_result_to_json(&delta, r)).collect::<Vec<_>>(),
    });
    Ok(Output { text, json })
}
