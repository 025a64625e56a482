//! JSON workspaces and output formats.
//!
//! A workspace document has four optional sections:
//!
//! ```json
//! {
//!   "graphs":    { "G": { "vertices": ["a", "b"], "edges": [{ "id": "e", "src": "a", "tgt": "b" }] } },
//!   "morphisms": { "m": { "dom": "L", "cod": "G", "vmap": { "x": "a" }, "emap": {} } },
//!   "rules":     { "r": { "kind": "DPOm", "L": "L", "K": "K", "R": "R", "l": "l", "r": "r" } },
//!   "systems":   { "S": { "rules": ["r"], "morphisms": [{ "name": "s", "src": "r", "dst": "r",
//!                                                         "s1": "...", "s2": "...", "s3": "..." }] } }
//! }
//! ```
//!
//! Graph and morphism fields accept either the name of an entry of the
//! `graphs`/`morphisms` sections or an inline object. Inline morphisms may
//! omit `dom` and `cod` where the position implies them. PBPO rules add
//! `T_L`, `T_K`, `T_R`, `u`, `v`, `t_L`, `t_K`, `t_R`; PBPO rule morphisms add
//! `s4` and `s5`. An optional top-level `environment` lists rule kinds.
//!
//! Errors carry the JSON pointer of the offending value.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::sync::Arc;

use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::environment::{DeltaCategory, DirectTransformation, Environment};
use crate::gct::GctResult;
use crate::graph::Graph;
use crate::morphism::GraphMorphism;
use crate::rules::{
    check_rule_morphism, close_rule_system, PbpoTyping, Rule, RuleKind, RuleMorphism, RuleSystem,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IoError {
    #[error("{source_name}: invalid JSON: {message}")]
    Json { source_name: String, message: String },
    #[error("{path}: {message}")]
    Schema { path: String, message: String },
    #[error("{path}: {message}")]
    Validation { path: String, message: String },
    #[error("{path}: `{name}` is defined in more than one input")]
    Duplicate { path: String, name: String },
}

impl IoError {
    pub fn path(&self) -> Option<&str> {
        match self {
            IoError::Json { .. } => None,
            IoError::Schema { path, .. } | IoError::Validation { path, .. } | IoError::Duplicate { path, .. } => {
                Some(path)
            }
        }
    }
}

/// Named graphs, morphisms, rules and closed rule systems.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Workspace {
    pub graphs: BTreeMap<String, Arc<Graph>>,
    pub morphisms: BTreeMap<String, NamedMorphism>,
    pub rules: BTreeMap<String, Arc<Rule>>,
    pub systems: BTreeMap<String, RuleSystem>,
    pub environment: Option<Environment>,
}

/// A morphism of the `morphisms` section, with the names of its ends.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NamedMorphism {
    pub dom: String,
    pub cod: String,
    pub map: GraphMorphism,
}

impl Workspace {
    pub fn graph(&self, name: &str) -> Option<&Arc<Graph>> {
        self.graphs.get(name)
    }

    pub fn rule(&self, name: &str) -> Option<&Arc<Rule>> {
        self.rules.get(name)
    }

    pub fn system(&self, name: &str) -> Option<&RuleSystem> {
        self.systems.get(name)
    }

    /// The declared environment, or the one given by the system's kind.
    pub fn environment_for(&self, system: &RuleSystem) -> Environment {
        self.environment.clone().unwrap_or_else(|| Environment::new(system.kind))
    }

    /// Every graph known by name, rule graphs included, for lookups such as DOT export.
    pub fn find_graph(&self, name: &str) -> Option<Arc<Graph>> {
        if let Some(g) = self.graphs.get(name) {
            return Some(g.clone());
        }
        let (rule, part) = name.rsplit_once('.')?;
        let r = self.rules.get(rule)?;
        match part {
            "L" => Some(r.lhs().clone()),
            "K" => Some(r.interface().clone()),
            "R" => Some(r.rhs().clone()),
            _ => None,
        }
    }
}

pub fn parse_str(text: &str) -> Result<Workspace, IoError> {
    parse_inputs(&[("<input>", text)])
}

/// Parses and merges several documents; names must be unique across them.
pub fn parse_inputs(inputs: &[(&str, &str)]) -> Result<Workspace, IoError> {
    let mut docs = Vec::new();
    for (name, text) in inputs {
        let v: Value = serde_json::from_str(text).map_err(|e| IoError::Json {
            source_name: (*name).to_owned(),
            message: e.to_string(),
        })?;
        docs.push(v);
    }
    parse_values(&docs)
}

const SECTIONS: [&str; 4] = ["graphs", "morphisms", "rules", "systems"];

pub fn parse_values(docs: &[Value]) -> Result<Workspace, IoError> {
    let mut merged: BTreeMap<&str, Map<String, Value>> = SECTIONS.iter().map(|s| (*s, Map::new())).collect();
    let mut environment = None;
    for doc in docs {
        let obj = as_object(doc, "")?;
        for (key, val) in obj {
            let path = pointer("", key);
            if key == "environment" {
                environment = Some(parse_environment(val, &path)?);
                continue;
            }
            let Some(section) = merged.get_mut(key.as_str()) else {
                return Err(schema(&path, "unknown section"));
            };
            for (name, entry) in as_object(val, &path)? {
                if section.insert(name.clone(), entry.clone()).is_some() {
                    return Err(IoError::Duplicate {
                        path: pointer(&path, name),
                        name: name.clone(),
                    });
                }
            }
        }
    }
    let mut r = Resolver {
        raw: merged,
        ws: Workspace {
            environment,
            ..Workspace::default()
        },
    };
    r.resolve()?;
    Ok(r.ws)
}

fn parse_environment(v: &Value, path: &str) -> Result<Environment, IoError> {
    let mut env = Environment::empty();
    for (i, k) in as_array(v, path)?.iter().enumerate() {
        env = env.sum(&Environment::new(parse_kind(k, &pointer(path, &i.to_string()))?));
    }
    Ok(env)
}

fn parse_kind(v: &Value, path: &str) -> Result<RuleKind, IoError> {
    as_str(v, path)?.parse().map_err(|e: crate::rules::UnknownKind| schema(path, &e.to_string()))
}

struct Resolver<'a> {
    raw: BTreeMap<&'a str, Map<String, Value>>,
    ws: Workspace,
}

impl Resolver<'_> {
    fn resolve(&mut self) -> Result<(), IoError> {
        let graphs = self.raw["graphs"].clone();
        for (name, v) in &graphs {
            let g = parse_graph(v, &pointer("/graphs", name))?;
            self.ws.graphs.insert(name.clone(), Arc::new(g));
        }
        let morphisms = self.raw["morphisms"].clone();
        for (name, v) in &morphisms {
            let path = pointer("/morphisms", name);
            let obj = as_object(v, &path)?;
            let dom = as_str(field(obj, "dom", &path)?, &pointer(&path, "dom"))?.to_owned();
            let cod = as_str(field(obj, "cod", &path)?, &pointer(&path, "cod"))?.to_owned();
            let map = self.morphism(v, &path, None, None)?;
            self.ws.morphisms.insert(name.clone(), NamedMorphism { dom, cod, map });
        }
        let rules = self.raw["rules"].clone();
        for (name, v) in &rules {
            let rule = self.rule(name, v, &pointer("/rules", name))?;
            self.ws.rules.insert(name.clone(), Arc::new(rule));
        }
        let systems = self.raw["systems"].clone();
        for (name, v) in &systems {
            let sys = self.system(name, v, &pointer("/systems", name))?;
            self.ws.systems.insert(name.clone(), sys);
        }
        Ok(())
    }

    fn graph_ref(&self, v: &Value, path: &str) -> Result<Arc<Graph>, IoError> {
        match v {
            Value::String(name) => self
                .ws
                .graphs
                .get(name)
                .cloned()
                .ok_or_else(|| schema(path, &format!("unknown graph `{name}`"))),
            _ => Ok(Arc::new(parse_graph(v, path)?)),
        }
    }

    /// A morphism given by name or inline, checked against the expected ends.
    fn morphism(
        &self,
        v: &Value,
        path: &str,
        dom: Option<&Arc<Graph>>,
        cod: Option<&Arc<Graph>>,
    ) -> Result<GraphMorphism, IoError> {
        let m = match v {
            Value::String(name) => self
                .ws
                .morphisms
                .get(name)
                .map(|n| n.map.clone())
                .ok_or_else(|| schema(path, &format!("unknown morphism `{name}`")))?,
            _ => {
                let obj = as_object(v, path)?;
                let end = |key: &str, given: Option<&Arc<Graph>>| -> Result<Arc<Graph>, IoError> {
                    match (obj.get(key), given) {
                        (Some(g), _) => self.graph_ref(g, &pointer(path, key)),
                        (None, Some(g)) => Ok(g.clone()),
                        (None, None) => Err(schema(path, &format!("missing field `{key}`"))),
                    }
                };
                let (d, c) = (end("dom", dom)?, end("cod", cod)?);
                let vmap = string_map(obj.get("vmap"), &pointer(path, "vmap"))?;
                let emap = string_map(obj.get("emap"), &pointer(path, "emap"))?;
                GraphMorphism::from_named(d, c, &vmap, &emap).map_err(|e| validation(path, &e.to_string()))?
            }
        };
        if dom.is_some_and(|d| d != m.dom()) {
            return Err(validation(path, "domain does not match its position"));
        }
        if cod.is_some_and(|c| c != m.cod()) {
            return Err(validation(path, "codomain does not match its position"));
        }
        Ok(m)
    }

    fn rule(&self, name: &str, v: &Value, path: &str) -> Result<Rule, IoError> {
        let obj = as_object(v, path)?;
        let kind = parse_kind(field(obj, "kind", path)?, &pointer(path, "kind"))?;
        let graph = |key: &str| self.graph_ref(field(obj, key, path)?, &pointer(path, key));
        let (l_g, k_g, r_g) = (graph("L")?, graph("K")?, graph("R")?);
        let arrow = |key: &str, d: &Arc<Graph>, c: &Arc<Graph>| {
            self.morphism(field(obj, key, path)?, &pointer(path, key), Some(d), Some(c))
        };
        let l = arrow("l", &k_g, &l_g)?;
        let r = arrow("r", &k_g, &r_g)?;
        let typing = if kind == RuleKind::Pbpo {
            let (tl, tk, tr) = (graph("T_L")?, graph("T_K")?, graph("T_R")?);
            Some(PbpoTyping {
                u: arrow("u", &tk, &tl)?,
                v: arrow("v", &tk, &tr)?,
                t_l: arrow("t_L", &l_g, &tl)?,
                t_k: arrow("t_K", &k_g, &tk)?,
                t_r: arrow("t_R", &r_g, &tr)?,
            })
        } else {
            None
        };
        Rule::new(name, kind, l, r, typing).map_err(|e| validation(path, &e.to_string()))
    }

    fn system(&self, name: &str, v: &Value, path: &str) -> Result<RuleSystem, IoError> {
        let obj = as_object(v, path)?;
        let rules_path = pointer(path, "rules");
        let mut rules = Vec::new();
        for (i, r) in as_array(field(obj, "rules", path)?, &rules_path)?.iter().enumerate() {
            let p = pointer(&rules_path, &i.to_string());
            let rn = as_str(r, &p)?;
            let rule = self
                .ws
                .rules
                .get(rn)
                .ok_or_else(|| schema(&p, &format!("unknown rule `{rn}`")))?;
            rules.push(rule.clone());
        }
        let kind = match obj.get("kind") {
            Some(k) => parse_kind(k, &pointer(path, "kind"))?,
            None => rules
                .first()
                .map(|r| r.kind)
                .ok_or_else(|| schema(path, "a system without rules needs a `kind`"))?,
        };
        let mut gens = Vec::new();
        let mpath = pointer(path, "morphisms");
        let list = match obj.get("morphisms") {
            Some(m) => as_array(m, &mpath)?.clone(),
            None => Vec::new(),
        };
        for (i, m) in list.iter().enumerate() {
            let p = pointer(&mpath, &i.to_string());
            let s = self.rule_morphism(m, &p)?;
            let violations = check_rule_morphism(&s);
            if !violations.is_empty() {
                let text = violations.iter().map(ToString::to_string).collect::<Vec<_>>().join("; ");
                return Err(validation(&p, &format!("rule morphism `{}` is invalid: {text}", s.name)));
            }
            gens.push(s);
        }
        close_rule_system(name, kind, rules, gens).map_err(|e| validation(path, &e.to_string()))
    }

    fn rule_morphism(&self, v: &Value, path: &str) -> Result<RuleMorphism, IoError> {
        let obj = as_object(v, path)?;
        let text = |key: &str| -> Result<&str, IoError> { as_str(field(obj, key, path)?, &pointer(path, key)) };
        let name = text("name")?.to_owned();
        let rule = |key: &str| -> Result<Arc<Rule>, IoError> {
            let n = text(key)?;
            self.ws
                .rules
                .get(n)
                .cloned()
                .ok_or_else(|| schema(&pointer(path, key), &format!("unknown rule `{n}`")))
        };
        let (src, dst) = (rule("src")?, rule("dst")?);
        let comp = |key: &str, d: &Arc<Graph>, c: &Arc<Graph>| {
            self.morphism(field(obj, key, path)?, &pointer(path, key), Some(d), Some(c))
        };
        let s1 = comp("s1", src.lhs(), dst.lhs())?;
        let s2 = comp("s2", src.interface(), dst.interface())?;
        let s3 = comp("s3", src.rhs(), dst.rhs())?;
        let (s4, s5) = match (&src.typing, &dst.typing) {
            (Some(a), Some(b)) => (
                Some(comp("s4", b.t_lhs(), a.t_lhs())?),
                Some(comp("s5", b.t_interface(), a.t_interface())?),
            ),
            _ => (None, None),
        };
        Ok(RuleMorphism {
            name,
            src,
            dst,
            s1,
            s2,
            s3,
            s4,
            s5,
        })
    }
}

fn parse_graph(v: &Value, path: &str) -> Result<Graph, IoError> {
    let obj = as_object(v, path)?;
    let vpath = pointer(path, "vertices");
    let mut vertices = Vec::new();
    if let Some(vs) = obj.get("vertices") {
        for (i, x) in as_array(vs, &vpath)?.iter().enumerate() {
            vertices.push(as_str(x, &pointer(&vpath, &i.to_string()))?.to_owned());
        }
    }
    let epath = pointer(path, "edges");
    let mut edges = Vec::new();
    if let Some(es) = obj.get("edges") {
        for (i, e) in as_array(es, &epath)?.iter().enumerate() {
            let p = pointer(&epath, &i.to_string());
            let eo = as_object(e, &p)?;
            let get = |k: &str| -> Result<String, IoError> { Ok(as_str(field(eo, k, &p)?, &pointer(&p, k))?.to_owned()) };
            edges.push((get("id")?, get("src")?, get("tgt")?));
        }
    }
    Graph::new(vertices, edges).map_err(|e| validation(path, &e.to_string()))
}

fn string_map(v: Option<&Value>, path: &str) -> Result<BTreeMap<String, String>, IoError> {
    let Some(v) = v else {
        return Ok(BTreeMap::new());
    };
    as_object(v, path)?
        .iter()
        .map(|(k, x)| Ok((k.clone(), as_str(x, &pointer(path, k))?.to_owned())))
        .collect()
}

fn pointer(base: &str, key: &str) -> String {
    format!("{base}/{}", key.replace('~', "~0").replace('/', "~1"))
}

fn schema(path: &str, message: &str) -> IoError {
    IoError::Schema {
        path: if path.is_empty() { "/".into() } else { path.into() },
        message: message.into(),
    }
}

fn validation(path: &str, message: &str) -> IoError {
    IoError::Validation {
        path: path.into(),
        message: message.into(),
    }
}

fn field<'v>(obj: &'v Map<String, Value>, key: &str, path: &str) -> Result<&'v Value, IoError> {
    obj.get(key).ok_or_else(|| schema(path, &format!("missing field `{key}`")))
}

fn as_object<'v>(v: &'v Value, path: &str) -> Result<&'v Map<String, Value>, IoError> {
    v.as_object().ok_or_else(|| schema(path, "expected an object"))
}

fn as_array<'v>(v: &'v Value, path: &str) -> Result<&'v Vec<Value>, IoError> {
    v.as_array().ok_or_else(|| schema(path, "expected an array"))
}

fn as_str<'v>(v: &'v Value, path: &str) -> Result<&'v str, IoError> {
    v.as_str().ok_or_else(|| schema(path, "expected a string"))
}

pub fn graph_to_json(g: &Graph) -> Value {
    json!({
        "vertices": g.vertex_ids().collect::<Vec<_>>(),
        "edges": g.edges().map(|e| json!({"id": e.id, "src": e.src, "tgt": e.tgt})).collect::<Vec<_>>(),
    })
}

/// `{vmap, emap}`; the ends are left to the context.
pub fn maps_to_json(m: &GraphMorphism) -> Value {
    json!({ "vmap": m.named_vmap(), "emap": m.named_emap() })
}

/// A morphism with inline ends.
pub fn morphism_to_json(m: &GraphMorphism) -> Value {
    json!({
        "dom": graph_to_json(m.dom()),
        "cod": graph_to_json(m.cod()),
        "vmap": m.named_vmap(),
        "emap": m.named_emap(),
    })
}

fn rule_to_json(r: &Rule) -> Value {
    let mut o = Map::new();
    o.insert("kind".into(), json!(r.kind.as_str()));
    o.insert("L".into(), graph_to_json(r.lhs()));
    o.insert("K".into(), graph_to_json(r.interface()));
    o.insert("R".into(), graph_to_json(r.rhs()));
    o.insert("l".into(), maps_to_json(&r.l));
    o.insert("r".into(), maps_to_json(&r.r));
    if let Some(t) = &r.typing {
        o.insert("T_L".into(), graph_to_json(t.t_lhs()));
        o.insert("T_K".into(), graph_to_json(t.t_interface()));
        o.insert("T_R".into(), graph_to_json(t.t_rhs()));
        o.insert("u".into(), maps_to_json(&t.u));
        o.insert("v".into(), maps_to_json(&t.v));
        o.insert("t_L".into(), maps_to_json(&t.t_l));
        o.insert("t_K".into(), maps_to_json(&t.t_k));
        o.insert("t_R".into(), maps_to_json(&t.t_r));
    }
    Value::Object(o)
}

fn rule_morphism_to_json(s: &RuleMorphism) -> Value {
    let mut o = Map::new();
    o.insert("name".into(), json!(s.name));
    o.insert("src".into(), json!(s.src.name));
    o.insert("dst".into(), json!(s.dst.name));
    o.insert("s1".into(), maps_to_json(&s.s1));
    o.insert("s2".into(), maps_to_json(&s.s2));
    o.insert("s3".into(), maps_to_json(&s.s3));
    if let (Some(s4), Some(s5)) = (&s.s4, &s.s5) {
        o.insert("s4".into(), maps_to_json(s4));
        o.insert("s5".into(), maps_to_json(s5));
    }
    Value::Object(o)
}

/// A document that parses back to an equal workspace.
///
/// Rules are written with inline graphs and maps; systems list all their
/// non-identity morphisms, which closes to the same system again.
pub fn emit(ws: &Workspace) -> Value {
    let graphs: Map<String, Value> = ws.graphs.iter().map(|(n, g)| (n.clone(), graph_to_json(g))).collect();
    let morphisms: Map<String, Value> = ws
        .morphisms
        .iter()
        .map(|(n, m)| {
            let mut v = maps_to_json(&m.map);
            v["dom"] = json!(m.dom);
            v["cod"] = json!(m.cod);
            (n.clone(), v)
        })
        .collect();
    let rules: Map<String, Value> = ws.rules.iter().map(|(n, r)| (n.clone(), rule_to_json(r))).collect();
    let systems: Map<String, Value> = ws
        .systems
        .iter()
        .map(|(n, s)| {
            let v = json!({
                "kind": s.kind.as_str(),
                "rules": s.rules().iter().map(|r| r.name.clone()).collect::<Vec<_>>(),
                "morphisms": s.non_identities().map(rule_morphism_to_json).collect::<Vec<_>>(),
            });
            (n.clone(), v)
        })
        .collect();
    let mut doc = json!({
        "graphs": graphs,
        "morphisms": morphisms,
        "rules": rules,
        "systems": systems,
    });
    if let Some(env) = &ws.environment {
        doc["environment"] = json!(env.kinds().map(|k| k.as_str()).collect::<Vec<_>>());
    }
    doc
}

pub fn transformation_to_json(t: &DirectTransformation) -> Value {
    let mut o = json!({
        "rule": t.rule.name,
        "kind": t.kind().as_str(),
        "G": graph_to_json(t.input()),
        "D": graph_to_json(t.context()),
        "H": graph_to_json(t.result()),
        "m": maps_to_json(&t.m),
        "k": maps_to_json(&t.k),
        "f": maps_to_json(&t.f),
        "n": maps_to_json(&t.n),
        "g": maps_to_json(&t.g),
    });
    if let Some(c) = &t.typing {
        o["t_G"] = maps_to_json(&c.t_g);
        o["t_D"] = maps_to_json(&c.t_d);
        o["t_H"] = maps_to_json(&c.t_h);
    }
    o
}

pub fn delta_to_json(delta: &DeltaCategory) -> Value {
    json!({
        "objects": delta.objects().iter().map(|o| {
            let mut v = transformation_to_json(&o.transformation);
            v["name"] = json!(o.name);
            v
        }).collect::<Vec<_>>(),
        "morphisms": delta.morphisms().iter().map(|m| json!({
            "name": m.name,
            "src": delta.objects()[m.src].name,
            "dst": delta.objects()[m.dst].name,
            "rule_morphism": m.mu.sigma.name,
            "d": maps_to_json(&m.mu.d),
        })).collect::<Vec<_>>(),
        "failures": delta.failures().iter().map(|f| json!({
            "morphism": f.morphism, "target": f.target, "reason": f.reason,
        })).collect::<Vec<_>>(),
        "skipped": delta.skipped().iter().map(|s| json!({
            "rule": s.rule, "match": maps_to_json(&s.m), "reason": s.reason,
        })).collect::<Vec<_>>(),
    })
}

pub fn gct_result_to_json(delta: &DeltaCategory, r: &GctResult) -> Value {
    let names: Vec<&str> = delta.objects().iter().map(|o| o.name.as_str()).collect();
    json!({
        "G": graph_to_json(delta.input()),
        "C": graph_to_json(r.context_graph()),
        "H": graph_to_json(r.result()),
        "f": maps_to_json(r.f()),
        "h": maps_to_json(r.h()),
        "gamma": names.iter().zip(&r.context.legs).map(|(n, l)| (n.to_string(), maps_to_json(l))).collect::<Map<_, _>>(),
        "cones": names.iter().enumerate().map(|(a, n)| {
            let row: Map<String, Value> = names.iter().enumerate()
                .map(|(b, m)| (m.to_string(), maps_to_json(r.cones.leg(a, b)))).collect();
            (n.to_string(), Value::Object(row))
        }).collect::<Map<_, _>>(),
        "c": names.iter().zip(&r.c).map(|(n, c)| (n.to_string(), maps_to_json(c))).collect::<Map<_, _>>(),
        "H_local": names.iter().zip(&r.rhs).map(|(n, x)| (n.to_string(), json!({
            "H": graph_to_json(&x.object), "h": maps_to_json(&x.h), "n": maps_to_json(&x.n),
        }))).collect::<Map<_, _>>(),
        "h_mu": delta.morphisms().iter().zip(&r.h_mu).map(|(m, h)| (m.name.clone(), maps_to_json(h))).collect::<Map<_, _>>(),
    })
}

/// Graphviz rendering with vertex ids as node names and edge ids as labels.
pub fn to_dot(name: &str, g: &Graph) -> String {
    let q = |s: &str| format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""));
    let mut out = format!("digraph {} {{\n", q(name));
    for v in g.vertex_ids() {
        let _ = writeln!(out, "  {};", q(v));
    }
    for e in g.edges() {
        let _ = writeln!(out, "  {} -> {} [label={}];", q(e.src), q(e.tgt), q(e.id));
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const RUNNING: &str = r#"{
      "graphs": {
        "G": {"vertices": ["a", "b"], "edges": [{"id": "e1", "src": "a", "tgt": "b"}, {"id": "e2", "src": "a", "tgt": "b"}]},
        "two": {"vertices": ["l", "r"]},
        "arrow": {"vertices": ["l", "r"], "edges": [{"id": "e", "src": "l", "tgt": "r"}]},
        "three": {"vertices": ["l", "m", "r"]},
        "path": {"vertices": ["l", "m", "r"], "edges": [{"id": "a", "src": "l", "tgt": "m"}, {"id": "b", "src": "m", "tgt": "r"}]}
      },
      "morphisms": {
        "id2": {"dom": "two", "cod": "two", "vmap": {"l": "l", "r": "r"}}
      },
      "rules": {
        "rho": {"kind": "DPOm", "L": "two", "K": "two", "R": "three", "l": "id2", "r": {"vmap": {"l": "l", "r": "r"}}},
        "rho'": {"kind": "DPOm", "L": "arrow", "K": "two", "R": "path",
                 "l": {"vmap": {"l": "l", "r": "r"}}, "r": {"vmap": {"l": "l", "r": "r"}}}
      },
      "systems": {
        "S": {"rules": ["rho", "rho'"], "morphisms": [
          {"name": "s+", "src": "rho", "dst": "rho'", "s1": {"vmap": {"l": "l", "r": "r"}}, "s2": "id2",
           "s3": {"vmap": {"l": "l", "m": "m", "r": "r"}}},
          {"name": "s-", "src": "rho", "dst": "rho'", "s1": {"vmap": {"l": "r", "r": "l"}},
           "s2": {"vmap": {"l": "r", "r": "l"}}, "s3": {"vmap": {"l": "r", "m": "m", "r": "l"}}}
        ]}
      }
    }"#;

    #[test]
    fn running_example_document() {
        let ws = parse_str(RUNNING).unwrap();
        assert_eq!(ws.graphs.len(), 5);
        assert_eq!(ws.rules.len(), 2);
        assert_eq!(ws.systems.len(), 1);
        assert_eq!(ws.systems["S"].morphisms().len(), 4);
    }

    #[test]
    fn emitted_documents_parse_back_equal() {
        let ws = parse_str(RUNNING).unwrap();
        let again = parse_values(&[emit(&ws)]).unwrap();
        assert_eq!(again, ws);
    }

    #[test]
    fn empty_document() {
        assert_eq!(parse_str("{}").unwrap(), Workspace::default());
    }

    #[test]
    fn broken_edge_map_is_reported_with_its_path() {
        let doc = r#"{
          "graphs": {
            "A": {"vertices": ["x", "y"], "edges": [{"id": "e", "src": "x", "tgt": "y"}]},
            "B": {"vertices": ["p", "q"], "edges": [{"id": "d", "src": "q", "tgt": "p"}]}
          },
          "morphisms": {"bad": {"dom": "A", "cod": "B", "vmap": {"x": "p", "y": "q"}, "emap": {"e": "d"}}}
        }"#;
        let err = parse_str(doc).unwrap_err();
        assert_eq!(err.path(), Some("/morphisms/bad"));
        assert!(err.to_string().contains("edge `e`"), "{err}");
    }

    #[test]
    fn schema_errors_point_at_the_value() {
        let err = parse_str(r#"{"graphs": {"G": {"vertices": [1]}}}"#).unwrap_err();
        assert_eq!(err.path(), Some("/graphs/G/vertices/0"));
        let err = parse_str(r#"{"rules": {"r": {"kind": "XPO"}}}"#).unwrap_err();
        assert_eq!(err.path(), Some("/rules/r/kind"));
        let err = parse_str(r#"{"systems": {"S": {"rules": ["nope"]}}}"#).unwrap_err();
        assert_eq!(err.path(), Some("/systems/S/rules/0"));
    }

    #[test]
    fn names_must_be_unique_across_inputs() {
        let a = r#"{"graphs": {"G": {"vertices": ["a"]}}}"#;
        let err = parse_inputs(&[("a", a), ("b", a)]).unwrap_err();
        assert!(matches!(err, IoError::Duplicate { .. }));
    }

    #[test]
    fn inputs_can_refer_to_each_other() {
        let a = r#"{"graphs": {"G": {"vertices": ["a"]}}}"#;
        let b = r#"{"morphisms": {"id": {"dom": "G", "cod": "G", "vmap": {"a": "a"}}}}"#;
        let ws = parse_inputs(&[("a", a), ("b", b)]).unwrap();
        assert!(ws.morphisms["id"].map.is_identity());
    }

    #[test]
    fn dot_output() {
        let g = Graph::new(["a", "b"], [("e", "a", "b")]).unwrap();
        assert_eq!(
            to_dot("G", &g),
            "digraph \"G\" {\n  \"a\";\n  \"b\";\n  \"a\" -> \"b\" [label=\"e\"];\n}\n"
        );
    }
}
