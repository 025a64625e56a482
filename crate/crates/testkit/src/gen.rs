//! Random small instances: a rule, a subrule of it, the subsumption between
//! them, and an input graph containing a copy of the larger left-hand side.

use std::sync::Arc;

use gct_core::morphism::subgraph;
use gct_core::{close_rule_system, Graph, GraphMorphism, PbpoTyping, Rule, RuleKind, RuleMorphism, RuleSystem};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::oracle::{after, all_homs};

pub use rand::SeedableRng;
pub type Rng8 = ChaCha8Rng;

pub fn rng(seed: u64) -> Rng8 {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A graph on `prefix0..` with edges `{prefix}e{j}` between the given indices.
pub fn named(prefix: &str, n: usize, edges: &[(usize, usize)]) -> Arc<Graph> {
    let vs: Vec<String> = (0..n).map(|i| format!("{prefix}{i}")).collect();
    let es: Vec<(String, String, String)> = edges
        .iter()
        .enumerate()
        .map(|(j, &(s, t))| (format!("{prefix}e{j}"), vs[s].clone(), vs[t].clone()))
        .collect();
    Arc::new(Graph::new(vs, es).expect("well formed"))
}

pub fn random_graph(rng: &mut Rng8, prefix: &str, vertices: std::ops::RangeInclusive<usize>, max_e: usize) -> Arc<Graph> {
    let n = rng.gen_range(vertices);
    let m = if n == 0 { 0 } else { rng.gen_range(0..=max_e) };
    let edges: Vec<(usize, usize)> = (0..m).map(|_| (rng.gen_range(0..n), rng.gen_range(0..n))).collect();
    named(prefix, n, &edges)
}

/// Matches vertices and edges by identifier.
pub fn by_id(dom: &Arc<Graph>, cod: &Arc<Graph>) -> GraphMorphism {
    let vmap = dom.vertex_ids().map(|v| cod.vertex_index(v).expect("vertex present")).collect();
    let emap = dom.edges().map(|e| cod.edge_index(e.id).expect("edge present")).collect();
    GraphMorphism::from_raw(dom.clone(), cod.clone(), vmap, emap)
}

/// `g` with fresh vertices and edges; edge endpoints index `g`'s vertices
/// followed by the new ones.
fn extend(g: &Arc<Graph>, prefix: &str, extra_v: usize, extra_e: &[(usize, usize)]) -> Arc<Graph> {
    let mut vs: Vec<String> = g.vertex_ids().map(str::to_owned).collect();
    vs.extend((0..extra_v).map(|i| format!("{prefix}{i}")));
    let mut es: Vec<(String, String, String)> = g
        .edges()
        .map(|e| (e.id.to_owned(), e.src.to_owned(), e.tgt.to_owned()))
        .collect();
    es.extend(
        extra_e
            .iter()
            .enumerate()
            .map(|(j, &(s, t))| (format!("{prefix}e{j}"), vs[s].clone(), vs[t].clone())),
    );
    Arc::new(Graph::new(vs, es).expect("well formed"))
}

fn random_extension(rng: &mut Rng8, g: &Arc<Graph>, prefix: &str, max_v: usize, max_e: usize) -> Arc<Graph> {
    let extra_v = rng.gen_range(0..=max_v);
    let n = g.vertex_count() + extra_v;
    let extra_e: Vec<(usize, usize)> = if n == 0 {
        Vec::new()
    } else {
        (0..rng.gen_range(0..=max_e)).map(|_| (rng.gen_range(0..n), rng.gen_range(0..n))).collect()
    };
    extend(g, prefix, extra_v, &extra_e)
}

fn random_subgraph(rng: &mut Rng8, g: &Arc<Graph>, keep: f64) -> GraphMorphism {
    let kv: Vec<bool> = (0..g.vertex_count()).map(|_| rng.gen_bool(keep)).collect();
    let ke: Vec<bool> = (0..g.edge_count())
        .map(|j| kv[g.src(j)] && kv[g.tgt(j)] && rng.gen_bool(keep))
        .collect();
    subgraph(g, &kv, &ke)
}

/// The pairs `(x, p)` with `s(x) = l(p)`, with both projections.
pub fn pair_pullback(s: &GraphMorphism, l: &GraphMorphism) -> (Arc<Graph>, GraphMorphism, GraphMorphism) {
    let (a, b) = (s.dom(), l.dom());
    let mut vp = Vec::new();
    for x in 0..a.vertex_count() {
        for p in 0..b.vertex_count() {
            if s.v(x) == l.v(p) {
                vp.push((x, p));
            }
        }
    }
    let mut ep = Vec::new();
    for x in 0..a.edge_count() {
        for p in 0..b.edge_count() {
            if s.e(x) == l.e(p) {
                ep.push((x, p));
            }
        }
    }
    let vname = |&(x, p): &(usize, usize)| format!("{}.{}", a.vertex(x), b.vertex(p));
    let vs: Vec<String> = vp.iter().map(vname).collect();
    let es: Vec<(String, String, String)> = ep
        .iter()
        .map(|&(x, p)| {
            let src = (a.src(x), b.src(p));
            let tgt = (a.tgt(x), b.tgt(p));
            (format!("{}.{}", a.edge(x), b.edge(p)), vname(&src), vname(&tgt))
        })
        .collect();
    let k = Arc::new(Graph::new(vs, es).expect("pairs form a graph"));
    let idx = |pairs: &[(usize, usize)], name: &dyn Fn(&(usize, usize)) -> String, g: &Graph, vertex: bool| {
        pairs
            .iter()
            .map(|q| {
                let id = name(q);
                if vertex { g.vertex_index(&id) } else { g.edge_index(&id) }.expect("present")
            })
            .collect::<Vec<_>>()
    };
    // Graph::new sorts identifiers, so re-read the positions by name
    let vnames: Vec<usize> = idx(&vp, &vname, &k, true);
    let enames: Vec<usize> = idx(&ep, &|&(x, p)| format!("{}.{}", a.edge(x), b.edge(p)), &k, false);
    let mut pa_v = vec![0; k.vertex_count()];
    let mut pb_v = vec![0; k.vertex_count()];
    for (&(x, p), &i) in vp.iter().zip(&vnames) {
        pa_v[i] = x;
        pb_v[i] = p;
    }
    let mut pa_e = vec![0; k.edge_count()];
    let mut pb_e = vec![0; k.edge_count()];
    for (&(x, p), &i) in ep.iter().zip(&enames) {
        pa_e[i] = x;
        pb_e[i] = p;
    }
    let pa = GraphMorphism::from_raw(k.clone(), a.clone(), pa_v, pa_e);
    let pb = GraphMorphism::from_raw(k.clone(), b.clone(), pb_v, pb_e);
    (k, pa, pb)
}

/// A subsumption `σ: small -> big`, the closed two-rule system, and an input graph.
#[derive(Debug, Clone)]
pub struct Instance {
    pub big: Arc<Rule>,
    pub small: Arc<Rule>,
    pub sigma: RuleMorphism,
    pub system: RuleSystem,
    pub g: Arc<Graph>,
}

impl Instance {
    /// The system with only the larger rule.
    pub fn single(&self) -> RuleSystem {
        close_rule_system("single", self.big.kind, vec![self.big.clone()], Vec::new()).expect("one rule")
    }
}

/// Left-hand side, interface and `l` of the larger rule.
fn big_left(rng: &mut Rng8, kind: RuleKind) -> (Arc<Graph>, Arc<Graph>, GraphMorphism) {
    let lg = if kind == RuleKind::Pbpo {
        random_graph(rng, "x", 1..=2, 2)
    } else {
        random_graph(rng, "x", 1..=3, 3)
    };
    if kind.is_dpo() || kind == RuleKind::Pbpo {
        let l = random_subgraph(rng, &lg, 0.6);
        return (lg, l.dom().clone(), l);
    }
    // SqPO: up to two copies of each vertex, at most three in total
    let mut copies: Vec<Vec<usize>> = Vec::new();
    let mut owner = Vec::new();
    for x in 0..lg.vertex_count() {
        let c = *[0usize, 1, 1, 2].choose(rng).expect("nonempty");
        let c = c.min(3 - owner.len().min(3));
        copies.push((owner.len()..owner.len() + c).collect());
        owner.extend(std::iter::repeat_n(x, c));
    }
    let mut edges = Vec::new();
    let mut over = Vec::new();
    for j in 0..lg.edge_count() {
        for &s in &copies[lg.src(j)] {
            for &t in &copies[lg.tgt(j)] {
                if rng.gen_bool(0.7) {
                    edges.push((s, t));
                    over.push(j);
                }
            }
        }
    }
    let k = named("k", owner.len(), &edges);
    // named() keeps the given order only when ids sort the same way
    let vmap = k.vertex_ids().map(|v| owner[v[1..].parse::<usize>().expect("index")]).collect();
    let emap = k.edges().map(|e| over[e.id[2..].parse::<usize>().expect("index")]).collect();
    let l = GraphMorphism::from_raw(k.clone(), lg.clone(), vmap, emap);
    (lg, k, l)
}

fn pbpo_typing(lg: &Arc<Graph>, l: &GraphMorphism, r: &GraphMorphism) -> PbpoTyping {
    let k = l.dom();
    let star = "*".to_owned();
    let tl_v: Vec<String> = lg.vertex_ids().map(str::to_owned).chain([star.clone()]).collect();
    let tk_v: Vec<String> = k.vertex_ids().map(str::to_owned).chain([star]).collect();
    let wildcard = |vs: &[String]| -> Vec<(String, String, String)> {
        vs.iter()
            .flat_map(|a| vs.iter().map(move |b| (format!("~{a}{b}"), a.clone(), b.clone())))
            .collect()
    };
    let own = |g: &Graph| -> Vec<(String, String, String)> {
        g.edges()
            .map(|e| (e.id.to_owned(), e.src.to_owned(), e.tgt.to_owned()))
            .collect()
    };
    let t_lhs = Arc::new(Graph::new(tl_v.clone(), own(lg).into_iter().chain(wildcard(&tl_v))).expect("type graph"));
    let t_if = Arc::new(Graph::new(tk_v.clone(), own(k).into_iter().chain(wildcard(&tk_v))).expect("type graph"));
    let rg = r.cod();
    let tr_v: Vec<String> = tk_v
        .iter()
        .cloned()
        .chain(rg.vertex_ids().filter(|v| k.vertex_index(v).is_none()).map(str::to_owned))
        .collect();
    let tr_e: Vec<(String, String, String)> = own(&t_if)
        .into_iter()
        .chain(own(rg).into_iter().filter(|(id, _, _)| k.edge_index(id).is_none()))
        .collect();
    let t_rhs = Arc::new(Graph::new(tr_v, tr_e).expect("type graph"));
    PbpoTyping {
        u: by_id(&t_if, &t_lhs),
        v: by_id(&t_if, &t_rhs),
        t_l: by_id(lg, &t_lhs),
        t_k: by_id(k, &t_if),
        t_r: by_id(rg, &t_rhs),
    }
}

/// The larger rule of an instance.
pub fn random_rule(rng: &mut Rng8, kind: RuleKind, name: &str) -> Arc<Rule> {
    loop {
        let (lg, k, l) = big_left(rng, kind);
        if k.vertex_count() > 3 {
            continue;
        }
        let rg = random_extension(rng, &k, "y", 1, 1);
        let r = by_id(&k, &rg);
        let typing = (kind == RuleKind::Pbpo).then(|| pbpo_typing(&lg, &l, &r));
        if let Ok(rule) = Rule::new(name, kind, l, r, typing) {
            return Arc::new(rule);
        }
    }
}

/// A subrule of `big` with its subsumption, if the random choices allow one.
pub fn random_subrule(rng: &mut Rng8, big: &Arc<Rule>, name: &str) -> Option<(Arc<Rule>, RuleMorphism)> {
    let kind = big.kind;
    let lg = if rng.gen_bool(0.7) {
        random_subgraph(rng, big.lhs(), 0.7).dom().clone()
    } else {
        random_graph(rng, "z", 1..=3, 2)
    };
    let homs: Vec<GraphMorphism> = all_homs(&lg, big.lhs())
        .into_iter()
        .filter(|h| !kind.is_mono() || h.is_injective())
        .collect();
    let s1 = homs.choose(rng)?.clone();
    let (k, l, s2) = pair_pullback(&s1, &big.l);
    if k.vertex_count() > 3 {
        return None;
    }
    let base = big.r.cod();
    let (_, r, s3) = if kind == RuleKind::Pbpo || base.vertex_count() == 0 || rng.gen_bool(0.5) {
        (k.clone(), GraphMorphism::identity(&k), after(&big.r, &s2))
    } else {
        let rg = extend(&k, "w", 1, &[]);
        let r = by_id(&k, &rg);
        let mut vmap: Vec<usize> = Vec::with_capacity(rg.vertex_count());
        for v in rg.vertex_ids() {
            vmap.push(match k.vertex_index(v) {
                Some(i) => big.r.v(s2.v(i)),
                None => rng.gen_range(0..base.vertex_count()),
            });
        }
        let emap = rg.edges().map(|e| big.r.e(s2.e(k.edge_index(e.id).expect("old edge")))).collect();
        let s3 = GraphMorphism::from_raw(rg.clone(), base.clone(), vmap, emap);
        (rg, r, s3)
    };
    let (typing, s4, s5) = match &big.typing {
        Some(t) => {
            let typing = PbpoTyping {
                u: t.u.clone(),
                v: t.v.clone(),
                t_l: after(&t.t_l, &s1),
                t_k: after(&t.t_k, &s2),
                t_r: after(&t.v, &after(&t.t_k, &s2)),
            };
            (
                Some(typing),
                Some(GraphMorphism::identity(t.t_lhs())),
                Some(GraphMorphism::identity(t.t_interface())),
            )
        }
        None => (None, None, None),
    };
    let small = Arc::new(Rule::new(name, kind, l, r, typing).ok()?);
    let sigma = RuleMorphism {
        name: "sigma".into(),
        src: small.clone(),
        dst: big.clone(),
        s1,
        s2,
        s3,
        s4,
        s5,
    };
    gct_core::check_rule_morphism(&sigma).is_empty().then_some((small, sigma))
}

/// An input graph: a copy of `lhs` plus a few vertices and edges, with at
/// most four vertices in all.
pub fn host_graph(rng: &mut Rng8, lhs: &Graph, max_extra_v: usize, max_extra_e: usize) -> Arc<Graph> {
    let n0 = lhs.vertex_count();
    let extra = rng.gen_range(0..=max_extra_v.min(4usize.saturating_sub(n0)));
    let n = n0 + extra;
    let mut edges: Vec<(usize, usize)> = (0..lhs.edge_count()).map(|j| (lhs.src(j), lhs.tgt(j))).collect();
    if n > 0 {
        for _ in 0..rng.gen_range(0..=max_extra_e) {
            edges.push((rng.gen_range(0..n), rng.gen_range(0..n)));
        }
    }
    named("g", n, &edges)
}

pub fn instance(rng: &mut Rng8, kind: RuleKind) -> Instance {
    loop {
        let big = random_rule(rng, kind, "big");
        let Some((small, sigma)) = random_subrule(rng, &big, "small") else {
            continue;
        };
        // typed matches multiply quickly with unconstrained host items
        let (extra_v, extra_e) = if kind == RuleKind::Pbpo { (1, 1) } else { (4, 3) };
        let g = host_graph(rng, big.lhs(), extra_v, extra_e);
        let system = close_rule_system("pair", kind, vec![small.clone(), big.clone()], vec![sigma.clone()])
            .expect("valid subsumption");
        return Instance {
            big,
            small,
            sigma,
            system,
            g,
        };
    }
}
