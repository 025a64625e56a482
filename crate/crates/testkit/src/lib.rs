//! Test support: brute-force oracles, random instances and an audit that
//! re-checks every construction of a run against the oracles.

pub mod gen;
pub mod oracle;
pub mod suites;

use std::sync::Arc;

use gct_core::cat_ops::Diagram;
use gct_core::environment::TransformationMorphism;
use gct_core::gct::build_context_diagram;
use gct_core::{DeltaCategory, DirectTransformation, Graph, GraphMorphism, GctResult, RuleKind};

use oracle::{after, all_homs, for_each_iso, is_colimit, is_limit, is_pullback, is_pushout};

/// Objects larger than this are not handed to the oracles.
pub const MAX_ORACLE_VERTICES: usize = 5;
pub const MAX_ORACLE_EDGES: usize = 10;

#[derive(Debug, Default, Clone)]
pub struct Audit {
    pub checked: usize,
    pub skipped: usize,
    pub failures: Vec<String>,
}

impl Audit {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn merge(&mut self, other: Audit) {
        self.checked += other.checked;
        self.skipped += other.skipped;
        self.failures.extend(other.failures);
    }

    fn check(&mut self, what: impl FnOnce() -> String, ok: bool) {
        self.checked += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    fn small(&mut self, graphs: &[&Arc<Graph>]) -> bool {
        let fits = graphs
            .iter()
            .all(|g| g.vertex_count() <= MAX_ORACLE_VERTICES && g.edge_count() <= MAX_ORACLE_EDGES);
        if !fits {
            self.skipped += 1;
        }
        fits
    }
}

fn same(a: &GraphMorphism, b: &GraphMorphism) -> bool {
    a.vmap() == b.vmap() && a.emap() == b.emap()
}

/// The two squares of a direct transformation.
pub fn audit_transformation(t: &DirectTransformation) -> Audit {
    let mut a = Audit::default();
    let rule = &t.rule;
    let name = || rule.name.clone();
    if a.small(&[t.input(), t.context(), rule.lhs()]) {
        let ok = match rule.kind {
            k if k.is_dpo() => is_pushout(&rule.l, &t.k, &t.m, &t.f),
            RuleKind::Pbpo => {
                let co = t.typing.as_ref().expect("PBPO transformations carry typing");
                let u = &rule.typing.as_ref().expect("typed rule").u;
                is_pullback(&co.t_g, u, &t.f, &co.t_d)
            }
            _ => is_pullback(&t.m, &t.f, &rule.l, &t.k),
        };
        a.check(|| format!("left square of {}", name()), ok);
    }
    if a.small(&[t.context(), t.result(), rule.rhs()]) {
        a.check(|| format!("right square of {}", name()), is_pushout(&t.k, &rule.r, &t.g, &t.n));
    }
    a
}

/// Every `d'': D' -> D` satisfying the conditions on a transformation morphism.
pub fn d_candidates(mu: &TransformationMorphism) -> Vec<GraphMorphism> {
    let (a, b, s) = (&*mu.src, &*mu.dst, &mu.sigma);
    let k_via = after(&b.k, &s.s2);
    all_homs(b.context(), a.context())
        .into_iter()
        .filter(|d| same(&after(&a.f, d), &b.f) && same(&after(d, &k_via), &a.k))
        .filter(|d| match (&a.typing, &b.typing, &s.s5) {
            (Some(ta), Some(tb), Some(s5)) => same(&after(&ta.t_d, d), &after(s5, &tb.t_d)),
            _ => true,
        })
        .collect()
}

pub fn audit_morphism(mu: &TransformationMorphism) -> Audit {
    let mut a = Audit::default();
    if a.small(&[mu.src.context(), mu.dst.context()]) {
        let found = d_candidates(mu);
        a.check(
            || format!("d of {} -> {}: {} candidates", mu.src.rule.name, mu.dst.rule.name, found.len()),
            found.len() == 1 && same(&found[0], &mu.d),
        );
    }
    a
}

/// Transformations and morphisms of Δ.
pub fn audit_delta(delta: &DeltaCategory) -> Audit {
    let mut a = Audit::default();
    for o in delta.objects() {
        a.merge(audit_transformation(&o.transformation));
    }
    for m in delta.non_identities() {
        a.merge(audit_morphism(&m.mu));
    }
    a
}

/// Every limit, pushout, triangle and colimit of one pipeline result.
pub fn audit_result(delta: &DeltaCategory, res: &GctResult) -> Audit {
    let mut a = Audit::default();
    let c = res.context_graph();
    let ctx = build_context_diagram(delta).extended();
    let mut legs = vec![res.f().clone()];
    legs.extend(res.context.legs.iter().cloned());
    let nodes: Vec<&Arc<Graph>> = ctx.nodes().iter().map(|(_, g)| g).chain([c]).collect();
    if a.small(&nodes) {
        a.check(|| "global context is not a limit".into(), is_limit(&ctx, c, &legs));
    }
    a.check(|| "cone system invalid".into(), res.cones.validate(delta).is_empty());

    for (i, o) in delta.objects().iter().enumerate() {
        let t = &o.transformation;
        let k = t.rule.interface();
        let ci = &res.c[i];
        if a.small(&[k, c]) {
            let chi = after(&t.f, &t.k);
            let row = res.cones.cone(i);
            let found: Vec<GraphMorphism> = all_homs(k, c)
                .into_iter()
                .filter(|x| {
                    same(&after(res.f(), x), &chi)
                        && res.context.legs.iter().zip(row).all(|(g, leg)| same(&after(g, x), leg))
                })
                .collect();
            a.check(
                || format!("c of {}: {} candidates", o.name, found.len()),
                found.len() == 1 && same(&found[0], ci),
            );
        }
        let r = &res.rhs[i];
        if a.small(&[c, &r.object, t.rule.rhs()]) {
            a.check(|| format!("pushout at {}", o.name), is_pushout(ci, &t.rule.r, &r.h, &r.n));
        }
    }

    for (j, m) in delta.morphisms().iter().enumerate() {
        let (h, from, to) = (&res.h_mu[j], &res.rhs[m.src], &res.rhs[m.dst]);
        a.check(
            || format!("h triangle of {}", m.name),
            same(&after(h, &from.h), &to.h) && same(&after(h, &from.n), &after(&to.n, &m.mu.sigma.s3)),
        );
        if m.mu.is_identity() {
            a.check(|| format!("h of identity {}", m.name), h.is_identity());
        }
    }
    for (o, _) in delta.morphisms().iter().enumerate() {
        for (i, _) in delta.morphisms().iter().enumerate() {
            if let Some(k) = delta.compose_index(o, i) {
                let comp = after(&res.h_mu[o], &res.h_mu[i]);
                a.check(|| format!("h not functorial at {k}"), same(&comp, &res.h_mu[k]));
            }
        }
    }

    let mut col = Diagram::new();
    let base = col.add_node("C", c.clone());
    for (o, r) in delta.objects().iter().zip(&res.rhs) {
        let n = col.add_node(o.name.clone(), r.object.clone());
        col.add_arrow(format!("h {}", o.name), base, n, r.h.clone()).expect("h fits");
    }
    for (m, h) in delta.morphisms().iter().zip(&res.h_mu) {
        if !m.mu.is_identity() {
            col.add_arrow(m.name.clone(), m.src + 1, m.dst + 1, h.clone()).expect("h_μ fits");
        }
    }
    let apex = res.result();
    let mut legs = vec![res.h().clone()];
    legs.extend(res.colimit.legs.iter().cloned());
    let nodes: Vec<&Arc<Graph>> = col.nodes().iter().map(|(_, g)| g).chain([apex]).collect();
    if a.small(&nodes) {
        a.check(|| "result is not a colimit".into(), is_colimit(&col, apex, &legs));
    }
    a
}

/// Whether the spans `G <- C -> H` and `G <- C' -> H'` are isomorphic, by
/// exhaustive search.
pub fn spans_iso(a: (&GraphMorphism, &GraphMorphism), b: (&GraphMorphism, &GraphMorphism)) -> bool {
    let ((f1, h1), (f2, h2)) = (a, b);
    if f1.cod() != f2.cod() {
        return false;
    }
    let mut found = false;
    for_each_iso(
        f1.dom(),
        f2.dom(),
        &|x, w| f2.v(w) == f1.v(x),
        &|j, e| f2.e(e) == f1.e(j),
        &mut |pv, pe| {
            // q is forced on the image of h1
            let mut fv = vec![None; h1.cod().vertex_count()];
            let mut fe = vec![None; h1.cod().edge_count()];
            let consistent = (0..pv.len()).all(|x| {
                let want = h2.v(pv[x]);
                fv[h1.v(x)].replace(want).is_none_or(|old| old == want)
            }) && (0..pe.len()).all(|j| {
                let want = h2.e(pe[j]);
                fe[h1.e(j)].replace(want).is_none_or(|old| old == want)
            });
            if consistent {
                for_each_iso(
                    h1.cod(),
                    h2.cod(),
                    &|y, w| fv[y].is_none_or(|t| t == w),
                    &|j, e| fe[j].is_none_or(|t| t == e),
                    &mut |_, _| {
                        found = true;
                        false
                    },
                );
            }
            !found
        },
    );
    found
}

/// Isomorphism of graphs, by exhaustive search.
pub fn graphs_iso(a: &Arc<Graph>, b: &Arc<Graph>) -> bool {
    let mut found = false;
    for_each_iso(a, b, &|_, _| true, &|_, _| true, &mut |_, _| {
        found = true;
        false
    });
    found
}
