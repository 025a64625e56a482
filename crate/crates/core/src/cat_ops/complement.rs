use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use super::{item_of_edge, item_of_vertex, CatError};
use crate::graph::{FreshIds, Graph, GraphBuilder, Item};
use crate::morphism::{subgraph, GraphMorphism};

/// A complement `K -k-> D -f-> G` of `K -l-> L -m-> G`.
#[derive(Debug, Clone)]
pub struct Complement {
    pub object: Arc<Graph>,
    pub f: GraphMorphism,
    pub k: GraphMorphism,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GluingViolation {
    /// GC1: an item marked for removal is hit more than once by the match.
    Identification { item: Item, preimages: Vec<Item> },
    /// GC2: a vertex marked for removal has an incident edge that is not.
    Dangling { vertex: String, edge: String },
}

impl GluingViolation {
    pub fn clause(&self) -> &'static str {
        match self {
            GluingViolation::Identification { .. } => "GC1",
            GluingViolation::Dangling { .. } => "GC2",
        }
    }
}

impl fmt::Display for GluingViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GluingViolation::Identification { item, preimages } => {
                let pre: Vec<_> = preimages.iter().map(ToString::to_string).collect();
                write!(f, "GC1: {item} is deleted but matched by {}", pre.join(", "))
            }
            GluingViolation::Dangling { vertex, edge } => write!(
                f,
                "GC2: vertex `{vertex}` is deleted but incident edge `{edge}` is not"
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub struct GluingFailure {
    pub violations: Vec<GluingViolation>,
}

impl fmt::Display for GluingFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "gluing condition fails: ")?;
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                write!(f, "; ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

/// Items of `G` marked for removal: hit by `m` from outside the image of `l`.
fn marked(m: &GraphMorphism, l: &GraphMorphism) -> (Vec<bool>, Vec<bool>) {
    let (kept_v, kept_e) = l.image_flags();
    let g = m.cod();
    let mut mv = vec![false; g.vertex_count()];
    let mut me = vec![false; g.edge_count()];
    for (x, &y) in m.vmap().iter().enumerate() {
        if !kept_v[x] {
            mv[y] = true;
        }
    }
    for (x, &y) in m.emap().iter().enumerate() {
        if !kept_e[x] {
            me[y] = true;
        }
    }
    (mv, me)
}

/// Evaluates GC1 and GC2 for the match `m: L -> G` and the left leg `l: K -> L`.
pub fn check_gluing_condition(m: &GraphMorphism, l: &GraphMorphism) -> Vec<GluingViolation> {
    let (mv, me) = marked(m, l);
    let (lg, g) = (m.dom(), m.cod());
    let mut out = Vec::new();
    for y in 0..g.vertex_count() {
        if !mv[y] {
            continue;
        }
        let pre: Vec<_> = (0..lg.vertex_count()).filter(|&x| m.v(x) == y).collect();
        if pre.len() > 1 {
            out.push(GluingViolation::Identification {
                item: item_of_vertex(g, y),
                preimages: pre.iter().map(|&x| item_of_vertex(lg, x)).collect(),
            });
        }
    }
    for y in 0..g.edge_count() {
        if !me[y] {
            continue;
        }
        let pre: Vec<_> = (0..lg.edge_count()).filter(|&x| m.e(x) == y).collect();
        if pre.len() > 1 {
            out.push(GluingViolation::Identification {
                item: item_of_edge(g, y),
                preimages: pre.iter().map(|&x| item_of_edge(lg, x)).collect(),
            });
        }
    }
    for j in 0..g.edge_count() {
        if me[j] {
            continue;
        }
        let mut ends = vec![g.src(j)];
        if g.tgt(j) != g.src(j) {
            ends.push(g.tgt(j));
        }
        for v in ends {
            if mv[v] {
                out.push(GluingViolation::Dangling {
                    vertex: g.vertex(v).to_owned(),
                    edge: g.edge(j).to_owned(),
                });
            }
        }
    }
    out
}

/// The pushout complement of `K -l-> L -m-> G` for monic `l`.
///
/// `D` is the subgraph of `G` of items not marked for removal and `f` its inclusion.
pub fn pushout_complement(m: &GraphMorphism, l: &GraphMorphism) -> Result<Complement, CatError> {
    if l.cod() != m.dom() {
        return Err(CatError::DomainMismatch);
    }
    if !l.is_injective() {
        return Err(CatError::NotMonic("l"));
    }
    let violations = check_gluing_condition(m, l);
    if !violations.is_empty() {
        return Err(GluingFailure { violations }.into());
    }
    let (mv, me) = marked(m, l);
    let keep_v: Vec<bool> = mv.iter().map(|b| !b).collect();
    let keep_e: Vec<bool> = me.iter().map(|b| !b).collect();
    let f = subgraph(m.cod(), &keep_v, &keep_e);
    let d = f.dom().clone();
    // f is an inclusion, so m ∘ l lands in D; look the images up by position
    let mut vback = vec![usize::MAX; m.cod().vertex_count()];
    for (i, &w) in f.vmap().iter().enumerate() {
        vback[w] = i;
    }
    let mut eback = vec![usize::MAX; m.cod().edge_count()];
    for (j, &w) in f.emap().iter().enumerate() {
        eback[w] = j;
    }
    let ml = m.after(l);
    let k = GraphMorphism::from_raw(
        l.dom().clone(),
        d.clone(),
        ml.vmap().iter().map(|&y| vback[y]).collect(),
        ml.emap().iter().map(|&y| eback[y]).collect(),
    );
    Ok(Complement { object: d, f, k })
}

/// The final pullback complement of `K -l-> L -m-> G` for monic `m`.
///
/// Items of `m(L)` are replaced by their preimages in `K`; every edge outside
/// `m(L)` is copied once per choice of endpoint copies. A single copy keeps
/// the identifier from `G`; several copies are named `g.k` after the item of
/// `K` they come from, and edge copies `e.1`, `e.2`, ...
pub fn final_pullback_complement(m: &GraphMorphism, l: &GraphMorphism) -> Result<Complement, CatError> {
    if l.cod() != m.dom() {
        return Err(CatError::DomainMismatch);
    }
    if !m.is_injective() {
        return Err(CatError::NotMonic("m"));
    }
    let (g, k) = (m.cod(), l.dom());
    let ml = m.after(l);
    let (in_v, in_e) = m.image_flags();
    let mut b = GraphBuilder::new();
    let mut vids = FreshIds::new();
    let mut eids = FreshIds::new();
    let mut fv = Vec::new();
    let mut fe = Vec::new();
    // D-vertices over each G-vertex, and the D-vertex of each K-vertex
    let mut lifts: Vec<Vec<usize>> = vec![Vec::new(); g.vertex_count()];
    let mut kv = vec![0; k.vertex_count()];
    for y in 0..g.vertex_count() {
        if !in_v[y] {
            lifts[y].push(b.add_vertex(vids.take(g.vertex(y))));
            fv.push(y);
            continue;
        }
        let fibre: Vec<usize> = (0..k.vertex_count()).filter(|&p| ml.v(p) == y).collect();
        for &p in &fibre {
            let name = if fibre.len() == 1 {
                g.vertex(y).to_owned()
            } else {
                format!("{}.{}", g.vertex(y), k.vertex(p))
            };
            let d = b.add_vertex(vids.take(&name));
            lifts[y].push(d);
            kv[p] = d;
            fv.push(y);
        }
    }
    let mut ke = vec![0; k.edge_count()];
    for y in 0..g.edge_count() {
        if !in_e[y] {
            let (s, t) = (g.src(y), g.tgt(y));
            let copies = lifts[s].len() * lifts[t].len();
            let mut n = 0;
            for &ds in &lifts[s] {
                for &dt in &lifts[t] {
                    n += 1;
                    let name = if copies == 1 {
                        g.edge(y).to_owned()
                    } else {
                        format!("{}.{n}", g.edge(y))
                    };
                    b.add_edge(eids.take(&name), ds, dt);
                    fe.push(y);
                }
            }
            continue;
        }
        let fibre: Vec<usize> = (0..k.edge_count()).filter(|&p| ml.e(p) == y).collect();
        for &p in &fibre {
            let name = if fibre.len() == 1 {
                g.edge(y).to_owned()
            } else {
                format!("{}.{}", g.edge(y), k.edge(p))
            };
            ke[p] = b.add_edge(eids.take(&name), kv[k.src(p)], kv[k.tgt(p)]);
            fe.push(y);
        }
    }
    let built = b.finish()?;
    let d = Arc::new(built.graph);
    let mut f_v = vec![0; fv.len()];
    for (i, &y) in fv.iter().enumerate() {
        f_v[built.vertex_pos[i]] = y;
    }
    let mut f_e = vec![0; fe.len()];
    for (j, &y) in fe.iter().enumerate() {
        f_e[built.edge_pos[j]] = y;
    }
    let f = GraphMorphism::from_raw(d.clone(), g.clone(), f_v, f_e);
    let kk = GraphMorphism::from_raw(
        k.clone(),
        d.clone(),
        kv.iter().map(|&i| built.vertex_pos[i]).collect(),
        ke.iter().map(|&j| built.edge_pos[j]).collect(),
    );
    Ok(Complement { object: d, f, k: kk })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cat_ops::{is_pullback_square, is_pushout_square};

    fn g(vs: &[&str], es: &[(&str, &str, &str)]) -> Arc<Graph> {
        Arc::new(Graph::new(vs.iter().copied(), es.iter().copied()).unwrap())
    }

    fn hom(dom: &Arc<Graph>, cod: &Arc<Graph>, v: &[usize], e: &[usize]) -> GraphMorphism {
        GraphMorphism::new(dom.clone(), cod.clone(), v.to_vec(), e.to_vec()).unwrap()
    }

    fn parallel() -> Arc<Graph> {
        g(&["a", "b"], &[("e1", "a", "b"), ("e2", "a", "b")])
    }

    #[test]
    fn pushout_complement_keeps_unmatched_edge() {
        let l = g(&["s", "t"], &[("e", "s", "t")]);
        let k = g(&["s", "t"], &[]);
        let ll = hom(&k, &l, &[0, 1], &[]);
        let m = hom(&l, &parallel(), &[0, 1], &[0]);
        let pc = pushout_complement(&m, &ll).unwrap();
        assert_eq!(pc.object.vertex_count(), 2);
        assert_eq!(pc.object.edges().map(|e| e.id).collect::<Vec<_>>(), ["e2"]);
        assert!(pc.f.is_injective());
        assert!(is_pushout_square(&ll, &pc.k, &m, &pc.f).unwrap());
    }

    #[test]
    fn nothing_deleted_gives_identity() {
        let k = g(&["l", "r"], &[]);
        let m = hom(&k, &parallel(), &[0, 1], &[]);
        let pc = pushout_complement(&m, &GraphMorphism::identity(&k)).unwrap();
        assert!(pc.f.is_identity());
    }

    #[test]
    fn deleting_both_ends_of_an_edge_dangles() {
        let l = g(&["x", "y"], &[]);
        let k = Arc::new(Graph::empty());
        let arrow = g(&["a", "b"], &[("e", "a", "b")]);
        let m = hom(&l, &arrow, &[0, 1], &[]);
        let err = pushout_complement(&m, &GraphMorphism::initial(&l).with_dom(&k)).unwrap_err();
        let CatError::Gluing(fail) = err else { panic!() };
        assert!(fail.violations.iter().all(|v| v.clause() == "GC2"));
        assert!(fail.violations.contains(&GluingViolation::Dangling {
            vertex: "a".into(),
            edge: "e".into()
        }));
    }

    #[test]
    fn folding_a_deleted_vertex_breaks_identification() {
        let l = g(&["x", "y"], &[]);
        let k = g(&["x"], &[]);
        let one = g(&["p"], &[]);
        let m = hom(&l, &one, &[0, 0], &[]);
        let v = check_gluing_condition(&m, &hom(&k, &l, &[0], &[]));
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].clause(), "GC1");
    }

    #[test]
    fn non_monic_left_leg_is_rejected() {
        let l = g(&["x"], &[]);
        let k = g(&["p", "q"], &[]);
        let m = GraphMorphism::identity(&l);
        assert_eq!(
            pushout_complement(&m, &hom(&k, &l, &[0, 0], &[])).unwrap_err(),
            CatError::NotMonic("l")
        );
    }

    #[test]
    fn fpbc_of_an_iso_is_the_graph() {
        let l = g(&["x"], &[]);
        let arrow = g(&["a", "b"], &[("e", "a", "b")]);
        let m = hom(&l, &arrow, &[0], &[]);
        let c = final_pullback_complement(&m, &GraphMorphism::identity(&l)).unwrap();
        assert_eq!(*c.object, *arrow);
        assert!(c.f.is_iso());
    }

    #[test]
    fn fpbc_copies_outgoing_edge() {
        let l = g(&["x"], &[]);
        let k = g(&["p", "q"], &[]);
        let arrow = g(&["a", "b"], &[("e", "a", "b")]);
        let m = hom(&l, &arrow, &[0], &[]);
        let ll = hom(&k, &l, &[0, 0], &[]);
        let c = final_pullback_complement(&m, &ll).unwrap();
        assert_eq!(c.object.vertex_count(), 3);
        assert_eq!(c.object.edge_count(), 2);
        assert_eq!(c.object.vertex_ids().collect::<Vec<_>>(), ["a.p", "a.q", "b"]);
        assert!(c.f.is_valid() && c.k.is_valid());
        assert!(is_pullback_square(&c.k, &ll, &c.f, &m).unwrap());
    }

    #[test]
    fn fpbc_deletes_dangling_edges() {
        let l = g(&["x"], &[]);
        let k = Arc::new(Graph::empty());
        let arrow = g(&["a", "b"], &[("e", "a", "b")]);
        let m = hom(&l, &arrow, &[0], &[]);
        let c = final_pullback_complement(&m, &GraphMorphism::initial(&l).with_dom(&k)).unwrap();
        assert_eq!(c.object.vertex_ids().collect::<Vec<_>>(), ["b"]);
        assert_eq!(c.object.edge_count(), 0);
    }
}
