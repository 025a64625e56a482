use std::collections::HashMap;
use std::sync::Arc;

use petgraph::unionfind::UnionFind;

use super::square::{assign, classes};
use super::CatError;
use crate::graph::{FreshIds, Graph, GraphBuilder};
use crate::morphism::{relabel, GraphMorphism};

#[derive(Debug, Clone)]
pub struct Arrow {
    pub name: String,
    pub src: usize,
    pub tgt: usize,
    pub map: GraphMorphism,
}

/// A finite diagram of graphs: named nodes and arrows between them.
#[derive(Debug, Clone, Default)]
pub struct Diagram {
    nodes: Vec<(String, Arc<Graph>)>,
    arrows: Vec<Arrow>,
}

impl Diagram {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_node(&mut self, name: impl Into<String>, object: Arc<Graph>) -> usize {
        self.nodes.push((name.into(), object));
        self.nodes.len() - 1
    }

    pub fn add_arrow(
        &mut self,
        name: impl Into<String>,
        src: usize,
        tgt: usize,
        map: GraphMorphism,
    ) -> Result<usize, CatError> {
        let name = name.into();
        let fits = src < self.nodes.len()
            && tgt < self.nodes.len()
            && *map.dom() == self.nodes[src].1
            && *map.cod() == self.nodes[tgt].1;
        if !fits {
            return Err(CatError::ArrowMismatch { arrow: name });
        }
        self.arrows.push(Arrow { name, src, tgt, map });
        Ok(self.arrows.len() - 1)
    }

    pub fn nodes(&self) -> &[(String, Arc<Graph>)] {
        &self.nodes
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn object(&self, i: usize) -> &Arc<Graph> {
        &self.nodes[i].1
    }

    /// Legs `apex -> node` with `arrow ∘ leg(src) = leg(tgt)` for every arrow.
    pub fn is_cone(&self, legs: &[GraphMorphism]) -> bool {
        legs.len() == self.nodes.len()
            && legs.windows(2).all(|w| w[0].dom() == w[1].dom())
            && legs.iter().zip(&self.nodes).all(|(m, (_, g))| m.cod() == g)
            && self
                .arrows
                .iter()
                .all(|a| a.map.after(&legs[a.src]) == legs[a.tgt])
    }

    /// Legs `node -> apex` with `leg(tgt) ∘ arrow = leg(src)` for every arrow.
    pub fn is_cocone(&self, legs: &[GraphMorphism]) -> bool {
        legs.len() == self.nodes.len()
            && legs.windows(2).all(|w| w[0].cod() == w[1].cod())
            && legs.iter().zip(&self.nodes).all(|(m, (_, g))| m.dom() == g)
            && self
                .arrows
                .iter()
                .all(|a| legs[a.tgt].after(&a.map) == legs[a.src])
    }
}

/// A limit cone. Apex items are the consistent tuples of node items.
#[derive(Debug, Clone)]
pub struct Limit {
    pub apex: Arc<Graph>,
    pub legs: Vec<GraphMorphism>,
    vindex: HashMap<Vec<usize>, usize>,
    eindex: HashMap<Vec<usize>, usize>,
}

impl Limit {
    /// The unique morphism `c` with `legs[i] = self.legs[i] ∘ c`, if `legs` is a cone.
    pub fn factor(&self, legs: &[GraphMorphism]) -> Option<GraphMorphism> {
        if legs.len() != self.legs.len() || legs.windows(2).any(|w| w[0].dom() != w[1].dom()) {
            return None;
        }
        if legs.iter().zip(&self.legs).any(|(a, b)| a.cod() != b.cod()) {
            return None;
        }
        let dom = legs.first()?.dom().clone();
        let vmap = (0..dom.vertex_count())
            .map(|x| {
                let t: Vec<usize> = legs.iter().map(|m| m.v(x)).collect();
                self.vindex.get(&t).copied()
            })
            .collect::<Option<Vec<_>>>()?;
        let emap = (0..dom.edge_count())
            .map(|x| {
                let t: Vec<usize> = legs.iter().map(|m| m.e(x)).collect();
                self.eindex.get(&t).copied()
            })
            .collect::<Option<Vec<_>>>()?;
        Some(GraphMorphism::from_raw(dom, self.apex.clone(), vmap, emap))
    }

    /// Factoring for the empty diagram, where there are no legs to read the domain from.
    pub fn factor_from(&self, dom: &Arc<Graph>, legs: &[GraphMorphism]) -> Option<GraphMorphism> {
        if legs.is_empty() {
            if !self.legs.is_empty() {
                return None;
            }
            return Some(GraphMorphism::from_raw(
                dom.clone(),
                self.apex.clone(),
                vec![0; dom.vertex_count()],
                vec![0; dom.edge_count()],
            ));
        }
        if legs[0].dom() != dom {
            return None;
        }
        self.factor(legs)
    }
}

/// Depth-first enumeration of tuples consistent along every arrow.
fn consistent_tuples(
    d: &Diagram,
    count: impl Fn(&Graph) -> usize,
    image: impl Fn(&GraphMorphism, usize) -> usize,
) -> Vec<Vec<usize>> {
    fn go(
        d: &Diagram,
        count: &dyn Fn(&Graph) -> usize,
        image: &dyn Fn(&GraphMorphism, usize) -> usize,
        cur: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        let n = cur.len();
        if n == d.nodes.len() {
            out.push(cur.clone());
            return;
        }
        let forced = d
            .arrows
            .iter()
            .find(|a| a.tgt == n && a.src < n)
            .map(|a| image(&a.map, cur[a.src]));
        let range: Vec<usize> = match forced {
            Some(x) => vec![x],
            None => (0..count(&d.nodes[n].1)).collect(),
        };
        for x in range {
            cur.push(x);
            let ok = d
                .arrows
                .iter()
                .filter(|a| a.src.max(a.tgt) == n)
                .all(|a| image(&a.map, cur[a.src]) == cur[a.tgt]);
            if ok {
                go(d, count, image, cur, out);
            }
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(d, &count, &image, &mut Vec::new(), &mut out);
    out
}

fn tuple_name(parts: impl Iterator<Item = String>, arity: usize) -> String {
    let parts: Vec<String> = parts.collect();
    match arity {
        0 => "*".to_owned(),
        1 => parts.into_iter().next().unwrap_or_default(),
        _ => format!("({})", parts.join(",")),
    }
}

/// Pointwise limit of a finite diagram.
///
/// A single node keeps its identifiers; tuples are named `(x,y,...)`; the
/// limit of the empty diagram is the terminal graph, one vertex with a loop.
pub fn limit(d: &Diagram) -> Limit {
    let vt = consistent_tuples(d, Graph::vertex_count, |m, x| m.v(x));
    let et = consistent_tuples(d, Graph::edge_count, |m, x| m.e(x));
    let arity = d.nodes.len();
    let mut b = GraphBuilder::new();
    let mut ids = FreshIds::new();
    let mut vpos = HashMap::new();
    for t in &vt {
        let name = tuple_name(t.iter().zip(&d.nodes).map(|(&x, (_, g))| g.vertex(x).to_owned()), arity);
        vpos.insert(t.clone(), b.add_vertex(ids.take(&name)));
    }
    let mut ids = FreshIds::new();
    for t in &et {
        let name = tuple_name(t.iter().zip(&d.nodes).map(|(&x, (_, g))| g.edge(x).to_owned()), arity);
        let s: Vec<usize> = t.iter().zip(&d.nodes).map(|(&x, (_, g))| g.src(x)).collect();
        let u: Vec<usize> = t.iter().zip(&d.nodes).map(|(&x, (_, g))| g.tgt(x)).collect();
        b.add_edge(ids.take(&name), vpos[&s], vpos[&u]);
    }
    let built = b.finish().expect("tuple names are made unique");
    let apex = Arc::new(built.graph);
    let mut vindex = HashMap::new();
    let mut vrow = vec![Vec::new(); vt.len()];
    for (k, t) in vt.into_iter().enumerate() {
        vrow[built.vertex_pos[k]] = t.clone();
        vindex.insert(t, built.vertex_pos[k]);
    }
    let mut eindex = HashMap::new();
    let mut erow = vec![Vec::new(); et.len()];
    for (k, t) in et.into_iter().enumerate() {
        erow[built.edge_pos[k]] = t.clone();
        eindex.insert(t, built.edge_pos[k]);
    }
    let legs = d
        .nodes
        .iter()
        .enumerate()
        .map(|(n, (_, g))| {
            GraphMorphism::from_raw(
                apex.clone(),
                g.clone(),
                vrow.iter().map(|t| t[n]).collect(),
                erow.iter().map(|t| t[n]).collect(),
            )
        })
        .collect();
    Limit {
        apex,
        legs,
        vindex,
        eindex,
    }
}

/// A colimit cocone.
#[derive(Debug, Clone)]
pub struct Colimit {
    pub apex: Arc<Graph>,
    pub legs: Vec<GraphMorphism>,
}

impl Colimit {
    /// The unique morphism `u` with `legs[i] = u ∘ self.legs[i]`, if `legs` is a cocone.
    pub fn factor(&self, legs: &[GraphMorphism]) -> Option<GraphMorphism> {
        let cod = legs.first().map(|m| m.cod().clone())?;
        self.factor_into(&cod, legs)
    }

    pub fn factor_into(&self, cod: &Arc<Graph>, legs: &[GraphMorphism]) -> Option<GraphMorphism> {
        if legs.len() != self.legs.len() {
            return None;
        }
        let mut v = vec![None; self.apex.vertex_count()];
        let mut e = vec![None; self.apex.edge_count()];
        for (mine, theirs) in self.legs.iter().zip(legs) {
            if theirs.dom() != mine.dom() || theirs.cod() != cod {
                return None;
            }
            if !assign(&mut v, mine.vmap(), theirs.vmap()) || !assign(&mut e, mine.emap(), theirs.emap()) {
                return None;
            }
        }
        Some(GraphMorphism::from_raw(
            self.apex.clone(),
            cod.clone(),
            v.into_iter().map(|x| x.expect("colimit legs are jointly surjective")).collect(),
            e.into_iter().map(|x| x.expect("colimit legs are jointly surjective")).collect(),
        ))
    }
}

/// Pointwise colimit: disjoint union modulo the arrows.
///
/// Every class is named after its first member in node order.
pub fn colimit(d: &Diagram) -> Colimit {
    let mut voff = Vec::new();
    let mut eoff = Vec::new();
    let (mut nv, mut ne) = (0, 0);
    for (_, g) in &d.nodes {
        voff.push(nv);
        eoff.push(ne);
        nv += g.vertex_count();
        ne += g.edge_count();
    }
    let mut vuf = UnionFind::<usize>::new(nv);
    let mut euf = UnionFind::<usize>::new(ne);
    for a in &d.arrows {
        for (x, &y) in a.map.vmap().iter().enumerate() {
            vuf.union(voff[a.src] + x, voff[a.tgt] + y);
        }
        for (x, &y) in a.map.emap().iter().enumerate() {
            euf.union(eoff[a.src] + x, eoff[a.tgt] + y);
        }
    }
    let locate = |off: &[usize], k: usize| {
        let n = off.partition_point(|&o| o <= k) - 1;
        (n, k - off[n])
    };
    // nodes without items share offsets; partition_point picks the last, which owns the item
    let vclass = classes(&mut vuf, nv);
    let eclass = classes(&mut euf, ne);
    let mut b = GraphBuilder::new();
    let mut ids = FreshIds::new();
    for &rep in &vclass.reps {
        let (n, x) = locate(&voff, rep);
        b.add_vertex(ids.take(d.nodes[n].1.vertex(x)));
    }
    let mut ids = FreshIds::new();
    for &rep in &eclass.reps {
        let (n, x) = locate(&eoff, rep);
        let g = &d.nodes[n].1;
        b.add_edge(
            ids.take(g.edge(x)),
            vclass.of[voff[n] + g.src(x)],
            vclass.of[voff[n] + g.tgt(x)],
        );
    }
    let built = b.finish().expect("class names are made unique");
    let apex = Arc::new(built.graph);
    let legs = d
        .nodes
        .iter()
        .enumerate()
        .map(|(n, (_, g))| {
            GraphMorphism::from_raw(
                g.clone(),
                apex.clone(),
                (0..g.vertex_count())
                    .map(|x| built.vertex_pos[vclass.of[voff[n] + x]])
                    .collect(),
                (0..g.edge_count())
                    .map(|x| built.edge_pos[eclass.of[eoff[n] + x]])
                    .collect(),
            )
        })
        .collect();
    Colimit { apex, legs }
}

/// A diagram in the slice over `base`: objects are morphisms into `base`.
#[derive(Debug, Clone)]
pub struct SliceDiagram {
    base: Arc<Graph>,
    objects: Vec<(String, GraphMorphism)>,
    arrows: Vec<Arrow>,
}

impl SliceDiagram {
    pub fn new(base: Arc<Graph>) -> Self {
        Self {
            base,
            objects: Vec::new(),
            arrows: Vec::new(),
        }
    }

    pub fn base(&self) -> &Arc<Graph> {
        &self.base
    }

    pub fn objects(&self) -> &[(String, GraphMorphism)] {
        &self.objects
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn add_object(&mut self, name: impl Into<String>, over: GraphMorphism) -> Result<usize, CatError> {
        let name = name.into();
        if *over.cod() != self.base {
            return Err(CatError::BaseMismatch(name));
        }
        self.objects.push((name, over));
        Ok(self.objects.len() - 1)
    }

    /// Adds `map: src -> tgt`, which must commute over the base.
    pub fn add_arrow(
        &mut self,
        name: impl Into<String>,
        src: usize,
        tgt: usize,
        map: GraphMorphism,
    ) -> Result<usize, CatError> {
        let name = name.into();
        let (Some((_, fs)), Some((_, ft))) = (self.objects.get(src), self.objects.get(tgt)) else {
            return Err(CatError::ArrowMismatch { arrow: name });
        };
        if map.dom() != fs.dom() || map.cod() != ft.dom() {
            return Err(CatError::ArrowMismatch { arrow: name });
        }
        if ft.after(&map) != *fs {
            return Err(CatError::NonCommuting);
        }
        self.arrows.push(Arrow { name, src, tgt, map });
        Ok(self.arrows.len() - 1)
    }

    /// The underlying diagram of graphs, with the base as node 0.
    pub fn extended(&self) -> Diagram {
        let mut d = Diagram::new();
        d.add_node("base", self.base.clone());
        for (name, f) in &self.objects {
            d.add_node(name.clone(), f.dom().clone());
        }
        for (i, (name, f)) in self.objects.iter().enumerate() {
            d.add_arrow(format!("over {name}"), i + 1, 0, f.clone())
                .expect("structure maps fit");
        }
        for a in &self.arrows {
            d.add_arrow(a.name.clone(), a.src + 1, a.tgt + 1, a.map.clone())
                .expect("arrows fit");
        }
        d
    }
}

/// A limit in the slice over `base`.
#[derive(Debug, Clone)]
pub struct SliceLimit {
    /// The limit object, as its morphism to the base.
    pub apex: GraphMorphism,
    pub legs: Vec<GraphMorphism>,
    inner: Limit,
    rename: GraphMorphism,
}

impl SliceLimit {
    pub fn object(&self) -> &Arc<Graph> {
        self.apex.dom()
    }

    /// The mediating morphism from a cone with vertex `over` and the given legs.
    pub fn factor(&self, over: &GraphMorphism, legs: &[GraphMorphism]) -> Option<GraphMorphism> {
        let mut all = vec![over.clone()];
        all.extend_from_slice(legs);
        Some(self.rename.after(&self.inner.factor(&all)?))
    }
}

/// Limit of a slice diagram, computed in graphs with the base adjoined.
///
/// When the limit embeds into the base its items take the base identifiers.
/// The empty diagram gives the identity on the base.
pub fn slice_limit(d: &SliceDiagram) -> SliceLimit {
    let inner = limit(&d.extended());
    let to_base = &inner.legs[0];
    let rename = if to_base.is_injective() {
        let vn: Vec<String> = to_base.vertex_pairs().map(|(_, b)| b.to_owned()).collect();
        let en: Vec<String> = to_base.edge_pairs().map(|(_, b)| b.to_owned()).collect();
        relabel(&inner.apex, &vn, &en).expect("base ids are unique").1
    } else {
        GraphMorphism::identity(&inner.apex)
    };
    let back = rename.inverse().expect("renaming is invertible");
    let apex = to_base.after(&back);
    let legs = inner.legs[1..].iter().map(|l| l.after(&back)).collect();
    SliceLimit {
        apex,
        legs,
        inner,
        rename,
    }
}

/// A diagram in the coslice under `base`: objects are morphisms out of `base`.
#[derive(Debug, Clone)]
pub struct CosliceDiagram {
    base: Arc<Graph>,
    objects: Vec<(String, GraphMorphism)>,
    arrows: Vec<Arrow>,
}

impl CosliceDiagram {
    pub fn new(base: Arc<Graph>) -> Self {
        Self {
            base,
            objects: Vec::new(),
            arrows: Vec::new(),
        }
    }

    pub fn base(&self) -> &Arc<Graph> {
        &self.base
    }

    pub fn objects(&self) -> &[(String, GraphMorphism)] {
        &self.objects
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn add_object(&mut self, name: impl Into<String>, under: GraphMorphism) -> Result<usize, CatError> {
        let name = name.into();
        if *under.dom() != self.base {
            return Err(CatError::BaseMismatch(name));
        }
        self.objects.push((name, under));
        Ok(self.objects.len() - 1)
    }

    /// Adds `map: src -> tgt`, which must commute under the base.
    pub fn add_arrow(
        &mut self,
        name: impl Into<String>,
        src: usize,
        tgt: usize,
        map: GraphMorphism,
    ) -> Result<usize, CatError> {
        let name = name.into();
        let (Some((_, hs)), Some((_, ht))) = (self.objects.get(src), self.objects.get(tgt)) else {
            return Err(CatError::ArrowMismatch { arrow: name });
        };
        if map.dom() != hs.cod() || map.cod() != ht.cod() {
            return Err(CatError::ArrowMismatch { arrow: name });
        }
        if map.after(hs) != *ht {
            return Err(CatError::NonCommuting);
        }
        self.arrows.push(Arrow { name, src, tgt, map });
        Ok(self.arrows.len() - 1)
    }

    /// The underlying diagram of graphs, with the base as node 0.
    pub fn extended(&self) -> Diagram {
        let mut d = Diagram::new();
        d.add_node("base", self.base.clone());
        for (name, h) in &self.objects {
            d.add_node(name.clone(), h.cod().clone());
        }
        for (i, (name, h)) in self.objects.iter().enumerate() {
            d.add_arrow(format!("under {name}"), 0, i + 1, h.clone())
                .expect("structure maps fit");
        }
        for a in &self.arrows {
            d.add_arrow(a.name.clone(), a.src + 1, a.tgt + 1, a.map.clone())
                .expect("arrows fit");
        }
        d
    }
}

/// A colimit in the coslice under `base`.
#[derive(Debug, Clone)]
pub struct CosliceColimit {
    /// The colimit object, as the morphism from the base.
    pub apex: GraphMorphism,
    pub legs: Vec<GraphMorphism>,
    inner: Colimit,
}

impl CosliceColimit {
    pub fn object(&self) -> &Arc<Graph> {
        self.apex.cod()
    }

    pub fn factor(&self, under: &GraphMorphism, legs: &[GraphMorphism]) -> Option<GraphMorphism> {
        let mut all = vec![under.clone()];
        all.extend_from_slice(legs);
        self.inner.factor(&all)
    }
}

/// Colimit of a coslice diagram; base items keep their identifiers.
pub fn coslice_colimit(d: &CosliceDiagram) -> CosliceColimit {
    let inner = colimit(&d.extended());
    CosliceColimit {
        apex: inner.legs[0].clone(),
        legs: inner.legs[1..].to_vec(),
        inner,
    }
}
