//! Graph morphisms: a vertex map and an edge map preserving sources and targets.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::graph::{Graph, GraphBuilder, GraphError, Item};

/// A structure-preserving map `dom -> cod`, stored as index tables.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GraphMorphism {
    dom: Arc<Graph>,
    cod: Arc<Graph>,
    vmap: Vec<usize>,
    emap: Vec<usize>,
}

/// One reason a candidate morphism is not a graph homomorphism.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Violation {
    #[error("vertex map has {found} entries, domain has {expected} vertices")]
    VertexMapLength { expected: usize, found: usize },
    #[error("edge map has {found} entries, domain has {expected} edges")]
    EdgeMapLength { expected: usize, found: usize },
    #[error("{0} has no image")]
    Unmapped(Item),
    #[error("{item} is mapped outside the codomain ({target})")]
    OutOfCodomain { item: Item, target: String },
    #[error("{0} is not in the domain")]
    NotInDomain(Item),
    #[error("edge `{edge}` is sent to `{image}` but its source is not preserved")]
    SourceNotPreserved { edge: String, image: String },
    #[error("edge `{edge}` is sent to `{image}` but its target is not preserved")]
    TargetNotPreserved { edge: String, image: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MorphismError {
    #[error("not a graph morphism: {}", join_violations(.0))]
    Invalid(Vec<Violation>),
    #[error("cannot compose: codomain of the first map is not the domain of the second")]
    NotComposable,
    #[error("morphism is not invertible")]
    NotInvertible,
    #[error(transparent)]
    Graph(#[from] GraphError),
}

fn join_violations(v: &[Violation]) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join("; ")
}

impl GraphMorphism {
    /// Builds a morphism from index tables, rejecting anything that is not a homomorphism.
    pub fn new(
        dom: Arc<Graph>,
        cod: Arc<Graph>,
        vmap: Vec<usize>,
        emap: Vec<usize>,
    ) -> Result<Self, MorphismError> {
        let m = Self::from_raw(dom, cod, vmap, emap);
        let violations = m.validate();
        if violations.is_empty() {
            Ok(m)
        } else {
            Err(MorphismError::Invalid(violations))
        }
    }

    /// Builds a morphism without checking it. Use [`GraphMorphism::validate`] afterwards.
    pub fn from_raw(dom: Arc<Graph>, cod: Arc<Graph>, vmap: Vec<usize>, emap: Vec<usize>) -> Self {
        Self {
            dom,
            cod,
            vmap,
            emap,
        }
    }

    /// Builds a morphism from id-to-id maps.
    pub fn from_named(
        dom: Arc<Graph>,
        cod: Arc<Graph>,
        vmap: &BTreeMap<String, String>,
        emap: &BTreeMap<String, String>,
    ) -> Result<Self, MorphismError> {
        let mut violations = Vec::new();
        for k in vmap.keys() {
            if dom.vertex_index(k).is_none() {
                violations.push(Violation::NotInDomain(Item::Vertex(k.clone())));
            }
        }
        for k in emap.keys() {
            if dom.edge_index(k).is_none() {
                violations.push(Violation::NotInDomain(Item::Edge(k.clone())));
            }
        }
        let mut vtable = Vec::with_capacity(dom.vertex_count());
        for v in dom.vertex_ids() {
            match vmap.get(v) {
                None => violations.push(Violation::Unmapped(Item::Vertex(v.to_owned()))),
                Some(w) => match cod.vertex_index(w) {
                    Some(i) => vtable.push(i),
                    None => violations.push(Violation::OutOfCodomain {
                        item: Item::Vertex(v.to_owned()),
                        target: w.clone(),
                    }),
                },
            }
        }
        let mut etable = Vec::with_capacity(dom.edge_count());
        for e in dom.edges() {
            match emap.get(e.id) {
                None => violations.push(Violation::Unmapped(Item::Edge(e.id.to_owned()))),
                Some(w) => match cod.edge_index(w) {
                    Some(i) => etable.push(i),
                    None => violations.push(Violation::OutOfCodomain {
                        item: Item::Edge(e.id.to_owned()),
                        target: w.clone(),
                    }),
                },
            }
        }
        if !violations.is_empty() {
            return Err(MorphismError::Invalid(violations));
        }
        Self::new(dom, cod, vtable, etable)
    }

    pub fn identity(g: &Arc<Graph>) -> Self {
        Self {
            dom: g.clone(),
            cod: g.clone(),
            vmap: (0..g.vertex_count()).collect(),
            emap: (0..g.edge_count()).collect(),
        }
    }

    /// The unique morphism out of the empty graph.
    pub fn initial(cod: &Arc<Graph>) -> Self {
        Self::from_raw(Arc::new(Graph::empty()), cod.clone(), vec![], vec![])
    }

    /// Checks totality and the source/target preservation law.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        if self.vmap.len() != self.dom.vertex_count() {
            out.push(Violation::VertexMapLength {
                expected: self.dom.vertex_count(),
                found: self.vmap.len(),
            });
        }
        if self.emap.len() != self.dom.edge_count() {
            out.push(Violation::EdgeMapLength {
                expected: self.dom.edge_count(),
                found: self.emap.len(),
            });
        }
        for (i, &w) in self.vmap.iter().enumerate() {
            if w >= self.cod.vertex_count() {
                out.push(Violation::OutOfCodomain {
                    item: Item::Vertex(label_or_index(i, self.dom.vertex_count(), |i| {
                        self.dom.vertex(i)
                    })),
                    target: format!("#{w}"),
                });
            }
        }
        for (j, &d) in self.emap.iter().enumerate() {
            let edge = label_or_index(j, self.dom.edge_count(), |j| self.dom.edge(j));
            if d >= self.cod.edge_count() {
                out.push(Violation::OutOfCodomain {
                    item: Item::Edge(edge),
                    target: format!("#{d}"),
                });
                continue;
            }
            if j >= self.dom.edge_count() {
                continue;
            }
            let image = self.cod.edge(d).to_owned();
            if self.vmap.get(self.dom.src(j)) != Some(&self.cod.src(d)) {
                out.push(Violation::SourceNotPreserved {
                    edge: edge.clone(),
                    image: image.clone(),
                });
            }
            if self.vmap.get(self.dom.tgt(j)) != Some(&self.cod.tgt(d)) {
                out.push(Violation::TargetNotPreserved { edge, image });
            }
        }
        out
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_empty()
    }

    pub fn dom(&self) -> &Arc<Graph> {
        &self.dom
    }

    pub fn cod(&self) -> &Arc<Graph> {
        &self.cod
    }

    pub fn vmap(&self) -> &[usize] {
        &self.vmap
    }

    pub fn emap(&self) -> &[usize] {
        &self.emap
    }

    pub fn v(&self, i: usize) -> usize {
        self.vmap[i]
    }

    pub fn e(&self, j: usize) -> usize {
        self.emap[j]
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &GraphMorphism) -> Result<GraphMorphism, MorphismError> {
        if inner.cod != self.dom {
            return Err(MorphismError::NotComposable);
        }
        Ok(Self {
            dom: inner.dom.clone(),
            cod: self.cod.clone(),
            vmap: inner.vmap.iter().map(|&i| self.vmap[i]).collect(),
            emap: inner.emap.iter().map(|&j| self.emap[j]).collect(),
        })
    }

    /// `self ∘ inner` for callers that have already matched the graphs.
    pub(crate) fn after(&self, inner: &GraphMorphism) -> GraphMorphism {
        debug_assert_eq!(inner.cod, self.dom);
        Self {
            dom: inner.dom.clone(),
            cod: self.cod.clone(),
            vmap: inner.vmap.iter().map(|&i| self.vmap[i]).collect(),
            emap: inner.emap.iter().map(|&j| self.emap[j]).collect(),
        }
    }

    pub fn is_injective(&self) -> bool {
        all_distinct(&self.vmap, self.cod.vertex_count())
            && all_distinct(&self.emap, self.cod.edge_count())
    }

    pub fn is_surjective(&self) -> bool {
        covers(&self.vmap, self.cod.vertex_count()) && covers(&self.emap, self.cod.edge_count())
    }

    pub fn is_iso(&self) -> bool {
        self.dom.vertex_count() == self.cod.vertex_count()
            && self.dom.edge_count() == self.cod.edge_count()
            && self.is_injective()
    }

    pub fn is_identity(&self) -> bool {
        self.dom == self.cod
            && self.vmap.iter().enumerate().all(|(i, &w)| i == w)
            && self.emap.iter().enumerate().all(|(j, &d)| j == d)
    }

    pub fn inverse(&self) -> Result<GraphMorphism, MorphismError> {
        if !self.is_iso() {
            return Err(MorphismError::NotInvertible);
        }
        let mut vmap = vec![0; self.vmap.len()];
        for (i, &w) in self.vmap.iter().enumerate() {
            vmap[w] = i;
        }
        let mut emap = vec![0; self.emap.len()];
        for (j, &d) in self.emap.iter().enumerate() {
            emap[d] = j;
        }
        Ok(Self::from_raw(self.cod.clone(), self.dom.clone(), vmap, emap))
    }

    /// Same maps, domain swapped for an equal graph value.
    #[cfg(test)]
    pub(crate) fn with_dom(&self, dom: &Arc<Graph>) -> GraphMorphism {
        debug_assert_eq!(**dom, *self.dom);
        Self::from_raw(dom.clone(), self.cod.clone(), self.vmap.clone(), self.emap.clone())
    }

    /// Vertex map as `(dom id, cod id)` pairs, in domain order.
    pub fn vertex_pairs(&self) -> impl Iterator<Item = (&str, &str)> + '_ {
        self.vmap
            .iter()
            .enumerate()
            .map(move |(i, &w)| (self.dom.vertex(i), self.cod.vertex(w)))
    }

    pub fn edge_pairs(&self) -> impl Iterator<Item = (&str, &str)> + '_ {
        self.emap
            .iter()
            .enumerate()
            .map(move |(j, &d)| (self.dom.edge(j), self.cod.edge(d)))
    }

    pub fn named_vmap(&self) -> BTreeMap<String, String> {
        self.vertex_pairs()
            .map(|(a, b)| (a.to_owned(), b.to_owned()))
            .collect()
    }

    pub fn named_emap(&self) -> BTreeMap<String, String> {
        self.edge_pairs()
            .map(|(a, b)| (a.to_owned(), b.to_owned()))
            .collect()
    }

    /// Image as a subgraph of the codomain: `(vertex flags, edge flags)`.
    pub fn image_flags(&self) -> (Vec<bool>, Vec<bool>) {
        let mut vs = vec![false; self.cod.vertex_count()];
        let mut es = vec![false; self.cod.edge_count()];
        for &w in &self.vmap {
            vs[w] = true;
        }
        for &d in &self.emap {
            es[d] = true;
        }
        (vs, es)
    }
}

fn label_or_index<'a>(i: usize, len: usize, name: impl Fn(usize) -> &'a str) -> String {
    if i < len {
        name(i).to_owned()
    } else {
        format!("#{i}")
    }
}

fn all_distinct(map: &[usize], range: usize) -> bool {
    let mut seen = vec![false; range];
    map.iter().all(|&x| !std::mem::replace(&mut seen[x], true))
}

fn covers(map: &[usize], range: usize) -> bool {
    let mut seen = vec![false; range];
    for &x in map {
        seen[x] = true;
    }
    seen.into_iter().all(|b| b)
}

impl fmt::Display for GraphMorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let vs: Vec<_> = self
            .vertex_pairs()
            .map(|(a, b)| format!("{a}↦{b}"))
            .collect();
        let es: Vec<_> = self.edge_pairs().map(|(a, b)| format!("{a}↦{b}")).collect();
        write!(f, "[{}", vs.join(", "))?;
        if !es.is_empty() {
            write!(f, " | {}", es.join(", "))?;
        }
        write!(f, "]")
    }
}

/// `g ∘ f`.
pub fn compose(g: &GraphMorphism, f: &GraphMorphism) -> Result<GraphMorphism, MorphismError> {
    g.compose(f)
}

/// Renames the items of `g`, returning the renamed graph and the isomorphism `g -> renamed`.
pub fn relabel(
    g: &Arc<Graph>,
    vnames: &[String],
    enames: &[String],
) -> Result<(Arc<Graph>, GraphMorphism), GraphError> {
    let mut b = GraphBuilder::new();
    for v in vnames {
        b.add_vertex(v.clone());
    }
    for (j, e) in enames.iter().enumerate() {
        b.add_edge(e.clone(), g.src(j), g.tgt(j));
    }
    let built = b.finish()?;
    let renamed = Arc::new(built.graph);
    let iso = GraphMorphism::from_raw(g.clone(), renamed.clone(), built.vertex_pos, built.edge_pos);
    Ok((renamed, iso))
}

/// Inclusion of the subgraph of `g` with the flagged items.
///
/// Edges whose endpoints are not both kept are dropped.
pub fn subgraph(g: &Arc<Graph>, keep_v: &[bool], keep_e: &[bool]) -> GraphMorphism {
    let mut b = GraphBuilder::new();
    let mut local = vec![usize::MAX; g.vertex_count()];
    let mut vsrc = Vec::new();
    for (i, &k) in keep_v.iter().enumerate() {
        if k {
            local[i] = b.add_vertex(g.vertex(i));
            vsrc.push(i);
        }
    }
    let mut esrc = Vec::new();
    for (j, &k) in keep_e.iter().enumerate() {
        let (s, t) = (g.src(j), g.tgt(j));
        if k && local[s] != usize::MAX && local[t] != usize::MAX {
            b.add_edge(g.edge(j), local[s], local[t]);
            esrc.push(j);
        }
    }
    let built = b.finish().expect("subgraph ids are unique");
    let mut vmap = vec![0; vsrc.len()];
    for (k, &i) in vsrc.iter().enumerate() {
        vmap[built.vertex_pos[k]] = i;
    }
    let mut emap = vec![0; esrc.len()];
    for (k, &j) in esrc.iter().enumerate() {
        emap[built.edge_pos[k]] = j;
    }
    GraphMorphism::from_raw(Arc::new(built.graph), g.clone(), vmap, emap)
}
