//! Exhaustive homomorphism, monomorphism and isomorphism search.
//!
//! Vertices of the domain are assigned first, in index order, each trying
//! codomain vertices in index order; edges are then assigned the same way.
//! Results therefore come out in lexicographic order of the vertex assignment.

use std::collections::HashMap;
use std::sync::Arc;

use crate::graph::{Graph, GraphBuilder};
use crate::morphism::GraphMorphism;

type VertexFilter<'a> = Box<dyn Fn(usize, usize) -> bool + 'a>;
type EdgeFilter<'a> = Box<dyn Fn(usize, usize) -> bool + 'a>;

/// Configurable backtracking search for morphisms `dom -> cod`.
pub struct HomSearch<'a> {
    dom: Arc<Graph>,
    cod: Arc<Graph>,
    mono: bool,
    vfilter: Option<VertexFilter<'a>>,
    efilter: Option<EdgeFilter<'a>>,
}

impl<'a> HomSearch<'a> {
    pub fn new(dom: &Arc<Graph>, cod: &Arc<Graph>) -> Self {
        Self {
            dom: dom.clone(),
            cod: cod.clone(),
            mono: false,
            vfilter: None,
            efilter: None,
        }
    }

    pub fn mono(mut self, mono: bool) -> Self {
        self.mono = mono;
        self
    }

    /// Restricts vertex `i` of the domain to codomain vertices `w` with `f(i, w)`.
    pub fn vertex_filter(mut self, f: impl Fn(usize, usize) -> bool + 'a) -> Self {
        self.vfilter = Some(Box::new(f));
        self
    }

    pub fn edge_filter(mut self, f: impl Fn(usize, usize) -> bool + 'a) -> Self {
        self.efilter = Some(Box::new(f));
        self
    }

    /// Calls `visit` on each morphism until it returns `false`.
    pub fn for_each(&self, mut visit: impl FnMut(&GraphMorphism) -> bool) {
        let mut by_ends: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
        for d in 0..self.cod.edge_count() {
            by_ends
                .entry((self.cod.src(d), self.cod.tgt(d)))
                .or_default()
                .push(d);
        }
        // edges of the domain whose endpoints are both assigned once vertex i is
        let mut closing: Vec<Vec<usize>> = vec![Vec::new(); self.dom.vertex_count()];
        for j in 0..self.dom.edge_count() {
            let last = self.dom.src(j).max(self.dom.tgt(j));
            closing[last].push(j);
        }
        let mut state = State {
            search: self,
            by_ends,
            closing,
            vmap: Vec::with_capacity(self.dom.vertex_count()),
            emap: Vec::with_capacity(self.dom.edge_count()),
            vused: vec![false; self.cod.vertex_count()],
            eused: vec![false; self.cod.edge_count()],
            stop: false,
        };
        state.vertices(&mut visit);
    }

    pub fn collect(&self) -> Vec<GraphMorphism> {
        let mut out = Vec::new();
        self.for_each(|m| {
            out.push(m.clone());
            true
        });
        out
    }

    pub fn first(&self) -> Option<GraphMorphism> {
        let mut out = None;
        self.for_each(|m| {
            out = Some(m.clone());
            false
        });
        out
    }

    pub fn count(&self) -> usize {
        let mut n = 0;
        self.for_each(|_| {
            n += 1;
            true
        });
        n
    }
}

struct State<'s, 'a> {
    search: &'s HomSearch<'a>,
    by_ends: HashMap<(usize, usize), Vec<usize>>,
    closing: Vec<Vec<usize>>,
    vmap: Vec<usize>,
    emap: Vec<usize>,
    vused: Vec<bool>,
    eused: Vec<bool>,
    stop: bool,
}

impl State<'_, '_> {
    fn candidates(&self, s: usize, t: usize) -> &[usize] {
        self.by_ends.get(&(s, t)).map_or(&[], Vec::as_slice)
    }

    fn vertices(&mut self, visit: &mut impl FnMut(&GraphMorphism) -> bool) {
        let s = self.search;
        let i = self.vmap.len();
        if i == s.dom.vertex_count() {
            self.edges(visit);
            return;
        }
        for w in 0..s.cod.vertex_count() {
            if self.stop {
                return;
            }
            if s.mono && self.vused[w] {
                continue;
            }
            if let Some(f) = &s.vfilter {
                if !f(i, w) {
                    continue;
                }
            }
            self.vmap.push(w);
            let feasible = self.closing[i].iter().all(|&j| {
                let ends = (self.vmap[s.dom.src(j)], self.vmap[s.dom.tgt(j)]);
                !self.candidates(ends.0, ends.1).is_empty()
            });
            if feasible {
                self.vused[w] = true;
                self.vertices(visit);
                self.vused[w] = false;
            }
            self.vmap.pop();
        }
    }

    fn edges(&mut self, visit: &mut impl FnMut(&GraphMorphism) -> bool) {
        let s = self.search;
        let j = self.emap.len();
        if j == s.dom.edge_count() {
            let m = GraphMorphism::from_raw(
                s.dom.clone(),
                s.cod.clone(),
                self.vmap.clone(),
                self.emap.clone(),
            );
            if !visit(&m) {
                self.stop = true;
            }
            return;
        }
        let ends = (self.vmap[s.dom.src(j)], self.vmap[s.dom.tgt(j)]);
        let cands = self.candidates(ends.0, ends.1).to_vec();
        for d in cands {
            if self.stop {
                return;
            }
            if s.mono && self.eused[d] {
                continue;
            }
            if let Some(f) = &s.efilter {
                if !f(j, d) {
                    continue;
                }
            }
            self.eused[d] = true;
            self.emap.push(d);
            self.edges(visit);
            self.emap.pop();
            self.eused[d] = false;
        }
    }
}

/// All homomorphisms (or monomorphisms) `l -> g`, in deterministic order.
pub fn enumerate_homomorphisms(l: &Arc<Graph>, g: &Arc<Graph>, mono_only: bool) -> Vec<GraphMorphism> {
    HomSearch::new(l, g).mono(mono_only).collect()
}

/// Iso-invariant vertex colouring: degree signature refined once by neighbours.
fn vertex_classes(g: &Graph) -> Vec<(usize, usize, usize, Vec<(usize, usize, usize)>, Vec<(usize, usize, usize)>)> {
    let sig: Vec<_> = (0..g.vertex_count()).map(|v| g.degree_signature(v)).collect();
    (0..g.vertex_count())
        .map(|v| {
            let mut outs = Vec::new();
            let mut ins = Vec::new();
            for j in 0..g.edge_count() {
                if g.src(j) == v {
                    outs.push(sig[g.tgt(j)]);
                }
                if g.tgt(j) == v {
                    ins.push(sig[g.src(j)]);
                }
            }
            outs.sort_unstable();
            ins.sort_unstable();
            let (a, b, c) = sig[v];
            (a, b, c, outs, ins)
        })
        .collect()
}

/// An isomorphism `a -> b`, if one exists.
pub fn find_isomorphism(a: &Arc<Graph>, b: &Arc<Graph>) -> Option<GraphMorphism> {
    if a.vertex_count() != b.vertex_count() || a.edge_count() != b.edge_count() {
        return None;
    }
    let ca = vertex_classes(a);
    let cb = vertex_classes(b);
    let mut sa = ca.clone();
    let mut sb = cb.clone();
    sa.sort();
    sb.sort();
    if sa != sb {
        return None;
    }
    let found = HomSearch::new(a, b)
        .mono(true)
        .vertex_filter(|i, w| ca[i] == cb[w])
        .first();
    found
}

pub fn are_isomorphic(a: &Arc<Graph>, b: &Arc<Graph>) -> bool {
    find_isomorphism(a, b).is_some()
}

/// Canonical representative of the isomorphism class of `g`, with the relabeling `g -> canon`.
///
/// Vertices are named `v0, v1, ...` and edges `e0, e1, ...` (zero-padded),
/// ordered so that the sorted endpoint list is lexicographically least over
/// all colour-respecting vertex orders.
pub fn canonical_form(g: &Arc<Graph>) -> (Arc<Graph>, GraphMorphism) {
    let n = g.vertex_count();
    let classes = vertex_classes(g);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| classes[x].cmp(&classes[y]));
    // blocks of equally coloured vertices, in colour order
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    for &v in &order {
        match blocks.last_mut() {
            Some(b) if classes[b[0]] == classes[v] => b.push(v),
            _ => blocks.push(vec![v]),
        }
    }
    let mut best: Option<(Vec<(usize, usize)>, Vec<usize>)> = None;
    let mut pos = vec![0usize; n];
    permute_blocks(&blocks, 0, 0, &mut pos, &mut |pos| {
        let mut code: Vec<(usize, usize)> = (0..g.edge_count())
            .map(|j| (pos[g.src(j)], pos[g.tgt(j)]))
            .collect();
        code.sort_unstable();
        if best.as_ref().is_none_or(|(c, _)| code < *c) {
            best = Some((code, pos.to_vec()));
        }
    });
    let (_, pos) = best.unwrap_or_default();
    let vw = width(n);
    let ew = width(g.edge_count());
    let mut b = GraphBuilder::new();
    for p in 0..n {
        b.add_vertex(format!("v{p:0vw$}"));
    }
    let mut edges: Vec<(usize, usize, usize)> = (0..g.edge_count())
        .map(|j| (pos[g.src(j)], pos[g.tgt(j)], j))
        .collect();
    edges.sort_unstable();
    let mut emap = vec![0; g.edge_count()];
    for (k, &(s, t, j)) in edges.iter().enumerate() {
        b.add_edge(format!("e{k:0ew$}"), s, t);
        emap[j] = k;
    }
    let built = b.finish().expect("canonical ids are unique");
    let canon = Arc::new(built.graph);
    let m = GraphMorphism::from_raw(g.clone(), canon.clone(), pos, emap);
    (canon, m)
}

fn width(n: usize) -> usize {
    n.saturating_sub(1).to_string().len()
}

fn permute_blocks(
    blocks: &[Vec<usize>],
    b: usize,
    offset: usize,
    pos: &mut Vec<usize>,
    visit: &mut impl FnMut(&[usize]),
) {
    if b == blocks.len() {
        visit(pos);
        return;
    }
    let block = &blocks[b];
    let mut perm = block.clone();
    heap_permutations(&mut perm, block.len(), &mut |perm| {
        for (k, &v) in perm.iter().enumerate() {
            pos[v] = offset + k;
        }
        permute_blocks(blocks, b + 1, offset + block.len(), pos, visit);
    });
}

fn heap_permutations(items: &mut [usize], k: usize, visit: &mut impl FnMut(&[usize])) {
    if k <= 1 {
        visit(items);
        return;
    }
    for i in 0..k {
        heap_permutations(items, k - 1, visit);
        if k % 2 == 0 {
            items.swap(i, k - 1);
        } else {
            items.swap(0, k - 1);
        }
    }
}
