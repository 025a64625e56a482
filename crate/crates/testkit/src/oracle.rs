//! Brute-force checks that share no code with the constructions under test.
//!
//! Limits are checked against the representables `•` and `•→•`: a cone is
//! a limit iff its vertices (edges) are in bijection with the compatible
//! tuples of node vertices (edges). Colimits are checked against the graph
//! `T2` with two vertices and two parallel edges between every ordered pair
//! of them (loops included): maps into `T2` are exactly pairs of subsets of
//! vertices and edges, so a cocone is a colimit iff its maps into `T2`
//! correspond bijectively to cocones into `T2`. Both sides are counted
//! sortwise rather than by enumerating graph morphisms.

use std::collections::HashSet;
use std::sync::Arc;

use gct_core::cat_ops::Diagram;
use gct_core::{Graph, GraphMorphism};

/// Composition on raw tables: `outer ∘ inner`.
pub fn after(outer: &GraphMorphism, inner: &GraphMorphism) -> GraphMorphism {
    GraphMorphism::from_raw(
        inner.dom().clone(),
        outer.cod().clone(),
        inner.vmap().iter().map(|&x| outer.vmap()[x]).collect(),
        inner.emap().iter().map(|&x| outer.emap()[x]).collect(),
    )
}

fn same_tables(a: &GraphMorphism, b: &GraphMorphism) -> bool {
    a.vmap() == b.vmap() && a.emap() == b.emap()
}

/// Every homomorphism `a -> b`, by exhaustive enumeration of vertex functions.
pub fn all_homs(a: &Arc<Graph>, b: &Arc<Graph>) -> Vec<GraphMorphism> {
    let (nv, nw) = (a.vertex_count(), b.vertex_count());
    let mut out = Vec::new();
    if nv > 0 && nw == 0 {
        return out;
    }
    let mut f = vec![0usize; nv];
    loop {
        // edges: every choice of a parallel edge in b over the image endpoints
        let options: Vec<Vec<usize>> = (0..a.edge_count())
            .map(|j| {
                (0..b.edge_count())
                    .filter(|&d| b.src(d) == f[a.src(j)] && b.tgt(d) == f[a.tgt(j)])
                    .collect()
            })
            .collect();
        if options.iter().all(|o| !o.is_empty()) {
            let mut pick = vec![0usize; options.len()];
            loop {
                let emap = pick.iter().zip(&options).map(|(&i, o)| o[i]).collect();
                out.push(GraphMorphism::from_raw(a.clone(), b.clone(), f.clone(), emap));
                if !bump(&mut pick, |i| options[i].len()) {
                    break;
                }
            }
        }
        if !bump(&mut f, |_| nw) {
            break;
        }
    }
    out
}

/// Odometer increment; `false` once every position has wrapped.
fn bump(digits: &mut [usize], base: impl Fn(usize) -> usize) -> bool {
    for i in (0..digits.len()).rev() {
        digits[i] += 1;
        if digits[i] < base(i) {
            return true;
        }
        digits[i] = 0;
    }
    false
}

pub fn t2() -> Arc<Graph> {
    let vertices = ["0", "1"];
    let mut edges = Vec::new();
    for s in vertices {
        for t in vertices {
            for c in ["a", "b"] {
                edges.push((format!("{s}{t}{c}"), s.to_owned(), t.to_owned()));
            }
        }
    }
    Arc::new(Graph::new(vertices, edges).expect("well formed"))
}

/// Compatible tuples of items, one per node, along every arrow.
fn tuples(d: &Diagram, count: impl Fn(&Graph) -> usize, image: impl Fn(&GraphMorphism, usize) -> usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn go(
        d: &Diagram,
        count: &dyn Fn(&Graph) -> usize,
        image: &dyn Fn(&GraphMorphism, usize) -> usize,
        cur: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        let i = cur.len();
        if i == d.nodes().len() {
            out.push(cur.clone());
            return;
        }
        for x in 0..count(d.object(i)) {
            cur.push(x);
            let ok = d.arrows().iter().all(|a| {
                a.src.max(a.tgt) > i || image(&a.map, cur[a.src]) == cur[a.tgt]
            });
            if ok {
                go(d, count, image, cur, out);
            }
            cur.pop();
        }
    }
    go(d, &count, &image, &mut cur, &mut out);
    out
}

/// Whether `legs: apex -> node_i` is a limit cone of `d`.
pub fn is_limit(d: &Diagram, apex: &Arc<Graph>, legs: &[GraphMorphism]) -> bool {
    if legs.len() != d.nodes().len() || legs.iter().any(|l| l.dom() != apex) {
        return false;
    }
    let cone = d
        .arrows()
        .iter()
        .all(|a| same_tables(&after(&a.map, &legs[a.src]), &legs[a.tgt]));
    if !cone {
        return false;
    }
    let vt: HashSet<Vec<usize>> = tuples(d, Graph::vertex_count, |m, x| m.vmap()[x]).into_iter().collect();
    let et: HashSet<Vec<usize>> = tuples(d, Graph::edge_count, |m, x| m.emap()[x]).into_iter().collect();
    let av: HashSet<Vec<usize>> = (0..apex.vertex_count())
        .map(|x| legs.iter().map(|l| l.vmap()[x]).collect())
        .collect();
    let ae: HashSet<Vec<usize>> = (0..apex.edge_count())
        .map(|x| legs.iter().map(|l| l.emap()[x]).collect())
        .collect();
    av.len() == apex.vertex_count() && ae.len() == apex.edge_count() && av == vt && ae == et
}

/// Whether `legs: node_i -> apex` is a colimit cocone of `d`.
///
/// A map into `T2` is an independent 2-colouring of vertices and of edges,
/// so the test against `T2` splits into one for vertices and one for edges.
pub fn is_colimit(d: &Diagram, apex: &Arc<Graph>, legs: &[GraphMorphism]) -> bool {
    if legs.len() != d.nodes().len() || legs.iter().any(|l| l.cod() != apex) {
        return false;
    }
    let cocone = d
        .arrows()
        .iter()
        .all(|a| same_tables(&after(&legs[a.tgt], &a.map), &legs[a.src]));
    cocone
        && colourings_biject(d, apex.vertex_count(), legs, Graph::vertex_count, GraphMorphism::vmap)
        && colourings_biject(d, apex.edge_count(), legs, Graph::edge_count, GraphMorphism::emap)
}

/// `Set(X, 2) -> Cocones(D, 2)` is a bijection, for one sort of item.
fn colourings_biject(
    d: &Diagram,
    apex_size: usize,
    legs: &[GraphMorphism],
    count: fn(&Graph) -> usize,
    table: fn(&GraphMorphism) -> &[usize],
) -> bool {
    assert!(apex_size <= 20, "too large for the colouring oracle");
    // items of the diagram, laid out node after node
    let offsets: Vec<usize> = d
        .nodes()
        .iter()
        .scan(0, |acc, (_, g)| {
            let o = *acc;
            *acc += count(g);
            Some(o)
        })
        .collect();
    let total: usize = d.nodes().iter().map(|(_, g)| count(g)).sum();
    let mut links: Vec<Vec<usize>> = vec![Vec::new(); total];
    for a in d.arrows() {
        for (x, &y) in table(&a.map).iter().enumerate() {
            let (p, q) = (offsets[a.src] + x, offsets[a.tgt] + y);
            links[p].push(q);
            links[q].push(p);
        }
    }
    // compatible colourings, abandoned as soon as there are too many
    let limit = 1usize << apex_size;
    let mut colour = vec![false; total];
    let mut cocones: HashSet<Vec<bool>> = HashSet::new();
    fn go(i: usize, colour: &mut Vec<bool>, links: &[Vec<usize>], out: &mut HashSet<Vec<bool>>, limit: usize) -> bool {
        if i == colour.len() {
            out.insert(colour.clone());
            return out.len() <= limit;
        }
        for c in [false, true] {
            colour[i] = c;
            if links[i].iter().all(|&q| q >= i || colour[q] == c) && !go(i + 1, colour, links, out, limit) {
                return false;
            }
        }
        true
    }
    if !go(0, &mut colour, &links, &mut cocones, limit) {
        return false;
    }
    let mut images = HashSet::new();
    for bits in 0..limit {
        let mut img = vec![false; total];
        for (n, leg) in legs.iter().enumerate() {
            for (x, &y) in table(leg).iter().enumerate() {
                img[offsets[n] + x] = bits >> y & 1 == 1;
            }
        }
        if !cocones.contains(&img) || !images.insert(img) {
            return false;
        }
    }
    images.len() == cocones.len()
}

/// `p ∘ b = q ∘ c` and `(p, q)` is a pushout of `(b, c)`.
pub fn is_pushout(b: &GraphMorphism, c: &GraphMorphism, p: &GraphMorphism, q: &GraphMorphism) -> bool {
    let mut d = Diagram::new();
    let a = d.add_node("A", b.dom().clone());
    let x = d.add_node("B", b.cod().clone());
    let y = d.add_node("C", c.cod().clone());
    if d.add_arrow("b", a, x, b.clone()).is_err() || d.add_arrow("c", a, y, c.clone()).is_err() {
        return false;
    }
    is_colimit(&d, p.cod(), &[after(p, b), p.clone(), q.clone()])
}

/// `f ∘ x = g ∘ y` and `(x, y)` is a pullback of `(f, g)`.
pub fn is_pullback(f: &GraphMorphism, g: &GraphMorphism, x: &GraphMorphism, y: &GraphMorphism) -> bool {
    let mut d = Diagram::new();
    let b = d.add_node("B", f.dom().clone());
    let c = d.add_node("C", g.dom().clone());
    let z = d.add_node("D", f.cod().clone());
    if d.add_arrow("f", b, z, f.clone()).is_err() || d.add_arrow("g", c, z, g.clone()).is_err() {
        return false;
    }
    is_limit(&d, x.dom(), &[x.clone(), y.clone(), after(f, x)])
}

/// Number of `u: src -> tgt` with `tgt_over ∘ u = src_over` and `u ∘ src_in = tgt_in`.
pub fn count_mediators(
    src_over: &GraphMorphism,
    src_in: &GraphMorphism,
    tgt_over: &GraphMorphism,
    tgt_in: &GraphMorphism,
) -> usize {
    all_homs(src_over.dom(), tgt_over.dom())
        .iter()
        .filter(|u| same_tables(&after(tgt_over, u), src_over) && same_tables(&after(u, src_in), tgt_in))
        .count()
}

/// Every edge multiset over `0..n` for `n <= max_v` with at most `max_e` edges.
pub fn small_graphs(max_v: usize, max_e: usize) -> Vec<Arc<Graph>> {
    let mut out = Vec::new();
    for n in 0..=max_v {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|s| (0..n).map(move |t| (s, t))).collect();
        let mut multiset = Vec::new();
        multisets(&pairs, 0, max_e, &mut multiset, &mut |edges: &[(usize, usize)]| {
            let vs: Vec<String> = (0..n).map(|i| format!("w{i}")).collect();
            let es: Vec<(String, String, String)> = edges
                .iter()
                .enumerate()
                .map(|(j, &(s, t))| (format!("d{j}"), vs[s].clone(), vs[t].clone()))
                .collect();
            out.push(Arc::new(Graph::new(vs.clone(), es).expect("well formed")));
        });
    }
    out
}

fn multisets(
    pairs: &[(usize, usize)],
    from: usize,
    left: usize,
    cur: &mut Vec<(usize, usize)>,
    visit: &mut dyn FnMut(&[(usize, usize)]),
) {
    visit(cur);
    if left == 0 {
        return;
    }
    for i in from..pairs.len() {
        cur.push(pairs[i]);
        multisets(pairs, i, left - 1, cur, visit);
        cur.pop();
    }
}

/// Checks that `(f, k)` is terminal among pullback complements of `(m, l)`
/// whose object has at most `max_v` vertices and `max_e` edges. Returns the
/// number of complements compared against, or `None` on a failure.
pub fn fpbc_is_terminal(
    m: &GraphMorphism,
    l: &GraphMorphism,
    f: &GraphMorphism,
    k: &GraphMorphism,
    max_v: usize,
    max_e: usize,
) -> Option<usize> {
    if !is_pullback(m, f, l, k) {
        return None;
    }
    let (g, kk) = (m.cod(), l.dom());
    let mut seen = 0;
    for d2 in small_graphs(max_v, max_e) {
        for f2 in all_homs(&d2, g) {
            for k2 in all_homs(kk, &d2) {
                if !same_tables(&after(&f2, &k2), &after(m, l)) || !is_pullback(m, &f2, l, &k2) {
                    continue;
                }
                seen += 1;
                if count_mediators(&f2, &k2, f, k) != 1 {
                    return None;
                }
            }
        }
    }
    Some(seen)
}

/// The gluing condition read off directly: items of `L` outside `l(K)` are
/// hit injectively by `m`, and no edge of `G` outside the image of `L`
/// touches the image of a deleted vertex.
pub fn gluing_holds(m: &GraphMorphism, l: &GraphMorphism) -> bool {
    let (lg, g) = (m.dom(), m.cod());
    let kept_v: HashSet<usize> = l.vmap().iter().copied().collect();
    let kept_e: HashSet<usize> = l.emap().iter().copied().collect();
    for x in 0..lg.vertex_count() {
        for y in 0..lg.vertex_count() {
            if x != y && m.vmap()[x] == m.vmap()[y] && !(kept_v.contains(&x) && kept_v.contains(&y)) {
                return false;
            }
        }
    }
    for x in 0..lg.edge_count() {
        for y in 0..lg.edge_count() {
            if x != y && m.emap()[x] == m.emap()[y] && !(kept_e.contains(&x) && kept_e.contains(&y)) {
                return false;
            }
        }
    }
    let image_e: HashSet<usize> = m.emap().iter().copied().collect();
    for x in (0..lg.vertex_count()).filter(|x| !kept_v.contains(x)) {
        let w = m.vmap()[x];
        let dangling = (0..g.edge_count()).any(|e| (g.src(e) == w || g.tgt(e) == w) && !image_e.contains(&e));
        if dangling {
            return false;
        }
    }
    true
}

/// Calls `visit` on isomorphisms `a -> b` whose vertex and edge assignments
/// pass the filters, until it returns `false`.
pub fn for_each_iso(
    a: &Graph,
    b: &Graph,
    vok: &dyn Fn(usize, usize) -> bool,
    eok: &dyn Fn(usize, usize) -> bool,
    visit: &mut dyn FnMut(&[usize], &[usize]) -> bool,
) {
    if a.vertex_count() != b.vertex_count() || a.edge_count() != b.edge_count() {
        return;
    }
    let mut vmap = Vec::new();
    let mut used = vec![false; b.vertex_count()];
    fn edges(
        a: &Graph,
        b: &Graph,
        vmap: &[usize],
        eok: &dyn Fn(usize, usize) -> bool,
        emap: &mut Vec<usize>,
        used: &mut [bool],
        visit: &mut dyn FnMut(&[usize], &[usize]) -> bool,
    ) -> bool {
        let j = emap.len();
        if j == a.edge_count() {
            return visit(vmap, emap);
        }
        for e in 0..b.edge_count() {
            if !used[e] && b.src(e) == vmap[a.src(j)] && b.tgt(e) == vmap[a.tgt(j)] && eok(j, e) {
                used[e] = true;
                emap.push(e);
                let go_on = edges(a, b, vmap, eok, emap, used, visit);
                emap.pop();
                used[e] = false;
                if !go_on {
                    return false;
                }
            }
        }
        true
    }
    fn vertices(
        a: &Graph,
        b: &Graph,
        vok: &dyn Fn(usize, usize) -> bool,
        eok: &dyn Fn(usize, usize) -> bool,
        vmap: &mut Vec<usize>,
        used: &mut [bool],
        visit: &mut dyn FnMut(&[usize], &[usize]) -> bool,
    ) -> bool {
        let i = vmap.len();
        if i == a.vertex_count() {
            let mut eused = vec![false; b.edge_count()];
            return edges(a, b, vmap, eok, &mut Vec::new(), &mut eused, visit);
        }
        for w in 0..b.vertex_count() {
            if !used[w] && vok(i, w) {
                used[w] = true;
                vmap.push(w);
                let go_on = vertices(a, b, vok, eok, vmap, used, visit);
                vmap.pop();
                used[w] = false;
                if !go_on {
                    return false;
                }
            }
        }
        true
    }
    vertices(a, b, vok, eok, &mut vmap, &mut used, visit);
}
