use std::collections::HashMap;
use std::sync::Arc;

use petgraph::unionfind::UnionFind;

use super::CatError;
use crate::graph::{FreshIds, Graph, GraphBuilder};
use crate::morphism::GraphMorphism;

/// Pushout of a span `B <-b- A -c-> C`.
#[derive(Debug, Clone)]
pub struct Pushout {
    pub object: Arc<Graph>,
    pub in_b: GraphMorphism,
    pub in_c: GraphMorphism,
}

impl Pushout {
    /// The mediating morphism to a cocone `(p: B -> X, q: C -> X)`, if it is one.
    pub fn factor(&self, p: &GraphMorphism, q: &GraphMorphism) -> Option<GraphMorphism> {
        if p.dom() != self.in_b.dom() || q.dom() != self.in_c.dom() || p.cod() != q.cod() {
            return None;
        }
        let mut v = vec![None; self.object.vertex_count()];
        let mut e = vec![None; self.object.edge_count()];
        for (leg, other) in [(&self.in_b, p), (&self.in_c, q)] {
            if !assign(&mut v, leg.vmap(), other.vmap()) || !assign(&mut e, leg.emap(), other.emap()) {
                return None;
            }
        }
        Some(GraphMorphism::from_raw(
            self.object.clone(),
            p.cod().clone(),
            v.into_iter().map(|x| x.expect("pushout legs are jointly surjective")).collect(),
            e.into_iter().map(|x| x.expect("pushout legs are jointly surjective")).collect(),
        ))
    }
}

/// Records `table[leg[i]] = image[i]`, failing on a conflicting entry.
pub(crate) fn assign(table: &mut [Option<usize>], leg: &[usize], image: &[usize]) -> bool {
    for (&at, &val) in leg.iter().zip(image) {
        match table[at] {
            Some(old) if old != val => return false,
            _ => table[at] = Some(val),
        }
    }
    true
}

/// Pointwise pushout: `B ⊔ C` quotiented by `b(a) ~ c(a)`.
///
/// Each class is named after its first member, taking items of `B` before
/// those of `C`; clashes get primes.
pub fn pushout(b: &GraphMorphism, c: &GraphMorphism) -> Result<Pushout, CatError> {
    if b.dom() != c.dom() {
        return Err(CatError::DomainMismatch);
    }
    let (gb, gc) = (b.cod(), c.cod());
    let nb = gb.vertex_count();
    let mut vuf = UnionFind::<usize>::new(nb + gc.vertex_count());
    for (&x, &y) in b.vmap().iter().zip(c.vmap()) {
        vuf.union(x, nb + y);
    }
    let mb = gb.edge_count();
    let mut euf = UnionFind::<usize>::new(mb + gc.edge_count());
    for (&x, &y) in b.emap().iter().zip(c.emap()) {
        euf.union(x, mb + y);
    }
    let vname = |k: usize| if k < nb { gb.vertex(k) } else { gc.vertex(k - nb) };
    let ename = |k: usize| if k < mb { gb.edge(k) } else { gc.edge(k - mb) };
    let esrc = |k: usize| if k < mb { gb.src(k) } else { nb + gc.src(k - mb) };
    let etgt = |k: usize| if k < mb { gb.tgt(k) } else { nb + gc.tgt(k - mb) };

    let mut builder = GraphBuilder::new();
    let mut ids = FreshIds::new();
    let vclass = classes(&mut vuf, nb + gc.vertex_count());
    for &rep in &vclass.reps {
        builder.add_vertex(ids.take(vname(rep)));
    }
    let mut ids = FreshIds::new();
    let eclass = classes(&mut euf, mb + gc.edge_count());
    for &rep in &eclass.reps {
        let s = vclass.of[esrc(rep)];
        let t = vclass.of[etgt(rep)];
        builder.add_edge(ids.take(ename(rep)), s, t);
    }
    let built = builder.finish()?;
    let object = Arc::new(built.graph);
    let vm = |k: usize| built.vertex_pos[vclass.of[k]];
    let em = |k: usize| built.edge_pos[eclass.of[k]];
    let in_b = GraphMorphism::from_raw(
        gb.clone(),
        object.clone(),
        (0..nb).map(vm).collect(),
        (0..mb).map(em).collect(),
    );
    let in_c = GraphMorphism::from_raw(
        gc.clone(),
        object.clone(),
        (0..gc.vertex_count()).map(|k| vm(nb + k)).collect(),
        (0..gc.edge_count()).map(|k| em(mb + k)).collect(),
    );
    Ok(Pushout { object, in_b, in_c })
}

/// Union-find classes numbered by their least member.
pub(crate) struct Classes {
    /// Least member of each class, increasing.
    pub reps: Vec<usize>,
    /// Class number of each element.
    pub of: Vec<usize>,
}

pub(crate) fn classes(uf: &mut UnionFind<usize>, n: usize) -> Classes {
    let mut number: HashMap<usize, usize> = HashMap::new();
    let mut reps = Vec::new();
    let mut of = Vec::with_capacity(n);
    for k in 0..n {
        let root = uf.find_mut(k);
        let c = *number.entry(root).or_insert_with(|| {
            reps.push(k);
            reps.len() - 1
        });
        of.push(c);
    }
    Classes { reps, of }
}

/// Pullback of a cospan `B -f-> D <-g- C`.
#[derive(Debug, Clone)]
pub struct Pullback {
    pub object: Arc<Graph>,
    pub p_b: GraphMorphism,
    pub p_c: GraphMorphism,
    vpairs: HashMap<(usize, usize), usize>,
    epairs: HashMap<(usize, usize), usize>,
}

impl Pullback {
    /// The mediating morphism from a cone `(x: Y -> B, y: Y -> C)`, if it is one.
    pub fn factor(&self, x: &GraphMorphism, y: &GraphMorphism) -> Option<GraphMorphism> {
        if x.cod() != self.p_b.cod() || y.cod() != self.p_c.cod() || x.dom() != y.dom() {
            return None;
        }
        let vmap = x
            .vmap()
            .iter()
            .zip(y.vmap())
            .map(|(&a, &b)| self.vpairs.get(&(a, b)).copied())
            .collect::<Option<Vec<_>>>()?;
        let emap = x
            .emap()
            .iter()
            .zip(y.emap())
            .map(|(&a, &b)| self.epairs.get(&(a, b)).copied())
            .collect::<Option<Vec<_>>>()?;
        Some(GraphMorphism::from_raw(x.dom().clone(), self.object.clone(), vmap, emap))
    }
}

/// Pointwise pullback: pairs of items agreeing in `D`, named `(b,c)`.
pub fn pullback(f: &GraphMorphism, g: &GraphMorphism) -> Result<Pullback, CatError> {
    if f.cod() != g.cod() {
        return Err(CatError::CodomainMismatch);
    }
    let (gb, gc) = (f.dom(), g.dom());
    let mut builder = GraphBuilder::new();
    let mut ids = FreshIds::new();
    let mut vlist = Vec::new();
    let mut vpairs = HashMap::new();
    for x in 0..gb.vertex_count() {
        for y in 0..gc.vertex_count() {
            if f.v(x) == g.v(y) {
                let k = builder.add_vertex(ids.take(&format!("({},{})", gb.vertex(x), gc.vertex(y))));
                vpairs.insert((x, y), k);
                vlist.push((x, y));
            }
        }
    }
    let mut ids = FreshIds::new();
    let mut elist = Vec::new();
    let mut epairs = HashMap::new();
    for x in 0..gb.edge_count() {
        for y in 0..gc.edge_count() {
            if f.e(x) == g.e(y) {
                let s = vpairs[&(gb.src(x), gc.src(y))];
                let t = vpairs[&(gb.tgt(x), gc.tgt(y))];
                let k = builder.add_edge(ids.take(&format!("({},{})", gb.edge(x), gc.edge(y))), s, t);
                epairs.insert((x, y), k);
                elist.push((x, y));
            }
        }
    }
    let built = builder.finish()?;
    let object = Arc::new(built.graph);
    let mut vb = vec![0; vlist.len()];
    let mut vc = vec![0; vlist.len()];
    for (k, &(x, y)) in vlist.iter().enumerate() {
        vb[built.vertex_pos[k]] = x;
        vc[built.vertex_pos[k]] = y;
    }
    let mut eb = vec![0; elist.len()];
    let mut ec = vec![0; elist.len()];
    for (k, &(x, y)) in elist.iter().enumerate() {
        eb[built.edge_pos[k]] = x;
        ec[built.edge_pos[k]] = y;
    }
    for v in vpairs.values_mut() {
        *v = built.vertex_pos[*v];
    }
    for e in epairs.values_mut() {
        *e = built.edge_pos[*e];
    }
    Ok(Pullback {
        p_b: GraphMorphism::from_raw(object.clone(), gb.clone(), vb, eb),
        p_c: GraphMorphism::from_raw(object.clone(), gc.clone(), vc, ec),
        object,
        vpairs,
        epairs,
    })
}

/// Whether `p ∘ b = q ∘ c` is a pushout square.
pub fn is_pushout_square(
    b: &GraphMorphism,
    c: &GraphMorphism,
    p: &GraphMorphism,
    q: &GraphMorphism,
) -> Result<bool, CatError> {
    if p.dom() != b.cod() || q.dom() != c.cod() {
        return Err(CatError::DomainMismatch);
    }
    if p.after(b) != q.compose(c).map_err(|_| CatError::NonCommuting)? {
        return Err(CatError::NonCommuting);
    }
    let po = pushout(b, c)?;
    Ok(po.factor(p, q).is_some_and(|u| u.is_iso()))
}

/// Whether `f ∘ x = g ∘ y` is a pullback square, for `x: P -> B`, `y: P -> C`.
pub fn is_pullback_square(
    x: &GraphMorphism,
    y: &GraphMorphism,
    f: &GraphMorphism,
    g: &GraphMorphism,
) -> Result<bool, CatError> {
    if x.cod() != f.dom() || y.cod() != g.dom() {
        return Err(CatError::CodomainMismatch);
    }
    if f.after(x) != g.compose(y).map_err(|_| CatError::NonCommuting)? {
        return Err(CatError::NonCommuting);
    }
    let pb = pullback(f, g)?;
    Ok(pb.factor(x, y).is_some_and(|u| u.is_iso()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::search::{are_isomorphic, enumerate_homomorphisms};

    fn g(vs: &[&str], es: &[(&str, &str, &str)]) -> Arc<Graph> {
        Arc::new(Graph::new(vs.iter().copied(), es.iter().copied()).unwrap())
    }

    fn hom(dom: &Arc<Graph>, cod: &Arc<Graph>, v: &[usize], e: &[usize]) -> GraphMorphism {
        GraphMorphism::new(dom.clone(), cod.clone(), v.to_vec(), e.to_vec()).unwrap()
    }

    #[test]
    fn pushout_of_identities() {
        let a = g(&["x", "y"], &[("e", "x", "y")]);
        let id = GraphMorphism::identity(&a);
        let po = pushout(&id, &id).unwrap();
        assert_eq!(*po.object, *a);
        assert!(po.in_b.is_iso() && po.in_c.is_iso());
    }

    #[test]
    fn pushout_adds_isolated_middle_vertex() {
        let k = g(&["l", "r"], &[]);
        let d = g(&["a", "b"], &[("e1", "a", "b"), ("e2", "a", "b")]);
        let r = g(&["l", "m", "r"], &[]);
        let po = pushout(&hom(&k, &d, &[0, 1], &[]), &hom(&k, &r, &[0, 2], &[])).unwrap();
        assert_eq!(po.object.vertex_count(), 3);
        assert_eq!(po.object.edge_count(), 2);
        assert_eq!(po.object.vertex_ids().collect::<Vec<_>>(), ["a", "b", "m"]);
    }

    #[test]
    fn pushout_from_empty_is_coproduct() {
        let e = Arc::new(Graph::empty());
        let b = g(&["x"], &[("l", "x", "x")]);
        let c = g(&["x", "y"], &[]);
        let po = pushout(&GraphMorphism::initial(&b).with_dom(&e), &GraphMorphism::initial(&c).with_dom(&e)).unwrap();
        assert_eq!(po.object.vertex_ids().collect::<Vec<_>>(), ["x", "x'", "y"]);
        assert_eq!(po.object.edge_count(), 1);
    }

    #[test]
    fn pullback_of_the_two_arrow_matches_is_discrete() {
        let l = g(&["s", "t"], &[("e", "s", "t")]);
        let d = g(&["a", "b"], &[("e1", "a", "b"), ("e2", "a", "b")]);
        let pb = pullback(&hom(&l, &d, &[0, 1], &[0]), &hom(&l, &d, &[0, 1], &[1])).unwrap();
        assert_eq!(pb.object.vertex_count(), 2);
        assert_eq!(pb.object.edge_count(), 0);
        let id = GraphMorphism::identity(&d);
        assert!(are_isomorphic(&pullback(&id, &id).unwrap().object, &d));
    }

    #[test]
    fn subrule_left_square_is_a_pullback_but_not_with_empty_interface() {
        let disc = g(&["l", "r"], &[]);
        let arrow = g(&["l", "r"], &[("e", "l", "r")]);
        let id = GraphMorphism::identity(&disc);
        let l2 = hom(&disc, &arrow, &[0, 1], &[]);
        assert!(is_pullback_square(&id, &id, &l2, &l2).unwrap());
        let empty = Arc::new(Graph::empty());
        let z = GraphMorphism::initial(&disc).with_dom(&empty);
        assert!(!is_pullback_square(&z, &z, &l2, &l2).unwrap());
    }

    #[test]
    fn extra_corner_vertex_breaks_pushout() {
        let a = g(&["x"], &[]);
        let id = GraphMorphism::identity(&a);
        let p = g(&["x", "junk"], &[]);
        let inc = hom(&a, &p, &[0], &[]);
        assert!(!is_pushout_square(&id, &id, &inc, &inc).unwrap());
        let po = pushout(&id, &id).unwrap();
        assert!(is_pushout_square(&id, &id, &po.in_b, &po.in_c).unwrap());
    }

    #[test]
    fn non_commuting_square_is_an_error() {
        let a = g(&["x", "y"], &[]);
        let id = GraphMorphism::identity(&a);
        let swap = hom(&a, &a, &[1, 0], &[]);
        assert_eq!(is_pushout_square(&id, &id, &id, &swap), Err(CatError::NonCommuting));
    }

    #[test]
    fn pushout_factors_every_cocone_into_small_targets() {
        let a = g(&["x"], &[]);
        let b = g(&["x", "y"], &[("e", "x", "y")]);
        let c = g(&["x", "z"], &[("f", "z", "x")]);
        let bm = hom(&a, &b, &[0], &[]);
        let cm = hom(&a, &c, &[0], &[]);
        let po = pushout(&bm, &cm).unwrap();
        let t = g(&["p", "q"], &[("1", "p", "q"), ("2", "q", "p"), ("3", "p", "p")]);
        for p in enumerate_homomorphisms(&b, &t, false) {
            for q in enumerate_homomorphisms(&c, &t, false) {
                let commutes = p.after(&bm) == q.after(&cm);
                let mediators = enumerate_homomorphisms(&po.object, &t, false)
                    .into_iter()
                    .filter(|u| u.after(&po.in_b) == p && u.after(&po.in_c) == q)
                    .count();
                assert_eq!(mediators, usize::from(commutes));
                assert_eq!(po.factor(&p, &q).is_some(), commutes);
            }
        }
    }
}
