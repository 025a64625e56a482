//! Global coherent transformations over a category Δ of direct
//! transformations of one graph.
//!
//! The pipeline: limit of the contexts `D_δ` over `G`, a coherent system
//! of cones into that diagram, the factorizations `c_δ`, pushouts of the
//! right-hand sides along them, the induced maps `h_μ`, and finally the
//! colimit of the `h_δ` under the global context.

use std::sync::Arc;

use thiserror::Error;

use crate::cat_ops::{
    coslice_colimit, pushout, slice_limit, CatError, CosliceColimit, CosliceDiagram, Pushout,
    SliceDiagram, SliceLimit,
};
use crate::environment::{build_summed_delta, DeltaCategory, EnvError, Environment};
use crate::graph::Graph;
use crate::morphism::GraphMorphism;
use crate::rules::RuleSystem;
use crate::search::HomSearch;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GctError {
    #[error(transparent)]
    Env(#[from] EnvError),
    #[error(transparent)]
    Cat(#[from] CatError),
    #[error("internal invariant broken: {0}")]
    Internal(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ConeMode {
    #[default]
    First,
    All,
}

/// `legs[δ][δ'']: K_δ -> D_δ''`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConeSystem {
    legs: Vec<Vec<GraphMorphism>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConeViolation {
    #[error("system has the wrong number of legs")]
    Shape,
    #[error("leg ({0}, {1}) does not commute over G")]
    NotOver(usize, usize),
    #[error("leg ({0}, {0}) is not k")]
    Anchor(usize),
    #[error("cone of {cone} fails at morphism {morphism}")]
    Cone { cone: usize, morphism: usize },
    #[error("morphism {morphism} breaks compatibility at column {column}")]
    Compatibility { morphism: usize, column: usize },
}

impl ConeSystem {
    pub fn new(legs: Vec<Vec<GraphMorphism>>) -> Self {
        ConeSystem { legs }
    }

    pub fn leg(&self, cone: usize, at: usize) -> &GraphMorphism {
        &self.legs[cone][at]
    }

    pub fn cone(&self, i: usize) -> &[GraphMorphism] {
        &self.legs[i]
    }

    pub fn len(&self) -> usize {
        self.legs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.legs.is_empty()
    }

    pub fn validate(&self, delta: &DeltaCategory) -> Vec<ConeViolation> {
        let n = delta.objects().len();
        if self.legs.len() != n || self.legs.iter().any(|row| row.len() != n) {
            return vec![ConeViolation::Shape];
        }
        let mut out = Vec::new();
        for a in 0..n {
            let ta = delta.object(a);
            let over = ta.f.after(&ta.k);
            for b in 0..n {
                let tb = delta.object(b);
                let leg = &self.legs[a][b];
                if leg.dom() != ta.rule.interface() || leg.cod() != tb.context() || tb.f.after(leg) != over {
                    out.push(ConeViolation::NotOver(a, b));
                }
            }
            if self.legs[a][a] != ta.k {
                out.push(ConeViolation::Anchor(a));
            }
        }
        if !out.is_empty() {
            return out;
        }
        for (i, m) in delta.morphisms().iter().enumerate() {
            for a in 0..n {
                if m.mu.d.after(&self.legs[a][m.dst]) != self.legs[a][m.src] {
                    out.push(ConeViolation::Cone { cone: a, morphism: i });
                }
            }
            for c in 0..n {
                if self.legs[m.dst][c].after(&m.mu.sigma.s2) != self.legs[m.src][c] {
                    out.push(ConeViolation::Compatibility { morphism: i, column: c });
                }
            }
        }
        out
    }
}

/// The contexts `f_δ: D_δ -> G` with arrows `d: D_δ' -> D_δ` for each
/// non-identity `μ: δ -> δ'`.
pub fn build_context_diagram(delta: &DeltaCategory) -> SliceDiagram {
    let mut d = SliceDiagram::new(delta.input().clone());
    for o in delta.objects() {
        d.add_object(o.name.clone(), o.transformation.f.clone())
            .expect("contexts live over G");
    }
    for m in delta.morphisms() {
        if m.mu.is_identity() {
            continue;
        }
        d.add_arrow(m.name.clone(), m.dst, m.src, m.mu.d.clone())
            .expect("f ∘ d = f'");
    }
    d
}

/// `f_Δ: C_Δ -> G` with the limit legs `γ_Δ`.
pub fn compute_global_context(delta: &DeltaCategory) -> SliceLimit {
    slice_limit(&build_context_diagram(delta))
}

/// Coherent systems of cones in deterministic search order.
///
/// Cones are filled row by row, starting with objects that have fewest
/// outgoing morphisms, so that compatibility forces the remaining rows.
pub fn find_coherent_cone_systems(delta: &DeltaCategory, mode: ConeMode) -> Vec<ConeSystem> {
    let n = delta.objects().len();
    let edges: Vec<(usize, usize, &GraphMorphism, &GraphMorphism)> = delta
        .non_identities()
        .map(|m| (m.src, m.dst, &m.mu.d, &m.mu.sigma.s2))
        .collect();
    let mut rows: Vec<usize> = (0..n).collect();
    let out_degree = |a: usize| {
        let mut t: Vec<usize> = edges.iter().filter(|e| e.0 == a && e.1 != a).map(|e| e.1).collect();
        t.sort_unstable();
        t.dedup();
        t.len()
    };
    rows.sort_by_key(|&a| out_degree(a));
    let order: Vec<(usize, usize)> = rows.iter().flat_map(|&a| (0..n).map(move |b| (a, b))).collect();
    let mut search = ConeSearch {
        delta,
        edges,
        order,
        assigned: vec![None; n * n],
        candidates: vec![None; n * n],
        found: Vec::new(),
        mode,
    };
    search.step(0);
    search.found
}

struct ConeSearch<'a> {
    delta: &'a DeltaCategory,
    /// `(src, dst, d, σ2)` of each non-identity morphism
    edges: Vec<(usize, usize, &'a GraphMorphism, &'a GraphMorphism)>,
    order: Vec<(usize, usize)>,
    assigned: Vec<Option<GraphMorphism>>,
    candidates: Vec<Option<Vec<GraphMorphism>>>,
    found: Vec<ConeSystem>,
    mode: ConeMode,
}

impl ConeSearch<'_> {
    fn n(&self) -> usize {
        self.delta.objects().len()
    }

    fn get(&self, a: usize, b: usize) -> Option<&GraphMorphism> {
        self.assigned[a * self.n() + b].as_ref()
    }

    fn done(&self) -> bool {
        self.mode == ConeMode::First && !self.found.is_empty()
    }

    fn step(&mut self, pos: usize) {
        if self.done() {
            return;
        }
        if pos == self.order.len() {
            let n = self.n();
            let legs = (0..n)
                .map(|a| (0..n).map(|b| self.get(a, b).cloned().expect("complete")).collect())
                .collect();
            self.found.push(ConeSystem { legs });
            return;
        }
        let (a, b) = self.order[pos];
        let slot = a * self.n() + b;
        if let Some(forced) = self.forced(a, b) {
            if self.over_g(a, b, &forced) {
                self.assigned[slot] = Some(forced);
                if self.consistent(a, b) {
                    self.step(pos + 1);
                }
                self.assigned[slot] = None;
            }
            return;
        }
        let cands = self.candidates(a, b);
        for leg in cands {
            self.assigned[slot] = Some(leg);
            if self.consistent(a, b) {
                self.step(pos + 1);
            }
            self.assigned[slot] = None;
            if self.done() {
                return;
            }
        }
    }

    /// A value for `(a, b)` dictated by already assigned legs.
    fn forced(&self, a: usize, b: usize) -> Option<GraphMorphism> {
        if a == b {
            return Some(self.delta.object(a).k.clone());
        }
        for &(s, t, d, s2) in &self.edges {
            if s == b {
                if let Some(leg) = self.get(a, t) {
                    return Some(d.after(leg));
                }
            }
            if s == a {
                if let Some(leg) = self.get(t, b) {
                    return Some(leg.after(s2));
                }
            }
        }
        None
    }

    fn over_g(&self, a: usize, b: usize, leg: &GraphMorphism) -> bool {
        let (ta, tb) = (self.delta.object(a), self.delta.object(b));
        tb.f.after(leg) == ta.f.after(&ta.k)
    }

    /// Every constraint whose legs are all assigned and that mentions `(a, b)`.
    fn consistent(&self, a: usize, b: usize) -> bool {
        let leg = self.get(a, b).expect("just assigned");
        for &(s, t, d, s2) in &self.edges {
            // cone: leg[a][s] = d ∘ leg[a][t]
            if s == b {
                if let Some(other) = self.get(a, t) {
                    if d.after(other) != *leg {
                        return false;
                    }
                }
            }
            if t == b {
                if let Some(other) = self.get(a, s) {
                    if d.after(leg) != *other {
                        return false;
                    }
                }
            }
            // compatibility: leg[s][b] = leg[t][b] ∘ σ2
            if s == a {
                if let Some(other) = self.get(t, b) {
                    if other.after(s2) != *leg {
                        return false;
                    }
                }
            }
            if t == a {
                if let Some(other) = self.get(s, b) {
                    if leg.after(s2) != *other {
                        return false;
                    }
                }
            }
        }
        true
    }

    fn candidates(&mut self, a: usize, b: usize) -> Vec<GraphMorphism> {
        let slot = a * self.n() + b;
        if let Some(c) = &self.candidates[slot] {
            return c.clone();
        }
        let (ta, tb) = (self.delta.object(a), self.delta.object(b));
        let over = ta.f.after(&ta.k);
        let f = &tb.f;
        let list = HomSearch::new(ta.rule.interface(), tb.context())
            .vertex_filter(|i, w| f.v(w) == over.v(i))
            .edge_filter(|j, e| f.e(e) == over.e(j))
            .collect();
        self.candidates[slot] = Some(list.clone());
        list
    }
}

/// `c_δ: K_δ -> C_Δ` with `γ_Δ ∘ c_δ = χ_δ`.
pub fn compute_c_morphisms(
    delta: &DeltaCategory,
    cones: &ConeSystem,
    context: &SliceLimit,
) -> Result<Vec<GraphMorphism>, GctError> {
    delta
        .objects()
        .iter()
        .enumerate()
        .map(|(i, o)| {
            let t = &o.transformation;
            context
                .factor(&t.f.after(&t.k), cones.cone(i))
                .ok_or_else(|| GctError::Internal(format!("cone of {} does not factor", o.name)))
        })
        .collect()
}

/// The pushout `H_δ` of `r_δ` along `c_δ`.
#[derive(Debug, Clone)]
pub struct RightHandSide {
    pub object: Arc<Graph>,
    /// `h_δ: C_Δ -> H_δ`
    pub h: GraphMorphism,
    /// `n_δ: R_δ -> H_δ`
    pub n: GraphMorphism,
    pushout: Pushout,
}

impl RightHandSide {
    /// The map out of `H_δ` determined by its values on `C_Δ` and `R_δ`.
    pub fn factor(&self, on_c: &GraphMorphism, on_r: &GraphMorphism) -> Option<GraphMorphism> {
        self.pushout.factor(on_c, on_r)
    }
}

pub fn push_right_hand_sides(delta: &DeltaCategory, c: &[GraphMorphism]) -> Result<Vec<RightHandSide>, GctError> {
    delta
        .objects()
        .iter()
        .zip(c)
        .map(|(o, c)| {
            let po = pushout(c, &o.transformation.rule.r)?;
            Ok(RightHandSide {
                object: po.object.clone(),
                h: po.in_b.clone(),
                n: po.in_c.clone(),
                pushout: po,
            })
        })
        .collect()
}

/// `h_μ: H_δ -> H_δ'` for every morphism of Δ, in Δ's order.
pub fn induce_h_morphisms(delta: &DeltaCategory, rhs: &[RightHandSide]) -> Result<Vec<GraphMorphism>, GctError> {
    delta
        .morphisms()
        .iter()
        .map(|m| {
            let (from, to) = (&rhs[m.src], &rhs[m.dst]);
            from.factor(&to.h, &to.n.after(&m.mu.sigma.s3))
                .ok_or_else(|| GctError::Internal(format!("h for {} does not exist", m.name)))
        })
        .collect()
}

/// The colimit of the `h_δ` and `h_μ` under `C_Δ`.
pub fn compute_result(
    delta: &DeltaCategory,
    context: &Arc<Graph>,
    rhs: &[RightHandSide],
    h_mu: &[GraphMorphism],
) -> Result<CosliceColimit, GctError> {
    let mut d = CosliceDiagram::new(context.clone());
    for (o, r) in delta.objects().iter().zip(rhs) {
        d.add_object(o.name.clone(), r.h.clone())?;
    }
    for (m, h) in delta.morphisms().iter().zip(h_mu) {
        if m.mu.is_identity() {
            continue;
        }
        d.add_arrow(m.name.clone(), m.src, m.dst, h.clone())?;
    }
    Ok(coslice_colimit(&d))
}

/// One run of the pipeline for one cone system.
#[derive(Debug, Clone)]
pub struct GctResult {
    pub context: SliceLimit,
    pub cones: ConeSystem,
    pub c: Vec<GraphMorphism>,
    pub rhs: Vec<RightHandSide>,
    pub h_mu: Vec<GraphMorphism>,
    pub colimit: CosliceColimit,
}

impl GctResult {
    /// `C_Δ`
    pub fn context_graph(&self) -> &Arc<Graph> {
        self.context.object()
    }

    /// `f_Δ: C_Δ -> G`
    pub fn f(&self) -> &GraphMorphism {
        &self.context.apex
    }

    /// `H_Δ`
    pub fn result(&self) -> &Arc<Graph> {
        self.colimit.object()
    }

    /// `h_Δ: C_Δ -> H_Δ`
    pub fn h(&self) -> &GraphMorphism {
        &self.colimit.apex
    }
}

#[derive(Debug, Clone)]
pub enum GctOutcome {
    Coherent(Vec<GctResult>),
    NotCoherent,
}

impl GctOutcome {
    pub fn results(&self) -> &[GctResult] {
        match self {
            GctOutcome::Coherent(r) => r,
            GctOutcome::NotCoherent => &[],
        }
    }

    pub fn is_coherent(&self) -> bool {
        matches!(self, GctOutcome::Coherent(_))
    }
}

pub fn run_pipeline(delta: &DeltaCategory, mode: ConeMode) -> Result<GctOutcome, GctError> {
    let context = compute_global_context(delta);
    let systems = find_coherent_cone_systems(delta, mode);
    if systems.is_empty() {
        return Ok(GctOutcome::NotCoherent);
    }
    let mut results: Vec<GctResult> = Vec::new();
    for cones in systems {
        let c = compute_c_morphisms(delta, &cones, &context)?;
        let rhs = push_right_hand_sides(delta, &c)?;
        let h_mu = induce_h_morphisms(delta, &rhs)?;
        let colimit = compute_result(delta, context.object(), &rhs, &h_mu)?;
        let r = GctResult {
            context: context.clone(),
            cones,
            c,
            rhs,
            h_mu,
            colimit,
        };
        if !results.iter().any(|q| spans_isomorphic((q.f(), q.h()), (r.f(), r.h()))) {
            results.push(r);
        }
    }
    Ok(GctOutcome::Coherent(results))
}

/// Builds Δ for the systems on `g`, optionally restricted to the named
/// objects, and runs the pipeline.
pub fn gct<S: AsRef<str>>(
    systems: &[&RuleSystem],
    g: &Arc<Graph>,
    env: &Environment,
    restrict: Option<&[S]>,
    mode: ConeMode,
) -> Result<(DeltaCategory, GctOutcome), GctError> {
    let mut delta = build_summed_delta(systems, g, env)?;
    if let Some(names) = restrict {
        delta = delta.restrict(names)?;
    }
    let outcome = run_pipeline(&delta, mode)?;
    Ok((delta, outcome))
}

/// Whether spans `G <- C -> H` and `G <- C' -> H'` are isomorphic,
/// i.e. related by isos on `C` and `H` fixing `G`.
pub fn spans_isomorphic(a: (&GraphMorphism, &GraphMorphism), b: (&GraphMorphism, &GraphMorphism)) -> bool {
    let ((f1, h1), (f2, h2)) = (a, b);
    if f1.cod() != f2.cod() {
        return false;
    }
    let (c1, c2, x1, x2) = (f1.dom(), f2.dom(), h1.cod(), h2.cod());
    let same_size = |p: &Graph, q: &Graph| p.vertex_count() == q.vertex_count() && p.edge_count() == q.edge_count();
    if !same_size(c1, c2) || !same_size(x1, x2) {
        return false;
    }
    let mut found = false;
    HomSearch::new(c1, c2)
        .mono(true)
        .vertex_filter(|i, w| f2.v(w) == f1.v(i))
        .edge_filter(|j, e| f2.e(e) == f1.e(j))
        .for_each(|phi| {
            found = extends_to_iso(phi, h1, h2);
            !found
        });
    found
}

/// An iso `ψ: H -> H'` with `ψ ∘ h = h' ∘ φ`.
fn extends_to_iso(phi: &GraphMorphism, h1: &GraphMorphism, h2: &GraphMorphism) -> bool {
    let (x1, x2) = (h1.cod(), h2.cod());
    let mut vreq = vec![None; x1.vertex_count()];
    let mut ereq = vec![None; x1.edge_count()];
    for i in 0..phi.dom().vertex_count() {
        let want = h2.v(phi.v(i));
        match vreq[h1.v(i)] {
            Some(w) if w != want => return false,
            _ => vreq[h1.v(i)] = Some(want),
        }
    }
    for j in 0..phi.dom().edge_count() {
        let want = h2.e(phi.e(j));
        match ereq[h1.e(j)] {
            Some(w) if w != want => return false,
            _ => ereq[h1.e(j)] = Some(want),
        }
    }
    let found = HomSearch::new(x1, x2)
        .mono(true)
        .vertex_filter(|i, w| vreq[i].is_none_or(|r| r == w))
        .edge_filter(|j, e| ereq[j].is_none_or(|r| r == e))
        .first()
        .is_some();
    found
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::environment::build_delta_category;
    use crate::environment::tests::{g, hom, running, system};
    use crate::rules::{close_rule_system, Rule, RuleKind};
    use crate::search::are_isomorphic;

    fn dpom() -> Environment {
        Environment::new(RuleKind::DpoMono)
    }

    fn degrees(h: &Graph) -> Vec<(usize, usize, usize)> {
        let mut d: Vec<_> = (0..h.vertex_count()).map(|v| h.degree_signature(v)).collect();
        d.sort();
        d
    }

    #[test]
    fn running_example_replaces_both_edges_and_shares_the_new_vertex() {
        let r = running();
        let sys = system(&r, false);
        let (delta, out) = gct::<&str>(&[&sys], &r.parallel, &dpom(), None, ConeMode::First).unwrap();
        assert_eq!(build_context_diagram(&delta).arrows().len(), 4);
        let res = &out.results()[0];
        assert_eq!(res.context_graph().vertex_count(), 2);
        assert_eq!(res.context_graph().edge_count(), 0);
        assert!(res.f().is_injective());
        assert!(res.cones.validate(&delta).is_empty());
        let h = res.result();
        assert_eq!((h.vertex_count(), h.edge_count()), (3, 4));
        assert_eq!(degrees(h), vec![(0, 2, 0), (2, 0, 0), (2, 2, 0)]);
        for (i, rhs) in res.rhs.iter().enumerate() {
            let t = delta.object(i);
            let want = if t.rule.name == "rho" { (3, 0) } else { (3, 2) };
            assert_eq!((rhs.object.vertex_count(), rhs.object.edge_count()), want);
        }
    }

    #[test]
    fn adding_the_swap_gives_the_same_result() {
        let r = running();
        let a = system(&r, false);
        let b = system(&r, true);
        let (_, x) = gct::<&str>(&[&a], &r.parallel, &dpom(), None, ConeMode::First).unwrap();
        let (_, y) = gct::<&str>(&[&b], &r.parallel, &dpom(), None, ConeMode::First).unwrap();
        assert!(are_isomorphic(x.results()[0].result(), y.results()[0].result()));
    }

    #[test]
    fn swap_merges_the_two_added_vertices() {
        let r = running();
        let two = g(&["a", "b"], &[]);
        let (_, x) = gct::<&str>(&[&system(&r, false)], &two, &dpom(), None, ConeMode::First).unwrap();
        let h = x.results()[0].result();
        assert_eq!((h.vertex_count(), h.edge_count()), (4, 0));
        let (_, y) = gct::<&str>(&[&system(&r, true)], &two, &dpom(), None, ConeMode::First).unwrap();
        let h = y.results()[0].result();
        assert_eq!((h.vertex_count(), h.edge_count()), (3, 0));
    }

    #[test]
    fn empty_delta_returns_the_input() {
        let r = running();
        let one = g(&["a"], &[]);
        let (delta, out) = gct::<&str>(&[&system(&r, false)], &one, &dpom(), None, ConeMode::All).unwrap();
        assert!(delta.is_empty());
        let res = &out.results()[0];
        assert!(res.f().is_identity());
        assert_eq!(res.result(), &one);
        assert!(res.h().is_identity());
    }

    #[test]
    fn deleting_and_preserving_the_same_edge_is_not_coherent() {
        let arrow = g(&["x", "y"], &[("e", "x", "y")]);
        let disc = g(&["x", "y"], &[]);
        let del = Arc::new(
            Rule::new("del", RuleKind::DpoMono, hom(&disc, &arrow, &[0, 1], &[]), GraphMorphism::identity(&disc), None)
                .unwrap(),
        );
        let keep = Arc::new(
            Rule::new(
                "keep",
                RuleKind::DpoMono,
                GraphMorphism::identity(&arrow),
                GraphMorphism::identity(&arrow),
                None,
            )
            .unwrap(),
        );
        let sys = close_rule_system("S", RuleKind::DpoMono, vec![del, keep], vec![]).unwrap();
        let (delta, out) = gct::<&str>(&[&sys], &arrow, &dpom(), None, ConeMode::All).unwrap();
        assert_eq!(delta.objects().len(), 2);
        assert!(!out.is_coherent());
    }

    #[test]
    fn one_object_delta_is_its_own_transformation() {
        let r = running();
        let sys = system(&r, false);
        let delta = build_delta_category(&sys, &r.parallel, &dpom()).unwrap();
        for o in delta.objects() {
            let sub = delta.restrict(&[o.name.as_str()]).unwrap();
            let out = run_pipeline(&sub, ConeMode::All).unwrap();
            let res = &out.results()[0];
            assert_eq!(res.context_graph(), o.transformation.context());
            assert_eq!(res.c[0], o.transformation.k);
            assert!(are_isomorphic(res.result(), o.transformation.result()));
        }
    }

    #[test]
    fn h_morphisms_are_functorial() {
        let r = running();
        let delta = build_delta_category(&system(&r, true), &r.parallel, &dpom()).unwrap();
        let out = run_pipeline(&delta, ConeMode::First).unwrap();
        let res = &out.results()[0];
        let n = delta.morphisms().len();
        for i in 0..n {
            if delta.morphisms()[i].mu.is_identity() {
                assert!(res.h_mu[i].is_identity());
            }
            for j in 0..n {
                if delta.morphisms()[j].dst != delta.morphisms()[i].src {
                    continue;
                }
                let c = delta.compose_index(i, j).unwrap();
                assert_eq!(res.h_mu[c], res.h_mu[i].after(&res.h_mu[j]));
            }
        }
    }

    #[test]
    fn span_isomorphism_ignores_names() {
        let r = running();
        let (_, out) = gct::<&str>(&[&system(&r, false)], &r.parallel, &dpom(), None, ConeMode::First).unwrap();
        let res = &out.results()[0];
        assert!(spans_isomorphic((res.f(), res.h()), (res.f(), res.h())));
        let id = GraphMorphism::identity(res.context_graph());
        assert!(!spans_isomorphic((res.f(), res.h()), (res.f(), &id)));
    }
}
