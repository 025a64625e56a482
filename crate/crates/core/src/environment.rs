//! Direct transformations, the morphisms between them, and the category
//! Δ of transformations of one input graph generated by a rule system.
//!
//! Δ is built from matches only: every object comes from a match of one of
//! the system's rules, and every non-identity morphism is induced by a rule
//! morphism together with its target transformation. Objects are keyed by
//! `(rule, match, co-match)`. The construction of each transformation is
//! deterministic, so two objects with the same key would be equal.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::cat_ops::{
    check_gluing_condition, final_pullback_complement, is_pullback_square, is_pushout_square,
    pullback, pushout, pushout_complement, CatError, GluingFailure, GluingViolation,
};
use crate::graph::Graph;
use crate::morphism::GraphMorphism;
use crate::rules::{check_rule_morphism, Rule, RuleKind, RuleMorphism, RuleSystem};
use crate::search::{enumerate_homomorphisms, HomSearch};

/// A set of transformation kinds; sums are unions.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Environment {
    kinds: BTreeSet<RuleKind>,
}

impl Environment {
    pub fn new(kind: RuleKind) -> Self {
        Environment {
            kinds: BTreeSet::from([kind]),
        }
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn sum(&self, other: &Environment) -> Environment {
        Environment {
            kinds: self.kinds.union(&other.kinds).copied().collect(),
        }
    }

    pub fn supports(&self, kind: RuleKind) -> bool {
        self.kinds.contains(&kind)
    }

    pub fn kinds(&self) -> impl Iterator<Item = RuleKind> + '_ {
        self.kinds.iter().copied()
    }
}

impl fmt::Display for Environment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<_> = self.kinds.iter().map(|k| k.as_str()).collect();
        if names.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&names.join("+"))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EnvError {
    #[error("match does not start at the left-hand side of `{0}`")]
    MatchShape(String),
    #[error("match is not monic")]
    NotMonicMatch,
    #[error(transparent)]
    Gluing(GluingFailure),
    #[error("PBPO transformation needs a co-match")]
    MissingCoMatch,
    #[error("co-match does not type the match: {0}")]
    CoMatch(&'static str),
    #[error("rule morphism `{morphism}` does not end at the rule of the transformation")]
    RuleMismatch { morphism: String },
    #[error("rule morphism `{morphism}` is invalid: {reason}")]
    InvalidRuleMorphism { morphism: String, reason: String },
    #[error("no unique lift for {item} while inducing d")]
    NoLift { item: String },
    #[error("environment {env} does not provide kind {kind}")]
    Unsupported { env: String, kind: RuleKind },
    #[error("rule name `{0}` occurs in more than one system")]
    DuplicateRule(String),
    #[error("unknown object `{0}`")]
    UnknownObject(String),
    #[error(transparent)]
    Cat(CatError),
}

impl From<CatError> for EnvError {
    fn from(e: CatError) -> Self {
        match e {
            CatError::Gluing(g) => EnvError::Gluing(g),
            CatError::NotMonic("m") => EnvError::NotMonicMatch,
            other => EnvError::Cat(other),
        }
    }
}

pub fn check_gluing(m: &GraphMorphism, rule: &Rule) -> Vec<GluingViolation> {
    check_gluing_condition(m, &rule.l)
}

/// `t_G: G -> T_L` with the induced `t_D` and `t_H`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoMatch {
    pub t_g: GraphMorphism,
    pub t_d: GraphMorphism,
    pub t_h: GraphMorphism,
}

/// ```text
/// L <-l- K -r-> R
/// m|     |k     |n
/// G <-f- D -g-> H
/// ```
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DirectTransformation {
    pub rule: Arc<Rule>,
    pub m: GraphMorphism,
    pub k: GraphMorphism,
    pub f: GraphMorphism,
    pub n: GraphMorphism,
    pub g: GraphMorphism,
    pub typing: Option<CoMatch>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TransformationViolation {
    #[error("{0} has the wrong domain or codomain")]
    Shape(&'static str),
    #[error("match is not monic")]
    NotMonicMatch,
    #[error("left square is not a {0}")]
    LeftSquare(&'static str),
    #[error("right square is not a pushout")]
    RightSquare,
    #[error("typing condition fails: {0}")]
    Typing(&'static str),
}

impl DirectTransformation {
    pub fn kind(&self) -> RuleKind {
        self.rule.kind
    }

    pub fn input(&self) -> &Arc<Graph> {
        self.m.cod()
    }

    /// The context object `D`.
    pub fn context(&self) -> &Arc<Graph> {
        self.f.dom()
    }

    pub fn result(&self) -> &Arc<Graph> {
        self.g.cod()
    }

    pub fn t_g(&self) -> Option<&GraphMorphism> {
        self.typing.as_ref().map(|t| &t.t_g)
    }

    pub fn validate(&self) -> Vec<TransformationViolation> {
        use TransformationViolation as V;
        let rule = &*self.rule;
        let mut out = Vec::new();
        let shapes = [
            ("m", self.m.dom() == rule.lhs() && self.m.is_valid()),
            ("k", self.k.dom() == rule.interface() && self.k.cod() == self.context() && self.k.is_valid()),
            ("f", self.f.cod() == self.input() && self.f.is_valid()),
            ("n", self.n.dom() == rule.rhs() && self.n.cod() == self.result() && self.n.is_valid()),
            ("g", self.g.dom() == self.context() && self.g.is_valid()),
        ];
        for (name, ok) in shapes {
            if !ok {
                out.push(V::Shape(name));
            }
        }
        if !out.is_empty() {
            return out;
        }
        if rule.kind.is_mono() && !self.m.is_injective() {
            out.push(V::NotMonicMatch);
        }
        if !is_pushout_square(&self.k, &rule.r, &self.g, &self.n).unwrap_or(false) {
            out.push(V::RightSquare);
        }
        match rule.kind {
            k if k.is_dpo() => {
                if !is_pushout_square(&rule.l, &self.k, &self.m, &self.f).unwrap_or(false) {
                    out.push(V::LeftSquare("pushout"));
                }
            }
            k if k.is_sqpo() => {
                if !self.is_final_pullback_complement() {
                    out.push(V::LeftSquare("final pullback complement"));
                }
            }
            _ => self.validate_typing(&mut out),
        }
        out
    }

    /// A pullback square whose `(f, k)` is isomorphic to the constructed FPBC.
    fn is_final_pullback_complement(&self) -> bool {
        let l = &self.rule.l;
        if !is_pullback_square(&self.k, l, &self.f, &self.m).unwrap_or(false) {
            return false;
        }
        let Ok(c) = final_pullback_complement(&self.m, l) else {
            return false;
        };
        let d = self.context();
        if d.vertex_count() != c.object.vertex_count() || d.edge_count() != c.object.edge_count() {
            return false;
        }
        let (f, fc) = (&self.f, &c.f);
        let found = HomSearch::new(d, &c.object)
            .mono(true)
            .vertex_filter(|i, w| fc.v(w) == f.v(i))
            .edge_filter(|j, e| fc.e(e) == f.e(j))
            .collect()
            .iter()
            .any(|phi| phi.after(&self.k) == c.k);
        found
    }

    fn validate_typing(&self, out: &mut Vec<TransformationViolation>) {
        use TransformationViolation as V;
        let (Some(rt), Some(ct)) = (&self.rule.typing, &self.typing) else {
            out.push(V::Typing("PBPO transformation without co-match"));
            return;
        };
        let fits = ct.t_g.dom() == self.input()
            && ct.t_g.cod() == rt.t_lhs()
            && ct.t_d.dom() == self.context()
            && ct.t_d.cod() == rt.t_interface()
            && ct.t_h.dom() == self.result()
            && ct.t_h.cod() == rt.t_rhs()
            && [&ct.t_g, &ct.t_d, &ct.t_h].iter().all(|m| m.is_valid());
        if !fits {
            out.push(V::Shape("co-match"));
            return;
        }
        if ct.t_g.after(&self.m) != rt.t_l {
            out.push(V::Typing("t_G ∘ m = t_L"));
        }
        if !is_pullback_square(&self.f, &ct.t_d, &ct.t_g, &rt.u).unwrap_or(false) {
            out.push(V::LeftSquare("pullback"));
        }
        if self.f.after(&self.k) != self.m.after(&self.rule.l) {
            out.push(V::Typing("f ∘ k = m ∘ l"));
        }
        if ct.t_d.after(&self.k) != rt.t_k {
            out.push(V::Typing("t_D ∘ k = t_K"));
        }
        if ct.t_h.after(&self.g) != rt.v.after(&ct.t_d) {
            out.push(V::Typing("t_H ∘ g = v ∘ t_D"));
        }
        if ct.t_h.after(&self.n) != rt.t_r {
            out.push(V::Typing("t_H ∘ n = t_R"));
        }
    }
}

/// Builds the transformation of `rule` at match `m` (and co-match `t_g` for PBPO).
pub fn direct_transformation(
    rule: &Arc<Rule>,
    m: &GraphMorphism,
    t_g: Option<&GraphMorphism>,
) -> Result<DirectTransformation, EnvError> {
    if m.dom() != rule.lhs() || !m.is_valid() {
        return Err(EnvError::MatchShape(rule.name.clone()));
    }
    if rule.kind.is_mono() && !m.is_injective() {
        return Err(EnvError::NotMonicMatch);
    }
    let (k, f, t_d) = match rule.kind {
        kind if kind.is_dpo() => {
            let c = pushout_complement(m, &rule.l)?;
            (c.k, c.f, None)
        }
        kind if kind.is_sqpo() => {
            let c = final_pullback_complement(m, &rule.l)?;
            (c.k, c.f, None)
        }
        _ => {
            let t = rule.typing.as_ref().expect("PBPO rules are typed");
            let t_g = t_g.ok_or(EnvError::MissingCoMatch)?;
            if t_g.dom() != m.cod() || t_g.cod() != t.t_lhs() || !t_g.is_valid() {
                return Err(EnvError::CoMatch("t_G must map G to T_L"));
            }
            if t_g.after(m) != t.t_l {
                return Err(EnvError::CoMatch("t_G ∘ m ≠ t_L"));
            }
            let pb = pullback(t_g, &t.u)?;
            let k = pb
                .factor(&m.after(&rule.l), &t.t_k)
                .expect("t_G ∘ m ∘ l = u ∘ t_K");
            (k, pb.p_b, Some(pb.p_c))
        }
    };
    let po = pushout(&k, &rule.r)?;
    let typing = match (t_d, t_g, &rule.typing) {
        (Some(t_d), Some(t_g), Some(t)) => {
            let t_h = po
                .factor(&t.v.after(&t_d), &t.t_r)
                .expect("v ∘ t_D ∘ k = t_R ∘ r");
            Some(CoMatch {
                t_g: t_g.clone(),
                t_d,
                t_h,
            })
        }
        _ => None,
    };
    Ok(DirectTransformation {
        rule: rule.clone(),
        m: m.clone(),
        k,
        f,
        n: po.in_c,
        g: po.in_b,
        typing,
    })
}

/// Co-matches `t_G: G -> T_L` with `t_G ∘ m = t_L`, in search order.
pub fn co_matches(rule: &Rule, m: &GraphMorphism) -> Vec<GraphMorphism> {
    let Some(t) = &rule.typing else {
        return Vec::new();
    };
    let g = m.cod();
    let mut vreq = vec![None; g.vertex_count()];
    let mut ereq = vec![None; g.edge_count()];
    for (y, &w) in m.vmap().iter().enumerate() {
        match vreq[w] {
            Some(old) if old != t.t_l.v(y) => return Vec::new(),
            _ => vreq[w] = Some(t.t_l.v(y)),
        }
    }
    for (y, &w) in m.emap().iter().enumerate() {
        match ereq[w] {
            Some(old) if old != t.t_l.e(y) => return Vec::new(),
            _ => ereq[w] = Some(t.t_l.e(y)),
        }
    }
    let found = HomSearch::new(g, t.t_lhs())
        .vertex_filter(|i, w| vreq[i].is_none_or(|r| r == w))
        .edge_filter(|j, d| ereq[j].is_none_or(|r| r == d))
        .collect();
    found
}

/// A match that produced no transformation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Skipped {
    pub rule: String,
    pub m: GraphMorphism,
    pub reason: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Derivation {
    pub transformations: Vec<DirectTransformation>,
    pub skipped: Vec<Skipped>,
}

/// Every transformation of `g` by `rule`, in match order. Monic matches only
/// for the m-variants; for PBPO, one per `(match, co-match)` pair.
pub fn derive_direct_transformations(rule: &Arc<Rule>, g: &Arc<Graph>) -> Derivation {
    let mut out = Derivation::default();
    for m in enumerate_homomorphisms(rule.lhs(), g, rule.kind.is_mono()) {
        let attempts: Vec<Option<GraphMorphism>> = if rule.kind == RuleKind::Pbpo {
            co_matches(rule, &m).into_iter().map(Some).collect()
        } else {
            vec![None]
        };
        if attempts.is_empty() {
            out.skipped.push(Skipped {
                rule: rule.name.clone(),
                m: m.clone(),
                reason: "no co-match types this match".into(),
            });
        }
        for t_g in attempts {
            match direct_transformation(rule, &m, t_g.as_ref()) {
                Ok(t) => out.transformations.push(t),
                Err(e) => out.skipped.push(Skipped {
                    rule: rule.name.clone(),
                    m: m.clone(),
                    reason: e.to_string(),
                }),
            }
        }
    }
    out
}

/// `μ: src -> dst` over a rule morphism `σ`; `d: D' -> D` runs backwards.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransformationMorphism {
    pub src: Arc<DirectTransformation>,
    pub dst: Arc<DirectTransformation>,
    pub sigma: RuleMorphism,
    pub d: GraphMorphism,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MorphismViolation {
    #[error("transformations have different input graphs")]
    InputMismatch,
    #[error("rule morphism does not connect the two rules")]
    RuleMismatch,
    #[error("rule morphism is invalid: {0}")]
    RuleMorphism(String),
    #[error("d has the wrong domain or codomain")]
    Shape,
    #[error("condition fails: {0}")]
    Condition(&'static str),
}

impl TransformationMorphism {
    pub fn identity(t: &Arc<DirectTransformation>) -> Self {
        TransformationMorphism {
            src: t.clone(),
            dst: t.clone(),
            sigma: RuleMorphism::identity(&t.rule),
            d: GraphMorphism::identity(t.context()),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.src == self.dst && self.sigma.is_identity() && self.d.is_identity()
    }

    /// `outer ∘ inner`.
    pub fn compose(outer: &Self, inner: &Self) -> Option<Self> {
        if inner.dst != outer.src {
            return None;
        }
        Some(TransformationMorphism {
            src: inner.src.clone(),
            dst: outer.dst.clone(),
            sigma: RuleMorphism::compose(&outer.sigma, &inner.sigma).ok()?,
            d: inner.d.after(&outer.d),
        })
    }

    pub fn same_maps(&self, other: &Self) -> bool {
        self.src == other.src && self.dst == other.dst && self.sigma.same_maps(&other.sigma) && self.d == other.d
    }

    pub fn validate(&self) -> Vec<MorphismViolation> {
        use MorphismViolation as V;
        let (a, b, s) = (&*self.src, &*self.dst, &self.sigma);
        if a.input() != b.input() {
            return vec![V::InputMismatch];
        }
        if s.src != a.rule || s.dst != b.rule {
            return vec![V::RuleMismatch];
        }
        let rv = check_rule_morphism(s);
        if !rv.is_empty() {
            let text = rv.iter().map(ToString::to_string).collect::<Vec<_>>().join("; ");
            return vec![V::RuleMorphism(text)];
        }
        if self.d.dom() != b.context() || self.d.cod() != a.context() || !self.d.is_valid() {
            return vec![V::Shape];
        }
        let mut out = Vec::new();
        if b.m.after(&s.s1) != a.m {
            out.push(V::Condition("m' ∘ σ1 = m"));
        }
        if a.f.after(&self.d) != b.f {
            out.push(V::Condition("f ∘ d = f'"));
        }
        if self.d.after(&b.k.after(&s.s2)) != a.k {
            out.push(V::Condition("d ∘ k' ∘ σ2 = k"));
        }
        if let (Some(ta), Some(tb), Some(s4), Some(s5)) = (&a.typing, &b.typing, &s.s4, &s.s5) {
            if s4.after(&tb.t_g) != ta.t_g {
                out.push(V::Condition("σ4 ∘ t_G' = t_G"));
            }
            if ta.t_d.after(&self.d) != s5.after(&tb.t_d) {
                out.push(V::Condition("t_D ∘ d = σ5 ∘ t_D'"));
            }
        }
        out
    }
}

/// The match (and co-match) that `sigma` induces from `dst`.
pub fn induced_match(sigma: &RuleMorphism, dst: &DirectTransformation) -> (GraphMorphism, Option<GraphMorphism>) {
    let m = dst.m.after(&sigma.s1);
    let t_g = match (&sigma.s4, dst.t_g()) {
        (Some(s4), Some(t)) => Some(s4.after(t)),
        _ => None,
    };
    (m, t_g)
}

/// The transformation at the induced match, with the unique `μ` into `dst`.
pub fn induce_subsumption(
    sigma: &RuleMorphism,
    dst: &Arc<DirectTransformation>,
) -> Result<TransformationMorphism, EnvError> {
    if sigma.dst != dst.rule {
        return Err(EnvError::RuleMismatch {
            morphism: sigma.name.clone(),
        });
    }
    let rv = check_rule_morphism(sigma);
    if !rv.is_empty() {
        return Err(EnvError::InvalidRuleMorphism {
            morphism: sigma.name.clone(),
            reason: rv.iter().map(ToString::to_string).collect::<Vec<_>>().join("; "),
        });
    }
    let (m, t_g) = induced_match(sigma, dst);
    let src = Arc::new(direct_transformation(&sigma.src, &m, t_g.as_ref())?);
    let d = induce_d(sigma, &src, dst)?;
    Ok(TransformationMorphism {
        src,
        dst: dst.clone(),
        sigma: sigma.clone(),
        d,
    })
}

fn induce_d(
    sigma: &RuleMorphism,
    src: &DirectTransformation,
    dst: &DirectTransformation,
) -> Result<GraphMorphism, EnvError> {
    let (dd, d) = (dst.context(), src.context());
    let no_lift = |what: &str, id: &str| EnvError::NoLift {
        item: format!("{what} `{id}`"),
    };
    match src.kind() {
        k if k.is_dpo() => {
            // f is monic: d is f⁻¹ ∘ f'
            let vmap = (0..dd.vertex_count())
                .map(|x| unique(d.vertex_count(), |w| src.f.v(w) == dst.f.v(x)).ok_or_else(|| no_lift("vertex", dd.vertex(x))))
                .collect::<Result<Vec<_>, _>>()?;
            let emap = (0..dd.edge_count())
                .map(|x| unique(d.edge_count(), |w| src.f.e(w) == dst.f.e(x)).ok_or_else(|| no_lift("edge", dd.edge(x))))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(GraphMorphism::from_raw(dd.clone(), d.clone(), vmap, emap))
        }
        k if k.is_sqpo() => {
            let rule = &*src.rule;
            let (mv, me) = src.m.image_flags();
            let mut vmap = Vec::with_capacity(dd.vertex_count());
            for x in 0..dd.vertex_count() {
                let gx = dst.f.v(x);
                let w = if mv[gx] {
                    let y = src.m.vmap().iter().position(|&w| w == gx).expect("in image");
                    unique(rule.interface().vertex_count(), |p| {
                        rule.l.v(p) == y && dst.k.v(sigma.s2.v(p)) == x
                    })
                    .map(|p| src.k.v(p))
                } else {
                    unique(d.vertex_count(), |w| src.f.v(w) == gx)
                };
                vmap.push(w.ok_or_else(|| no_lift("vertex", dd.vertex(x)))?);
            }
            let mut emap = Vec::with_capacity(dd.edge_count());
            for x in 0..dd.edge_count() {
                let gx = dst.f.e(x);
                let w = if me[gx] {
                    let y = src.m.emap().iter().position(|&w| w == gx).expect("in image");
                    unique(rule.interface().edge_count(), |p| {
                        rule.l.e(p) == y && dst.k.e(sigma.s2.e(p)) == x
                    })
                    .map(|p| src.k.e(p))
                } else {
                    let (s, t) = (vmap[dd.src(x)], vmap[dd.tgt(x)]);
                    unique(d.edge_count(), |w| src.f.e(w) == gx && d.src(w) == s && d.tgt(w) == t)
                };
                emap.push(w.ok_or_else(|| no_lift("edge", dd.edge(x)))?);
            }
            Ok(GraphMorphism::from_raw(dd.clone(), d.clone(), vmap, emap))
        }
        _ => {
            // D is the pullback of (t_G, u): d = ⟨f', σ5 ∘ t_D'⟩
            let (ta, tb) = (src.typing.as_ref(), dst.typing.as_ref());
            let (Some(ta), Some(tb), Some(s5)) = (ta, tb, sigma.s5.as_ref()) else {
                return Err(EnvError::MissingCoMatch);
            };
            let vmap = (0..dd.vertex_count())
                .map(|x| {
                    let (g, t) = (dst.f.v(x), s5.v(tb.t_d.v(x)));
                    unique(d.vertex_count(), |w| src.f.v(w) == g && ta.t_d.v(w) == t)
                        .ok_or_else(|| no_lift("vertex", dd.vertex(x)))
                })
                .collect::<Result<Vec<_>, _>>()?;
            let emap = (0..dd.edge_count())
                .map(|x| {
                    let (g, t) = (dst.f.e(x), s5.e(tb.t_d.e(x)));
                    unique(d.edge_count(), |w| src.f.e(w) == g && ta.t_d.e(w) == t)
                        .ok_or_else(|| no_lift("edge", dd.edge(x)))
                })
                .collect::<Result<Vec<_>, _>>()?;
            Ok(GraphMorphism::from_raw(dd.clone(), d.clone(), vmap, emap))
        }
    }
}

fn unique(n: usize, pred: impl Fn(usize) -> bool) -> Option<usize> {
    let mut hits = (0..n).filter(|&i| pred(i));
    let first = hits.next()?;
    hits.next().is_none().then_some(first)
}

/// `G <-f- D <-k- K -r-> R`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartialTransformation {
    pub f: GraphMorphism,
    pub k: GraphMorphism,
    pub r: GraphMorphism,
}

impl PartialTransformation {
    pub fn input(&self) -> &Arc<Graph> {
        self.f.cod()
    }

    pub fn context(&self) -> &Arc<Graph> {
        self.f.dom()
    }

    pub fn interface(&self) -> &Arc<Graph> {
        self.k.dom()
    }

    pub fn rhs(&self) -> &Arc<Graph> {
        self.r.cod()
    }
}

/// `(d: D' -> D, σ2: K -> K', σ3: R -> R')` between partial transformations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartialMorphism {
    pub d: GraphMorphism,
    pub s2: GraphMorphism,
    pub s3: GraphMorphism,
}

impl PartialMorphism {
    /// `f ∘ d = f'`, `d ∘ k' ∘ σ2 = k` and `r' ∘ σ2 = σ3 ∘ r`.
    pub fn commutes(&self, src: &PartialTransformation, dst: &PartialTransformation) -> bool {
        src.f.after(&self.d) == dst.f
            && self.d.after(&dst.k.after(&self.s2)) == src.k
            && dst.r.after(&self.s2) == self.s3.after(&src.r)
    }
}

pub fn to_partial(t: &DirectTransformation) -> PartialTransformation {
    PartialTransformation {
        f: t.f.clone(),
        k: t.k.clone(),
        r: t.rule.r.clone(),
    }
}

pub fn to_partial_morphism(mu: &TransformationMorphism) -> PartialMorphism {
    PartialMorphism {
        d: mu.d.clone(),
        s2: mu.sigma.s2.clone(),
        s3: mu.sigma.s3.clone(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeltaObject {
    pub name: String,
    pub transformation: Arc<DirectTransformation>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeltaMorphism {
    pub name: String,
    pub src: usize,
    pub dst: usize,
    pub mu: TransformationMorphism,
}

/// A rule morphism that could not be lifted to a transformation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InductionFailure {
    pub morphism: String,
    pub target: String,
    pub reason: String,
}

/// Transformations of one input graph by a rule system, and the morphisms
/// between them that the system induces.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeltaCategory {
    input: Arc<Graph>,
    objects: Vec<DeltaObject>,
    morphisms: Vec<DeltaMorphism>,
    failures: Vec<InductionFailure>,
    skipped: Vec<Skipped>,
}

impl DeltaCategory {
    pub fn input(&self) -> &Arc<Graph> {
        &self.input
    }

    pub fn objects(&self) -> &[DeltaObject] {
        &self.objects
    }

    pub fn morphisms(&self) -> &[DeltaMorphism] {
        &self.morphisms
    }

    pub fn failures(&self) -> &[InductionFailure] {
        &self.failures
    }

    pub fn skipped(&self) -> &[Skipped] {
        &self.skipped
    }

    pub fn object(&self, i: usize) -> &Arc<DirectTransformation> {
        &self.objects[i].transformation
    }

    pub fn object_index(&self, name: &str) -> Option<usize> {
        self.objects.iter().position(|o| o.name == name)
    }

    pub fn is_empty(&self) -> bool {
        self.objects.is_empty()
    }

    pub fn non_identities(&self) -> impl Iterator<Item = &DeltaMorphism> + '_ {
        self.morphisms.iter().filter(|m| !m.mu.is_identity())
    }

    pub fn hom(&self, src: usize, dst: usize) -> impl Iterator<Item = &DeltaMorphism> + '_ {
        self.morphisms
            .iter()
            .filter(move |m| m.src == src && m.dst == dst)
    }

    /// The rule-functor image of morphism `i`.
    pub fn rule_morphism(&self, i: usize) -> &RuleMorphism {
        &self.morphisms[i].mu.sigma
    }

    /// Index of the composite `outer ∘ inner`, when both are in Δ.
    pub fn compose_index(&self, outer: usize, inner: usize) -> Option<usize> {
        let c = TransformationMorphism::compose(&self.morphisms[outer].mu, &self.morphisms[inner].mu)?;
        self.morphisms.iter().position(|m| m.mu.same_maps(&c))
    }

    /// An object receiving exactly one morphism from every object.
    pub fn terminal_object(&self) -> Option<usize> {
        (0..self.objects.len()).find(|&t| (0..self.objects.len()).all(|s| self.hom(s, t).count() == 1))
    }

    /// The full subcategory on the named objects, in Δ's order.
    pub fn restrict<S: AsRef<str>>(&self, names: &[S]) -> Result<DeltaCategory, EnvError> {
        let mut keep = vec![false; self.objects.len()];
        for n in names {
            let i = self
                .object_index(n.as_ref())
                .ok_or_else(|| EnvError::UnknownObject(n.as_ref().to_owned()))?;
            keep[i] = true;
        }
        let mut new_index = vec![usize::MAX; self.objects.len()];
        let mut objects = Vec::new();
        for (i, o) in self.objects.iter().enumerate() {
            if keep[i] {
                new_index[i] = objects.len();
                objects.push(o.clone());
            }
        }
        let morphisms = self
            .morphisms
            .iter()
            .filter(|m| keep[m.src] && keep[m.dst])
            .map(|m| DeltaMorphism {
                src: new_index[m.src],
                dst: new_index[m.dst],
                ..m.clone()
            })
            .collect();
        Ok(DeltaCategory {
            input: self.input.clone(),
            objects,
            morphisms,
            failures: self.failures.clone(),
            skipped: self.skipped.clone(),
        })
    }
}

pub fn build_delta_category(
    system: &RuleSystem,
    g: &Arc<Graph>,
    env: &Environment,
) -> Result<DeltaCategory, EnvError> {
    build_summed_delta(&[system], g, env)
}

/// Δ over several systems at once. No morphism crosses between systems.
pub fn build_summed_delta(
    systems: &[&RuleSystem],
    g: &Arc<Graph>,
    env: &Environment,
) -> Result<DeltaCategory, EnvError> {
    let mut names = BTreeSet::new();
    for s in systems {
        if !env.supports(s.kind) {
            return Err(EnvError::Unsupported {
                env: env.to_string(),
                kind: s.kind,
            });
        }
        for r in s.rules() {
            if !names.insert(r.name.clone()) {
                return Err(EnvError::DuplicateRule(r.name.clone()));
            }
        }
    }
    let mut delta = DeltaCategory {
        input: g.clone(),
        objects: Vec::new(),
        morphisms: Vec::new(),
        failures: Vec::new(),
        skipped: Vec::new(),
    };
    for s in systems {
        for rule in s.rules() {
            let der = derive_direct_transformations(rule, g);
            for t in der.transformations {
                delta.add_object(Arc::new(t));
            }
            delta.skipped.extend(der.skipped);
        }
    }
    for i in 0..delta.objects.len() {
        let t = delta.objects[i].transformation.clone();
        delta.morphisms.push(DeltaMorphism {
            name: format!("id_{}", delta.objects[i].name),
            src: i,
            dst: i,
            mu: TransformationMorphism::identity(&t),
        });
    }
    for s in systems {
        for sigma in s.non_identities() {
            let targets: Vec<usize> = (0..delta.objects.len())
                .filter(|&i| delta.objects[i].transformation.rule == sigma.dst)
                .collect();
            for j in targets {
                let dst = delta.objects[j].transformation.clone();
                match induce_subsumption(sigma, &dst) {
                    Ok(mu) => {
                        let i = delta.add_object(mu.src.clone());
                        let name = format!("{}@{}", sigma.name, delta.objects[j].name);
                        delta.push_morphism(name, i, j, mu);
                    }
                    Err(e) => delta.failures.push(InductionFailure {
                        morphism: sigma.name.clone(),
                        target: delta.objects[j].name.clone(),
                        reason: e.to_string(),
                    }),
                }
            }
        }
    }
    delta.close();
    Ok(delta)
}

impl DeltaCategory {
    /// Index of the object with the same rule and (co-)match, adding it if new.
    fn add_object(&mut self, t: Arc<DirectTransformation>) -> usize {
        let same = |o: &DeltaObject| {
            let u = &o.transformation;
            u.rule == t.rule && u.m == t.m && u.t_g() == t.t_g()
        };
        if let Some(i) = self.objects.iter().position(same) {
            return i;
        }
        let n = self
            .objects
            .iter()
            .filter(|o| o.transformation.rule.name == t.rule.name)
            .count();
        let name = format!("{}#{}", t.rule.name, n);
        if !self.morphisms.is_empty() {
            // a late object still needs its identity
            let i = self.objects.len();
            self.morphisms.push(DeltaMorphism {
                name: format!("id_{name}"),
                src: i,
                dst: i,
                mu: TransformationMorphism::identity(&t),
            });
        }
        self.objects.push(DeltaObject { name, transformation: t });
        self.objects.len() - 1
    }

    fn push_morphism(&mut self, name: String, src: usize, dst: usize, mut mu: TransformationMorphism) {
        // keep the stored object as the canonical endpoint
        mu.src = self.objects[src].transformation.clone();
        mu.dst = self.objects[dst].transformation.clone();
        if !self.morphisms.iter().any(|m| m.mu.same_maps(&mu)) {
            self.morphisms.push(DeltaMorphism { name, src, dst, mu });
        }
    }

    fn close(&mut self) {
        let mut done = 0;
        while done < self.morphisms.len() {
            let n = self.morphisms.len();
            for i in 0..n {
                for j in 0..n {
                    if i.max(j) < done {
                        continue;
                    }
                    let (outer, inner) = (&self.morphisms[i], &self.morphisms[j]);
                    if inner.dst != outer.src || outer.mu.is_identity() || inner.mu.is_identity() {
                        continue;
                    }
                    let Some(c) = TransformationMorphism::compose(&outer.mu, &inner.mu) else {
                        continue;
                    };
                    let name = format!("{}∘{}", outer.name, inner.name);
                    let (src, dst) = (inner.src, outer.dst);
                    self.push_morphism(name, src, dst, c);
                }
            }
            done = n;
        }
    }
}
