//! Rules, subsumption morphisms between rules, and rule systems.
//!
//! PBPO morphisms are checked for commutation only. Unlike the span kinds,
//! their left square is not required to be a pullback.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use thiserror::Error;

use crate::cat_ops::is_pullback_square;
use crate::graph::Graph;
use crate::morphism::GraphMorphism;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RuleKind {
    Dpo,
    DpoMono,
    Sqpo,
    SqpoMono,
    Pbpo,
}

impl RuleKind {
    pub const ALL: [RuleKind; 5] = [
        RuleKind::Dpo,
        RuleKind::DpoMono,
        RuleKind::Sqpo,
        RuleKind::SqpoMono,
        RuleKind::Pbpo,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            RuleKind::Dpo => "DPO",
            RuleKind::DpoMono => "DPOm",
            RuleKind::Sqpo => "SqPO",
            RuleKind::SqpoMono => "SqPOm",
            RuleKind::Pbpo => "PBPO",
        }
    }

    /// Kinds whose matches and subsumptions (first two components) are monic.
    pub fn is_mono(self) -> bool {
        matches!(self, RuleKind::DpoMono | RuleKind::SqpoMono)
    }

    pub fn is_dpo(self) -> bool {
        matches!(self, RuleKind::Dpo | RuleKind::DpoMono)
    }

    pub fn is_sqpo(self) -> bool {
        matches!(self, RuleKind::Sqpo | RuleKind::SqpoMono)
    }
}

impl fmt::Display for RuleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown rule kind `{0}` (expected DPO, DPOm, SqPO, SqPOm or PBPO)")]
pub struct UnknownKind(pub String);

impl FromStr for RuleKind {
    type Err = UnknownKind;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        RuleKind::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| UnknownKind(s.to_owned()))
    }
}

/// The typing part of a PBPO rule.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PbpoTyping {
    /// `T_K -> T_L`
    pub u: GraphMorphism,
    /// `T_K -> T_R`
    pub v: GraphMorphism,
    pub t_l: GraphMorphism,
    pub t_k: GraphMorphism,
    pub t_r: GraphMorphism,
}

impl PbpoTyping {
    pub fn t_lhs(&self) -> &Arc<Graph> {
        self.u.cod()
    }

    pub fn t_interface(&self) -> &Arc<Graph> {
        self.u.dom()
    }

    pub fn t_rhs(&self) -> &Arc<Graph> {
        self.v.cod()
    }
}

/// A rule `L <-l- K -r-> R`, with typing for PBPO.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rule {
    pub name: String,
    pub kind: RuleKind,
    pub l: GraphMorphism,
    pub r: GraphMorphism,
    pub typing: Option<PbpoTyping>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RuleViolation {
    #[error("l and r do not share the interface K")]
    InterfaceMismatch,
    #[error("l not monic")]
    LeftNotMonic,
    #[error("PBPO rule is missing its typing")]
    MissingTyping,
    #[error("only PBPO rules carry a typing")]
    UnexpectedTyping,
    #[error("typing morphism {0} has the wrong domain or codomain")]
    TypingShape(&'static str),
    #[error("left typing square does not commute: t_L ∘ l ≠ u ∘ t_K")]
    LeftTypingSquare,
    #[error("right typing square does not commute: t_R ∘ r ≠ v ∘ t_K")]
    RightTypingSquare,
    #[error("{0}")]
    Morphism(String),
}

impl Rule {
    /// Builds a rule, rejecting it unless [`check_rule`] passes.
    pub fn new(
        name: impl Into<String>,
        kind: RuleKind,
        l: GraphMorphism,
        r: GraphMorphism,
        typing: Option<PbpoTyping>,
    ) -> Result<Self, RuleError> {
        let rule = Rule {
            name: name.into(),
            kind,
            l,
            r,
            typing,
        };
        let violations = check_rule(&rule);
        if violations.is_empty() {
            Ok(rule)
        } else {
            Err(RuleError::InvalidRule {
                name: rule.name,
                violations,
            })
        }
    }

    pub fn lhs(&self) -> &Arc<Graph> {
        self.l.cod()
    }

    pub fn interface(&self) -> &Arc<Graph> {
        self.l.dom()
    }

    pub fn rhs(&self) -> &Arc<Graph> {
        self.r.cod()
    }
}

pub fn check_rule(rule: &Rule) -> Vec<RuleViolation> {
    let mut out = Vec::new();
    for m in [&rule.l, &rule.r] {
        for v in m.validate() {
            out.push(RuleViolation::Morphism(v.to_string()));
        }
    }
    if !out.is_empty() {
        return out;
    }
    if rule.l.dom() != rule.r.dom() {
        out.push(RuleViolation::InterfaceMismatch);
    }
    if rule.kind.is_dpo() && !rule.l.is_injective() {
        out.push(RuleViolation::LeftNotMonic);
    }
    match (&rule.typing, rule.kind) {
        (None, RuleKind::Pbpo) => out.push(RuleViolation::MissingTyping),
        (Some(_), k) if k != RuleKind::Pbpo => out.push(RuleViolation::UnexpectedTyping),
        (Some(t), _) => check_typing(rule, t, &mut out),
        (None, _) => {}
    }
    out
}

fn check_typing(rule: &Rule, t: &PbpoTyping, out: &mut Vec<RuleViolation>) {
    let named = [("u", &t.u), ("v", &t.v), ("t_L", &t.t_l), ("t_K", &t.t_k), ("t_R", &t.t_r)];
    for (name, m) in named {
        if !m.is_valid() {
            out.push(RuleViolation::TypingShape(name));
            return;
        }
    }
    let shapes = [
        ("v", t.v.dom() == t.u.dom()),
        ("t_L", t.t_l.dom() == rule.lhs() && t.t_l.cod() == t.u.cod()),
        ("t_K", t.t_k.dom() == rule.interface() && t.t_k.cod() == t.u.dom()),
        ("t_R", t.t_r.dom() == rule.rhs() && t.t_r.cod() == t.v.cod()),
    ];
    let mut shaped = true;
    for (name, ok) in shapes {
        if !ok {
            out.push(RuleViolation::TypingShape(name));
            shaped = false;
        }
    }
    if !shaped {
        return;
    }
    if t.t_l.after(&rule.l) != t.u.after(&t.t_k) {
        out.push(RuleViolation::LeftTypingSquare);
    }
    if t.t_r.after(&rule.r) != t.v.after(&t.t_k) {
        out.push(RuleViolation::RightTypingSquare);
    }
}

/// A subsumption `σ: src -> dst`. For PBPO, `s4: T_L' -> T_L` and `s5: T_K' -> T_K`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RuleMorphism {
    pub name: String,
    pub src: Arc<Rule>,
    pub dst: Arc<Rule>,
    pub s1: GraphMorphism,
    pub s2: GraphMorphism,
    pub s3: GraphMorphism,
    pub s4: Option<GraphMorphism>,
    pub s5: Option<GraphMorphism>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RuleMorphismViolation {
    #[error("source and target rules have different kinds")]
    KindMismatch,
    #[error("component {0} has the wrong domain or codomain")]
    Shape(&'static str),
    #[error("component {0} is not a graph morphism")]
    Invalid(&'static str),
    #[error("left square does not commute: σ1 ∘ l ≠ l' ∘ σ2")]
    LeftSquare,
    #[error("right square does not commute: σ3 ∘ r ≠ r' ∘ σ2")]
    RightSquare,
    #[error("left square is not a pullback")]
    NotPullback,
    #[error("{0} is not monic")]
    NotMonic(&'static str),
    #[error("PBPO morphism needs σ4 and σ5")]
    MissingTypingMaps,
    #[error("σ4 and σ5 are only allowed between PBPO rules")]
    UnexpectedTypingMaps,
    #[error("σ4 ∘ t_L' ∘ σ1 ≠ t_L")]
    LeftTyping,
    #[error("σ5 ∘ t_K' ∘ σ2 ≠ t_K")]
    InterfaceTyping,
    #[error("u ∘ σ5 ≠ σ4 ∘ u'")]
    TypeSquare,
}

impl RuleMorphism {
    pub fn identity(rule: &Arc<Rule>) -> Self {
        let (s4, s5) = match &rule.typing {
            Some(t) => (
                Some(GraphMorphism::identity(t.t_lhs())),
                Some(GraphMorphism::identity(t.t_interface())),
            ),
            None => (None, None),
        };
        RuleMorphism {
            name: format!("id_{}", rule.name),
            src: rule.clone(),
            dst: rule.clone(),
            s1: GraphMorphism::identity(rule.lhs()),
            s2: GraphMorphism::identity(rule.interface()),
            s3: GraphMorphism::identity(rule.rhs()),
            s4,
            s5,
        }
    }

    pub fn is_identity(&self) -> bool {
        self.src == self.dst
            && self.s1.is_identity()
            && self.s2.is_identity()
            && self.s3.is_identity()
            && self.s4.as_ref().is_none_or(GraphMorphism::is_identity)
            && self.s5.as_ref().is_none_or(GraphMorphism::is_identity)
    }

    /// `outer ∘ inner`, named `outer∘inner`.
    pub fn compose(outer: &RuleMorphism, inner: &RuleMorphism) -> Result<RuleMorphism, RuleError> {
        if inner.dst != outer.src {
            return Err(RuleError::NotComposable {
                outer: outer.name.clone(),
                inner: inner.name.clone(),
            });
        }
        let contra = |a: &Option<GraphMorphism>, b: &Option<GraphMorphism>| match (a, b) {
            (Some(a), Some(b)) => Some(a.after(b)),
            _ => None,
        };
        Ok(RuleMorphism {
            name: format!("{}∘{}", outer.name, inner.name),
            src: inner.src.clone(),
            dst: outer.dst.clone(),
            s1: outer.s1.after(&inner.s1),
            s2: outer.s2.after(&inner.s2),
            s3: outer.s3.after(&inner.s3),
            s4: contra(&inner.s4, &outer.s4),
            s5: contra(&inner.s5, &outer.s5),
        })
    }

    /// Componentwise equality, ignoring names.
    pub fn same_maps(&self, other: &RuleMorphism) -> bool {
        self.src == other.src
            && self.dst == other.dst
            && self.s1 == other.s1
            && self.s2 == other.s2
            && self.s3 == other.s3
            && self.s4 == other.s4
            && self.s5 == other.s5
    }
}

pub fn check_rule_morphism(s: &RuleMorphism) -> Vec<RuleMorphismViolation> {
    use RuleMorphismViolation as V;
    let (a, b) = (&*s.src, &*s.dst);
    let mut out = Vec::new();
    if a.kind != b.kind {
        out.push(V::KindMismatch);
        return out;
    }
    let comps = [
        ("σ1", &s.s1, a.lhs(), b.lhs()),
        ("σ2", &s.s2, a.interface(), b.interface()),
        ("σ3", &s.s3, a.rhs(), b.rhs()),
    ];
    for (name, m, dom, cod) in comps {
        if m.dom() != dom || m.cod() != cod {
            out.push(V::Shape(name));
        } else if !m.is_valid() {
            out.push(V::Invalid(name));
        }
    }
    if !out.is_empty() {
        return out;
    }
    let left_commutes = s.s1.after(&a.l) == b.l.after(&s.s2);
    if !left_commutes {
        out.push(V::LeftSquare);
    }
    if s.s3.after(&a.r) != b.r.after(&s.s2) {
        out.push(V::RightSquare);
    }
    if a.kind.is_mono() {
        if !s.s1.is_injective() {
            out.push(V::NotMonic("σ1"));
        }
        if !s.s2.is_injective() {
            out.push(V::NotMonic("σ2"));
        }
    }
    if a.kind == RuleKind::Pbpo {
        check_pbpo_morphism(s, &mut out);
    } else {
        if s.s4.is_some() || s.s5.is_some() {
            out.push(V::UnexpectedTypingMaps);
        }
        if left_commutes && !is_pullback_square(&a.l, &s.s2, &s.s1, &b.l).unwrap_or(false) {
            out.push(V::NotPullback);
        }
    }
    out
}

fn check_pbpo_morphism(s: &RuleMorphism, out: &mut Vec<RuleMorphismViolation>) {
    use RuleMorphismViolation as V;
    let (Some(ta), Some(tb)) = (&s.src.typing, &s.dst.typing) else {
        return;
    };
    let (Some(s4), Some(s5)) = (&s.s4, &s.s5) else {
        out.push(V::MissingTypingMaps);
        return;
    };
    let mut shaped = true;
    if s4.dom() != tb.t_lhs() || s4.cod() != ta.t_lhs() {
        out.push(V::Shape("σ4"));
        shaped = false;
    }
    if s5.dom() != tb.t_interface() || s5.cod() != ta.t_interface() {
        out.push(V::Shape("σ5"));
        shaped = false;
    }
    if !shaped {
        return;
    }
    for (name, m) in [("σ4", s4), ("σ5", s5)] {
        if !m.is_valid() {
            out.push(V::Invalid(name));
            return;
        }
    }
    if s4.after(&tb.t_l.after(&s.s1)) != ta.t_l {
        out.push(V::LeftTyping);
    }
    if s5.after(&tb.t_k.after(&s.s2)) != ta.t_k {
        out.push(V::InterfaceTyping);
    }
    if ta.u.after(s5) != s4.after(&tb.u) {
        out.push(V::TypeSquare);
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RuleError {
    #[error("rule `{name}` is invalid: {}", join(.violations))]
    InvalidRule {
        name: String,
        violations: Vec<RuleViolation>,
    },
    #[error("rule morphism `{name}` is invalid: {}", join(.violations))]
    InvalidMorphism {
        name: String,
        violations: Vec<RuleMorphismViolation>,
    },
    #[error("rule `{rule}` has kind {found}, system has kind {expected}")]
    MixedKinds {
        rule: String,
        expected: RuleKind,
        found: RuleKind,
    },
    #[error("rule morphism `{morphism}` refers to a rule outside the system")]
    ForeignRule { morphism: String },
    #[error("duplicate rule name `{0}`")]
    DuplicateRule(String),
    #[error("`{outer}` cannot be composed after `{inner}`")]
    NotComposable { outer: String, inner: String },
}

fn join<T: ToString>(v: &[T]) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join("; ")
}

/// A finite category of rules of one kind, closed under composition.
///
/// Morphisms are listed identities first, then generators, then composites
/// in the order they were discovered.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RuleSystem {
    pub name: String,
    pub kind: RuleKind,
    rules: Vec<Arc<Rule>>,
    morphisms: Vec<RuleMorphism>,
}

impl RuleSystem {
    pub fn rules(&self) -> &[Arc<Rule>] {
        &self.rules
    }

    pub fn rule(&self, name: &str) -> Option<&Arc<Rule>> {
        self.rules.iter().find(|r| r.name == name)
    }

    pub fn morphisms(&self) -> &[RuleMorphism] {
        &self.morphisms
    }

    pub fn morphism(&self, name: &str) -> Option<&RuleMorphism> {
        self.morphisms.iter().find(|m| m.name == name)
    }

    /// Morphisms that are not identities.
    pub fn non_identities(&self) -> impl Iterator<Item = &RuleMorphism> + '_ {
        self.morphisms.iter().filter(|m| !m.is_identity())
    }

    /// Index of the morphism with the same maps as `m`, if any.
    pub fn position(&self, m: &RuleMorphism) -> Option<usize> {
        self.morphisms.iter().position(|x| x.same_maps(m))
    }

    /// Runs the closure again on this system's own morphisms.
    pub fn close(&self) -> Result<RuleSystem, RuleError> {
        close_rule_system(
            self.name.clone(),
            self.kind,
            self.rules.clone(),
            self.non_identities().cloned().collect(),
        )
    }
}

/// Least set of rule morphisms containing the identities and the generators,
/// closed under composition.
pub fn close_rule_system(
    name: impl Into<String>,
    kind: RuleKind,
    rules: Vec<Arc<Rule>>,
    generators: Vec<RuleMorphism>,
) -> Result<RuleSystem, RuleError> {
    for (i, r) in rules.iter().enumerate() {
        if r.kind != kind {
            return Err(RuleError::MixedKinds {
                rule: r.name.clone(),
                expected: kind,
                found: r.kind,
            });
        }
        if rules[..i].iter().any(|q| q.name == r.name) {
            return Err(RuleError::DuplicateRule(r.name.clone()));
        }
        let violations = check_rule(r);
        if !violations.is_empty() {
            return Err(RuleError::InvalidRule {
                name: r.name.clone(),
                violations,
            });
        }
    }
    let mut morphisms: Vec<RuleMorphism> = rules.iter().map(RuleMorphism::identity).collect();
    for g in generators {
        if !rules.contains(&g.src) || !rules.contains(&g.dst) {
            return Err(RuleError::ForeignRule { morphism: g.name });
        }
        let violations = check_rule_morphism(&g);
        if !violations.is_empty() {
            return Err(RuleError::InvalidMorphism {
                name: g.name,
                violations,
            });
        }
        if !morphisms.iter().any(|m| m.same_maps(&g)) {
            morphisms.push(g);
        }
    }
    // saturate: every pair is tried once the later of the two is known
    let mut done = 0;
    while done < morphisms.len() {
        let n = morphisms.len();
        for i in 0..n {
            for j in 0..n {
                if i.max(j) < done {
                    continue;
                }
                let (outer, inner) = (&morphisms[i], &morphisms[j]);
                if inner.dst != outer.src || outer.is_identity() || inner.is_identity() {
                    continue;
                }
                let c = RuleMorphism::compose(outer, inner)?;
                if !morphisms.iter().any(|m| m.same_maps(&c)) {
                    morphisms.push(c);
                }
            }
        }
        done = n;
    }
    Ok(RuleSystem {
        name: name.into(),
        kind,
        rules,
        morphisms,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(vs: &[&str], es: &[(&str, &str, &str)]) -> Arc<Graph> {
        Arc::new(Graph::new(vs.iter().copied(), es.iter().copied()).unwrap())
    }

    fn hom(dom: &Arc<Graph>, cod: &Arc<Graph>, v: &[usize], e: &[usize]) -> GraphMorphism {
        GraphMorphism::new(dom.clone(), cod.clone(), v.to_vec(), e.to_vec()).unwrap()
    }

    struct Example {
        rho: Arc<Rule>,
        rho2: Arc<Rule>,
        plus: RuleMorphism,
        minus: RuleMorphism,
        swap: RuleMorphism,
    }

    fn example() -> Example {
        let disc = g(&["l", "r"], &[]);
        let arrow = g(&["l", "r"], &[("e", "l", "r")]);
        let three = g(&["l", "m", "r"], &[]);
        let path = g(&["l", "m", "r"], &[("a", "l", "m"), ("b", "m", "r")]);
        let id = GraphMorphism::identity(&disc);
        let rho = Arc::new(
            Rule::new("rho", RuleKind::DpoMono, id.clone(), hom(&disc, &three, &[0, 2], &[]), None).unwrap(),
        );
        let rho2 = Arc::new(
            Rule::new(
                "rho'",
                RuleKind::DpoMono,
                hom(&disc, &arrow, &[0, 1], &[]),
                hom(&disc, &path, &[0, 2], &[]),
                None,
            )
            .unwrap(),
        );
        let morph = |name: &str, v: &[usize], w: &[usize]| RuleMorphism {
            name: name.into(),
            src: rho.clone(),
            dst: rho2.clone(),
            s1: hom(&disc, &arrow, v, &[]),
            s2: hom(&disc, &disc, v, &[]),
            s3: hom(&three, &path, w, &[]),
            s4: None,
            s5: None,
        };
        let plus = morph("σ+", &[0, 1], &[0, 1, 2]);
        let minus = morph("σ-", &[1, 0], &[2, 1, 0]);
        let swap = RuleMorphism {
            name: "σ".into(),
            src: rho.clone(),
            dst: rho.clone(),
            s1: hom(&disc, &disc, &[1, 0], &[]),
            s2: hom(&disc, &disc, &[1, 0], &[]),
            s3: hom(&three, &three, &[2, 1, 0], &[]),
            s4: None,
            s5: None,
        };
        Example {
            rho,
            rho2,
            plus,
            minus,
            swap,
        }
    }

    #[test]
    fn rules_of_the_example_are_valid() {
        let ex = example();
        assert!(check_rule(&ex.rho).is_empty());
        assert!(check_rule(&ex.rho2).is_empty());
    }

    #[test]
    fn non_monic_left_leg_is_rejected_for_dpo() {
        let one = g(&["x"], &[]);
        let disc = g(&["l", "r"], &[]);
        let l = hom(&disc, &one, &[0, 0], &[]);
        let r = GraphMorphism::identity(&disc);
        let err = Rule::new("bad", RuleKind::Dpo, l.clone(), r.clone(), None).unwrap_err();
        assert_eq!(
            err,
            RuleError::InvalidRule {
                name: "bad".into(),
                violations: vec![RuleViolation::LeftNotMonic]
            }
        );
        assert!(Rule::new("ok", RuleKind::Sqpo, l, r, None).is_ok());
    }

    #[test]
    fn subsumptions_of_the_example() {
        let ex = example();
        assert!(check_rule_morphism(&ex.plus).is_empty());
        assert!(check_rule_morphism(&ex.minus).is_empty());
        assert!(check_rule_morphism(&ex.swap).is_empty());
        assert!(check_rule_morphism(&RuleMorphism::identity(&ex.rho)).is_empty());
    }

    #[test]
    fn empty_interface_commutes_but_is_not_a_pullback() {
        let ex = example();
        let disc = ex.rho.lhs().clone();
        let three = ex.rho.rhs().clone();
        let weak = Arc::new(
            Rule::new(
                "rho0",
                RuleKind::DpoMono,
                GraphMorphism::initial(&disc),
                GraphMorphism::initial(&three),
                None,
            )
            .unwrap(),
        );
        let s = RuleMorphism {
            name: "σ0".into(),
            src: weak,
            dst: ex.rho2.clone(),
            s1: ex.plus.s1.clone(),
            s2: GraphMorphism::initial(ex.rho2.interface()),
            s3: ex.plus.s3.clone(),
            s4: None,
            s5: None,
        };
        assert_eq!(check_rule_morphism(&s), vec![RuleMorphismViolation::NotPullback]);
    }

    #[test]
    fn closure_of_two_parallel_subsumptions_adds_identities() {
        let ex = example();
        let sys = close_rule_system(
            "S",
            RuleKind::DpoMono,
            vec![ex.rho.clone(), ex.rho2.clone()],
            vec![ex.plus.clone(), ex.minus.clone()],
        )
        .unwrap();
        assert_eq!(sys.morphisms().len(), 4);
        assert_eq!(sys.non_identities().count(), 2);
    }

    #[test]
    fn closure_with_the_swap() {
        let ex = example();
        let sys = close_rule_system(
            "S'",
            RuleKind::DpoMono,
            vec![ex.rho.clone(), ex.rho2.clone()],
            vec![ex.plus.clone(), ex.minus.clone(), ex.swap.clone()],
        )
        .unwrap();
        assert_eq!(sys.morphisms().len(), 5);
        let c = RuleMorphism::compose(&ex.plus, &ex.swap).unwrap();
        assert!(c.same_maps(&ex.minus));
        let c = RuleMorphism::compose(&ex.minus, &ex.swap).unwrap();
        assert!(c.same_maps(&ex.plus));
        assert!(RuleMorphism::compose(&ex.swap, &ex.swap).unwrap().is_identity());
        assert_eq!(sys.close().unwrap(), sys);
    }

    #[test]
    fn closure_over_one_rule_without_generators() {
        let ex = example();
        let sys = close_rule_system("S", RuleKind::DpoMono, vec![ex.rho.clone()], vec![]).unwrap();
        assert_eq!(sys.morphisms().len(), 1);
        assert!(sys.morphisms()[0].is_identity());
    }

    #[test]
    fn mixed_kinds_are_rejected() {
        let ex = example();
        let err = close_rule_system("S", RuleKind::Sqpo, vec![ex.rho.clone()], vec![]).unwrap_err();
        assert!(matches!(err, RuleError::MixedKinds { .. }));
    }

    #[test]
    fn pbpo_typing_squares_are_checked() {
        let one = g(&["x"], &[]);
        let t = g(&["t"], &[("tl", "t", "t")]);
        let id = GraphMorphism::identity(&one);
        let to_t = hom(&one, &t, &[0], &[]);
        let typing = PbpoTyping {
            u: GraphMorphism::identity(&t),
            v: hom(&t, &g(&["t"], &[("tl", "t", "t")]), &[0], &[0]),
            t_l: to_t.clone(),
            t_k: to_t.clone(),
            t_r: to_t.clone(),
        };
        assert!(Rule::new("p", RuleKind::Pbpo, id.clone(), id.clone(), Some(typing.clone())).is_ok());
        let mut bad = typing;
        let g2 = g(&["t", "z"], &[("tl", "t", "t")]);
        bad.v = hom(&t, &g2, &[0], &[0]);
        bad.t_r = hom(&one, &g2, &[1], &[]);
        let err = Rule::new("p", RuleKind::Pbpo, id.clone(), id, Some(bad)).unwrap_err();
        let RuleError::InvalidRule { violations, .. } = err else { panic!() };
        assert_eq!(violations, vec![RuleViolation::RightTypingSquare]);
    }
}
