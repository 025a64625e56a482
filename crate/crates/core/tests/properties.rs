//! Randomized invariants over rule/subrule pairs of every kind.

use std::sync::Arc;

use gct_core::environment::check_gluing;
use gct_core::{
    build_delta_category, close_rule_system, Environment, Graph, GraphMorphism, Rule, RuleKind, RuleMorphism,
};
use gct_testkit::gen::{instance, rng};
use gct_testkit::oracle::gluing_holds;
use gct_testkit::suites::{discrete_cones, gluing_inheritance, right_fullness, terminal_collapse, unique_d};
use proptest::prelude::*;

fn assert_report(name: &str, r: &gct_testkit::suites::Report, want: usize) {
    assert!(r.passed(want), "{name}: {r}\n{:#?}\n{:#?}", r.failures, r.audit.failures);
}

#[test]
fn terminal_objects_collapse_every_kind() {
    for kind in RuleKind::ALL {
        let r = terminal_collapse(kind, 30, 11, true);
        assert_report(kind.as_str(), &r, 30);
    }
}

#[test]
fn induced_d_is_the_only_candidate() {
    for kind in RuleKind::ALL {
        assert_report(kind.as_str(), &unique_d(kind, 30, 12), 30);
    }
}

#[test]
fn identification_is_inherited_by_monic_subrules() {
    for kind in [RuleKind::Dpo, RuleKind::DpoMono] {
        assert_report(kind.as_str(), &gluing_inheritance(kind, 60, 13, true), 60);
    }
}

#[test]
fn monic_sqpo_and_pbpo_are_right_full() {
    for kind in [RuleKind::SqpoMono, RuleKind::Pbpo] {
        assert_report(kind.as_str(), &right_fullness(kind, 40, 14), 40);
    }
}

#[test]
fn discrete_delta_cones_are_independent() {
    for kind in RuleKind::ALL {
        assert_report(kind.as_str(), &discrete_cones(kind, 20, 15), 20);
    }
}

fn inclusion(dom: &Arc<Graph>, cod: &Arc<Graph>) -> GraphMorphism {
    gct_testkit::gen::by_id(dom, cod)
}

/// A monic subsumption into `a -> b` (keeping `a`) whose subrule deletes `b`
/// alone: the identity match of the larger rule glues, the induced one
/// leaves the edge dangling, and Δ records the failed induction.
#[test]
fn dangling_edges_are_not_inherited() {
    let arrow = Arc::new(Graph::new(["a", "b"], [("e", "a", "b")]).unwrap());
    let a = Arc::new(Graph::new(["a"], Vec::<(&str, &str, &str)>::new()).unwrap());
    let b = Arc::new(Graph::new(["b"], Vec::<(&str, &str, &str)>::new()).unwrap());
    let empty = Arc::new(Graph::empty());
    for kind in [RuleKind::Dpo, RuleKind::DpoMono] {
        let big = Arc::new(Rule::new("big", kind, inclusion(&a, &arrow), GraphMorphism::identity(&a), None).unwrap());
        let small = Arc::new(
            Rule::new("small", kind, GraphMorphism::initial(&b), GraphMorphism::identity(&empty), None).unwrap(),
        );
        let sigma = RuleMorphism {
            name: "sigma".into(),
            src: small.clone(),
            dst: big.clone(),
            s1: inclusion(&b, &arrow),
            s2: GraphMorphism::initial(&a),
            s3: GraphMorphism::initial(&a),
            s4: None,
            s5: None,
        };
        let system = close_rule_system("S", kind, vec![small.clone(), big.clone()], vec![sigma.clone()]).unwrap();
        let m = GraphMorphism::identity(&arrow);
        assert!(check_gluing(&m, &big).is_empty());
        let induced = m.compose(&sigma.s1).unwrap();
        let v = check_gluing(&induced, &small);
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].clause(), "GC2");
        assert!(!gluing_holds(&induced, &small.l));

        let delta = build_delta_category(&system, &arrow, &Environment::new(kind)).unwrap();
        assert_eq!(delta.objects().len(), 1);
        assert_eq!(delta.failures().len(), 1);
        assert!(delta.failures()[0].reason.contains("GC2"));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn gluing_check_matches_its_definition(seed in any::<u64>(), pick in 0usize..ALL_KINDS) {
        let kind = [RuleKind::Dpo, RuleKind::DpoMono][pick % 2];
        let inst = instance(&mut rng(seed), kind);
        for m in gct_core::enumerate_homomorphisms(inst.small.lhs(), &inst.g, false) {
            prop_assert_eq!(check_gluing(&m, &inst.small).is_empty(), gluing_holds(&m, &inst.small.l));
        }
    }

    #[test]
    fn delta_objects_validate(seed in any::<u64>(), pick in 0usize..ALL_KINDS) {
        let kind = RuleKind::ALL[pick];
        let inst = instance(&mut rng(seed), kind);
        let delta = build_delta_category(&inst.system, &inst.g, &Environment::new(kind)).unwrap();
        for o in delta.objects() {
            prop_assert!(o.transformation.validate().is_empty());
        }
        for m in delta.morphisms() {
            prop_assert!(m.mu.validate().is_empty(), "{}: {:?}", m.name, m.mu.validate());
        }
        // closed under composition
        for a in 0..delta.morphisms().len() {
            for b in 0..delta.morphisms().len() {
                if delta.morphisms()[b].dst == delta.morphisms()[a].src {
                    prop_assert!(delta.compose_index(a, b).is_some());
                }
            }
        }
    }
}

const ALL_KINDS: usize = RuleKind::ALL.len();
