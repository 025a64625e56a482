//! Algebraic rewriting of finite directed multigraphs.
//!
//! Rules of several kinds (DPO, SqPO, PBPO and their monic-match variants)
//! are related by subsumption morphisms; the transformations of one graph
//! by a rule system form a category Δ, whose global coherent transformation
//! merges all of them into one result.

pub mod cat_ops;
pub mod environment;
pub mod gct;
pub mod graph;
pub mod io;
pub mod morphism;
pub mod rules;
pub mod search;

pub use environment::{
    build_delta_category, build_summed_delta, derive_direct_transformations, induce_subsumption,
    DeltaCategory, DirectTransformation, Environment, TransformationMorphism,
};
pub use gct::{gct, run_pipeline, ConeMode, GctOutcome, GctResult};
pub use graph::{Graph, GraphBuilder, GraphError, Item};
pub use morphism::{GraphMorphism, MorphismError, Violation};
pub use rules::{
    check_rule, check_rule_morphism, close_rule_system, PbpoTyping, Rule, RuleError, RuleKind,
    RuleMorphism, RuleSystem,
};
pub use search::{are_isomorphic, canonical_form, enumerate_homomorphisms, find_isomorphism, HomSearch};
