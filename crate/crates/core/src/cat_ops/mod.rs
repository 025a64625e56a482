//! Constructions in the category of finite graphs.
//!
//! Everything is computed pointwise on vertex and edge sets. Each universal
//! construction returns a value that can also factor competing (co)cones
//! through itself, which is what the square checks are built on.

mod complement;
mod limits;
mod square;

use thiserror::Error;

use crate::graph::{GraphError, Item};

pub use complement::{
    check_gluing_condition, final_pullback_complement, pushout_complement, Complement,
    GluingFailure, GluingViolation,
};
pub use limits::{
    colimit, coslice_colimit, limit, slice_limit, Arrow, Colimit, CosliceColimit, CosliceDiagram,
    Diagram, Limit, SliceDiagram, SliceLimit,
};
pub use square::{is_pullback_square, is_pushout_square, pullback, pushout, Pullback, Pushout};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CatError {
    #[error("morphisms do not share a domain")]
    DomainMismatch,
    #[error("morphisms do not share a codomain")]
    CodomainMismatch,
    #[error("square does not commute")]
    NonCommuting,
    #[error("{0} is not monic")]
    NotMonic(&'static str),
    #[error("arrow `{arrow}` does not fit its end objects")]
    ArrowMismatch { arrow: String },
    #[error("object `{0}` does not live over (or under) the base")]
    BaseMismatch(String),
    #[error(transparent)]
    Gluing(#[from] GluingFailure),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

pub(crate) fn item_of_vertex(g: &crate::Graph, i: usize) -> Item {
    Item::Vertex(g.vertex(i).to_owned())
}

pub(crate) fn item_of_edge(g: &crate::Graph, j: usize) -> Item {
    Item::Edge(g.edge(j).to_owned())
}
