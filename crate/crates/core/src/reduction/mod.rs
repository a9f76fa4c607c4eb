//! Variable elimination guided by the dependency graph: species outside a
//! minimum vertex cover occur only linearly and are Gauss-eliminated.

mod cover;
mod eliminate;
mod graph;

pub use cover::minimum_vertex_cover;
pub use eliminate::{
    eliminate, sign_definite, EliminationStep, ReducedSystem, SignDefiniteness,
};
pub use graph::{build_dependency_graph, DependencyGraph};

use std::collections::BTreeSet;

use thiserror::Error;

use crate::algebra::AlgebraError;
use crate::model::AlgebraicSystem;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReductionError {
    #[error("parametric case split required: no equation has a sign-definite coefficient of {0}")]
    CaseSplitRequired(String),
    #[error("elimination set is not independent: {0}")]
    NotIndependent(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// Graph, cover and elimination in one call.
pub fn reduce(sys: &AlgebraicSystem) -> Result<(DependencyGraph, ReducedSystem), ReductionError> {
    let graph = build_dependency_graph(sys);
    let cover = minimum_vertex_cover(&graph);
    let independent: BTreeSet<usize> = (0..graph.len()).filter(|i| !cover.contains(i)).collect();
    let reduced = eliminate(sys, &independent)?;
    Ok((graph, reduced))
}
