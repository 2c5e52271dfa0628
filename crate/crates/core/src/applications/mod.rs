//! Auxiliary instances whose good colourings are the objects of classical
//! colouring problems: star, nonrepetitive and frugal colourings,
//! independent transversals, constrained list colourings, Ramsey edge
//! colourings and satisfying assignments.

mod graphs;
mod ramsey;
mod sat;
mod transversal;

use thiserror::Error;

pub use graphs::{frugal_instance, nonrepetitive_instance, star_instance, NonrepetitiveInstance, DEFAULT_PATH_BUDGET};
pub use ramsey::{k_cliques, ramsey_instance, RamseyInstance, RamseyReport, DEFAULT_CLIQUE_BUDGET};
pub use sat::{count_satisfying, ksat_instance, CnfFormula, SatInstance, SatReport};
pub use transversal::{
    constrained_check, transversal_instance, ConstrainedMode, ConstrainedReport, ConstrainedVertex, PartLoad,
    Partition, TransversalInstance, TransversalReport,
};

use crate::bounds::BoundError;
use crate::hypergraph::{Hypergraph, HypergraphError};
use crate::instance::{Instance, InstanceError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AppError {
    #[error("expected a graph (every edge of size 2)")]
    NotAGraph,
    #[error("expected a simple graph (no parallel edges)")]
    NotSimple,
    #[error("k = {0} is too small; need k >= 2")]
    KTooSmall(u64),
    #[error("parameter out of range: {0}")]
    OutOfRange(String),
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("vertex `{vertex}` has a list of size {got}, expected {expected}")]
    ListSizeMismatch { vertex: String, expected: usize, got: usize },
    #[error("more than {0} cliques; raise the budget")]
    CliqueEnumerationBudget(u64),
    #[error("more than {0} paths; raise the budget or lower the order")]
    PathBudget(u64),
    #[error("max order must be an even integer >= 2, got {0}")]
    InvalidOrder(usize),
    #[error("clause {clause} has {got} distinct variables, expected {expected}")]
    NotKUniform { clause: usize, expected: usize, got: usize },
    #[error("clause {0} contains a variable and its negation")]
    TautologicalClause(usize),
    #[error("invalid formula: {0}")]
    InvalidFormula(String),
    #[error(transparent)]
    Hypergraph(#[from] HypergraphError),
    #[error(transparent)]
    Instance(#[from] InstanceError),
    #[error(transparent)]
    Bound(#[from] BoundError),
}

/// Every edge forbids its monochromatic colourings, so good means proper.
pub fn proper_instance(graph: Hypergraph) -> Instance {
    Instance::proper(graph)
}

pub(crate) fn require_simple_graph(graph: &Hypergraph) -> Result<(), AppError> {
    if !graph.is_graph() {
        return Err(AppError::NotAGraph);
    }
    if !graph.is_simple() {
        return Err(AppError::NotSimple);
    }
    Ok(())
}
