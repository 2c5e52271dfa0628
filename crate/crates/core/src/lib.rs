//! Counting good colourings of hypergraphs with forbidden edge colourings.
//!
//! An [`Instance`] pairs a [`Hypergraph`] with a bad family per edge. The
//! weight profile of an instance drives a sufficient condition on list size
//! ([`check_key`]) that guarantees at least `beta^|V|` good list colourings.
//! The [`colouring`] module counts those colourings exactly on small
//! instances, and [`applications`] builds the auxiliary instances for star,
//! nonrepetitive, frugal, transversal, Ramsey and k-SAT problems.

pub mod applications;
pub mod bounds;
pub mod cli;
pub mod colouring;
pub mod exact;
pub mod hypergraph;
pub mod instance;
pub mod io;
pub mod report;

pub use bounds::{
    check_key, closed_form_bound, compare_bounds, lll_bound, optimize_beta, Application, BoundError, CompareMode,
    KeyReport,
};
pub use colouring::{count_good, find_good, is_bad, Colouring, ColouringError, Strategy};
pub use exact::Beta;
pub use hypergraph::{Hypergraph, HypergraphError, ListAssignment};
pub use instance::{BadFamily, Instance, InstanceError, WeightProfile};
