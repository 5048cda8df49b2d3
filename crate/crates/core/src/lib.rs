//! Synthetic online-social-network datasets in two stages: grow an
//! undirected acquaintance graph by discrete-event simulation, then attach
//! per-skill endorsement digraphs whose occurrence/co-occurrence statistics
//! match a target pattern matrix, via local search.

pub mod analysis;
pub mod codec;
pub mod endorse;
pub mod graph;
pub mod growth;
pub mod sample;

pub use graph::{EndorsementSet, Graph, VertexId};
