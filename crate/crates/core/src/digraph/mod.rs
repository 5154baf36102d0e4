//! Directed and undirected multigraphs, their morphisms and the structural
//! operations used throughout the crate.

mod graph;
mod morphism;
mod ops;

pub use graph::{DiGraph, Edge, UEdge, UndirectedGraph};
pub use morphism::{AdjacencyViolation, GraphMorphism, UndirectedMorphism};
pub use ops::{
    bidirect, bidirect_morphism, bidirect_with_origin, contract_cycle, excise, excision_inclusion, find_isomorphism,
    find_subgraph_embedding, forget, forget_morphism, is_isomorphic, opposite, pullback, reachability, simplify,
    simplify_morphism, strongly_connected_components, subgraph, subgraph_by_index, DirectedCycle, Reachability,
};
pub(crate) use ops::{bidirected_index, fresh_id};
