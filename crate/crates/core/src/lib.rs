//! Genus bounds for regular languages.
//!
//! The crate works with finite directed multigraphs and the automata built on
//! them. It decides directed emulator and cover properties, computes automatic
//! relations and their lattice, minimizes automata, computes exact genus of
//! small graphs through rotation systems, and searches bounded covers of an
//! automaton's graph for low-genus embeddings.

pub mod automaton;
pub mod corpus;
pub mod digraph;
pub mod emulation;
mod error;
pub mod format;
pub mod genus;
pub mod partition;
pub mod relation;
pub mod semi;

pub use error::{Error, Result};
