//! Port graphs, canonical generalized Cayley graphs and their operations.

use std::fmt::{Debug, Display};
use std::hash::Hash;

mod cayley;
mod glue;
mod port_graph;
mod word;

pub use cayley::{CayleyGraph, Disk, DyadicDistance};
pub use glue::{consistent, glue_all, prefix, union, Clash, ClashKind, Consistency, DisjointSets};
pub use port_graph::{Edge, End, PortGraph};
pub use word::{NameElem, Port, Step, Suffix, VertexName, Word, WordParseError};

pub(crate) use cayley::{bfs_depths, canonical_from};
pub(crate) use glue::glue_keyed;
pub(crate) use word::NameKey;

/// Vertex label types. Blanket-implemented.
pub trait Label: Clone + Eq + Hash + Debug + Display + Send + Sync + 'static {}

impl<T: Clone + Eq + Hash + Debug + Display + Send + Sync + 'static> Label for T {}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GraphError {
    #[error("port {port} out of range 1..={ports}")]
    BadPort { port: Port, ports: Port },
    #[error("port {vertex}:{port} already carries an edge")]
    PortConflict { vertex: String, port: Port },
    #[error("no vertex with index {0}")]
    NoSuchVertex(usize),
    #[error("duplicate vertex name {0}")]
    DuplicateName(String),
    #[error("name sets {first} and {second} overlap")]
    NameOverlap { first: String, second: String },
    #[error("empty name set")]
    EmptyNameSet,
    #[error("pointer {0} is not a vertex")]
    NoPointer(String),
    #[error("vertex {0} is unreachable from the pointer")]
    DisconnectedInput(String),
    #[error("path {0} leaves the graph")]
    NoSuchPath(String),
    #[error("graph is not a disk of radius {0}")]
    NotADisk(usize),
    #[error("graphs have {0} and {1} ports")]
    PortCountMismatch(Port, Port),
    #[error("inconsistent union: {0}")]
    InconsistentUnion(Clash),
    #[error("raw vertex name {0} cannot be prefixed")]
    RawNameUnprefixable(String),
}
