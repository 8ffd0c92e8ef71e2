//! String codes for graphs and finite table descriptions of rules.

mod enumerate;
mod graph_code;
mod rule_code;

pub use enumerate::{enumerate_disks, enumerate_graphs};
pub use graph_code::{code_string, decode_graph, encode_graph, uses_alphabet, GraphCode, GraphFile, GraphToken};
pub use rule_code::{catalog_hash, decode_rule, encode_rule, format_image, parse_image, RuleDescription};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CodecError {
    #[error("parse error at {position}: expected {expected}")]
    Parse { position: usize, expected: String },
    #[error("at {position}: {bars} bars but the DFS depth is only {depth}")]
    DanglingBacktrack { position: usize, bars: usize, depth: usize },
    #[error("at {position}: port {port} of vertex {vertex} is already used")]
    PortReuse { position: usize, vertex: usize, port: u8 },
    #[error("at {position}: path step does not follow an existing edge")]
    BadPath { position: usize },
    #[error("bad header: {0}")]
    Header(String),
    #[error("enumeration budget exceeded after {reached} items")]
    BudgetExceeded { reached: usize },
    #[error("table entry {entry} has index {index}, catalog has {images} images")]
    BadIndex { entry: usize, index: usize, images: usize },
    #[error("table entry {entry}: {reason}")]
    NamingConstraintViolated { entry: usize, reason: String },
    #[error("disk catalog mismatch: {0}")]
    CatalogMismatch(String),
}
