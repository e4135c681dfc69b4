use thiserror::Error;

use crate::model::NodeId;

/// Errors produced by network construction, analysis and reconstruction.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("unknown node {0}")]
    UnknownNode(String),
    #[error("duplicate node id {0}")]
    DuplicateNode(String),
    #[error("self-loop on node {0}")]
    SelfLoop(String),
    #[error("duplicate label {0}")]
    DuplicateLabel(String),
    #[error("label {0} is not in the label vector")]
    UnknownLabel(String),
    #[error("node {node} is already labeled")]
    NodeAlreadyLabeled { node: String },
    #[error("label {0} is attached to two nodes")]
    LabelReused(String),

    #[error("graph is not acyclic: {0}")]
    Cyclic(String),
    #[error("not a network: {0}")]
    NotANetwork(String),
    #[error("not an L-network: {0}")]
    NotLabeled(String),
    #[error("invalid root choice: {0}")]
    InvalidRootChoice(String),
    #[error("node {} is not an ambiguous leaf", .0 .0)]
    NotAmbiguousLeaf(NodeId),
    #[error("edge {0} does not lie in a root component")]
    NotRootComponentEdge(String),
    #[error("network is not fully directed")]
    NotDirected,

    #[error("mu-vector length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("path count overflow")]
    Overflow,
    #[error("label vectors differ")]
    LabelMismatch,
    #[error("missing length for edge {0}")]
    MissingLength(usize),
    #[error("invalid length {0}")]
    InvalidLength(String),
    #[error("exponent must be >= 1, got {0}")]
    InvalidExponent(String),
    #[error("input has hybrid edges")]
    HasHybridEdges,

    #[error("malformed mu-representation: {0}")]
    MalformedRep(String),
    #[error("DAG assembly failed: {0}")]
    Assembly(String),
    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("oracle bound exceeded: {what} = {value} > {bound}")]
    BoundExceeded { what: &'static str, value: usize, bound: usize },

    #[error("infeasible generator configuration: {0}")]
    InfeasibleConfig(String),
    #[error("generator retry budget exhausted after {0} attempts")]
    RetriesExhausted(usize),
    #[error("no applicable edit")]
    NoApplicableEdit,

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("invalid JSON representation: {0}")]
    Json(String),
}

impl Error {
    /// Usage and parse problems, as opposed to domain failures.
    pub fn is_parse_error(&self) -> bool {
        matches!(self, Error::Parse { .. } | Error::Json(_))
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
