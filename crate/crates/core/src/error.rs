use thiserror::Error;

use crate::design::Vertex;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("group order must be positive")]
    ZeroOrder,
    #[error("group order {order} exceeds the cap of {cap}")]
    OrderCap { order: usize, cap: usize },
    #[error("invalid group table: {0}")]
    InvalidTable(String),
    #[error("cannot parse group spec {spec:?}: {reason}")]
    GroupSpec { spec: String, reason: String },
    #[error("group {0} is not binary (it must have exactly one involution)")]
    NotBinary(String),
    #[error("group {name} has order {order}, expected {expected}")]
    WrongOrder {
        name: String,
        order: usize,
        expected: String,
    },

    #[error("duplicate vertex {0} in cycle")]
    DuplicateVertex(Vertex),
    #[error("a cycle needs at least 3 vertices, got {0}")]
    CycleTooShort(usize),
    #[error("invalid cycle system: {0}")]
    InvalidSystem(String),
    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },

    #[error("cycle does not span the group: {0}")]
    NotSpanning(String),
    #[error("not a starter: {0}")]
    NotAStarter(String),
    #[error("no starter found for {group} after {nodes} search nodes")]
    StarterNotFound { group: String, nodes: u64 },

    #[error("systems are not compatible for doubling: {0}")]
    Incompatible(String),
    #[error("construction produced an invalid system: {0}")]
    ConstructionInvalid(String),
    #[error("pipeline step failed: {0}")]
    Pipeline(String),
    #[error("automorphism group {found} is not isomorphic to {expected}")]
    GroupMismatch { expected: String, found: String },

    #[error("brute-force search supports at most {max} vertices, got {v}")]
    TooManyVertices { v: usize, max: usize },
    #[error("permutation is not a bijection on {0} points")]
    NotABijection(usize),

    #[error("{0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
