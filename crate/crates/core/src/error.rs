use thiserror::Error;

/// Errors produced by graph construction, parsing, generation, and refinement.
#[derive(Debug, Error)]
pub enum Error {
    #[error("node {node} out of range for a graph with {node_count} nodes")]
    OutOfRange { node: u32, node_count: usize },

    #[error("self-loop at node {0}")]
    SelfLoop(u32),

    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(u32, u32),

    #[error("line {line}: malformed graph6 data: {reason}")]
    MalformedLine { line: usize, reason: String },

    #[error("input with {got} nodes exceeds the limit of {limit}")]
    TooLarge { got: usize, limit: usize },

    #[error("invalid node {0}")]
    InvalidNode(u32),

    #[error("invalid refinement configuration: {0}")]
    InvalidConfiguration(String),

    #[error("invalid degree {degree} for a regular graph on {nodes} nodes")]
    InvalidDegree { nodes: usize, degree: usize },

    #[error("pairing retries exhausted after {0} attempts")]
    RetryExhausted(usize),

    #[error("invalid skip {skip} for a circulant on {nodes} nodes")]
    InvalidSkip { nodes: usize, skip: usize },

    #[error("unknown catalog name: {0}")]
    UnknownName(String),

    #[error("invalid edge probability {0}")]
    InvalidProbability(f64),

    #[error("corpus validation failed: {0}")]
    CorpusValidation(String),

    #[error("property suite failed with {} violation(s)", .0.len())]
    SuiteFailure(Vec<String>),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
