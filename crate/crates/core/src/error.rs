use thiserror::Error;

/// Structural problems that make a graph or numbering file unrepresentable.
///
/// These are distinct from failed semantic checks (3-regularity, connectivity,
/// strictness, ...), which are reported as data rather than errors.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("duplicate vertex id `{0}`")]
    DuplicateVertex(String),
    #[error("duplicate edge id `{0}`")]
    DuplicateEdge(String),
    #[error("edge `{edge}` references unknown vertex `{vertex}`")]
    DanglingBranch { edge: String, vertex: String },
    #[error("edge `{0}` has both branches at the open point")]
    DoublyOpenEdge(String),
    #[error("marking references unknown edge `{0}`")]
    UnknownMarkedEdge(String),
    #[error("marking references `{0}`, which is not a leg")]
    MarkedNonLeg(String),
    #[error("leg `{0}` is marked more than once")]
    DuplicateMarking(String),
}

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("graph is not a valid enumeration target: {0}")]
    InvalidGraph(String),
    #[error("{0} is not an odd prime")]
    NotAnOddPrime(u32),
    #[error("value {value} is outside 0..{p}")]
    OutOfRange { value: u32, p: u32 },
    #[error("constraint has {got} entries but the graph has {expected} legs")]
    ConstraintArity { expected: usize, got: usize },
    #[error("numbering does not match the graph: {0}")]
    NumberingShape(String),
    #[error("numbering is not strict: {0}")]
    NotStrict(String),
    #[error("malformed input: {0}")]
    Parse(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
