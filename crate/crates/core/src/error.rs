use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("hypergraph must have at least one vertex")]
    NoVertices,
    #[error("empty edge")]
    EmptyEdge,
    #[error("vertex {vertex} out of range 1..={n}")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("duplicate edge {0:?}")]
    DuplicateEdge(Vec<usize>),
    #[error("edge type set must be nonempty and contain only positive cardinalities")]
    InvalidEdgeTypes,
    #[error("edge cardinality {r} exceeds vertex count {n}")]
    CardinalityTooLarge { r: usize, n: usize },
    #[error("compression needs 1 <= i < j <= n, got i={i}, j={j}, n={n}")]
    InvalidCompression { i: usize, j: usize, n: usize },
    #[error("pair quantities need distinct vertices, got {0} twice")]
    SameVertex(usize),
    #[error("no coefficient for nonempty level {0}")]
    MissingCoefficient(usize),
    #[error("level {level} lies below the base type {base}")]
    LevelBelowBase { level: usize, base: usize },
    #[error("coefficient for level {0} must be positive and finite")]
    NonPositiveCoefficient(usize),
    #[error("invalid weight vector: {0}")]
    InvalidWeights(String),
    #[error("expected a vector of length {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("grid with {points} points exceeds the limit of {limit}")]
    GridTooLarge { points: u128, limit: u128 },
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("infeasible generator request: {0}")]
    Infeasible(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}
