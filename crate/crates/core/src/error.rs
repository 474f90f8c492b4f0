use thiserror::Error;

/// Failures raised by the geometric constructions.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("degenerate vector")]
    DegenerateVector,
    #[error("points not on same sheet")]
    NotSameSheet,
    #[error("not spacelike-connected")]
    NotSpacelikeConnected,
    #[error("point on projection horizon")]
    OnHorizon,
    #[error("point outside model")]
    OutsideModel,
    #[error("pair on horizon")]
    PairOnHorizon,
    #[error("vector is not tangent to its base point (residual {0:e})")]
    NotTangent(f64),
    #[error("vector is not on the expected quadric: {0}")]
    OffQuadric(String),
    #[error("no supporting hyperplane")]
    NoSupportingHyperplane,
    #[error("plane normal is not spacelike")]
    NotSpacelike,
    #[error("redundant plane {0}")]
    RedundantPlane(usize),
    #[error("non-polyhedral: {0}")]
    NonPolyhedral(String),
    #[error("edge misses H3 (faces {0} and {1})")]
    EdgeMissesH3(usize, usize),
    #[error("faces do not meet along a hyperbolic edge")]
    NoHyperbolicEdge,
    #[error("truncate first: vertex {0} is hyperideal")]
    TruncateFirst(usize),
    #[error("gluing length mismatch of {0:e}")]
    GluingMismatch(f64),
    #[error("subdivide partition: piece {0} is not below pi")]
    SubdividePartition(f64),
    #[error("{kind} vertex {vertex} has angle sum {sum}, expected {expected}")]
    LocalSum {
        vertex: usize,
        kind: &'static str,
        sum: f64,
        expected: &'static str,
    },
    #[error("not a Q_Gamma metric: {0}")]
    NotQGamma(String),
    #[error("not a truncation: {0}")]
    NotTruncation(String),
    #[error("metric carries no marked graph")]
    Unmarked,
    #[error("invalid combinatorics: {0}")]
    Combinatorics(String),
    #[error("invalid metric: {0}")]
    InvalidMetric(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
