use thiserror::Error;

/// Errors raised by constructors and checks.
///
/// Metric-axiom violations carry the point identifiers that witness them.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("distance table is not square: row {row} has {len} entries, expected {expected}")]
    NotSquare { row: usize, len: usize, expected: usize },
    #[error("distance table has {rows} rows but {ids} point ids")]
    IdCountMismatch { rows: usize, ids: usize },
    #[error("duplicate point id `{0}`")]
    DuplicateId(String),
    #[error("distance d({0}, {1}) is negative or not finite")]
    InvalidDistance(String, String),
    #[error("d({0}, {0}) is not zero")]
    NonzeroSelfDistance(String),
    #[error("asymmetric distance: d({0}, {1}) != d({1}, {0})")]
    Asymmetry(String, String),
    #[error("distinct points {0} and {1} are at distance zero")]
    ZeroDistanceDistinctPoints(String, String),
    #[error("triangle inequality fails: d({x}, {z}) > d({x}, {y}) + d({y}, {z})")]
    TriangleViolation { x: String, y: String, z: String },
    #[error("graph is disconnected: no path from {0} to {1}")]
    DisconnectedGraph(String, String),
    #[error("edge weight must be positive and finite ({0} -- {1})")]
    InvalidEdgeWeight(String, String),
    #[error("p-norm exponent must be finite and at least 1, got {0}")]
    InvalidPNorm(f64),
    #[error("point coordinates have inconsistent dimensions")]
    DimensionMismatch,
    #[error("unknown point `{0}`")]
    UnknownPoint(String),
    #[error("unknown fiber `{0}`")]
    UnknownFiber(String),
    #[error("fiber `{0}` is empty")]
    EmptyFiber(String),
    #[error("point `{0}` belongs to more than one fiber")]
    OverlappingFibers(String),
    #[error("point `{0}` belongs to no fiber")]
    UncoveredPoint(String),
    #[error("not a section: {0}")]
    NotASection(String),
    #[error("resolution must be at least 2, got {0}")]
    ResolutionTooSmall(usize),
    #[error("exponent alpha must lie in (0, 1], got {0}")]
    AlphaOutOfRange(f64),
    #[error("constant must be positive and finite, got {0}")]
    InvalidConstant(f64),
    #[error("epsilon must lie in (0, L + 1], got {0}")]
    EpsilonOutOfRange(f64),
    #[error("sections disagree at the anchor fiber `{0}`")]
    AnchorMismatch(String),
    #[error("premise failed: {0}")]
    PremiseFailed(String),
    #[error("no convergent subsequence")]
    NoConvergentSubsequence,
    #[error("linear map is rank deficient")]
    RankDeficientMap,
    #[error("p-norm fiber distance did not converge")]
    IterationDivergence,
    #[error("sections are defined on different base samples")]
    SampleMismatch,
    #[error("scalar must be nonzero")]
    ZeroScalar,
    #[error("level {0} misses fiber `{1}`")]
    LevelMissesFiber(f64, String),
    #[error("level {0} meets fiber `{1}` more than once")]
    LevelAmbiguous(f64, String),
    #[error("anchor `{0}` is not on the level set")]
    AnchorOffLevel(String),
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("center `{0}` is not on the section graph")]
    CenterOffGraph(String),
    #[error("radius must be positive and finite")]
    InvalidRadius,
    #[error("too few distinct positive masses to fit an exponent")]
    DegenerateMasses,
    #[error("invalid measure: {0}")]
    InvalidMeasure(String),
    #[error("input error: {0}")]
    Input(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
