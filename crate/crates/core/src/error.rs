use thiserror::Error;

/// Every failure the library can report. Each precondition violation has its own variant.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("empty domain: an interval union needs at least one interval")]
    EmptyDomain,
    #[error("interval {index} is empty or reversed: [{left}, {right})")]
    EmptyInterval { index: usize, left: String, right: String },
    #[error("intervals {first} and {second} overlap or are out of order")]
    OverlappingIntervals { first: usize, second: usize },
    #[error("interval {index} has length {length}, expected 1")]
    NonUnitInterval { index: usize, length: String },
    #[error("negative endpoint {value} at interval {index}")]
    NegativeEndpoint { index: usize, value: String },
    #[error("endpoint {endpoint} overflows a 64-bit integer after scaling by {scale}")]
    EndpointOverflow { endpoint: String, scale: String },
    #[error("offsets {first} and {second} coincide modulo 1")]
    DuplicateOffset { first: usize, second: usize },
    #[error("nodes {first} and {second} share the residue {residue} modulo {modulus}")]
    ResidueCollision { first: usize, second: usize, residue: i64, modulus: i64 },
    #[error("perturbation epsilon_{index} = {value} does not satisfy |epsilon| < 1/2")]
    PerturbationTooLarge { index: usize, value: String },
    #[error("perturbation epsilon_0 must be 0, got {value}")]
    NonzeroBasePerturbation { value: String },
    #[error("the delta window is empty: lower {lower} >= upper {upper}")]
    EmptyDeltaRange { lower: f64, upper: f64 },
    #[error("delta = {delta} lies outside the open window ({lower}, {upper})")]
    DeltaOutOfRange { delta: f64, lower: f64, upper: f64 },
    #[error("parameter {name} = {value} is invalid: {reason}")]
    InvalidParameter { name: &'static str, value: String, reason: &'static str },
    #[error("separation condition fails for {first} and {second}: {lhs} <= {rhs}")]
    SeparationViolated { first: usize, second: usize, lhs: i64, rhs: f64 },
    #[error("clusters do not partition the node set: {reason}")]
    InvalidClusters { reason: String },
    #[error("dimension mismatch: {rows} branches against {cols} nodes")]
    DimensionMismatch { rows: usize, cols: usize },
    #[error("non-finite input value in {context}")]
    NonFinite { context: &'static str },
    #[error("cluster {cluster} has {size} nodes; closed-form spectra cover sizes 1 and 2")]
    UnsupportedClusterSize { cluster: usize, size: usize },
    #[error("cluster {cluster} is numerically rank deficient")]
    RankDeficientCluster { cluster: usize },
    #[error("sandwich bound not applicable: L*alpha = {value} >= 1")]
    SandwichNotApplicable { value: f64 },
    #[error("the matrix of the system is numerically singular")]
    NumericallySingular,
    #[error("the complementary system is empty")]
    EmptyComplement,
    #[error("complement constants are not positive: A' = {lower}, B' = {upper}")]
    NonpositiveComplementBound { lower: f64, upper: f64 },
    #[error("the subdomain is not contained in the domain")]
    SubdomainNotContained,
    #[error("{what} did not converge within {iterations} iterations")]
    NotConverged { what: &'static str, iterations: usize },
    #[error("invalid rational literal {text:?}")]
    InvalidRational { text: String },
    #[error("malformed JSON at line {line}, column {column}: {message}")]
    MalformedJson { line: usize, column: usize, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn from_json(err: serde_json::Error) -> Self {
        Error::MalformedJson { line: err.line(), column: err.column(), message: err.to_string() }
    }
}
