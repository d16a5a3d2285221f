use thiserror::Error;

/// Errors reported by the clustering library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("data set is empty")]
    EmptyDataSet,

    #[error("point {index} has dimension {got}, expected {expected}")]
    DimensionMismatch {
        index: usize,
        expected: usize,
        got: usize,
    },

    #[error("non-finite coordinate in point {index}")]
    NonFiniteCoordinate { index: usize },

    #[error("weight of point {index} must be positive")]
    ZeroWeight { index: usize },

    #[error("k must be at least 1")]
    ZeroClusters,

    #[error("k = {k} exceeds the number of distinct data points m = {m}")]
    TooManyClusters { k: usize, m: usize },

    #[error("invalid parameter {name}: {reason}")]
    InvalidParam { name: &'static str, reason: String },

    #[error("data points must be pairwise distinct; deduplicate the data set first")]
    DuplicatePoints,

    #[error("no admissible candidates: every data point coincides with a current centroid")]
    DegenerateCandidates,

    #[error("assignment inconsistent with data or centroids: {0}")]
    InconsistentAssignment(String),

    #[error("empty subset has no barycenter")]
    EmptySubset,

    #[error("instance needs {required} partitions, above the enumeration cap {cap}")]
    PartitionCapExceeded { required: u128, cap: u64 },

    #[error("I/O failure: {0}")]
    Io(#[from] std::io::Error),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
