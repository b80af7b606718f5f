use thiserror::Error;

pub type Result<T> = std::result::Result<T, GzError>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GzError {
    #[error("invalid matrix: {0}")]
    InvalidMatrix(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("index out of range: {0}")]
    IndexOutOfRange(String),

    #[error("ambiguous eigenvalue clustering: {0}")]
    ClusterAmbiguity(String),

    #[error("eigenvalue computation did not converge")]
    EigenFailure,

    #[error("matrix is not regular: {0}")]
    NotRegular(String),

    #[error("matrix is not strongly regular: {0}")]
    NotStronglyRegular(String),

    #[error("repeated eigenvalue in block data: {0}")]
    RepeatedEigenvalue(String),

    #[error("duplicate eigenvalue within level {level}")]
    DuplicateWithinLevel { level: usize },

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("invalid decomposition data: {0}")]
    InvalidDecompositionData(String),

    #[error("matrix does not lie in the requested tower: {0}")]
    NotInTower(String),

    #[error("invalid cover point: {0}")]
    InvalidCoverPoint(String),

    #[error("permutation moves blocks of different sizes: {0}")]
    IllegalPermutation(String),

    #[error("zero semisimple parameter at level {level}, block {block}")]
    SingularSemisimplePart { level: usize, block: usize },

    #[error("invalid group element: {0}")]
    InvalidGroupElement(String),

    #[error("cover points lie over different eigenvalue data: {0}")]
    FiberMismatch(String),

    #[error("no invertible transporter at level {level}")]
    NoSolution { level: usize },

    #[error("cover point is not generic: consecutive levels share eigenvalues {shared:?}")]
    NotGeneric { shared: Vec<usize> },

    #[error("invalid Gelfand-Zeitlin value: {0}")]
    InvalidGzValue(String),

    #[error("sampling failed after {attempts} attempts")]
    SamplingFailure { attempts: usize },

    #[error("malformed JSON: {0}")]
    Json(String),
}

impl GzError {
    /// Stable machine-readable tag, used in CLI error output.
    pub fn kind(&self) -> &'static str {
        match self {
            GzError::InvalidMatrix(_) => "InvalidMatrix",
            GzError::DimensionMismatch(_) => "DimensionMismatch",
            GzError::IndexOutOfRange(_) => "IndexOutOfRange",
            GzError::ClusterAmbiguity(_) => "ClusterAmbiguity",
            GzError::EigenFailure => "EigenFailure",
            GzError::NotRegular(_) => "NotRegular",
            GzError::NotStronglyRegular(_) => "NotStronglyRegular",
            GzError::RepeatedEigenvalue(_) => "RepeatedEigenvalue",
            GzError::DuplicateWithinLevel { .. } => "DuplicateWithinLevel",
            GzError::InvalidPartition(_) => "InvalidPartition",
            GzError::InvalidDecompositionData(_) => "InvalidDecompositionData",
            GzError::NotInTower(_) => "NotInTower",
            GzError::InvalidCoverPoint(_) => "InvalidCoverPoint",
            GzError::IllegalPermutation(_) => "IllegalPermutation",
            GzError::SingularSemisimplePart { .. } => "SingularSemisimplePart",
            GzError::InvalidGroupElement(_) => "InvalidGroupElement",
            GzError::FiberMismatch(_) => "FiberMismatch",
            GzError::NoSolution { .. } => "NoSolution",
            GzError::NotGeneric { .. } => "NotGeneric",
            GzError::InvalidGzValue(_) => "InvalidGzValue",
            GzError::SamplingFailure { .. } => "SamplingFailure",
            GzError::Json(_) => "Json",
        }
    }
}

impl From<serde_json::Error> for GzError {
    fn from(e: serde_json::Error) -> Self {
        GzError::Json(e.to_string())
    }
}
