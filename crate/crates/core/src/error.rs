use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("index {index} out of range for {len} sites")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("matrix is not Hermitian (max asymmetry {asymmetry:e})")]
    NotHermitian { asymmetry: f64 },

    #[error("port losses were already applied to this correlation matrix")]
    LossesAlreadyApplied,

    #[error("invalid branch partition: {0}")]
    InvalidPartition(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix has no positive weight")]
    ZeroMatrix,

    #[error("visibility undefined: distinguishable rate is zero at ({0}, {1})")]
    UndefinedVisibility(usize, usize),

    #[error("count matrix has zero total counts")]
    ZeroCounts,

    #[error("under-determined fit: {observations} observations for {parameters} free parameters")]
    Underdetermined { observations: usize, parameters: usize },

    #[error("bounds violated: {0}")]
    BoundsViolated(String),

    #[error("unknown site label `{0}`")]
    UnknownSite(String),

    #[error("malformed input: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    /// True for errors that originate in reading or writing files.
    pub fn is_io(&self) -> bool {
        matches!(self, Error::Io(_))
    }
}
