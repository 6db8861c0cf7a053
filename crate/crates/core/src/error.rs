use thiserror::Error;

/// Which side of a moment pair an error refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    P,
    Q,
}

impl std::fmt::Display for Side {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Side::P => f.write_str("P"),
            Side::Q => f.write_str("Q"),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid moments: {0}")]
    InvalidMoments(String),

    #[error("means coincide (a = 0); no minimizing pair exists")]
    GapZero,

    #[error("standard deviation of {0} is zero; construction degenerates")]
    DegenerateVariance(Side),

    #[error("bad parameter: {0}")]
    BadParameter(String),

    #[error("dimension mismatch: P has d = {p}, Q has d = {q}")]
    DimensionMismatch { p: usize, q: usize },

    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    #[error("internal consistency check failed: {0}")]
    InternalConsistency(String),
}

pub type Result<T> = std::result::Result<T, Error>;
