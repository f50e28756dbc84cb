use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("space mismatch: {left} vs {right}")]
    SpaceMismatch { left: String, right: String },
    #[error("{0} does not act here: {1}")]
    NotActing(String, String),
    #[error("nonzero momentum {0}: theta maps M(1, l) to M(1, -l)")]
    NonzeroMomentum(String),
    #[error("sector violation: {0}")]
    Sector(String),
    #[error("state is not homogeneous: {0}")]
    NotHomogeneous(String),
    #[error("symplectic involution needs even rank, got {0}")]
    OddRank(u8),
    #[error("rank mismatch: {0} vs {1}")]
    RankMismatch(u8, u8),
    #[error("mode index {0} is not valid here: {1}")]
    BadMode(String, String),
}

pub type Result<T> = std::result::Result<T, Error>;
