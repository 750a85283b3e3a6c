use thiserror::Error;

/// Errors raised by algebra construction, parsing and configuration.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error at position {position}: {message}")]
    Parse { position: usize, message: String },

    #[error("predicted basis size {predicted} exceeds the cap of {cap} elements")]
    ResourceCap { predicted: u128, cap: usize },

    #[error("antilinear map is not an involution")]
    NotInvolution,

    #[error("ideal not in lowest degree")]
    IdealNotLowestDegree,

    #[error("ideal not real")]
    IdealNotReal,

    #[error("depth collapses below μ")]
    DepthCollapse,

    #[error("{0}")]
    InvalidInput(String),

    #[error("{key}: {message}")]
    Config { key: String, message: String },

    #[error("internal consistency failure: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
