use thiserror::Error;

use crate::schemes::SchemeKind;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("scheme {0} is not supported by this operation")]
    UnsupportedScheme(SchemeKind),

    #[error("singular system: {0}")]
    Singular(String),

    #[error("value out of evaluation range: {0}")]
    OutOfRange(String),

    #[error("imaginary residue {residue:e} exceeds cap {cap:e}")]
    ImaginaryResidue { residue: f64, cap: f64 },

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),

    #[error("io: {0}")]
    Io(#[from] std::io::Error),

    #[error("parse: {0}")]
    Parse(String),
}

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}
