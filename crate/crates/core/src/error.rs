use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("invalid date: {0}")]
    InvalidDate(String),
    #[error("crop window does not overlap the grid")]
    EmptyDomain,
    #[error("insufficient data: {0}")]
    InsufficientData(String),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("label streams are not aligned: {0}")]
    Alignment(String),
    #[error("invalid ensemble member: {0}")]
    InvalidMember(String),
    #[error("ensemble has {0} members, at least 3 are required")]
    InsufficientEnsemble(usize),
}

macro_rules! invalid_arg {
    ($($arg:tt)*) => {
        $crate::error::Error::InvalidArgument(alloc::format!($($arg)*))
    };
}
pub(crate) use invalid_arg;
