use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum KernelError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("empty universe")]
    EmptyUniverse,
    #[error("restriction map sends {x} to {hx}, which is not in W by stage {stage}")]
    OutsideRange { x: u64, hx: u64, stage: usize },
    #[error("reduction function undefined at {0}: {1}")]
    Undefined(u64, String),
    #[error("malformed trace: {0}")]
    Trace(String),
}
