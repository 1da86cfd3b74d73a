use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("arity mismatch: cannot compose a term with {left_out} outputs into a term with {right_in} inputs")]
    ArityMismatch { left_out: usize, right_in: usize },

    #[error("parse error at offset {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("enumeration cap exceeded: {detail} (cap {cap})")]
    ResourceCap { detail: String, cap: u64 },

    #[error("invalid group: {0}")]
    Group(String),

    #[error("invalid presentation: {0}")]
    Presentation(String),

    #[error("algebra failed validation: {0}")]
    Validation(String),

    #[error("span feet mismatch: {0}")]
    FootMismatch(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("bad input: {0}")]
    BadInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
