use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("matrix is singular")]
    Singular,

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("unsupported trace order {order}: closed forms exist only up to {max}")]
    UnsupportedOrder { order: u64, max: u64 },

    #[error("infeasible: {0}")]
    Feasibility(String),

    /// A value that must be integral (or nonnegative) was not. Always a bug.
    #[error("internal consistency violation: {0}")]
    Consistency(String),

    #[error("malformed input: {0}")]
    Parse(String),
}

/// Rejects hypercycle parameters outside `r >= 3`, `l >= 3`.
pub(crate) fn check_hypercycle(r: u32, l: u32) -> Result<()> {
    if r < 3 {
        return Err(Error::Parameter(format!("uniformity r must be >= 3, got {r}")));
    }
    if l < 3 {
        return Err(Error::Parameter(format!("cycle length l must be >= 3, got {l}")));
    }
    Ok(())
}
