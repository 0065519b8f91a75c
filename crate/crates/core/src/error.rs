use alloc::string::String;

/// Errors raised by the bag model, samplers, oracles and constructions.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// A bag references an instance the table does not hold, or the data
    /// violates a collection invariant.
    #[error("data error: {0}")]
    Data(String),

    /// A numeric parameter is outside its admissible range.
    #[error("parameter error: {0}")]
    Parameter(String),

    /// An exhaustive routine was asked to run beyond its size guard.
    #[error("size error: {what} = {actual} exceeds limit {limit}")]
    Size {
        what: &'static str,
        actual: u128,
        limit: u128,
    },

    /// A hypothesis required by a verifier does not hold for the input.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// Gradient descent produced a non-finite loss.
    #[error("training diverged at epoch {epoch}, batch {batch}: loss = {loss}")]
    Training { epoch: usize, batch: usize, loss: f64 },

    /// A randomized generator exhausted its attempt budget.
    #[error("generation failed after {attempts} attempts: {what}")]
    Generation { what: &'static str, attempts: u64 },
}

pub type Result<T> = core::result::Result<T, Error>;

macro_rules! bail {
    ($kind:ident, $($arg:tt)*) => {
        return Err($crate::error::Error::$kind(alloc::format!($($arg)*)))
    };
}
pub(crate) use bail;
