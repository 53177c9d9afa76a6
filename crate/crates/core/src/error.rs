use thiserror::Error;

use crate::kernel::ComplexBox;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    /// A soft comparison kept doubling precision past the configured cap,
    /// which happens when both compared quantities are exactly zero.
    #[error("soft comparison exceeded the iteration cap of {cap} bits")]
    IterationCap { cap: u32 },

    #[error("argument out of range: {0}")]
    ArgumentOutOfRange(String),

    #[error("requested working precision of {bits} bits exceeds kernel limits")]
    PrecisionOverflow { bits: i64 },

    #[error("subdivision depth {depth} exceeded at box {offending:?}")]
    DepthExceeded {
        depth: u32,
        offending: Box<ComplexBox>,
    },

    #[error("denominator enclosure contains zero")]
    ZeroDenominator,

    #[error("point coincides with a root")]
    ZeroDistance,

    #[error("root magnitude enclosure straddles 1")]
    AmbiguousBoundary,

    #[error("{count} roots exceed the brute-force cap of {cap}")]
    TooManyRoots { count: usize, cap: usize },

    #[error("invalid input: {0}")]
    InvalidInput(String),
}
