//! Error types shared across the crate.

use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    /// `invert` was asked for a series that is zero to its tracked order.
    #[error("cannot invert a series that is zero to its valid order")]
    ZeroLeadingCoefficient,

    /// `sign_twist` / `dissect` require integer exponents.
    #[error("operation requires integer exponents, series has fractional support")]
    FractionalTwist,

    /// An infinite Pochhammer product with infinitely many non-positive factor exponents.
    #[error("divergent infinite product: factor exponents do not increase")]
    DivergentProduct,

    /// A displayed theta denominator vanished, or a random draw was degenerate.
    #[error("non-generic parameters: {0}")]
    NonGenericParameters(String),

    /// An Appell-sum denominator monomial is exactly +1.
    #[error("Appell sum has a pole: denominator monomial equals 1 at lattice point r={0}")]
    PoleAtLatticePoint(i64),

    /// Double-sum region scan failed to reach the target order.
    #[error("double-sum region is not exponent-coercive for these arguments")]
    UnboundedRegion,

    /// Bivariate product certified no z-coefficient at the requested order.
    #[error("no z-coefficient of the bivariate product is certifiable at the requested order")]
    EmptySafeWindow,

    /// Normalization exponent m^2/4N is undefined at level N = 0.
    #[error("normalization undefined: level N = 0")]
    UndefinedNormalization,

    /// A label or level violated its range/parity constraints.
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),

    /// Unknown suite name passed to the runner.
    #[error("unknown suite: {0}")]
    UnknownSuite(String),

    /// `invert`/`pow` need a finite tracked order to produce a truncated result.
    #[error("operation needs a finite truncation order; call truncate() first")]
    UnboundedOperand,
}

pub type Result<T> = std::result::Result<T, Error>;
