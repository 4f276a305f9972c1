//! Exact q-series engine and identity verification harness.
//!
//! Everything is computed over arbitrary-precision rationals as truncated
//! Laurent series with tracked validity; identity checks are coefficient-wise
//! equalities below a certified order, never floating point.
//!
//! Module map:
//! - [`series`]: the univariate engine ([`series::ScaledSeries`])
//! - [`biseries`]: bivariate series on certified z-windows
//! - [`theta`]: theta constructors and the product-rearrangement toolkit
//! - [`appell`]: Appell sums `m(x,z;q)` and their transformation laws
//! - [`hecke`]: Hecke-type double sums and the positive-discriminant expansion
//! - [`mock`]: Eulerian mock theta series and their Appell/theta identities
//! - [`stringfn`]: admissible characters and string functions
//! - [`suite`]: the named verification suites and reports

pub mod appell;
pub mod biseries;
pub mod check;
pub mod error;
pub mod hecke;
pub mod mock;
pub mod monomial;
pub mod series;
pub mod stringfn;
pub mod suite;
pub mod text;
pub mod theta;

/// Coefficients: arbitrary-precision rationals.
pub type Coef = num::BigRational;

/// Exponents: machine-word rationals (exponent magnitudes stay small).
pub type QExp = num::rational::Ratio<i64>;

pub use check::{compare, CheckOutcome, Mismatch};
pub use error::{Error, Result};
pub use monomial::Monomial;
pub use series::ScaledSeries;
