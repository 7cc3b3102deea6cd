//! Dense polynomials and truncated Laurent tails in `1/t`.
//!
//! Every [`LaurentTail`] carries its own exact precision: operations compute
//! the exponent range they can guarantee rather than working to a global
//! order, so downstream certification knows exactly which coefficients are
//! trustworthy.

mod laurent;
mod poly;

pub(crate) use laurent::unit_power_next;
pub(crate) use poly::push_scaled;
pub use laurent::{reversion, series_compose_poly, substitute_md, valuation, LaurentTail, MdElement};
pub use poly::Poly;

use thiserror::Error;

use crate::scalars::ScalarError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeriesError {
    #[error("WindowTooSmall: requested {requested} terms, only {available} available")]
    WindowTooSmall { requested: usize, available: usize },
    #[error("NotInvertible: reversion needs leading exponent 1, found {top}")]
    NotInvertible { top: i64 },
    #[error("ZeroSeries: every retained coefficient vanishes (O(t^{prec}))")]
    ZeroSeries { prec: i64 },
    #[error("NonPositiveValuation: inner series has leading exponent {top} < 1")]
    NonPositiveValuation { top: i64 },
    #[error("NotInMd: zeta of order {order} with m = {m} is not in M_{d}")]
    NotInMd { order: u64, m: u32, d: u32 },
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}
