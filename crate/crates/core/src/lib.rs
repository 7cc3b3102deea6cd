//! Exact local conjugacies `ψ_f(t^d) = f(ψ_f(t))` of polynomials near
//! infinity, their Böttcher inverses, certified algebraic relations among
//! such series, and numerically certified Green's functions and canonical
//! heights.

pub mod scalars;
pub mod series;
pub mod conjugacy;
pub mod dependence;
pub mod parse;
pub mod numeric;
pub mod heights;
