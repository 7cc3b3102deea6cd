//! Algebraic relations among truncated series: exact search by kernel
//! computation, verification, the invariance (factor) condition, and
//! relations built from semiconjugacies.
//!
//! A [`DependenceReport::Found`] relation is a certificate: it has been
//! re-evaluated with exactly zero residual on twice the search window.
//! [`DependenceReport::NotFoundUpTo`] is only evidence bounded by the degree
//! and window searched.

mod certificate;
mod elimination;
mod relation;
mod semiconj;

pub use certificate::{materialize_series, Certificate};
pub use relation::{Monomial, Relation};
pub use semiconj::{quadratic_semiconj_search, semiconj_verify, witness_relation, QuadraticSearch, SemiconjWitness};

use rayon::prelude::*;
use thiserror::Error;

use crate::conjugacy::ConjugacyError;
use crate::parse::ParseError;
use crate::scalars::{CyclotomicScalar as Scalar, ScalarError};
use crate::series::{LaurentTail, Poly, SeriesError};

/// Extra equations demanded beyond the number of unknown coefficients.
pub const SAFETY_ROWS: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DependenceError {
    #[error("DegreeBoundZero: the degree bound must be at least 1")]
    DegreeBoundZero,
    #[error("SeriesWindowTooShort: series {index} has {available} terms, {needed} needed")]
    SeriesWindowTooShort { index: usize, available: usize, needed: usize },
    #[error("WindowInsufficient: {rows} equations for {monomials} monomials, need {needed}")]
    WindowInsufficient { rows: usize, monomials: usize, needed: usize },
    #[error("NoSeries: at least one series is required")]
    NoSeries,
    #[error("ArityMismatch: relation has {nvars} variables, expected {expected}")]
    ArityMismatch { nvars: usize, expected: usize },
    #[error("ZeroRelation: the relation is identically zero")]
    ZeroRelation,
    #[error("ConstantSemiconjugacy: the semiconjugacy must be non-constant")]
    ConstantSemiconjugacy,
    #[error("NotASemiconjugacy: f^{iterate} ∘ pi ≠ pi ∘ h")]
    NotASemiconjugacy { iterate: u32 },
    #[error("TwistNotFound: none of the {candidates} twists matches")]
    TwistNotFound { candidates: usize },
    #[error("CertificateFormat: line {line}: {reason}")]
    CertificateFormat { line: usize, reason: String },
    #[error("CertificateMismatch: recorded {recorded}, recomputed {computed}")]
    CertificateMismatch { recorded: String, computed: String },
    #[error(transparent)]
    Conjugacy(#[from] ConjugacyError),
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
    #[error(transparent)]
    Parse(#[from] ParseError),
}

/// What substituting the series into a relation leaves behind.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Residual {
    /// Every coefficient above `O(t^prec)` is zero.
    Vanishes { prec: i64 },
    /// Leading exponent of a nonzero residual.
    NonZero { valuation: i64 },
}

impl Residual {
    pub fn vanishes(&self) -> bool {
        matches!(self, Residual::Vanishes { .. })
    }

    /// The valuation of a nonzero residual.
    pub fn valuation(&self) -> Option<i64> {
        match self {
            Residual::NonZero { valuation } => Some(*valuation),
            Residual::Vanishes { .. } => None,
        }
    }
}

impl std::fmt::Display for Residual {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Residual::Vanishes { prec } => write!(f, "O(t^{prec})"),
            Residual::NonZero { valuation } => write!(f, "nonzero at t^{valuation}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DependenceReport {
    Found { relation: Relation, verified_window: usize, residual: Residual },
    /// `spurious` counts kernel vectors of the search matrix that failed
    /// re-verification on the doubled window.
    NotFoundUpTo { degree_bound: u32, window: usize, spurious: usize },
}

impl DependenceReport {
    pub fn relation(&self) -> Option<&Relation> {
        match self {
            DependenceReport::Found { relation, .. } => Some(relation),
            DependenceReport::NotFoundUpTo { .. } => None,
        }
    }
}

fn truncated(series: &[LaurentTail], window: usize) -> Result<Vec<LaurentTail>, DependenceError> {
    series
        .iter()
        .enumerate()
        .map(|(index, s)| {
            s.truncate(window).map_err(|_| DependenceError::SeriesWindowTooShort {
                index,
                available: s.window(),
                needed: window,
            })
        })
        .collect()
}

/// Substitute `X_0 = t`, `X_i = series[i-1]` (each cut to `window` terms).
pub fn verify_relation(rel: &Relation, series: &[LaurentTail], window: usize) -> Result<Residual, DependenceError> {
    if rel.nvars() != series.len() + 1 {
        return Err(DependenceError::ArityMismatch { nvars: rel.nvars(), expected: series.len() + 1 });
    }
    if rel.is_zero() {
        return Err(DependenceError::ZeroRelation);
    }
    let cut = truncated(series, window)?;
    let value = rel.eval_series(&cut);
    let first = value.support().next();
    Ok(match first {
        Some(valuation) => Residual::NonZero { valuation },
        None => Residual::Vanishes { prec: value.prec() },
    })
}

/// Search for a nonzero `P` of total degree `≤ degree_bound` with
/// `P(t, s_1, …, s_n) = 0`, using `window` terms of each series and
/// re-verifying on `2·window` terms, which every series must provide.
///
/// Kernel vectors are tried by increasing graded-lex leading monomial, so
/// the first verified one has minimal total degree.
pub fn find_relation(series: &[LaurentTail], degree_bound: u32, window: usize) -> Result<DependenceReport, DependenceError> {
    if degree_bound == 0 {
        return Err(DependenceError::DegreeBoundZero);
    }
    if series.is_empty() {
        return Err(DependenceError::NoSeries);
    }
    truncated(series, 2 * window)?;
    let cut = truncated(series, window)?;
    let nvars = series.len() + 1;
    let monomials = Monomial::all_up_to(nvars, degree_bound);
    let floor = relation::exact_floor(&cut, degree_bound);

    // powers[i][e] = s_i^e, e ≥ 1
    let powers: Vec<Vec<LaurentTail>> = cut
        .par_iter()
        .map(|s| {
            let mut v = vec![s.clone(), s.clone()];
            for _ in 2..=degree_bound {
                let next = v.last().unwrap().mul(s);
                v.push(next);
            }
            v
        })
        .collect();
    let columns: Vec<LaurentTail> = monomials
        .par_iter()
        .map(|m| {
            let e = m.exps();
            let mut acc: Option<LaurentTail> = None;
            for (i, &k) in e.iter().enumerate().skip(1) {
                if k > 0 {
                    let p = &powers[i - 1][k as usize];
                    acc = Some(match acc {
                        Some(a) => a.mul(p),
                        None => p.clone(),
                    });
                }
            }
            match acc {
                Some(a) => a.shift(e[0] as i64),
                None => LaurentTail::monomial(Scalar::one(), e[0] as i64, floor),
            }
        })
        .collect();

    let low = columns.iter().map(LaurentTail::prec).max().expect("at least one monomial");
    let high = columns.iter().map(LaurentTail::top).max().expect("at least one monomial");
    let rows = (high - low).max(0) as usize;
    let needed = monomials.len() + SAFETY_ROWS;
    if rows < needed {
        return Err(DependenceError::WindowInsufficient { rows, monomials: monomials.len(), needed });
    }
    let matrix: Vec<Vec<Scalar>> = ((low + 1)..=high)
        .rev()
        .map(|e| columns.iter().map(|c| c.coeff(e).unwrap_or_else(Scalar::zero)).collect())
        .collect();

    let mut spurious = 0;
    for (_, v) in elimination::kernel_by_free_column(&matrix, monomials.len()) {
        let rel = Relation::from_terms(nvars, monomials.iter().cloned().zip(v)).normalize();
        let residual = verify_relation(&rel, series, 2 * window)?;
        if residual.vanishes() {
            return Ok(DependenceReport::Found { relation: rel, verified_window: 2 * window, residual });
        }
        spurious += 1;
    }
    Ok(DependenceReport::NotFoundUpTo { degree_bound, window, spurious })
}

/// Whether `P` divides `P(X_0^d, f_1(X_1), …, f_n(X_n))`.
pub fn check_invariance(rel: &Relation, base_degree: u32, maps: &[Poly]) -> Result<bool, DependenceError> {
    if rel.nvars() != maps.len() + 1 {
        return Err(DependenceError::ArityMismatch { nvars: rel.nvars(), expected: maps.len() + 1 });
    }
    if rel.is_zero() {
        return Err(DependenceError::ZeroRelation);
    }
    let mut all = vec![Poly::monomial(Scalar::one(), base_degree as usize)];
    all.extend(maps.iter().cloned());
    Ok(rel.substitute_univariate(&all).is_divisible_by(rel))
}
