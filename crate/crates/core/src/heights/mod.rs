//! Green's functions, canonical heights and their local decomposition, with
//! rigorous error bounds.
//!
//! # Escape radius
//!
//! Write `f = b_d t^d + … + b_0` and `S(r) = Σ_{i<d} |b_i/b_d| r^{i+1-d}`.
//! The escape radius `R` is the least multiple of `1/4` with `R ≥ 1`,
//! `S(R) ≤ R/2` and `|b_d| R^{d-1} ≥ 2`; write `S = S(R)`. For `|z| ≥ R`,
//! `f(z) = b_d z^d (1 + ε(z))` with `|ε(z)| ≤ Σ |b_i/b_d| |z|^{i-d} ≤ S/|z| ≤ 1/2`,
//! hence `|f(z)| ≥ |z|·|b_d||z|^{d-1}/2 ≥ |z|`: the orbit stays outside the
//! disk of radius `R`.
//!
//! # Archimedean tail
//!
//! Telescoping `log|z_{k+1}| = log|b_d| + d log|z_k| + log|1 + ε_k|` gives,
//! whenever `|z_K| ≥ R`,
//!
//! `G(a) = d^{-K} (log|z_K| + log|b_d|/(d-1)) + T`,
//! `|T| ≤ Σ_{k≥K} d^{-(k+1)} 2|ε_k| ≤ 2S d^{-K} / ((d-1)|z_K|)`,
//!
//! using `|log|1+ε|| ≤ 2|ε|` for `|ε| ≤ 1/2`. If the orbit stays in the
//! disk of radius `2R` for `n` steps, the maximum principle for the
//! subharmonic `G` gives `0 ≤ G(a) ≤ d^{-n} (log 2R + log|b_d|/(d-1) + S/((d-1)R))`,
//! a certified value that does not prove the orbit bounded.
//!
//! # Finite places
//!
//! For monic integral `f` the local contribution at `p` is exactly
//! `max(0, -v_p(a)) log p`. Otherwise each prime dividing a denominator or
//! the leading coefficient is handled by iterating `p`-adic balls: with
//! `ρ = min(min_{i<d} (v(b_i) - v(b_d))/(d-i), -v(b_d)/(d-1))`, a point with
//! `v(z) < ρ` has `G_p(z) = (-v(z) - v(b_d)/(d-1)) log p` exactly, while
//! `v(z_n) ≥ ρ` gives `G_p(a) ≤ d^{-n} (max(0,-ρ) + max(0,-min v(b_i))/(d-1)) log p`.

mod padic;
mod primes;

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::conjugacy::{solve_psi, ConjugacyError};
use crate::numeric::{bits_for_digits, ComplexInterval, Dyadic, Interval, PrecisionReal};
use crate::scalars::{CyclotomicScalar as Scalar, RootOfUnity, Rational, ScalarError};
use crate::series::{Poly, SeriesError};

use padic::Field;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HeightsError {
    #[error("DegreeTooLow: degree {degree} < 2")]
    DegreeTooLow { degree: usize },
    #[error("NonRationalCoefficients: heights need a polynomial over Q")]
    NonRationalCoefficients,
    #[error("NonRationalPoint: {point} is not rational")]
    NonRationalPoint { point: String },
    #[error("MaxIterationsExceeded: undecided after {iterations} iterations; value in [0, {bound}]")]
    MaxIterationsExceeded { iterations: usize, bound: String },
    #[error("PrecisionExhausted: intervals too wide at {bits} bits")]
    PrecisionExhausted { bits: u64 },
    #[error("RadiusTooSmall: |a| = {modulus} must exceed the convergence radius {radius}")]
    RadiusTooSmall { modulus: String, radius: String },
    #[error("NonRationalSeries: the local conjugacy of f does not have rational coefficients")]
    NonRationalSeries,
    #[error("DenominatorNotSeparated: denominator {enclosure} is not bounded away from 0")]
    DenominatorNotSeparated { enclosure: String },
    #[error(transparent)]
    Conjugacy(#[from] ConjugacyError),
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

/// Iteration limits for orbit-based evaluation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HeightConfig {
    pub digits: u32,
    pub max_iterations: usize,
    pub max_precision_bits: u64,
}

impl HeightConfig {
    pub fn with_digits(digits: u32) -> Self {
        HeightConfig { digits, ..Self::default() }
    }
}

impl Default for HeightConfig {
    fn default() -> Self {
        HeightConfig { digits: 30, max_iterations: 10_000, max_precision_bits: 1 << 15 }
    }
}

/// How an orbit was resolved.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OrbitStatus {
    /// Entered the escape region after `iterations` steps.
    Escaped { iterations: usize },
    /// Exact iteration found `f^{preperiod + period}(a) = f^{preperiod}(a)`.
    Preperiodic { preperiod: usize, period: usize },
    /// Stayed in a bounded disk for `iterations` steps; the value is
    /// certified small, boundedness is not proven.
    BoundedUnproven { iterations: usize },
}

impl OrbitStatus {
    pub fn is_proven_zero(&self) -> bool {
        matches!(self, OrbitStatus::Preperiodic { .. })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GreenValue {
    pub value: PrecisionReal,
    pub status: OrbitStatus,
}

/// `ĥ_f(a) = G_f(a) + Σ_p G_{f,p}(a)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeightBreakdown {
    pub archimedean: PrecisionReal,
    pub archimedean_status: OrbitStatus,
    /// Nonzero (or not provably zero) local contributions, by prime.
    pub finite: BTreeMap<BigInt, PrecisionReal>,
    pub total: PrecisionReal,
    pub proven_preperiodic: bool,
}

/// Escape data of a polynomial over `Q`.
struct Escape {
    d: u32,
    coeffs: Vec<Rational>,
    lead: Rational,
    /// `Σ_{i<d} |b_i/b_d|`.
    spread: Rational,
    radius: Rational,
}

impl Escape {
    fn new(f: &Poly) -> Result<Self, HeightsError> {
        let d = f.deg();
        if d < 2 {
            return Err(HeightsError::DegreeTooLow { degree: d });
        }
        let coeffs: Vec<Rational> = f
            .coeffs()
            .iter()
            .map(|c| c.as_rational().cloned())
            .collect::<Option<_>>()
            .ok_or(HeightsError::NonRationalCoefficients)?;
        let lead = coeffs[d].clone();
        let ratios: Vec<Rational> = coeffs[..d].iter().map(|b| (b / &lead).abs()).collect();
        // S(r) = Σ_{i<d} |b_i/b_d| r^{i+1-d}, nonincreasing in r
        let spread_at = |r: &Rational| -> Rational {
            ratios.iter().enumerate().map(|(i, c)| c * num_traits::pow(r.recip(), d - 1 - i)).sum()
        };
        let quarter = |m: &BigInt| Rational::new(m.clone(), BigInt::from(4));
        let two = Rational::from_integer(2.into());
        let admissible = |m: &BigInt| {
            let r = quarter(m);
            spread_at(&r) * &two <= r && lead.abs() * num_traits::pow(r.clone(), d - 1) >= two
        };
        let mut m = BigInt::from(4);
        if !admissible(&m) {
            let mut hi = m.clone() * 2;
            while !admissible(&hi) {
                hi *= 2;
            }
            // least admissible multiple of 1/4 in (m, hi]
            while &hi - &m > BigInt::one() {
                let mid: BigInt = (&m + &hi) / 2;
                if admissible(&mid) {
                    hi = mid;
                } else {
                    m = mid;
                }
            }
            m = hi;
        }
        let spread = spread_at(&quarter(&m));
        Ok(Escape { d: d as u32, coeffs, lead, spread, radius: quarter(&m) })
    }

    fn is_monic_integral(&self) -> bool {
        self.lead.is_one() && self.coeffs.iter().all(|c| c.is_integer())
    }
}

/// The escape radius `R` used for `f` (see the module docs).
pub fn escape_radius(f: &Poly) -> Result<Rational, HeightsError> {
    Ok(Escape::new(f)?.radius)
}

fn scalar_bits(a: &Scalar) -> u64 {
    a.coords().iter().map(|q| q.numer().bits() + q.denom().bits()).sum()
}

const EXACT_STEPS: usize = 64;
const EXACT_BITS: u64 = 1 << 14;

/// Exact orbit of `a` while it stays small, and a cycle if one shows up.
fn exact_orbit(f: &Poly, a: &Scalar) -> (Vec<Scalar>, Option<OrbitStatus>) {
    let mut orbit = vec![a.clone()];
    while orbit.len() <= EXACT_STEPS {
        let next = f.eval(orbit.last().unwrap());
        if let Some(i) = orbit.iter().position(|z| *z == next) {
            let status = OrbitStatus::Preperiodic { preperiod: i, period: orbit.len() - i };
            return (orbit, Some(status));
        }
        if scalar_bits(&next) > EXACT_BITS {
            break;
        }
        orbit.push(next);
    }
    (orbit, None)
}

fn rational_interval(q: &Rational, prec: u64) -> Interval {
    Interval::from_rational(q, prec)
}

fn d_pow_inv(d: u32, k: usize, prec: u64) -> Interval {
    let den = num_traits::pow(BigInt::from(d), k);
    rational_interval(&Rational::new(BigInt::one(), den), prec)
}

enum Attempt<T> {
    Done(T),
    NeedPrecision,
}

/// One pass of the archimedean computation at `prec` bits.
fn green_attempt(esc: &Escape, a: &Scalar, cfg: &HeightConfig, prec: u64) -> Result<Attempt<GreenValue>, HeightsError> {
    let target = Dyadic::two_pow(-(bits_for_digits(cfg.digits) as i64));
    let d = esc.d;
    let coeffs: Vec<ComplexInterval> = esc.coeffs.iter().map(|c| ComplexInterval::from_rational(c, prec)).collect();
    let r = rational_interval(&esc.radius, prec);
    let r2 = r.sqr(prec);
    let outer2 = r2.scale2(2);
    let dm1 = Interval::from_int(d as i64 - 1);
    let ln_lead = rational_interval(&esc.lead.abs(), prec).ln(prec).expect("nonzero lead");
    let lead_term = ln_lead.div(&dm1, prec).expect("d ≥ 2");
    let spread = rational_interval(&esc.spread, prec);
    // bound for G on the disk of radius 2R
    let disk_max = r
        .scale2(1)
        .ln(prec)
        .expect("R ≥ 1")
        .add(&lead_term, prec)
        .add(&spread.div(&r.mul(&dm1, prec), prec).expect("R > 0"), prec)
        .hi()
        .clone()
        .max(Dyadic::zero());

    let mut z = ComplexInterval::from_scalar(a, prec);
    for n in 0..=cfg.max_iterations {
        let norm = z.norm_sqr(prec);
        if norm.lo() >= r2.lo() && norm.lo() >= r2.hi() {
            let mut k = n;
            let mut norm = norm;
            loop {
                // |z_k| ≥ 2^{⌊log2 |z|^2 / 2⌋ - 1}, a crude dyadic lower bound
                let lower = lower_sqrt(norm.lo());
                let tail = spread
                    .scale2(1)
                    .div(&dm1.mul(&Interval::point(lower), prec), prec)
                    .expect("positive")
                    .mul(&d_pow_inv(d, k, prec), prec);
                if tail.hi() <= &target.scale2(-2) {
                    let log_abs = norm.ln(prec).expect("positive").scale2(-1);
                    let value = log_abs
                        .add(&lead_term, prec)
                        .mul(&d_pow_inv(d, k, prec), prec)
                        .widen(tail.hi(), prec);
                    let value = clamp_nonnegative(value);
                    if value.width() > target.scale2(1) {
                        return Ok(Attempt::NeedPrecision);
                    }
                    let status = OrbitStatus::Escaped { iterations: n };
                    return Ok(Attempt::Done(GreenValue { value: PrecisionReal::new(value, cfg.digits), status }));
                }
                z = ComplexInterval::horner(&coeffs, &z, prec);
                norm = z.norm_sqr(prec);
                k += 1;
                if norm.lo() < r2.hi() {
                    return Ok(Attempt::NeedPrecision);
                }
            }
        }
        if norm.hi() <= outer2.lo() {
            let bound = d_pow_inv(d, n, prec).mul(&Interval::point(disk_max.clone()), prec);
            if bound.hi() <= &target {
                let value = Interval::new(Dyadic::zero(), bound.hi().clone());
                let status = OrbitStatus::BoundedUnproven { iterations: n };
                return Ok(Attempt::Done(GreenValue { value: PrecisionReal::new(value, cfg.digits), status }));
            }
            if n == cfg.max_iterations {
                return Err(HeightsError::MaxIterationsExceeded {
                    iterations: n,
                    bound: format!("{:.3e}", bound.hi().to_f64()),
                });
            }
        } else {
            return Ok(Attempt::NeedPrecision);
        }
        z = flush_tiny(ComplexInterval::horner(&coeffs, &z, prec), prec);
    }
    unreachable!("the loop returns at max_iterations")
}

/// Replace parts of `z` within `2^{-2 prec}` of zero by that whole ball,
/// so orbits converging to 0 keep bounded exponents.
fn flush_tiny(z: ComplexInterval, prec: u64) -> ComplexInterval {
    let tiny = Dyadic::two_pow(-2 * prec as i64);
    let flush = |x: Interval| {
        if x.lo() >= &tiny.neg() && x.hi() <= &tiny {
            Interval::new(tiny.neg(), tiny.clone())
        } else {
            x
        }
    };
    ComplexInterval { re: flush(z.re), im: flush(z.im) }
}

/// A dyadic `ℓ > 0` with `ℓ ≤ √x` for `x > 0`.
fn lower_sqrt(x: &Dyadic) -> Dyadic {
    let mut e = 0i64;
    // find e with 2^{2e} ≤ x, stepping by powers of two
    let mut step = 1i64;
    while Dyadic::two_pow(2 * (e + step)) <= *x {
        e += step;
        step *= 2;
    }
    while Dyadic::two_pow(2 * e) > *x {
        e -= step.max(1);
        step = (step / 2).max(1);
    }
    Dyadic::two_pow(e)
}

fn clamp_nonnegative(v: Interval) -> Interval {
    if v.lo().signum() < 0 {
        let hi = v.hi().clone().max(Dyadic::zero());
        Interval::new(Dyadic::zero(), hi)
    } else {
        v
    }
}

fn with_precision<T>(
    cfg: &HeightConfig,
    mut attempt: impl FnMut(u64) -> Result<Attempt<T>, HeightsError>,
) -> Result<T, HeightsError> {
    let mut prec = bits_for_digits(cfg.digits) + 64;
    loop {
        match attempt(prec)? {
            Attempt::Done(v) => return Ok(v),
            Attempt::NeedPrecision if prec * 2 <= cfg.max_precision_bits => prec *= 2,
            Attempt::NeedPrecision => return Err(HeightsError::PrecisionExhausted { bits: prec }),
        }
    }
}

/// `G_f(a) = lim d^{-n} log|f^n(a)|` for `f` over `Q` and `a ∈ Q(ζ_n)`,
/// embedded by `ζ_n ↦ e^{2πi/n}`.
pub fn green(f: &Poly, a: &Scalar, cfg: &HeightConfig) -> Result<GreenValue, HeightsError> {
    let esc = Escape::new(f)?;
    if let (_, Some(status)) = exact_orbit(f, a) {
        return Ok(GreenValue { value: PrecisionReal::exact_zero(cfg.digits), status });
    }
    with_precision(cfg, |prec| green_attempt(&esc, a, cfg, prec))
}

/// `h(p/q) = log max(|p|, q)`.
pub fn naive_height(a: &Rational, digits: u32) -> PrecisionReal {
    let m = a.numer().abs().max(a.denom().clone());
    let prec = bits_for_digits(digits) + 32;
    let v = rational_interval(&Rational::from_integer(m), prec).ln(prec).expect("m ≥ 1");
    PrecisionReal::new(v, digits)
}

fn rational_valuation(q: &Rational, p: &BigInt) -> i64 {
    primes::valuation(q.numer(), p) - primes::valuation(q.denom(), p)
}

/// A local contribution `G_p(a)`: an exact multiple of `log p` or a
/// certified upper bound.
enum Local {
    Exact(Rational),
    AtMost(Rational),
}

fn local_attempt(esc: &Escape, orbit: &[Rational], p: &BigInt, cfg: &HeightConfig, prec: i64) -> Result<Attempt<Local>, HeightsError> {
    let d = esc.d as i64;
    let v_lead = rational_valuation(&esc.lead, p);
    let mut rho = Rational::new((-v_lead).into(), (d - 1).into());
    let mut min_v = v_lead;
    for (i, b) in esc.coeffs[..esc.d as usize].iter().enumerate() {
        if b.is_zero() {
            continue;
        }
        let vb = rational_valuation(b, p);
        min_v = min_v.min(vb);
        rho = rho.min(Rational::new((vb - v_lead).into(), (d - i as i64).into()));
    }
    let escaped = |v: i64, n: usize| {
        let num = Rational::from_integer((-v).into()) - Rational::new(v_lead.into(), (d - 1).into());
        Local::Exact(num / Rational::from_integer(num_traits::pow(BigInt::from(d), n)))
    };
    let inside_const = (-&rho).max(Rational::zero()) + Rational::new((-min_v).max(0).into(), (d - 1).into());
    let target = Rational::new(BigInt::one(), BigInt::one() << bits_for_digits(cfg.digits));
    let ln_p = p.bits() as i64 + 1;
    let bound_at = |n: usize| &inside_const / Rational::from_integer(num_traits::pow(BigInt::from(d), n));
    // tiny enough once bound·log p ≤ target, with log p < bits(p)
    let small = |n: usize| bound_at(n) * Rational::from_integer(ln_p.into()) <= target;

    // exact prefix of the orbit first
    for (n, z) in orbit.iter().enumerate() {
        if !z.is_zero() {
            let v = rational_valuation(z, p);
            if Rational::from_integer(v.into()) < rho {
                return Ok(Attempt::Done(escaped(v, n)));
            }
        }
        if small(n) {
            return Ok(Attempt::Done(Local::AtMost(bound_at(n))));
        }
    }
    let field = Field::new(p.clone());
    let start = orbit.len() - 1;
    let coeffs: Vec<_> = esc.coeffs.iter().map(|c| field.from_rational(c, prec)).collect();
    let mut z = field.from_rational(&orbit[start], prec);
    for n in start..=cfg.max_iterations.max(start) {
        let inside = match field.val(&z) {
            Some(v) if Rational::from_integer(v.into()) < rho => return Ok(Attempt::Done(escaped(v, n))),
            Some(_) => true,
            None => Rational::from_integer(field.precision(&z).into()) >= rho,
        };
        if !inside {
            return Ok(Attempt::NeedPrecision);
        }
        if small(n) {
            return Ok(Attempt::Done(Local::AtMost(bound_at(n))));
        }
        z = field.horner(&coeffs, &z);
    }
    Err(HeightsError::MaxIterationsExceeded {
        iterations: cfg.max_iterations,
        bound: format!("{} log {p}", bound_at(cfg.max_iterations)),
    })
}

fn local_height(esc: &Escape, orbit: &[Rational], p: &BigInt, cfg: &HeightConfig) -> Result<Local, HeightsError> {
    let mut prec = 64i64;
    loop {
        match local_attempt(esc, orbit, p, cfg, prec)? {
            Attempt::Done(v) => return Ok(v),
            Attempt::NeedPrecision if (prec as u64) * 2 <= cfg.max_precision_bits => prec *= 2,
            Attempt::NeedPrecision => return Err(HeightsError::PrecisionExhausted { bits: prec as u64 }),
        }
    }
}

fn log_prime_multiple(q: &Rational, p: &BigInt, prec: u64) -> Interval {
    let ln_p = rational_interval(&Rational::from_integer(p.clone()), prec).ln(prec).expect("p ≥ 2");
    ln_p.mul(&rational_interval(q, prec), prec)
}

/// `ĥ_f(a)` with its archimedean and finite parts.
pub fn canonical_height(f: &Poly, a: &Rational, cfg: &HeightConfig) -> Result<HeightBreakdown, HeightsError> {
    let esc = Escape::new(f)?;
    let point = Scalar::from_rational(a.clone());
    let (orbit, cycle) = exact_orbit(f, &point);
    let digits = cfg.digits;
    if let Some(status) = cycle {
        let zero = PrecisionReal::exact_zero(digits);
        return Ok(HeightBreakdown {
            archimedean: zero.clone(),
            archimedean_status: status,
            finite: BTreeMap::new(),
            total: zero,
            proven_preperiodic: true,
        });
    }
    // the finite parts are summed with the archimedean one, so each gets a
    // few extra digits
    let inner = HeightConfig { digits: digits + 2, ..*cfg };
    let green_value = with_precision(&inner, |prec| green_attempt(&esc, &point, &inner, prec))?;
    let prec = bits_for_digits(digits) + 64;

    let mut finite = BTreeMap::new();
    if esc.is_monic_integral() {
        for (p, k) in primes::factor(a.denom()) {
            let q = Rational::from_integer(k.into());
            finite.insert(p.clone(), PrecisionReal::new(log_prime_multiple(&q, &p, prec), digits));
        }
    } else {
        let rational_orbit: Vec<Rational> = orbit.iter().map(|z| z.as_rational().cloned().expect("rational orbit")).collect();
        let mut bad = primes::factor(a.denom());
        bad.extend(primes::factor(esc.lead.numer()));
        for c in &esc.coeffs {
            bad.extend(primes::factor(c.denom()));
        }
        let mut bad: Vec<BigInt> = bad.into_iter().map(|(p, _)| p).collect();
        bad.sort();
        bad.dedup();
        for p in bad {
            let value = match local_height(&esc, &rational_orbit, &p, &inner)? {
                Local::Exact(q) if q.is_zero() => continue,
                Local::Exact(q) => log_prime_multiple(&q, &p, prec),
                Local::AtMost(q) => {
                    let hi = log_prime_multiple(&q, &p, prec).hi().clone();
                    Interval::new(Dyadic::zero(), hi)
                }
            };
            finite.insert(p, PrecisionReal::new(value, digits));
        }
    }
    let mut total = green_value.value.enclosure().clone();
    for v in finite.values() {
        total = total.add(v.enclosure(), prec);
    }
    Ok(HeightBreakdown {
        archimedean: PrecisionReal::new(green_value.value.enclosure().clone(), digits),
        archimedean_status: green_value.status,
        finite,
        total: PrecisionReal::new(total, digits),
        proven_preperiodic: false,
    })
}

/// `log|φ_f(a)|` from the truncated Böttcher series, `window` terms of
/// `ψ_f`. Needs `|a| > R`; the omitted terms are bounded by Cauchy's
/// estimate `|u_k| ≤ 2R^k` for `φ_f(z) = (z/c)(1 + Σ u_k z^{-k})`.
pub fn phi_abs(f: &Poly, a: &Rational, window: usize, digits: u32) -> Result<PrecisionReal, HeightsError> {
    let esc = Escape::new(f)?;
    if a.abs() <= esc.radius {
        return Err(HeightsError::RadiusTooSmall { modulus: a.abs().to_string(), radius: esc.radius.to_string() });
    }
    let psi = match solve_psi(f, window, RootOfUnity::one()) {
        Ok(p) => p,
        Err(ConjugacyError::LeadingRootUnavailable { .. }) => return Err(HeightsError::NonRationalSeries),
        Err(e) => return Err(e.into()),
    };
    let phi = psi.tail().reversion()?;
    let c = psi.tail().leading().and_then(Scalar::as_rational).cloned().ok_or(HeightsError::NonRationalSeries)?;
    let coeffs: Vec<Rational> =
        phi.coeffs().iter().map(|x| x.as_rational().cloned()).collect::<Option<_>>().ok_or(HeightsError::NonRationalSeries)?;
    // u_k = c·φ_{1-k}; coeffs[k] is the coefficient of t^{1-k}
    let inv_a = a.recip();
    let mut u_sum = Rational::zero();
    let mut power = Rational::one();
    for coeff in coeffs.iter().skip(1) {
        power *= &inv_a;
        u_sum += &c * coeff * &power;
    }
    let known = coeffs.len() - 1;
    let ratio = &esc.radius / a.abs();
    let tail = Rational::from_integer(2.into()) * num_traits::pow(ratio.clone(), known + 1) / (Rational::one() - ratio);
    let prec = bits_for_digits(digits) + 64;
    let one_plus_u = rational_interval(&(Rational::one() + u_sum), prec);
    let tail_hi = Dyadic::from_rational(&tail, 64, true);
    let factor = one_plus_u.widen(&tail_hi, prec).abs();
    let ln_factor = factor.ln(prec).ok_or_else(|| HeightsError::RadiusTooSmall {
        modulus: a.abs().to_string(),
        radius: esc.radius.to_string(),
    })?;
    let ln_ratio = rational_interval(&(a / &c).abs(), prec).ln(prec).expect("nonzero");
    Ok(PrecisionReal::new(ln_ratio.add(&ln_factor, prec), digits))
}

/// `ĥ_f(a) / ĥ_g(a)`.
pub fn height_ratio(f: &Poly, g: &Poly, a: &Rational, cfg: &HeightConfig) -> Result<PrecisionReal, HeightsError> {
    let inner = HeightConfig { digits: cfg.digits + 10, ..*cfg };
    let hf = canonical_height(f, a, &inner)?;
    let hg = canonical_height(g, a, &inner)?;
    let prec = bits_for_digits(inner.digits) + 64;
    let q = hf
        .total
        .enclosure()
        .div(hg.total.enclosure(), prec)
        .ok_or_else(|| HeightsError::DenominatorNotSeparated { enclosure: hg.total.enclosure().to_string() })?;
    Ok(PrecisionReal::new(q, cfg.digits))
}
