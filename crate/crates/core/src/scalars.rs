//! Exact coefficient arithmetic.
//!
//! Every coefficient in this crate is an element of some cyclotomic field
//! `Q(ζ_n)`, stored in the power basis `1, ζ_n, …, ζ_n^{φ(n)-1}` and kept
//! reduced modulo the cyclotomic polynomial `Φ_n`. Binary operations first
//! embed both operands into `Q(ζ_lcm)`; the result keeps that conductor and
//! is never minimized.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// Exact rational number (reduced, positive denominator).
pub type Rational = BigRational;

/// Default upper bound on conductors.
pub const DEFAULT_CONDUCTOR_CAP: usize = 120;

static CONDUCTOR_CAP: AtomicUsize = AtomicUsize::new(DEFAULT_CONDUCTOR_CAP);

/// Current conductor cap.
pub fn conductor_cap() -> usize {
    CONDUCTOR_CAP.load(Ordering::Relaxed)
}

/// Replace the conductor cap. Values already constructed are unaffected.
pub fn set_conductor_cap(cap: usize) {
    CONDUCTOR_CAP.store(cap.max(1), Ordering::Relaxed);
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScalarError {
    #[error("DivisionByZero: attempted to invert zero")]
    DivisionByZero,
    #[error("ConductorCapExceeded: conductor {needed} exceeds the cap {cap}")]
    ConductorCapExceeded { needed: usize, cap: usize },
}

fn check_cap(n: usize) -> Result<(), ScalarError> {
    let cap = conductor_cap();
    if n > cap {
        Err(ScalarError::ConductorCapExceeded { needed: n, cap })
    } else {
        Ok(())
    }
}

pub fn euler_phi(n: usize) -> usize {
    let mut m = n;
    let mut phi = n;
    let mut p = 2;
    while p * p <= m {
        if m % p == 0 {
            while m % p == 0 {
                m /= p;
            }
            phi -= phi / p;
        }
        p += 1;
    }
    if m > 1 {
        phi -= phi / m;
    }
    phi
}

type IntPoly = Arc<Vec<BigInt>>;

fn phi_cache() -> &'static RwLock<HashMap<usize, IntPoly>> {
    static CACHE: OnceLock<RwLock<HashMap<usize, IntPoly>>> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

/// The n-th cyclotomic polynomial, ascending coefficients (monic).
///
/// Computed once per conductor by dividing `x^n - 1` by `Φ_e` for every
/// proper divisor `e` of `n`. Concurrent first use may compute the same
/// polynomial twice; both writers store identical values.
pub fn cyclotomic_polynomial(n: usize) -> IntPoly {
    assert!(n >= 1, "cyclotomic polynomial of order 0");
    if let Some(p) = phi_cache().read().unwrap().get(&n) {
        return p.clone();
    }
    let mut num = vec![BigInt::zero(); n + 1];
    num[0] = -BigInt::one();
    num[n] = BigInt::one();
    for e in 1..n {
        if n % e == 0 {
            let divisor = cyclotomic_polynomial(e);
            num = exact_monic_div(&num, &divisor);
        }
    }
    let p = Arc::new(num);
    phi_cache().write().unwrap().entry(n).or_insert_with(|| p.clone());
    p
}

fn exact_monic_div(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let qlen = rem.len() - dd;
    let mut quot = vec![BigInt::zero(); qlen];
    for i in (0..qlen).rev() {
        let c = rem[i + dd].clone();
        if c.is_zero() {
            continue;
        }
        for (j, dj) in den.iter().enumerate() {
            rem[i + j] -= &c * dj;
        }
        quot[i] = c;
    }
    debug_assert!(rem.iter().all(Zero::is_zero));
    quot
}

/// Reduce a rational polynomial (ascending) modulo `Φ_n`.
fn reduce_mod_phi(mut p: Vec<Rational>, n: usize) -> Vec<Rational> {
    let phi = cyclotomic_polynomial(n);
    let deg = phi.len() - 1;
    for i in (deg..p.len()).rev() {
        if p[i].is_zero() {
            continue;
        }
        let c = std::mem::replace(&mut p[i], Rational::zero());
        for (j, pj) in phi.iter().enumerate().take(deg) {
            if !pj.is_zero() {
                p[i - deg + j] -= &c * Rational::from_integer(pj.clone());
            }
        }
    }
    p.resize(deg, Rational::zero());
    p
}

/// Exact element of `Q(ζ_n)`.
#[derive(Clone, Debug)]
pub struct CyclotomicScalar {
    conductor: usize,
    coords: Vec<Rational>,
}

impl CyclotomicScalar {
    pub fn from_rational(q: Rational) -> Self {
        CyclotomicScalar { conductor: 1, coords: vec![q] }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(Rational::from_integer(n.into()))
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        Self::from_rational(Rational::new(num.into(), den.into()))
    }

    pub fn zero() -> Self {
        Self::from_int(0)
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    /// Build from power-basis coordinates in `Q(ζ_n)`. Coordinates of any
    /// length are accepted and reduced modulo `Φ_n`.
    pub fn from_coords(conductor: usize, coords: Vec<Rational>) -> Result<Self, ScalarError> {
        assert!(conductor >= 1);
        check_cap(conductor)?;
        let coords = reduce_mod_phi(coords, conductor);
        Ok(CyclotomicScalar { conductor, coords })
    }

    /// `ζ_n^k` for any integer `k`.
    pub fn zeta_pow(n: usize, k: i64) -> Result<Self, ScalarError> {
        assert!(n >= 1);
        check_cap(n)?;
        let e = k.rem_euclid(n as i64) as usize;
        let mut v = vec![Rational::zero(); e + 1];
        v[e] = Rational::one();
        Ok(CyclotomicScalar {
            conductor: n,
            coords: reduce_mod_phi(v, n),
        })
    }

    pub fn conductor(&self) -> usize {
        self.conductor
    }

    pub fn coords(&self) -> &[Rational] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.coords[0].is_one() && self.coords[1..].iter().all(Zero::is_zero)
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        if self.coords[1..].iter().all(Zero::is_zero) {
            Some(&self.coords[0])
        } else {
            None
        }
    }

    pub fn is_rational(&self) -> bool {
        self.as_rational().is_some()
    }

    /// Re-express in `Q(ζ_m)`; requires `conductor | m`.
    pub fn embed(&self, m: usize) -> Result<Self, ScalarError> {
        check_cap(m)?;
        Ok(self.embed_unchecked(m))
    }

    fn embed_unchecked(&self, m: usize) -> Self {
        assert!(
            m % self.conductor == 0,
            "cannot embed Q(zeta_{}) into Q(zeta_{m})",
            self.conductor
        );
        if m == self.conductor {
            return self.clone();
        }
        let step = m / self.conductor;
        let mut v = vec![Rational::zero(); (self.coords.len().max(1) - 1) * step + 1];
        for (j, c) in self.coords.iter().enumerate() {
            v[j * step] = c.clone();
        }
        CyclotomicScalar {
            conductor: m,
            coords: reduce_mod_phi(v, m),
        }
    }

    fn common(&self, other: &Self) -> Result<(Self, Self), ScalarError> {
        if self.conductor == other.conductor {
            return Ok((self.clone(), other.clone()));
        }
        let m = self.conductor.lcm(&other.conductor);
        Ok((self.embed(m)?, other.embed(m)?))
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, ScalarError> {
        if self.conductor == other.conductor {
            let coords = self.coords.iter().zip(&other.coords).map(|(a, b)| a + b).collect();
            return Ok(CyclotomicScalar { conductor: self.conductor, coords });
        }
        let (a, b) = self.common(other)?;
        a.checked_add(&b)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, ScalarError> {
        self.checked_add(&-other)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, ScalarError> {
        if self.conductor == 1 && other.conductor == 1 {
            return Ok(Self::from_rational(&self.coords[0] * &other.coords[0]));
        }
        if let Some(q) = self.as_rational() {
            return Ok(other.scale(q));
        }
        if let Some(q) = other.as_rational() {
            return Ok(self.scale(q));
        }
        if self.conductor != other.conductor {
            let (a, b) = self.common(other)?;
            return a.checked_mul(&b);
        }
        let n = self.coords.len();
        let mut prod = vec![Rational::zero(); 2 * n - 1];
        for (i, a) in self.coords.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coords.iter().enumerate() {
                if !b.is_zero() {
                    prod[i + j] += a * b;
                }
            }
        }
        Ok(CyclotomicScalar {
            conductor: self.conductor,
            coords: reduce_mod_phi(prod, self.conductor),
        })
    }

    pub fn scale(&self, q: &Rational) -> Self {
        CyclotomicScalar {
            conductor: self.conductor,
            coords: self.coords.iter().map(|c| c * q).collect(),
        }
    }

    pub fn inv(&self) -> Result<Self, ScalarError> {
        if self.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        if let Some(q) = self.as_rational() {
            return Ok(CyclotomicScalar {
                conductor: self.conductor,
                coords: {
                    let mut v = vec![Rational::zero(); self.coords.len()];
                    v[0] = q.recip();
                    v
                },
            });
        }
        // Extended Euclid in Q[x]: find s with s·a ≡ 1 (mod Φ_n).
        let modulus: Vec<Rational> = cyclotomic_polynomial(self.conductor)
            .iter()
            .map(|c| Rational::from_integer(c.clone()))
            .collect();
        let s = qpoly::inverse_mod(&self.coords, &modulus);
        Ok(CyclotomicScalar {
            conductor: self.conductor,
            coords: reduce_mod_phi(s, self.conductor),
        })
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self, ScalarError> {
        self.checked_mul(&other.inv()?)
    }

    /// Integer power; negative exponents invert.
    pub fn pow(&self, e: i64) -> Result<Self, ScalarError> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut e = e.unsigned_abs();
        let mut acc = Self::one();
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.checked_mul(&sq)?;
            }
            e >>= 1;
            if e > 0 {
                sq = sq.checked_mul(&sq)?;
            }
        }
        Ok(acc)
    }

    /// Recognise `self` as a root of unity.
    ///
    /// Roots of unity in `Q(ζ_n)` are exactly `±ζ_n^j`, so it suffices to
    /// compare against those `2n` candidates.
    pub fn is_root_of_unity(&self) -> Option<RootOfUnity> {
        if self.is_zero() {
            return None;
        }
        let n = self.conductor;
        let mut power = {
            let mut v = vec![Rational::zero(); self.coords.len()];
            v[0] = Rational::one();
            v
        };
        for j in 0..n {
            if power == self.coords {
                return Some(RootOfUnity::from_fraction(j as i64, n as u64));
            }
            if power.iter().zip(&self.coords).all(|(a, b)| *a == -b) {
                return Some(RootOfUnity::from_fraction(2 * j as i64 + n as i64, 2 * n as u64));
            }
            let mut shifted = Vec::with_capacity(power.len() + 1);
            shifted.push(Rational::zero());
            shifted.extend(power);
            power = reduce_mod_phi(shifted, n);
        }
        None
    }

    /// Some `y` in the directed union of cyclotomic fields with `y^k = self`,
    /// when `self` is a rational multiple of a root of unity whose rational
    /// part has an exact rational `k`-th root. Returns `None` otherwise; this
    /// does not decide whether a root exists in general.
    pub fn nth_root(&self, k: u32) -> Option<Self> {
        assert!(k >= 1);
        if self.is_zero() || k == 1 {
            return Some(self.clone());
        }
        let (q, unit) = self.split_rational_times_unit()?;
        let mag = rational_nth_root(&q.abs(), k)?;
        let unit = if q.is_negative() {
            unit.mul(&RootOfUnity::from_fraction(1, 2))
        } else {
            unit
        };
        let root_unit = RootOfUnity::from_fraction(unit.exponent as i64, unit.order * k as u64);
        let z = root_unit.to_scalar().ok()?;
        Some(z.scale(&mag))
    }

    /// Write `self = q·ρ` with `q` rational and `ρ` a root of unity.
    fn split_rational_times_unit(&self) -> Option<(Rational, RootOfUnity)> {
        if let Some(q) = self.as_rational() {
            return Some((q.clone(), RootOfUnity::one()));
        }
        let n = self.conductor;
        for j in 1..n {
            let z = CyclotomicScalar::zeta_pow(n, j as i64).ok()?;
            let idx = z.coords.iter().position(|c| !c.is_zero())?;
            if self.coords[idx].is_zero() {
                continue;
            }
            let q = &self.coords[idx] / &z.coords[idx];
            if z.scale(&q).coords == self.coords {
                return Some((q, RootOfUnity::from_fraction(j as i64, n as u64)));
            }
        }
        None
    }
}

fn rational_nth_root(q: &Rational, k: u32) -> Option<Rational> {
    let n = q.numer().nth_root(k);
    let d = q.denom().nth_root(k);
    if num_traits::pow(n.clone(), k as usize) == *q.numer()
        && num_traits::pow(d.clone(), k as usize) == *q.denom()
    {
        Some(Rational::new(n, d))
    } else {
        None
    }
}

impl PartialEq for CyclotomicScalar {
    fn eq(&self, other: &Self) -> bool {
        if self.conductor == other.conductor {
            return self.coords == other.coords;
        }
        let m = self.conductor.lcm(&other.conductor);
        self.embed_unchecked(m).coords == other.embed_unchecked(m).coords
    }
}

impl Eq for CyclotomicScalar {}

impl From<Rational> for CyclotomicScalar {
    fn from(q: Rational) -> Self {
        Self::from_rational(q)
    }
}

impl From<i64> for CyclotomicScalar {
    fn from(n: i64) -> Self {
        Self::from_int(n)
    }
}

impl Neg for &CyclotomicScalar {
    type Output = CyclotomicScalar;
    fn neg(self) -> CyclotomicScalar {
        CyclotomicScalar {
            conductor: self.conductor,
            coords: self.coords.iter().map(|c| -c).collect(),
        }
    }
}

impl Neg for CyclotomicScalar {
    type Output = CyclotomicScalar;
    fn neg(self) -> CyclotomicScalar {
        -&self
    }
}

// Operator forms panic where the checked forms return an error: on division
// by zero and when the combined conductor exceeds the cap.
macro_rules! binop {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl $tr<&CyclotomicScalar> for &CyclotomicScalar {
            type Output = CyclotomicScalar;
            fn $method(self, rhs: &CyclotomicScalar) -> CyclotomicScalar {
                self.$checked(rhs).unwrap_or_else(|e| panic!("{e}"))
            }
        }
        impl $tr<CyclotomicScalar> for CyclotomicScalar {
            type Output = CyclotomicScalar;
            fn $method(self, rhs: CyclotomicScalar) -> CyclotomicScalar {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&CyclotomicScalar> for CyclotomicScalar {
            type Output = CyclotomicScalar;
            fn $method(self, rhs: &CyclotomicScalar) -> CyclotomicScalar {
                (&self).$method(rhs)
            }
        }
        impl $tr<CyclotomicScalar> for &CyclotomicScalar {
            type Output = CyclotomicScalar;
            fn $method(self, rhs: CyclotomicScalar) -> CyclotomicScalar {
                self.$method(&rhs)
            }
        }
    };
}

binop!(Add, add, checked_add);
binop!(Sub, sub, checked_sub);
binop!(Mul, mul, checked_mul);
binop!(Div, div, checked_div);

/// `ζ_n` as a scalar of conductor `n`.
pub fn primitive_root(n: usize) -> Result<CyclotomicScalar, ScalarError> {
    CyclotomicScalar::zeta_pow(n, 1)
}

pub fn scalar_is_root_of_unity(a: &CyclotomicScalar) -> Option<RootOfUnity> {
    a.is_root_of_unity()
}

/// Root of unity `exp(2πi·exponent/order)` in canonical form: `order` is the
/// exact multiplicative order and `gcd(exponent, order) = 1`, except for the
/// identity `(1, 0)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct RootOfUnity {
    order: u64,
    exponent: u64,
}

impl RootOfUnity {
    pub fn one() -> Self {
        RootOfUnity { order: 1, exponent: 0 }
    }

    /// The root `exp(2πi·num/den)`.
    pub fn from_fraction(num: i64, den: u64) -> Self {
        assert!(den >= 1);
        let k = num.rem_euclid(den as i64) as u64;
        let g = k.gcd(&den);
        let (order, exponent) = (den / g, k / g);
        if exponent == 0 {
            Self::one()
        } else {
            RootOfUnity { order, exponent }
        }
    }

    /// `ζ_n^k`, canonicalised.
    pub fn new(order: u64, exponent: i64) -> Self {
        Self::from_fraction(exponent, order)
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn exponent(&self) -> u64 {
        self.exponent
    }

    pub fn mul(&self, other: &Self) -> Self {
        let den = self.order.lcm(&other.order);
        let num = self.exponent * (den / self.order) + other.exponent * (den / other.order);
        Self::from_fraction(num as i64, den)
    }

    pub fn pow(&self, k: i64) -> Self {
        let e = (self.exponent as i128 * k as i128).rem_euclid(self.order as i128);
        Self::from_fraction(e as i64, self.order)
    }

    pub fn inverse(&self) -> Self {
        self.pow(-1)
    }

    pub fn to_scalar(&self) -> Result<CyclotomicScalar, ScalarError> {
        CyclotomicScalar::zeta_pow(self.order as usize, self.exponent as i64)
    }

    /// All `n`-th roots of unity, `ζ_n^0, …, ζ_n^{n-1}`.
    pub fn all_of_order_dividing(n: u64) -> Vec<RootOfUnity> {
        (0..n).map(|k| Self::from_fraction(k as i64, n)).collect()
    }
}

impl fmt::Display for RootOfUnity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "zeta({})^{}", self.order, self.exponent)
    }
}

pub(crate) fn fmt_rational(q: &Rational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

impl fmt::Display for CyclotomicScalar {
    /// Rationals print as `p` or `p/q`; other values as a signed sum of
    /// `c*zeta(n)^j` in the power basis of their conductor.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(q) = self.as_rational() {
            return f.write_str(&fmt_rational(q));
        }
        let mut out = String::new();
        for (j, c) in self.coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let a = c.abs();
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let z = match j {
                0 => String::new(),
                1 => format!("zeta({})", self.conductor),
                _ => format!("zeta({})^{}", self.conductor, j),
            };
            if z.is_empty() {
                out.push_str(&fmt_rational(&a));
            } else if a.is_one() {
                out.push_str(&z);
            } else {
                out.push_str(&fmt_rational(&a));
                out.push('*');
                out.push_str(&z);
            }
        }
        f.write_str(&out)
    }
}

impl CyclotomicScalar {
    /// True when printing needs parentheses to be used as a factor.
    pub(crate) fn is_compound(&self) -> bool {
        !self.is_rational() && self.coords.iter().filter(|c| !c.is_zero()).count() > 1
    }

}

/// Dense rational polynomial helpers for field inversion.
mod qpoly {
    use super::Rational;
    use num_traits::{One, Zero};

    fn trim(p: &mut Vec<Rational>) {
        while p.last().is_some_and(Zero::is_zero) {
            p.pop();
        }
    }

    fn divrem(a: &[Rational], b: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
        let mut r = a.to_vec();
        trim(&mut r);
        let db = b.len() - 1;
        if r.len() < b.len() {
            return (vec![], r);
        }
        let lead = &b[db];
        let mut q = vec![Rational::zero(); r.len() - db];
        for i in (0..q.len()).rev() {
            let c = &r[i + db] / lead;
            if c.is_zero() {
                continue;
            }
            for (j, bj) in b.iter().enumerate() {
                r[i + j] -= &c * bj;
            }
            q[i] = c;
        }
        trim(&mut r);
        (q, r)
    }

    fn mul(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
        if a.is_empty() || b.is_empty() {
            return vec![];
        }
        let mut out = vec![Rational::zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                out[i + j] += x * y;
            }
        }
        out
    }

    fn sub(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
        let n = a.len().max(b.len());
        let mut out = vec![Rational::zero(); n];
        for (i, x) in a.iter().enumerate() {
            out[i] += x;
        }
        for (i, y) in b.iter().enumerate() {
            out[i] -= y;
        }
        trim(&mut out);
        out
    }

    /// `s` with `s·a ≡ 1 (mod m)`, assuming `gcd(a, m) = 1`.
    pub(super) fn inverse_mod(a: &[Rational], m: &[Rational]) -> Vec<Rational> {
        let (mut r0, mut r1) = (m.to_vec(), a.to_vec());
        trim(&mut r1);
        let (mut s0, mut s1): (Vec<Rational>, Vec<Rational>) = (vec![], vec![Rational::one()]);
        while !r1.is_empty() {
            let (q, r) = divrem(&r0, &r1);
            let s = sub(&s0, &mul(&q, &s1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s);
        }
        // r0 is a nonzero constant gcd.
        let c = r0[0].recip();
        s0.into_iter().map(|x| x * &c).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::ToPrimitive;

    fn q(n: i64, d: i64) -> CyclotomicScalar {
        CyclotomicScalar::from_ratio(n, d)
    }

    #[test]
    fn cyclotomic_polynomials() {
        let as_i64 = |n| -> Vec<i64> {
            cyclotomic_polynomial(n).iter().map(|c| c.to_i64().unwrap()).collect()
        };
        assert_eq!(as_i64(1), vec![-1, 1]);
        assert_eq!(as_i64(2), vec![1, 1]);
        assert_eq!(as_i64(4), vec![1, 0, 1]);
        assert_eq!(as_i64(6), vec![1, -1, 1]);
        assert_eq!(as_i64(12), vec![1, 0, -1, 0, 1]);
        for n in 1..=60 {
            assert_eq!(cyclotomic_polynomial(n).len() - 1, euler_phi(n));
        }
    }

    #[test]
    fn i_squared_is_minus_one() {
        let i = primitive_root(4).unwrap();
        assert_eq!(&i * &i, q(-1, 1));
    }

    #[test]
    fn inverse_of_zeta3() {
        let z = primitive_root(3).unwrap();
        assert_eq!(z.inv().unwrap(), z.pow(2).unwrap());
    }

    #[test]
    fn half_plus_zeta6_doubled() {
        let z6 = primitive_root(6).unwrap();
        let v = (q(1, 2) + &z6) * q(2, 1);
        // Q(zeta_6) power basis {1, x}: 2·(1/2 + x) = 1 + 2x.
        assert_eq!(v.conductor(), 6);
        assert_eq!(v.coords(), &[Rational::from_integer(1.into()), Rational::from_integer(2.into())]);
        assert_eq!(v.to_string(), "1 + 2*zeta(6)");
    }

    #[test]
    fn primitive_roots_have_exact_order() {
        assert_eq!(primitive_root(1).unwrap(), q(1, 1));
        assert_eq!(primitive_root(2).unwrap(), q(-1, 1));
        let z5 = primitive_root(5).unwrap();
        assert!(z5.pow(5).unwrap().is_one());
        for k in 1..5 {
            assert!(!z5.pow(k).unwrap().is_one());
        }
        for n in 1..=30u64 {
            let z = primitive_root(n as usize).unwrap();
            assert!(z.pow(n as i64).unwrap().is_one());
            assert_eq!(z.is_root_of_unity().unwrap().order(), n);
        }
    }

    #[test]
    fn root_of_unity_recognition() {
        assert_eq!(q(-1, 1).is_root_of_unity(), Some(RootOfUnity::new(2, 1)));
        assert_eq!(q(1, 2).is_root_of_unity(), None);
        let z6sq = primitive_root(6).unwrap().pow(2).unwrap();
        assert_eq!(z6sq.is_root_of_unity(), Some(RootOfUnity::new(3, 1)));
        // -zeta_3 has order 6 and lives in conductor 3.
        let m = -primitive_root(3).unwrap();
        let r = m.is_root_of_unity().unwrap();
        assert_eq!(r.order(), 6);
        assert_eq!(r.to_scalar().unwrap(), m);
        assert_eq!(q(0, 1).is_root_of_unity(), None);
        let not_unit = primitive_root(5).unwrap() + q(1, 1);
        assert_eq!(not_unit.is_root_of_unity(), None);
    }

    #[test]
    fn division_by_zero() {
        assert_eq!(q(0, 1).inv(), Err(ScalarError::DivisionByZero));
        let z = CyclotomicScalar::from_coords(5, vec![]).unwrap();
        assert_eq!(q(1, 1).checked_div(&z), Err(ScalarError::DivisionByZero));
    }

    #[test]
    fn conductor_cap_is_enforced() {
        let err = CyclotomicScalar::zeta_pow(10_000, 1).unwrap_err();
        assert!(matches!(err, ScalarError::ConductorCapExceeded { .. }));
        let a = primitive_root(120).unwrap();
        let b = primitive_root(7).unwrap();
        assert!(matches!(a.checked_mul(&b), Err(ScalarError::ConductorCapExceeded { .. })));
    }

    #[test]
    fn embedding_round_trip() {
        for n in 1..=24usize {
            for m in (n..=24).filter(|m| m % n == 0) {
                for k in 0..n as i64 {
                    let a = CyclotomicScalar::zeta_pow(n, k).unwrap() + q(1, 3);
                    let e = a.embed(m).unwrap();
                    assert_eq!(e.conductor(), m);
                    assert_eq!(e, a);
                    if let Some(r) = CyclotomicScalar::zeta_pow(n, k).unwrap().embed(m).unwrap().is_root_of_unity() {
                        assert_eq!(r, RootOfUnity::new(n as u64, k));
                    } else {
                        panic!("lost root of unity");
                    }
                }
            }
        }
    }

    #[test]
    fn nth_roots() {
        // i^2 = -1
        let r = q(-1, 1).nth_root(2).unwrap();
        assert_eq!(r.pow(2).unwrap(), q(-1, 1));
        let r = q(1, 4).nth_root(2).unwrap();
        assert_eq!(r, q(1, 2));
        assert!(q(2, 1).nth_root(2).is_none());
        let z3 = primitive_root(3).unwrap();
        let r = z3.scale(&Rational::new(8.into(), 1.into())).nth_root(3).unwrap();
        assert_eq!(r.pow(3).unwrap(), z3.scale(&Rational::new(8.into(), 1.into())));
    }

    #[test]
    fn root_of_unity_algebra() {
        let a = RootOfUnity::new(6, 1);
        assert_eq!(a.pow(6), RootOfUnity::one());
        assert_eq!(a.mul(&a), RootOfUnity::new(3, 1));
        assert_eq!(a.inverse(), RootOfUnity::new(6, 5));
        assert_eq!(RootOfUnity::new(4, 6), RootOfUnity::new(2, 1));
    }

    #[test]
    fn display() {
        assert_eq!(q(-3, 8).to_string(), "-3/8");
        assert_eq!(primitive_root(4).unwrap().to_string(), "zeta(4)");
        assert_eq!((-primitive_root(3).unwrap()).to_string(), "-zeta(3)");
        // zeta_3^2 = -1 - zeta_3
        assert_eq!(primitive_root(3).unwrap().pow(2).unwrap().to_string(), "-1 - zeta(3)");
    }
}
