//! Rigorous arbitrary-precision real and complex intervals.
//!
//! Endpoints are dyadic numbers `m·2^e` with big-integer mantissas. Every
//! operation takes a working precision in bits and rounds the lower
//! endpoint down and the upper endpoint up, so the exact result always lies
//! in the returned interval. Elementary functions add an explicit bound on
//! their series truncation.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::scalars::{CyclotomicScalar as Scalar, Rational};

/// `mant · 2^exp`. Equality and order are by value.
#[derive(Clone, Debug)]
pub struct Dyadic {
    mant: BigInt,
    exp: i64,
}

fn pow2(k: u64) -> BigInt {
    BigInt::one() << k
}

impl Dyadic {
    pub fn zero() -> Self {
        Dyadic { mant: BigInt::zero(), exp: 0 }
    }

    pub fn new(mant: BigInt, exp: i64) -> Self {
        Dyadic { mant, exp }
    }

    pub fn from_int(n: i64) -> Self {
        Dyadic { mant: n.into(), exp: 0 }
    }

    /// `2^k`.
    pub fn two_pow(k: i64) -> Self {
        Dyadic { mant: BigInt::one(), exp: k }
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn signum(&self) -> i32 {
        match self.mant.sign() {
            Sign::Minus => -1,
            Sign::NoSign => 0,
            Sign::Plus => 1,
        }
    }

    /// `e` with `2^{e-1} ≤ |x| < 2^e`; meaningless for zero.
    fn top(&self) -> i64 {
        self.exp + self.mant.bits() as i64
    }

    pub fn neg(&self) -> Self {
        Dyadic { mant: -&self.mant, exp: self.exp }
    }

    pub fn abs(&self) -> Self {
        Dyadic { mant: self.mant.abs(), exp: self.exp }
    }

    pub fn mul_exact(&self, other: &Self) -> Self {
        Dyadic { mant: &self.mant * &other.mant, exp: self.exp + other.exp }
    }

    pub fn scale2(&self, k: i64) -> Self {
        Dyadic { mant: self.mant.clone(), exp: self.exp + k }
    }

    fn add_exact(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let e = self.exp.min(other.exp);
        let a = &self.mant << (self.exp - e) as u64;
        let b = &other.mant << (other.exp - e) as u64;
        Dyadic { mant: a + b, exp: e }
    }

    /// Round to at most `prec` significant bits, towards `+∞` if `up`.
    pub fn round(&self, prec: u64, up: bool) -> Self {
        let bits = self.mant.bits();
        if bits <= prec {
            return self.clone();
        }
        let shift = bits - prec;
        let d = pow2(shift);
        let mant = if up { self.mant.div_ceil(&d) } else { self.mant.div_floor(&d) };
        Dyadic { mant, exp: self.exp + shift as i64 }
    }

    /// `self + other` rounded to `prec` bits in the given direction. An
    /// operand far below the other's last bit is replaced by a one-sided
    /// stand-in, so huge exponent gaps cost nothing.
    pub fn add_round(&self, other: &Self, prec: u64, up: bool) -> Self {
        let (big, small) = if self.is_zero() || (!other.is_zero() && other.top() > self.top()) {
            (other, self)
        } else {
            (self, other)
        };
        if !small.is_zero() && !big.is_zero() && small.top() < big.top() - prec as i64 - 4 {
            let tiny = Dyadic::two_pow(big.top() - prec as i64 - 4);
            let stand_in = match (small.signum() > 0, up) {
                (true, true) => tiny,
                (false, false) => tiny.neg(),
                _ => Dyadic::zero(),
            };
            return big.add_exact(&stand_in).round(prec, up);
        }
        big.add_exact(small).round(prec, up)
    }

    pub fn mul_round(&self, other: &Self, prec: u64, up: bool) -> Self {
        self.mul_exact(other).round(prec, up)
    }

    /// `self / other` rounded to `prec` bits; `other ≠ 0`.
    pub fn div_round(&self, other: &Self, prec: u64, up: bool) -> Self {
        assert!(!other.is_zero(), "division by zero");
        if self.is_zero() {
            return Dyadic::zero();
        }
        let shift = (prec + other.mant.bits() + 2).saturating_sub(self.mant.bits());
        let num = &self.mant << shift;
        let mant = if up { num.div_ceil(&other.mant) } else { num.div_floor(&other.mant) };
        Dyadic { mant, exp: self.exp - other.exp - shift as i64 }.round(prec, up)
    }

    /// Nearest-below (or above) dyadic of `q` with `prec` bits.
    pub fn from_rational(q: &Rational, prec: u64, up: bool) -> Self {
        if q.is_zero() {
            return Dyadic::zero();
        }
        let (n, d) = (q.numer(), q.denom());
        let shift = prec as i64 + 2 + d.bits() as i64 - n.bits() as i64;
        let (num, den) = if shift >= 0 {
            (n << shift as u64, d.clone())
        } else {
            (n.clone(), d << (-shift) as u64)
        };
        let mant = if up { num.div_ceil(&den) } else { num.div_floor(&den) };
        Dyadic { mant, exp: -shift }.round(prec, up)
    }

    pub fn to_rational(&self) -> Rational {
        if self.exp >= 0 {
            Rational::from_integer(&self.mant << self.exp as u64)
        } else {
            Rational::new(self.mant.clone(), pow2((-self.exp) as u64))
        }
    }

    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let r = self.round(60, false);
        let m: f64 = r.mant.to_string().parse().unwrap_or(f64::NAN);
        m * 2f64.powi(r.exp.clamp(-2000, 2000) as i32)
    }

    /// `⌊self · 10^digits⌉` (half away from zero).
    fn scaled_decimal(&self, digits: u32) -> BigInt {
        let scaled = &self.mant * BigInt::from(10).pow(digits);
        if self.exp >= 0 {
            return scaled << self.exp as u64;
        }
        let d = pow2((-self.exp) as u64);
        let (q, r) = scaled.abs().div_rem(&d);
        let q = if r * 2 >= d { q + 1 } else { q };
        if scaled.is_negative() {
            -q
        } else {
            q
        }
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let (sa, sb) = (self.signum(), other.signum());
        if sa != sb || sa == 0 {
            return sa.cmp(&sb);
        }
        // same nonzero sign: compare magnitudes by leading bit first
        let (ta, tb) = (self.top(), other.top());
        let mag = if ta != tb {
            ta.cmp(&tb)
        } else {
            let e = self.exp.min(other.exp);
            let a = self.mant.abs() << (self.exp - e) as u64;
            let b = other.mant.abs() << (other.exp - e) as u64;
            a.cmp(&b)
        };
        if sa > 0 {
            mag
        } else {
            mag.reverse()
        }
    }
}

impl PartialEq for Dyadic {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Dyadic {}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Closed interval `[lo, hi]` with dyadic endpoints.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interval {
    lo: Dyadic,
    hi: Dyadic,
}

impl Interval {
    pub fn new(lo: Dyadic, hi: Dyadic) -> Self {
        debug_assert!(lo <= hi, "inverted interval");
        Interval { lo, hi }
    }

    pub fn point(x: Dyadic) -> Self {
        Interval { lo: x.clone(), hi: x }
    }

    pub fn zero() -> Self {
        Self::point(Dyadic::zero())
    }

    pub fn from_int(n: i64) -> Self {
        Self::point(Dyadic::from_int(n))
    }

    pub fn from_rational(q: &Rational, prec: u64) -> Self {
        Interval {
            lo: Dyadic::from_rational(q, prec, false),
            hi: Dyadic::from_rational(q, prec, true),
        }
    }

    pub fn lo(&self) -> &Dyadic {
        &self.lo
    }

    pub fn hi(&self) -> &Dyadic {
        &self.hi
    }

    /// Midpoint (exact).
    pub fn mid(&self) -> Dyadic {
        self.lo.add_exact(&self.hi).scale2(-1)
    }

    /// Upper bound for half the width.
    pub fn radius(&self) -> Dyadic {
        self.hi.add_exact(&self.lo.neg()).scale2(-1).round(64, true)
    }

    pub fn width(&self) -> Dyadic {
        self.hi.add_round(&self.lo.neg(), 64, true)
    }

    pub fn contains_zero(&self) -> bool {
        self.lo.signum() <= 0 && self.hi.signum() >= 0
    }

    pub fn contains(&self, x: &Dyadic) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn contains_rational(&self, q: &Rational) -> bool {
        &self.lo.to_rational() <= q && q <= &self.hi.to_rational()
    }

    pub fn is_positive(&self) -> bool {
        self.lo.signum() > 0
    }

    pub fn neg(&self) -> Self {
        Interval { lo: self.hi.neg(), hi: self.lo.neg() }
    }

    pub fn add(&self, other: &Self, prec: u64) -> Self {
        Interval {
            lo: self.lo.add_round(&other.lo, prec, false),
            hi: self.hi.add_round(&other.hi, prec, true),
        }
    }

    pub fn sub(&self, other: &Self, prec: u64) -> Self {
        self.add(&other.neg(), prec)
    }

    pub fn mul(&self, other: &Self, prec: u64) -> Self {
        let products = [
            self.lo.mul_exact(&other.lo),
            self.lo.mul_exact(&other.hi),
            self.hi.mul_exact(&other.lo),
            self.hi.mul_exact(&other.hi),
        ];
        let lo = products.iter().min().unwrap().round(prec, false);
        let hi = products.iter().max().unwrap().round(prec, true);
        Interval { lo, hi }
    }

    pub fn sqr(&self, prec: u64) -> Self {
        let a = self.lo.mul_exact(&self.lo);
        let b = self.hi.mul_exact(&self.hi);
        let hi = a.clone().max(b.clone()).round(prec, true);
        let lo = if self.contains_zero() { Dyadic::zero() } else { a.min(b).round(prec, false) };
        Interval { lo, hi }
    }

    /// `None` when `other` contains zero.
    pub fn div(&self, other: &Self, prec: u64) -> Option<Self> {
        if other.contains_zero() {
            return None;
        }
        let mut lo: Option<Dyadic> = None;
        let mut hi: Option<Dyadic> = None;
        for a in [&self.lo, &self.hi] {
            for b in [&other.lo, &other.hi] {
                let down = a.div_round(b, prec, false);
                let up = a.div_round(b, prec, true);
                lo = Some(match lo {
                    Some(x) if x <= down => x,
                    _ => down,
                });
                hi = Some(match hi {
                    Some(x) if x >= up => x,
                    _ => up,
                });
            }
        }
        Some(Interval { lo: lo.unwrap(), hi: hi.unwrap() })
    }

    pub fn scale2(&self, k: i64) -> Self {
        Interval { lo: self.lo.scale2(k), hi: self.hi.scale2(k) }
    }

    pub fn abs(&self) -> Self {
        if self.lo.signum() >= 0 {
            self.clone()
        } else if self.hi.signum() <= 0 {
            self.neg()
        } else {
            Interval { lo: Dyadic::zero(), hi: self.lo.abs().max(self.hi.abs()) }
        }
    }

    /// Widen by `r ≥ 0` on both sides.
    pub fn widen(&self, r: &Dyadic, prec: u64) -> Self {
        Interval {
            lo: self.lo.add_round(&r.neg(), prec, false),
            hi: self.hi.add_round(r, prec, true),
        }
    }

    /// Smallest interval containing both.
    pub fn hull(&self, other: &Self) -> Self {
        Interval {
            lo: self.lo.clone().min(other.lo.clone()),
            hi: self.hi.clone().max(other.hi.clone()),
        }
    }

    /// Natural logarithm; `None` unless the interval is positive.
    pub fn ln(&self, prec: u64) -> Option<Self> {
        if !self.is_positive() {
            return None;
        }
        Some(Interval { lo: ln_point(&self.lo, prec).lo, hi: ln_point(&self.hi, prec).hi })
    }

    pub fn to_f64(&self) -> f64 {
        self.mid().to_f64()
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:e}, {:e}]", self.lo.to_f64(), self.hi.to_f64())
    }
}

/// `2·atanh(s) = 2 Σ s^{2j+1}/(2j+1)` for an exactly known `|s| ≤ 1/2`.
fn two_atanh(s: &Interval, prec: u64) -> Interval {
    let wp = prec + 16;
    let s2 = s.sqr(wp);
    let mut power = s.clone();
    let mut sum = Interval::zero();
    let mut j = 0i64;
    let target = Dyadic::two_pow(-(wp as i64));
    loop {
        let term = power.div(&Interval::from_int(2 * j + 1), wp).expect("nonzero");
        sum = sum.add(&term, wp);
        power = power.mul(&s2, wp);
        j += 1;
        let mag = power.abs().hi;
        if mag < target {
            // remaining terms: Σ_{i≥j} |s|^{2i+1}/(2i+1) ≤ |s|^{2j+1} · 4/3
            let tail = mag.mul_round(&Dyadic::new(BigInt::from(3), -1), 64, true);
            return sum.widen(&tail, wp).scale2(1);
        }
    }
}

/// Enclosure of `ln 2 = 2·atanh(1/3)`.
pub fn ln2(prec: u64) -> Interval {
    let third = Interval::from_rational(&Rational::new(1.into(), 3.into()), prec + 16);
    two_atanh(&third, prec)
}

/// Enclosure of `ln x` for a positive dyadic point.
fn ln_point(x: &Dyadic, prec: u64) -> Interval {
    debug_assert!(x.signum() > 0);
    let wp = prec + 16;
    // x = y · 2^k with y in [3/4, 3/2)
    let mut k = x.top() - 1;
    let mut y = x.scale2(-k);
    if y >= Dyadic::new(BigInt::from(3), -1) {
        y = y.scale2(-1);
        k += 1;
    }
    let one = Dyadic::from_int(1);
    let num = Interval::point(y.add_exact(&one.neg()));
    let den = Interval::point(y.add_exact(&one));
    let s = num.div(&den, wp).expect("positive");
    let mut out = two_atanh(&s, wp);
    if k != 0 {
        out = out.add(&ln2(wp).mul(&Interval::from_int(k), wp), wp);
    }
    out
}

/// `atan(1/n)` for an integer `n ≥ 2`: alternating series.
fn atan_recip(n: i64, prec: u64) -> Interval {
    let wp = prec + 16;
    let x = Interval::from_rational(&Rational::new(1.into(), n.into()), wp);
    let x2 = x.sqr(wp);
    let mut power = x.clone();
    let mut sum = Interval::zero();
    let target = Dyadic::two_pow(-(wp as i64));
    let mut j = 0i64;
    loop {
        let term = power.div(&Interval::from_int(2 * j + 1), wp).expect("nonzero");
        sum = if j % 2 == 0 { sum.add(&term, wp) } else { sum.sub(&term, wp) };
        power = power.mul(&x2, wp);
        j += 1;
        if power.abs().hi < target {
            return sum.widen(&power.abs().hi, wp);
        }
    }
}

/// `π = 16 atan(1/5) - 4 atan(1/239)`.
pub fn pi(prec: u64) -> Interval {
    let wp = prec + 16;
    atan_recip(5, wp).scale2(4).sub(&atan_recip(239, wp).scale2(2), wp)
}

/// `(cos x, sin x)` for `|x| ≤ 4`.
pub fn cos_sin(x: &Interval, prec: u64) -> (Interval, Interval) {
    let wp = prec + 16;
    let mut cos = Interval::zero();
    let mut sin = Interval::zero();
    let mut term = Interval::from_int(1);
    let target = Dyadic::two_pow(-(wp as i64));
    let mut k = 0i64;
    loop {
        match k % 4 {
            0 => cos = cos.add(&term, wp),
            1 => sin = sin.add(&term, wp),
            2 => cos = cos.sub(&term, wp),
            _ => sin = sin.sub(&term, wp),
        }
        k += 1;
        term = term.mul(x, wp).div(&Interval::from_int(k), wp).expect("nonzero");
        // past k > 2|x| the remaining terms of either series sum to at most
        // twice the first omitted one
        if k > 8 && term.abs().hi < target {
            let tail = term.abs().hi.scale2(1);
            return (cos.widen(&tail, wp), sin.widen(&tail, wp));
        }
    }
}

/// Rectangle `re + i·im`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComplexInterval {
    pub re: Interval,
    pub im: Interval,
}

impl ComplexInterval {
    pub fn real(re: Interval) -> Self {
        ComplexInterval { re, im: Interval::zero() }
    }

    pub fn from_rational(q: &Rational, prec: u64) -> Self {
        Self::real(Interval::from_rational(q, prec))
    }

    /// Image of `a ∈ Q(ζ_n)` under `ζ_n ↦ exp(2πi/n)`.
    pub fn from_scalar(a: &Scalar, prec: u64) -> Self {
        if let Some(q) = a.as_rational() {
            return Self::from_rational(q, prec);
        }
        let wp = prec + 16;
        let n = a.conductor() as i64;
        let two_pi = pi(wp).scale2(1);
        let mut acc = ComplexInterval::real(Interval::zero());
        for (k, c) in a.coords().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            // reduce k/n to (-1/2, 1/2] so the angle stays within [-π, π]
            let mut num = k as i64 % n;
            if 2 * num > n {
                num -= n;
            }
            let angle = two_pi
                .mul(&Interval::from_int(num), wp)
                .div(&Interval::from_int(n), wp)
                .expect("nonzero");
            let (cos, sin) = cos_sin(&angle, wp);
            let c = Interval::from_rational(c, wp);
            acc = acc.add(&ComplexInterval { re: cos.mul(&c, wp), im: sin.mul(&c, wp) }, wp);
        }
        acc
    }

    pub fn add(&self, other: &Self, prec: u64) -> Self {
        ComplexInterval { re: self.re.add(&other.re, prec), im: self.im.add(&other.im, prec) }
    }

    pub fn mul(&self, other: &Self, prec: u64) -> Self {
        if self.im.is_point_zero() && other.im.is_point_zero() {
            return Self::real(self.re.mul(&other.re, prec));
        }
        ComplexInterval {
            re: self.re.mul(&other.re, prec).sub(&self.im.mul(&other.im, prec), prec),
            im: self.re.mul(&other.im, prec).add(&self.im.mul(&other.re, prec), prec),
        }
    }

    /// `|z|^2`.
    pub fn norm_sqr(&self, prec: u64) -> Interval {
        self.re.sqr(prec).add(&self.im.sqr(prec), prec)
    }

    /// `p(z)` by Horner's rule, `p` given by interval coefficients.
    pub fn horner(coeffs: &[ComplexInterval], z: &Self, prec: u64) -> Self {
        let mut acc = coeffs.last().cloned().unwrap_or_else(|| Self::real(Interval::zero()));
        for c in coeffs.iter().rev().skip(1) {
            acc = acc.mul(z, prec).add(c, prec);
        }
        acc
    }
}

impl Interval {
    fn is_point_zero(&self) -> bool {
        self.lo.is_zero() && self.hi.is_zero()
    }
}

/// An enclosed real number together with the precision it was asked for.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrecisionReal {
    enclosure: Interval,
    digits: u32,
}

impl PrecisionReal {
    pub fn new(enclosure: Interval, digits: u32) -> Self {
        PrecisionReal { enclosure, digits }
    }

    pub fn exact_zero(digits: u32) -> Self {
        Self::new(Interval::zero(), digits)
    }

    pub fn enclosure(&self) -> &Interval {
        &self.enclosure
    }

    pub fn value(&self) -> Dyadic {
        self.enclosure.mid()
    }

    pub fn error_bound(&self) -> Dyadic {
        self.enclosure.radius()
    }

    pub fn digits(&self) -> u32 {
        self.digits
    }

    pub fn to_f64(&self) -> f64 {
        self.enclosure.to_f64()
    }

    pub fn error_f64(&self) -> f64 {
        self.error_bound().to_f64()
    }

    /// Number of decimals the error bound supports, at most the requested
    /// count: the largest `k` with `error ≤ 10^{-k}/2`.
    pub fn justified_digits(&self) -> u32 {
        let err = self.error_bound().to_rational();
        let mut k = self.digits;
        loop {
            let limit = Rational::new(1.into(), BigInt::from(10).pow(k) * 2);
            if err <= limit || k == 0 {
                return k;
            }
            k -= 1;
        }
    }

    /// Midpoint rounded to the justified number of decimals.
    pub fn to_decimal(&self) -> String {
        let k = self.justified_digits();
        let n = self.value().scaled_decimal(k);
        let neg = n.is_negative();
        let s = n.abs().to_string();
        let body = if k == 0 {
            s
        } else {
            let k = k as usize;
            let padded = format!("{s:0>width$}", width = k + 1);
            let (int, frac) = padded.split_at(padded.len() - k);
            format!("{int}.{frac}")
        };
        if neg {
            format!("-{body}")
        } else {
            body
        }
    }

    pub fn add(&self, other: &Self, prec: u64) -> Self {
        Self::new(self.enclosure.add(&other.enclosure, prec), self.digits.min(other.digits))
    }
}

impl fmt::Display for PrecisionReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ± {:.3e}", self.to_decimal(), self.error_f64())
    }
}

/// Bits needed for an absolute error of `10^{-digits}`, plus a margin.
pub fn bits_for_digits(digits: u32) -> u64 {
    (digits as f64 * std::f64::consts::LOG2_10).ceil() as u64 + 8
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    /// `ln 2 = Σ_{k≥1} 1/(k 2^k)` with exact rationals; truncation below
    /// `2^{-terms}`.
    fn ln2_oracle(terms: u32) -> Rational {
        (1..=terms).map(|k| q(1, k as i64) / Rational::from_integer(pow2(k as u64))).sum()
    }

    #[test]
    fn ln2_matches_series_oracle() {
        let l = ln2(300);
        let gap = (l.mid().to_rational() - ln2_oracle(400)).abs();
        assert!(gap < Rational::new(1.into(), pow2(290)));
        assert!(l.width() < Dyadic::two_pow(-290));
        assert!((l.to_f64() - std::f64::consts::LN_2).abs() < 1e-15);
    }

    #[test]
    fn ln_of_points() {
        for (x, want) in [(q(3, 1), 3f64.ln()), (q(1, 10), 0.1f64.ln()), (q(1000, 7), (1000.0f64 / 7.0).ln())] {
            let l = Interval::from_rational(&x, 200).ln(200).unwrap();
            assert!((l.to_f64() - want).abs() < 1e-14, "{x}");
            assert!(l.width() < Dyadic::two_pow(-180));
        }
        assert_eq!(Interval::from_int(1).ln(100).unwrap().to_f64(), 0.0);
        assert!(Interval::new(Dyadic::from_int(-1), Dyadic::from_int(1)).ln(64).is_none());
    }

    #[test]
    fn pi_and_trig() {
        let p = pi(256);
        assert!((p.to_f64() - std::f64::consts::PI).abs() < 1e-15);
        assert!(p.width() < Dyadic::two_pow(-240));
        let (c, s) = cos_sin(&p.scale2(-1), 200);
        assert!(c.abs().hi < Dyadic::two_pow(-180));
        assert!((s.to_f64() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn cyclotomic_embedding() {
        let i = Scalar::zeta_pow(4, 1).unwrap();
        let z = ComplexInterval::from_scalar(&i, 128);
        assert!(z.re.contains_zero() && (z.im.to_f64() - 1.0).abs() < 1e-30);
        let w = Scalar::zeta_pow(3, 1).unwrap();
        let z = ComplexInterval::from_scalar(&w, 128);
        assert!((z.re.to_f64() + 0.5).abs() < 1e-15);
        assert!((z.im.to_f64() - 3f64.sqrt() / 2.0).abs() < 1e-15);
        let n = z.norm_sqr(128);
        assert!(n.contains(&Dyadic::from_int(1)));
    }

    #[test]
    fn decimal_output() {
        let l = PrecisionReal::new(ln2(200), 20);
        assert_eq!(l.to_decimal(), "0.69314718055994530942");
        let wide = PrecisionReal::new(Interval::from_rational(&q(1, 3), 200).widen(&Dyadic::two_pow(-12), 200), 20);
        assert_eq!(wide.justified_digits(), 3);
        assert_eq!(wide.to_decimal(), "0.333");
        let neg = PrecisionReal::new(Interval::from_rational(&q(-1, 400), 200), 2);
        assert_eq!(neg.to_decimal(), "0.00");
        let neg = PrecisionReal::new(Interval::from_rational(&q(-1, 3), 200), 2);
        assert_eq!(neg.to_decimal(), "-0.33");
        assert_eq!(PrecisionReal::exact_zero(4).to_decimal(), "0.0000");
    }

    proptest! {
        #[test]
        fn arithmetic_encloses_exact(a in -1000i64..1000, b in 1i64..1000, c in -1000i64..1000, d in 1i64..1000, prec in 8u64..80) {
            let x = q(a, b);
            let y = q(c, d);
            let ix = Interval::from_rational(&x, prec);
            let iy = Interval::from_rational(&y, prec);
            prop_assert!(ix.add(&iy, prec).contains_rational(&(&x + &y)));
            prop_assert!(ix.sub(&iy, prec).contains_rational(&(&x - &y)));
            prop_assert!(ix.mul(&iy, prec).contains_rational(&(&x * &y)));
            prop_assert!(ix.sqr(prec).contains_rational(&(&x * &x)));
            if !y.is_zero() {
                prop_assert!(ix.div(&iy, prec).unwrap().contains_rational(&(&x / &y)));
            }
        }

        #[test]
        fn rounding_is_directed(m in -100000i64..100000, e in -40i64..40, prec in 1u64..12) {
            let x = Dyadic::new(m.into(), e);
            prop_assert!(x.round(prec, false) <= x);
            prop_assert!(x.round(prec, true) >= x);
        }

        #[test]
        fn far_apart_sums_stay_directed(m in 1i64..1000, gap in 100i64..5000, neg in any::<bool>()) {
            let big = Dyadic::new(m.into(), 0);
            let small = Dyadic::new(if neg { -3 } else { 3 }.into(), -gap);
            let exact = big.add_exact(&small);
            prop_assert!(big.add_round(&small, 32, false) <= exact);
            prop_assert!(big.add_round(&small, 32, true) >= exact);
        }

        #[test]
        fn ln_is_monotone_and_tight(n in 1i64..100000, d in 1i64..1000) {
            let x = q(n, d);
            let l = Interval::from_rational(&x, 120).ln(120).unwrap();
            let want = (n as f64 / d as f64).ln();
            prop_assert!((l.to_f64() - want).abs() < 1e-12 * want.abs().max(1.0));
            prop_assert!(l.width() < Dyadic::two_pow(-100));
        }
    }
}
