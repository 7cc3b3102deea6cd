//! Balls in `Q_p` with tracked absolute precision.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::scalars::Rational;

use super::primes::valuation;

/// The set `x·p^{-s} + p^{prec}·Z_p`, with `0 ≤ x < p^{prec+s}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Ball {
    x: BigInt,
    s: i64,
    prec: i64,
}

pub(crate) struct Field {
    p: BigInt,
}

impl Field {
    pub(crate) fn new(p: BigInt) -> Self {
        Field { p }
    }

    fn pow(&self, k: i64) -> BigInt {
        debug_assert!(k >= 0);
        num_traits::pow(self.p.clone(), k as usize)
    }

    fn normalize(&self, mut x: BigInt, mut s: i64, prec: i64) -> Ball {
        if prec + s < 0 {
            x *= self.pow(-prec - s);
            s = -prec;
        }
        let modulus = self.pow(prec + s);
        let mut x = x.mod_floor(&modulus);
        if x.is_zero() {
            return Ball { x, s: (-prec).max(0), prec };
        }
        // keep s minimal so repeated products do not inflate it
        let k = valuation(&x, &self.p).min(s);
        if k > 0 {
            x /= self.pow(k);
            s -= k;
        }
        Ball { x, s, prec }
    }

    pub(crate) fn from_rational(&self, q: &Rational, prec: i64) -> Ball {
        if q.is_zero() {
            return self.normalize(BigInt::zero(), 0, prec);
        }
        let v = valuation(q.numer(), &self.p) - valuation(q.denom(), &self.p);
        let s = (-v).max(0);
        // q·p^s = n/m with p ∤ m
        let scaled = q * Rational::from_integer(self.pow(s));
        let (n, m) = (scaled.numer().clone(), scaled.denom().clone());
        let modulus = self.pow((prec + s).max(0));
        let inv = mod_inverse(&m, &modulus);
        self.normalize(n * inv, s, prec)
    }

    /// Exact valuation, or `None` when the ball contains 0.
    pub(crate) fn val(&self, b: &Ball) -> Option<i64> {
        if b.x.is_zero() {
            None
        } else {
            Some(valuation(&b.x, &self.p) - b.s)
        }
    }

    /// A lower bound for the valuation of every element.
    fn val_lower(&self, b: &Ball) -> i64 {
        self.val(b).unwrap_or(b.prec)
    }

    pub(crate) fn add(&self, a: &Ball, b: &Ball) -> Ball {
        let s = a.s.max(b.s);
        let x = &a.x * self.pow(s - a.s) + &b.x * self.pow(s - b.s);
        self.normalize(x, s, a.prec.min(b.prec))
    }

    pub(crate) fn mul(&self, a: &Ball, b: &Ball) -> Ball {
        let prec = (a.prec + self.val_lower(b)).min(b.prec + self.val_lower(a));
        self.normalize(&a.x * &b.x, a.s + b.s, prec)
    }

    pub(crate) fn precision(&self, b: &Ball) -> i64 {
        b.prec
    }

    /// `p(z)` by Horner's rule.
    pub(crate) fn horner(&self, coeffs: &[Ball], z: &Ball) -> Ball {
        let mut acc = coeffs.last().expect("nonempty").clone();
        for c in coeffs.iter().rev().skip(1) {
            acc = self.add(&self.mul(&acc, z), c);
        }
        acc
    }
}

fn mod_inverse(m: &BigInt, modulus: &BigInt) -> BigInt {
    if modulus.is_one() {
        return BigInt::zero();
    }
    let e = m.extended_gcd(modulus);
    debug_assert!(e.gcd.abs().is_one(), "unit expected");
    e.x.mod_floor(modulus)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    fn exact_val(x: &Rational, p: i64) -> i64 {
        let p = BigInt::from(p);
        valuation(x.numer(), &p) - valuation(x.denom(), &p)
    }

    #[test]
    fn valuations_of_rationals() {
        let f = Field::new(BigInt::from(3));
        assert_eq!(f.val(&f.from_rational(&q(18, 5), 10)), Some(2));
        assert_eq!(f.val(&f.from_rational(&q(5, 18), 10)), Some(-2));
        assert_eq!(f.val(&f.from_rational(&q(0, 1), 10)), None);
        // beyond the precision the ball contains zero
        assert_eq!(f.val(&f.from_rational(&q(3i64.pow(12), 1), 10)), None);
    }

    #[test]
    fn long_orbits_stay_compact() {
        // 2z^2 - 1 keeps v_2 = -1 from z = 3/2
        let f = Field::new(BigInt::from(2));
        let coeffs = [q(-1, 1), q(0, 1), q(2, 1)].map(|c| f.from_rational(&c, 400));
        let mut z = f.from_rational(&q(3, 2), 400);
        for _ in 0..150 {
            z = f.horner(&coeffs, &z);
            assert_eq!(f.val(&z), Some(-1));
            assert!(z.s <= 1 && z.x.bits() <= 401);
        }
    }

    proptest! {
        #[test]
        fn ring_operations_track_valuation(a in -500i64..500, b in 1i64..500, c in -500i64..500, d in 1i64..500, p in prop::sample::select(vec![2i64, 3, 5, 7])) {
            let f = Field::new(BigInt::from(p));
            let (x, y) = (q(a, b), q(c, d));
            let (bx, by) = (f.from_rational(&x, 40), f.from_rational(&y, 40));
            for (exact, ball) in [(&x + &y, f.add(&bx, &by)), (&x * &y, f.mul(&bx, &by))] {
                match f.val(&ball) {
                    Some(v) => prop_assert_eq!(v, exact_val(&exact, p)),
                    None => prop_assert!(exact.is_zero() || exact_val(&exact, p) >= f.precision(&ball)),
                }
                // the ball contains the exact value
                let diff = f.add(&ball, &f.from_rational(&-exact.clone(), 60));
                prop_assert!(f.val(&diff).is_none());
            }
        }
    }
}
