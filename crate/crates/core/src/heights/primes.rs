//! Factoring the modest integers that appear as denominators and leading
//! coefficients: trial division, then Miller–Rabin and Pollard–Brent.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

const SMALL_BOUND: u64 = 1 << 14;
const WITNESSES: [u64; 13] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41];

/// Miller–Rabin with the first thirteen primes as bases: a proof below
/// `3.3·10^24`, a very strong test beyond.
pub(crate) fn is_probable_prime(n: &BigInt) -> bool {
    if n < &BigInt::from(2) {
        return false;
    }
    for &p in &WITNESSES {
        let p = BigInt::from(p);
        if n == &p {
            return true;
        }
        if (n % &p).is_zero() {
            return false;
        }
    }
    let one = BigInt::one();
    let m = n - &one;
    let s = m.trailing_zeros().unwrap_or(0);
    let d = &m >> s;
    'bases: for &a in &WITNESSES {
        let mut x = BigInt::from(a).modpow(&d, n);
        if x == one || x == m {
            continue;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == m {
                continue 'bases;
            }
        }
        return false;
    }
    true
}

/// A nontrivial factor of an odd composite `n`.
fn pollard_brent(n: &BigInt) -> BigInt {
    let one = BigInt::one();
    for c in 1u64.. {
        let c = BigInt::from(c);
        let f = |x: &BigInt| (x * x + &c) % n;
        let (mut x, mut y, mut g) = (BigInt::from(2), BigInt::from(2), one.clone());
        while g == one {
            x = f(&x);
            y = f(&f(&y));
            g = (&x - &y).abs().gcd(n);
        }
        if &g != n {
            return g;
        }
    }
    unreachable!()
}

fn split(n: BigInt, out: &mut Vec<BigInt>) {
    if n.is_one() {
        return;
    }
    if is_probable_prime(&n) {
        out.push(n);
        return;
    }
    let f = pollard_brent(&n);
    let g = &n / &f;
    split(f, out);
    split(g, out);
}

/// Distinct prime factors of `|n|` with multiplicities, ascending.
pub(crate) fn factor(n: &BigInt) -> Vec<(BigInt, u32)> {
    let mut n = n.abs();
    let mut primes = Vec::new();
    if n.is_zero() {
        return Vec::new();
    }
    let mut p = 2u64;
    while p < SMALL_BOUND && !n.is_one() {
        let bp = BigInt::from(p);
        if &bp * &bp > n {
            break;
        }
        while (&n % &bp).is_zero() {
            primes.push(bp.clone());
            n /= &bp;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    split(n, &mut primes);
    primes.sort();
    let mut out: Vec<(BigInt, u32)> = Vec::new();
    for q in primes {
        match out.last_mut() {
            Some((last, k)) if *last == q => *k += 1,
            _ => out.push((q, 1)),
        }
    }
    out
}

/// `v_p(n)` for `n ≠ 0`.
pub(crate) fn valuation(n: &BigInt, p: &BigInt) -> i64 {
    debug_assert!(!n.is_zero());
    let mut n = n.clone();
    let mut v = 0;
    loop {
        let (q, r) = n.div_rem(p);
        if !r.is_zero() {
            return v;
        }
        n = q;
        v += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn trial(mut n: u64) -> Vec<(BigInt, u32)> {
        let mut out = Vec::new();
        let mut p = 2;
        while p * p <= n {
            let mut k = 0;
            while n % p == 0 {
                n /= p;
                k += 1;
            }
            if k > 0 {
                out.push((BigInt::from(p), k));
            }
            p += 1;
        }
        if n > 1 {
            out.push((BigInt::from(n), 1));
        }
        out
    }

    #[test]
    fn known_factorizations() {
        assert_eq!(factor(&BigInt::from(360)), trial(360));
        assert_eq!(factor(&BigInt::from(1)), vec![]);
        assert_eq!(factor(&BigInt::from(-97)), vec![(BigInt::from(97), 1)]);
        // two primes above the trial-division bound
        let p = BigInt::from(1_000_003u64);
        let q = BigInt::from(998_244_353u64);
        assert_eq!(factor(&(&p * &q * &p)), vec![(p.clone(), 2), (q.clone(), 1)]);
        assert!(is_probable_prime(&q));
        assert!(!is_probable_prime(&BigInt::from(561)));
        assert_eq!(valuation(&BigInt::from(48), &BigInt::from(2)), 4);
    }

    proptest! {
        #[test]
        fn matches_trial_division(n in 1u64..2_000_000) {
            prop_assert_eq!(factor(&BigInt::from(n)), trial(n));
        }
    }
}
