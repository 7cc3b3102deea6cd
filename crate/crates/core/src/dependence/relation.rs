use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::scalars::{CyclotomicScalar as Scalar, Rational};
use crate::series::{push_scaled, LaurentTail, Poly};

/// Exponent vector `(e_0, …, e_n)` of `X_0^{e_0}…X_n^{e_n}`, ordered
/// graded-lexicographically with `X_0` most significant.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(exps: Vec<u32>) -> Self {
        Monomial(exps)
    }

    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn var(nvars: usize, i: usize, e: u32) -> Self {
        let mut v = vec![0; nvars];
        v[i] = e;
        Monomial(v)
    }

    pub fn exps(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// `self / other` when every exponent allows it.
    fn div(&self, other: &Monomial) -> Option<Monomial> {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<Vec<_>>>()
            .map(Monomial)
    }

    /// Every exponent vector in `nvars` variables of total degree at most
    /// `bound`, ascending.
    pub fn all_up_to(nvars: usize, bound: u32) -> Vec<Monomial> {
        fn rec(prefix: &mut Vec<u32>, left: usize, budget: u32, out: &mut Vec<Monomial>) {
            if left == 0 {
                out.push(Monomial(prefix.clone()));
                return;
            }
            for e in 0..=budget {
                prefix.push(e);
                rec(prefix, left - 1, budget - e, out);
                prefix.pop();
            }
        }
        let mut out = Vec::new();
        rec(&mut Vec::new(), nvars, bound, &mut out);
        out.sort();
        out
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .0
            .iter()
            .enumerate()
            .filter(|(_, e)| **e > 0)
            .map(|(i, e)| if *e == 1 { format!("X_{i}") } else { format!("X_{i}^{e}") })
            .collect();
        f.write_str(&parts.join("*"))
    }
}

/// Multivariate polynomial `P(X_0, …, X_n)` with sparse terms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relation {
    nvars: usize,
    terms: BTreeMap<Monomial, Scalar>,
}

impl Relation {
    pub fn zero(nvars: usize) -> Self {
        Relation { nvars, terms: BTreeMap::new() }
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Monomial, Scalar)>) -> Self {
        let mut r = Self::zero(nvars);
        for (m, c) in terms {
            assert_eq!(m.0.len(), nvars, "exponent vector length");
            r.add_term(m, &c);
        }
        r
    }

    pub fn constant(nvars: usize, c: Scalar) -> Self {
        Self::from_terms(nvars, [(Monomial::one(nvars), c)])
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        Self::from_terms(nvars, [(Monomial::var(nvars, i, 1), Scalar::one())])
    }

    /// `p(X_i)`.
    pub fn univariate(nvars: usize, i: usize, p: &Poly) -> Self {
        Self::from_terms(
            nvars,
            p.coeffs().iter().enumerate().map(|(k, c)| (Monomial::var(nvars, i, k as u32), c.clone())),
        )
    }

    fn add_term(&mut self, m: Monomial, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        let v = match self.terms.remove(&m) {
            Some(old) => &old + c,
            None => c.clone(),
        };
        if !v.is_zero() {
            self.terms.insert(m, v);
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Scalar)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> Scalar {
        self.terms.get(m).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    /// Graded-lex leading term.
    pub fn leading(&self) -> Option<(&Monomial, &Scalar)> {
        self.terms.iter().next_back()
    }

    pub fn add(&self, other: &Relation) -> Relation {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c);
        }
        out
    }

    pub fn sub(&self, other: &Relation) -> Relation {
        self.add(&other.scale(&Scalar::from_int(-1)))
    }

    pub fn scale(&self, c: &Scalar) -> Relation {
        Relation::from_terms(self.nvars, self.terms.iter().map(|(m, x)| (m.clone(), x * c)))
    }

    pub fn mul(&self, other: &Relation) -> Relation {
        let mut out = Relation::zero(self.nvars);
        for (ma, a) in &self.terms {
            for (mb, b) in &other.terms {
                out.add_term(ma.mul(mb), &(a * b));
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> Relation {
        let mut acc = Relation::constant(self.nvars, Scalar::one());
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Canonical scalar multiple: leading coefficient 1, and when every
    /// coefficient is then rational, the primitive integer multiple with a
    /// positive leading coefficient.
    pub fn normalize(&self) -> Relation {
        let Some((_, lead)) = self.leading() else {
            return self.clone();
        };
        let monic = self.scale(&lead.inv().expect("nonzero leading coefficient"));
        let rationals: Option<Vec<&Rational>> = monic.terms.values().map(Scalar::as_rational).collect();
        let Some(rationals) = rationals else {
            return monic;
        };
        let den = rationals.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
        let nums: Vec<BigInt> = rationals.iter().map(|q| q.numer() * (&den / q.denom())).collect();
        let g = nums.iter().fold(BigInt::zero(), |acc, n| acc.gcd(n));
        let factor = Rational::new(den, g.abs());
        monic.scale(&Scalar::from_rational(factor))
    }

    /// `P(g_0(X_0), …, g_n(X_n))`.
    pub fn substitute_univariate(&self, maps: &[Poly]) -> Relation {
        assert_eq!(maps.len(), self.nvars);
        let mut powers: Vec<Vec<Relation>> = maps
            .iter()
            .enumerate()
            .map(|(i, g)| vec![Relation::constant(self.nvars, Scalar::one()), Relation::univariate(self.nvars, i, g)])
            .collect();
        let mut out = Relation::zero(self.nvars);
        for (m, c) in &self.terms {
            let mut term = Relation::constant(self.nvars, c.clone());
            for (i, &e) in m.0.iter().enumerate() {
                while powers[i].len() <= e as usize {
                    let next = powers[i].last().unwrap().mul(&powers[i][1]);
                    powers[i].push(next);
                }
                term = term.mul(&powers[i][e as usize]);
            }
            out = out.add(&term);
        }
        out
    }

    /// Remainder of `self` on division by `divisor`, graded-lex.
    pub fn remainder(&self, divisor: &Relation) -> Relation {
        let (lm, lc) = divisor.leading().expect("nonzero divisor");
        let lc_inv = lc.inv().expect("nonzero leading coefficient");
        let mut rest = self.clone();
        let mut rem = Relation::zero(self.nvars);
        while let Some((m, c)) = rest.terms.iter().next_back().map(|(m, c)| (m.clone(), c.clone())) {
            match m.div(lm) {
                Some(q) => {
                    let factor = &c * &lc_inv;
                    let shifted =
                        Relation::from_terms(self.nvars, divisor.terms.iter().map(|(dm, dc)| (dm.mul(&q), dc * &factor)));
                    rest = rest.sub(&shifted);
                }
                None => {
                    rest.terms.remove(&m);
                    rem.add_term(m, &c);
                }
            }
        }
        rem
    }

    pub fn is_divisible_by(&self, divisor: &Relation) -> bool {
        self.remainder(divisor).is_zero()
    }

    /// Evaluate with `X_0 = t` and `X_i = series[i-1]`.
    pub fn eval_series(&self, series: &[LaurentTail]) -> LaurentTail {
        assert_eq!(series.len() + 1, self.nvars);
        let floor = exact_floor(series, self.total_degree());
        let mut powers: Vec<Vec<LaurentTail>> = series.iter().map(|s| vec![s.clone()]).collect();
        let mut acc: Option<LaurentTail> = None;
        for (m, c) in &self.terms {
            let mut term: Option<LaurentTail> = None;
            for (i, &e) in m.0.iter().enumerate().skip(1) {
                if e == 0 {
                    continue;
                }
                let table = &mut powers[i - 1];
                while table.len() < e as usize {
                    let next = table.last().unwrap().mul(&table[0]);
                    table.push(next);
                }
                let p = &table[e as usize - 1];
                term = Some(match term {
                    Some(t) => t.mul(p),
                    None => p.clone(),
                });
            }
            let term = match term {
                Some(t) => t.scale(c).shift(m.0[0] as i64),
                None => LaurentTail::monomial(c.clone(), m.0[0] as i64, floor),
            };
            acc = Some(match acc {
                Some(a) => a.add(&term),
                None => term,
            });
        }
        acc.unwrap_or_else(|| LaurentTail::zero(floor))
    }

    /// Recognise `c·(X_i - Q(X_j))` with `i ≠ j` and `deg Q ≥ 1`.
    pub fn as_graph(&self) -> Option<(usize, usize, Poly)> {
        for i in 0..self.nvars {
            let xi = Monomial::var(self.nvars, i, 1);
            let Some(ci) = self.terms.get(&xi).cloned() else {
                continue;
            };
            let rest: Vec<_> = self.terms.iter().filter(|(m, _)| **m != xi).collect();
            if rest.iter().any(|(m, _)| m.0[i] > 0) {
                continue;
            }
            let vars: Vec<usize> =
                (0..self.nvars).filter(|&j| rest.iter().any(|(m, _)| m.0[j] > 0)).collect();
            if vars.len() != 1 {
                continue;
            }
            let j = vars[0];
            let mut q = vec![Scalar::zero(); rest.iter().map(|(m, _)| m.0[j] as usize).max()? + 1];
            let ci_inv = ci.inv().ok()?;
            for (m, c) in &rest {
                if m.0.iter().enumerate().any(|(k, e)| k != j && *e > 0) {
                    return None;
                }
                q[m.0[j] as usize] = -&(*c * &ci_inv);
            }
            return Some((i, j, Poly::new(q)));
        }
        None
    }
}

/// A precision below that of every product of at most `degree` of the
/// series, used for the exact powers of `X_0 = t`.
pub(crate) fn exact_floor(series: &[LaurentTail], degree: u32) -> i64 {
    let m = series.iter().flat_map(|s| [s.prec(), s.top()]).fold(0, i64::min);
    m * degree.max(1) as i64 - 1
}

impl fmt::Display for Relation {
    /// Terms in descending graded-lex order, e.g. `X_1^2 - X_2 + 1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut out = String::new();
        for (m, c) in self.terms.iter().rev() {
            push_scaled(&mut out, c, &m.to_string());
        }
        f.write_str(&out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conjugacy::chebyshev;

    fn x(n: usize, i: usize) -> Relation {
        Relation::var(n, i)
    }

    fn k(n: usize, c: i64) -> Relation {
        Relation::constant(n, Scalar::from_int(c))
    }

    #[test]
    fn graded_lex_order() {
        let ms = Monomial::all_up_to(3, 2);
        assert_eq!(ms.len(), 10);
        let shown: Vec<String> = ms.iter().map(|m| m.to_string()).collect();
        assert_eq!(shown, ["", "X_2", "X_1", "X_0", "X_2^2", "X_1*X_2", "X_1^2", "X_0*X_2", "X_0*X_1", "X_0^2"]);
    }

    #[test]
    fn display_and_normalize() {
        let r = x(3, 2).sub(&x(3, 1).pow(2)).sub(&k(3, 1));
        let n = r.normalize();
        assert_eq!(n.to_string(), "X_1^2 - X_2 + 1");
        assert_eq!(n, r.scale(&Scalar::from_int(-1)));
        let half = r.scale(&Scalar::from_ratio(3, 2));
        assert_eq!(half.normalize(), n);
        assert_eq!(r.total_degree(), 2);
        assert_eq!(Relation::zero(2).to_string(), "0");
        assert!(x(2, 1).sub(&x(2, 1)).is_zero());
    }

    #[test]
    fn divisibility() {
        // X_1^2 - X_0^2 = (X_1 - X_0)(X_1 + X_0)
        let p = x(2, 1).sub(&x(2, 0));
        let q = p.substitute_univariate(&[Poly::from_ints(&[0, 0, 1]), Poly::from_ints(&[0, 0, 1])]);
        assert!(q.is_divisible_by(&p));
        assert!(!q.add(&k(2, 1)).is_divisible_by(&p));
        // X_0 leads X_1 - X_0, so reduction trades X_0 for X_1
        assert_eq!(q.add(&x(2, 0)).remainder(&p), x(2, 1));
    }

    #[test]
    fn graph_shape() {
        let c3 = chebyshev(3);
        let r = x(3, 1).sub(&Relation::univariate(3, 2, &c3)).scale(&Scalar::from_int(-2));
        assert_eq!(r.as_graph(), Some((1, 2, c3)));
        let r = x(3, 2).sub(&x(3, 1).pow(2)).sub(&k(3, 1));
        assert_eq!(r.as_graph(), Some((2, 1, Poly::from_ints(&[1, 0, 1]))));
        assert_eq!(x(3, 1).mul(&x(3, 2)).as_graph(), None);
    }

    #[test]
    fn series_evaluation() {
        let s = LaurentTail::from_terms(&[(1, Scalar::one()), (-1, Scalar::one())], -20);
        // X_1^2 - X_0^2 - 2 vanishes on t + 1/t up to t^-2
        let r = x(2, 1).pow(2).sub(&x(2, 0).pow(2)).sub(&k(2, 2));
        let v = r.eval_series(&[s]);
        assert_eq!(v.support().collect::<Vec<_>>(), vec![-2]);
        assert_eq!(v.prec(), -19);
    }
}
