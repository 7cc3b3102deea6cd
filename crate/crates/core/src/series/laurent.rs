use std::fmt;

use num_integer::Integer;

use super::poly::{push_term, Poly};
use super::SeriesError;
use crate::scalars::{CyclotomicScalar as Scalar, Rational, RootOfUnity};

/// Truncated Laurent series in `1/t`:
/// `c_0 t^top + c_1 t^{top-1} + … + c_{N-1} t^{top-N+1} + O(t^{top-N})`.
///
/// `prec = top - N` is the first exponent whose coefficient is unknown.
/// A nonzero tail always has `c_0 ≠ 0`, so `top` is the valuation `v_∞`.
/// The zero tail `O(t^prec)` has no coefficients and `top == prec`.
#[derive(Clone, Debug)]
pub struct LaurentTail {
    top: i64,
    coeffs: Vec<Scalar>,
}

impl LaurentTail {
    /// Coefficients for exponents `top, top-1, …`; leading zeros are dropped
    /// and `top` lowered, keeping the precision bound fixed.
    pub fn new(top: i64, coeffs: Vec<Scalar>) -> Self {
        let lead = coeffs.iter().position(|c| !c.is_zero()).unwrap_or(coeffs.len());
        LaurentTail {
            top: top - lead as i64,
            coeffs: coeffs.into_iter().skip(lead).collect(),
        }
    }

    /// The zero series `O(t^prec)`.
    pub fn zero(prec: i64) -> Self {
        LaurentTail { top: prec, coeffs: vec![] }
    }

    /// `c·t^e + O(t^prec)`.
    pub fn monomial(c: Scalar, e: i64, prec: i64) -> Self {
        if e <= prec {
            return Self::zero(prec);
        }
        let mut v = vec![Scalar::zero(); (e - prec) as usize];
        v[0] = c;
        Self::new(e, v)
    }

    /// Sum of `c·t^e` terms, keeping exponents above `prec`.
    pub fn from_terms(terms: &[(i64, Scalar)], prec: i64) -> Self {
        let top = terms.iter().map(|(e, _)| *e).filter(|e| *e > prec).max().unwrap_or(prec);
        let mut v = vec![Scalar::zero(); (top - prec) as usize];
        for (e, c) in terms {
            if *e > prec {
                let i = (top - e) as usize;
                v[i] = &v[i] + c;
            }
        }
        Self::new(top, v)
    }

    /// An exact polynomial, keeping exponents above `prec`.
    pub fn from_poly(p: &Poly, prec: i64) -> Self {
        let top = p.deg() as i64;
        if top <= prec {
            return Self::zero(prec);
        }
        let coeffs = (0..(top - prec)).map(|i| p.coeff_at(top - i)).collect();
        Self::new(top, coeffs)
    }

    /// Exponent of the leading term (equals `prec` for the zero tail).
    pub fn top(&self) -> i64 {
        self.top
    }

    /// Number of retained terms.
    pub fn window(&self) -> usize {
        self.coeffs.len()
    }

    /// First untrusted exponent.
    pub fn prec(&self) -> i64 {
        self.top - self.coeffs.len() as i64
    }

    /// Retained coefficients, descending from `top`.
    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn leading(&self) -> Option<&Scalar> {
        self.coeffs.first()
    }

    /// Coefficient of `t^e`; `None` when `e` is at or below the precision.
    pub fn coeff(&self, e: i64) -> Option<Scalar> {
        if e <= self.prec() {
            None
        } else if e > self.top {
            Some(Scalar::zero())
        } else {
            Some(self.coeffs[(self.top - e) as usize].clone())
        }
    }

    /// `v_∞`: the exponent of the leading term.
    pub fn valuation(&self) -> Result<i64, SeriesError> {
        if self.is_zero() {
            Err(SeriesError::ZeroSeries { prec: self.prec() })
        } else {
            Ok(self.top)
        }
    }

    /// Exponents with nonzero retained coefficients, descending.
    pub fn support(&self) -> impl Iterator<Item = i64> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(i, _)| self.top - i as i64)
    }

    /// Keep the first `window` terms.
    pub fn truncate(&self, window: usize) -> Result<Self, SeriesError> {
        if window > self.window() {
            return Err(SeriesError::WindowTooSmall {
                requested: window,
                available: self.window(),
            });
        }
        Ok(Self::new(self.top, self.coeffs[..window].to_vec()))
    }

    /// Drop every exponent at or below `prec`; `prec` may not be below the
    /// current precision.
    pub fn with_prec(&self, prec: i64) -> Result<Self, SeriesError> {
        if prec < self.prec() {
            return Err(SeriesError::WindowTooSmall {
                requested: (self.top - prec).max(0) as usize,
                available: self.window(),
            });
        }
        Ok(self.cut(prec))
    }

    /// Like `with_prec`, never failing: a coarser request is clamped.
    fn cut(&self, prec: i64) -> Self {
        let prec = prec.max(self.prec());
        if self.top <= prec {
            return Self::zero(prec);
        }
        Self::new(self.top, self.coeffs[..(self.top - prec) as usize].to_vec())
    }

    /// Upper bound for the valuation: `top` if nonzero, `prec` otherwise.
    fn val_bound(&self) -> i64 {
        self.top
    }

    /// Multiply by `t^e`.
    pub fn shift(&self, e: i64) -> Self {
        LaurentTail { top: self.top + e, coeffs: self.coeffs.clone() }
    }

    pub fn neg(&self) -> Self {
        LaurentTail {
            top: self.top,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        if c.is_zero() {
            return Self::zero(self.prec());
        }
        LaurentTail {
            top: self.top,
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let prec = self.prec().max(other.prec());
        let top = self.top.max(other.top);
        if top <= prec {
            return Self::zero(prec);
        }
        let coeffs = (0..(top - prec))
            .map(|i| {
                let e = top - i;
                let a = self.coeff(e).unwrap_or_else(Scalar::zero);
                let b = other.coeff(e).unwrap_or_else(Scalar::zero);
                a + b
            })
            .collect();
        Self::new(top, coeffs)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    /// Add an exact constant `c·t^e`.
    pub fn add_term(&self, c: &Scalar, e: i64) -> Self {
        self.add(&Self::monomial(c.clone(), e, self.prec()))
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.mul_floor(other, i64::MIN)
    }

    /// Product, discarding exponents at or below `floor`.
    pub(crate) fn mul_floor(&self, other: &Self, floor: i64) -> Self {
        let prec = (self.val_bound() + other.prec())
            .max(other.val_bound() + self.prec())
            .max(floor);
        let top = self.top + other.top;
        if self.is_zero() || other.is_zero() || top <= prec {
            return Self::zero(prec);
        }
        let len = (top - prec) as usize;
        let mut out = vec![Scalar::zero(); len];
        for (i, a) in self.coeffs.iter().enumerate().take(len) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(len - i) {
                if !b.is_zero() {
                    out[i + j] = &out[i + j] + &(a * b);
                }
            }
        }
        Self::new(top, out)
    }

    pub fn pow(&self, e: u32) -> Self {
        self.pow_floor(e, i64::MIN)
    }

    fn pow_floor(&self, e: u32, floor: i64) -> Self {
        if e == 0 {
            return Self::monomial(Scalar::one(), 0, self.prec() - self.top);
        }
        let mut acc = self.clone();
        for _ in 1..e {
            acc = acc.mul_floor(self, floor);
        }
        acc
    }

    /// Multiplicative inverse; the window is preserved.
    pub fn inverse(&self) -> Result<Self, SeriesError> {
        let a0 = self.leading().ok_or(SeriesError::ZeroSeries { prec: self.prec() })?;
        let b0 = a0.inv()?;
        let n = self.window();
        let mut b: Vec<Scalar> = Vec::with_capacity(n);
        b.push(b0.clone());
        for k in 1..n {
            let mut s = Scalar::zero();
            for j in 1..=k {
                let aj = &self.coeffs[j];
                if !aj.is_zero() {
                    s = s + aj * &b[k - j];
                }
            }
            b.push(-(&s * &b0));
        }
        Ok(Self::new(-self.top, b))
    }

    pub fn div(&self, other: &Self) -> Result<Self, SeriesError> {
        Ok(self.mul(&other.inverse()?))
    }

    /// Term-wise derivative; the precision drops by one.
    pub fn derivative(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| {
                let e = self.top - i as i64;
                c * &Scalar::from_int(e)
            })
            .collect();
        Self::new(self.top - 1, coeffs)
    }

    /// `s(ζ t^m)`: the `t^k` term becomes `ζ^k t^{km}`.
    pub fn substitute(&self, zeta: &RootOfUnity, m: u32) -> Result<Self, SeriesError> {
        assert!(m >= 1, "substitution exponent must be positive");
        let m = m as i64;
        let prec = self.prec() * m;
        if self.is_zero() {
            return Ok(Self::zero(prec));
        }
        let len = (self.top * m - prec) as usize;
        let mut out = vec![Scalar::zero(); len];
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let k = self.top - i as i64;
            let z = zeta.pow(k).to_scalar()?;
            out[i * m as usize] = c * &z;
        }
        Ok(Self::new(self.top * m, out))
    }

    /// `s(t^m)`.
    pub fn substitute_power(&self, m: u32) -> Self {
        self.substitute(&RootOfUnity::one(), m)
            .expect("trivial twist is always representable")
    }

    /// `p(s(t))` by Horner's rule. Requires `v_∞(s) ≥ 1`; the result has
    /// valuation `deg(p)·v_∞(s)` and the same window as `s`.
    pub fn compose_poly(p: &Poly, s: &LaurentTail) -> Result<Self, SeriesError> {
        let v = s.valuation()?;
        if v < 1 {
            return Err(SeriesError::NonPositiveValuation { top: v });
        }
        let d = p.deg() as i64;
        let out_prec = if d == 0 { s.prec() - v } else { (d - 1) * v + s.prec() };
        let Some(lead) = p.leading() else {
            return Ok(Self::zero(out_prec));
        };
        if d == 0 {
            return Ok(Self::monomial(lead.clone(), 0, out_prec));
        }
        let mut acc = s.scale(lead);
        for k in (0..p.deg()).rev() {
            let c = p.coeff(k);
            if !c.is_zero() {
                acc = acc.add_term(&c, 0);
            }
            if k > 0 {
                // k-1 further multiplications each raise exponents by v.
                acc = acc.mul_floor(s, out_prec - (k as i64 - 1) * v);
            }
        }
        Ok(acc.cut(out_prec))
    }

    /// `self(inner(t))` for a tail `inner` of positive valuation.
    pub fn compose(&self, inner: &LaurentTail) -> Result<Self, SeriesError> {
        let v = inner.valuation()?;
        if v < 1 {
            return Err(SeriesError::NonPositiveValuation { top: v });
        }
        let out_prec = (self.prec() * v).max((self.top.max(1) - 1) * v + inner.prec());
        let mut acc = Self::zero(out_prec);
        if self.is_zero() {
            return Ok(acc);
        }
        let add_scaled = |acc: &mut Self, power: &Self, k: i64| {
            if let Some(c) = self.coeff(k) {
                if !c.is_zero() {
                    *acc = acc.add(&power.scale(&c));
                }
            }
        };
        if let Some(c0) = self.coeff(0) {
            acc = acc.add_term(&c0, 0);
        }
        let mut power = inner.cut(out_prec);
        for k in 1..=self.top {
            if k > 1 {
                power = power.mul_floor(inner, out_prec);
            }
            add_scaled(&mut acc, &power, k);
        }
        let lowest = self.prec() + 1;
        if lowest < 0 {
            let inv = inner.inverse()?;
            let mut power = inv.clone();
            let mut k = -1;
            while k >= lowest && k * v > out_prec {
                if k < -1 {
                    power = power.mul_floor(&inv, out_prec);
                }
                add_scaled(&mut acc, &power, k);
                k -= 1;
            }
        }
        Ok(acc.cut(out_prec))
    }

    /// Compositional inverse of a tail with `top = 1`.
    ///
    /// With input window `N` the result carries `N - 1` coefficients, all
    /// exact, and `s(r(t)) = r(s(t)) = t + O(t^{2-N})`.
    ///
    /// Writing `s = c t H(1/t)`, the map `z ↦ 1/s(1/z)` is an ordinary power
    /// series and Lagrange inversion gives its reverse from the powers
    /// `H^{j+1}`.
    pub fn reversion(&self) -> Result<Self, SeriesError> {
        if self.top != 1 || self.is_zero() {
            return Err(SeriesError::NotInvertible { top: self.top });
        }
        let n = self.window();
        if n < 2 {
            return Err(SeriesError::WindowTooSmall { requested: 2, available: n });
        }
        let c = &self.coeffs[0];
        let c_inv = c.inv()?;
        let h: Vec<Scalar> = self.coeffs.iter().map(|x| x * &c_inv).collect();
        // K_j = c^j/(j+1) · [w^j] H^{j+1}
        let mut k = Vec::with_capacity(n - 1);
        let mut c_pow = Scalar::one();
        for j in 0..(n - 1) {
            let mut g = vec![Scalar::one()];
            for _ in 0..j {
                g.push(unit_power_next(&h, &g, j as i64 + 1));
            }
            let kj = g[j].scale(&Rational::new(1.into(), (j as i64 + 1).into()));
            k.push(&kj * &c_pow);
            c_pow = &c_pow * c;
        }
        let k_inv = unit_series_inverse(&k);
        // r(t) = (t/c) · 1/K(1/t)
        let coeffs = k_inv.iter().map(|x| x * &c_inv).collect();
        Ok(Self::new(1, coeffs))
    }
}

/// Next coefficient `G_n` (`n = g.len()`) of `G = H^alpha`, where `H` has
/// constant term 1 and coefficients `h` (missing entries read as 0).
pub(crate) fn unit_power_next(h: &[Scalar], g: &[Scalar], alpha: i64) -> Scalar {
    let n = g.len() as i64;
    let mut acc = Scalar::zero();
    for m in 1..=n {
        let Some(hm) = h.get(m as usize) else { break };
        if hm.is_zero() {
            continue;
        }
        let w = (alpha + 1) * m - n;
        if w == 0 {
            continue;
        }
        let term = hm * &g[(n - m) as usize];
        acc = &acc + &term.scale(&Rational::from_integer(w.into()));
    }
    acc.scale(&Rational::new(1.into(), n.into()))
}

/// Inverse of a power series with constant term 1, same length.
fn unit_series_inverse(k: &[Scalar]) -> Vec<Scalar> {
    let mut out: Vec<Scalar> = Vec::with_capacity(k.len());
    for n in 0..k.len() {
        if n == 0 {
            out.push(k[0].inv().expect("unit constant term"));
            continue;
        }
        let mut acc = Scalar::zero();
        for m in 1..=n {
            if !k[m].is_zero() {
                acc = &acc + &(&k[m] * &out[n - m]);
            }
        }
        out.push(-&(&acc * &out[0]));
    }
    out
}

impl Poly {
    /// Coefficient of `t^e` for any integer `e` (zero outside the support).
    pub fn coeff_at(&self, e: i64) -> Scalar {
        if e < 0 {
            Scalar::zero()
        } else {
            self.coeff(e as usize)
        }
    }
}

impl PartialEq for LaurentTail {
    fn eq(&self, other: &Self) -> bool {
        self.top == other.top && self.coeffs == other.coeffs
    }
}

impl Eq for LaurentTail {}

impl fmt::Display for LaurentTail {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        for (i, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                push_term(&mut out, c, self.top - i as i64);
            }
        }
        let o = format!("O(t^{})", self.prec());
        if out.is_empty() {
            out = o;
        } else {
            out.push_str(" + ");
            out.push_str(&o);
        }
        f.write_str(&out)
    }
}

/// `ζ t^m` with `ζ` of order coprime to `d`: a monomial commuting with an
/// iterate of `t^d`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MdElement {
    zeta: RootOfUnity,
    m: u32,
    d: u32,
}

impl MdElement {
    pub fn new(zeta: RootOfUnity, m: u32, d: u32) -> Result<Self, SeriesError> {
        if m == 0 || d < 2 || zeta.order().gcd(&(d as u64)) != 1 {
            return Err(SeriesError::NotInMd { order: zeta.order(), m, d });
        }
        Ok(MdElement { zeta, m, d })
    }

    /// `t^m`.
    pub fn power(m: u32, d: u32) -> Result<Self, SeriesError> {
        Self::new(RootOfUnity::one(), m, d)
    }

    pub fn zeta(&self) -> RootOfUnity {
        self.zeta
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    /// As a polynomial `ζ t^m`.
    pub fn to_poly(&self) -> Result<Poly, SeriesError> {
        Ok(Poly::monomial(self.zeta.to_scalar()?, self.m as usize))
    }
}

/// `s(u(t))` for `u = ζ t^m ∈ M_d`.
pub fn substitute_md(s: &LaurentTail, u: &MdElement) -> Result<LaurentTail, SeriesError> {
    s.substitute(&u.zeta, u.m)
}

pub fn series_compose_poly(p: &Poly, s: &LaurentTail) -> Result<LaurentTail, SeriesError> {
    LaurentTail::compose_poly(p, s)
}

pub fn reversion(s: &LaurentTail) -> Result<LaurentTail, SeriesError> {
    s.reversion()
}

pub fn valuation(s: &LaurentTail) -> Result<i64, SeriesError> {
    s.valuation()
}
