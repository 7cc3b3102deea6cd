use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::scalars::{CyclotomicScalar as Scalar, ScalarError};

/// Dense univariate polynomial in `t`, ascending coefficients.
///
/// The zero polynomial has no coefficients; every other value has a nonzero
/// leading coefficient.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly {
    coeffs: Vec<Scalar>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<Scalar>) -> Self {
        while coeffs.last().is_some_and(Scalar::is_zero) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    /// From small integer coefficients, ascending.
    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Scalar::from_int(c)).collect())
    }

    pub fn zero() -> Self {
        Poly { coeffs: vec![] }
    }

    pub fn constant(c: Scalar) -> Self {
        Self::new(vec![c])
    }

    /// The identity `t`.
    pub fn t() -> Self {
        Self::from_ints(&[0, 1])
    }

    pub fn monomial(c: Scalar, k: usize) -> Self {
        let mut v = vec![Scalar::zero(); k + 1];
        v[k] = c;
        Self::new(v)
    }

    /// `a·t + b`.
    pub fn linear(a: Scalar, b: Scalar) -> Self {
        Self::new(vec![b, a])
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree with the zero polynomial counted as 0.
    pub fn deg(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn coeff(&self, k: usize) -> Scalar {
        self.coeffs.get(k).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn leading(&self) -> Option<&Scalar> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(Scalar::is_one)
    }

    pub fn is_rational(&self) -> bool {
        self.coeffs.iter().all(Scalar::is_rational)
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        Self::new(self.coeffs.iter().map(|x| x * c).collect())
    }

    pub fn eval(&self, x: &Scalar) -> Scalar {
        let mut acc = Scalar::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * x) + c;
        }
        acc
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Poly::constant(Scalar::one());
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// `self(inner(t))`.
    pub fn compose(&self, inner: &Poly) -> Poly {
        let mut acc = Poly::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * inner) + &Poly::constant(c.clone());
        }
        acc
    }

    /// The `n`-fold iterate `self∘…∘self`; `n = 0` gives `t`.
    pub fn iterate(&self, n: u32) -> Poly {
        let mut acc = Poly::t();
        for _ in 0..n {
            acc = self.compose(&acc);
        }
        acc
    }

    pub fn derivative(&self) -> Poly {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * &Scalar::from_int(k as i64))
                .collect(),
        )
    }

    /// Inverse of a linear polynomial `a·t + b`.
    pub fn linear_inverse(&self) -> Result<Poly, ScalarError> {
        assert_eq!(self.degree(), Some(1), "linear_inverse needs degree 1");
        let a_inv = self.coeffs[1].inv()?;
        Ok(Poly::linear(a_inv.clone(), -(&self.coeffs[0] * &a_inv)))
    }
}

impl Add<&Poly> for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|k| &self.coeff(k) + &rhs.coeff(k)).collect())
    }
}

impl Sub<&Poly> for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self + &-rhs
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl Mul<&Poly> for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Scalar::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] = &out[i + j] + &(a * b);
                }
            }
        }
        Poly::new(out)
    }
}

macro_rules! owned_ops {
    ($tr:ident, $m:ident) => {
        impl $tr<Poly> for Poly {
            type Output = Poly;
            fn $m(self, rhs: Poly) -> Poly {
                (&self).$m(&rhs)
            }
        }
    };
}
owned_ops!(Add, add);
owned_ops!(Sub, sub);
owned_ops!(Mul, mul);

/// Append one `c*t^e` term to a signed sum being built in `out`.
pub(crate) fn push_term(out: &mut String, c: &Scalar, e: i64) {
    let var = match e {
        0 => String::new(),
        1 => "t".to_string(),
        _ => format!("t^{e}"),
    };
    push_scaled(out, c, &var);
}

/// Append `c*var` (just `c` when `var` is empty) to a signed sum.
pub(crate) fn push_scaled(out: &mut String, c: &Scalar, var: &str) {
    let (neg, body) = match c.as_rational() {
        Some(q) => {
            let a = Scalar::from_rational(num_traits::Signed::abs(q));
            (num_traits::Signed::is_negative(q), a.to_string())
        }
        None if c.is_compound() => (false, format!("({c})")),
        None => {
            let s = c.to_string();
            match s.strip_prefix('-') {
                Some(rest) => (true, rest.to_string()),
                None => (false, s),
            }
        }
    };
    if out.is_empty() {
        if neg {
            out.push('-');
        }
    } else {
        out.push_str(if neg { " - " } else { " + " });
    }
    if var.is_empty() {
        out.push_str(&body);
    } else if body == "1" {
        out.push_str(var);
    } else {
        out.push_str(&body);
        out.push('*');
        out.push_str(var);
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut out = String::new();
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if !c.is_zero() {
                push_term(&mut out, c, k as i64);
            }
        }
        f.write_str(&out)
    }
}
