//! Text syntax for scalars, polynomials, truncated series and series
//! descriptors.
//!
//! ```text
//! expr   := ('-')? term (('+' | '-') term)*
//! term   := factor (('*' | '/') factor)*
//! factor := base ('^' uint)?
//! base   := int | 'zeta(' uint ')' | 't' | '(' expr ')'
//! ```
//!
//! Division is allowed by nonzero constants only. Series additionally
//! accept `t^-k` and must end with a single `+ O(t^k)` term. A descriptor is
//! `psi(POLY)` optionally followed by `@ zeta(n)^k, m`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use thiserror::Error;

use crate::scalars::{CyclotomicScalar as Scalar, Rational, RootOfUnity};
use crate::series::{LaurentTail, Poly};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("ParseError at byte {offset}: expected {}", expected.join(" | "))]
    Unexpected { offset: usize, expected: Vec<&'static str> },
    #[error("ParseError at byte {offset}: {reason}")]
    Invalid { offset: usize, reason: String },
}

impl ParseError {
    pub fn offset(&self) -> usize {
        match self {
            ParseError::Unexpected { offset, .. } | ParseError::Invalid { offset, .. } => *offset,
        }
    }
}

/// A Laurent polynomial under construction: exponent → coefficient.
#[derive(Clone, Debug, Default)]
struct Terms(BTreeMap<i64, Scalar>);

impl Terms {
    fn constant(c: Scalar) -> Self {
        Self::monomial(c, 0)
    }

    fn monomial(c: Scalar, e: i64) -> Self {
        let mut m = BTreeMap::new();
        if !c.is_zero() {
            m.insert(e, c);
        }
        Terms(m)
    }

    fn add(mut self, other: &Terms, sign: bool) -> Self {
        for (e, c) in &other.0 {
            let cur = self.0.remove(e).unwrap_or_else(Scalar::zero);
            let v = if sign { &cur + c } else { &cur - c };
            if !v.is_zero() {
                self.0.insert(*e, v);
            }
        }
        self
    }

    fn mul(&self, other: &Terms) -> Terms {
        let mut out = Terms::default();
        for (ea, a) in &self.0 {
            for (eb, b) in &other.0 {
                out = out.add(&Terms::monomial(a * b, ea + eb), true);
            }
        }
        out
    }

    fn as_monomial(&self) -> Option<(&Scalar, i64)> {
        if self.0.len() == 1 {
            self.0.iter().next().map(|(e, c)| (c, *e))
        } else {
            None
        }
    }

    fn as_constant(&self) -> Option<Scalar> {
        match self.0.len() {
            0 => Some(Scalar::zero()),
            1 => self.0.get(&0).cloned(),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Mode {
    Scalar,
    Poly,
    Series,
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    mode: Mode,
}

type PResult<T> = Result<T, ParseError>;

impl<'a> Parser<'a> {
    fn new(src: &'a str, mode: Mode) -> Self {
        Parser { src: src.as_bytes(), pos: 0, mode }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, b: u8) -> bool {
        if self.peek() == Some(b) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn eat_word(&mut self, w: &str) -> bool {
        self.skip_ws();
        if self.src[self.pos..].starts_with(w.as_bytes()) {
            self.pos += w.len();
            true
        } else {
            false
        }
    }

    fn unexpected<T>(&mut self, expected: Vec<&'static str>) -> PResult<T> {
        self.skip_ws();
        Err(ParseError::Unexpected { offset: self.pos, expected })
    }

    fn expect(&mut self, b: u8, name: &'static str) -> PResult<()> {
        if self.eat(b) {
            Ok(())
        } else {
            self.unexpected(vec![name])
        }
    }

    fn uint(&mut self) -> PResult<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.unexpected(vec!["uint"]);
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        Ok(text.parse().expect("digits parse"))
    }

    fn small_uint(&mut self) -> PResult<u64> {
        let at = {
            self.skip_ws();
            self.pos
        };
        let n = self.uint()?;
        u64::try_from(n).map_err(|_| ParseError::Invalid { offset: at, reason: "integer too large".into() })
    }

    fn at_end(&mut self) -> PResult<()> {
        if self.peek().is_some() {
            let expected = match self.mode {
                Mode::Scalar => vec!["'+'", "'-'", "'*'", "'/'", "end of input"],
                _ => vec!["'+'", "'-'", "'*'", "'/'", "'^'", "end of input"],
            };
            return self.unexpected(expected);
        }
        Ok(())
    }

    /// Parse an expression; in series mode also returns the O-term exponent.
    fn expr(&mut self, top_level: bool) -> PResult<(Terms, Option<i64>)> {
        if top_level && self.mode == Mode::Series && self.peek() == Some(b'O') {
            let prec = self.big_o()?;
            return Ok((Terms::default(), Some(prec)));
        }
        let negate = self.eat(b'-');
        let mut acc = self.term()?;
        if negate {
            acc = Terms::default().add(&acc, false);
        }
        loop {
            let sign = if self.eat(b'+') {
                true
            } else if self.eat(b'-') {
                false
            } else {
                return Ok((acc, None));
            };
            if top_level && self.mode == Mode::Series && sign && self.peek() == Some(b'O') {
                let prec = self.big_o()?;
                return Ok((acc, Some(prec)));
            }
            let t = self.term()?;
            acc = acc.add(&t, sign);
        }
    }

    fn big_o(&mut self) -> PResult<i64> {
        self.expect(b'O', "'O'")?;
        self.expect(b'(', "'('")?;
        self.expect(b't', "'t'")?;
        self.expect(b'^', "'^'")?;
        let e = self.signed_exponent()?;
        self.expect(b')', "')'")?;
        Ok(e)
    }

    fn signed_exponent(&mut self) -> PResult<i64> {
        let neg = self.eat(b'-');
        let at = self.pos;
        let n = self.small_uint()?;
        let n = i64::try_from(n).map_err(|_| ParseError::Invalid { offset: at, reason: "exponent too large".into() })?;
        Ok(if neg { -n } else { n })
    }

    fn term(&mut self) -> PResult<Terms> {
        let mut acc = self.factor()?;
        loop {
            if self.eat(b'*') {
                let f = self.factor()?;
                acc = acc.mul(&f);
            } else if self.peek() == Some(b'/') {
                let at = self.pos;
                self.pos += 1;
                let f = self.factor()?;
                let c = f.as_constant().ok_or_else(|| ParseError::Invalid {
                    offset: at,
                    reason: "division by a non-constant".into(),
                })?;
                let inv = c.inv().map_err(|_| ParseError::Invalid { offset: at, reason: "DivisionByZero".into() })?;
                acc = acc.mul(&Terms::constant(inv));
            } else {
                return Ok(acc);
            }
        }
    }

    fn factor(&mut self) -> PResult<Terms> {
        let base = self.base()?;
        if !self.eat(b'^') {
            return Ok(base);
        }
        self.skip_ws();
        let at = self.pos;
        let negative = self.mode == Mode::Series && self.peek() == Some(b'-');
        let e = if negative { self.signed_exponent()? } else { self.small_uint()? as i64 };
        if e >= 0 {
            let mut out = Terms::constant(Scalar::one());
            for _ in 0..e {
                out = out.mul(&base);
            }
            return Ok(out);
        }
        let Some((c, k)) = base.as_monomial() else {
            return Err(ParseError::Invalid { offset: at, reason: "negative power of a non-monomial".into() });
        };
        let inv = c.inv().map_err(|_| ParseError::Invalid { offset: at, reason: "DivisionByZero".into() })?;
        let inv = inv.pow(-e).map_err(|err| ParseError::Invalid { offset: at, reason: err.to_string() })?;
        Ok(Terms::monomial(inv, k * e))
    }

    fn base(&mut self) -> PResult<Terms> {
        let expected_base = |mode: Mode| match mode {
            Mode::Scalar => vec!["int", "'zeta('", "'('"],
            _ => vec!["int", "'zeta('", "'t'", "'('"],
        };
        match self.peek() {
            Some(b'0'..=b'9') => {
                let n = self.uint()?;
                Ok(Terms::constant(Scalar::from_rational(Rational::from_integer(n))))
            }
            Some(b'(') => {
                self.pos += 1;
                let (inner, _) = self.expr(false)?;
                self.expect(b')', "')'")?;
                Ok(inner)
            }
            Some(b'z') => {
                let at = self.pos;
                if !self.eat_word("zeta(") {
                    return self.unexpected(vec!["'zeta('"]);
                }
                let n = self.small_uint()?;
                self.expect(b')', "')'")?;
                if n == 0 {
                    return Err(ParseError::Invalid { offset: at, reason: "zeta(0) is undefined".into() });
                }
                let z = RootOfUnity::new(n, 1)
                    .to_scalar()
                    .map_err(|err| ParseError::Invalid { offset: at, reason: err.to_string() })?;
                Ok(Terms::constant(z))
            }
            Some(b't') if self.mode != Mode::Scalar => {
                self.pos += 1;
                Ok(Terms::monomial(Scalar::one(), 1))
            }
            _ => {
                let e = expected_base(self.mode);
                self.unexpected(e)
            }
        }
    }
}

fn terms_to_poly(t: &Terms) -> Poly {
    let deg = t.0.keys().next_back().copied().unwrap_or(0).max(0) as usize;
    let mut v = vec![Scalar::zero(); deg + 1];
    for (e, c) in &t.0 {
        v[*e as usize] = c.clone();
    }
    Poly::new(v)
}

pub fn parse_scalar(src: &str) -> Result<Scalar, ParseError> {
    let mut p = Parser::new(src, Mode::Scalar);
    let (t, _) = p.expr(true)?;
    p.at_end()?;
    Ok(t.as_constant().expect("scalar mode has no t"))
}

pub fn parse_poly(src: &str) -> Result<Poly, ParseError> {
    let mut p = Parser::new(src, Mode::Poly);
    let (t, _) = p.expr(true)?;
    p.at_end()?;
    Ok(terms_to_poly(&t))
}

/// Parse `c t^k + … + O(t^p)`; every listed exponent must exceed `p`.
pub fn parse_series(src: &str) -> Result<LaurentTail, ParseError> {
    let mut p = Parser::new(src, Mode::Series);
    let (t, prec) = p.expr(true)?;
    let Some(prec) = prec else {
        return p.unexpected(vec!["'+ O(t^k)'"]);
    };
    p.at_end()?;
    if let Some((e, _)) = t.0.iter().next() {
        if *e <= prec {
            return Err(ParseError::Invalid { offset: 0, reason: format!("term t^{e} lies inside O(t^{prec})") });
        }
    }
    let terms: Vec<(i64, Scalar)> = t.0.into_iter().collect();
    Ok(LaurentTail::from_terms(&terms, prec))
}

/// `ψ_f(ζ t^m)` for the base solution `ψ_f` of `f`, as written in
/// certificates and on the command line.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeriesSpec {
    pub f: Poly,
    pub zeta: RootOfUnity,
    pub m: u32,
}

impl SeriesSpec {
    pub fn psi(f: Poly) -> Self {
        SeriesSpec { f, zeta: RootOfUnity::one(), m: 1 }
    }
}

impl fmt::Display for SeriesSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "psi({})", self.f)?;
        if self.zeta != RootOfUnity::one() || self.m != 1 {
            write!(f, " @ {}, {}", self.zeta, self.m)?;
        }
        Ok(())
    }
}

pub fn parse_series_spec(src: &str) -> Result<SeriesSpec, ParseError> {
    let mut p = Parser::new(src, Mode::Poly);
    if !p.eat_word("psi") {
        return p.unexpected(vec!["'psi('"]);
    }
    p.expect(b'(', "'('")?;
    let (t, _) = p.expr(false)?;
    p.expect(b')', "')'")?;
    let f = terms_to_poly(&t);
    let mut spec = SeriesSpec::psi(f);
    if p.eat(b'@') {
        spec.zeta = if p.eat(b'1') {
            RootOfUnity::one()
        } else {
            if !p.eat_word("zeta(") {
                return p.unexpected(vec!["'zeta('", "'1'"]);
            }
            let n = p.small_uint()?;
            p.expect(b')', "')'")?;
            let k = if p.eat(b'^') { p.small_uint()? } else { 1 };
            if n == 0 {
                return Err(ParseError::Invalid { offset: p.pos, reason: "zeta(0) is undefined".into() });
            }
            RootOfUnity::new(n, (k % n) as i64)
        };
        p.expect(b',', "','")?;
        let at = p.pos;
        let m = p.small_uint()?;
        spec.m = u32::try_from(m)
            .ok()
            .filter(|m| *m >= 1)
            .ok_or_else(|| ParseError::Invalid { offset: at, reason: "m must be a positive integer".into() })?;
    }
    if p.peek().is_some() {
        return p.unexpected(vec!["'@'", "end of input"]);
    }
    Ok(spec)
}
