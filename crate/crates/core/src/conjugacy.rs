//! Local conjugacies at infinity, Chebyshev models and the exceptional
//! classification, power-substitution extraction, and commuting pairs.

use std::fmt;

use thiserror::Error;

use crate::scalars::{CyclotomicScalar as Scalar, RootOfUnity, ScalarError};
use crate::series::{unit_power_next, LaurentTail, MdElement, Poly, SeriesError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConjugacyError {
    #[error("DegreeTooLow: need degree at least 2, got {degree}")]
    DegreeTooLow { degree: usize },
    #[error("WindowTooSmall: window {window} is below the minimum of 2")]
    WindowTooSmall { window: usize },
    #[error("LeadingRootUnavailable: no cyclotomic {root}-th root of 1/({leading})")]
    LeadingRootUnavailable { leading: String, root: usize },
    #[error("TwistNotAdmissible: {twist} is not a {root}-th root of unity")]
    TwistNotAdmissible { twist: RootOfUnity, root: usize },
    #[error("WitnessNotRepresentable: conjugate to the {kind} model, but the witness needs a non-cyclotomic scalar")]
    WitnessNotRepresentable { kind: MapKind },
    #[error("SupportViolation: nonzero coefficient at t^{exponent}, not a multiple of {step}")]
    SupportViolation { exponent: i64, step: u32 },
    #[error("FunctionalEquationViolation: residual nonzero at t^{exponent}")]
    FunctionalEquationViolation { exponent: i64 },
    #[error("ValuationMismatch: expected leading exponent {expected}, found {found}")]
    ValuationMismatch { expected: i64, found: i64 },
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

/// A solution `ψ ∈ tK[[1/t]]` of `ψ(t^d) = f(ψ(t))`, truncated.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PsiSeries {
    tail: LaurentTail,
    source: Poly,
    twist: RootOfUnity,
    residual_checked_to: i64,
}

impl PsiSeries {
    pub fn tail(&self) -> &LaurentTail {
        &self.tail
    }

    pub fn into_tail(self) -> LaurentTail {
        self.tail
    }

    pub fn source(&self) -> &Poly {
        &self.source
    }

    /// The twist relative to the base solution: this series is `ψ_0(ζ t)`.
    pub fn twist(&self) -> RootOfUnity {
        self.twist
    }

    /// Lowest exponent at which `ψ(t^d) - f(ψ)` was checked to vanish; every
    /// exponent from `d` down to this one is zero.
    pub fn residual_checked_to(&self) -> i64 {
        self.residual_checked_to
    }

    pub fn window(&self) -> usize {
        self.tail.window()
    }
}

fn degree_at_least_two(f: &Poly) -> Result<u32, ConjugacyError> {
    match f.degree() {
        Some(d) if d >= 2 => Ok(d as u32),
        d => Err(ConjugacyError::DegreeTooLow { degree: d.unwrap_or(0) }),
    }
}

/// Check `ψ(t^d) = f(ψ)` on every exponent both sides know exactly and
/// return the lowest exponent checked.
fn check_functional_equation(f: &Poly, psi: &LaurentTail) -> Result<i64, ConjugacyError> {
    let d = f.deg() as u32;
    let lhs = psi.substitute_power(d);
    let rhs = LaurentTail::compose_poly(f, psi)?;
    let residual = lhs.sub(&rhs);
    if let Some(e) = residual.support().next() {
        return Err(ConjugacyError::FunctionalEquationViolation { exponent: e });
    }
    Ok(residual.prec() + 1)
}

/// Solve `ψ(t^d) = f(ψ(t))` with `window` coefficients at `t^1 … t^{2-window}`.
///
/// The base solution uses a fixed `(d-1)`-th root `c` of `1/b_d` as leading
/// coefficient; `twist` (a `(d-1)`-th root of unity `ζ`) selects `ψ(ζ t)`.
pub fn solve_psi(f: &Poly, window: usize, twist: RootOfUnity) -> Result<PsiSeries, ConjugacyError> {
    let d = degree_at_least_two(f)?;
    if window < 2 {
        return Err(ConjugacyError::WindowTooSmall { window });
    }
    let root = (d - 1) as usize;
    if (d as u64 - 1) % twist.order() != 0 {
        return Err(ConjugacyError::TwistNotAdmissible { twist, root });
    }
    let lead = f.leading().expect("degree checked");
    let base = lead
        .inv()?
        .nth_root(d - 1)
        .ok_or_else(|| ConjugacyError::LeadingRootUnavailable { leading: lead.to_string(), root })?;
    let c = &base * &twist.to_scalar()?;

    // ψ = c t H(1/t). Matching t^{d-i} brings in h_i linearly through
    // H^d with multiplier d·b_d·c^d = d·c; the lower powers H^k only need
    // coefficients already known.
    let du = d as usize;
    let mut scaled = Vec::with_capacity(du + 1);
    let mut c_pow = Scalar::one();
    for k in 0..=du {
        scaled.push(&f.coeff(k) * &c_pow);
        c_pow = &c_pow * &c;
    }
    let pivot = &c * &Scalar::from_int(d as i64);
    let mut h = vec![Scalar::one()];
    let mut powers: Vec<Vec<Scalar>> = vec![vec![Scalar::one()]; du + 1];
    for i in 1..window {
        let e = d as i64 - i as i64;
        let mut rest = if e == 0 { f.coeff(0) } else { Scalar::zero() };
        for k in 1..du {
            let idx = i as i64 - d as i64 + k as i64;
            if idx < 0 || scaled[k].is_zero() {
                continue;
            }
            let g = &mut powers[k];
            while g.len() <= idx as usize {
                let next = unit_power_next(&h, g, k as i64);
                g.push(next);
            }
            rest = &rest + &(&scaled[k] * &g[idx as usize]);
        }
        // h_i is not yet in `h`, so this is G_d[i] without its d·h_i part
        let partial = unit_power_next(&h, &powers[du], d as i64);
        rest = &rest + &(&scaled[du] * &partial);
        let lhs = if e % d as i64 == 0 {
            &c * &h[(1 - e / d as i64) as usize]
        } else {
            Scalar::zero()
        };
        let hi = (&lhs - &rest).checked_div(&pivot)?;
        powers[du].push(&partial + &(&hi * &Scalar::from_int(d as i64)));
        h.push(hi);
    }
    let tail = LaurentTail::new(1, h.iter().map(|x| x * &c).collect());
    debug_assert_eq!(tail.prec(), 1 - window as i64);
    let residual_checked_to = check_functional_equation(f, &tail)?;
    Ok(PsiSeries { tail, source: f.clone(), twist, residual_checked_to })
}

/// All `d - 1` solutions, `ψ_0(ζ t)` over the `(d-1)`-th roots of unity `ζ`.
pub fn enumerate_psi_choices(f: &Poly, window: usize) -> Result<Vec<PsiSeries>, ConjugacyError> {
    let base = solve_psi(f, window, RootOfUnity::one())?;
    let d = f.deg() as u32;
    RootOfUnity::all_of_order_dividing((d - 1) as u64)
        .into_iter()
        .map(|zeta| {
            let u = MdElement::new(zeta, 1, d)?;
            Ok(PsiSeries {
                tail: crate::series::substitute_md(&base.tail, &u)?,
                source: f.clone(),
                twist: zeta,
                residual_checked_to: base.residual_checked_to,
            })
        })
        .collect()
}

/// The Chebyshev polynomial `C_d` with `C_d(t + 1/t) = t^d + t^{-d}`.
/// `C_0` is the constant 2.
pub fn chebyshev(d: u32) -> Poly {
    let mut prev = Poly::from_ints(&[2]);
    let mut cur = Poly::t();
    if d == 0 {
        return prev;
    }
    for _ in 1..d {
        let next = &(&Poly::t() * &cur) - &prev;
        prev = cur;
        cur = next;
    }
    cur
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MapKind {
    PowerMap,
    ChebyshevPlus,
    ChebyshevMinus,
    Disintegrated,
}

impl fmt::Display for MapKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MapKind::PowerMap => "PowerMap",
            MapKind::ChebyshevPlus => "ChebyshevPlus",
            MapKind::ChebyshevMinus => "ChebyshevMinus",
            MapKind::Disintegrated => "Disintegrated",
        })
    }
}

impl MapKind {
    /// The model map of degree `d`, or `None` for disintegrated maps.
    pub fn model(&self, d: u32) -> Option<Poly> {
        match self {
            MapKind::PowerMap => Some(Poly::monomial(Scalar::one(), d as usize)),
            MapKind::ChebyshevPlus => Some(chebyshev(d)),
            MapKind::ChebyshevMinus => Some(-&chebyshev(d)),
            MapKind::Disintegrated => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Classification {
    pub kind: MapKind,
    /// `l(t) = a t + b` with `l ∘ f ∘ l^{-1}` equal to the model.
    pub witness: Option<Poly>,
}

/// `l ∘ f ∘ l^{-1}` for a linear `l`.
pub fn conjugate(f: &Poly, l: &Poly) -> Result<Poly, ScalarError> {
    Ok(l.compose(&f.compose(&l.linear_inverse()?)))
}

/// Decision result: the kind plus the scale data needed for a witness.
enum Decision {
    Power { lead: Scalar },
    Chebyshev { kind: MapKind, scale: Option<Scalar> },
    Neither,
}

/// Decide the kind of a centered map `F` (no `t^{d-1}` term). Conjugacies
/// between centered maps are scalings `a t`, which send `F_j` to `a^{1-j} F_j`.
fn decide_centered(big_f: &Poly) -> Result<Decision, ScalarError> {
    let d = big_f.deg();
    let lead = big_f.coeff(d);
    if (0..d).all(|j| big_f.coeff(j).is_zero()) {
        return Ok(Decision::Power { lead });
    }
    let sub = big_f.coeff(d - 2);
    if sub.is_zero() {
        return Ok(Decision::Neither);
    }
    // a^2 from the two top coefficients: a^2 F_{d-2} / F_d = -d
    let w = -&(&lead * &Scalar::from_int(d as i64)).checked_div(&sub)?;
    let cheb = chebyshev(d as u32);
    for j in 0..d {
        let fj = big_f.coeff(j);
        if (d - j) % 2 == 1 {
            if !fj.is_zero() {
                return Ok(Decision::Neither);
            }
            continue;
        }
        // F_j / F_d = C_{d,j} · w^{(j-d)/2}
        let expected = &cheb.coeff(j) * &w.pow(-(((d - j) / 2) as i64))?;
        if fj.checked_div(&lead)? != expected {
            return Ok(Decision::Neither);
        }
    }
    if d % 2 == 1 {
        // F_d = ε a^{d-1} = ε w^{(d-1)/2}
        let eps = lead.checked_div(&w.pow(((d - 1) / 2) as i64)?)?;
        let kind = if eps.is_one() {
            MapKind::ChebyshevPlus
        } else if (-&eps).is_one() {
            MapKind::ChebyshevMinus
        } else {
            return Ok(Decision::Neither);
        };
        return Ok(Decision::Chebyshev { kind, scale: w.nth_root(2) });
    }
    // even degree: ±C_d are conjugate by t ↦ -t, and a = F_d / w^{(d-2)/2}
    let a = lead.checked_div(&w.pow(((d - 2) / 2) as i64)?)?;
    if &a * &a != w {
        return Ok(Decision::Neither);
    }
    Ok(Decision::Chebyshev { kind: MapKind::ChebyshevPlus, scale: Some(a) })
}

fn center(f: &Poly) -> Result<(Scalar, Poly), ScalarError> {
    let d = f.deg();
    let shift = f.coeff(d - 1).checked_div(&(&f.coeff(d) * &Scalar::from_int(d as i64)))?;
    // F(t) = f(t - s) + s
    let big_f = &f.compose(&Poly::linear(Scalar::one(), -&shift)) + &Poly::constant(shift.clone());
    Ok((shift, big_f))
}

/// Decide power map, `±C_d`, or disintegrated, without producing a witness.
pub fn classify_kind(f: &Poly) -> Result<MapKind, ConjugacyError> {
    degree_at_least_two(f)?;
    let (_, big_f) = center(f)?;
    Ok(match decide_centered(&big_f)? {
        Decision::Power { .. } => MapKind::PowerMap,
        Decision::Chebyshev { kind, .. } => kind,
        Decision::Neither => MapKind::Disintegrated,
    })
}

/// Classify `f` up to affine conjugacy and produce the conjugating map.
pub fn classify(f: &Poly) -> Result<Classification, ConjugacyError> {
    let d = degree_at_least_two(f)?;
    let (shift, big_f) = center(f)?;
    let (kind, scale) = match decide_centered(&big_f)? {
        Decision::Neither => return Ok(Classification { kind: MapKind::Disintegrated, witness: None }),
        // a^{1-d} F_d = 1
        Decision::Power { lead } => (MapKind::PowerMap, lead.nth_root(d - 1)),
        Decision::Chebyshev { kind, scale } => (kind, scale),
    };
    let a = scale.ok_or(ConjugacyError::WitnessNotRepresentable { kind })?;
    // l(t) = a (t + s)
    let b = &a * &shift;
    Ok(Classification { kind, witness: Some(Poly::linear(a, b)) })
}

/// From `L` with `v_∞(L) = D` and `L(t^d) = f(L)`, recover `ψ` with
/// `L(t) = ψ(t^D)` and check `ψ(t^d) = f(ψ)`.
pub fn extract_power_substitution(l: &LaurentTail, step: u32, f: &Poly) -> Result<PsiSeries, ConjugacyError> {
    degree_at_least_two(f)?;
    let top = l.valuation()?;
    if top != step as i64 {
        return Err(ConjugacyError::ValuationMismatch { expected: step as i64, found: top });
    }
    let step_i = step as i64;
    if let Some(e) = l.support().find(|e| e % step_i != 0) {
        return Err(ConjugacyError::SupportViolation { exponent: e, step });
    }
    let prec = l.prec().div_euclid(step_i);
    let coeffs = (prec + 1..=1)
        .rev()
        .map(|k| l.coeff(k * step_i).expect("within window"))
        .collect();
    let tail = LaurentTail::new(1, coeffs).with_prec(prec)?;
    let residual_checked_to = check_functional_equation(f, &tail)?;
    Ok(PsiSeries { tail, source: f.clone(), twist: RootOfUnity::one(), residual_checked_to })
}

pub fn commutes(f: &Poly, g: &Poly) -> bool {
    f.compose(g) == g.compose(f)
}

/// Smallest `(m, n)`, ordered by `m`, with `f^m = g^n` and common degree at
/// most `max_degree`. Iterates are only built when the degrees agree.
pub fn common_iterate_search(f: &Poly, g: &Poly, max_degree: u64) -> Result<Option<(u32, u32)>, ConjugacyError> {
    let df = degree_at_least_two(f)? as u64;
    let dg = degree_at_least_two(g)? as u64;
    let mut fm = f.clone();
    let mut deg_f = df;
    let mut m = 1u32;
    while deg_f <= max_degree {
        let (mut n, mut deg_g) = (1u32, dg);
        while deg_g < deg_f {
            deg_g *= dg;
            n += 1;
        }
        if deg_g == deg_f && fm == g.iterate(n) {
            return Ok(Some((m, n)));
        }
        m += 1;
        deg_f = match deg_f.checked_mul(df) {
            Some(x) => x,
            None => break,
        };
        if deg_f <= max_degree {
            fm = f.compose(&fm);
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::{primitive_root, Rational};
    use num_traits::{One, Zero};
    use proptest::prelude::*;

    fn p(c: &[i64]) -> Poly {
        Poly::from_ints(c)
    }

    fn q(n: i64, d: i64) -> Scalar {
        Scalar::from_ratio(n, d)
    }

    /// Independent order-by-order solver for monic `t^2 + c`: unknowns
    /// `x[k]` = coefficient of `t^{1-k}`, matched directly against
    /// `ψ(t^2) = ψ(t)^2 + c` with plain rationals.
    fn oracle_quadratic(c: Rational, n: usize) -> Vec<Rational> {
        let mut x = vec![Rational::one()];
        for k in 1..n {
            // exponent 2 - k of ψ^2 holds 2 x[0] x[k] + Σ_{0<i<k} x[i] x[k-i]
            let e = 2 - k as i64;
            let mut rhs = Rational::zero();
            if e % 2 == 0 {
                let idx = (1 - e / 2) as usize;
                rhs = x[idx].clone();
            }
            if e == 0 {
                rhs -= &c;
            }
            let mut cross = Rational::zero();
            for i in 1..k {
                cross += &x[i] * &x[k - i];
            }
            x.push((rhs - cross) / Rational::from_integer(2.into()));
        }
        x
    }

    #[test]
    fn oracle_parity_and_values() {
        let x = oracle_quadratic(Rational::one(), 12);
        for k in (0..12).filter(|k| k % 2 == 1) {
            assert!(x[k].is_zero(), "even exponent 1-{k} must vanish");
        }
        assert_eq!(x[2], Rational::new((-1).into(), 2.into()));
        assert_eq!(x[4], Rational::new((-3).into(), 8.into()));
        assert_eq!(x[6], Rational::new((-3).into(), 16.into()));
    }

    #[test]
    fn psi_matches_oracle() {
        for c in [1i64, -2, 3, -1] {
            let f = p(&[c, 0, 1]);
            let psi = solve_psi(&f, 40, RootOfUnity::one()).unwrap();
            let x = oracle_quadratic(Rational::from_integer(c.into()), 40);
            for (k, xk) in x.iter().enumerate() {
                assert_eq!(psi.tail().coeff(1 - k as i64).unwrap(), Scalar::from_rational(xk.clone()));
            }
        }
    }

    #[test]
    fn psi_known_values() {
        let psi = solve_psi(&p(&[0, 0, 0, 1]), 20, RootOfUnity::one()).unwrap();
        assert_eq!(psi.tail(), &LaurentTail::monomial(Scalar::one(), 1, -19));
        let psi = solve_psi(&p(&[-2, 0, 1]), 20, RootOfUnity::one()).unwrap();
        assert_eq!(psi.tail(), &LaurentTail::from_terms(&[(1, q(1, 1)), (-1, q(1, 1))], -19));
        let psi = solve_psi(&p(&[1, 0, 1]), 64, RootOfUnity::one()).unwrap();
        assert_eq!(psi.tail().coeff(-1).unwrap(), q(-1, 2));
        assert_eq!(psi.tail().coeff(-3).unwrap(), q(-3, 8));
        assert_eq!(psi.tail().coeff(-5).unwrap(), q(-3, 16));
        assert_eq!(psi.residual_checked_to(), 2 - 64 + 1);
        assert_eq!(psi.window(), 64);
    }

    #[test]
    fn psi_non_monic() {
        // 4 t^3: c^2 = 1/4, c = 1/2 works
        let f = p(&[1, 0, 0, 4]);
        let psi = solve_psi(&f, 16, RootOfUnity::one()).unwrap();
        assert_eq!(psi.tail().leading().unwrap(), &q(1, 2));
        let f = p(&[0, 0, 0, 2]);
        assert!(matches!(
            solve_psi(&f, 16, RootOfUnity::one()),
            Err(ConjugacyError::LeadingRootUnavailable { .. })
        ));
        // -t^2: c = -1
        let psi = solve_psi(&p(&[0, 0, -1]), 8, RootOfUnity::one()).unwrap();
        assert_eq!(psi.tail().leading().unwrap(), &q(-1, 1));
    }

    #[test]
    fn psi_errors() {
        assert!(matches!(solve_psi(&p(&[0, 1]), 8, RootOfUnity::one()), Err(ConjugacyError::DegreeTooLow { degree: 1 })));
        assert!(matches!(solve_psi(&p(&[1, 0, 1]), 1, RootOfUnity::one()), Err(ConjugacyError::WindowTooSmall { window: 1 })));
        assert!(matches!(
            solve_psi(&p(&[1, 0, 1]), 8, RootOfUnity::new(2, 1)),
            Err(ConjugacyError::TwistNotAdmissible { .. })
        ));
    }

    #[test]
    fn twisted_solution() {
        let f = p(&[0, 1, 0, 1]);
        let psi = solve_psi(&f, 16, RootOfUnity::new(2, 1)).unwrap();
        assert_eq!(psi.tail().leading().unwrap(), &q(-1, 1));
    }

    #[test]
    fn enumerate_counts() {
        assert_eq!(enumerate_psi_choices(&p(&[1, 0, 1]), 16).unwrap().len(), 1);
        let cubic = enumerate_psi_choices(&p(&[0, 1, 0, 1]), 16).unwrap();
        assert_eq!(cubic.len(), 2);
        assert_eq!(cubic[1].tail(), &cubic[0].tail().substitute(&RootOfUnity::new(2, 1), 1).unwrap());
        for s in &cubic {
            check_functional_equation(s.source(), s.tail()).unwrap();
        }
        let quartic = enumerate_psi_choices(&p(&[0, 0, 0, 0, 1]), 8).unwrap();
        let z = primitive_root(3).unwrap();
        let leads: Vec<_> = quartic.iter().map(|s| s.tail().leading().unwrap().clone()).collect();
        assert_eq!(leads, vec![Scalar::one(), z.clone(), &z * &z]);
    }

    #[test]
    fn enumerate_matches_direct_twists() {
        let f = p(&[2, -1, 0, 0, 1]);
        let all = enumerate_psi_choices(&f, 12).unwrap();
        for s in &all {
            assert_eq!(s, &solve_psi(&f, 12, s.twist()).unwrap());
        }
    }

    #[test]
    fn chebyshev_small() {
        assert_eq!(chebyshev(1), p(&[0, 1]));
        assert_eq!(chebyshev(2), p(&[-2, 0, 1]));
        assert_eq!(chebyshev(3), p(&[0, -3, 0, 1]));
        assert_eq!(chebyshev(3).to_string(), "t^3 - 3*t");
    }

    #[test]
    fn chebyshev_identity() {
        let s = LaurentTail::from_terms(&[(1, q(1, 1)), (-1, q(1, 1))], -80);
        for d in 1..=12u32 {
            let r = LaurentTail::compose_poly(&chebyshev(d), &s).unwrap();
            let di = d as i64;
            assert_eq!(r, LaurentTail::from_terms(&[(di, q(1, 1)), (-di, q(1, 1))], r.prec()));
        }
    }

    #[test]
    fn chebyshev_commute() {
        for d in 1..=5 {
            for e in 1..=5 {
                assert_eq!(chebyshev(d).compose(&chebyshev(e)), chebyshev(d * e));
            }
        }
    }

    #[test]
    fn classify_examples() {
        let c = classify(&p(&[0, 2, 1])).unwrap();
        assert_eq!(c.kind, MapKind::PowerMap);
        assert_eq!(c.witness.unwrap(), p(&[1, 1]));
        let c = classify(&p(&[-2, 0, 1])).unwrap();
        assert_eq!(c.kind, MapKind::ChebyshevPlus);
        assert_eq!(c.witness.unwrap(), p(&[0, 1]));
        assert_eq!(classify(&p(&[1, 0, 1])).unwrap().kind, MapKind::Disintegrated);
        assert_eq!(classify(&p(&[1, 0, 1])).unwrap().witness, None);
        assert_eq!(classify(&p(&[0, 3, 0, -1])).unwrap().kind, MapKind::ChebyshevMinus);
        assert_eq!(classify(&p(&[0, 1, 0, 1])).unwrap().kind, MapKind::Disintegrated);
    }

    #[test]
    fn classify_witness_conjugates() {
        for f in [p(&[0, 2, 1]), p(&[-2, 0, 1]), p(&[0, 3, 0, -1]), p(&[2, 0, -4, 0, 1]), p(&[6, 12, 6, 1])] {
            let c = classify(&f).unwrap();
            let l = c.witness.unwrap();
            let model = c.kind.model(f.deg() as u32).unwrap();
            assert_eq!(conjugate(&f, &l).unwrap(), model, "f = {f}");
        }
    }

    #[test]
    fn classify_needs_root() {
        // 2 t^3 is conjugate to t^3 only through a = √2
        let f = p(&[0, 0, 0, 2]);
        assert!(matches!(
            classify(&f),
            Err(ConjugacyError::WitnessNotRepresentable { kind: MapKind::PowerMap })
        ));
        assert_eq!(classify_kind(&f).unwrap(), MapKind::PowerMap);
        // C_3 scaled by a = √2: F_3 = 1/2, F_1 = -3
        let f = Poly::new(vec![q(0, 1), q(-3, 1), q(0, 1), q(1, 2)]);
        assert_eq!(classify_kind(&f).unwrap(), MapKind::ChebyshevPlus);
        assert!(matches!(classify(&f), Err(ConjugacyError::WitnessNotRepresentable { .. })));
        // a = i gives a representable witness
        let i = primitive_root(4).unwrap();
        let l = Poly::linear(i.clone(), q(1, 1));
        let f = conjugate(&chebyshev(3), &l.linear_inverse().unwrap()).unwrap();
        let c = classify(&f).unwrap();
        assert_eq!(conjugate(&f, &c.witness.unwrap()).unwrap(), c.kind.model(3).unwrap());
    }

    #[test]
    fn extract_examples() {
        let f = p(&[-2, 0, 1]);
        let psi = solve_psi(&f, 24, RootOfUnity::one()).unwrap();
        let got = extract_power_substitution(psi.tail(), 1, &f).unwrap();
        assert_eq!(got.tail(), psi.tail());

        let l = LaurentTail::from_terms(&[(2, q(1, 1)), (0, q(2, 1)), (-2, q(1, 1))], -40);
        let got = extract_power_substitution(&l, 2, &p(&[4, -4, 1])).unwrap();
        assert_eq!(got.tail(), &LaurentTail::from_terms(&[(1, q(1, 1)), (0, q(2, 1)), (-1, q(1, 1))], -20));

        let bad = LaurentTail::from_terms(&[(3, q(1, 1)), (1, q(1, 1))], -10);
        assert!(matches!(
            extract_power_substitution(&bad, 3, &p(&[0, 0, 1])),
            Err(ConjugacyError::SupportViolation { exponent: 1, step: 3 })
        ));
        let wrong_f = extract_power_substitution(&l, 2, &p(&[0, 0, 1]));
        assert!(matches!(wrong_f, Err(ConjugacyError::FunctionalEquationViolation { .. })));
    }

    #[test]
    fn commuting_examples() {
        assert!(commutes(&p(&[0, 0, 1]), &p(&[0, 0, 0, 1])));
        assert!(commutes(&chebyshev(2), &chebyshev(3)));
        assert!(!commutes(&p(&[1, 0, 1]), &p(&[0, 0, 0, 1])));
    }

    #[test]
    fn common_iterates() {
        assert_eq!(common_iterate_search(&p(&[0, 0, 1]), &p(&[0, 0, 0, 0, 1]), 100).unwrap(), Some((2, 1)));
        assert_eq!(common_iterate_search(&chebyshev(2), &chebyshev(3), 1000).unwrap(), None);
        let f = p(&[1, 0, 1]);
        assert_eq!(common_iterate_search(&f, &f, 10).unwrap(), Some((1, 1)));
        assert_eq!(common_iterate_search(&f, &f.iterate(2), 16).unwrap(), Some((2, 1)));
        assert_eq!(common_iterate_search(&f, &p(&[2, 0, 1]), 64).unwrap(), None);
    }

    #[test]
    fn commuting_pair_shares_psi() {
        // f and f∘f commute with a common iterate; some twists agree.
        let f = p(&[0, 1, 0, 1]);
        let g = f.iterate(2);
        let a = enumerate_psi_choices(&f, 10).unwrap();
        let b = enumerate_psi_choices(&g, 10).unwrap();
        assert!(a.iter().any(|x| b.iter().any(|y| x.tail() == y.tail())));
    }

    fn arb_monic(max_deg: usize) -> impl Strategy<Value = Poly> {
        (2..=max_deg)
            .prop_flat_map(|d| (prop::collection::vec((-4i64..=4, 1i64..=3), d), Just(d)))
            .prop_map(|(c, d)| {
                let mut v: Vec<Scalar> = c.into_iter().map(|(n, m)| q(n, m)).collect();
                v.push(Scalar::one());
                debug_assert_eq!(v.len(), d + 1);
                Poly::new(v)
            })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn residual_vanishes(f in arb_monic(4)) {
            let psi = solve_psi(&f, 14, RootOfUnity::one()).unwrap();
            let d = f.deg() as i64;
            prop_assert_eq!(psi.residual_checked_to(), d - 14 + 1);
            let r = psi.tail().substitute_power(d as u32)
                .sub(&LaurentTail::compose_poly(&f, psi.tail()).unwrap());
            prop_assert!(r.is_zero());
        }

        #[test]
        fn choices_are_distinct_and_closed(f in arb_monic(4)) {
            let all = enumerate_psi_choices(&f, 8).unwrap();
            let d = f.deg() as u64;
            prop_assert_eq!(all.len() as u64, d - 1);
            for i in 0..all.len() {
                for j in 0..i {
                    prop_assert_ne!(all[i].tail(), all[j].tail());
                }
            }
            for zeta in RootOfUnity::all_of_order_dividing(d - 1) {
                for s in &all {
                    let moved = s.tail().substitute(&zeta, 1).unwrap();
                    prop_assert!(all.iter().any(|x| x.tail() == &moved));
                }
            }
        }

        #[test]
        fn bottcher_round_trip(f in arb_monic(3)) {
            let psi = solve_psi(&f, 16, RootOfUnity::one()).unwrap();
            let phi = psi.tail().reversion().unwrap();
            let id = LaurentTail::monomial(Scalar::one(), 1, phi.prec());
            prop_assert_eq!(psi.tail().compose(&phi).unwrap(), id.clone());
            prop_assert_eq!(phi.compose(psi.tail()).unwrap().with_prec(phi.prec()).unwrap(), id);
        }

        #[test]
        fn kind_is_conjugation_invariant(
            kind in 0usize..4, d in 2u32..5, a in (1i64..=3, 1i64..=3), b in (-3i64..=3, 1i64..=3), tw in 0i64..4,
        ) {
            let f = match kind {
                0 => Poly::monomial(Scalar::one(), d as usize),
                1 => chebyshev(d),
                2 => -&chebyshev(d),
                _ => &Poly::monomial(Scalar::one(), d as usize) + &p(&[1, 1]),
            };
            let scale = &q(a.0, a.1) * &RootOfUnity::new(4, tw).to_scalar().unwrap();
            let l = Poly::linear(scale, q(b.0, b.1));
            let g = conjugate(&f, &l).unwrap();
            prop_assert_eq!(classify_kind(&g).unwrap(), classify_kind(&f).unwrap());
        }

        #[test]
        fn chebyshev_compose(d in 1u32..=8, e in 1u32..=8) {
            prop_assert_eq!(chebyshev(d).compose(&chebyshev(e)), chebyshev(d * e));
            prop_assert_eq!(chebyshev(e).compose(&chebyshev(d)), chebyshev(d * e));
        }
    }
}
