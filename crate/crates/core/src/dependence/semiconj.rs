//! Semiconjugacies `f^n ∘ π = π ∘ h` and the relations they force.

use crate::conjugacy::{enumerate_psi_choices, extract_power_substitution, solve_psi};
use crate::parse::SeriesSpec;
use crate::scalars::{CyclotomicScalar as Scalar, RootOfUnity, Rational};
use crate::series::{LaurentTail, Poly};

use super::{Certificate, DependenceError, Relation};

/// Whether `f ∘ π = π ∘ h` exactly.
pub fn semiconj_verify(f: &Poly, pi: &Poly, h: &Poly) -> Result<bool, DependenceError> {
    if pi.deg() == 0 {
        return Err(DependenceError::ConstantSemiconjugacy);
    }
    Ok(f.compose(pi) == pi.compose(h))
}

/// A checked semiconjugacy `f^n ∘ π = π ∘ h`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SemiconjWitness {
    f: Poly,
    pi: Poly,
    h: Poly,
    iterate: u32,
}

impl SemiconjWitness {
    pub fn new(f: Poly, pi: Poly, h: Poly, iterate: u32) -> Result<Self, DependenceError> {
        if iterate == 0 || !semiconj_verify(&f.iterate(iterate), &pi, &h)? {
            return Err(DependenceError::NotASemiconjugacy { iterate });
        }
        Ok(SemiconjWitness { f, pi, h, iterate })
    }

    pub fn f(&self) -> &Poly {
        &self.f
    }

    pub fn pi(&self) -> &Poly {
        &self.pi
    }

    pub fn h(&self) -> &Poly {
        &self.h
    }

    pub fn iterate(&self) -> u32 {
        self.iterate
    }
}

/// The relation `X_1 - π(X_2)` between `ψ_{f^n}(α t^D)` and `ψ_h(t)`,
/// `D = deg π`, certified on `window` terms.
///
/// `π(ψ_h)` is `ψ(t^D)` for one of the solutions `ψ` of the equation for
/// `f^n`; the twist `α` picking it out is found by comparison with every
/// `(deg h - 1)`-th root of unity.
pub fn witness_relation(w: &SemiconjWitness, window: usize) -> Result<Certificate, DependenceError> {
    let big_f = w.f.iterate(w.iterate);
    let step = w.pi.deg() as u32;
    let psi_h = solve_psi(&w.h, window, RootOfUnity::one())?;
    let image = LaurentTail::compose_poly(&w.pi, psi_h.tail())?;
    let extracted = extract_power_substitution(&image, step, &big_f)?;
    let common = extracted.window();
    let choices = enumerate_psi_choices(&big_f, common)?;
    let candidates = choices.len();
    let twist = choices
        .iter()
        .find(|c| c.tail() == extracted.tail())
        .map(|c| c.twist())
        .ok_or(DependenceError::TwistNotFound { candidates })?;

    let relation = Relation::var(3, 1)
        .sub(&Relation::univariate(3, 2, &w.pi))
        .normalize();
    let series = vec![
        SeriesSpec { f: big_f, zeta: twist, m: step },
        SeriesSpec::psi(w.h.clone()),
    ];
    Certificate::certify(relation, series, window)
}

/// Every `π` of degree `1..=bound` with `(t² + c) ∘ π = π ∘ (t² + c̃)`,
/// ascending by degree. `π` is monic and unique in each degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadraticSearch {
    pub solutions: Vec<Poly>,
    pub degree_bound: u32,
}

impl QuadraticSearch {
    pub fn lowest(&self) -> Option<&Poly> {
        self.solutions.first()
    }
}

pub fn quadratic_semiconj_search(c: &Rational, c_tilde: &Rational, degree_bound: u32) -> Result<QuadraticSearch, DependenceError> {
    if degree_bound == 0 {
        return Err(DependenceError::DegreeBoundZero);
    }
    let c = Scalar::from_rational(c.clone());
    let h = Poly::new(vec![Scalar::from_rational(c_tilde.clone()), Scalar::zero(), Scalar::one()]);
    let f = Poly::new(vec![c.clone(), Scalar::zero(), Scalar::one()]);
    // (t² + c̃)^m for m ≤ bound
    let mut h_pows = vec![Poly::constant(Scalar::one())];
    for _ in 0..degree_bound {
        let next = h_pows.last().unwrap() * &h;
        h_pows.push(next);
    }
    let two = Scalar::from_int(2);
    let solutions = (1..=degree_bound as usize)
        .filter_map(|k| {
            // p[k - j] from the t^{2k - j} coefficient: 2 p_{k-j} plus terms
            // with already known p's on both sides
            let mut p = vec![Scalar::zero(); k + 1];
            p[k] = Scalar::one();
            for j in 1..=k {
                let e = 2 * k - j;
                let mut rhs = Scalar::zero();
                for (m, pm) in p.iter().enumerate().skip(k - j + 1) {
                    if !pm.is_zero() {
                        rhs = &rhs + &(pm * &h_pows[m].coeff(e));
                    }
                }
                let mut cross = Scalar::zero();
                for i in 1..j {
                    cross = &cross + &(&p[k - i] * &p[k - j + i]);
                }
                if e == 0 {
                    cross = &cross + &c;
                }
                p[k - j] = (&rhs - &cross).checked_div(&two).expect("nonzero");
            }
            let pi = Poly::new(p);
            (f.compose(&pi) == pi.compose(&h)).then_some(pi)
        })
        .collect();
    Ok(QuadraticSearch { solutions, degree_bound })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conjugacy::chebyshev;

    fn p(c: &[i64]) -> Poly {
        Poly::from_ints(c)
    }

    fn q(n: i64) -> Rational {
        Rational::from_integer(n.into())
    }

    #[test]
    fn verify_examples() {
        assert!(semiconj_verify(&p(&[0, 0, 1]), &p(&[0, 0, 0, 1]), &p(&[0, 0, 1])).unwrap());
        assert!(semiconj_verify(&chebyshev(2), &chebyshev(3), &chebyshev(2)).unwrap());
        assert!(!semiconj_verify(&p(&[1, 0, 1]), &p(&[0, 0, 1]), &p(&[1, 0, 1])).unwrap());
        assert_eq!(semiconj_verify(&p(&[1, 0, 1]), &p(&[5]), &p(&[1, 0, 1])), Err(DependenceError::ConstantSemiconjugacy));
    }

    #[test]
    fn witness_validation() {
        let f = p(&[1, 0, 1]);
        assert!(SemiconjWitness::new(f.clone(), Poly::t(), f.clone(), 1).is_ok());
        assert!(SemiconjWitness::new(f.clone(), f.clone(), f.clone(), 1).is_ok());
        assert_eq!(
            SemiconjWitness::new(f.clone(), p(&[0, 0, 1]), f.clone(), 1),
            Err(DependenceError::NotASemiconjugacy { iterate: 1 })
        );
        assert_eq!(SemiconjWitness::new(f.clone(), Poly::t(), f.clone(), 0), Err(DependenceError::NotASemiconjugacy { iterate: 0 }));
        // f^2 ∘ t = t ∘ f^2
        assert!(SemiconjWitness::new(f.clone(), Poly::t(), f.iterate(2), 2).is_ok());
    }

    #[test]
    fn chebyshev_witness() {
        let c2 = chebyshev(2);
        let w = SemiconjWitness::new(c2.clone(), chebyshev(3), c2, 1).unwrap();
        let cert = witness_relation(&w, 32).unwrap();
        assert!(cert.residual.vanishes());
        assert_eq!(cert.relation.to_string(), "X_2^3 - X_1 - 3*X_2");
        assert_eq!(cert.series[0].m, 3);
        // both sides are t^3 + t^-3
        let materialized = cert.materialize(32).unwrap();
        assert_eq!(materialized[0].support().collect::<Vec<_>>(), vec![3, -3]);
    }

    #[test]
    fn identity_witness() {
        let f = p(&[3, 1, 1]);
        let w = SemiconjWitness::new(f.clone(), Poly::t(), f, 1).unwrap();
        let cert = witness_relation(&w, 24).unwrap();
        assert_eq!(cert.relation.to_string(), "X_1 - X_2");
        assert!(cert.verify(48).unwrap().vanishes());
    }

    #[test]
    fn square_witness() {
        let f = p(&[4, -4, 1]);
        let w = SemiconjWitness::new(f, p(&[0, 0, 1]), chebyshev(2), 1).unwrap();
        let cert = witness_relation(&w, 32).unwrap();
        assert_eq!(cert.relation.to_string(), "X_2^2 - X_1");
        assert!(cert.verify(64).unwrap().vanishes());
    }

    #[test]
    fn iterate_witness() {
        // f^2 ∘ f = f ∘ f^2 with h = f^2
        let f = p(&[1, 0, 1]);
        let w = SemiconjWitness::new(f.clone(), f.clone(), f.iterate(2), 2).unwrap();
        let cert = witness_relation(&w, 24).unwrap();
        assert!(cert.residual.vanishes());
        assert_eq!(cert.series[0].f, f.iterate(2));
    }

    #[test]
    fn quadratic_search_examples() {
        let s = quadratic_semiconj_search(&q(1), &q(1), 4).unwrap();
        assert_eq!(s.lowest(), Some(&Poly::t()));
        let s = quadratic_semiconj_search(&q(1), &q(3), 8).unwrap();
        assert_eq!(s.lowest(), None);
        let s = quadratic_semiconj_search(&q(-2), &q(-2), 3).unwrap();
        assert_eq!(s.solutions, vec![Poly::t(), chebyshev(2), chebyshev(3)]);
        let s = quadratic_semiconj_search(&q(0), &q(0), 3).unwrap();
        assert_eq!(s.solutions, vec![Poly::t(), p(&[0, 0, 1]), p(&[0, 0, 0, 1])]);
        assert!(quadratic_semiconj_search(&q(0), &q(0), 0).is_err());
    }
}
