//! Self-describing relation certificates and their text format.
//!
//! ```text
//! relation-certificate v1
//! nvars 3
//! degree 2
//! window 96
//! series psi(t^2 + 1)
//! series psi(t^2 + 1) @ zeta(1)^0, 2
//! 0 2 0 : 1
//! 0 0 1 : -1
//! 0 0 0 : 1
//! residual O(t^-94)
//! ```
//!
//! Terms are listed in descending graded-lex order. The residual line is
//! either `O(t^k)` (every retained coefficient vanished) or `nonzero t^v`.

use std::fmt::Write as _;

use crate::conjugacy::solve_psi;
use crate::parse::{parse_scalar, parse_series_spec, SeriesSpec};
use crate::scalars::RootOfUnity;
use crate::series::{substitute_md, LaurentTail, MdElement};

use super::{verify_relation, DependenceError, Monomial, Relation, Residual};

const MAGIC: &str = "relation-certificate v1";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub relation: Relation,
    pub series: Vec<SeriesSpec>,
    pub window: usize,
    pub residual: Residual,
}

impl Certificate {
    /// Evaluate `relation` on the described series at `window` and record
    /// the result; fails unless the residual vanishes.
    pub fn certify(relation: Relation, series: Vec<SeriesSpec>, window: usize) -> Result<Self, DependenceError> {
        let mut cert = Certificate { relation, series, window, residual: Residual::Vanishes { prec: 0 } };
        cert.residual = cert.verify(window)?;
        if !cert.residual.vanishes() {
            return Err(DependenceError::CertificateMismatch {
                recorded: "O(t^k)".into(),
                computed: cert.residual.to_string(),
            });
        }
        Ok(cert)
    }

    /// Each described series `ψ_f(ζ t^m)`, cut to `window` terms.
    pub fn materialize(&self, window: usize) -> Result<Vec<LaurentTail>, DependenceError> {
        self.series.iter().map(|spec| materialize_series(spec, window)).collect()
    }

    /// Recompute the residual at `window`.
    pub fn verify(&self, window: usize) -> Result<Residual, DependenceError> {
        let series = self.materialize(window)?;
        verify_relation(&self.relation, &series, window)
    }

    /// Recompute at the recorded window and compare with the recorded
    /// residual.
    pub fn check(&self) -> Result<Residual, DependenceError> {
        let computed = self.verify(self.window)?;
        if computed != self.residual {
            return Err(DependenceError::CertificateMismatch {
                recorded: self.residual.to_string(),
                computed: computed.to_string(),
            });
        }
        Ok(computed)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "{MAGIC}").unwrap();
        writeln!(out, "nvars {}", self.relation.nvars()).unwrap();
        writeln!(out, "degree {}", self.relation.total_degree()).unwrap();
        writeln!(out, "window {}", self.window).unwrap();
        for s in &self.series {
            writeln!(out, "series {s}").unwrap();
        }
        for (m, c) in self.relation.terms().rev() {
            let exps: Vec<String> = m.exps().iter().map(u32::to_string).collect();
            writeln!(out, "{} : {c}", exps.join(" ")).unwrap();
        }
        match self.residual {
            Residual::Vanishes { prec } => writeln!(out, "residual O(t^{prec})").unwrap(),
            Residual::NonZero { valuation } => writeln!(out, "residual nonzero t^{valuation}").unwrap(),
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self, DependenceError> {
        let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim())).filter(|(_, l)| !l.is_empty());
        let bad = |line: usize, reason: &str| DependenceError::CertificateFormat { line, reason: reason.into() };
        let mut next = |what: &str| lines.next().ok_or_else(|| bad(0, &format!("missing {what}")));

        let (n, magic) = next("header")?;
        if magic != MAGIC {
            return Err(bad(n, "expected 'relation-certificate v1'"));
        }
        let mut field = |key: &str| -> Result<(usize, usize), DependenceError> {
            let (n, l) = next(key)?;
            let value = l
                .strip_prefix(key)
                .and_then(|v| v.strip_prefix(' '))
                .ok_or_else(|| bad(n, &format!("expected '{key} <integer>'")))?;
            let v = value.trim().parse().map_err(|_| bad(n, &format!("invalid {key}")))?;
            Ok((n, v))
        };
        let (_, nvars) = field("nvars")?;
        let (degree_line, degree) = field("degree")?;
        let (_, window) = field("window")?;
        if nvars == 0 {
            return Err(bad(0, "nvars must be positive"));
        }

        let mut series = Vec::new();
        let mut terms = Vec::new();
        let residual = loop {
            let (n, l) = next("residual line")?;
            if let Some(spec) = l.strip_prefix("series ") {
                if !terms.is_empty() {
                    return Err(bad(n, "series lines must precede terms"));
                }
                series.push(parse_series_spec(spec.trim()).map_err(|e| bad(n, &e.to_string()))?);
            } else if let Some(rest) = l.strip_prefix("residual ") {
                break parse_residual(rest.trim()).ok_or_else(|| bad(n, "expected 'O(t^k)' or 'nonzero t^v'"))?;
            } else {
                let (exps, coeff) = l.split_once(':').ok_or_else(|| bad(n, "expected 'e_0 … e_n : scalar'"))?;
                let exps: Vec<u32> = exps
                    .split_whitespace()
                    .map(str::parse)
                    .collect::<Result<_, _>>()
                    .map_err(|_| bad(n, "invalid exponent"))?;
                if exps.len() != nvars {
                    return Err(bad(n, &format!("expected {nvars} exponents, found {}", exps.len())));
                }
                let c = parse_scalar(coeff.trim()).map_err(|e| bad(n, &e.to_string()))?;
                terms.push((Monomial::new(exps), c));
            }
        };
        if let Some((n, _)) = next("end").ok() {
            return Err(bad(n, "trailing content after residual"));
        }
        if series.len() + 1 != nvars {
            return Err(bad(0, &format!("{} series lines for {nvars} variables", series.len())));
        }
        let relation = Relation::from_terms(nvars, terms);
        if relation.is_zero() {
            return Err(DependenceError::ZeroRelation);
        }
        if relation.total_degree() as usize != degree {
            return Err(bad(degree_line, &format!("terms have total degree {}", relation.total_degree())));
        }
        Ok(Certificate { relation, series, window, residual })
    }
}

/// `ψ_f(ζ t^m)` for the base solution `ψ_f`, cut to `window` terms.
pub fn materialize_series(spec: &SeriesSpec, window: usize) -> Result<LaurentTail, DependenceError> {
    let d = spec.f.deg() as u32;
    let u = MdElement::new(spec.zeta, spec.m, d)?;
    let base_window = window.div_ceil(spec.m as usize) + 1;
    let base = solve_psi(&spec.f, base_window, RootOfUnity::one())?;
    Ok(substitute_md(base.tail(), &u)?.truncate(window)?)
}

fn parse_residual(s: &str) -> Option<Residual> {
    if let Some(v) = s.strip_prefix("nonzero t^") {
        return v.parse().ok().map(|valuation| Residual::NonZero { valuation });
    }
    let k = s.strip_prefix("O(t^")?.strip_suffix(')')?;
    k.parse().ok().map(|prec| Residual::Vanishes { prec })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conjugacy::chebyshev;
    use crate::scalars::CyclotomicScalar as Scalar;
    use crate::series::Poly;

    fn functional_equation_cert() -> Certificate {
        let f = Poly::from_ints(&[1, 0, 1]);
        let rel = Relation::var(3, 2)
            .sub(&Relation::var(3, 1).pow(2))
            .sub(&Relation::constant(3, Scalar::one()))
            .normalize();
        let series = vec![SeriesSpec::psi(f.clone()), SeriesSpec { f, zeta: RootOfUnity::one(), m: 2 }];
        Certificate::certify(rel, series, 40).unwrap()
    }

    #[test]
    fn text_round_trip() {
        let cert = functional_equation_cert();
        let text = cert.to_text();
        assert!(text.starts_with("relation-certificate v1\nnvars 3\ndegree 2\nwindow 40\n"));
        assert!(text.contains("\n0 2 0 : 1\n0 0 1 : -1\n0 0 0 : 1\n"));
        let back = Certificate::parse(&text).unwrap();
        assert_eq!(back, cert);
        assert_eq!(back.to_text(), text);
        assert!(back.check().is_ok());
        assert!(back.verify(80).unwrap().vanishes());
    }

    #[test]
    fn twisted_series_round_trip() {
        let f = Poly::from_ints(&[0, 1, 0, 1]);
        let zeta = RootOfUnity::new(2, 1);
        let cert = Certificate {
            relation: Relation::var(2, 1).sub(&Relation::var(2, 0)),
            series: vec![SeriesSpec { f, zeta, m: 1 }],
            window: 10,
            residual: Residual::NonZero { valuation: 1 },
        };
        let back = Certificate::parse(&cert.to_text()).unwrap();
        assert_eq!(back, cert);
        // ψ(-t) - t = -2t + …
        assert_eq!(back.check().unwrap(), Residual::NonZero { valuation: 1 });
    }

    #[test]
    fn tampering_is_detected() {
        let text = functional_equation_cert().to_text();
        let edited = text.replace("0 0 0 : 1", "0 0 0 : 2");
        let cert = Certificate::parse(&edited).unwrap();
        assert!(matches!(cert.check(), Err(DependenceError::CertificateMismatch { .. })));
        let edited = text.replace("window 40", "window 41");
        let cert = Certificate::parse(&edited).unwrap();
        assert!(matches!(cert.check(), Err(DependenceError::CertificateMismatch { .. })));
    }

    #[test]
    fn format_errors() {
        let text = functional_equation_cert().to_text();
        let cases = [
            text.replace("relation-certificate v1", "certificate"),
            text.replace("nvars 3", "nvars three"),
            text.replace("degree 2", "degree 3"),
            text.replace("0 2 0 : 1", "0 2 : 1"),
            text.replace("residual O", "residual P"),
            text.replace("series psi(t^2 + 1)\n", ""),
            format!("{text}extra\n"),
            text.lines().take(4).collect::<Vec<_>>().join("\n"),
        ];
        for case in &cases {
            assert!(
                matches!(Certificate::parse(case), Err(DependenceError::CertificateFormat { .. })),
                "accepted:\n{case}"
            );
        }
    }

    #[test]
    fn certify_rejects_false_relations() {
        let c2 = chebyshev(2);
        let rel = Relation::var(2, 1).sub(&Relation::var(2, 0));
        assert!(matches!(
            Certificate::certify(rel, vec![SeriesSpec::psi(c2)], 16),
            Err(DependenceError::CertificateMismatch { .. })
        ));
    }
}
