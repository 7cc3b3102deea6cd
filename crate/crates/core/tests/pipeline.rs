use bottcher::conjugacy::{chebyshev, classify, MapKind};
use bottcher::dependence::{find_relation, materialize_series, witness_relation, Certificate, DependenceReport, SemiconjWitness};
use bottcher::heights::{canonical_height, naive_height, HeightConfig};
use bottcher::parse::{parse_poly, parse_series_spec};
use bottcher::scalars::Rational;

#[test]
fn witness_certificate_survives_text() {
    let w = SemiconjWitness::new(parse_poly("(t - 2)^2").unwrap(), parse_poly("t^2").unwrap(), chebyshev(2), 1).unwrap();
    let cert = witness_relation(&w, 48).unwrap();
    let text = cert.to_text();
    let back = Certificate::parse(&text).unwrap();
    assert_eq!(back, cert);
    assert!(back.check().unwrap().vanishes());
    assert!(back.verify(160).unwrap().vanishes());
}

#[test]
fn twisted_relation_from_spec_strings() {
    // ψ(-t) = -ψ(t) for the odd map t^3 + t
    let specs = ["psi(t^3 + t)", "psi(t^3 + t) @ zeta(2)^1, 1"].map(|s| parse_series_spec(s).unwrap());
    let series: Vec<_> = specs.iter().map(|s| materialize_series(s, 64).unwrap()).collect();
    let report = find_relation(&series, 1, 32).unwrap();
    let DependenceReport::Found { relation, .. } = report else { panic!("{report:?}") };
    assert_eq!(relation.to_string(), "X_1 + X_2");
}

#[test]
fn classification_agrees_with_heights_of_conjugates() {
    // 2t^2 - 1 is conjugate to t^2 - 2 by t ↦ 2t; heights transport along it
    let f = parse_poly("2*t^2 - 1").unwrap();
    assert_eq!(classify(&f).unwrap().kind, MapKind::ChebyshevPlus);
    let g = chebyshev(2);
    let cfg = HeightConfig::with_digits(20);
    for a in ["3/2", "5", "-7/3"] {
        let a: Rational = a.parse().unwrap();
        let hf = canonical_height(&f, &a, &cfg).unwrap();
        let hg = canonical_height(&g, &(&a * Rational::from_integer(2.into())), &cfg).unwrap();
        assert!((hf.total.to_f64() - hg.total.to_f64()).abs() < 1e-15, "{a}");
        // ĥ and h differ by a bounded amount
        assert!((hf.total.to_f64() - naive_height(&a, 20).to_f64()).abs() < 3.0);
    }
}
