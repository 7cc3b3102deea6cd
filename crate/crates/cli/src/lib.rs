//! Command-line front end for the `bottcher` library.
//!
//! [`run`] parses an argument vector and returns the exit code together
//! with everything the command would print, so the binary is a thin shell
//! around it. Exit codes: 0 on success, 1 when the library reports a domain
//! error (its name is printed first), 2 on usage errors.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fmt::Write as _;

use bottcher::conjugacy::{chebyshev, classify, common_iterate_search, commutes, solve_psi, MapKind};
use bottcher::dependence::{
    check_invariance, find_relation, materialize_series, quadratic_semiconj_search, semiconj_verify, witness_relation,
    Certificate, DependenceReport, SemiconjWitness,
};
use bottcher::heights::{canonical_height, green, height_ratio, HeightConfig, HeightsError, OrbitStatus};
use bottcher::numeric::PrecisionReal;
use bottcher::parse::{parse_poly, parse_scalar, parse_series_spec};
use bottcher::scalars::{set_conductor_cap, CyclotomicScalar as Scalar, Rational, RootOfUnity};
use bottcher::series::Poly;
use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

/// Overrides the cap on cyclotomic conductors.
pub const CONDUCTOR_CAP_VAR: &str = "BOTTCHER_CONDUCTOR_CAP";

#[derive(Parser, Debug)]
#[command(name = "bottcher", version, about = "Exact local conjugacies, dependence certificates and canonical heights")]
struct Cli {
    #[command(flatten)]
    opts: Options,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone, Copy)]
struct Options {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Series window N (number of retained coefficients).
    #[arg(long, global = true, default_value_t = 64, value_parser = clap::value_parser!(u64).range(2..=100_000))]
    window: u64,
    /// Decimal digits D for certified real output.
    #[arg(long, global = true, default_value_t = 30, value_parser = clap::value_parser!(u32).range(1..=2000))]
    digits: u32,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// The local conjugacy ψ_f with ψ_f(t^d) = f(ψ_f(t)).
    Psi { f: String },
    /// The Böttcher coordinate φ_f, the reversion of ψ_f.
    Phi { f: String },
    /// The Chebyshev polynomial C_d.
    Cheb {
        #[arg(value_parser = clap::value_parser!(u32).range(1..=4096))]
        d: u32,
    },
    /// Power map, Chebyshev (±) or disintegrated.
    Classify { f: String },
    /// Whether f ∘ g = g ∘ f.
    Commutes { f: String, g: String },
    /// Least (m, n) with f^m = g^n.
    CommonIterate {
        f: String,
        g: String,
        #[arg(long, default_value_t = 4096, value_parser = clap::value_parser!(u64).range(2..))]
        max_degree: u64,
    },
    /// Search for or verify algebraic relations among conjugacy series.
    #[command(subcommand)]
    Relation(RelationCommand),
    /// Semiconjugacies f ∘ π = π ∘ h.
    #[command(subcommand)]
    Semiconj(SemiconjCommand),
    /// Certificate for the relation between ψ_{f^n} and ψ_h induced by f^n ∘ π = π ∘ h.
    Witness {
        f: String,
        pi: String,
        h: String,
        #[arg(value_parser = clap::value_parser!(u32).range(1..=64))]
        n: u32,
        /// Write the certificate here instead of stdout.
        #[arg(long)]
        out: Option<String>,
    },
    /// The Green's function G_f(a); `a` may involve zeta(n).
    Green {
        f: String,
        #[arg(allow_hyphen_values = true)]
        a: String,
    },
    /// The canonical height of a rational point and its local parts.
    Cheight {
        f: String,
        #[arg(allow_hyphen_values = true)]
        a: String,
    },
    /// The ratio of canonical heights ĥ_f(a) / ĥ_g(a).
    Hratio {
        f: String,
        g: String,
        #[arg(allow_hyphen_values = true)]
        a: String,
    },
}

#[derive(Subcommand, Debug)]
enum RelationCommand {
    /// Search for a relation P(t, S_1, …, S_n) = 0; each S is `psi(F)` or `psi(F) @ zeta(n)^k, m`.
    Find {
        #[arg(required = true)]
        series: Vec<String>,
        /// Total degree bound B.
        #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u32).range(1..=16))]
        degree: u32,
        /// Write a certificate for a found relation here.
        #[arg(long)]
        out: Option<String>,
        /// Also test whether the relation is invariant under (t^d, f_1, …, f_n).
        #[arg(long)]
        invariance: bool,
    },
    /// Re-check a certificate file.
    Verify {
        certificate: String,
        /// Recompute at this window instead of the recorded one.
        #[arg(long = "at", value_parser = clap::value_parser!(u64).range(2..=100_000))]
        at: Option<u64>,
    },
}

#[derive(Subcommand, Debug)]
enum SemiconjCommand {
    /// Whether f ∘ π = π ∘ h.
    Verify { f: String, pi: String, h: String },
    /// Monic π with (t^2 + c) ∘ π = π ∘ (t^2 + c̃), by degree.
    Quad {
        #[arg(allow_hyphen_values = true)]
        c: String,
        #[arg(allow_hyphen_values = true)]
        c_tilde: String,
        #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u32).range(1..=64))]
        degree: u32,
    },
}

/// What a command printed and how it exited.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: u8,
    pub stdout: String,
    pub stderr: String,
}

enum Failure {
    Domain(String),
    Usage(String),
}

impl<E: std::error::Error> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Domain(e.to_string())
    }
}

enum Output {
    Text(String),
    Json(Value),
}

/// Parse `argv` (program name first) and execute it.
pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome { code: 2, stdout: String::new(), stderr: text }
            } else {
                Outcome { code: 0, stdout: text, stderr: String::new() }
            };
        }
    };
    if let Err(msg) = apply_environment() {
        return Outcome { code: 2, stdout: String::new(), stderr: format!("error: {msg}\n") };
    }
    match execute(&cli.command, cli.opts) {
        Ok(Output::Text(mut s)) => {
            if !s.ends_with('\n') {
                s.push('\n');
            }
            Outcome { code: 0, stdout: s, stderr: String::new() }
        }
        Ok(Output::Json(v)) => {
            let s = serde_json::to_string_pretty(&v).expect("serializable") + "\n";
            Outcome { code: 0, stdout: s, stderr: String::new() }
        }
        Err(Failure::Domain(msg)) => Outcome { code: 1, stdout: String::new(), stderr: format!("{msg}\n") },
        Err(Failure::Usage(msg)) => Outcome { code: 2, stdout: String::new(), stderr: format!("error: {msg}\n") },
    }
}

fn apply_environment() -> Result<(), String> {
    match std::env::var(CONDUCTOR_CAP_VAR) {
        Ok(v) => {
            let cap: usize = v
                .trim()
                .parse()
                .ok()
                .filter(|&c| c >= 1)
                .ok_or_else(|| format!("{CONDUCTOR_CAP_VAR} must be a positive integer, got '{v}'"))?;
            set_conductor_cap(cap);
            Ok(())
        }
        Err(std::env::VarError::NotPresent) => Ok(()),
        Err(_) => Err(format!("{CONDUCTOR_CAP_VAR} is not valid unicode")),
    }
}

fn poly(src: &str) -> Result<Poly, Failure> {
    Ok(parse_poly(src)?)
}

fn rational(src: &str, what: &str) -> Result<Rational, Failure> {
    let s = parse_scalar(src)?;
    s.as_rational()
        .cloned()
        .ok_or_else(|| Failure::Domain(format!("NonRationalParameter: {what} = {s} must be rational")))
}

fn rational_point(src: &str) -> Result<Rational, Failure> {
    let s = parse_scalar(src)?;
    match s.as_rational() {
        Some(q) => Ok(q.clone()),
        None => Err(HeightsError::NonRationalPoint { point: s.to_string() }.into()),
    }
}

fn real_json(v: &PrecisionReal) -> Value {
    json!({
        "value": v.to_decimal(),
        "error": format!("{:.3e}", v.error_f64()),
        "digits": v.justified_digits(),
    })
}

fn status_text(s: &OrbitStatus) -> String {
    match s {
        OrbitStatus::Escaped { iterations } => format!("escaped after {iterations} iterations"),
        OrbitStatus::Preperiodic { preperiod, period } => format!("preperiodic (preperiod {preperiod}, period {period})"),
        OrbitStatus::BoundedUnproven { iterations } => format!("bounded for {iterations} iterations, not proven preperiodic"),
    }
}

fn status_json(s: &OrbitStatus) -> Value {
    match s {
        OrbitStatus::Escaped { iterations } => json!({"kind": "escaped", "iterations": iterations}),
        OrbitStatus::Preperiodic { preperiod, period } => {
            json!({"kind": "preperiodic", "preperiod": preperiod, "period": period})
        }
        OrbitStatus::BoundedUnproven { iterations } => json!({"kind": "bounded-unproven", "iterations": iterations}),
    }
}

fn write_file(path: &str, text: &str) -> Result<(), Failure> {
    std::fs::write(path, text).map_err(|e| Failure::Domain(format!("IoError: cannot write {path}: {e}")))
}

fn execute(cmd: &Command, opts: Options) -> Result<Output, Failure> {
    let window = opts.window as usize;
    let digits = opts.digits;
    let json = opts.json;
    let text = |s: String| Ok(Output::Text(s));
    match cmd {
        Command::Psi { f } => {
            let f = poly(f)?;
            let psi = solve_psi(&f, window, RootOfUnity::one())?;
            if json {
                return Ok(Output::Json(json!({
                    "f": f.to_string(),
                    "window": window,
                    "series": psi.tail().to_string(),
                    "residual_checked_to": psi.residual_checked_to(),
                })));
            }
            text(psi.tail().to_string())
        }
        Command::Phi { f } => {
            let f = poly(f)?;
            let psi = solve_psi(&f, window, RootOfUnity::one())?;
            let phi = psi.tail().reversion()?;
            if json {
                return Ok(Output::Json(json!({"f": f.to_string(), "window": window, "series": phi.to_string()})));
            }
            text(phi.to_string())
        }
        Command::Cheb { d } => {
            let c = chebyshev(*d);
            if json {
                return Ok(Output::Json(json!({"d": d, "poly": c.to_string()})));
            }
            text(c.to_string())
        }
        Command::Classify { f } => {
            let f = poly(f)?;
            let c = classify(&f)?;
            let witness = c.witness.as_ref().map(Poly::to_string);
            if json {
                return Ok(Output::Json(json!({"f": f.to_string(), "kind": c.kind.to_string(), "witness": witness})));
            }
            let mut s = c.kind.to_string();
            if let (Some(w), true) = (witness, c.kind != MapKind::Disintegrated) {
                write!(s, "\nwitness l(t) = {w}").unwrap();
            }
            text(s)
        }
        Command::Commutes { f, g } => {
            let (f, g) = (poly(f)?, poly(g)?);
            let yes = commutes(&f, &g);
            if json {
                return Ok(Output::Json(json!({"f": f.to_string(), "g": g.to_string(), "commutes": yes})));
            }
            text(yes.to_string())
        }
        Command::CommonIterate { f, g, max_degree } => {
            let (f, g) = (poly(f)?, poly(g)?);
            let found = common_iterate_search(&f, &g, *max_degree)?;
            if json {
                let pair = found.map(|(m, n)| json!({"m": m, "n": n}));
                return Ok(Output::Json(json!({"f": f.to_string(), "g": g.to_string(), "max_degree": max_degree, "found": pair})));
            }
            text(match found {
                Some((m, n)) => format!("f^{m} = g^{n}"),
                None => format!("none up to degree {max_degree}"),
            })
        }
        Command::Relation(RelationCommand::Find { series, degree, out, invariance }) => {
            let specs = series.iter().map(|s| parse_series_spec(s)).collect::<Result<Vec<_>, _>>()?;
            let materialized = specs
                .iter()
                .map(|s| materialize_series(s, 2 * window))
                .collect::<Result<Vec<_>, _>>()?;
            let report = find_relation(&materialized, *degree, window)?;
            match report {
                DependenceReport::Found { relation, verified_window, residual } => {
                    let invariant = if *invariance {
                        let d = specs[0].f.deg() as u32;
                        let maps: Vec<Poly> = specs.iter().map(|s| s.f.clone()).collect();
                        Some(check_invariance(&relation, d, &maps)?)
                    } else {
                        None
                    };
                    if let Some(path) = out {
                        let cert = Certificate::certify(relation.clone(), specs.clone(), verified_window)?;
                        write_file(path, &cert.to_text())?;
                    }
                    if json {
                        return Ok(Output::Json(json!({
                            "found": true,
                            "relation": relation.to_string(),
                            "verified_window": verified_window,
                            "residual": residual.to_string(),
                            "invariant": invariant,
                        })));
                    }
                    let mut s = format!("found {relation}\nverified at window {verified_window}, residual {residual}");
                    if let Some(inv) = invariant {
                        write!(s, "\ninvariant {inv}").unwrap();
                    }
                    text(s)
                }
                DependenceReport::NotFoundUpTo { degree_bound, window, spurious } => {
                    if json {
                        return Ok(Output::Json(json!({
                            "found": false,
                            "degree_bound": degree_bound,
                            "window": window,
                            "spurious": spurious,
                        })));
                    }
                    text(format!(
                        "no relation of degree <= {degree_bound} at window {window} ({spurious} spurious candidates rejected)"
                    ))
                }
            }
        }
        Command::Relation(RelationCommand::Verify { certificate, at }) => {
            let src = std::fs::read_to_string(certificate)
                .map_err(|e| Failure::Usage(format!("cannot read certificate '{certificate}': {e}")))?;
            let cert = Certificate::parse(&src)?;
            let (residual, checked_at) = match at {
                Some(w) => (cert.verify(*w as usize)?, *w as usize),
                None => (cert.check()?, cert.window),
            };
            let holds = residual.vanishes();
            if json {
                return Ok(Output::Json(json!({
                    "relation": cert.relation.to_string(),
                    "window": checked_at,
                    "residual": residual.to_string(),
                    "vanishes": holds,
                })));
            }
            let verdict = if holds { "verified" } else { "does not vanish" };
            text(format!("{verdict}: {} at window {checked_at}, residual {residual}", cert.relation))
        }
        Command::Semiconj(SemiconjCommand::Verify { f, pi, h }) => {
            let (f, pi, h) = (poly(f)?, poly(pi)?, poly(h)?);
            let yes = semiconj_verify(&f, &pi, &h)?;
            if json {
                return Ok(Output::Json(json!({"semiconjugacy": yes})));
            }
            text(yes.to_string())
        }
        Command::Semiconj(SemiconjCommand::Quad { c, c_tilde, degree }) => {
            let (c, ct) = (rational(c, "c")?, rational(c_tilde, "c_tilde")?);
            let found = quadratic_semiconj_search(&c, &ct, *degree)?;
            let sols: Vec<String> = found.solutions.iter().map(Poly::to_string).collect();
            if json {
                return Ok(Output::Json(json!({"degree_bound": degree, "solutions": sols})));
            }
            if sols.is_empty() {
                return text(format!("none up to degree {degree}"));
            }
            text(sols.join("\n"))
        }
        Command::Witness { f, pi, h, n, out } => {
            let w = SemiconjWitness::new(poly(f)?, poly(pi)?, poly(h)?, *n)?;
            let cert = witness_relation(&w, window)?;
            let body = cert.to_text();
            if let Some(path) = out {
                write_file(path, &body)?;
            }
            if json {
                return Ok(Output::Json(json!({
                    "relation": cert.relation.to_string(),
                    "window": cert.window,
                    "residual": cert.residual.to_string(),
                    "certificate": body,
                })));
            }
            match out {
                Some(path) => text(format!("certificate for {} written to {path}", cert.relation)),
                None => text(body),
            }
        }
        Command::Green { f, a } => {
            let f = poly(f)?;
            let a: Scalar = parse_scalar(a)?;
            let g = green(&f, &a, &HeightConfig::with_digits(digits))?;
            if json {
                return Ok(Output::Json(json!({
                    "f": f.to_string(),
                    "a": a.to_string(),
                    "green": real_json(&g.value),
                    "status": status_json(&g.status),
                })));
            }
            text(format!("{}\nstatus: {}", g.value, status_text(&g.status)))
        }
        Command::Cheight { f, a } => {
            let f = poly(f)?;
            let a = rational_point(a)?;
            let h = canonical_height(&f, &a, &HeightConfig::with_digits(digits))?;
            if json {
                let finite: BTreeMap<String, Value> = h.finite.iter().map(|(p, v)| (p.to_string(), real_json(v))).collect();
                return Ok(Output::Json(json!({
                    "f": f.to_string(),
                    "a": a.to_string(),
                    "total": real_json(&h.total),
                    "archimedean": real_json(&h.archimedean),
                    "archimedean_status": status_json(&h.archimedean_status),
                    "finite": finite,
                    "proven_preperiodic": h.proven_preperiodic,
                })));
            }
            let mut s = format!("total: {}\narchimedean: {} [{}]\nfinite:", h.total, h.archimedean, status_text(&h.archimedean_status));
            if h.finite.is_empty() {
                s.push_str(" none");
            }
            for (p, v) in &h.finite {
                write!(s, "\n  {p}: {v}").unwrap();
            }
            write!(s, "\npreperiodic: {}", if h.proven_preperiodic { "proven" } else { "not proven" }).unwrap();
            text(s)
        }
        Command::Hratio { f, g, a } => {
            let (f, g) = (poly(f)?, poly(g)?);
            let a = rational_point(a)?;
            let r = height_ratio(&f, &g, &a, &HeightConfig::with_digits(digits))?;
            if json {
                return Ok(Output::Json(json!({"f": f.to_string(), "g": g.to_string(), "a": a.to_string(), "ratio": real_json(&r)})));
            }
            text(r.to_string())
        }
    }
}
