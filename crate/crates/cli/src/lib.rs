//! Command line front end for the signature engine: expression parsing,
//! single computations (signature pairs, inertia triples, division by the
//! hyperquadric form, projective degree), certified constructions by name,
//! and the batch verification suites.
//!
//! Exit codes: 0 for success and for mathematically refused parameters,
//! 1 when a verification fails or a sign stays indeterminate at the
//! precision cap, 2 for unusable input.

pub mod expr;
mod suites;

use clap::{Parser, Subcommand};
use expr::{parse_polynomial, Parsed};
use hermsig::constructions::{
    cyclotomic_factor, degree_bound, degree_growth_example, gap_family, indefinite_product,
    lemma31_suite, line_multiple_example, mixed_collapse, power_collapse, signature_shift,
    signature_table, split_difference_example, squared_norm_example, stability_construct,
    triple_product_example, whitney, Certificate,
};
use hermsig::hermitian_form::{inertia_in, Ambient};
use hermsig::polyring::{moment_lift, HermPoly};
use hermsig::quotient::{divide_by_r, projective_degree};
use hermsig::scalar::{rat, rat_int, Rat};
use hermsig::{Error, Result};
use serde_json::{json, Value};

#[derive(Parser, Debug)]
#[command(name = "hermsig", version, about = "Exact signature computations for Hermitian symmetric polynomials")]
pub struct Cli {
    /// Emit machine-readable JSON instead of plain text.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Signature pair of an expression.
    Signature {
        expr: String,
        /// Ambient degree override (defaults to the expression's bidegree).
        #[arg(long)]
        degree: Option<u32>,
        /// Ambient variable count override (defaults to the variables used).
        #[arg(long)]
        vars: Option<usize>,
    },
    /// Inertia triple of an expression in an ambient space.
    Inertia {
        expr: String,
        /// Ambient degree override (defaults to the expression's bidegree).
        #[arg(long)]
        degree: Option<u32>,
        /// Ambient variable count override (defaults to the variables used).
        #[arg(long)]
        vars: Option<usize>,
    },
    /// Signature pairs of two expressions and of their product.
    Product { first: String, second: String },
    /// Exact division by the hyperquadric form.
    #[command(name = "divide-r")]
    DivideR { expr: String },
    /// Projective degree after removing holomorphic content.
    Projdeg { expr: String },
    /// Build a named construction and print its certificate.
    Construct {
        #[arg(required = true)]
        name: Vec<String>,
    },
    /// Re-verify the reproduced claims, suite by suite.
    #[command(name = "verify-paper")]
    VerifyPaper {
        #[arg(long, default_value = "all", value_parser = ["all", "s3", "s4", "s7", "s8"])]
        suite: String,
    },
    /// The minimal-degree grid over signature pairs.
    Table {
        #[arg(long)]
        n: usize,
    },
    /// Degree estimate for a target family size.
    Bound {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        target: usize,
    },
}

/// Rendered result of one command, before the output format is chosen.
#[derive(Debug)]
struct Report {
    human: String,
    json: String,
    failures: usize,
}

impl Report {
    fn clean(human: String, json: Value) -> Report {
        Report {
            human,
            json: pretty(&json),
            failures: 0,
        }
    }
}

fn pretty(v: &impl serde::Serialize) -> String {
    serde_json::to_string_pretty(v).expect("serialization of CLI output cannot fail")
}

/// Final process output: text for each stream plus the exit code.
pub struct Output {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

pub fn run(cli: &Cli) -> Output {
    match dispatch(cli) {
        Ok(report) => Output {
            stdout: if cli.json { report.json } else { report.human },
            stderr: String::new(),
            code: if report.failures > 0 { 1 } else { 0 },
        },
        Err(e) => render_error(&e, cli.json),
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Refused(_) => 0,
        Error::VerificationFailed(_) | Error::IndeterminateSign { .. } => 1,
        _ => 2,
    }
}

fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::Refused(_) => "refused",
        Error::VerificationFailed(_) => "verification-failed",
        Error::IndeterminateSign { .. } => "indeterminate-sign",
        Error::NotHermitian(_) => "not-hermitian",
        Error::InvalidInput(_) => "invalid-input",
        _ => "error",
    }
}

fn render_error(e: &Error, json: bool) -> Output {
    let code = exit_code(e);
    if json {
        let body = match e {
            Error::Refused(detail) => json!({ "refused": detail }),
            _ => json!({ "error": { "kind": error_kind(e), "detail": e.to_string() } }),
        };
        return Output {
            stdout: pretty(&body),
            stderr: String::new(),
            code,
        };
    }
    if code == 0 {
        Output {
            stdout: e.to_string(),
            stderr: String::new(),
            code,
        }
    } else {
        Output {
            stdout: String::new(),
            stderr: format!("error: {e}"),
            code,
        }
    }
}

fn dispatch(cli: &Cli) -> Result<Report> {
    match &cli.command {
        Command::Signature { expr, degree, vars } => signature_cmd(expr, *degree, *vars),
        Command::Inertia { expr, degree, vars } => inertia_cmd(expr, *degree, *vars),
        Command::Product { first, second } => product_cmd(first, second),
        Command::DivideR { expr } => divide_cmd(expr),
        Command::Projdeg { expr } => projdeg_cmd(expr),
        Command::Construct { name } => construct_cmd(name),
        Command::VerifyPaper { suite } => verify_cmd(suite),
        Command::Table { n } => table_cmd(*n),
        Command::Bound { n, target } => bound_cmd(*n, *target),
    }
}

/// Parse to a Hermitian polynomial, lifting real expressions through the
/// moment map and bihomogenizing when needed; the notes say what was done.
fn hermitianize(text: &str) -> Result<(HermPoly, Vec<String>)> {
    let mut notes = Vec::new();
    let mut p = match parse_polynomial(text)? {
        Parsed::Herm(p) => p,
        Parsed::Real(p) => {
            notes.push("real variables read through the moment map x_j -> |z_j|^2".to_string());
            moment_lift(&p)
        }
    };
    if p.is_bihomogeneous().is_none() {
        p = p.bihomogenize();
        notes.push(format!("bihomogenized with z{}", p.arity()));
    }
    Ok((p, notes))
}

fn ambient_for(p: &HermPoly, degree: Option<u32>, vars: Option<usize>) -> Result<Ambient> {
    let minimal = Ambient::minimal_for(p)?;
    Ambient::new(
        degree.unwrap_or(minimal.degree),
        vars.unwrap_or(minimal.vars),
    )
}

fn notes_human(notes: &[String]) -> String {
    notes
        .iter()
        .map(|n| format!("note: {n}\n"))
        .collect::<String>()
}

fn signature_cmd(text: &str, degree: Option<u32>, vars: Option<usize>) -> Result<Report> {
    let (p, notes) = hermitianize(text)?;
    let ambient = ambient_for(&p, degree, vars)?;
    let result = inertia_in(&p, ambient)?;
    let pair = result.pair();
    let human = format!(
        "{}p = {p}\nambient: V({}, {}), dimension {}\ns(p) = ({}, {})",
        notes_human(&notes),
        ambient.degree,
        ambient.vars,
        ambient.dim(),
        pair.0,
        pair.1,
    );
    let body = json!({
        "verb": "signature",
        "input": text,
        "polynomial": p.to_string(),
        "notes": notes,
        "ambient": { "degree": ambient.degree, "vars": ambient.vars, "dim": ambient.dim() },
        "pair": [pair.0, pair.1],
    });
    Ok(Report::clean(human, body))
}

fn inertia_cmd(text: &str, degree: Option<u32>, vars: Option<usize>) -> Result<Report> {
    let (p, notes) = hermitianize(text)?;
    let ambient = ambient_for(&p, degree, vars)?;
    let result = inertia_in(&p, ambient)?;
    let (a, b, k) = result.triple();
    let human = format!(
        "{}p = {p}\nambient: V({}, {}), dimension {}\nin(p) = ({a}, {b}, {k})\nrank = {}",
        notes_human(&notes),
        ambient.degree,
        ambient.vars,
        ambient.dim(),
        result.rank(),
    );
    let body = json!({
        "verb": "inertia",
        "input": text,
        "polynomial": p.to_string(),
        "notes": notes,
        "ambient": { "degree": ambient.degree, "vars": ambient.vars, "dim": ambient.dim() },
        "triple": [a, b, k],
        "rank": result.rank(),
    });
    Ok(Report::clean(human, body))
}

fn minimal_pair(p: &HermPoly) -> Result<(usize, usize)> {
    Ok(inertia_in(p, Ambient::minimal_for(p)?)?.pair())
}

fn product_cmd(first: &str, second: &str) -> Result<Report> {
    let (a, mut notes) = hermitianize(first)?;
    let (b, more) = hermitianize(second)?;
    notes.extend(more);
    let arity = a.arity().max(b.arity());
    let a = a.widen(arity)?;
    let b = b.widen(arity)?;
    let product = a.mul(&b)?;
    let pa = minimal_pair(&a)?;
    let pb = minimal_pair(&b)?;
    let pp = minimal_pair(&product)?;
    let human = format!(
        "{}p1 = {a}\ns(p1) = ({}, {})\np2 = {b}\ns(p2) = ({}, {})\np1*p2 = {product}\ns(p1*p2) = ({}, {})",
        notes_human(&notes),
        pa.0, pa.1, pb.0, pb.1, pp.0, pp.1,
    );
    let body = json!({
        "verb": "product",
        "factors": [
            { "polynomial": a.to_string(), "pair": [pa.0, pa.1] },
            { "polynomial": b.to_string(), "pair": [pb.0, pb.1] },
        ],
        "product": { "polynomial": product.to_string(), "pair": [pp.0, pp.1] },
        "notes": notes,
    });
    Ok(Report::clean(human, body))
}

fn divide_cmd(text: &str) -> Result<Report> {
    let (p, notes) = hermitianize(text)?;
    if p.arity() < 2 {
        return Err(Error::InvalidInput(
            "division by the hyperquadric form needs at least two variables".into(),
        ));
    }
    let witness = divide_by_r(&p)?;
    if !witness.verify(&p)? {
        return Err(Error::Internal(
            "division witness failed to re-multiply".into(),
        ));
    }
    let member = if witness.member { "yes" } else { "no" };
    let human = format!(
        "{}p = {p}\nr = {}\nmember of the ideal: {member}\nquotient = {}\nremainder = {}",
        notes_human(&notes),
        witness.divisor,
        witness.quotient,
        witness.remainder,
    );
    let body = json!({
        "verb": "divide-r",
        "polynomial": p.to_string(),
        "divisor": witness.divisor.to_string(),
        "member": witness.member,
        "quotient": witness.quotient.to_string(),
        "remainder": witness.remainder.to_string(),
        "notes": notes,
    });
    Ok(Report::clean(human, body))
}

fn projdeg_cmd(text: &str) -> Result<Report> {
    let (p, notes) = hermitianize(text)?;
    let reduction = projective_degree(&p)?;
    let human = format!(
        "{}p = {p}\nholomorphic content = {}\nreduced = {}\nprojective degree = {}",
        notes_human(&notes),
        reduction.content,
        reduction.reduced,
        reduction.degree,
    );
    let body = json!({
        "verb": "projdeg",
        "polynomial": p.to_string(),
        "content": reduction.content.to_string(),
        "reduced": reduction.reduced.to_string(),
        "degree": reduction.degree,
        "notes": notes,
    });
    Ok(Report::clean(human, body))
}

fn parse_count<T: std::str::FromStr>(token: &str, what: &str) -> Result<T> {
    token
        .parse()
        .map_err(|_| Error::InvalidInput(format!("{what} must be a nonnegative integer, got `{token}`")))
}

fn parse_rat(token: &str, what: &str) -> Result<Rat> {
    token
        .parse()
        .map_err(|_| Error::InvalidInput(format!("{what} must be rational (`p/q`), got `{token}`")))
}

fn arg_count(params: &[String], low: usize, high: usize, usage: &str) -> Result<()> {
    if params.len() < low || params.len() > high {
        return Err(Error::InvalidInput(format!("usage: construct {usage}")));
    }
    Ok(())
}

fn construct_cmd(tokens: &[String]) -> Result<Report> {
    let (head, params) = tokens.split_first().expect("clap requires a name");
    let certs: Vec<Certificate> = match head.as_str() {
        "lemma31" => {
            arg_count(params, 0, 0, "lemma31")?;
            lemma31_suite()?
        }
        "cyclotomic" => {
            arg_count(params, 0, 1, "cyclotomic [m]")?;
            match params.first() {
                Some(m) => vec![cyclotomic_factor(parse_count(m, "m")?)?],
                None => (2..=6).map(cyclotomic_factor).collect::<Result<_>>()?,
            }
        }
        "whitney" => {
            arg_count(params, 0, 1, "whitney [d]")?;
            match params.first() {
                Some(d) => vec![whitney(parse_count(d, "d")?)?],
                None => (1..=10).map(whitney).collect::<Result<_>>()?,
            }
        }
        "gap" => {
            arg_count(params, 0, 1, "gap [d]")?;
            match params.first() {
                Some(d) => vec![gap_family(parse_count(d, "d")?)?],
                None => (1..=9).map(gap_family).collect::<Result<_>>()?,
            }
        }
        "prop41" => {
            arg_count(params, 0, 1, "prop41 [m]")?;
            match params.first() {
                Some(m) => vec![power_collapse(parse_count(m, "m")?)?],
                None => (2..=5).map(power_collapse).collect::<Result<_>>()?,
            }
        }
        "prop42" => {
            arg_count(params, 0, 1, "prop42 [case]")?;
            match params.first() {
                Some(s) => vec![mixed_collapse(parse_count(s, "case")?)?],
                None => (1..=4).map(mixed_collapse).collect::<Result<_>>()?,
            }
        }
        "thm41" => {
            arg_count(params, 2, 2, "thm41 A B")?;
            vec![indefinite_product(
                parse_count(&params[0], "A")?,
                parse_count(&params[1], "B")?,
            )?]
        }
        "example" => construct_example(params)?,
        "shift" => {
            arg_count(params, 0, 2, "shift [plus|minus] [k]")?;
            let plus = match params.first().map(String::as_str) {
                None | Some("plus") => true,
                Some("minus") => false,
                Some(other) => {
                    return Err(Error::InvalidInput(format!(
                        "shift direction must be `plus` or `minus`, got `{other}`"
                    )))
                }
            };
            let base = suites::shift_base()?;
            let k = match params.get(1) {
                Some(k) => parse_count(k, "k")?,
                None => {
                    let quotient = divide_by_r(&base)?.quotient;
                    quotient.bidegree().0 + 2
                }
            };
            vec![signature_shift(&base, plus, k)?]
        }
        "thm82" => {
            arg_count(params, 3, 3, "thm82 n A B")?;
            vec![stability_construct(
                parse_count(&params[0], "n")?,
                parse_count(&params[1], "A")?,
                parse_count(&params[2], "B")?,
                0,
            )?]
        }
        other => {
            return Err(Error::InvalidInput(format!(
                "unknown construction `{other}`; see README for the list"
            )))
        }
    };
    let human = certs
        .iter()
        .map(render_certificate)
        .collect::<Vec<_>>()
        .join("\n");
    Ok(Report {
        human,
        json: pretty(&certs),
        failures: 0,
    })
}

fn construct_example(params: &[String]) -> Result<Vec<Certificate>> {
    let Some((label, rest)) = params.split_first() else {
        return Err(Error::InvalidInput(
            "usage: construct example <4.1|14|6.1|7.1|7.2> [params]".into(),
        ));
    };
    match label.as_str() {
        "4.1" => {
            arg_count(rest, 0, 1, "example 4.1 [eps]")?;
            let eps = match rest.first() {
                Some(e) => parse_rat(e, "eps")?,
                None => rat(1, 2),
            };
            Ok(vec![squared_norm_example(eps)?])
        }
        "14" => {
            arg_count(rest, 0, 0, "example 14")?;
            Ok(vec![triple_product_example()?])
        }
        "6.1" => {
            arg_count(rest, 0, 1, "example 6.1 [m]")?;
            let m = match rest.first() {
                Some(m) => parse_count(m, "m")?,
                None => 1,
            };
            Ok(vec![degree_growth_example(m)?])
        }
        "7.1" => {
            arg_count(rest, 0, 3, "example 7.1 [l1 l2 l3]")?;
            if rest.is_empty() {
                return suites::line_multiple_cases()
                    .into_iter()
                    .map(|(a, b, c)| line_multiple_example((rat_int(a), rat_int(b), rat_int(c))))
                    .collect();
            }
            if rest.len() != 3 {
                return Err(Error::InvalidInput(
                    "example 7.1 takes no parameters or all three coefficients".into(),
                ));
            }
            let lambda = (
                parse_rat(&rest[0], "l1")?,
                parse_rat(&rest[1], "l2")?,
                parse_rat(&rest[2], "l3")?,
            );
            Ok(vec![line_multiple_example(lambda)?])
        }
        "7.2" => {
            arg_count(rest, 0, 0, "example 7.2")?;
            Ok(vec![split_difference_example()?])
        }
        other => Err(Error::InvalidInput(format!(
            "unknown example `{other}`; the labels are 4.1, 14, 6.1, 7.1, 7.2"
        ))),
    }
}

fn render_certificate(cert: &Certificate) -> String {
    let mut out = format!("construction: {}\n", cert.construction);
    if !cert.params.is_empty() {
        let line = cert
            .params
            .iter()
            .map(|(k, v)| format!("{k} = {v}"))
            .collect::<Vec<_>>()
            .join(", ");
        out.push_str(&format!("params: {line}\n"));
    }
    for (name, poly) in &cert.polynomials {
        out.push_str(&format!("{name} = {poly}\n"));
    }
    for claim in &cert.claims {
        out.push_str(&format!("{:>9}  {}: {}\n", claim.status, claim.kind, claim.computed));
    }
    for (key, value) in &cert.chosen_parameters {
        out.push_str(&format!("   chosen  {key}: {value}\n"));
    }
    out.push_str(if cert.is_verified() {
        "status: verified"
    } else {
        "status: no claims"
    });
    out.push('\n');
    out
}

fn verify_cmd(suite: &str) -> Result<Report> {
    let reports = suites::run_suite(suite);
    let mut human = String::new();
    let mut groups = Vec::new();
    let mut failures = 0usize;
    let mut certificates = 0usize;
    for report in &reports {
        match &report.result {
            Ok(certs) => {
                certificates += certs.len();
                human.push_str(&format!("   ok  {}\n", report.name));
                groups.push(json!({
                    "name": report.name,
                    "status": "ok",
                    "certificates": certs.len(),
                }));
            }
            Err(e) => {
                failures += 1;
                human.push_str(&format!(" FAIL  {}: {e}\n", report.name));
                groups.push(json!({
                    "name": report.name,
                    "status": "failed",
                    "error": e.to_string(),
                }));
            }
        }
    }
    if failures == 0 {
        human.push_str(&format!(
            "suite {suite}: all {} groups verified ({certificates} certificates)",
            reports.len()
        ));
    } else {
        human.push_str(&format!(
            "suite {suite}: {failures} of {} groups failed",
            reports.len()
        ));
    }
    let body = json!({
        "verb": "verify-paper",
        "suite": suite,
        "groups": groups,
        "certificates": certificates,
        "failures": failures,
    });
    Ok(Report {
        human,
        json: pretty(&body),
        failures,
    })
}

fn table_cmd(n: usize) -> Result<Report> {
    if n != 2 {
        return Err(Error::InvalidInput(format!(
            "the degree table is tabulated for n = 2 only, got n = {n}"
        )));
    }
    let cells = signature_table()?;
    let mut human = String::from("      ");
    for a in 0..=5 {
        human.push_str(&format!("a={a}   "));
    }
    human.push('\n');
    for b in 0..=5 {
        human.push_str(&format!("b={b}   "));
        for a in 0..=5 {
            let cell = &cells[b * 6 + a];
            human.push_str(&format!("{:<6}", cell.status));
        }
        human.push('\n');
    }
    let constructed = cells
        .iter()
        .filter(|c| c.source == "constructed")
        .count();
    let verified = cells
        .iter()
        .filter(|c| {
            c.source == "constructed"
                && c.certificate.as_ref().is_some_and(|cert| cert.is_verified())
        })
        .count();
    human.push_str(&format!(
        "constructed cells verified: {verified} of {constructed}"
    ));
    let failures = constructed - verified;
    Ok(Report {
        human,
        json: pretty(&cells),
        failures,
    })
}

fn bound_cmd(n: usize, target: usize) -> Result<Report> {
    let bound = degree_bound(n, target)?;
    let human =
        format!("degree estimate for a target of size {target} with n = {n}: {bound}");
    let body = json!({
        "verb": "bound",
        "n": n,
        "target": target,
        "bound": bound.to_string(),
    });
    Ok(Report::clean(human, body))
}
