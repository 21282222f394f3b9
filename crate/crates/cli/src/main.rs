//! `hilbert`: construct, certify and audit positive polynomials that are
//! not sums of squares.
//!
//! Exit codes: 0 when every check passes, 1 when an exact check fails or
//! an audit finds a negative value, 2 on invalid input or a violated
//! precondition.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use hilbert_core::analysis::{self, NewtonResult};
use hilbert_core::catalog;
use hilbert_core::hilbert::{self as construction, psd_audit, Certificate, ConstructOptions, SearchConfig};
use hilbert_core::interp;
use hilbert_core::pointideal::{self, PointSet, PointSetJson};
use hilbert_core::poly::{default_names, PolyJson};
use hilbert_core::rational::{display_rational, format_rational, int, parse_rational};
use hilbert_core::{Poly, Rational};

#[derive(Parser)]
#[command(name = "hilbert", version, about = "Positive polynomials that are not sums of squares")]
struct Cli {
    #[arg(long, value_enum, default_value = "text", global = true)]
    format: Format,
    /// Seed for every sampled search; results are reproducible per seed.
    #[arg(long, default_value_t = 0, global = true)]
    seed: u64,
    /// Tolerance below which a sampled value counts as negative.
    #[arg(long, default_value_t = 1e-9, global = true)]
    tol: f64,
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Verb {
    /// Run the full construction on a point set.
    Construct(ConstructArgs),
    /// Exact certificates.
    #[command(subcommand)]
    Certify(CertifyVerb),
    /// Sample a form on the sphere looking for negative values.
    Audit(AuditArgs),
    /// Named forms and identities.
    #[command(subcommand)]
    Catalog(CatalogVerb),
    /// Region, sigma, Newton polytope and multiplier checks.
    #[command(subcommand)]
    Analysis(AnalysisVerb),
    /// Triangular-lattice interpolation and the gondola family.
    #[command(subcommand)]
    Interp(InterpVerb),
    /// Vanishing ideals of point sets.
    #[command(subcommand)]
    Ideal(IdealVerb),
}

#[derive(Args)]
struct ConstructArgs {
    #[arg(long)]
    points: PathBuf,
    #[arg(long)]
    degree: u32,
    /// `auto` or a rational perturbation constant.
    #[arg(long, default_value = "auto")]
    c: String,
    #[arg(long, default_value_t = 200_000)]
    samples: usize,
    /// Also write the constructed polynomial as JSON.
    #[arg(long)]
    emit: Option<PathBuf>,
}

#[derive(Subcommand)]
enum CertifyVerb {
    /// Exact not-sos certificate for a polynomial singular on a point set.
    NotSos {
        #[arg(long)]
        poly: PathBuf,
        #[arg(long)]
        points: PathBuf,
        #[arg(long)]
        degree: u32,
        #[command(flatten)]
        vars: VarsArg,
    },
}

#[derive(Args)]
struct VarsArg {
    /// Variable names for polynomials given as text.
    #[arg(long, default_value = "x,y,z", value_delimiter = ',')]
    vars: Vec<String>,
}

#[derive(Args)]
struct AuditArgs {
    #[arg(long)]
    poly: PathBuf,
    /// Substitute a variable, as `name=value`.
    #[arg(long = "param")]
    params: Vec<String>,
    #[arg(long, default_value_t = 200_000)]
    samples: usize,
    #[command(flatten)]
    vars: VarsArg,
}

#[derive(Subcommand)]
enum CatalogVerb {
    List,
    /// Print a form with its listed zeros.
    Show {
        #[arg(long)]
        name: String,
        #[arg(long = "param")]
        params: Vec<String>,
        #[arg(long)]
        emit: Option<PathBuf>,
    },
    /// Verify identities, relations and listed zeros.
    Verify {
        #[arg(long)]
        all: bool,
        /// A single identity.
        #[arg(long)]
        name: Option<String>,
    },
}

#[derive(Subcommand)]
enum AnalysisVerb {
    Sigma {
        #[arg(long, allow_hyphen_values = true)]
        c1: String,
        #[arg(long, allow_hyphen_values = true)]
        c3: String,
        #[arg(long, default_value_t = 9)]
        digits: usize,
    },
    Region {
        #[arg(long, allow_hyphen_values = true)]
        r: String,
        #[arg(long, allow_hyphen_values = true)]
        s: String,
    },
    Newton {
        #[arg(long)]
        poly: PathBuf,
        #[command(flatten)]
        vars: VarsArg,
    },
    Triangle {
        #[arg(long)]
        r: String,
        #[arg(long)]
        s: String,
        #[arg(long)]
        t: String,
    },
    Classify {
        #[arg(long, allow_hyphen_values = true)]
        c1: String,
        #[arg(long, allow_hyphen_values = true)]
        c2: String,
        #[arg(long, allow_hyphen_values = true)]
        c3: String,
        #[arg(long, allow_hyphen_values = true)]
        c4: String,
    },
}

#[derive(Subcommand)]
enum InterpVerb {
    Gondola {
        #[arg(long)]
        d: u32,
        /// Perturbation constant for the emitted form.
        #[arg(long)]
        c: Option<String>,
        /// Estimate the largest psd constant.
        #[arg(long)]
        estimate: bool,
        #[arg(long, default_value_t = 200_000)]
        samples: usize,
        #[arg(long)]
        emit: Option<PathBuf>,
    },
    Biermann {
        #[arg(long)]
        r: u32,
        #[arg(long)]
        s: u32,
        #[arg(long)]
        d: u32,
    },
}

#[derive(Subcommand)]
enum IdealVerb {
    Basis {
        #[arg(long)]
        points: PathBuf,
        #[arg(long)]
        degree: u32,
        #[arg(long, default_value_t = 1)]
        order: u32,
    },
    /// Collinear and conconic incidences.
    Report {
        #[arg(long)]
        points: PathBuf,
    },
    Forced {
        #[arg(long)]
        points: PathBuf,
        #[arg(long)]
        degree: u32,
    },
    Gap {
        #[arg(long)]
        points: PathBuf,
        #[arg(long)]
        degree: u32,
    },
}

/// Outcome of one command: exact results, advisory results and the
/// overall pass flag.
struct Report {
    verb: &'static str,
    pass: bool,
    exact: Value,
    audit: Value,
    warnings: Vec<String>,
    summary: Vec<String>,
}

impl Report {
    fn new(verb: &'static str) -> Self {
        Report {
            verb,
            pass: true,
            exact: Value::Null,
            audit: Value::Null,
            warnings: Vec::new(),
            summary: Vec::new(),
        }
    }

    fn line(&mut self, s: impl Into<String>) {
        self.summary.push(s.into());
    }

    fn to_json(&self) -> Value {
        json!({
            "verb": self.verb,
            "pass": self.pass,
            "exact": self.exact,
            "audit": self.audit,
            "warnings": self.warnings,
        })
    }
}

fn read(path: &Path) -> anyhow::Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn write_json(path: &Path, v: &impl serde::Serialize) -> anyhow::Result<()> {
    fs::write(path, serde_json::to_string_pretty(v)?).with_context(|| format!("writing {}", path.display()))
}

fn rational(s: &str) -> anyhow::Result<Rational> {
    Ok(parse_rational(s.trim())?)
}

/// A polynomial from JSON, or from text in the given variables.
fn load_poly(path: &Path, vars: &[String]) -> anyhow::Result<(Poly, Vec<String>)> {
    let text = read(path)?;
    if text.trim_start().starts_with('{') {
        let pj: PolyJson = serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
        return Ok((Poly::from_json(&pj)?, pj.vars));
    }
    let names: Vec<&str> = vars.iter().map(String::as_str).collect();
    Ok((Poly::parse(text.trim(), &names)?, vars.to_vec()))
}

fn load_points(path: &Path) -> anyhow::Result<PointSet> {
    let pj: PointSetJson = serde_json::from_str(&read(path)?).with_context(|| format!("parsing {}", path.display()))?;
    Ok(PointSet::from_json(&pj)?)
}

fn split_param(s: &str) -> anyhow::Result<(String, Rational)> {
    let (k, v) = s.split_once('=').ok_or_else(|| anyhow!("parameter `{s}` is not name=value"))?;
    Ok((k.trim().to_string(), rational(v)?))
}

fn refs(names: &[String]) -> Vec<&str> {
    names.iter().map(String::as_str).collect()
}

fn construct(cli: &Cli, a: &ConstructArgs) -> anyhow::Result<Report> {
    let points = load_points(&a.points)?;
    let c = match a.c.as_str() {
        "auto" => None,
        s => Some(rational(s)?),
    };
    let opts = ConstructOptions {
        c,
        search: SearchConfig {
            samples: a.samples,
            seed: cli.seed,
            ..SearchConfig::default()
        },
        audit_samples: a.samples,
        tol: cli.tol,
        ..ConstructOptions::default()
    };
    let res = construction::construct_not_sos(&points, a.degree, &opts)?;
    let out = res.to_json();
    let mut r = Report::new("construct");
    r.pass = out.witness_verified && out.singular_on_a;
    r.line(format!("basis dimension   {} (exact)", out.basis.dimension));
    r.line(format!("forced zeros      {} (exact)", out.forced.count));
    r.line(format!("gap element       {}", out.sign_fixed_g));
    r.line(format!("c                 {}", display_rational(&res.c_estimate)));
    if let Some(p) = &res.search {
        r.line(format!("c max estimate    {:.6} (audit)", p.c_max_estimate));
    }
    r.line(format!("p_c               {}", out.p_c));
    r.line(format!("singular on A     {} (exact)", out.singular_on_a));
    r.line(format!("not-sos witness   {} (exact)", out.witness_verified));
    if res.audit.found_negative() {
        r.warnings.push(format!("sampled minimum {:e} is negative; lower c", res.audit.min_value));
    }
    r.line(format!("sampled minimum   {:e} (audit)", res.audit.min_value));
    if let Some(path) = &a.emit {
        let names = default_names(res.p_c.nvars());
        write_json(path, &res.p_c.to_json(&refs(&names)))?;
    }
    r.audit = serde_json::to_value(&out.audit)?;
    r.exact = serde_json::to_value(&out)?;
    Ok(r)
}

fn certify(v: &CertifyVerb) -> anyhow::Result<Report> {
    let CertifyVerb::NotSos { poly, points, degree, vars } = v;
    let (p, names) = load_poly(poly, &vars.vars)?;
    let a = load_points(points)?;
    let cert = construction::not_sos_certificate(&p, &a, *degree)?;
    let mut r = Report::new("certify");
    match &cert {
        Certificate::NotSos(w) => {
            r.line(format!("not a sum of squares (exact); functional value on p = {}", display_rational(&w.value)));
        }
        Certificate::InSpan { .. } => {
            r.pass = false;
            r.line("p lies in the span of products of the basis; no not-sos certificate");
        }
    }
    r.exact = serde_json::to_value(cert.to_json(&refs(&names)))?;
    Ok(r)
}

fn audit(cli: &Cli, a: &AuditArgs) -> anyhow::Result<Report> {
    let (mut p, mut names) = load_poly(&a.poly, &a.vars.vars)?;
    for s in &a.params {
        let (k, v) = split_param(s)?;
        let i = names.iter().position(|n| n == &k).ok_or_else(|| anyhow!("no variable named `{k}`"))?;
        p = p.substitute(i, &v)?;
        names.remove(i);
    }
    let rep = psd_audit(&p, a.samples, cli.tol, cli.seed)?;
    let mut r = Report::new("audit");
    r.pass = !rep.found_negative();
    r.line(format!("samples           {}", rep.samples));
    r.line(format!("minimum           {:e} (audit)", rep.min_value));
    r.line(if rep.found_negative() {
        "negative value found: not psd".to_string()
    } else {
        "no negative value found (not a proof)".to_string()
    });
    r.audit = serde_json::to_value(&rep)?;
    Ok(r)
}

fn params_for(entry: &catalog::CatalogEntry, given: &[String]) -> anyhow::Result<Vec<Rational>> {
    let given: Vec<(String, Rational)> = given.iter().map(|s| split_param(s)).collect::<anyhow::Result<_>>()?;
    for (k, _) in &given {
        if !entry.params.contains(&k.as_str()) {
            bail!("`{}` has no parameter `{k}`", entry.name);
        }
    }
    entry
        .params
        .iter()
        .map(|p| {
            given
                .iter()
                .find(|(k, _)| k == p)
                .map(|(_, v)| v.clone())
                .ok_or_else(|| anyhow!("missing --param {p}=<value>"))
        })
        .collect()
}

fn catalog_cmd(v: &CatalogVerb) -> anyhow::Result<Report> {
    let mut r = Report::new("catalog");
    match v {
        CatalogVerb::List => {
            for e in catalog::ENTRIES {
                let params = if e.params.is_empty() {
                    String::new()
                } else {
                    format!("[{}]", e.params.join(", "))
                };
                r.line(format!("{:<16}{:<20}{}", e.name, params, e.description));
            }
            r.exact = serde_json::to_value(catalog::ENTRIES)?;
        }
        CatalogVerb::Show { name, params, emit } => {
            let e = catalog::lookup(name)?;
            let vals = params_for(e, params)?;
            let p = catalog::form(e.name, &vals)?;
            let zeros = catalog::known_zeros(e.name, &vals)?;
            r.line(format!("{} = {}", e.name, p.to_text(e.vars)));
            r.line(format!("{} listed zeros, all singular (exact)", zeros.len()));
            for z in &zeros {
                let shown: Vec<String> = z.point.iter().map(|c| rational(c).map(|q| display_rational(&q))).collect::<anyhow::Result<_>>()?;
                r.line(format!("  ({})", shown.join(", ")));
            }
            if let Some(path) = emit {
                write_json(path, &p.to_json(e.vars))?;
            }
            r.exact = json!({
                "name": e.name,
                "params": vals.iter().map(format_rational).collect::<Vec<_>>(),
                "poly": p.to_json(e.vars),
                "text": p.to_text(e.vars),
                "zeros": zeros,
            });
        }
        CatalogVerb::Verify { all, name } => {
            let ids = match (name, all) {
                (Some(n), _) => vec![catalog::verify_identity(n)?],
                (None, true) => catalog::identities().iter().map(catalog::check_identity).collect::<Result<_, _>>()?,
                (None, false) => bail!("pass --all or --name <identity>"),
            };
            let mut ok = true;
            for c in &ids {
                ok &= c.pass && c.spot_check;
                r.line(format!("{} identity {}", if c.pass { "ok  " } else { "FAIL" }, c.name));
            }
            let mut relations = Vec::new();
            let mut zeros = Vec::new();
            if *all && name.is_none() {
                relations = catalog::verify_relations()?;
                for rel in &relations {
                    ok &= rel.pass;
                    r.line(format!("{} relation {}", if rel.pass { "ok  " } else { "FAIL" }, rel.name));
                }
                for (n, vals) in catalog::zero_samples() {
                    let res = catalog::known_zeros(n, &vals);
                    let pass = res.is_ok();
                    ok &= pass;
                    let shown: Vec<String> = vals.iter().map(display_rational).collect();
                    r.line(format!("{} zeros {n}({})", if pass { "ok  " } else { "FAIL" }, shown.join(", ")));
                    zeros.push(json!({"name": n, "params": vals.iter().map(format_rational).collect::<Vec<_>>(), "pass": pass}));
                }
            }
            r.pass = ok;
            r.exact = json!({"identities": ids, "relations": relations, "zeros": zeros});
        }
    }
    Ok(r)
}

fn analysis_cmd(v: &AnalysisVerb) -> anyhow::Result<Report> {
    let mut r = Report::new("analysis");
    match v {
        AnalysisVerb::Sigma { c1, c3, digits } => {
            let width = pow10_inv(*digits + 2);
            let s = analysis::sigma(&rational(c1)?, &rational(c3)?, &width)?;
            let j = s.to_json(*digits);
            let dec = |q: &Rational| analysis::decimal(q, *digits + 2);
            r.line(format!("sigma ~ {} (exact enclosure [{}, {}])", j.sigma_decimal, dec(&s.sigma.lo), dec(&s.sigma.hi)));
            r.line(format!("minimizer v ~ {}", dec(&s.v.midpoint())));
            r.line(format!("critical points are roots of {}", j.sextic));
            r.exact = serde_json::to_value(j)?;
        }
        AnalysisVerb::Region { r: rr, s } => {
            let (rr, s) = (rational(rr)?, rational(s)?);
            let inside = analysis::in_region_k(&rr, &s);
            r.line(format!(
                "{} is {} (exact)",
                analysis::binary_sextic(&rr, &s).to_text(&["x", "y"]),
                if inside { "psd" } else { "not psd" }
            ));
            r.exact = json!({"r": format_rational(&rr), "s": format_rational(&s), "in_region": inside});
        }
        AnalysisVerb::Newton { poly, vars } => {
            let (p, names) = load_poly(poly, &vars.vars)?;
            let res = analysis::newton_not_sos(&p)?;
            match &res {
                NewtonResult::Witness { target, coefficient, candidate, .. } => {
                    let mono = |e: &[u32]| Poly::monomial(hilbert_core::Monomial(e.to_vec()), int(1)).to_text(&refs(&names));
                    r.line(format!(
                        "not a sum of squares (exact): coefficient {coefficient} of {} can only come from the square of {}",
                        mono(target),
                        mono(candidate)
                    ));
                }
                NewtonResult::Inconclusive { .. } => {
                    r.pass = false;
                    r.line("inconclusive: every negative square monomial has several decompositions");
                }
            }
            r.exact = serde_json::to_value(res)?;
        }
        AnalysisVerb::Triangle { r: rr, s, t } => {
            let m = analysis::robinson_multiplier(&rational(rr)?, &rational(s)?, &rational(t)?)?;
            r.pass = m.feasible;
            r.line(format!(
                "discriminant {} = (r+s-t)(r+t-s)(s+t-r)(r+s+t)/4 (exact); {}",
                display_rational(&m.discriminant),
                if m.feasible { "feasible" } else { "infeasible" }
            ));
            r.exact = serde_json::to_value(m.to_json())?;
        }
        AnalysisVerb::Classify { c1, c2, c3, c4 } => {
            let class = analysis::classify_phi(&rational(c1)?, &rational(c2)?, &rational(c3)?, &rational(c4)?)?;
            let label = serde_json::to_value(class)?;
            r.line(format!("{} (exact)", label.as_str().unwrap_or_default()));
            r.exact = json!({"class": label});
        }
    }
    Ok(r)
}

fn pow10_inv(k: usize) -> Rational {
    (0..k).fold(int(1), |acc, _| acc / int(10))
}

fn interp_cmd(cli: &Cli, v: &InterpVerb) -> anyhow::Result<Report> {
    let mut r = Report::new("interp");
    match v {
        InterpVerb::Gondola { d, c, estimate, samples, emit } => {
            let mut g = interp::gondola(*d)?;
            r.pass = g.g_singular && g.g_positive_on_forced;
            r.line(format!("points {} forced {:?}", g.points.len(), g.forced));
            r.line(format!("g singular on the points {} (exact)", g.g_singular));
            r.line(format!("g positive on forced zeros {} (exact)", g.g_positive_on_forced));
            if *estimate {
                let cfg = SearchConfig {
                    samples: *samples,
                    seed: cli.seed,
                    ..SearchConfig::default()
                };
                let p = interp::gondola_max_c(*d, &cfg)?;
                r.line(format!("c max estimate {:.6} (audit)", p.c_max_estimate));
                g.c_estimate = Some(p.c_max_estimate);
                r.audit = serde_json::to_value(&p)?;
            }
            let mut exact = serde_json::to_value(&g)?;
            if let Some(c) = c {
                let form = g.form(&rational(c)?)?;
                let names = ["x", "y", "z"];
                r.line(format!("form {}", form.to_text(&names)));
                exact["form"] = serde_json::to_value(form.to_json(&names))?;
                if let Some(path) = emit {
                    write_json(path, &form.to_json(&names))?;
                }
            } else if emit.is_some() {
                bail!("--emit needs --c");
            }
            r.exact = exact;
        }
        InterpVerb::Biermann { r: rr, s, d } => {
            let phi = interp::biermann(*rr, *s, *d)?;
            let names = ["x", "y"];
            r.line(format!("phi = {}", phi.to_text(&names)));
            r.exact = json!({"poly": phi.to_json(&names), "text": phi.to_text(&names)});
        }
    }
    Ok(r)
}

fn ideal_cmd(v: &IdealVerb) -> anyhow::Result<Report> {
    let mut r = Report::new("ideal");
    match v {
        IdealVerb::Basis { points, degree, order } => {
            let a = load_points(points)?;
            let b = pointideal::vanishing_basis(&a, *degree, *order)?;
            let j = b.to_json();
            r.line(format!("dimension {} (lower bound {}) (exact)", j.dimension, j.lower_bound));
            for p in &j.basis {
                r.line(format!("  {p}"));
            }
            r.exact = serde_json::to_value(j)?;
        }
        IdealVerb::Report { points } => {
            let a = load_points(points)?;
            let rep = pointideal::geometry_report(&a)?;
            r.line(format!("max collinear {}, max on a conic {}", rep.max_collinear, rep.max_on_conic));
            r.exact = serde_json::to_value(rep)?;
        }
        IdealVerb::Forced { points, degree } => {
            let a = load_points(points)?;
            let b = pointideal::vanishing_basis(&a, *degree, 1)?;
            let f = pointideal::forced_zeros(&b)?.to_json();
            r.line(format!("{} forced zeros (exact)", f.count));
            r.exact = serde_json::to_value(f)?;
        }
        IdealVerb::Gap { points, degree } => {
            let a = load_points(points)?;
            match pointideal::gap_element(&a, *degree)? {
                Some(g) => {
                    let names = default_names(g.g.nvars());
                    r.line(format!("gap element {} (exact)", g.g.to_text(&refs(&names))));
                    r.exact = json!({"g": g.g.to_text(&refs(&names)), "singular_dim": g.singular_dim, "witness": g.witness.to_json()});
                }
                None => {
                    r.pass = false;
                    r.line("no gap: the singular ideal equals the product span");
                }
            }
        }
    }
    Ok(r)
}

fn run(cli: &Cli) -> anyhow::Result<Report> {
    match &cli.verb {
        Verb::Construct(a) => construct(cli, a),
        Verb::Certify(v) => certify(v),
        Verb::Audit(a) => audit(cli, a),
        Verb::Catalog(v) => catalog_cmd(v),
        Verb::Analysis(v) => analysis_cmd(v),
        Verb::Interp(v) => interp_cmd(cli, v),
        Verb::Ideal(v) => ideal_cmd(v),
    }
}

fn print(r: &Report, format: Format) -> std::io::Result<()> {
    let mut out = std::io::stdout().lock();
    match format {
        Format::Json => writeln!(out, "{}", serde_json::to_string_pretty(&r.to_json()).expect("report serializes")),
        Format::Text => {
            for l in &r.summary {
                writeln!(out, "{l}")?;
            }
            for w in &r.warnings {
                writeln!(out, "warning: {w}")?;
            }
            writeln!(out, "{}", if r.pass { "PASS" } else { "FAIL" })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(r) => {
            // A closed pipe downstream is not an error of ours.
            let _ = print(&r, cli.format);
            if r.pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
