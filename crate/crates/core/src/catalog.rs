//! Named forms and polynomial identities, built exactly. Parametric
//! families keep their parameters as extra polynomial variables so
//! identities can be checked symbolically.

use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::quadform::QuadForm;
use crate::rational::{format_rational, int, rat, Rational};

const ROBINSON: &str = "x^6 + y^6 + z^6 - x^4 y^2 - x^2 y^4 - x^4 z^2 - y^4 z^2 - x^2 z^4 - y^2 z^4 + 3 x^2 y^2 z^2";
const MOTZKIN: &str = "x^4 y^2 + x^2 y^4 + z^6 - 3 x^2 y^2 z^2";
const CHOI_LAM_S: &str = "x^4 y^2 + y^4 z^2 + z^4 x^2 - 3 x^2 y^2 z^2";
const CHOI_LAM_Q: &str = "x^2 y^2 + x^2 z^2 + y^2 z^2 + w^4 - 4 w x y z";
const ROBINSON_TILDE: &str = "x^2 (x - w)^2 + y^2 (y - w)^2 + z^2 (z - w)^2 + 2 x y z (x + y + z - 2 w)";
// Cubics through the seven points (1,0,0), (0,1,0), (0,0,1), (1,±1,±1).
const SEVEN_F: [&str; 3] = ["x (y^2 - z^2)", "y (z^2 - x^2)", "z (x^2 - y^2)"];
const SEVEN_G: &str = "(x^2 - y^2) (x^2 - z^2) (y^2 - z^2)";
const ROBINSON_F: [&str; 2] = ["(x^3 - x z^2)", "(y^3 - y z^2)"];
const P_T: &str = "(2 - t^2) (x^6 - x^4 y^2 - x^2 y^4 + y^6) + (2 t^4 - 3 t^2) (x^4 + y^4) z^2 \
                   + (6 t^2 - 4 t^4 + t^6) x^2 y^2 z^2 - t^6 (x^2 z^4 + y^2 z^4 - z^6)";
const M_T: &str = "(1 - 2 t2) (x^4 y^2 + x^2 y^4) + t2^2 (x^4 z^2 + y^4 z^2) - (3 - 8 t2 + 2 t2^2) x^2 y^2 z^2 \
                   - 2 t2 (x^2 + y^2) z^4 + z^6";
const S_T: &str = "t^4 (x^6 + y^6 + z^6) + (1 - 2 t^6) (x^4 y^2 + y^4 z^2 + z^4 x^2) \
                   + (t^8 - 2 t^2) (x^2 y^4 + y^2 z^4 + z^2 x^4) - 3 (1 - 2 t^2 + t^4 - 2 t^6 + t^8) x^2 y^2 z^2";
const U_C: &str = "x^2 y^2 (x - y)^2 + y^2 z^2 (y - z)^2 + z^2 x^2 (z - x)^2 + c x y z (x - y) (y - z) (z - x)";
const OCTIC_T: &str = "x^4 y^4 + x^2 z^6 + y^2 z^6 - 3 x^2 y^2 z^4";
const OCTIC_U: &str = "x^2 (x - z)^2 (x - 2 z)^2 (x - 3 z)^2 + y^2 (y - z)^2 (y - 2 z)^2 (y - 3 z)^2";

fn parse(text: &str, names: &[&str]) -> Poly {
    Poly::parse(text, names).unwrap_or_else(|e| panic!("catalog text `{text}` does not parse: {e}"))
}

fn seven_point_quadratic(u: [&str; 3]) -> String {
    format!(
        "5 ({a})^2 + 5 ({b})^2 + 5 ({c})^2 - 6 ({a}) ({b}) - 6 ({a}) ({c}) - 6 ({b}) ({c})",
        a = u[0],
        b = u[1],
        c = u[2]
    )
}

/// Description of a catalog form.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub aliases: &'static [&'static str],
    pub vars: &'static [&'static str],
    pub params: &'static [&'static str],
    /// Degree of the form; the gondola's degree is `2d`.
    pub degree: u32,
    pub range: &'static str,
    pub description: &'static str,
}

const XYZ: &[&str] = &["x", "y", "z"];
const XYZW: &[&str] = &["x", "y", "z", "w"];

pub const ENTRIES: &[CatalogEntry] = &[
    CatalogEntry {
        name: "motzkin",
        aliases: &["M"],
        vars: XYZ,
        params: &[],
        degree: 6,
        range: "",
        description: "Motzkin's sextic, psd and not sos",
    },
    CatalogEntry {
        name: "robinson",
        aliases: &["R"],
        vars: XYZ,
        params: &[],
        degree: 6,
        range: "",
        description: "Robinson's sextic with ten zeros",
    },
    CatalogEntry {
        name: "robinson_tilde",
        aliases: &["R~"],
        vars: XYZW,
        params: &[],
        degree: 4,
        range: "",
        description: "Robinson's quaternary quartic",
    },
    CatalogEntry {
        name: "choi_lam_s",
        aliases: &["S"],
        vars: XYZ,
        params: &[],
        degree: 6,
        range: "",
        description: "Choi-Lam ternary sextic S",
    },
    CatalogEntry {
        name: "choi_lam_q",
        aliases: &["Q"],
        vars: XYZW,
        params: &[],
        degree: 4,
        range: "",
        description: "Choi-Lam quaternary quartic Q",
    },
    CatalogEntry {
        name: "seven_point_T",
        aliases: &["T"],
        vars: XYZ,
        params: &[],
        degree: 6,
        range: "",
        description: "Q(F1, F2, F3) for an indefinite quadratic Q and the seven-point cubics; psd, not sos",
    },
    CatalogEntry {
        name: "P_c",
        aliases: &[],
        vars: XYZ,
        params: &["c"],
        degree: 6,
        range: "psd for small |c|; equals 2S at c = 1",
        description: "F1^2 + F2^2 + F3^2 + c G on the seven points",
    },
    CatalogEntry {
        name: "Phi",
        aliases: &[],
        vars: XYZ,
        params: &["c1", "c2", "c3", "c4"],
        degree: 6,
        range: "any rationals",
        description: "c1 F1^2 + 2 c2 F1 F2 + c3 F2^2 + c4 R over the Robinson cubics F1 = x^3 - x z^2, F2 = y^3 - y z^2",
    },
    CatalogEntry {
        name: "R_t",
        aliases: &[],
        vars: XYZ,
        params: &["t"],
        degree: 6,
        range: "t > 0",
        description: "Robinson family with zeros at the eight points and (1, ±t, 0); R_1 = R",
    },
    CatalogEntry {
        name: "P_t",
        aliases: &[],
        vars: XYZ,
        params: &["t"],
        degree: 6,
        range: "0 < t^2 < 2",
        description: "F1t^2 + F2t^2 + G_t for the points (±1, ±1), (±t, 0), (0, ±t)",
    },
    CatalogEntry {
        name: "U_c",
        aliases: &[],
        vars: XYZ,
        params: &["c"],
        degree: 6,
        range: "psd iff |c| <= 4 sqrt(sqrt 2 - 1)",
        description: "sum of squares of xy(x-y), yz(y-z), zx(z-x) plus c xyz(x-y)(y-z)(z-x)",
    },
    CatalogEntry {
        name: "M_t",
        aliases: &[],
        vars: XYZ,
        params: &["t2"],
        degree: 6,
        range: "parameter is t^2; psd iff t^2 <= 1/2",
        description: "Motzkin family; M_0 = M, a perfect square at t^2 = 1/2",
    },
    CatalogEntry {
        name: "S_t",
        aliases: &[],
        vars: XYZ,
        params: &["t"],
        degree: 6,
        range: "any rational t",
        description: "family joining S (t = 0) and R (t = 1)",
    },
    CatalogEntry {
        name: "octic_T",
        aliases: &[],
        vars: XYZ,
        params: &[],
        degree: 8,
        range: "",
        description: "ternary octic x^4 y^4 + x^2 z^6 + y^2 z^6 - 3 x^2 y^2 z^4",
    },
    CatalogEntry {
        name: "octic_U",
        aliases: &[],
        vars: XYZ,
        params: &[],
        degree: 8,
        range: "",
        description: "ternary octic vanishing on the 4 x 4 grid",
    },
    CatalogEntry {
        name: "gondola",
        aliases: &[],
        vars: XYZ,
        params: &["d", "c"],
        degree: 0,
        range: "integer d >= 3; psd for 0 <= c <= c(d)",
        description: "(x)_d^2 + (y)_d^2 + c g_d on the triangle lattice minus two corners, homogenized",
    },
];

pub fn lookup(name: &str) -> Result<&'static CatalogEntry> {
    ENTRIES
        .iter()
        .find(|e| e.name == name || e.aliases.contains(&name))
        .ok_or_else(|| Error::UnknownName(name.to_string()))
}

/// A form whose parameters are extra trailing variables, divided by a
/// clearing polynomial in the parameters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Symbolic {
    pub names: Vec<&'static str>,
    pub numerator: Poly,
    pub clearing: Poly,
}

fn names_of(e: &CatalogEntry) -> Vec<&'static str> {
    e.vars.iter().chain(e.params.iter()).copied().collect()
}

/// The form with parameters as variables. Not available for the gondola,
/// whose degree depends on its parameter.
pub fn symbolic(name: &str) -> Result<Symbolic> {
    let e = lookup(name)?;
    let names = names_of(e);
    let n = names.len();
    let p = |s: &str| parse(s, &names);
    let one = Poly::one(n);
    let (numerator, clearing) = match e.name {
        "motzkin" => (p(MOTZKIN), one),
        "robinson" => (p(ROBINSON), one),
        "robinson_tilde" => (p(ROBINSON_TILDE), one),
        "choi_lam_s" => (p(CHOI_LAM_S), one),
        "choi_lam_q" => (p(CHOI_LAM_Q), one),
        "seven_point_T" => (p(&seven_point_quadratic(SEVEN_F)), one),
        "P_c" => (
            p(&format!(
                "({})^2 + ({})^2 + ({})^2 + c {}",
                SEVEN_F[0], SEVEN_F[1], SEVEN_F[2], SEVEN_G
            )),
            one,
        ),
        "Phi" => (
            p(&format!(
                "c1 {a}^2 + 2 c2 {a} {b} + c3 {b}^2 + c4 ({r})",
                a = ROBINSON_F[0],
                b = ROBINSON_F[1],
                r = ROBINSON
            )),
            one,
        ),
        "R_t" => (
            p(&format!(
                "(t^4 + 2 t^2 - 3) t^4 {a}^2 + (1 + 2 t^2 - 3 t^4) {b}^2 + 3 t^4 ({r})",
                a = ROBINSON_F[0],
                b = ROBINSON_F[1],
                r = ROBINSON
            )),
            p("3 t^4"),
        ),
        "P_t" => (p(P_T), one),
        "U_c" => (p(U_C), one),
        "M_t" => (p(M_T), one),
        "S_t" => (p(S_T), one),
        "octic_T" => (p(OCTIC_T), one),
        "octic_U" => (p(OCTIC_U), one),
        _ => return Err(Error::Catalog(format!("`{}` has no symbolic form", e.name))),
    };
    Ok(Symbolic {
        names,
        numerator,
        clearing,
    })
}

fn check_params(e: &CatalogEntry, params: &[Rational]) -> Result<()> {
    if params.len() != e.params.len() {
        return Err(Error::ParameterCount {
            name: e.name.to_string(),
            expected: e.params.len(),
            got: params.len(),
        });
    }
    Ok(())
}

/// Substitutes parameter values into a symbolic form.
pub fn specialize(sym: &Symbolic, nvars: usize, params: &[Rational]) -> Result<Poly> {
    let mut num = sym.numerator.clone();
    let mut clr = sym.clearing.clone();
    for (k, v) in params.iter().enumerate().rev() {
        num = num.substitute(nvars + k, v)?;
        clr = clr.substitute(nvars + k, v)?;
    }
    let c = clr.as_constant().unwrap_or_else(Rational::zero);
    if c.is_zero() {
        return Err(Error::Domain("parameter value outside the family".into()));
    }
    Ok(num.scale(&(Rational::one() / c)))
}

fn gondola_params(params: &[Rational]) -> Result<(u32, Rational)> {
    let d = &params[0];
    if !d.is_integer() || d < &int(3) || d > &int(64) {
        return Err(Error::Domain("gondola degree must be an integer between 3 and 64".into()));
    }
    Ok((d.to_integer().try_into().expect("small"), params[1].clone()))
}

/// The form at rational parameter values.
pub fn form(name: &str, params: &[Rational]) -> Result<Poly> {
    let e = lookup(name)?;
    check_params(e, params)?;
    if e.name == "gondola" {
        let (d, c) = gondola_params(params)?;
        return crate::interp::gondola_form(d, &c);
    }
    if e.name == "R_t" && !params[0].is_positive() {
        return Err(Error::Domain("R_t needs t > 0".into()));
    }
    specialize(&symbolic(name)?, e.vars.len(), params)
}

fn pts(rows: &[&[i64]]) -> Vec<Vec<Rational>> {
    rows.iter().map(|r| r.iter().map(|&v| int(v)).collect()).collect()
}

fn robinson_points() -> Vec<Vec<Rational>> {
    pts(&[&[1, 0, 1], &[-1, 0, 1], &[0, 1, 1], &[0, -1, 1], &[1, 1, 1], &[1, -1, 1], &[-1, 1, 1], &[-1, -1, 1]])
}

fn seven_points() -> Vec<Vec<Rational>> {
    pts(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1], &[1, 1, 1], &[1, 1, -1], &[1, -1, 1], &[1, -1, -1]])
}

/// The listed zeros of a form (projective points).
pub fn listed_zeros(name: &str, params: &[Rational]) -> Result<Vec<Vec<Rational>>> {
    let e = lookup(name)?;
    check_params(e, params)?;
    let motzkin = || pts(&[&[1, 1, 1], &[1, 1, -1], &[1, -1, 1], &[1, -1, -1], &[1, 0, 0], &[0, 1, 0]]);
    Ok(match e.name {
        "motzkin" | "M_t" => motzkin(),
        "robinson" => {
            let mut z = robinson_points();
            z.extend(pts(&[&[1, 1, 0], &[1, -1, 0]]));
            z
        }
        "R_t" => {
            let t = &params[0];
            let mut z = robinson_points();
            z.push(vec![int(1), t.clone(), int(0)]);
            z.push(vec![int(1), -t.clone(), int(0)]);
            z
        }
        "Phi" => robinson_points(),
        "robinson_tilde" => pts(&[
            &[0, 0, 0, 1],
            &[1, 0, 0, 1],
            &[0, 1, 0, 1],
            &[0, 0, 1, 1],
            &[1, 1, 0, 1],
            &[1, 0, 1, 1],
            &[0, 1, 1, 1],
        ]),
        "choi_lam_s" | "seven_point_T" | "P_c" => seven_points(),
        "choi_lam_q" => pts(&[
            &[1, 0, 0, 0],
            &[0, 1, 0, 0],
            &[0, 0, 1, 0],
            &[1, 1, 1, 1],
            &[1, -1, -1, 1],
            &[-1, 1, -1, 1],
            &[-1, -1, 1, 1],
        ]),
        "P_t" => {
            let t = &params[0];
            let mut z = pts(&[&[1, 1, 1], &[1, -1, 1], &[-1, 1, 1], &[-1, -1, 1]]);
            z.push(vec![t.clone(), int(0), int(1)]);
            z.push(vec![-t.clone(), int(0), int(1)]);
            z.push(vec![int(0), t.clone(), int(1)]);
            z.push(vec![int(0), -t.clone(), int(1)]);
            z
        }
        "U_c" => pts(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1], &[1, 1, 0], &[1, 0, 1], &[0, 1, 1], &[1, 1, 1]]),
        "S_t" => pts(&[&[1, 1, 1], &[1, 1, -1], &[1, -1, 1], &[1, -1, -1]]),
        "octic_T" => pts(&[&[0, 0, 1], &[1, 1, 1], &[1, 1, -1], &[1, -1, 1], &[1, -1, -1], &[1, 0, 0], &[0, 1, 0]]),
        "octic_U" => (0..4).flat_map(|i| (0..4).map(move |j| vec![int(i), int(j), int(1)])).collect(),
        "gondola" => {
            let (d, _) = gondola_params(params)?;
            crate::interp::gondola_points(d)
                .into_iter()
                .map(|(i, j)| vec![int(i as i64), int(j as i64), int(1)])
                .collect()
        }
        _ => unreachable!("every entry lists its zeros"),
    })
}

/// Parameter values at which each family's listed zeros are checked.
pub fn zero_samples() -> Vec<(&'static str, Vec<Rational>)> {
    let mut out: Vec<(&'static str, Vec<Rational>)> = ENTRIES
        .iter()
        .filter(|e| e.params.is_empty())
        .map(|e| (e.name, Vec::new()))
        .collect();
    for t in [rat(1, 2), int(2), int(3)] {
        out.push(("R_t", vec![t]));
    }
    out.extend([
        ("P_c", vec![int(1)]),
        ("Phi", vec![int(1), int(0), int(1), int(1)]),
        ("P_t", vec![rat(1, 2)]),
        ("U_c", vec![int(1)]),
        ("M_t", vec![rat(1, 4)]),
        ("S_t", vec![int(2)]),
        ("gondola", vec![int(3), rat(4, 3)]),
        ("gondola", vec![int(4), rat(1, 2)]),
    ]);
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZeroCheck {
    pub point: Vec<String>,
    pub value_zero: bool,
    pub gradient_zero: bool,
}

/// Listed zeros, each verified to be a singular zero. Any failure is a
/// catalog error.
pub fn known_zeros(name: &str, params: &[Rational]) -> Result<Vec<ZeroCheck>> {
    let f = form(name, params)?;
    let grad = f.gradient();
    let mut out = Vec::new();
    for z in listed_zeros(name, params)? {
        let value_zero = f.evaluate(&z)?.is_zero();
        let gradient_zero = grad.iter().map(|g| g.evaluate(&z)).collect::<Result<Vec<_>>>()?.iter().all(Zero::is_zero);
        let check = ZeroCheck {
            point: z.iter().map(format_rational).collect(),
            value_zero,
            gradient_zero,
        };
        if !(value_zero && gradient_zero) {
            return Err(Error::Catalog(format!("listed zero {:?} of `{name}` fails", check.point)));
        }
        out.push(check);
    }
    Ok(out)
}

/// `multiplier * target = sum weight_k h_k^2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SosIdentity {
    pub multiplier: Poly,
    pub target: Poly,
    pub terms: Vec<(Poly, Poly)>,
}

impl SosIdentity {
    fn sides(&self) -> (Poly, Poly) {
        let lhs = &self.multiplier * &self.target;
        let rhs = self
            .terms
            .iter()
            .fold(Poly::zero(lhs.nvars()), |acc, (w, h)| &acc + &(w * &(h * h)));
        (lhs, rhs)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IdentityKind {
    Sos(SosIdentity),
    Equality { lhs: Poly, rhs: Poly },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Identity {
    pub name: String,
    pub description: &'static str,
    pub names: Vec<&'static str>,
    pub kind: IdentityKind,
}

impl Identity {
    pub fn sides(&self) -> (Poly, Poly) {
        match &self.kind {
            IdentityKind::Sos(s) => s.sides(),
            IdentityKind::Equality { lhs, rhs } => (lhs.clone(), rhs.clone()),
        }
    }
}

fn sos(names: &[&str], multiplier: &str, target: &str, terms: &[(&str, &str)]) -> IdentityKind {
    IdentityKind::Sos(SosIdentity {
        multiplier: parse(multiplier, names),
        target: parse(target, names),
        terms: terms.iter().map(|(w, h)| (parse(w, names), parse(h, names))).collect(),
    })
}

fn robinson_t_cleared() -> Poly {
    symbolic("R_t").expect("R_t is symbolic").numerator
}

/// Boundary decomposition `Phi[c1, -sigma, c3, 1] = R_v + mu (v^3 F1 - F2)^2`
/// at a rational minimizer `v`, with `c3`, `sigma`, `mu` solved from `v`
/// and `c1`.
fn boundary_identity(v: Rational, c1: Rational) -> Result<IdentityKind> {
    let a = &c1 + int(1);
    let v2 = &v * &v;
    let v3 = &v2 * &v;
    let v4 = &v2 * &v2;
    let b = (&v4 - &v2 + &a * int(3)) / (&v3 * &v3 * int(3));
    let c3 = &b - int(1);
    let sigma = (&a / &v3 - int(1) / &v - &v + &b * &v3) / int(2);
    let mu = (&b * &v4 * int(3) - (&v2 * int(2) + int(1))) / (&v4 * int(3));
    let lhs = form("Phi", &[c1, -sigma, c3, int(1)])?;
    let f = [parse(ROBINSON_F[0], XYZ), parse(ROBINSON_F[1], XYZ)];
    let h = &f[0].scale(&v3) - &f[1];
    let rhs = &form("R_t", &[v])? + &(&h * &h).scale(&mu);
    Ok(IdentityKind::Equality { lhs, rhs })
}

/// All catalog identities.
pub fn identities() -> Vec<Identity> {
    let mut out = Vec::new();
    let mut push = |name: &str, description: &'static str, names: &[&'static str], kind: IdentityKind| {
        out.push(Identity {
            name: name.to_string(),
            description,
            names: names.to_vec(),
            kind,
        })
    };

    let q = parse(CHOI_LAM_Q, XYZW);
    let vars = Poly::vars(4);
    let shifted = [
        &vars[0] - &vars[3],
        &vars[1] - &vars[3],
        &vars[2] - &vars[3],
        &(&(&vars[0] + &vars[1]) + &vars[2]) - &vars[3],
    ];
    push(
        "robinson_tilde_substitution",
        "R~(x - w, y - w, z - w, x + y + z - w) = 2 Q",
        XYZW,
        IdentityKind::Equality {
            lhs: parse(ROBINSON_TILDE, XYZW).compose(&shifted).expect("arity 4"),
            rhs: q.scale(&int(2)),
        },
    );

    let uv = &["v1", "v2", "v3"];
    let quartic = parse(
        "v1^4 + v2^4 + v3^4 - 2 v1^2 v2^2 - 2 v1^2 v3^2 - 2 v2^2 v3^2",
        uv,
    );
    push(
        "quartic_factorization",
        "v1^4 + v2^4 + v3^4 - 2 sum v_i^2 v_j^2 splits into four linear factors",
        uv,
        IdentityKind::Equality {
            lhs: quartic.clone(),
            rhs: parse("(v1 + v2 + v3) (v1 + v2 - v3) (v1 - v2 + v3) (v1 - v2 - v3)", uv),
        },
    );
    let fs: Vec<Poly> = SEVEN_F.iter().map(|f| parse(f, XYZ)).collect();
    let g7 = parse(SEVEN_G, XYZ);
    push(
        "seven_point_quartic_of_cubics",
        "P(F1, F2, F3) = G^2 for the seven-point cubics",
        XYZ,
        IdentityKind::Equality {
            lhs: quartic.compose(&fs).expect("arity 3"),
            rhs: &g7 * &g7,
        },
    );

    let un = &["u1", "u2", "u3"];
    let partial = parse("5 u1^2 + 5 u2^2 + 5 u3^2 - 6 u1 u2 - 6 u1 u3", un);
    let squares = QuadForm::from_poly(&partial).expect("quadratic").diagonalize();
    push(
        "truncated_quadratic_psd",
        "5 u1^2 + 5 u2^2 + 5 u3^2 - 6 u1 u2 - 6 u1 u3 as a positive combination of squares",
        un,
        IdentityKind::Sos(SosIdentity {
            multiplier: Poly::one(3),
            target: partial,
            terms: squares
                .iter()
                .map(|s| {
                    let h = (0..3).fold(Poly::zero(3), |acc, i| &acc + &Poly::var(3, i).scale(&s.coeffs[i]));
                    (Poly::constant(3, s.weight.clone()), h)
                })
                .collect(),
        }),
    );

    push(
        "seven_point_T_multiplier",
        "2 (x^2 + y^2 + z^2 - xy - xz - yz) T as three squares",
        XYZ,
        sos(
            XYZ,
            "2 (x^2 + y^2 + z^2 - x y - x z - y z)",
            &seven_point_quadratic(SEVEN_F),
            &[
                ("1", "(x - y)^2 (x y + 3 x z + 3 y z + z^2)"),
                ("1", "(x - z)^2 (x z + 3 x y + 3 y z + y^2)"),
                ("1", "(y - z)^2 (y z + 3 x y + 3 x z + x^2)"),
            ],
        ),
    );

    let xyt = &["x", "y", "t"];
    push(
        "binary_sextic_on_curve",
        "3 t^4 Phi_t = (t^2 x^2 - y^2)^2 ((t^4 + 2 t^2) x^2 + (2 t^2 + 1) y^2)",
        xyt,
        sos(
            xyt,
            "1",
            "(2 t^6 + t^8) x^6 - 3 t^4 x^4 y^2 - 3 t^4 x^2 y^4 + (1 + 2 t^2) y^6",
            &[("(t^4 + 2 t^2) x^2 + (2 t^2 + 1) y^2", "t^2 x^2 - y^2")],
        ),
    );

    let xyzt = &["x", "y", "z", "t"];
    push(
        "robinson_family_multiplier",
        "((2 t^4 + t^2) x^2 + (t^2 + 2) y^2) 3 t^4 R_t as four weighted squares",
        xyzt,
        IdentityKind::Sos(SosIdentity {
            multiplier: parse("(2 t^4 + t^2) x^2 + (t^2 + 2) y^2", xyzt),
            target: robinson_t_cleared(),
            terms: [
                ("3 t^6 (1 + 2 t^2)", "x z (x^2 - z^2)"),
                ("3 t^4 (2 + t^2)", "y z (y^2 - z^2)"),
                ("t^2 (t^2 - 1)^2", "x y (t^2 x^2 - y^2 + (1 - t^2) z^2)"),
                ("(2 + t^2) (1 + 2 t^2)", "t^4 x^4 - y^4 - t^4 x^2 z^2 + y^2 z^2"),
            ]
            .iter()
            .map(|(w, h)| (parse(w, xyzt), parse(h, xyzt)))
            .collect(),
        }),
    );

    push(
        "p_t_multiplier",
        "(x^2 + y^2) P_t as three weighted squares",
        xyzt,
        sos(
            xyzt,
            "x^2 + y^2",
            P_T,
            &[
                ("2 - t^2", "(x^2 - y^2) (x^2 + y^2 - t^2 z^2)"),
                ("t^2", "x z (x^2 + (t^2 - 1) y^2 - t^2 z^2)"),
                ("t^2", "y z ((t^2 - 1) x^2 + y^2 - t^2 z^2)"),
            ],
        ),
    );

    push(
        "cyclic_ratio_relation",
        "u + v + w + u v w = 0 for u = (x-y)/z, v = (y-z)/x, w = (z-x)/y, over the denominator xyz",
        XYZ,
        IdentityKind::Equality {
            lhs: parse("x y (x - y) + y z (y - z) + z x (z - x) + (x - y) (y - z) (z - x)", XYZ),
            rhs: Poly::zero(3),
        },
    );

    let xyzt2 = &["x", "y", "z", "t2"];
    push(
        "m_t_multiplier",
        "(x^2 + y^2) M_t as three weighted squares, t2 = t^2",
        xyzt2,
        sos(
            xyzt2,
            "x^2 + y^2",
            M_T,
            &[
                ("1 - 2 t2", "x y (x^2 + y^2 - 2 z^2)"),
                ("1", "y z (t2 (x^2 - y^2) - (x^2 - z^2))"),
                ("1", "x z (t2 (y^2 - x^2) - (y^2 - z^2))"),
            ],
        ),
    );

    push(
        "s_t_multiplier",
        "(x^2 + y^2) S_t as four weighted squares",
        xyzt,
        sos(
            xyzt,
            "x^2 + y^2",
            S_T,
            &[
                ("1", "t^2 x^4 + x^2 y^2 - t^4 x^2 y^2 - t^2 y^4 - x^2 z^2 + t^4 y^2 z^2"),
                ("1", "y z (y^2 - x^2 + t^2 (x^2 - z^2))"),
                ("t^4", "x z (y^2 - z^2 + t^2 (x^2 - y^2))"),
                ("(t^2 - 1)^2", "x y ((z^2 - x^2) + t^2 (y^2 - z^2))"),
            ],
        ),
    );

    let rst = &["x", "y", "z", "r", "s", "t"];
    let robinson6 = parse(ROBINSON, rst);
    push(
        "robinson_weighted_multiplier",
        "(r^2 x^2 + s^2 y^2 + t^2 z^2) R as a combination of squares with a 2 x 2 block",
        rst,
        IdentityKind::Equality {
            lhs: &parse("r^2 x^2 + s^2 y^2 + t^2 z^2", rst) * &robinson6,
            rhs: parse(
                "t^2 x^2 y^2 (x^2 - y^2)^2 + s^2 x^2 z^2 (x^2 - z^2)^2 + r^2 y^2 z^2 (y^2 - z^2)^2 \
                 + r^2 (x^2 - z^2)^2 (x^2 - y^2 + z^2)^2 \
                 + (t^2 - r^2 - s^2) (x^2 - z^2) (x^2 - y^2 + z^2) (y^2 - z^2) (-x^2 + y^2 + z^2) \
                 + s^2 (y^2 - z^2)^2 (-x^2 + y^2 + z^2)^2",
                rst,
            ),
        },
    );

    let r3 = &["r", "s", "t"];
    push(
        "multiplier_block_discriminant",
        "lambda4 lambda6 - lambda5^2 = (r+s-t)(r+t-s)(s+t-r)(r+s+t)/4",
        r3,
        IdentityKind::Equality {
            lhs: parse("r^2 s^2 - 1/4 (t^2 - r^2 - s^2)^2", r3),
            rhs: parse("1/4 (r + s - t) (r + t - s) (s + t - r) (r + s + t)", r3),
        },
    );

    for (v, c1, label) in [(rat(1, 2), int(1), "1/2"), (int(2), int(15), "2"), (int(3), int(53), "3")] {
        push(
            &format!("boundary_decomposition_v={label}"),
            "Phi[c1, -sigma, c3, 1] = R_v + mu (v^3 F1 - F2)^2 at a rational minimizer v",
            XYZ,
            boundary_identity(v, c1).expect("rational boundary data"),
        );
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentityCheck {
    pub name: String,
    pub description: String,
    pub pass: bool,
    /// `lhs - rhs`, empty when zero.
    pub residual: String,
    /// Both sides agree at 20 random rational points.
    pub spot_check: bool,
}

fn random_point(rng: &mut ChaCha8Rng, n: usize) -> Vec<Rational> {
    (0..n).map(|_| rat(rng.gen_range(-9..=9), rng.gen_range(1..=5))).collect()
}

pub fn check_identity(id: &Identity) -> Result<IdentityCheck> {
    let (lhs, rhs) = id.sides();
    let residual = &lhs - &rhs;
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let mut spot_check = true;
    for _ in 0..20 {
        let pt = random_point(&mut rng, lhs.nvars());
        spot_check &= lhs.evaluate(&pt)? == rhs.evaluate(&pt)?;
    }
    Ok(IdentityCheck {
        name: id.name.clone(),
        description: id.description.to_string(),
        pass: residual.is_zero(),
        residual: if residual.is_zero() {
            String::new()
        } else {
            residual.to_text(&id.names)
        },
        spot_check,
    })
}

pub fn verify_identity(name: &str) -> Result<IdentityCheck> {
    let id = identities().into_iter().find(|i| i.name == name).ok_or_else(|| Error::UnknownName(name.to_string()))?;
    check_identity(&id)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationCheck {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

fn relation(name: &str, pass: bool, detail: impl Into<String>) -> RelationCheck {
    RelationCheck {
        name: name.to_string(),
        pass,
        detail: detail.into(),
    }
}

/// Specializations, symmetries and substitutions relating the forms.
pub fn verify_relations() -> Result<Vec<RelationCheck>> {
    let mut out = Vec::new();
    let f = |name: &str, params: &[Rational]| form(name, params);
    out.push(relation("M_0 = M", f("M_t", &[int(0)])? == f("motzkin", &[])?, ""));
    out.push(relation("R_1 = R", f("R_t", &[int(1)])? == f("robinson", &[])?, ""));
    out.push(relation("S_0 = S", f("S_t", &[int(0)])? == f("choi_lam_s", &[])?, ""));
    out.push(relation("S_1 = R", f("S_t", &[int(1)])? == f("robinson", &[])?, ""));
    out.push(relation("P_1 = 2S", f("P_c", &[int(1)])? == f("choi_lam_s", &[])?.scale(&int(2)), ""));

    let rt = robinson_t_cleared();
    let reversed = rt.reverse_in(3, 8)?;
    out.push(relation(
        "R_{1/t}(x,y,z) = R_t(y,x,z)",
        reversed == rt.permute_vars(&[1, 0, 2, 3])?,
        "compared on 3 t^4 R_t with t as a variable",
    ));

    let st = symbolic("S_t")?.numerator;
    out.push(relation(
        "t^8 S_{1/t}(x,y,z) = S_t(x,z,y)",
        st.reverse_in(3, 8)? == st.permute_vars(&[0, 2, 1, 3])?,
        "coefficient reversal in t",
    ));

    let half = f("M_t", &[rat(1, 2)])?;
    let root = half.sqrt();
    let expected = parse("1/2 z (x^2 + y^2 - 2 z^2)", XYZ);
    let pass = root.as_ref().is_some_and(|r| r == &expected || r == &-expected.clone());
    out.push(relation(
        "M_t is a square at t^2 = 1/2",
        pass,
        root.map(|r| format!("square root {}", r.to_text(XYZ))).unwrap_or_default(),
    ));

    let t = &["t"];
    let line = [parse("1 + t", t), parse("1 - t", t), parse("-1", t)];
    out.push(relation(
        "T(1+t, 1-t, -1) = 48 t^4 + 4 t^6",
        f("seven_point_T", &[])?.compose(&line)? == parse("48 t^4 + 4 t^6", t),
        "",
    ));

    let uv = &["v1", "v2", "v3"];
    let quartic = parse("v1^4 + v2^4 + v3^4 - 2 v1^2 v2^2 - 2 v1^2 v3^2 - 2 v2^2 v3^2", uv);
    let fs: Vec<Poly> = SEVEN_F.iter().map(|s| parse(s, XYZ)).collect();
    let g = parse(SEVEN_G, XYZ);
    out.push(relation("P(F1,F2,F3) = G^2", quartic.compose(&fs)? == &g * &g, ""));

    let vt = &["v2", "v3", "t"];
    let qv = parse(&seven_point_quadratic(["v2 + v3 + t", "v2", "v3"]), vt);
    out.push(relation(
        "Q(v2+v3+t, v2, v3) = 4(v2-v3)^2 + t(4v2+4v3+5t)",
        qv == parse("4 (v2 - v3)^2 + t (4 v2 + 4 v3 + 5 t)", vt),
        "",
    ));

    let cyc = parse("x y (x - y) + y z (y - z) + z x (z - x) + (x - y) (y - z) (z - x)", XYZ);
    out.push(relation("u + v + w + uvw = 0", cyc.is_zero(), "numerator over xyz"));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn forms_are_homogeneous_of_their_degree() {
        for e in ENTRIES.iter().filter(|e| e.name != "gondola") {
            let params: Vec<Rational> = e.params.iter().map(|_| rat(3, 2)).collect();
            let p = form(e.name, &params).unwrap();
            assert!(p.is_homogeneous(), "{}", e.name);
            assert_eq!(p.degree(), e.degree, "{}", e.name);
        }
    }

    #[test]
    fn every_identity_has_zero_residual() {
        for id in identities() {
            let c = check_identity(&id).unwrap();
            assert!(c.pass, "{}: {}", c.name, c.residual);
            assert!(c.spot_check, "{}", c.name);
        }
    }

    #[test]
    fn relations_hold() {
        for r in verify_relations().unwrap() {
            assert!(r.pass, "{}", r.name);
        }
    }

    #[test]
    fn listed_zeros_are_singular() {
        for e in ENTRIES {
            let params: Vec<Rational> = match e.name {
                "gondola" => vec![int(4), int(1)],
                _ => e.params.iter().map(|_| rat(2, 3)).collect(),
            };
            assert!(known_zeros(e.name, &params).is_ok(), "{}", e.name);
        }
    }

    #[test]
    fn parameter_errors() {
        assert!(matches!(form("R_t", &[]), Err(Error::ParameterCount { .. })));
        assert!(matches!(form("nope", &[]), Err(Error::UnknownName(_))));
        assert!(form("R_t", &[int(0)]).is_err());
        assert_eq!(form("R", &[]).unwrap(), form("robinson", &[]).unwrap());
    }

    #[test]
    fn even_in_each_variable() {
        let m = symbolic("M_t").unwrap().numerator;
        for (mono, _) in m.terms() {
            assert!(mono.0[..3].iter().all(|e| e % 2 == 0));
        }
    }
}
