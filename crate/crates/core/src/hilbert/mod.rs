//! Hilbert's method end to end: sum the squares of an ideal basis, pick a
//! gap element with a fixed sign at the forced zeros, estimate how far it
//! can be added while staying positive, and certify the result is not a
//! sum of squares.

mod search;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

pub use search::{
    max_perturbation, nelder_mead, psd_audit, AuditReport, AuditVerdict, FloatPoly, MinimumSource, Perturbation,
    SampleRegion, Sampler, SearchConfig,
};

use crate::error::{Error, Result};
use crate::interval::{eval_poly, Interval};
use crate::linalg;
use crate::pointideal::{
    dual_witness, forced_zeros, fullness, gap_element, product_span, vanishing_basis, DualWitness,
    DualWitnessJson, ForcedPoint, ForcedZeros, ForcedZerosJson, IdealBasis, IdealBasisJson, Mode, PointSet,
};
use crate::poly::{default_names, Poly, PolyJson};
use crate::quadform::{Definiteness, QuadForm};
use crate::rational::{format_rational, from_f64_snapshot, Rational};

/// Brings `p` into the variables of `A`: a form in one extra variable is
/// dehomogenized for affine sets, a polynomial in one variable too few is
/// homogenized for projective sets.
fn align(p: &Poly, a: &PointSet, degree: u32) -> Result<Poly> {
    let n = a.nvars();
    match (a.mode(), p.nvars()) {
        (_, m) if m == n => Ok(p.clone()),
        (Mode::Affine, m) if m == n + 1 => p.dehomogenize(n),
        (Mode::Projective, m) if m + 1 == n => p.homogenize(degree, m),
        (_, m) => Err(Error::Arity { expected: n, got: m }),
    }
}

/// Result of testing membership of a singular polynomial in the product
/// span.
#[derive(Debug, Clone)]
pub enum Certificate {
    /// `p` is outside the span: not a sum of squares.
    NotSos(DualWitness),
    /// `p = sum Q_ij f_i f_j` over the listed basis.
    InSpan { basis: Vec<Poly>, q: QuadForm },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "result", rename_all = "snake_case")]
pub enum CertificateJson {
    NotSos {
        witness: DualWitnessJson,
    },
    InSpan {
        basis: Vec<String>,
        q: Vec<Vec<String>>,
        definiteness: Definiteness,
    },
}

impl Certificate {
    pub fn to_json(&self, names: &[&str]) -> CertificateJson {
        match self {
            Certificate::NotSos(w) => CertificateJson::NotSos { witness: w.to_json() },
            Certificate::InSpan { basis, q } => CertificateJson::InSpan {
                basis: basis.iter().map(|b| b.to_text(names)).collect(),
                q: q.matrix()
                    .iter()
                    .map(|row| row.iter().map(format_rational).collect())
                    .collect(),
                definiteness: q.definiteness(),
            },
        }
    }
}

/// Decides exactly whether `p`, which must have a double zero at every
/// point of `A`, lies in the span of the products `f_i f_j` of a basis of
/// `I_{1,d}(A)`.
pub fn not_sos_certificate(p: &Poly, a: &PointSet, d: u32) -> Result<Certificate> {
    let p = align(p, a, 2 * d)?;
    let singular = vanishing_basis(a, 2 * d, 2)?;
    if !singular.spans(&p) {
        return Err(Error::NotSingular);
    }
    let basis = vanishing_basis(a, d, 1)?;
    let span = product_span(&basis)?;
    if let Some(w) = dual_witness(&span, &p) {
        return Ok(Certificate::NotSos(w));
    }
    let q = span.coordinates(&p, basis.dim()).expect("p lies in the span");
    Ok(Certificate::InSpan {
        basis: basis.basis,
        q: QuadForm::new(q)?,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConstructOptions {
    /// Fixed perturbation constant; searched when absent.
    pub c: Option<Rational>,
    pub search: SearchConfig,
    /// Fraction of the estimated maximal constant actually used.
    pub safety: f64,
    pub audit_samples: usize,
    pub tol: f64,
}

impl Default for ConstructOptions {
    fn default() -> Self {
        ConstructOptions {
            c: None,
            search: SearchConfig::default(),
            safety: 0.9,
            audit_samples: 200_000,
            tol: 1e-9,
        }
    }
}

#[derive(Debug, Clone)]
pub struct ConstructionResult {
    pub basis: IdealBasis,
    pub g: Poly,
    pub forced: ForcedZeros,
    pub sign_fixed_g: Poly,
    /// The constant used, a rational snapshot of the search estimate
    /// times the safety factor (or the fixed constant).
    pub c_estimate: Rational,
    pub search: Option<Perturbation>,
    pub p_c: Poly,
    pub not_sos_witness: DualWitness,
    pub audit: AuditReport,
    pub singular_on_a: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstructionJson {
    pub basis: IdealBasisJson,
    pub g: String,
    pub forced: ForcedZerosJson,
    pub sign_fixed_g: String,
    pub c: String,
    pub search: Option<Perturbation>,
    pub p_c: String,
    pub p_c_poly: PolyJson,
    pub not_sos_witness: DualWitnessJson,
    pub singular_on_a: bool,
    pub witness_verified: bool,
    pub audit: AuditReport,
}

impl ConstructionResult {
    /// Homogeneous form of `p_c` (unchanged for projective sets).
    pub fn form(&self) -> Result<Poly> {
        homogeneous(&self.p_c, &self.basis)
    }

    pub fn witness_verified(&self) -> bool {
        let span = product_span(&self.basis).expect("order-1 basis");
        self.not_sos_witness.verify(&span.products, &self.p_c)
    }

    pub fn to_json(&self) -> ConstructionJson {
        let names = default_names(self.p_c.nvars());
        let names: Vec<&str> = names.iter().map(String::as_str).collect();
        ConstructionJson {
            basis: self.basis.to_json(),
            g: self.g.to_text(&names),
            forced: self.forced.to_json(),
            sign_fixed_g: self.sign_fixed_g.to_text(&names),
            c: format_rational(&self.c_estimate),
            search: self.search.clone(),
            p_c: self.p_c.to_text(&names),
            p_c_poly: self.p_c.to_json(&names),
            not_sos_witness: self.not_sos_witness.to_json(),
            singular_on_a: self.singular_on_a,
            witness_verified: self.witness_verified(),
            audit: self.audit.clone(),
        }
    }
}

fn homogeneous(p: &Poly, basis: &IdealBasis) -> Result<Poly> {
    match basis.pointset.mode() {
        Mode::Projective => Ok(p.clone()),
        Mode::Affine => p.homogenize(2 * basis.degree, p.nvars()),
    }
}

/// Forced zeros in homogeneous coordinates: exact points and boxes.
fn homogeneous_zeros(forced: &ForcedZeros, mode: Mode) -> (Vec<Vec<Rational>>, Vec<Vec<Interval>>) {
    let mut exact = Vec::new();
    let mut boxed = Vec::new();
    let lift = mode == Mode::Affine;
    for z in &forced.affine {
        match z {
            ForcedPoint::Rational { coords, .. } => {
                let mut c = coords.clone();
                if lift {
                    c.push(Rational::one());
                }
                exact.push(c);
            }
            ForcedPoint::Algebraic { boxes, .. } => {
                let mut b = boxes.clone();
                if lift {
                    b.push(Interval::point(Rational::one()));
                }
                boxed.push(b);
            }
        }
    }
    for z in &forced.at_infinity {
        match z {
            ForcedPoint::Rational { coords, .. } => exact.push(coords.clone()),
            ForcedPoint::Algebraic { boxes, .. } => boxed.push(boxes.clone()),
        }
    }
    (exact, boxed)
}

/// `+1` or `-1` when `h` has that strict sign at every zero.
fn common_sign(h: &Poly, exact: &[Vec<Rational>], boxed: &[Vec<Interval>]) -> Result<Option<i32>> {
    let mut signs = Vec::new();
    for p in exact {
        let v = h.evaluate(p)?;
        if v.is_zero() {
            return Ok(None);
        }
        signs.push(if v.is_positive() { 1 } else { -1 });
    }
    for b in boxed {
        let v = eval_poly(h, b);
        if v.contains_zero() {
            return Ok(None);
        }
        signs.push(if v.is_positive() { 1 } else { -1 });
    }
    Ok(match signs.first() {
        None => Some(1),
        Some(&s) if signs.iter().all(|&t| t == s) => Some(s),
        _ => None,
    })
}

/// A gap element positive at every forced zero: `±g` when possible,
/// otherwise the combination of complement elements equal to 1 at every
/// rational forced zero.
fn fix_sign(g: &Poly, complement: &[Poly], basis: &IdealBasis, forced: &ForcedZeros) -> Result<Poly> {
    let (exact, boxed) = homogeneous_zeros(forced, basis.pointset.mode());
    let hom = |h: &Poly| homogeneous(h, basis);
    if let Some(s) = common_sign(&hom(g)?, &exact, &boxed)? {
        return Ok(g.scale(&Rational::from_integer(s.into())));
    }
    let values: Vec<Vec<Rational>> = exact
        .iter()
        .map(|p| complement.iter().map(|h| hom(h)?.evaluate(p)).collect::<Result<Vec<_>>>())
        .collect::<Result<_>>()?;
    if values.iter().any(|row| row.iter().all(Zero::is_zero)) {
        return Err(Error::GapVanishesAtForcedZero);
    }
    let ones = vec![Rational::one(); exact.len()];
    let Some(coeffs) = linalg::solve(&values, &ones, complement.len()) else {
        return Err(Error::MixedSigns);
    };
    let mut out = Poly::zero(g.nvars());
    for (c, h) in coeffs.iter().zip(complement) {
        out = &out + &h.scale(c);
    }
    match common_sign(&hom(&out)?, &exact, &boxed)? {
        Some(1) => Ok(out),
        _ => Err(Error::MixedSigns),
    }
}

/// Runs the whole construction for `A` and degree `d`.
pub fn construct_not_sos(a: &PointSet, d: u32, opts: &ConstructOptions) -> Result<ConstructionResult> {
    let basis = vanishing_basis(a, d, 1)?;
    if !fullness(a, &basis)? {
        return Err(Error::NotFull);
    }
    let forced = forced_zeros(&basis)?;
    let gap = gap_element(a, d)?.ok_or(Error::NoGap)?;
    let sign_fixed_g = fix_sign(&gap.g, &gap.complement, &basis, &forced)?;

    let f = basis.basis.iter().fold(Poly::zero(a.nvars()), |acc, fj| &acc + &(fj * fj));
    let (c, search) = match &opts.c {
        Some(c) => (c.clone(), None),
        None => {
            let mut cfg = opts.search.clone();
            cfg.anchors = a.projective_points();
            let fh = homogeneous(&f, &basis)?;
            let gh = homogeneous(&sign_fixed_g, &basis)?;
            let est = max_perturbation(&fh, &gh, &cfg)?;
            let c = if est.c_max_estimate.is_infinite() {
                Rational::one()
            } else if est.c_max_estimate > 0.0 {
                from_f64_snapshot(opts.safety * est.c_max_estimate, 1_000_000)
            } else {
                Rational::zero()
            };
            if !c.is_positive() {
                return Err(Error::Domain("perturbation search found no positive constant".into()));
            }
            (c, Some(est))
        }
    };
    let p_c = &f + &sign_fixed_g.scale(&c);
    let span = &gap.span;
    let witness = dual_witness(span, &p_c).expect("a nonzero multiple of a gap element stays outside the span");
    let singular_on_a = vanishing_basis(a, 2 * d, 2)?.spans(&p_c);
    let audit = psd_audit(&homogeneous(&p_c, &basis)?, opts.audit_samples, opts.tol, opts.search.seed)?;
    Ok(ConstructionResult {
        basis,
        g: gap.g,
        forced,
        sign_fixed_g,
        c_estimate: c,
        search,
        p_c,
        not_sos_witness: witness,
        audit,
        singular_on_a,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn robinson() -> PointSet {
        PointSet::from_ints(
            Mode::Affine,
            &[&[-1, -1], &[-1, 0], &[-1, 1], &[0, -1], &[0, 1], &[1, -1], &[1, 0], &[1, 1]],
        )
        .unwrap()
    }

    fn p(s: &str) -> Poly {
        Poly::parse(s, &["x", "y"]).unwrap()
    }

    #[test]
    fn sum_of_basis_squares_is_in_span() {
        let f = &(&p("x^3 - x") * &p("x^3 - x")) + &(&p("y^3 - y") * &p("y^3 - y"));
        match not_sos_certificate(&f, &robinson(), 3).unwrap() {
            Certificate::InSpan { q, .. } => assert_eq!(q.definiteness(), Definiteness::PositiveDefinite),
            Certificate::NotSos(_) => panic!("sum of squares reported outside the span"),
        }
    }

    #[test]
    fn nonsingular_input_rejected() {
        let err = not_sos_certificate(&p("x^3 - x"), &robinson(), 3).unwrap_err();
        assert_eq!(err, Error::NotSingular);
    }

    #[test]
    fn robinson_construction() {
        let opts = ConstructOptions {
            search: SearchConfig {
                samples: 20_000,
                ..SearchConfig::default()
            },
            audit_samples: 20_000,
            ..ConstructOptions::default()
        };
        let r = construct_not_sos(&robinson(), 3, &opts).unwrap();
        assert!(r.singular_on_a);
        assert!(r.witness_verified());
        assert!(!r.audit.found_negative());
        assert!(r.sign_fixed_g.evaluate(&[int(0), int(0)]).unwrap().is_positive());
        assert!(r.c_estimate.is_positive());
    }
}
