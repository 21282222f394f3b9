//! Common real zeros of an ideal basis in the plane: the zeros forced on
//! every element of `I_{1,d}(A)` beyond `A` itself.
//!
//! Zeros are located in the chart `z = 1` by resultants and then on the
//! line `z = 0` by a univariate gcd. Rational zeros are found exactly.
//! Irrational ones are returned as rational boxes; a box is `certified`
//! when a Krawczyk test proves it holds exactly one common zero of two of
//! the basis elements.

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::{IdealBasis, Mode, PointSet};
use crate::error::{Error, Result};
use crate::interval::{eval_poly, Interval, IntervalJson};
use crate::linalg;
use crate::poly::Poly;
use crate::rational::{format_rational, Rational};
use crate::upoly::{interpolate, RealRoot, UPoly};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ForcedMethod {
    Resultant,
    VerifiedInput,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ForcedPoint {
    Rational {
        coords: Vec<Rational>,
        simple: bool,
    },
    Algebraic {
        boxes: Vec<Interval>,
        certified: bool,
        simple: Option<bool>,
    },
}

impl ForcedPoint {
    pub fn as_rational(&self) -> Option<&[Rational]> {
        match self {
            ForcedPoint::Rational { coords, .. } => Some(coords),
            ForcedPoint::Algebraic { .. } => None,
        }
    }

    pub fn is_simple(&self) -> bool {
        match self {
            ForcedPoint::Rational { simple, .. } => *simple,
            ForcedPoint::Algebraic { simple, .. } => simple.unwrap_or(false),
        }
    }

    pub fn to_json(&self) -> ForcedPointJson {
        match self {
            ForcedPoint::Rational { coords, simple } => ForcedPointJson::Rational {
                coords: coords.iter().map(format_rational).collect(),
                simple: *simple,
            },
            ForcedPoint::Algebraic {
                boxes,
                certified,
                simple,
            } => ForcedPointJson::Algebraic {
                boxes: boxes.iter().map(IntervalJson::from).collect(),
                certified: *certified,
                simple: *simple,
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ForcedPointJson {
    Rational {
        coords: Vec<String>,
        simple: bool,
    },
    Algebraic {
        boxes: Vec<IntervalJson>,
        certified: bool,
        simple: Option<bool>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ForcedZeros {
    /// Zeros with `z != 0`: two coordinates for affine sets, `(a, b, 1)`
    /// for projective sets.
    pub affine: Vec<ForcedPoint>,
    /// Zeros on the line `z = 0`, as `(a, b, 0)`.
    pub at_infinity: Vec<ForcedPoint>,
    pub method: ForcedMethod,
    /// Points of `A` at which the basis gradients are dependent.
    pub tangential: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ForcedZerosJson {
    pub affine: Vec<ForcedPointJson>,
    pub at_infinity: Vec<ForcedPointJson>,
    pub method: ForcedMethod,
    pub tangential: Vec<usize>,
    pub count: usize,
}

impl ForcedZeros {
    pub fn count(&self) -> usize {
        self.affine.len() + self.at_infinity.len()
    }

    pub fn all(&self) -> impl Iterator<Item = &ForcedPoint> {
        self.affine.iter().chain(&self.at_infinity)
    }

    pub fn to_json(&self) -> ForcedZerosJson {
        ForcedZerosJson {
            affine: self.affine.iter().map(ForcedPoint::to_json).collect(),
            at_infinity: self.at_infinity.iter().map(ForcedPoint::to_json).collect(),
            method: self.method,
            tangential: self.tangential.clone(),
            count: self.count(),
        }
    }
}

/// Coefficients of `p` in `var`, padded to `deg + 1`, at a point where the
/// other variable takes the value `t`.
fn coeffs_at(p: &Poly, var: usize, t: &Rational, deg: usize) -> Vec<Rational> {
    let other = 1 - var;
    let mut out = vec![Rational::zero(); deg + 1];
    for (m, c) in p.terms() {
        let mut v = c.clone();
        for _ in 0..m.0[other] {
            v *= t;
        }
        out[m.0[var] as usize] += v;
    }
    out
}

fn sylvester_det(f: &[Rational], g: &[Rational]) -> Rational {
    let (m, n) = (f.len() - 1, g.len() - 1);
    let size = m + n;
    if size == 0 {
        return Rational::one();
    }
    let mut rows = vec![vec![Rational::zero(); size]; size];
    for i in 0..n {
        for (k, c) in f.iter().rev().enumerate() {
            rows[i][i + k] = c.clone();
        }
    }
    for i in 0..m {
        for (k, c) in g.iter().rev().enumerate() {
            rows[n + i][i + k] = c.clone();
        }
    }
    linalg::determinant(&rows)
}

/// Resultant of two polynomials in two variables with respect to `var`,
/// as a polynomial in the other variable. Computed from the Sylvester
/// matrix of formal degrees, evaluated at integer points and interpolated.
pub fn resultant(f: &Poly, g: &Poly, var: usize) -> Result<UPoly> {
    if f.nvars() != 2 || g.nvars() != 2 {
        return Err(Error::Arity {
            expected: 2,
            got: f.nvars().max(g.nvars()),
        });
    }
    if var > 1 {
        return Err(Error::Domain("variable index must be 0 or 1".into()));
    }
    let (m, n) = (f.degree_in(var) as usize, g.degree_in(var) as usize);
    let bound = (f.degree() * g.degree()) as i64;
    let xs: Vec<Rational> = (0..=bound).map(|k| Rational::from_integer(k.into())).collect();
    let ys: Vec<Rational> = xs
        .iter()
        .map(|t| sylvester_det(&coeffs_at(f, var, t, m), &coeffs_at(g, var, t, n)))
        .collect();
    Ok(interpolate(&xs, &ys))
}

/// Basis elements as forms in `(x, y, z)`.
fn planar_forms(basis: &IdealBasis) -> Result<Vec<Poly>> {
    let a = &basis.pointset;
    match a.mode() {
        Mode::Affine if a.nvars() == 2 => basis
            .basis
            .iter()
            .map(|p| p.homogenize(basis.degree, 2))
            .collect(),
        Mode::Projective if a.nvars() == 3 => Ok(basis.basis.clone()),
        _ => Err(Error::NotPlanar(a.nvars())),
    }
}

fn univariate_gcd(polys: impl IntoIterator<Item = UPoly>) -> Option<UPoly> {
    polys
        .into_iter()
        .filter(|p| !p.is_zero())
        .fold(None, |acc: Option<UPoly>, p| Some(match acc {
            None => p.monic(),
            Some(g) => g.gcd(&p),
        }))
}

fn gradient_rank_at(forms: &[Poly], pt: &[Rational]) -> Result<usize> {
    let rows = forms
        .iter()
        .map(|f| f.gradient().iter().map(|d| d.evaluate(pt)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    Ok(linalg::rank(&rows, pt.len()))
}

fn interval_simple(chart: &[Poly], bx: &[Interval]) -> Option<bool> {
    for i in 0..chart.len() {
        for j in i + 1..chart.len() {
            let gi: Vec<Interval> = chart[i].gradient().iter().map(|d| eval_poly(d, bx)).collect();
            let gj: Vec<Interval> = chart[j].gradient().iter().map(|d| eval_poly(d, bx)).collect();
            let det = gi[0].mul(&gj[1]).sub(&gi[1].mul(&gj[0]));
            if !det.contains_zero() {
                return Some(true);
            }
        }
    }
    None
}

/// Krawczyk test: proves `f = g = 0` has exactly one solution in `bx`.
fn krawczyk(f: &Poly, g: &Poly, bx: &[Interval]) -> bool {
    let mid: Vec<Rational> = bx.iter().map(Interval::midpoint).collect();
    let jf = f.gradient();
    let jg = g.gradient();
    let (Ok(a), Ok(b), Ok(c), Ok(d)) = (
        jf[0].evaluate(&mid),
        jf[1].evaluate(&mid),
        jg[0].evaluate(&mid),
        jg[1].evaluate(&mid),
    ) else {
        return false;
    };
    let det = &a * &d - &b * &c;
    if det.is_zero() {
        return false;
    }
    let y = [[&d / &det, -&b / &det], [-&c / &det, &a / &det]];
    let (Ok(fm), Ok(gm)) = (f.evaluate(&mid), g.evaluate(&mid)) else {
        return false;
    };
    let jx = [
        [eval_poly(&jf[0], bx), eval_poly(&jf[1], bx)],
        [eval_poly(&jg[0], bx), eval_poly(&jg[1], bx)],
    ];
    let diff = [
        bx[0].sub(&Interval::point(mid[0].clone())),
        bx[1].sub(&Interval::point(mid[1].clone())),
    ];
    for i in 0..2 {
        let newton = &mid[i] - (&y[i][0] * &fm + &y[i][1] * &gm);
        let mut k = Interval::point(newton);
        for j in 0..2 {
            let ident = if i == j { Rational::one() } else { Rational::zero() };
            let yj = jx[0][j].scale(&y[i][0]).add(&jx[1][j].scale(&y[i][1]));
            let entry = Interval::point(ident).sub(&yj);
            k = k.add(&entry.mul(&diff[j]));
        }
        if !(k.lo > bx[i].lo && k.hi < bx[i].hi) {
            return false;
        }
    }
    true
}

fn root_interval(r: &RealRoot) -> Interval {
    Interval::new(r.lo.clone(), r.hi.clone())
}

struct ChartZeros {
    rational: Vec<Vec<Rational>>,
    algebraic: Vec<(Vec<Interval>, bool)>,
}

/// Common real zeros of two-variable polynomials.
fn chart_zeros(chart: &[Poly]) -> Result<ChartZeros> {
    let nonzero: Vec<&Poly> = chart.iter().filter(|p| !p.is_zero()).collect();
    if nonzero.is_empty() {
        return Err(Error::InfiniteIntersection);
    }
    if nonzero.iter().any(|p| p.is_constant()) {
        return Ok(ChartZeros {
            rational: Vec::new(),
            algebraic: Vec::new(),
        });
    }
    // Candidate coordinates: roots of gcds of resultants against a pivot.
    let mut candidates = None;
    for (pi, pivot) in nonzero.iter().enumerate() {
        let rx = univariate_gcd(
            nonzero
                .iter()
                .enumerate()
                .filter(|&(k, _)| k != pi)
                .map(|(_, q)| resultant(pivot, q, 1))
                .collect::<Result<Vec<_>>>()?,
        );
        let ry = univariate_gcd(
            nonzero
                .iter()
                .enumerate()
                .filter(|&(k, _)| k != pi)
                .map(|(_, q)| resultant(pivot, q, 0))
                .collect::<Result<Vec<_>>>()?,
        );
        if let (Some(rx), Some(ry)) = (rx, ry) {
            candidates = Some((pi, rx, ry));
            break;
        }
    }
    let Some((pivot, rx, ry)) = candidates else {
        return Err(Error::InfiniteIntersection);
    };

    let mut out = ChartZeros {
        rational: Vec::new(),
        algebraic: Vec::new(),
    };
    let y_roots = ry.real_roots();
    for mut xr in rx.real_roots() {
        if let Some(x0) = xr.as_rational() {
            let slices: Vec<UPoly> = nonzero
                .iter()
                .map(|p| p.substitute(0, &x0).and_then(|q| UPoly::from_poly(&q, 0)))
                .collect::<Result<_>>()?;
            let Some(g) = univariate_gcd(slices) else {
                return Err(Error::InfiniteIntersection);
            };
            for mut yr in g.real_roots() {
                match yr.as_rational() {
                    Some(y0) => out.rational.push(vec![x0.clone(), y0]),
                    None => out.algebraic.push((vec![Interval::point(x0.clone()), root_interval(&yr)], true)),
                }
            }
            continue;
        }
        for yr in &y_roots {
            if let Some(found) = algebraic_box(&nonzero, pivot, xr.clone(), yr.clone()) {
                out.algebraic.push(found);
            }
        }
    }
    Ok(out)
}

/// Shrinks a candidate box until it is excluded by some basis element or
/// reaches width `2^-50`; survivors are checked with Krawczyk.
fn algebraic_box(polys: &[&Poly], pivot: usize, mut xr: RealRoot, mut yr: RealRoot) -> Option<(Vec<Interval>, bool)> {
    let mut width = Rational::one();
    let floor = Rational::new(1.into(), num_bigint::BigInt::from(2).pow(50));
    loop {
        xr.refine(&width);
        yr.refine(&width);
        let bx = vec![root_interval(&xr), root_interval(&yr)];
        if polys.iter().any(|p| !eval_poly(p, &bx).contains_zero()) {
            return None;
        }
        if width < floor {
            let certified = polys
                .iter()
                .enumerate()
                .any(|(k, q)| k != pivot && krawczyk(polys[pivot], q, &bx));
            return Some((bx, certified));
        }
        width /= Rational::from_integer(16.into());
    }
}

fn tangential_points(a: &PointSet, forms: &[Poly]) -> Result<Vec<usize>> {
    let mut out = Vec::new();
    for (i, p) in a.projective_points().iter().enumerate() {
        if gradient_rank_at(forms, p)? < 2 {
            out.push(i);
        }
    }
    Ok(out)
}

/// All real common zeros of the basis outside `A`, over the chart `z = 1`
/// and the line at infinity.
pub fn forced_zeros(basis: &IdealBasis) -> Result<ForcedZeros> {
    let a = &basis.pointset;
    let forms = planar_forms(basis)?;
    let projective = a.mode() == Mode::Projective;
    let one = Rational::one();

    let chart: Vec<Poly> = forms
        .iter()
        .map(|f| f.substitute(2, &one))
        .collect::<Result<_>>()?;
    let found = chart_zeros(&chart)?;
    let mut affine = Vec::new();
    for pt in found.rational {
        let hom = vec![pt[0].clone(), pt[1].clone(), one.clone()];
        if a.contains_projective(&hom) {
            continue;
        }
        let simple = gradient_rank_at(&forms, &hom)? >= 2;
        affine.push(ForcedPoint::Rational {
            coords: if projective { hom } else { pt },
            simple,
        });
    }
    for (mut bx, certified) in found.algebraic {
        let simple = interval_simple(&chart, &bx);
        if projective {
            bx.push(Interval::point(one.clone()));
        }
        affine.push(ForcedPoint::Algebraic {
            boxes: bx,
            certified,
            simple,
        });
    }

    let mut at_infinity = Vec::new();
    let line: Vec<UPoly> = forms
        .iter()
        .map(|f| {
            f.substitute(2, &Rational::zero())
                .and_then(|g| g.substitute(1, &one))
                .and_then(|h| UPoly::from_poly(&h, 0))
        })
        .collect::<Result<_>>()?;
    let Some(g) = univariate_gcd(line) else {
        return Err(Error::InfiniteIntersection);
    };
    let mut push_inf = |hom: Vec<Rational>| -> Result<()> {
        if !a.contains_projective(&hom) {
            let simple = gradient_rank_at(&forms, &hom)? >= 2;
            at_infinity.push(ForcedPoint::Rational { coords: hom, simple });
        }
        Ok(())
    };
    let e1 = vec![one.clone(), Rational::zero(), Rational::zero()];
    let vanish_e1 = forms
        .iter()
        .map(|f| f.evaluate(&e1))
        .collect::<Result<Vec<_>>>()?
        .iter()
        .all(Zero::is_zero);
    if vanish_e1 {
        push_inf(e1)?;
    }
    let mut irrational_inf = Vec::new();
    for mut r in g.real_roots() {
        match r.as_rational() {
            Some(x0) => push_inf(vec![x0, one.clone(), Rational::zero()])?,
            None => irrational_inf.push(r),
        }
    }
    for r in irrational_inf {
        at_infinity.push(ForcedPoint::Algebraic {
            boxes: vec![root_interval(&r), Interval::point(one.clone()), Interval::point(Rational::zero())],
            certified: true,
            simple: None,
        });
    }

    Ok(ForcedZeros {
        affine,
        at_infinity,
        method: ForcedMethod::Resultant,
        tangential: tangential_points(a, &forms)?,
    })
}

/// Checks user-supplied rational zeros instead of searching: each must be
/// a common zero outside `A`. Coordinates follow the same conventions as
/// [`forced_zeros`]; affine sets also accept homogeneous triples.
pub fn verify_forced_zeros(basis: &IdealBasis, claimed: &[Vec<Rational>]) -> Result<ForcedZeros> {
    let a = &basis.pointset;
    let forms = planar_forms(basis)?;
    let mut affine = Vec::new();
    let mut at_infinity = Vec::new();
    for pt in claimed {
        let hom = match (a.mode(), pt.len()) {
            (Mode::Affine, 2) => vec![pt[0].clone(), pt[1].clone(), Rational::one()],
            (_, 3) => pt.clone(),
            _ => {
                return Err(Error::Arity {
                    expected: a.nvars(),
                    got: pt.len(),
                })
            }
        };
        if hom.iter().all(Zero::is_zero) {
            return Err(Error::InvalidPointSet("zero point".into()));
        }
        if a.contains_projective(&hom) {
            return Err(Error::InvalidPointSet("claimed zero belongs to the point set".into()));
        }
        for f in &forms {
            if !f.evaluate(&hom)?.is_zero() {
                return Err(Error::NotInIdeal);
            }
        }
        let simple = gradient_rank_at(&forms, &hom)? >= 2;
        if hom[2].is_zero() {
            at_infinity.push(ForcedPoint::Rational { coords: hom, simple });
        } else {
            let z = hom[2].clone();
            let coords = match a.mode() {
                Mode::Affine => vec![&hom[0] / &z, &hom[1] / &z],
                Mode::Projective => hom.iter().map(|c| c / &z).collect(),
            };
            affine.push(ForcedPoint::Rational { coords, simple });
        }
    }
    Ok(ForcedZeros {
        affine,
        at_infinity,
        method: ForcedMethod::VerifiedInput,
        tangential: tangential_points(a, &forms)?,
    })
}

/// Whether eight points have exactly one further common zero of their
/// cubics, and it is simple.
pub fn copacetic(a: &PointSet) -> Result<bool> {
    if a.len() != 8 {
        return Err(Error::InvalidPointSet(format!("expected 8 points, got {}", a.len())));
    }
    let basis = super::vanishing_basis(a, 3, 1)?;
    if basis.dim() != 2 {
        return Err(Error::CubicIdealDimension(basis.dim()));
    }
    let zeros = match forced_zeros(&basis) {
        Ok(z) => z,
        Err(Error::InfiniteIntersection) => return Ok(false),
        Err(e) => return Err(e),
    };
    Ok(zeros.count() == 1 && zeros.all().all(ForcedPoint::is_simple) && zeros.tangential.is_empty())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pointideal::vanishing_basis;
    use crate::rational::{int, rat};

    fn p(s: &str) -> Poly {
        Poly::parse(s, &["x", "y"]).unwrap()
    }

    #[test]
    fn resultant_of_circle_and_line() {
        let r = resultant(&p("x^2 + y^2 - 1"), &p("y - x"), 1).unwrap();
        assert_eq!(r.monic(), UPoly::new(vec![rat(-1, 2), int(0), int(1)]));
    }

    #[test]
    fn robinson_forces_origin() {
        let a = super::super::tests::robinson();
        let z = forced_zeros(&vanishing_basis(&a, 3, 1).unwrap()).unwrap();
        assert_eq!(z.affine.len(), 1);
        assert_eq!(z.affine[0].as_rational().unwrap(), &[int(0), int(0)]);
        assert!(z.at_infinity.is_empty());
        assert!(copacetic(&a).unwrap());
    }

    #[test]
    fn irrational_zero_is_boxed() {
        let a = PointSet::from_ints(Mode::Affine, &[&[0, 0]]).unwrap();
        let b = IdealBasis::from_polys(a, 2, 1, vec![p("x^2 + y^2 - 2 x"), p("y - x")]).unwrap();
        let z = forced_zeros(&b).unwrap();
        assert_eq!(z.affine.len(), 1);
        assert_eq!(z.affine[0].as_rational().unwrap(), &[int(1), int(1)]);
        let o = PointSet::from_ints(Mode::Affine, &[&[0, 0]]).unwrap();
        let b = IdealBasis::from_polys(o, 2, 1, vec![p("y - x^2"), p("y^2 + y - 3 x^2")]).unwrap();
        let z = forced_zeros(&b).unwrap();
        assert_eq!(z.affine.len(), 2);
        assert_eq!(z.tangential, vec![0]);
        for q in &z.affine {
            let ForcedPoint::Algebraic { boxes, certified, .. } = q else {
                panic!("expected a boxed zero");
            };
            assert!(certified);
            assert!(boxes[1].contains(&int(2)));
            let (lo, hi) = boxes[0].to_f64_pair();
            let r = 2f64.sqrt();
            assert!((lo <= r && r <= hi) || (lo <= -r && -r <= hi));
            assert!(hi - lo < 1e-12);
        }
    }

    #[test]
    fn verified_input_rejects_nonzero() {
        let a = super::super::tests::robinson();
        let b = vanishing_basis(&a, 3, 1).unwrap();
        assert!(verify_forced_zeros(&b, &[vec![int(0), int(0)]]).is_ok());
        assert_eq!(verify_forced_zeros(&b, &[vec![int(2), int(0)]]).unwrap_err(), Error::NotInIdeal);
    }
}
