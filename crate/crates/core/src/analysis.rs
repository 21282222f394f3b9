//! Sections of the psd cone through the Robinson cubics, the Jacobian
//! locus of possible zeros, the weighted Robinson multiplier and a Newton
//! polytope obstruction to sums of squares.

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::interval::{Interval, IntervalJson};
use crate::poly::{Monomial, Poly};
use crate::rational::{display_rational, format_rational, int, rat, Rational};
use crate::upoly::{RealRoot, UPoly};

/// `(alpha(t), beta(t)) = ((2t^2 + t^4)/3, (1 + 2t^2)/(3t^4))`.
pub fn curve_params(t: &Rational) -> Result<(Rational, Rational)> {
    if !t.is_positive() {
        return Err(Error::Domain("curve parameter must be positive".into()));
    }
    let t2 = t * t;
    let t4 = &t2 * &t2;
    let alpha = (&t2 * int(2) + &t4) / int(3);
    let beta = (&t2 * int(2) + int(1)) / (&t4 * int(3));
    Ok((alpha, beta))
}

/// Whether `r x^6 - x^4 y^2 - x^2 y^4 + s y^6` is psd, that is, whether
/// `r > 0` and `s >= (2 + 9r + 2(1 + 3r)^{3/2}) / (27 r^2)`. Decided
/// without radicals.
pub fn in_region_k(r: &Rational, s: &Rational) -> bool {
    if !r.is_positive() {
        return false;
    }
    let e = r * r * s * int(27) - r * int(9) - int(2);
    if e.is_negative() {
        return false;
    }
    let w = r * int(3) + int(1);
    &e * &e >= &w * &w * &w * int(4)
}

/// The binary sextic `r x^6 - x^4 y^2 - x^2 y^4 + s y^6`.
pub fn binary_sextic(r: &Rational, s: &Rational) -> Poly {
    let mut p = Poly::zero(2);
    p.add_term(Monomial(vec![6, 0]), r.clone());
    p.add_term(Monomial(vec![4, 2]), -Rational::one());
    p.add_term(Monomial(vec![2, 4]), -Rational::one());
    p.add_term(Monomial(vec![0, 6]), s.clone());
    p
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SigmaResult {
    pub c1: Rational,
    pub c3: Rational,
    /// `3(1+c3) u^6 - u^4 + u^2 - 3(1+c1)`, whose positive roots are the
    /// critical points of `psi`.
    pub sextic: UPoly,
    pub v: Interval,
    pub sigma: Interval,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SigmaJson {
    pub c1: String,
    pub c3: String,
    pub sextic: String,
    pub v: IntervalJson,
    pub sigma: IntervalJson,
    pub sigma_decimal: String,
}

impl SigmaResult {
    pub fn to_json(&self, digits: usize) -> SigmaJson {
        SigmaJson {
            c1: format_rational(&self.c1),
            c3: format_rational(&self.c3),
            sextic: self.sextic.to_string(),
            v: (&self.v).into(),
            sigma: (&self.sigma).into(),
            sigma_decimal: decimal(&self.sigma.midpoint(), digits),
        }
    }
}

/// `q` rounded to `digits` decimal places.
pub fn decimal(q: &Rational, digits: usize) -> String {
    let scale = num_bigint::BigInt::from(10).pow(digits as u32);
    let scaled = (q * Rational::from_integer(scale.clone())).round().to_integer();
    let neg = scaled.is_negative();
    let s = scaled.abs().to_string();
    let s = format!("{:0>width$}", s, width = digits + 1);
    let (whole, frac) = s.split_at(s.len() - digits);
    let sign = if neg { "-" } else { "" };
    if digits == 0 {
        format!("{sign}{whole}")
    } else {
        format!("{sign}{whole}.{frac}")
    }
}

/// `psi(u) = (1+c1) u^-3 - u^-1 - u + (1+c3) u^3` on a positive interval.
fn psi_interval(a: &Rational, b: &Rational, u: &Interval) -> Interval {
    let num = Interval::point(a.clone())
        .sub(&u.pow(2))
        .sub(&u.pow(4))
        .add(&u.pow(6).scale(b));
    let cube = u.pow(3);
    num.mul(&Interval::new(Rational::one() / &cube.hi, Rational::one() / &cube.lo))
}

pub fn psi(c1: &Rational, c3: &Rational, u: &Rational) -> Rational {
    let (a, b) = (c1 + int(1), c3 + int(1));
    let u3 = u * u * u;
    &a / &u3 - Rational::one() / u - u + b * u3
}

fn root_enclosure(root: &mut RealRoot, a: &Rational, b: &Rational, width: &Rational) -> (Interval, Interval) {
    let mut w = rat(1, 1024);
    loop {
        root.refine(&w);
        if root.exact().is_some() || root.lo.is_positive() {
            let v = match root.exact() {
                Some(x) => Interval::point(x.clone()),
                None => Interval::new(root.lo.clone(), root.hi.clone()),
            };
            let s = psi_interval(a, b, &v).scale(&rat(1, 2));
            if &s.width() <= width {
                return (v, s);
            }
        }
        w /= int(4);
    }
}

/// `sigma(c1, c3) = min_{u > 0} psi(u) / 2`, enclosed to `width`.
pub fn sigma(c1: &Rational, c3: &Rational, width: &Rational) -> Result<SigmaResult> {
    let (a, b) = (c1 + int(1), c3 + int(1));
    if !in_region_k(&a, &b) {
        return Err(Error::Domain("(1 + c1, 1 + c3) lies outside the psd region".into()));
    }
    let sextic = UPoly::new(vec![-&a * int(3), int(0), int(1), int(0), int(-1), int(0), &b * int(3)]);
    let bound = sextic.root_bound();
    let mut roots = sextic.real_roots_between(&Rational::zero(), &bound);
    if roots.is_empty() {
        return Err(Error::NoCriticalPoint);
    }
    let mut encl: Vec<(Interval, Interval)> = roots.iter_mut().map(|r| root_enclosure(r, &a, &b, width)).collect();
    // Separate the candidate minima until one is known to be smallest.
    let mut w = width.clone();
    loop {
        let best = encl.iter().map(|e| e.1.hi.clone()).min().expect("nonempty");
        let contenders: Vec<usize> = (0..encl.len()).filter(|&i| encl[i].1.lo <= best).collect();
        if contenders.len() == 1 || w < rat(1, 1 << 30) * width {
            let (v, s) = encl.swap_remove(contenders[0]);
            return Ok(SigmaResult {
                c1: c1.clone(),
                c3: c3.clone(),
                sextic: sextic.clone(),
                v,
                sigma: s,
            });
        }
        w /= int(16);
        for &i in &contenders {
            encl[i] = root_enclosure(&mut roots[i], &a, &b, &w);
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PhiClass {
    Sos,
    PsdNotSos,
    NotPsd,
    /// Psd with `|c2| = sigma`, or too close to that boundary to separate.
    BoundaryPsd,
}

/// Classifies `c1 F1^2 + 2 c2 F1 F2 + c3 F2^2 + c4 R` for the Robinson
/// cubics `F1 = x^3 - x z^2`, `F2 = y^3 - y z^2`.
pub fn classify_phi(c1: &Rational, c2: &Rational, c3: &Rational, c4: &Rational) -> Result<PhiClass> {
    if c4.is_zero() {
        let ok = !c1.is_negative() && !c3.is_negative() && c1 * c3 >= c2 * c2;
        return Ok(if ok { PhiClass::Sos } else { PhiClass::NotPsd });
    }
    if c4.is_negative() {
        return Ok(PhiClass::NotPsd);
    }
    let (c1, c2, c3) = (c1 / c4, (c2 / c4).abs(), c3 / c4);
    if !in_region_k(&(&c1 + int(1)), &(&c3 + int(1))) {
        return Ok(PhiClass::NotPsd);
    }
    if c2.is_zero() {
        return Ok(PhiClass::PsdNotSos);
    }
    let mut width = rat(1, 1_000_000_000);
    for _ in 0..4 {
        let s = sigma(&c1, &c3, &width)?.sigma;
        if c2 < s.lo {
            return Ok(PhiClass::PsdNotSos);
        }
        if c2 > s.hi {
            return Ok(PhiClass::NotPsd);
        }
        if s.width().is_zero() {
            break;
        }
        width *= rat(1, 1_000_000_000);
    }
    Ok(PhiClass::BoundaryPsd)
}

/// The 3 x 3 Jacobian determinant of three ternary polynomials.
pub fn jacobian_locus(f1: &Poly, f2: &Poly, g: &Poly) -> Result<Poly> {
    for p in [f1, f2, g] {
        if p.nvars() != 3 {
            return Err(Error::Arity {
                expected: 3,
                got: p.nvars(),
            });
        }
    }
    let m: Vec<Vec<Poly>> = [f1, f2, g].iter().map(|p| p.gradient()).collect();
    let minor = |i: usize, j: usize| &(&m[1][i] * &m[2][j]) - &(&m[1][j] * &m[2][i]);
    Ok(&(&(&m[0][0] * &minor(1, 2)) - &(&m[0][1] * &minor(0, 2))) + &(&m[0][2] * &minor(0, 1)))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiplierResult {
    pub r: Rational,
    pub s: Rational,
    pub t: Rational,
    pub lambdas: [Rational; 6],
    pub discriminant: Rational,
    /// `(r+s-t)(r+t-s)(s+t-r)(r+s+t) / 4`.
    pub factored: Rational,
    pub feasible: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MultiplierJson {
    pub r: String,
    pub s: String,
    pub t: String,
    pub lambdas: Vec<String>,
    pub discriminant: String,
    pub factored: String,
    pub feasible: bool,
}

impl MultiplierResult {
    pub fn to_json(&self) -> MultiplierJson {
        MultiplierJson {
            r: format_rational(&self.r),
            s: format_rational(&self.s),
            t: format_rational(&self.t),
            lambdas: self.lambdas.iter().map(format_rational).collect(),
            discriminant: format_rational(&self.discriminant),
            factored: format_rational(&self.factored),
            feasible: self.feasible,
        }
    }
}

/// Whether `(r^2 x^2 + s^2 y^2 + t^2 z^2) R` is the combination of squares
/// with a psd 2 x 2 block, for `r, s, t >= 0`.
pub fn robinson_multiplier(r: &Rational, s: &Rational, t: &Rational) -> Result<MultiplierResult> {
    if r.is_negative() || s.is_negative() || t.is_negative() {
        return Err(Error::Domain("multiplier weights must be nonnegative".into()));
    }
    let (r2, s2, t2) = (r * r, s * s, t * t);
    let l5 = (&t2 - &r2 - &s2) / int(2);
    let lambdas = [t2.clone(), s2.clone(), r2.clone(), r2.clone(), l5, s2.clone()];
    let discriminant = &lambdas[3] * &lambdas[5] - &lambdas[4] * &lambdas[4];
    let factored = (r + s - t) * (r + t - s) * (s + t - r) * (r + s + t) / int(4);
    if discriminant != factored {
        return Err(Error::Catalog("multiplier discriminant does not factor".into()));
    }
    let feasible = !discriminant.is_negative() && !lambdas[3].is_negative() && !lambdas[5].is_negative();
    Ok(MultiplierResult {
        r: r.clone(),
        s: s.clone(),
        t: t.clone(),
        lambdas,
        discriminant,
        factored,
        feasible,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "result", rename_all = "snake_case")]
pub enum NewtonResult {
    /// The coefficient of `target` in any sum of squares would be a sum of
    /// squares of coefficients of `candidate`, but it is negative.
    Witness {
        target: Vec<u32>,
        coefficient: String,
        candidate: Vec<u32>,
        half_polytope: Vec<Vec<u32>>,
    },
    Inconclusive { half_polytope: Vec<Vec<u32>> },
}

fn cross(o: (i64, i64), a: (i64, i64), b: (i64, i64)) -> i64 {
    (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
}

/// Convex hull in counterclockwise order, collinear points dropped.
fn convex_hull(mut pts: Vec<(i64, i64)>) -> Vec<(i64, i64)> {
    pts.sort();
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let mut lower: Vec<(i64, i64)> = Vec::new();
    for &p in &pts {
        while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], p) <= 0 {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<(i64, i64)> = Vec::new();
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], p) <= 0 {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

fn in_hull(hull: &[(i64, i64)], p: (i64, i64)) -> bool {
    match hull.len() {
        0 => false,
        1 => hull[0] == p,
        2 => {
            let (a, b) = (hull[0], hull[1]);
            cross(a, b, p) == 0 && p.0 >= a.0.min(b.0) && p.0 <= a.0.max(b.0) && p.1 >= a.1.min(b.1) && p.1 <= a.1.max(b.1)
        }
        n => (0..n).all(|i| cross(hull[i], hull[(i + 1) % n], p) >= 0),
    }
}

/// Lattice points `a` with `2a` in the Newton polytope of a ternary form.
pub fn half_polytope(p: &Poly) -> Result<Vec<Monomial>> {
    if !p.is_homogeneous() {
        return Err(Error::NotHomogeneous);
    }
    if p.nvars() != 3 {
        return Err(Error::Arity {
            expected: 3,
            got: p.nvars(),
        });
    }
    let d = p.degree();
    if d % 2 == 1 {
        return Err(Error::Domain("form must have even degree".into()));
    }
    let hull = convex_hull(p.terms().map(|(m, _)| (m.0[0] as i64, m.0[1] as i64)).collect());
    Ok(Monomial::all_of_degree(3, d / 2)
        .into_iter()
        .filter(|m| in_hull(&hull, (2 * m.0[0] as i64, 2 * m.0[1] as i64)))
        .collect())
}

/// Looks for a negative coefficient at `2a` whose only decomposition as a
/// sum of two half-polytope points is `a + a`.
pub fn newton_not_sos(p: &Poly) -> Result<NewtonResult> {
    let half = half_polytope(p)?;
    let half_polytope: Vec<Vec<u32>> = half.iter().map(|m| m.0.clone()).collect();
    let mut targets: Vec<(&Monomial, &Rational)> = p
        .terms()
        .filter(|(m, c)| c.is_negative() && m.0.iter().all(|e| e % 2 == 0))
        .collect();
    targets.sort_by(|a, b| b.0.cmp(a.0));
    for (m, c) in targets {
        let pairs = half
            .iter()
            .filter(|b| half.iter().any(|g| b.mul(g) == *m))
            .count();
        if pairs == 1 {
            return Ok(NewtonResult::Witness {
                target: m.0.clone(),
                coefficient: display_rational(c),
                candidate: m.0.iter().map(|e| e / 2).collect(),
                half_polytope,
            });
        }
    }
    Ok(NewtonResult::Inconclusive { half_polytope })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    fn q(s: &str) -> Rational {
        crate::rational::parse_rational(s).unwrap()
    }

    #[test]
    fn curve_examples() {
        assert_eq!(curve_params(&int(1)).unwrap(), (int(1), int(1)));
        assert_eq!(curve_params(&int(2)).unwrap(), (int(8), rat(3, 16)));
        let t = rat(3, 2);
        assert_eq!(curve_params(&t).unwrap().1, curve_params(&(Rational::one() / &t)).unwrap().0);
        assert!(curve_params(&int(0)).is_err());
    }

    #[test]
    fn region_examples() {
        assert!(in_region_k(&int(1), &int(1)));
        assert!(!in_region_k(&int(1), &rat(9, 10)));
        assert!(in_region_k(&int(1), &int(2)));
        assert!(!in_region_k(&int(0), &int(5)));
        let (a, b) = curve_params(&rat(2, 3)).unwrap();
        assert!(in_region_k(&a, &b));
        assert!(!in_region_k(&a, &(&b - rat(1, 1_000_000))));
    }

    #[test]
    fn sigma_at_origin_is_zero() {
        let s = sigma(&int(0), &int(0), &rat(1, 1_000_000_000)).unwrap();
        assert!(s.sigma.contains(&int(0)));
        assert!(s.v.contains(&int(1)));
    }

    #[test]
    fn sigma_matches_known_sextic() {
        let s = sigma(&int(1), &int(0), &rat(1, 1_000_000_000)).unwrap();
        let two = s.sigma.scale(&int(2));
        assert!((crate::rational::to_f64(&two.lo) - 0.81392).abs() < 1e-5);
        // The x^2 coefficient is 182744; the root of the variant with 182774
        // is 0.81384, outside the enclosure.
        let p = UPoly::from_ints(&[-111392, 0, 182744, 0, -22518, 0, 729]);
        assert!(p.eval(&two.lo).is_negative() && p.eval(&two.hi).is_positive());
        let typo = UPoly::from_ints(&[-111392, 0, 182774, 0, -22518, 0, 729]);
        assert!(typo.eval(&two.lo).is_positive());
    }

    #[test]
    fn sigma_is_a_local_minimum() {
        let (c1, c3) = (int(1), int(0));
        let s = sigma(&c1, &c3, &rat(1, 1_000_000_000_000)).unwrap();
        for k in 2..6 {
            let eps = rat(1, 10i64.pow(k));
            for u in [&s.v.lo - &eps, &s.v.hi + &eps] {
                assert!(psi(&c1, &c3, &u) / int(2) > s.sigma.hi);
            }
        }
    }

    #[test]
    fn classify_examples() {
        assert_eq!(classify_phi(&int(1), &int(0), &int(1), &int(0)).unwrap(), PhiClass::Sos);
        assert_eq!(classify_phi(&int(0), &int(0), &int(0), &int(1)).unwrap(), PhiClass::PsdNotSos);
        assert_eq!(classify_phi(&int(7), &int(0), &q("-13/16"), &int(1)).unwrap(), PhiClass::PsdNotSos);
        assert_eq!(classify_phi(&int(1), &int(2), &int(1), &int(0)).unwrap(), PhiClass::NotPsd);
        assert_eq!(classify_phi(&int(0), &int(0), &int(0), &int(-1)).unwrap(), PhiClass::NotPsd);
        assert_eq!(classify_phi(&int(1), &rat(2, 5), &int(0), &int(1)).unwrap(), PhiClass::PsdNotSos);
        assert_eq!(classify_phi(&int(1), &rat(1, 2), &int(0), &int(1)).unwrap(), PhiClass::NotPsd);
    }

    #[test]
    fn boundary_classifies_as_boundary() {
        // v = 2, c1 = 15 gives sigma = 1 exactly.
        assert_eq!(classify_phi(&int(15), &int(1), &rat(-11, 16), &int(1)).unwrap(), PhiClass::BoundaryPsd);
    }

    #[test]
    fn robinson_jacobian_matches_locus() {
        let names = ["x", "y", "z"];
        let p = |s: &str| Poly::parse(s, &names).unwrap();
        let (f1, f2) = (p("x^3 - x z^2"), p("y^3 - y z^2"));
        let j = jacobian_locus(&f1, &f2, &catalog::form("robinson", &[]).unwrap()).unwrap();
        let locus = p("x y z (x^2 - z^2) (y^2 - z^2) (x^2 - x y + y^2 - z^2) (x^2 + x y + y^2 - z^2)");
        let lhs = &(&f1 * &f2) * &j;
        assert_eq!(lhs, (&locus * &p("(x^2 - z^2) (y^2 - z^2)")).scale(&int(6)));
        for t in [rat(1, 2), int(2), rat(7, 3)] {
            for z in catalog::listed_zeros("R_t", &[t]).unwrap() {
                assert!(lhs.evaluate(&z).unwrap().is_zero());
            }
        }
    }

    #[test]
    fn diagonal_jacobian() {
        let names = ["x", "y", "z"];
        let p = |s: &str| Poly::parse(s, &names).unwrap();
        let j = jacobian_locus(&p("x^3"), &p("y^3"), &p("z^6")).unwrap();
        assert_eq!(j, p("54 x^2 y^2 z^5"));
    }

    #[test]
    fn multiplier_examples() {
        let m = robinson_multiplier(&int(1), &int(1), &int(1)).unwrap();
        assert_eq!((m.lambdas[4].clone(), m.discriminant.clone(), m.feasible), (rat(-1, 2), rat(3, 4), true));
        let m = robinson_multiplier(&int(2), &int(1), &int(1)).unwrap();
        assert_eq!((m.lambdas[4].clone(), m.discriminant.clone(), m.feasible), (int(-2), int(0), true));
        let m = robinson_multiplier(&int(3), &int(1), &int(1)).unwrap();
        assert_eq!((m.discriminant.clone(), m.feasible), (rat(-45, 4), false));
        assert!(robinson_multiplier(&int(-1), &int(1), &int(1)).is_err());
    }

    #[test]
    fn newton_examples() {
        let w = newton_not_sos(&catalog::form("motzkin", &[]).unwrap()).unwrap();
        match w {
            NewtonResult::Witness { target, candidate, coefficient, half_polytope } => {
                assert_eq!(target, vec![2, 2, 2]);
                assert_eq!(candidate, vec![1, 1, 1]);
                assert_eq!(coefficient, "-3");
                assert_eq!(half_polytope.len(), 4);
            }
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            newton_not_sos(&catalog::form("choi_lam_s", &[]).unwrap()).unwrap(),
            NewtonResult::Witness { ref target, .. } if target == &vec![2, 2, 2]
        ));
        assert!(matches!(
            newton_not_sos(&catalog::form("robinson", &[]).unwrap()).unwrap(),
            NewtonResult::Inconclusive { .. }
        ));
    }

    #[test]
    fn decimals() {
        assert_eq!(decimal(&rat(2, 3), 4), "0.6667");
        assert_eq!(decimal(&rat(-1, 8), 2), "-0.13");
        assert_eq!(decimal(&int(5), 0), "5");
    }
}
