//! Dense univariate polynomials over the rationals, with Sturm-sequence
//! real root isolation.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::poly::{Monomial, Poly};
use crate::rational::{simplest_between, to_f64, Rational};

/// Coefficients stored low to high with no trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UPoly {
    coeffs: Vec<Rational>,
}

impl UPoly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        UPoly { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        UPoly::new(coeffs.iter().map(|&c| Rational::from_integer(c.into())).collect())
    }

    pub fn zero() -> Self {
        UPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: Rational) -> Self {
        UPoly::new(vec![c])
    }

    /// `x - a`.
    pub fn linear_root(a: &Rational) -> Self {
        UPoly::new(vec![-a.clone(), Rational::one()])
    }

    /// Reads a polynomial in which only `var` occurs.
    pub fn from_poly(p: &Poly, var: usize) -> Result<Self> {
        let mut coeffs = vec![Rational::zero(); p.degree_in(var) as usize + 1];
        for (m, c) in p.terms() {
            if m.0.iter().enumerate().any(|(i, &e)| i != var && e > 0) {
                return Err(Error::Domain("polynomial is not univariate".into()));
            }
            coeffs[m.0[var] as usize] = c.clone();
        }
        Ok(UPoly::new(coeffs))
    }

    pub fn to_poly(&self, nvars: usize, var: usize) -> Poly {
        let mut out = Poly::zero(nvars);
        for (k, c) in self.coeffs.iter().enumerate() {
            let mut e = vec![0; nvars];
            e[var] = k as u32;
            out.add_term(Monomial(e), c.clone());
        }
        out
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with the zero polynomial reported as `None`.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lc(&self) -> Rational {
        self.coeffs.last().cloned().unwrap_or_else(Rational::zero)
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * x + to_f64(c))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        UPoly::new(self.coeffs.iter().map(|x| x * c).collect())
    }

    pub fn add(&self, other: &UPoly) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let zero = Rational::zero();
        UPoly::new(
            (0..n)
                .map(|i| self.coeffs.get(i).unwrap_or(&zero) + other.coeffs.get(i).unwrap_or(&zero))
                .collect(),
        )
    }

    pub fn sub(&self, other: &UPoly) -> Self {
        self.add(&other.scale(&-Rational::one()))
    }

    pub fn mul(&self, other: &UPoly) -> Self {
        if self.is_zero() || other.is_zero() {
            return UPoly::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        UPoly::new(out)
    }

    pub fn derivative(&self) -> Self {
        UPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * Rational::from_integer(k.into()))
                .collect(),
        )
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, d: &UPoly) -> (UPoly, UPoly) {
        let dd = d.degree().expect("division by zero polynomial");
        let lc = d.lc();
        let mut r = self.coeffs.clone();
        let mut q = vec![Rational::zero(); self.coeffs.len().saturating_sub(dd)];
        while r.len() > dd && !r.is_empty() {
            let k = r.len() - 1 - dd;
            let f = r.last().unwrap() / &lc;
            for (i, c) in d.coeffs.iter().enumerate() {
                r[k + i] -= &f * c;
            }
            q[k] = f;
            r.pop();
            while r.last().is_some_and(Zero::is_zero) {
                r.pop();
            }
        }
        (UPoly::new(q), UPoly::new(r))
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return UPoly::zero();
        }
        self.scale(&(Rational::one() / self.lc()))
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &UPoly) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r.primitive_rational();
        }
        a.monic()
    }

    /// Same roots, no repeated factors.
    pub fn squarefree(&self) -> Self {
        if self.degree().unwrap_or(0) == 0 {
            return self.monic();
        }
        let g = self.gcd(&self.derivative());
        self.div_rem(&g).0.monic()
    }

    /// Positive rational multiple with coprime integer coefficients.
    pub fn primitive_rational(&self) -> Self {
        if self.is_zero() {
            return UPoly::zero();
        }
        let den = self
            .coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = self.coeffs.iter().map(|c| (c * Rational::from_integer(den.clone())).to_integer()).collect();
        let g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
        UPoly::new(ints.into_iter().map(|c| Rational::new(c, g.clone())).collect())
    }

    /// Integer coefficients of the primitive multiple.
    pub fn integer_coeffs(&self) -> Vec<BigInt> {
        self.primitive_rational().coeffs.iter().map(|c| c.to_integer()).collect()
    }

    /// Sturm sequence of the polynomial, each term rescaled by a positive
    /// constant to keep coefficients small.
    pub fn sturm_sequence(&self) -> Vec<UPoly> {
        let mut seq = vec![self.primitive_rational_signed(), self.derivative().primitive_rational_signed()];
        loop {
            let n = seq.len();
            if seq[n - 1].is_zero() {
                seq.pop();
                break;
            }
            let r = seq[n - 2].div_rem(&seq[n - 1]).1;
            if r.is_zero() {
                break;
            }
            seq.push(r.scale(&-Rational::one()).primitive_rational_signed());
        }
        seq
    }

    fn primitive_rational_signed(&self) -> Self {
        let p = self.primitive_rational();
        if !self.is_zero() && (self.lc().is_negative() != p.lc().is_negative()) {
            p.scale(&-Rational::one())
        } else {
            p
        }
    }

    /// Upper bound on the absolute value of every real root (Cauchy).
    pub fn root_bound(&self) -> Rational {
        let lc = self.lc().abs();
        let m = self
            .coeffs
            .iter()
            .take(self.coeffs.len().saturating_sub(1))
            .map(|c| c.abs() / &lc)
            .fold(Rational::zero(), |a, b| if b > a { b } else { a });
        m + Rational::one()
    }

    /// All distinct real roots in increasing order.
    pub fn real_roots(&self) -> Vec<RealRoot> {
        if self.degree().unwrap_or(0) == 0 {
            return Vec::new();
        }
        let sf = self.squarefree();
        let sturm = Sturm::new(&sf);
        let b = sf.root_bound();
        let mut out = Vec::new();
        let mut stack = vec![(-b.clone(), b)];
        while let Some((lo, hi)) = stack.pop() {
            let n = sturm.count(&lo, &hi);
            if n == 0 {
                continue;
            }
            if n == 1 {
                out.push(RealRoot::new(sf.clone(), lo, hi));
                continue;
            }
            let mid = (&lo + &hi) / Rational::from_integer(2.into());
            stack.push((mid.clone(), hi));
            stack.push((lo, mid));
        }
        out.sort_by(|a, b| a.lo.cmp(&b.lo));
        out
    }

    /// Distinct real roots that lie in the open interval `(lo, hi)`.
    pub fn real_roots_between(&self, lo: &Rational, hi: &Rational) -> Vec<RealRoot> {
        self.real_roots()
            .into_iter()
            .filter_map(|mut r| r.inside(lo, hi).then_some(r))
            .collect()
    }
}

impl fmt::Display for UPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_poly(1, 0))
    }
}

/// Sign-variation counter for a square-free polynomial.
#[derive(Debug, Clone)]
pub struct Sturm {
    seq: Vec<UPoly>,
}

impl Sturm {
    pub fn new(p: &UPoly) -> Self {
        Sturm {
            seq: p.sturm_sequence(),
        }
    }

    pub fn variations(&self, x: &Rational) -> usize {
        let signs: Vec<i8> = self
            .seq
            .iter()
            .map(|p| {
                let v = p.eval(x);
                if v.is_positive() {
                    1
                } else if v.is_negative() {
                    -1
                } else {
                    0
                }
            })
            .filter(|&s| s != 0)
            .collect();
        signs.windows(2).filter(|w| w[0] != w[1]).count()
    }

    /// Number of distinct roots in the half-open interval `(lo, hi]`.
    pub fn count(&self, lo: &Rational, hi: &Rational) -> usize {
        self.variations(lo).saturating_sub(self.variations(hi))
    }
}

/// A real root of a square-free polynomial, isolated in `(lo, hi]`, or
/// known exactly when `lo == hi`.
#[derive(Debug, Clone)]
pub struct RealRoot {
    pub poly: UPoly,
    pub lo: Rational,
    pub hi: Rational,
    sturm: Sturm,
}

impl RealRoot {
    pub fn new(poly: UPoly, lo: Rational, hi: Rational) -> Self {
        let sturm = Sturm::new(&poly);
        let mut r = RealRoot { poly, lo, hi, sturm };
        if r.poly.eval(&r.hi).is_zero() {
            r.lo = r.hi.clone();
        }
        r
    }

    pub fn exact(&self) -> Option<&Rational> {
        (self.lo == self.hi).then_some(&self.lo)
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    fn bisect(&mut self) {
        if self.exact().is_some() {
            return;
        }
        let mid = (&self.lo + &self.hi) / Rational::from_integer(2.into());
        if self.poly.eval(&mid).is_zero() {
            self.lo = mid.clone();
            self.hi = mid;
        } else if self.sturm.count(&self.lo, &mid) == 1 {
            self.hi = mid;
        } else {
            self.lo = mid;
        }
    }

    /// Shrinks the interval below `width` (or until the root is exact).
    pub fn refine(&mut self, width: &Rational) {
        while self.exact().is_none() && &self.width() >= width {
            self.bisect();
        }
    }

    /// Whether the root lies strictly between `lo` and `hi`, bisecting as
    /// needed to decide.
    pub fn inside(&mut self, lo: &Rational, hi: &Rational) -> bool {
        loop {
            if let Some(x) = self.exact() {
                return lo < x && x < hi;
            }
            if &self.lo >= lo && &self.hi < hi {
                return true;
            }
            if &self.hi <= lo || &self.lo >= hi {
                return false;
            }
            for b in [lo, hi] {
                if &self.lo < b && b <= &self.hi && self.poly.eval(b).is_zero() {
                    self.lo = b.clone();
                    self.hi = b.clone();
                }
            }
            self.bisect();
        }
    }

    /// The root as a rational number, if it is one. Decided exactly: any
    /// rational root `p/q` has `q` dividing the leading coefficient `L` of
    /// the primitive integer polynomial, and two such rationals are at
    /// least `1/L^2` apart, so the simplest rational of a narrower
    /// isolating interval is the only candidate.
    pub fn as_rational(&mut self) -> Option<Rational> {
        if let Some(x) = self.exact() {
            return Some(x.clone());
        }
        let lc = self.poly.integer_coeffs().last().cloned().unwrap_or_else(BigInt::one).abs();
        let width = Rational::new(BigInt::one(), &lc * &lc * BigInt::from(2));
        self.refine(&width);
        if let Some(x) = self.exact() {
            return Some(x.clone());
        }
        let cand = simplest_between(&self.lo, &self.hi);
        if self.poly.eval(&cand).is_zero() {
            self.lo = cand.clone();
            self.hi = cand.clone();
            Some(cand)
        } else {
            None
        }
    }

    pub fn midpoint_f64(&self) -> f64 {
        (to_f64(&self.lo) + to_f64(&self.hi)) / 2.0
    }
}

/// Newton-form interpolation through `(xs[i], ys[i])`.
pub fn interpolate(xs: &[Rational], ys: &[Rational]) -> UPoly {
    let n = xs.len();
    let mut dd = ys.to_vec();
    for j in 1..n {
        for i in (j..n).rev() {
            dd[i] = (&dd[i] - &dd[i - 1]) / (&xs[i] - &xs[i - j]);
        }
    }
    let mut out = UPoly::constant(dd[n - 1].clone());
    for i in (0..n - 1).rev() {
        out = out.mul(&UPoly::linear_root(&xs[i])).add(&UPoly::constant(dd[i].clone()));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    #[test]
    fn division_and_gcd() {
        let a = UPoly::from_ints(&[-1, 0, 1]);
        let b = UPoly::from_ints(&[1, 1]);
        let (q, r) = a.div_rem(&b);
        assert_eq!(q, UPoly::from_ints(&[-1, 1]));
        assert!(r.is_zero());
        let c = UPoly::from_ints(&[2, -3, 1]);
        assert_eq!(a.gcd(&c), UPoly::from_ints(&[-1, 1]));
        let sq = UPoly::from_ints(&[1, 2, 1]).mul(&UPoly::from_ints(&[-2, 1]));
        assert_eq!(sq.squarefree(), UPoly::from_ints(&[-2, -1, 1]));
    }

    #[test]
    fn isolates_roots() {
        // x^3 - x has roots -1, 0, 1
        let p = UPoly::from_ints(&[0, -1, 0, 1]);
        let mut roots = p.real_roots();
        assert_eq!(roots.len(), 3);
        let vals: Vec<Rational> = roots.iter_mut().map(|r| r.as_rational().unwrap()).collect();
        assert_eq!(vals, vec![int(-1), int(0), int(1)]);
        // x^2 - 2 has two irrational roots
        let q = UPoly::from_ints(&[-2, 0, 1]);
        let mut roots = q.real_roots();
        assert_eq!(roots.len(), 2);
        assert!(roots[1].as_rational().is_none());
        roots[1].refine(&rat(1, 1_000_000));
        assert!((roots[1].midpoint_f64() - 2f64.sqrt()).abs() < 1e-6);
    }

    #[test]
    fn rational_root_with_large_denominator() {
        // (1297 x - 2516)(x^2 + 1)
        let p = UPoly::from_ints(&[-2516, 1297]).mul(&UPoly::from_ints(&[1, 0, 1]));
        let mut roots = p.real_roots();
        assert_eq!(roots.len(), 1);
        assert_eq!(roots[0].as_rational(), Some(rat(2516, 1297)));
    }

    #[test]
    fn roots_in_window() {
        let p = UPoly::from_ints(&[0, -1, 0, 1]);
        assert_eq!(p.real_roots_between(&int(0), &int(2)).len(), 1);
        assert_eq!(p.real_roots_between(&rat(-1, 2), &rat(1, 2)).len(), 1);
    }

    #[test]
    fn interpolation_recovers() {
        let p = UPoly::from_ints(&[3, 0, -2, 5]);
        let xs: Vec<Rational> = (0..4).map(int).collect();
        let ys: Vec<Rational> = xs.iter().map(|x| p.eval(x)).collect();
        assert_eq!(interpolate(&xs, &ys), p);
    }
}
