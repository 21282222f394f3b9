//! Closed intervals with rational endpoints and exact interval arithmetic.

use std::fmt;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::poly::Poly;
use crate::rational::{format_rational, to_f64, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Interval {
    pub lo: Rational,
    pub hi: Rational,
}

impl Interval {
    pub fn new(lo: Rational, hi: Rational) -> Self {
        if lo <= hi {
            Interval { lo, hi }
        } else {
            Interval { lo: hi, hi: lo }
        }
    }

    pub fn point(x: Rational) -> Self {
        Interval { lo: x.clone(), hi: x }
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn contains(&self, x: &Rational) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.lo.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.hi.is_negative()
    }

    pub fn add(&self, o: &Interval) -> Interval {
        Interval::new(&self.lo + &o.lo, &self.hi + &o.hi)
    }

    pub fn neg(&self) -> Interval {
        Interval::new(-self.hi.clone(), -self.lo.clone())
    }

    pub fn sub(&self, o: &Interval) -> Interval {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Interval) -> Interval {
        let c = [&self.lo * &o.lo, &self.lo * &o.hi, &self.hi * &o.lo, &self.hi * &o.hi];
        let lo = c.iter().min().unwrap().clone();
        let hi = c.iter().max().unwrap().clone();
        Interval { lo, hi }
    }

    pub fn scale(&self, c: &Rational) -> Interval {
        Interval::new(&self.lo * c, &self.hi * c)
    }

    /// Tight enclosure of `x^e`, accounting for even powers of intervals
    /// that straddle zero.
    pub fn pow(&self, e: u32) -> Interval {
        if e == 0 {
            return Interval::point(Rational::from_integer(1.into()));
        }
        let a = pow_rat(&self.lo, e);
        let b = pow_rat(&self.hi, e);
        if e % 2 == 1 {
            Interval::new(a, b)
        } else if self.contains_zero() {
            Interval::new(Rational::zero(), a.max(b))
        } else {
            Interval::new(a, b)
        }
    }

    pub fn midpoint(&self) -> Rational {
        (&self.lo + &self.hi) / Rational::from_integer(2.into())
    }

    pub fn to_f64_pair(&self) -> (f64, f64) {
        (to_f64(&self.lo), to_f64(&self.hi))
    }
}

fn pow_rat(x: &Rational, e: u32) -> Rational {
    (0..e).fold(Rational::from_integer(1.into()), |acc, _| acc * x)
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", format_rational(&self.lo), format_rational(&self.hi))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntervalJson {
    pub lo: String,
    pub hi: String,
}

impl From<&Interval> for IntervalJson {
    fn from(i: &Interval) -> Self {
        IntervalJson {
            lo: format_rational(&i.lo),
            hi: format_rational(&i.hi),
        }
    }
}

/// Natural interval extension of `p` on a box.
pub fn eval_poly(p: &Poly, b: &[Interval]) -> Interval {
    let mut acc = Interval::point(Rational::zero());
    for (m, c) in p.terms() {
        let mut t = Interval::point(c.clone());
        for (iv, &e) in b.iter().zip(&m.0) {
            if e > 0 {
                t = t.mul(&iv.pow(e));
            }
        }
        acc = acc.add(&t);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    #[test]
    fn arithmetic_encloses() {
        let a = Interval::new(int(-1), int(2));
        assert_eq!(a.pow(2), Interval::new(int(0), int(4)));
        assert_eq!(a.pow(3), Interval::new(int(-1), int(8)));
        let b = Interval::new(rat(1, 2), int(1));
        assert_eq!(a.mul(&b), Interval::new(int(-1), int(2)));
        assert!(b.is_positive());
    }

    #[test]
    fn polynomial_enclosure_contains_value() {
        let p = Poly::parse("x^2 y - 3 x + 1", &["x", "y"]).unwrap();
        let bx = [Interval::new(rat(9, 10), rat(11, 10)), Interval::new(int(2), int(3))];
        let v = p.evaluate(&[int(1), rat(5, 2)]).unwrap();
        assert!(eval_poly(&p, &bx).contains(&v));
    }
}
