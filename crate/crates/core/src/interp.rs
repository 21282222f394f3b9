//! Lagrange interpolation on the triangular lattice and the gondola family.

use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hilbert::{max_perturbation, Perturbation, SampleRegion, SearchConfig};
use crate::poly::Poly;
use crate::rational::{factorial, int, Rational};

/// `(p)_m = p (p - 1) ... (p - m + 1)`.
pub fn falling(p: &Poly, m: i64) -> Result<Poly> {
    if m < 0 {
        return Err(Error::Domain(format!("falling product length {m} is negative")));
    }
    let n = p.nvars();
    Ok((0..m).fold(Poly::one(n), |acc, j| &acc * &(p - &Poly::from_int(n, j))))
}

/// Points `(i, j)` with `i, j >= 0` and `i + j <= d`.
pub fn triangle_lattice(d: u32) -> Vec<(u32, u32)> {
    (0..=d).flat_map(|i| (0..=d - i).map(move |j| (i, j))).collect()
}

fn in_lattice(r: u32, s: u32, d: u32) -> bool {
    r + s <= d
}

/// The Lagrange basis element of the lattice that is 1 at `(r, s)`:
/// `(x)_r (y)_s (d - x - y)_{d-r-s} / (r! s! (d-r-s)!)`.
pub fn biermann(r: u32, s: u32, d: u32) -> Result<Poly> {
    if !in_lattice(r, s, d) {
        return Err(Error::Domain(format!("({r}, {s}) is not in the lattice of degree {d}")));
    }
    let x = Poly::var(2, 0);
    let y = Poly::var(2, 1);
    let rest = &(&Poly::from_int(2, d as i64) - &x) - &y;
    let k = d - r - s;
    let num = &(&falling(&x, r as i64)? * &falling(&y, s as i64)?) * &falling(&rest, k as i64)?;
    let den = Rational::from_integer(factorial(r) * factorial(s) * factorial(k));
    Ok(num.scale(&(Rational::one() / den)))
}

/// Basis of the degree-`d` polynomials vanishing on the lattice minus `b`.
pub fn triangle_basis(b: &[(u32, u32)], d: u32) -> Result<Vec<Poly>> {
    b.iter().map(|&(r, s)| biermann(r, s, d)).collect()
}

/// `sum_{(r,s)} p(r, s) phi_{r,s,d}`.
pub fn interpolate(p: &Poly, d: u32) -> Result<Poly> {
    let mut out = Poly::zero(2);
    for (r, s) in triangle_lattice(d) {
        let v = p.evaluate(&[int(r as i64), int(s as i64)])?;
        if !v.is_zero() {
            out = &out + &biermann(r, s, d)?.scale(&v);
        }
    }
    Ok(out)
}

/// Checks `phi_{r,s,d}(i, j) = delta` over all pairs of lattice points.
pub fn delta_property(d: u32) -> Result<bool> {
    let pts = triangle_lattice(d);
    let basis: Vec<Poly> = pts.iter().map(|&(r, s)| biermann(r, s, d)).collect::<Result<_>>()?;
    let ok = basis.par_iter().zip(&pts).all(|(phi, &(r, s))| {
        pts.iter().all(|&(i, j)| {
            let v = phi.evaluate(&[int(i as i64), int(j as i64)]).expect("arity 2");
            if (i, j) == (r, s) {
                v.is_one()
            } else {
                v.is_zero()
            }
        })
    });
    Ok(ok)
}

/// The lattice minus its two far corners.
pub fn gondola_points(d: u32) -> Vec<(u32, u32)> {
    triangle_lattice(d)
        .into_iter()
        .filter(|&p| p != (d, 0) && p != (0, d))
        .collect()
}

/// Common zeros of `(x)_d, (y)_d` not in the gondola set.
pub fn gondola_forced(d: u32) -> Vec<(u32, u32)> {
    (0..d)
        .flat_map(|i| (0..d).map(move |j| (i, j)))
        .filter(|&(i, j)| i + j > d)
        .collect()
}

/// `(x)_2 (y)_2 (x + y - 2)_{d-1} (x + y - 4)_{d-3}`.
pub fn gondola_g(d: u32) -> Result<Poly> {
    if d < 3 {
        return Err(Error::Domain("gondola needs d >= 3".into()));
    }
    let x = Poly::var(2, 0);
    let y = Poly::var(2, 1);
    let s = &x + &y;
    let shift = |k: i64| &s - &Poly::from_int(2, k);
    Ok(&(&(&falling(&x, 2)? * &falling(&y, 2)?) * &falling(&shift(2), d as i64 - 1)?) * &falling(&shift(4), d as i64 - 3)?)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GondolaInstance {
    pub d: u32,
    pub points: Vec<(u32, u32)>,
    pub forced: Vec<(u32, u32)>,
    #[serde(skip)]
    pub f1: Poly,
    #[serde(skip)]
    pub f2: Poly,
    #[serde(skip)]
    pub g: Poly,
    /// `g` vanishes with its gradient on every point.
    pub g_singular: bool,
    /// `g` is positive on every forced point.
    pub g_positive_on_forced: bool,
    pub c_estimate: Option<f64>,
}

/// Assembles the gondola data and checks `g` exactly.
pub fn gondola(d: u32) -> Result<GondolaInstance> {
    let g = gondola_g(d)?;
    let x = Poly::var(2, 0);
    let y = Poly::var(2, 1);
    let points = gondola_points(d);
    let forced = gondola_forced(d);
    let at = |(i, j): (u32, u32)| [int(i as i64), int(j as i64)];
    let g_singular = points
        .par_iter()
        .map(|&p| g.is_singular_at(&at(p)))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .all(|b| b);
    let g_positive_on_forced = forced
        .iter()
        .map(|&p| g.evaluate(&at(p)).map(|v| v.is_positive()))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .all(|b| b);
    Ok(GondolaInstance {
        d,
        points,
        forced,
        f1: falling(&x, d as i64)?,
        f2: falling(&y, d as i64)?,
        g,
        g_singular,
        g_positive_on_forced,
        c_estimate: None,
    })
}

impl GondolaInstance {
    /// `f1^2 + f2^2` in the chart `z = 1`.
    pub fn sum_of_squares(&self) -> Poly {
        &(&self.f1 * &self.f1) + &(&self.f2 * &self.f2)
    }

    /// `f1^2 + f2^2 + c g`, homogenized to a ternary form of degree `2d`.
    pub fn form(&self, c: &Rational) -> Result<Poly> {
        (&self.sum_of_squares() + &self.g.scale(c)).homogenize(2 * self.d, 2)
    }
}

pub fn gondola_form(d: u32, c: &Rational) -> Result<Poly> {
    gondola(d)?.form(c)
}

/// Search configuration for the gondola: the box `[-1, d]^2` in the
/// chart `z = 1`, anchored at the gondola points.
pub fn gondola_search_config(d: u32, base: &SearchConfig) -> SearchConfig {
    let hi = d as f64;
    SearchConfig {
        region: SampleRegion::AffineBox {
            x: (-1.0, hi),
            y: (-1.0, hi),
        },
        anchors: gondola_points(d)
            .into_iter()
            .map(|(i, j)| vec![int(i as i64), int(j as i64), int(1)])
            .collect(),
        ..base.clone()
    }
}

/// Estimates the largest `c` keeping the gondola form psd.
pub fn gondola_max_c(d: u32, base: &SearchConfig) -> Result<Perturbation> {
    let inst = gondola(d)?;
    let f = inst.sum_of_squares().homogenize(2 * d, 2)?;
    let g = inst.g.homogenize(2 * d, 2)?;
    max_perturbation(&f, &g, &gondola_search_config(d, base))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn names() -> [&'static str; 2] {
        ["x", "y"]
    }

    #[test]
    fn falling_products() {
        let x = Poly::var(2, 0);
        assert_eq!(falling(&x, 3).unwrap(), Poly::parse("x^3 - 3 x^2 + 2 x", &names()).unwrap());
        assert_eq!(falling(&x, 0).unwrap(), Poly::one(2));
        assert_eq!(falling(&Poly::from_int(2, 5), 5).unwrap(), Poly::from_int(2, 120));
        assert!(falling(&x, -1).is_err());
    }

    #[test]
    fn biermann_small_case() {
        let phi = biermann(1, 1, 3).unwrap();
        assert_eq!(phi, Poly::parse("x y (3 - x - y)", &names()).unwrap());
        assert_eq!(phi.evaluate(&[int(2), int(1)]).unwrap(), int(0));
        assert!(biermann(3, 1, 3).is_err());
    }

    #[test]
    fn delta_property_small() {
        for d in 1..=5 {
            assert!(delta_property(d).unwrap());
        }
    }

    #[test]
    fn gondola_three() {
        let g = gondola(3).unwrap();
        assert_eq!(g.forced, vec![(2, 2)]);
        assert_eq!(g.g.evaluate(&[int(2), int(2)]).unwrap(), int(8));
        assert!(g.g_singular && g.g_positive_on_forced);
        assert_eq!(g.points.len(), 8);
        assert!(gondola(2).is_err());
    }

    #[test]
    fn gondola_four_forced() {
        let g = gondola(4).unwrap();
        assert_eq!(g.forced, vec![(2, 3), (3, 2), (3, 3)]);
        assert!(g.g_singular && g.g_positive_on_forced);
        let p = g.form(&rat(1, 2)).unwrap();
        assert!(p.is_homogeneous());
        assert_eq!(p.degree(), 8);
    }
}
