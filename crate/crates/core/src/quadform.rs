//! Symmetric quadratic forms with exact definiteness classification.

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::rational::{int, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Definiteness {
    PositiveDefinite,
    PsdSingular,
    Indefinite,
    NegativeDefinite,
    NsdSingular,
}

/// `u^T M u` for a symmetric rational matrix `M`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadForm {
    matrix: Vec<Vec<Rational>>,
}

/// One weighted square `weight * (coeffs . u)^2` of a diagonalization.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightedSquare {
    pub weight: Rational,
    pub coeffs: Vec<Rational>,
}

impl QuadForm {
    pub fn new(matrix: Vec<Vec<Rational>>) -> Result<Self> {
        let n = matrix.len();
        if matrix.iter().any(|r| r.len() != n) {
            return Err(Error::Arity {
                expected: n,
                got: matrix.iter().map(Vec::len).find(|&l| l != n).unwrap_or(n),
            });
        }
        for i in 0..n {
            for j in 0..i {
                if matrix[i][j] != matrix[j][i] {
                    return Err(Error::Domain("quadratic form matrix is not symmetric".into()));
                }
            }
        }
        Ok(QuadForm { matrix })
    }

    /// Reads the matrix off a homogeneous quadratic polynomial.
    pub fn from_poly(p: &Poly) -> Result<Self> {
        if !p.is_homogeneous() || (!p.is_zero() && p.degree() != 2) {
            return Err(Error::Domain("not a quadratic form".into()));
        }
        let n = p.nvars();
        let mut m = vec![vec![Rational::zero(); n]; n];
        for (mono, c) in p.terms() {
            let idx: Vec<usize> = mono
                .0
                .iter()
                .enumerate()
                .flat_map(|(i, &e)| std::iter::repeat_n(i, e as usize))
                .collect();
            let (i, j) = (idx[0], idx[1]);
            if i == j {
                m[i][i] = c.clone();
            } else {
                let half = c / int(2);
                m[i][j] = half.clone();
                m[j][i] = half;
            }
        }
        QuadForm::new(m)
    }

    pub fn dim(&self) -> usize {
        self.matrix.len()
    }

    pub fn matrix(&self) -> &[Vec<Rational>] {
        &self.matrix
    }

    pub fn to_poly(&self) -> Poly {
        let n = self.dim();
        let vars = Poly::vars(n);
        let mut out = Poly::zero(n);
        for i in 0..n {
            for j in 0..n {
                if !self.matrix[i][j].is_zero() {
                    out += &(&vars[i] * &vars[j]).scale(&self.matrix[i][j]);
                }
            }
        }
        out
    }

    pub fn evaluate(&self, u: &[Rational]) -> Rational {
        let mut acc = Rational::zero();
        for (i, row) in self.matrix.iter().enumerate() {
            for (j, m) in row.iter().enumerate() {
                if !m.is_zero() {
                    acc += m * &u[i] * &u[j];
                }
            }
        }
        acc
    }

    /// Writes the form as a sum of weighted squares of linear forms by
    /// exact symmetric elimination. Where no diagonal pivot is available a
    /// pair `(i, j)` with `m_ij != 0` is split into a difference of two
    /// squares.
    pub fn diagonalize(&self) -> Vec<WeightedSquare> {
        let n = self.dim();
        let mut r = self.matrix.clone();
        let mut out = Vec::new();
        let subtract = |r: &mut Vec<Vec<Rational>>, w: &Rational, l: &[Rational]| {
            for i in 0..n {
                if l[i].is_zero() {
                    continue;
                }
                for j in 0..n {
                    if !l[j].is_zero() {
                        r[i][j] -= w * &l[i] * &l[j];
                    }
                }
            }
        };
        loop {
            if let Some(i) = (0..n).find(|&i| !r[i][i].is_zero()) {
                let w = r[i][i].clone();
                let l: Vec<Rational> = r[i].iter().map(|x| x / &w).collect();
                subtract(&mut r, &w, &l);
                out.push(WeightedSquare { weight: w, coeffs: l });
                continue;
            }
            let pair = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).find(|&(i, j)| !r[i][j].is_zero());
            let Some((i, j)) = pair else { break };
            let a = r[i][j].clone();
            let plus: Vec<Rational> = (0..n).map(|k| &r[i][k] + &r[j][k]).collect();
            let minus: Vec<Rational> = (0..n).map(|k| &r[i][k] - &r[j][k]).collect();
            let w = Rational::from_integer(1.into()) / (a * int(2));
            subtract(&mut r, &w, &plus);
            subtract(&mut r, &-w.clone(), &minus);
            out.push(WeightedSquare { weight: w.clone(), coeffs: plus });
            out.push(WeightedSquare { weight: -w, coeffs: minus });
        }
        out
    }

    /// `(positive, negative, zero)` counts of the inertia.
    pub fn inertia(&self) -> (usize, usize, usize) {
        let squares = self.diagonalize();
        let pos = squares.iter().filter(|s| s.weight.is_positive()).count();
        let neg = squares.iter().filter(|s| s.weight.is_negative()).count();
        (pos, neg, self.dim() - pos - neg)
    }

    pub fn definiteness(&self) -> Definiteness {
        let (pos, neg, zero) = self.inertia();
        match (pos, neg, zero) {
            (_, 0, 0) if pos > 0 => Definiteness::PositiveDefinite,
            (0, _, 0) if neg > 0 => Definiteness::NegativeDefinite,
            (_, 0, _) => Definiteness::PsdSingular,
            (0, _, _) => Definiteness::NsdSingular,
            _ => Definiteness::Indefinite,
        }
    }
}

/// Polynomial `sum weight * (coeffs . vars)^2`.
pub fn squares_to_poly(squares: &[WeightedSquare], nvars: usize) -> Poly {
    let vars = Poly::vars(nvars);
    let mut out = Poly::zero(nvars);
    for s in squares {
        let mut l = Poly::zero(nvars);
        for (c, v) in s.coeffs.iter().zip(&vars) {
            l += &v.scale(c);
        }
        out += &(&l * &l).scale(&s.weight);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn qf(rows: &[&[i64]]) -> QuadForm {
        QuadForm::new(rows.iter().map(|r| r.iter().map(|&v| int(v)).collect()).collect()).unwrap()
    }

    #[test]
    fn classification_examples() {
        // 5u1^2 + 5u2^2 + 5u3^2 - 6u1u2 - 6u1u3
        let q = qf(&[&[5, -3, -3], &[-3, 5, 0], &[-3, 0, 5]]);
        assert_eq!(q.definiteness(), Definiteness::PositiveDefinite);
        let q = qf(&[&[5, -3, -3], &[-3, 5, -3], &[-3, -3, 5]]);
        assert_eq!(q.definiteness(), Definiteness::Indefinite);
        assert_eq!(q.evaluate(&[int(1), int(1), int(1)]), int(-3));
        assert_eq!(qf(&[&[0, 0], &[0, 0]]).definiteness(), Definiteness::PsdSingular);
        assert_eq!(qf(&[&[-1, 0], &[0, 0]]).definiteness(), Definiteness::NsdSingular);
        assert_eq!(qf(&[&[-2, 1], &[1, -2]]).definiteness(), Definiteness::NegativeDefinite);
        assert_eq!(qf(&[&[0, 1], &[1, 0]]).definiteness(), Definiteness::Indefinite);
        assert_eq!(qf(&[&[1, 1], &[1, 1]]).definiteness(), Definiteness::PsdSingular);
    }

    #[test]
    fn diagonalization_reconstructs() {
        for q in [
            qf(&[&[5, -3, -3], &[-3, 5, -3], &[-3, -3, 5]]),
            qf(&[&[0, 2, 1], &[2, 0, -1], &[1, -1, 0]]),
            qf(&[&[0, 0, 3], &[0, 1, 0], &[3, 0, 0]]),
        ] {
            let back = squares_to_poly(&q.diagonalize(), 3);
            assert_eq!(back, q.to_poly());
            assert_eq!(QuadForm::from_poly(&back).unwrap(), q);
        }
    }

    #[test]
    fn rejects_asymmetric() {
        let m = vec![vec![int(1), int(2)], vec![int(0), int(1)]];
        assert!(QuadForm::new(m).is_err());
    }
}
