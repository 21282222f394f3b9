//! Sparse multivariate polynomials with exact rational coefficients.
//!
//! Terms live in a `BTreeMap` keyed by exponent vectors under graded
//! lexicographic order, so iteration, printing and serialization are
//! canonical. Zero coefficients are never stored.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadform::QuadForm;
use crate::rational::{display_rational, format_rational, parse_rational, Rational};

/// Exponent vector, ordered by total degree and then lexicographically.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Monomial(e)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        other
            .divides(self)
            .then(|| Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect()))
    }

    /// All exponent vectors in `nvars` variables of total degree exactly `d`,
    /// in descending graded-lex order.
    pub fn all_of_degree(nvars: usize, d: u32) -> Vec<Monomial> {
        fn rec(nvars: usize, left: u32, prefix: &mut Vec<u32>, out: &mut Vec<Monomial>) {
            if prefix.len() + 1 == nvars {
                prefix.push(left);
                out.push(Monomial(prefix.clone()));
                prefix.pop();
                return;
            }
            for e in (0..=left).rev() {
                prefix.push(e);
                rec(nvars, left - e, prefix, out);
                prefix.pop();
            }
        }
        let mut out = Vec::new();
        if nvars == 0 {
            if d == 0 {
                out.push(Monomial(vec![]));
            }
            return out;
        }
        rec(nvars, d, &mut Vec::with_capacity(nvars), &mut out);
        out
    }

    /// All exponent vectors of total degree at most `d`, descending.
    pub fn all_up_to_degree(nvars: usize, d: u32) -> Vec<Monomial> {
        (0..=d)
            .rev()
            .flat_map(|k| Monomial::all_of_degree(nvars, k))
            .collect()
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    nvars: usize,
    terms: BTreeMap<Monomial, Rational>,
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        Poly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(nvars: usize) -> Self {
        Poly::constant(nvars, Rational::one())
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        let mut p = Poly::zero(nvars);
        p.add_term(Monomial::one(nvars), c);
        p
    }

    pub fn from_int(nvars: usize, c: i64) -> Self {
        Poly::constant(nvars, Rational::from_integer(BigInt::from(c)))
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        assert!(i < nvars, "variable index {i} out of range for {nvars} variables");
        let mut p = Poly::zero(nvars);
        p.add_term(Monomial::var(nvars, i), Rational::one());
        p
    }

    /// Variables `x_0, ..., x_{n-1}` as polynomials.
    pub fn vars(nvars: usize) -> Vec<Poly> {
        (0..nvars).map(|i| Poly::var(nvars, i)).collect()
    }

    pub fn monomial(m: Monomial, c: Rational) -> Self {
        let mut p = Poly::zero(m.nvars());
        p.add_term(m, c);
        p
    }

    /// Builds a polynomial from `(coefficient, exponents)` pairs; repeated
    /// exponents are summed.
    pub fn from_terms<I>(nvars: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Rational, Vec<u32>)>,
    {
        let mut p = Poly::zero(nvars);
        for (c, e) in terms {
            if e.len() != nvars {
                return Err(Error::Arity {
                    expected: nvars,
                    got: e.len(),
                });
            }
            p.add_term(Monomial(e), c);
        }
        Ok(p)
    }

    /// Polynomial with the given coefficient vector over `monomials`.
    pub fn from_coefficients(nvars: usize, monomials: &[Monomial], coeffs: &[Rational]) -> Self {
        let mut p = Poly::zero(nvars);
        for (m, c) in monomials.iter().zip(coeffs) {
            p.add_term(m.clone(), c.clone());
        }
        p
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        debug_assert_eq!(m.nvars(), self.nvars);
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in descending graded-lex order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter().rev()
    }

    pub fn coeff(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn coeff_of(&self, exps: &[u32]) -> Rational {
        self.coeff(&Monomial(exps.to_vec()))
    }

    /// Total degree; the zero polynomial has degree 0.
    pub fn degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.keys().map(|m| m.0[var]).max().unwrap_or(0)
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next_back()
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut it = self.terms.keys().map(Monomial::degree);
        match it.next() {
            None => true,
            Some(d) => it.all(|e| e == d),
        }
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.degree() == 0)
    }

    /// Constant value when the polynomial has no variable dependence.
    pub fn as_constant(&self) -> Option<Rational> {
        self.is_constant()
            .then(|| self.coeff(&Monomial::one(self.nvars)))
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.nvars);
        }
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut result = Poly::one(self.nvars);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Homogeneous component of total degree `d`.
    pub fn homogeneous_part(&self, d: u32) -> Poly {
        Poly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() == d)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    fn check_arity(&self, n: usize) -> Result<()> {
        if n != self.nvars {
            return Err(Error::Arity {
                expected: self.nvars,
                got: n,
            });
        }
        Ok(())
    }

    /// Exact value at a rational point.
    pub fn evaluate(&self, pt: &[Rational]) -> Result<Rational> {
        self.check_arity(pt.len())?;
        let mut powers: Vec<Vec<Rational>> = pt.iter().map(|v| vec![Rational::one(), v.clone()]).collect();
        let mut total = Rational::zero();
        for (m, c) in &self.terms {
            let mut term = c.clone();
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let cache = &mut powers[i];
                while cache.len() <= e as usize {
                    let next = cache.last().unwrap() * &pt[i];
                    cache.push(next);
                }
                term *= &cache[e as usize];
            }
            total += term;
        }
        Ok(total)
    }

    pub fn evaluate_ints(&self, pt: &[i64]) -> Result<Rational> {
        let pt: Vec<Rational> = pt.iter().map(|&v| Rational::from_integer(v.into())).collect();
        self.evaluate(&pt)
    }

    pub fn partial(&self, var: usize) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (m, c) in &self.terms {
            let e = m.0[var];
            if e == 0 {
                continue;
            }
            let mut m2 = m.clone();
            m2.0[var] -= 1;
            out.add_term(m2, c * Rational::from_integer(BigInt::from(e)));
        }
        out
    }

    pub fn gradient(&self) -> Vec<Poly> {
        (0..self.nvars).map(|i| self.partial(i)).collect()
    }

    /// Inserts a new variable at `new_var_index` and pads every term to
    /// `target_degree`.
    pub fn homogenize(&self, target_degree: u32, new_var_index: usize) -> Result<Poly> {
        let deg = self.degree();
        if target_degree < deg {
            return Err(Error::DegreeTooLow {
                target: target_degree,
                degree: deg,
            });
        }
        if new_var_index > self.nvars {
            return Err(Error::Arity {
                expected: self.nvars,
                got: new_var_index,
            });
        }
        let mut out = Poly::zero(self.nvars + 1);
        for (m, c) in &self.terms {
            let mut e = m.0.clone();
            e.insert(new_var_index, target_degree - m.degree());
            out.add_term(Monomial(e), c.clone());
        }
        Ok(out)
    }

    /// Sets variable `var_index` to 1 and removes it.
    pub fn dehomogenize(&self, var_index: usize) -> Result<Poly> {
        if !self.is_homogeneous() {
            return Err(Error::NotHomogeneous);
        }
        self.check_index(var_index)?;
        Ok(self.drop_var(var_index))
    }

    fn check_index(&self, var: usize) -> Result<()> {
        if var >= self.nvars {
            return Err(Error::Arity {
                expected: self.nvars,
                got: var + 1,
            });
        }
        Ok(())
    }

    /// Substitutes 1 for `var` and removes it, without any homogeneity check.
    fn drop_var(&self, var: usize) -> Poly {
        let mut out = Poly::zero(self.nvars - 1);
        for (m, c) in &self.terms {
            let mut e = m.0.clone();
            e.remove(var);
            out.add_term(Monomial(e), c.clone());
        }
        out
    }

    /// Substitutes a rational value for `var` and removes the variable.
    pub fn substitute(&self, var: usize, value: &Rational) -> Result<Poly> {
        self.check_index(var)?;
        let mut out = Poly::zero(self.nvars - 1);
        let mut cache = vec![Rational::one()];
        for (m, c) in &self.terms {
            let e = m.0[var] as usize;
            while cache.len() <= e {
                let next = cache.last().unwrap() * value;
                cache.push(next);
            }
            let mut ex = m.0.clone();
            ex.remove(var);
            out.add_term(Monomial(ex), c * &cache[e]);
        }
        Ok(out)
    }

    /// Substitutes a rational value for `var` but keeps the variable slot.
    pub fn specialize(&self, var: usize, value: &Rational) -> Result<Poly> {
        let reduced = self.substitute(var, value)?;
        reduced.insert_var(var)
    }

    /// Adds an unused variable at position `index`.
    pub fn insert_var(&self, index: usize) -> Result<Poly> {
        if index > self.nvars {
            return Err(Error::Arity {
                expected: self.nvars,
                got: index,
            });
        }
        let mut out = Poly::zero(self.nvars + 1);
        for (m, c) in &self.terms {
            let mut e = m.0.clone();
            e.insert(index, 0);
            out.add_term(Monomial(e), c.clone());
        }
        Ok(out)
    }

    /// Embeds into a ring with `nvars` variables by appending unused ones.
    pub fn extend_vars(&self, nvars: usize) -> Poly {
        assert!(nvars >= self.nvars);
        let mut out = Poly::zero(nvars);
        for (m, c) in &self.terms {
            let mut e = m.0.clone();
            e.resize(nvars, 0);
            out.add_term(Monomial(e), c.clone());
        }
        out
    }

    /// Removes variables past `nvars`; fails if any of them occurs.
    pub fn truncate_vars(&self, nvars: usize) -> Result<Poly> {
        let mut out = Poly::zero(nvars);
        for (m, c) in &self.terms {
            if m.0[nvars..].iter().any(|&e| e > 0) {
                return Err(Error::Arity {
                    expected: nvars,
                    got: self.nvars,
                });
            }
            out.add_term(Monomial(m.0[..nvars].to_vec()), c.clone());
        }
        Ok(out)
    }

    /// Renames variables: variable `i` becomes variable `perm[i]`.
    pub fn permute_vars(&self, perm: &[usize]) -> Result<Poly> {
        self.check_arity(perm.len())?;
        let mut out = Poly::zero(self.nvars);
        for (m, c) in &self.terms {
            let mut e = vec![0; self.nvars];
            for (i, &p) in perm.iter().enumerate() {
                e[p] = m.0[i];
            }
            out.add_term(Monomial(e), c.clone());
        }
        Ok(out)
    }

    /// Exact substitution `outer(inner_0, ..., inner_{k-1})`.
    pub fn compose(&self, inner: &[Poly]) -> Result<Poly> {
        self.check_arity(inner.len())?;
        let target = inner.first().map(Poly::nvars).unwrap_or(0);
        if let Some(bad) = inner.iter().find(|p| p.nvars != target) {
            return Err(Error::Arity {
                expected: target,
                got: bad.nvars,
            });
        }
        let mut powers: Vec<Vec<Poly>> = inner.iter().map(|p| vec![Poly::one(target), p.clone()]).collect();
        let mut out = Poly::zero(target);
        for (m, c) in &self.terms {
            let mut term = Poly::constant(target, c.clone());
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let cache = &mut powers[i];
                while cache.len() <= e as usize {
                    let next = cache.last().unwrap() * &inner[i];
                    cache.push(next);
                }
                term = &term * &cache[e as usize];
            }
            out += &term;
        }
        Ok(out)
    }

    /// Translation `p(x + shift)`.
    pub fn shift(&self, shift: &[Rational]) -> Result<Poly> {
        self.check_arity(shift.len())?;
        let n = self.nvars;
        let inner: Vec<Poly> = shift
            .iter()
            .enumerate()
            .map(|(i, s)| &Poly::var(n, i) + &Poly::constant(n, s.clone()))
            .collect();
        self.compose(&inner)
    }

    /// Degree-two component of `p(pt + u)` as a quadratic form in `u`.
    pub fn taylor_quadratic(&self, pt: &[Rational]) -> Result<QuadForm> {
        self.check_arity(pt.len())?;
        let n = self.nvars;
        let mut m = vec![vec![Rational::zero(); n]; n];
        for i in 0..n {
            let di = self.partial(i);
            for j in i..n {
                let h = di.partial(j).evaluate(pt)?;
                if i == j {
                    m[i][i] = h / Rational::from_integer(2.into());
                } else {
                    let half = h / Rational::from_integer(2.into());
                    m[i][j] = half.clone();
                    m[j][i] = half;
                }
            }
        }
        Ok(QuadForm::new(m).expect("Hessian is symmetric"))
    }

    /// True iff the value and all first partials vanish at `pt`.
    pub fn is_singular_at(&self, pt: &[Rational]) -> Result<bool> {
        if !self.evaluate(pt)?.is_zero() {
            return Ok(false);
        }
        for d in self.gradient() {
            if !d.evaluate(pt)?.is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// A zero at `pt` whose quadratic Taylor component is positive definite.
    pub fn is_round(&self, pt: &[Rational]) -> Result<bool> {
        if !self.is_singular_at(pt)? {
            return Ok(false);
        }
        Ok(self.taylor_quadratic(pt)?.definiteness() == crate::quadform::Definiteness::PositiveDefinite)
    }

    /// Coefficients over the given monomial list (missing ones are zero).
    pub fn coefficient_vector(&self, monomials: &[Monomial]) -> Vec<Rational> {
        monomials.iter().map(|m| self.coeff(m)).collect()
    }

    /// Whether every term lies in `monomials`.
    pub fn supported_on(&self, monomials: &[Monomial]) -> bool {
        self.terms.keys().all(|m| monomials.contains(m))
    }

    /// Reverses the polynomial in `var`: `var^deg * p(.., 1/var, ..)`.
    /// Fails when `var` occurs with exponent above `deg`.
    pub fn reverse_in(&self, var: usize, deg: u32) -> Result<Poly> {
        self.check_index(var)?;
        let mut out = Poly::zero(self.nvars);
        for (m, c) in &self.terms {
            if m.0[var] > deg {
                return Err(Error::DegreeTooLow {
                    target: deg,
                    degree: m.0[var],
                });
            }
            let mut e = m.0.clone();
            e[var] = deg - e[var];
            out.add_term(Monomial(e), c.clone());
        }
        Ok(out)
    }

    /// Exact square root when the polynomial is the square of a polynomial
    /// with rational coefficients. The sign is fixed by a positive leading
    /// coefficient.
    pub fn sqrt(&self) -> Option<Poly> {
        if self.is_zero() {
            return Some(self.clone());
        }
        let (lm, lc) = self.leading_term()?;
        if lm.0.iter().any(|e| e % 2 == 1) {
            return None;
        }
        let root_c = crate::rational::sqrt_exact(lc)?;
        let root_m = Monomial(lm.0.iter().map(|e| e / 2).collect());
        let mut root = Poly::monomial(root_m.clone(), root_c.clone());
        let two_lead = root_c * Rational::from_integer(2.into());
        // Each step fixes the next term of the root from the leading term of
        // the residual; the root has at most as many terms as monomials of
        // half the degree.
        let budget = crate::rational::binomial(self.nvars + (lm.degree() / 2) as usize, self.nvars) + 1;
        for _ in 0..budget {
            let residual = self - &(&root * &root);
            let Some((rm, rc)) = residual.leading_term() else {
                return Some(root);
            };
            let next_m = rm.div(&root_m)?;
            if next_m >= root_m {
                return None;
            }
            root.add_term(next_m, rc / &two_lead);
        }
        let residual = self - &(&root * &root);
        residual.is_zero().then_some(root)
    }

    /// Multiplies so that the leading coefficient equals one.
    pub fn monic(&self) -> Poly {
        match self.leading_term() {
            None => self.clone(),
            Some((_, c)) => self.scale(&(Rational::one() / c)),
        }
    }

    /// Rescales to coprime integer coefficients with a positive leading
    /// coefficient.
    pub fn primitive(&self) -> Poly {
        use num_integer::Integer;
        if self.is_zero() {
            return self.clone();
        }
        let den = self.terms.values().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let num = self
            .terms
            .values()
            .fold(BigInt::zero(), |acc, c| acc.gcd(&(c * Rational::from_integer(den.clone())).to_integer()));
        let mut f = Rational::new(den, num);
        if self.leading_term().is_some_and(|(_, c)| c.is_negative()) {
            f = -f;
        }
        self.scale(&f)
    }

    /// True when `other = lambda * self` for some nonzero rational lambda.
    pub fn is_proportional_to(&self, other: &Poly) -> bool {
        if self.is_zero() || other.is_zero() {
            return self.is_zero() && other.is_zero();
        }
        self.monic() == other.monic()
    }

    pub fn to_text(&self, names: &[&str]) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (k, (m, c)) in self.terms().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            if k == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mut factors = Vec::new();
            for (i, &e) in m.0.iter().enumerate() {
                match e {
                    0 => {}
                    1 => factors.push(names[i].to_string()),
                    _ => factors.push(format!("{}^{}", names[i], e)),
                }
            }
            if factors.is_empty() || !mag.is_one() {
                out.push_str(&display_rational(&mag));
                if !factors.is_empty() {
                    out.push(' ');
                }
            }
            out.push_str(&factors.join(" "));
        }
        out
    }

    /// Parses polynomial expressions: sums and products of rational
    /// literals (`p/q` or decimals), variables, parenthesized groups and
    /// powers `^n`. Juxtaposition multiplies, so the canonical text output
    /// `3 x^2 y - 1/2 z` parses back to the same polynomial.
    pub fn parse(text: &str, names: &[&str]) -> Result<Poly> {
        let tokens = tokenize(text)?;
        let mut parser = ExprParser {
            tokens: &tokens,
            pos: 0,
            names,
            text,
        };
        let p = parser.sum()?;
        if parser.pos != tokens.len() {
            return Err(Error::Parse(format!("unexpected `{}` in `{text}`", tokens[parser.pos])));
        }
        Ok(p)
    }

    pub fn to_json(&self, names: &[&str]) -> PolyJson {
        PolyJson {
            vars: names.iter().map(|s| s.to_string()).collect(),
            terms: self
                .terms()
                .map(|(m, c)| TermJson {
                    coef: format_rational(c),
                    exp: m.0.clone(),
                })
                .collect(),
        }
    }

    pub fn from_json(json: &PolyJson) -> Result<Poly> {
        let n = json.vars.len();
        let mut terms = Vec::with_capacity(json.terms.len());
        for t in &json.terms {
            terms.push((parse_rational(&t.coef)?, t.exp.clone()));
        }
        Poly::from_terms(n, terms)
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Num(Rational),
    Ident(String),
    Sym(char),
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Token::Num(q) => write!(f, "{q}"),
            Token::Ident(s) => write!(f, "{s}"),
            Token::Sym(c) => write!(f, "{c}"),
        }
    }
}

fn tokenize(text: &str) -> Result<Vec<Token>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '/' || chars[i] == '.') {
                i += 1;
            }
            let lit: String = chars[start..i].iter().collect();
            out.push(Token::Num(parse_rational(&lit)?));
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push(Token::Ident(chars[start..i].iter().collect()));
        } else if "+-*^()".contains(c) {
            out.push(Token::Sym(c));
            i += 1;
        } else {
            return Err(Error::Parse(format!("unexpected `{c}` in `{text}`")));
        }
    }
    Ok(out)
}

struct ExprParser<'a> {
    tokens: &'a [Token],
    pos: usize,
    names: &'a [&'a str],
    text: &'a str,
}

impl ExprParser<'_> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Token::Sym(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn err(&self, what: &str) -> Error {
        Error::Parse(format!("{what} at token {} in `{}`", self.pos, self.text))
    }

    fn sum(&mut self) -> Result<Poly> {
        let n = self.names.len();
        let mut acc = Poly::zero(n);
        let mut first = true;
        loop {
            let neg = if self.eat('-') {
                true
            } else if self.eat('+') {
                false
            } else if first {
                false
            } else {
                break;
            };
            first = false;
            let t = self.product()?;
            acc = if neg { &acc - &t } else { &acc + &t };
        }
        Ok(acc)
    }

    fn product(&mut self) -> Result<Poly> {
        let mut acc = self.power()?;
        loop {
            let explicit = self.eat('*');
            match self.peek() {
                Some(Token::Num(_)) | Some(Token::Ident(_)) | Some(Token::Sym('(')) => {
                    acc = &acc * &self.power()?;
                }
                _ if explicit => return Err(self.err("expected a factor after `*`")),
                _ => return Ok(acc),
            }
        }
    }

    fn power(&mut self) -> Result<Poly> {
        let base = self.atom()?;
        if self.eat('^') {
            match self.peek() {
                Some(Token::Num(q)) if q.is_integer() && !q.is_negative() => {
                    let e = q
                        .to_integer()
                        .try_into()
                        .map_err(|_| self.err("exponent too large"))?;
                    self.pos += 1;
                    Ok(base.pow(e))
                }
                _ => Err(self.err("expected a nonnegative integer exponent")),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<Poly> {
        let n = self.names.len();
        match self.peek().cloned() {
            Some(Token::Num(q)) => {
                self.pos += 1;
                Ok(Poly::constant(n, q))
            }
            Some(Token::Ident(name)) => {
                self.pos += 1;
                let idx = self
                    .names
                    .iter()
                    .position(|v| *v == name)
                    .ok_or_else(|| Error::Parse(format!("unknown variable `{name}`")))?;
                Ok(Poly::var(n, idx))
            }
            Some(Token::Sym('(')) => {
                self.pos += 1;
                let inner = self.sum()?;
                if !self.eat(')') {
                    return Err(self.err("expected `)`"));
                }
                Ok(inner)
            }
            _ => Err(self.err("expected a number, variable or `(`")),
        }
    }
}

/// Default variable names: `x y z w` for up to four variables, `x1..xn`
/// beyond that.
pub fn default_names(nvars: usize) -> Vec<String> {
    const SHORT: [&str; 4] = ["x", "y", "z", "w"];
    if nvars <= 4 {
        SHORT[..nvars].iter().map(|s| s.to_string()).collect()
    } else {
        (1..=nvars).map(|i| format!("x{i}")).collect()
    }
}

/// JSON form of a polynomial.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyJson {
    pub vars: Vec<String>,
    pub terms: Vec<TermJson>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub coef: String,
    pub exp: Vec<u32>,
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = default_names(self.nvars);
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        f.write_str(&self.to_text(&refs))
    }
}

impl<'a> Add<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn add(self, rhs: &'a Poly) -> Poly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl<'a> Sub<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn sub(self, rhs: &'a Poly) -> Poly {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl AddAssign<&Poly> for Poly {
    fn add_assign(&mut self, rhs: &Poly) {
        assert_eq!(self.nvars, rhs.nvars, "adding polynomials of different arity");
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), c.clone());
        }
    }
}

impl SubAssign<&Poly> for Poly {
    fn sub_assign(&mut self, rhs: &Poly) {
        assert_eq!(self.nvars, rhs.nvars, "subtracting polynomials of different arity");
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), -c.clone());
        }
    }
}

impl<'a> Mul<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn mul(self, rhs: &'a Poly) -> Poly {
        assert_eq!(self.nvars, rhs.nvars, "multiplying polynomials of different arity");
        let mut out = Poly::zero(self.nvars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $f:ident) => {
        impl $tr<Poly> for Poly {
            type Output = Poly;
            fn $f(self, rhs: Poly) -> Poly {
                (&self).$f(&rhs)
            }
        }
        impl<'a> $tr<&'a Poly> for Poly {
            type Output = Poly;
            fn $f(self, rhs: &'a Poly) -> Poly {
                (&self).$f(rhs)
            }
        }
        impl<'a> $tr<Poly> for &'a Poly {
            type Output = Poly;
            fn $f(self, rhs: Poly) -> Poly {
                self.$f(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

impl std::iter::Sum for Poly {
    fn sum<I: Iterator<Item = Poly>>(mut iter: I) -> Poly {
        let mut acc = iter.next().expect("sum of an empty polynomial iterator");
        for p in iter {
            acc += &p;
        }
        acc
    }
}
