//! Point configurations and the polynomial spaces attached to them:
//! vanishing ideals `I_{s,d}(A)`, spans of pairwise products, gap elements
//! and their dual witnesses, forced zeros, fullness and incidence geometry.

mod forced;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, Rref};
use crate::poly::{default_names, Monomial, Poly};
use crate::rational::{binomial, format_rational, parse_rational, Rational};

pub use forced::{
    copacetic, forced_zeros, resultant, verify_forced_zeros, ForcedMethod, ForcedPoint, ForcedPointJson, ForcedZeros,
    ForcedZerosJson,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Affine,
    Projective,
}

/// A finite set of distinct rational points. Projective points are
/// nonzero and pairwise non-proportional.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointSet {
    mode: Mode,
    dim: usize,
    points: Vec<Vec<Rational>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointSetJson {
    pub mode: Mode,
    pub points: Vec<Vec<String>>,
}

pub(crate) fn proportional(a: &[Rational], b: &[Rational]) -> bool {
    for i in 0..a.len() {
        for j in i + 1..a.len() {
            if &a[i] * &b[j] != &a[j] * &b[i] {
                return false;
            }
        }
    }
    true
}

impl PointSet {
    pub fn new(mode: Mode, points: Vec<Vec<Rational>>) -> Result<Self> {
        let dim = points.first().map_or(0, Vec::len);
        if points.iter().any(|p| p.len() != dim) {
            return Err(Error::InvalidPointSet("points have different dimensions".into()));
        }
        if !points.is_empty() && dim == 0 {
            return Err(Error::InvalidPointSet("points have no coordinates".into()));
        }
        for (i, p) in points.iter().enumerate() {
            if mode == Mode::Projective && p.iter().all(Zero::is_zero) {
                return Err(Error::InvalidPointSet(format!("projective point {i} is zero")));
            }
            for (j, q) in points.iter().enumerate().take(i) {
                let same = match mode {
                    Mode::Affine => p == q,
                    Mode::Projective => proportional(p, q),
                };
                if same {
                    return Err(Error::InvalidPointSet(format!("points {j} and {i} coincide")));
                }
            }
        }
        Ok(PointSet { mode, dim, points })
    }

    pub fn affine(points: Vec<Vec<Rational>>) -> Result<Self> {
        PointSet::new(Mode::Affine, points)
    }

    pub fn projective(points: Vec<Vec<Rational>>) -> Result<Self> {
        PointSet::new(Mode::Projective, points)
    }

    pub fn from_ints(mode: Mode, points: &[&[i64]]) -> Result<Self> {
        PointSet::new(
            mode,
            points
                .iter()
                .map(|p| p.iter().map(|&c| Rational::from_integer(c.into())).collect())
                .collect(),
        )
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    /// Number of coordinates per point, which is also the number of
    /// polynomial variables.
    pub fn nvars(&self) -> usize {
        self.dim
    }

    pub fn points(&self) -> &[Vec<Rational>] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Homogeneous coordinates: affine points get a trailing 1.
    pub fn projective_points(&self) -> Vec<Vec<Rational>> {
        match self.mode {
            Mode::Projective => self.points.clone(),
            Mode::Affine => self
                .points
                .iter()
                .map(|p| {
                    let mut q = p.clone();
                    q.push(Rational::one());
                    q
                })
                .collect(),
        }
    }

    /// Whether the homogeneous point `q` belongs to the set.
    pub fn contains_projective(&self, q: &[Rational]) -> bool {
        self.projective_points().iter().any(|p| proportional(p, q))
    }

    pub fn subset(&self, indices: &[usize]) -> Result<PointSet> {
        let pts = indices
            .iter()
            .map(|&i| {
                self.points
                    .get(i)
                    .cloned()
                    .ok_or_else(|| Error::InvalidPointSet(format!("index {i} out of range")))
            })
            .collect::<Result<Vec<_>>>()?;
        PointSet::new(self.mode, pts)
    }

    pub fn to_json(&self) -> PointSetJson {
        PointSetJson {
            mode: self.mode,
            points: self
                .points
                .iter()
                .map(|p| p.iter().map(format_rational).collect())
                .collect(),
        }
    }

    pub fn from_json(json: &PointSetJson) -> Result<Self> {
        let pts = json
            .points
            .iter()
            .map(|p| p.iter().map(|s| parse_rational(s)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        PointSet::new(json.mode, pts)
    }

    fn require_planar(&self) -> Result<()> {
        let planar = match self.mode {
            Mode::Affine => self.dim == 2,
            Mode::Projective => self.dim == 3,
        };
        if planar {
            Ok(())
        } else {
            Err(Error::NotPlanar(self.dim))
        }
    }
}

/// Monomial basis of the ambient space in ascending graded-lex order:
/// degree at most `d` for affine sets, exactly `d` for projective sets.
pub fn space_monomials(mode: Mode, nvars: usize, d: u32) -> Vec<Monomial> {
    let mut m = match mode {
        Mode::Affine => Monomial::all_up_to_degree(nvars, d),
        Mode::Projective => Monomial::all_of_degree(nvars, d),
    };
    m.reverse();
    m
}

/// Multi-indices of total order below `s`.
fn derivative_orders(nvars: usize, s: u32) -> Vec<Monomial> {
    (0..s).flat_map(|k| Monomial::all_of_degree(nvars, k)).collect()
}

/// Value of `D^alpha m` at `pt`.
fn monomial_derivative_at(m: &Monomial, alpha: &Monomial, pt: &[Rational]) -> Rational {
    let mut out = Rational::one();
    for ((&e, &a), x) in m.0.iter().zip(&alpha.0).zip(pt) {
        if a > e {
            return Rational::zero();
        }
        for k in 0..a {
            out *= Rational::from_integer((e - k).into());
        }
        for _ in 0..(e - a) {
            out *= x;
        }
    }
    out
}

/// Linear conditions expressing an order-`s` zero at every point.
fn condition_matrix(points: &[Vec<Rational>], monomials: &[Monomial], s: u32) -> Vec<Vec<Rational>> {
    let nvars = monomials.first().map_or(0, Monomial::nvars);
    let orders = derivative_orders(nvars, s);
    let mut rows = Vec::new();
    for p in points {
        for alpha in &orders {
            rows.push(monomials.iter().map(|m| monomial_derivative_at(m, alpha, p)).collect());
        }
    }
    rows
}

/// A basis of `I_{s,d}(A)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdealBasis {
    pub pointset: PointSet,
    pub degree: u32,
    pub order: u32,
    pub basis: Vec<Poly>,
    pub monomials: Vec<Monomial>,
    pub condition_count: usize,
    pub condition_matrix_rank: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdealBasisJson {
    pub mode: Mode,
    pub degree: u32,
    pub order: u32,
    pub dimension: usize,
    pub lower_bound: i64,
    pub condition_count: usize,
    pub condition_matrix_rank: usize,
    pub basis: Vec<String>,
}

impl IdealBasis {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// `dim R_{n,d} - r * binom(n+s-1, n)`, counted in the affine
    /// dimension `n` (one less than the number of form variables in
    /// projective mode).
    pub fn lower_bound(&self) -> i64 {
        let n = match self.pointset.mode {
            Mode::Affine => self.pointset.nvars(),
            Mode::Projective => self.pointset.nvars() - 1,
        };
        let d = self.degree as usize;
        let s = self.order as usize;
        binomial(n + d, n) as i64 - (self.pointset.len() * binomial(n + s - 1, n)) as i64
    }

    /// Wraps a user-supplied basis, checking that it lies in the ideal and
    /// is linearly independent.
    pub fn from_polys(pointset: PointSet, degree: u32, order: u32, basis: Vec<Poly>) -> Result<Self> {
        let n = pointset.nvars();
        let monomials = space_monomials(pointset.mode, n, degree);
        let conds = condition_matrix(pointset.points(), &monomials, order);
        for p in &basis {
            if p.nvars() != n {
                return Err(Error::Arity {
                    expected: n,
                    got: p.nvars(),
                });
            }
            if !p.supported_on(&monomials) {
                return Err(Error::NotInIdeal);
            }
            let v = p.coefficient_vector(&monomials);
            if conds.iter().any(|row| !linalg::dot(row, &v).is_zero()) {
                return Err(Error::NotInIdeal);
            }
        }
        let rows: Vec<Vec<Rational>> = basis.iter().map(|p| p.coefficient_vector(&monomials)).collect();
        if linalg::rank(&rows, monomials.len()) != basis.len() {
            return Err(Error::DependentBasis);
        }
        let rank = linalg::rank(&conds, monomials.len());
        Ok(IdealBasis {
            pointset,
            degree,
            order,
            basis,
            condition_count: conds.len(),
            condition_matrix_rank: rank,
            monomials,
        })
    }

    pub fn to_json(&self) -> IdealBasisJson {
        let names = default_names(self.pointset.nvars());
        let names: Vec<&str> = names.iter().map(String::as_str).collect();
        IdealBasisJson {
            mode: self.pointset.mode,
            degree: self.degree,
            order: self.order,
            dimension: self.dim(),
            lower_bound: self.lower_bound(),
            condition_count: self.condition_count,
            condition_matrix_rank: self.condition_matrix_rank,
            basis: self.basis.iter().map(|p| p.to_text(&names)).collect(),
        }
    }

    /// Whether `p` is a linear combination of the basis.
    pub fn spans(&self, p: &Poly) -> bool {
        if !p.supported_on(&self.monomials) {
            return false;
        }
        let rows: Vec<Vec<Rational>> = self.basis.iter().map(|b| b.coefficient_vector(&self.monomials)).collect();
        linalg::rref(&rows, self.monomials.len()).contains(&p.coefficient_vector(&self.monomials))
    }

    /// Whether the span equals the span of `polys`.
    pub fn same_span(&self, polys: &[Poly]) -> bool {
        let rows: Vec<Vec<Rational>> = polys.iter().map(|b| b.coefficient_vector(&self.monomials)).collect();
        polys.iter().all(|p| self.spans(p)) && linalg::rank(&rows, self.monomials.len()) == self.dim()
    }
}

/// Basis of the polynomials of degree `d` (forms of degree `d` in
/// projective mode) with an order-`s` zero at every point of `A`.
pub fn vanishing_basis(a: &PointSet, d: u32, s: u32) -> Result<IdealBasis> {
    if a.is_empty() {
        return Err(Error::EmptyPointSet);
    }
    if d == 0 || s == 0 {
        return Err(Error::Domain("degree and order must be at least 1".into()));
    }
    let n = a.nvars();
    let monomials = space_monomials(a.mode, n, d);
    let conds = condition_matrix(a.points(), &monomials, s);
    let red = linalg::rref(&conds, monomials.len());
    let basis: Vec<Poly> = red
        .nullspace()
        .into_iter()
        .rev()
        .map(|v| Poly::from_coefficients(n, &monomials, &v).primitive())
        .collect();
    Ok(IdealBasis {
        pointset: a.clone(),
        degree: d,
        order: s,
        basis,
        condition_count: conds.len(),
        condition_matrix_rank: red.rank(),
        monomials,
    })
}

/// The pairwise products `f_i f_j` (`i <= j`) of an order-1 basis.
#[derive(Debug, Clone)]
pub struct ProductSpan {
    pub products: Vec<Poly>,
    pub pairs: Vec<(usize, usize)>,
    pub monomials: Vec<Monomial>,
    pub rank: usize,
    pub independent: bool,
    rref: Rref,
}

impl ProductSpan {
    pub fn contains(&self, p: &Poly) -> bool {
        p.supported_on(&self.monomials) && self.rref.contains(&p.coefficient_vector(&self.monomials))
    }

    /// Remainder of `p` after reduction against the products.
    pub fn reduce(&self, p: &Poly) -> Poly {
        let v = self.rref.reduce(&p.coefficient_vector(&self.monomials));
        Poly::from_coefficients(p.nvars(), &self.monomials, &v)
    }

    /// A symmetric matrix `Q` with `p = sum Q_ij f_i f_j` (unique when the
    /// products are independent); `None` when `p` is outside the span.
    pub fn coordinates(&self, p: &Poly, r: usize) -> Option<Vec<Vec<Rational>>> {
        if !self.contains(p) {
            return None;
        }
        let cols = self.monomials.len();
        // Solve sum_k c_k products[k] = p; columns of the system are products.
        let mut a = vec![vec![Rational::zero(); self.products.len()]; cols];
        for (k, prod) in self.products.iter().enumerate() {
            for (row, v) in a.iter_mut().zip(prod.coefficient_vector(&self.monomials)) {
                row[k] = v;
            }
        }
        let c = linalg::solve(&a, &p.coefficient_vector(&self.monomials), self.products.len())?;
        let mut q = vec![vec![Rational::zero(); r]; r];
        let half = Rational::new(1.into(), 2.into());
        for (&(i, j), ck) in self.pairs.iter().zip(c) {
            if i == j {
                q[i][i] = ck;
            } else {
                q[i][j] = &ck * &half;
                q[j][i] = ck * &half;
            }
        }
        Some(q)
    }
}

pub fn product_span(basis: &IdealBasis) -> Result<ProductSpan> {
    if basis.order != 1 {
        return Err(Error::Domain("product span needs an order-1 basis".into()));
    }
    let a = &basis.pointset;
    let monomials = space_monomials(a.mode, a.nvars(), 2 * basis.degree);
    let mut products = Vec::new();
    let mut pairs = Vec::new();
    for i in 0..basis.dim() {
        for j in i..basis.dim() {
            products.push(&basis.basis[i] * &basis.basis[j]);
            pairs.push((i, j));
        }
    }
    let rows: Vec<Vec<Rational>> = products.iter().map(|p| p.coefficient_vector(&monomials)).collect();
    let rref = linalg::rref(&rows, monomials.len());
    let rank = rref.rank();
    Ok(ProductSpan {
        independent: rank == products.len(),
        products,
        pairs,
        monomials,
        rank,
        rref,
    })
}

/// An exact linear functional on coefficient vectors that annihilates
/// every product `f_i f_j` but not the target polynomial. Its existence
/// shows the target is outside the product span, hence not a sum of
/// squares when it is singular on the point set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DualWitness {
    pub nvars: usize,
    pub monomials: Vec<Monomial>,
    pub functional: Vec<Rational>,
    pub products: usize,
    pub value: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessEntry {
    pub exp: Vec<u32>,
    pub coef: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DualWitnessJson {
    pub functional: Vec<WitnessEntry>,
    pub annihilated: String,
    pub value_on_target: String,
}

impl DualWitness {
    pub fn apply(&self, p: &Poly) -> Rational {
        linalg::dot(&self.functional, &p.coefficient_vector(&self.monomials))
    }

    /// Re-checks the witness from scratch against the products and the
    /// target.
    pub fn verify(&self, products: &[Poly], target: &Poly) -> bool {
        products.iter().all(|p| p.supported_on(&self.monomials) && self.apply(p).is_zero())
            && target.supported_on(&self.monomials)
            && !self.apply(target).is_zero()
    }

    pub fn to_json(&self) -> DualWitnessJson {
        DualWitnessJson {
            functional: self
                .monomials
                .iter()
                .zip(&self.functional)
                .filter(|(_, c)| !c.is_zero())
                .map(|(m, c)| WitnessEntry {
                    exp: m.0.clone(),
                    coef: format_rational(c),
                })
                .collect(),
            annihilated: format!("all {} products f_i f_j of the order-1 basis", self.products),
            value_on_target: format_rational(&self.value),
        }
    }

    pub fn from_json(json: &DualWitnessJson, nvars: usize, monomials: Vec<Monomial>, products: usize) -> Result<Self> {
        let mut functional = vec![Rational::zero(); monomials.len()];
        for e in &json.functional {
            let idx = monomials
                .iter()
                .position(|m| m.0 == e.exp)
                .ok_or_else(|| Error::Parse(format!("witness monomial {:?} outside the space", e.exp)))?;
            functional[idx] = parse_rational(&e.coef)?;
        }
        Ok(DualWitness {
            nvars,
            monomials,
            functional,
            products,
            value: parse_rational(&json.value_on_target)?,
        })
    }
}

/// Builds a witness separating `target` from the product span, if one
/// exists. The functional is the first nullspace vector of the product
/// matrix, in canonical order, that does not vanish on `target`.
pub fn dual_witness(span: &ProductSpan, target: &Poly) -> Option<DualWitness> {
    if !target.supported_on(&span.monomials) || span.contains(target) {
        return None;
    }
    let v = target.coefficient_vector(&span.monomials);
    span.rref.nullspace().into_iter().find_map(|w| {
        let value = linalg::dot(&w, &v);
        (!value.is_zero()).then(|| DualWitness {
            nvars: target.nvars(),
            monomials: span.monomials.clone(),
            functional: w,
            products: span.products.len(),
            value,
        })
    })
}

/// A gap element `g` in `I_{2,2d}(A)` outside the product span, with its
/// witness and a basis of the whole complement.
#[derive(Debug, Clone)]
pub struct Gap {
    pub g: Poly,
    pub witness: DualWitness,
    /// Reduced elements of `I_{2,2d}(A)` which, together with the
    /// products, span `I_{2,2d}(A)`.
    pub complement: Vec<Poly>,
    pub singular_dim: usize,
    pub span: ProductSpan,
    pub basis: IdealBasis,
}

pub fn gap_element(a: &PointSet, d: u32) -> Result<Option<Gap>> {
    let basis = vanishing_basis(a, d, 1)?;
    let span = product_span(&basis)?;
    let singular = vanishing_basis(a, 2 * d, 2)?;
    let mut complement: Vec<Poly> = Vec::new();
    let mut rows: Vec<Vec<Rational>> = Vec::new();
    for h in &singular.basis {
        let r = span.reduce(h);
        if r.is_zero() {
            continue;
        }
        let v = r.coefficient_vector(&span.monomials);
        rows.push(v);
        if linalg::rank(&rows, span.monomials.len()) == rows.len() {
            complement.push(r.primitive());
        } else {
            rows.pop();
        }
    }
    let Some(g) = complement.first().cloned() else {
        return Ok(None);
    };
    let witness = dual_witness(&span, &g).expect("reduced element lies outside the span");
    Ok(Some(Gap {
        g,
        witness,
        complement,
        singular_dim: singular.dim(),
        span,
        basis,
    }))
}

/// Whether at every point the gradients of the basis span every direction
/// (all `n` affine directions, or the `n - 1` directions transverse to the
/// point for forms).
pub fn fullness(a: &PointSet, basis: &IdealBasis) -> Result<bool> {
    let n = a.nvars();
    let need = match a.mode {
        Mode::Affine => n,
        Mode::Projective => n - 1,
    };
    let grads: Vec<Vec<Poly>> = basis.basis.iter().map(Poly::gradient).collect();
    for p in a.points() {
        let rows = grads
            .iter()
            .map(|g| g.iter().map(|d| d.evaluate(p)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        if linalg::rank(&rows, n) < need {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Incidence counts for a planar configuration.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfigReport {
    pub points: usize,
    pub max_collinear: usize,
    pub max_on_conic: usize,
    pub all_on_conic: bool,
    pub collinear_witness: Vec<usize>,
    pub conic_witness: Vec<usize>,
}

fn veronese(p: &[Rational]) -> Vec<Rational> {
    let (x, y, z) = (&p[0], &p[1], &p[2]);
    vec![x * x, x * y, y * y, x * z, y * z, z * z]
}

fn det3(a: &[Rational], b: &[Rational], c: &[Rational]) -> Rational {
    &a[0] * (&b[1] * &c[2] - &b[2] * &c[1]) - &a[1] * (&b[0] * &c[2] - &b[2] * &c[0])
        + &a[2] * (&b[0] * &c[1] - &b[1] * &c[0])
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

pub fn geometry_report(a: &PointSet) -> Result<ConfigReport> {
    a.require_planar()?;
    let pts = a.projective_points();
    let n = pts.len();
    // Lines through pairs of points, as sorted incidence lists.
    let mut lines: Vec<Vec<usize>> = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let on: Vec<usize> = (0..n)
                .filter(|&k| k == i || k == j || det3(&pts[i], &pts[j], &pts[k]).is_zero())
                .collect();
            if !lines.contains(&on) {
                lines.push(on);
            }
        }
    }
    let collinear_witness = lines.iter().max_by_key(|l| l.len()).cloned().unwrap_or_else(|| (0..n).collect());
    let ver: Vec<Vec<Rational>> = pts.iter().map(|p| veronese(p)).collect();
    let all_on_conic = linalg::rank(&ver, 6) < 6;

    let mut conic_witness: Vec<usize> = (0..n.min(5)).collect();
    if n > 5 {
        if all_on_conic {
            conic_witness = (0..n).collect();
        } else {
            for subset in combinations(n, 5) {
                let rows: Vec<Vec<Rational>> = subset.iter().map(|&i| ver[i].clone()).collect();
                let ns = linalg::nullspace(&rows, 6);
                if ns.len() != 1 {
                    continue;
                }
                let on: Vec<usize> = (0..n).filter(|&k| linalg::dot(&ns[0], &ver[k]).is_zero()).collect();
                if on.len() > conic_witness.len() {
                    conic_witness = on;
                }
            }
            // Degenerate conics: pairs of lines.
            for (i, l1) in lines.iter().enumerate() {
                for l2 in lines.iter().skip(i + 1) {
                    let mut on = l1.clone();
                    on.extend(l2.iter().filter(|k| !l1.contains(k)));
                    on.sort_unstable();
                    if on.len() > conic_witness.len() {
                        conic_witness = on;
                    }
                }
            }
        }
    }
    Ok(ConfigReport {
        points: n,
        max_collinear: if n < 2 { n } else { collinear_witness.len() },
        max_on_conic: conic_witness.len(),
        all_on_conic,
        collinear_witness,
        conic_witness,
    })
}

/// Hilbert's auxiliary pair: a quadratic `phi` through five of nine points
/// and a quartic `psi` through the same five and singular at three more.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PhiPsi {
    pub phi: Poly,
    pub psi: Poly,
    pub value_at_ninth: Rational,
}

fn unique_in(points: &PointSet, conditions: Vec<Vec<Rational>>, monomials: &[Monomial]) -> Result<Poly> {
    let ns = linalg::nullspace(&conditions, monomials.len());
    if ns.len() != 1 {
        return Err(Error::NullspaceDimension(ns.len()));
    }
    Ok(Poly::from_coefficients(points.nvars(), monomials, &ns[0]).primitive())
}

pub fn phi_psi(a9: &PointSet, five: &[usize], three: &[usize], ninth: usize) -> Result<PhiPsi> {
    if a9.len() != 9 {
        return Err(Error::InvalidPointSet(format!("expected 9 points, got {}", a9.len())));
    }
    if a9.mode != Mode::Affine {
        return Err(Error::InvalidPointSet("phi/psi construction needs affine points".into()));
    }
    a9.require_planar()?;
    let mut all: Vec<usize> = five.iter().chain(three).copied().chain([ninth]).collect();
    all.sort_unstable();
    all.dedup();
    if five.len() != 5 || three.len() != 3 || all != (0..9).collect::<Vec<_>>() {
        return Err(Error::InvalidPointSet("partition must split the nine indices 5 + 3 + 1".into()));
    }
    let pick = |idx: &[usize]| idx.iter().map(|&i| a9.points[i].clone()).collect::<Vec<_>>();
    let m2 = space_monomials(Mode::Affine, 2, 2);
    let phi = unique_in(a9, condition_matrix(&pick(five), &m2, 1), &m2)?;
    let m4 = space_monomials(Mode::Affine, 2, 4);
    let mut rows = condition_matrix(&pick(five), &m4, 1);
    rows.extend(condition_matrix(&pick(three), &m4, 2));
    let psi = unique_in(a9, rows, &m4)?;
    let value = (&phi * &psi).evaluate(&a9.points[ninth])?;
    if value.is_zero() {
        return Err(Error::Configuration("phi * psi vanishes at the ninth point".into()));
    }
    Ok(PhiPsi {
        phi,
        psi,
        value_at_ninth: value,
    })
}

/// The cubic singular at point `singular` and through the other six of
/// seven points (no four on a line, not all on a conic). Normalized to a
/// leading coefficient of one.
pub fn singular_cubic(a7: &PointSet, singular: usize) -> Result<Poly> {
    if a7.len() != 7 || singular >= 7 {
        return Err(Error::InvalidPointSet("expected 7 points and a valid singular index".into()));
    }
    let report = geometry_report(a7)?;
    if report.max_collinear >= 4 {
        return Err(Error::Configuration(format!("{} points on a line", report.max_collinear)));
    }
    if report.all_on_conic {
        return Err(Error::Configuration("all seven points lie on a conic".into()));
    }
    let monomials = space_monomials(a7.mode, a7.nvars(), 3);
    let p1 = vec![a7.points[singular].clone()];
    let others: Vec<Vec<Rational>> = (0..7).filter(|&i| i != singular).map(|i| a7.points[i].clone()).collect();
    let mut rows = condition_matrix(&p1, &monomials, 2);
    rows.extend(condition_matrix(&others, &monomials, 1));
    let ns = linalg::nullspace(&rows, monomials.len());
    if ns.len() != 1 {
        return Err(Error::Configuration(format!(
            "singular cubic is not unique (solution space of dimension {})",
            ns.len()
        )));
    }
    Ok(Poly::from_coefficients(a7.nvars(), &monomials, &ns[0]).monic())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    pub(crate) fn robinson() -> PointSet {
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
    fn rejects_duplicates() {
        assert!(PointSet::from_ints(Mode::Affine, &[&[1, 2], &[1, 2]]).is_err());
        assert!(PointSet::from_ints(Mode::Projective, &[&[1, 2, 1], &[2, 4, 2]]).is_err());
        assert!(PointSet::from_ints(Mode::Projective, &[&[0, 0, 0]]).is_err());
    }

    #[test]
    fn robinson_ideal() {
        let b = vanishing_basis(&robinson(), 3, 1).unwrap();
        assert_eq!(b.dim(), 2);
        assert!(b.same_span(&[p("x^3 - x"), p("y^3 - y")]));
        assert_eq!(vanishing_basis(&robinson(), 6, 2).unwrap().dim(), 4);
        assert!(fullness(&robinson(), &b).unwrap());
    }

    #[test]
    fn robinson_gap_contains_classical_sextic() {
        let gap = gap_element(&robinson(), 3).unwrap().unwrap();
        assert_eq!(gap.complement.len(), 1);
        assert!(gap.witness.verify(&gap.span.products, &gap.g));
        let classical = &(&p("x^2 - 1") * &p("y^2 - 1")) * &p("1 - x^2 - y^2");
        let mut all = gap.span.products.clone();
        all.extend(gap.complement.iter().cloned());
        let big = IdealBasis::from_polys(robinson(), 6, 2, all).unwrap();
        assert!(big.spans(&classical));
    }

    #[test]
    fn single_point_has_no_gap() {
        let a = PointSet::from_ints(Mode::Affine, &[&[0, 0]]).unwrap();
        assert!(gap_element(&a, 1).unwrap().is_none());
    }

    #[test]
    fn fullness_fails_for_double_zero() {
        let a = PointSet::from_ints(Mode::Affine, &[&[0, 0]]).unwrap();
        let b = IdealBasis::from_polys(a.clone(), 2, 1, vec![p("x^2"), p("x y")]).unwrap();
        assert!(!fullness(&a, &b).unwrap());
    }

    #[test]
    fn dependent_basis_rejected() {
        let a = PointSet::from_ints(Mode::Affine, &[&[0, 0]]).unwrap();
        let err = IdealBasis::from_polys(a, 1, 1, vec![p("x"), p("2 x")]).unwrap_err();
        assert_eq!(err, Error::DependentBasis);
    }

    #[test]
    fn geometry_of_robinson_points() {
        let r = geometry_report(&robinson()).unwrap();
        assert_eq!(r.max_collinear, 3);
        assert_eq!(r.max_on_conic, 6);
        let three = PointSet::from_ints(Mode::Affine, &[&[0, 0], &[1, 1], &[2, 2]]).unwrap();
        let r = geometry_report(&three).unwrap();
        assert_eq!(r.max_collinear, 3);
        assert!(r.all_on_conic);
    }

    #[test]
    fn singular_cubic_is_unique() {
        let a = PointSet::from_ints(
            Mode::Affine,
            &[&[0, 0], &[1, 0], &[-1, 0], &[0, 1], &[0, -1], &[1, 1], &[-1, -1]],
        )
        .unwrap();
        let c = singular_cubic(&a, 0).unwrap();
        assert!(c.is_singular_at(&[int(0), int(0)]).unwrap());
        for q in &a.points()[1..] {
            assert!(c.evaluate(q).unwrap().is_zero());
        }
        let four = PointSet::from_ints(
            Mode::Affine,
            &[&[0, 0], &[1, 0], &[2, 0], &[3, 0], &[0, 1], &[1, 2], &[5, 7]],
        )
        .unwrap();
        assert!(matches!(singular_cubic(&four, 4), Err(Error::Configuration(_))));
    }
}
