//! Floating-point search over the unit sphere: quasi-random sampling,
//! Nelder–Mead refinement, the perturbation-constant estimate and
//! positivity audits. Nothing here is rigorous.

use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::rational::{format_rational, from_f64_snapshot, to_f64, Rational};

/// A polynomial with `f64` coefficients for fast evaluation.
#[derive(Debug, Clone)]
pub struct FloatPoly {
    nvars: usize,
    degrees: Vec<usize>,
    terms: Vec<(f64, Vec<u32>)>,
}

impl FloatPoly {
    pub fn new(p: &Poly) -> Self {
        let nvars = p.nvars();
        let degrees = (0..nvars).map(|i| p.degree_in(i) as usize).collect();
        let terms = p.terms().map(|(m, c)| (to_f64(c), m.0.clone())).collect();
        FloatPoly { nvars, degrees, terms }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        let powers: Vec<Vec<f64>> = x
            .iter()
            .zip(&self.degrees)
            .map(|(&xi, &d)| {
                let mut v = Vec::with_capacity(d + 1);
                let mut acc = 1.0;
                for _ in 0..=d {
                    v.push(acc);
                    acc *= xi;
                }
                v
            })
            .collect();
        self.terms
            .iter()
            .map(|(c, e)| e.iter().enumerate().fold(*c, |acc, (i, &k)| acc * powers[i][k as usize]))
            .sum()
    }
}

fn normalize(v: &[f64]) -> Vec<f64> {
    let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    v.iter().map(|x| x / n).collect()
}

/// Where sample directions come from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SampleRegion {
    /// The whole unit sphere.
    Sphere,
    /// Points `(x, y, 1)` of an affine box in the chart `z = 1`, lifted to
    /// the sphere. Ternary forms only.
    AffineBox { x: (f64, f64), y: (f64, f64) },
}

/// Deterministic quasi-random directions. The R_d (generalized golden
/// ratio) sequence is nested, so any prefix of a larger sample is itself a
/// sample. A nonzero seed applies a random rotation modulo 1; above three
/// variables the directions are pseudo-random Gaussian instead.
#[derive(Debug, Clone)]
pub struct Sampler {
    nvars: usize,
    region: SampleRegion,
    alpha: Vec<f64>,
    offset: Vec<f64>,
    seed: u64,
}

impl Sampler {
    pub fn new(nvars: usize, region: SampleRegion, seed: u64) -> Result<Self> {
        if nvars < 2 {
            return Err(Error::Domain("sampling needs at least two variables".into()));
        }
        if matches!(region, SampleRegion::AffineBox { .. }) && nvars != 3 {
            return Err(Error::Domain("box sampling needs ternary forms".into()));
        }
        let dim = match region {
            SampleRegion::Sphere => nvars - 1,
            SampleRegion::AffineBox { .. } => 2,
        };
        let mut phi = 2.0f64;
        for _ in 0..64 {
            phi = (1.0 + phi).powf(1.0 / (dim as f64 + 1.0));
        }
        let alpha = (1..=dim).map(|j| (1.0 / phi.powi(j as i32)).fract()).collect();
        let offset = if seed == 0 {
            vec![0.5; dim]
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..dim).map(|_| rng.gen::<f64>()).collect()
        };
        Ok(Sampler {
            nvars,
            region,
            alpha,
            offset,
            seed,
        })
    }

    fn unit(&self, i: usize) -> Vec<f64> {
        self.alpha
            .iter()
            .zip(&self.offset)
            .map(|(a, o)| (o + a * i as f64).fract())
            .collect()
    }

    /// The `i`-th direction.
    pub fn point(&self, i: usize) -> Vec<f64> {
        use std::f64::consts::TAU;
        match &self.region {
            SampleRegion::AffineBox { x, y } => {
                let u = self.unit(i);
                normalize(&[x.0 + u[0] * (x.1 - x.0), y.0 + u[1] * (y.1 - y.0), 1.0])
            }
            SampleRegion::Sphere => match self.nvars {
                2 => {
                    let t = TAU * self.unit(i)[0];
                    vec![t.cos(), t.sin()]
                }
                3 => {
                    let u = self.unit(i);
                    let z = 1.0 - 2.0 * u[0];
                    let r = (1.0 - z * z).max(0.0).sqrt();
                    let t = TAU * u[1];
                    vec![r * t.cos(), r * t.sin(), z]
                }
                n => {
                    let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
                    rng.set_stream(i as u64);
                    let v: Vec<f64> = (0..n).map(|_| rng.sample(StandardNormal)).collect();
                    normalize(&v)
                }
            },
        }
    }
}

/// Minimizes `f` from `start` with the Nelder–Mead simplex method.
pub fn nelder_mead<F: Fn(&[f64]) -> f64>(f: F, start: &[f64], step: f64, max_iter: usize) -> (f64, Vec<f64>) {
    let n = start.len();
    let mut simplex: Vec<(f64, Vec<f64>)> = Vec::with_capacity(n + 1);
    simplex.push((f(start), start.to_vec()));
    for i in 0..n {
        let mut v = start.to_vec();
        v[i] += step;
        simplex.push((f(&v), v));
    }
    let order = |s: &mut Vec<(f64, Vec<f64>)>| s.sort_by(|a, b| a.0.total_cmp(&b.0));
    for _ in 0..max_iter {
        order(&mut simplex);
        let (best, worst) = (simplex[0].0, simplex[n].0);
        if (worst - best).abs() <= 1e-14 * (1.0 + best.abs()) {
            break;
        }
        let centroid: Vec<f64> = (0..n)
            .map(|k| simplex[..n].iter().map(|(_, v)| v[k]).sum::<f64>() / n as f64)
            .collect();
        let along = |t: f64| -> Vec<f64> {
            centroid
                .iter()
                .zip(&simplex[n].1)
                .map(|(c, w)| c + t * (c - w))
                .collect()
        };
        let xr = along(1.0);
        let fr = f(&xr);
        if fr < simplex[0].0 {
            let xe = along(2.0);
            let fe = f(&xe);
            simplex[n] = if fe < fr { (fe, xe) } else { (fr, xr) };
        } else if fr < simplex[n - 1].0 {
            simplex[n] = (fr, xr);
        } else {
            let xc = if fr < worst { along(0.5) } else { along(-0.5) };
            let fc = f(&xc);
            if fc < worst.min(fr) {
                simplex[n] = (fc, xc);
            } else {
                let b = simplex[0].1.clone();
                for s in simplex.iter_mut().skip(1) {
                    s.1 = b.iter().zip(&s.1).map(|(bi, si)| bi + 0.5 * (si - bi)).collect();
                    s.0 = f(&s.1);
                }
            }
        }
    }
    order(&mut simplex);
    simplex.swap_remove(0)
}

/// Parameters of the sphere search.
#[derive(Debug, Clone, PartialEq)]
pub struct SearchConfig {
    pub samples: usize,
    pub refine_starts: usize,
    pub seed: u64,
    /// Directions with `-g < eps` are skipped.
    pub eps: f64,
    pub region: SampleRegion,
    /// Homogeneous points where `f` and `g` are both singular; the ratio
    /// has a finite directional limit there which sampling cannot reach.
    pub anchors: Vec<Vec<Rational>>,
    /// Refinement also runs at prefixes of `base * 2^k` samples, so the
    /// estimate never increases when the sample count doubles.
    pub checkpoint_base: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            samples: 200_000,
            refine_starts: 32,
            seed: 0,
            eps: 1e-12,
            region: SampleRegion::Sphere,
            anchors: Vec::new(),
            checkpoint_base: 1024,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MinimumSource {
    Sample,
    Refined,
    AnchorLimit,
    Unconstrained,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Perturbation {
    /// Estimate of `sup { c : f + c g psd }`; infinite when `g >= 0` on
    /// every sample.
    pub c_max_estimate: f64,
    /// Unit vector where the ratio `f / (-g)` is smallest; for an anchor
    /// limit, the anchor itself.
    pub argmin: Vec<f64>,
    /// Approach direction for an anchor limit.
    pub direction: Option<Vec<f64>>,
    pub source: MinimumSource,
    /// Running estimate at each dyadic checkpoint.
    pub checkpoints: Vec<(usize, f64)>,
    pub samples: usize,
    pub seed: u64,
}

fn homogenized_pair(f: &Poly, g: &Poly) -> Result<(Poly, Poly)> {
    if f.nvars() != g.nvars() {
        return Err(Error::Arity {
            expected: f.nvars(),
            got: g.nvars(),
        });
    }
    if g.degree() > f.degree() {
        return Err(Error::DegreeTooLow {
            target: f.degree(),
            degree: g.degree(),
        });
    }
    if f.degree() % 2 == 1 {
        return Err(Error::Domain("f must have even degree".into()));
    }
    let same = f.is_homogeneous() && (g.is_zero() || (g.is_homogeneous() && g.degree() == f.degree()));
    if same {
        Ok((f.clone(), g.clone()))
    } else {
        let n = f.nvars();
        Ok((f.homogenize(f.degree(), n)?, g.homogenize(f.degree(), n)?))
    }
}

/// Exact Hessian at `p`, as floats.
fn hessian_f64(f: &Poly, p: &[Rational]) -> Result<DMatrix<f64>> {
    let n = f.nvars();
    let mut h = DMatrix::zeros(n, n);
    for i in 0..n {
        let fi = f.partial(i);
        for j in i..n {
            let v = to_f64(&fi.partial(j).evaluate(p)?);
            h[(i, j)] = v;
            h[(j, i)] = v;
        }
    }
    Ok(h)
}

/// Orthonormal basis of the complement of `p`.
fn complement_basis(p: &[f64]) -> DMatrix<f64> {
    let n = p.len();
    let mut basis: Vec<DVector<f64>> = vec![DVector::from_column_slice(&normalize(p))];
    for k in 0..n {
        let mut v = DVector::zeros(n);
        v[k] = 1.0;
        for b in &basis {
            let d = b.dot(&v);
            v -= b * d;
        }
        let norm = v.norm();
        if norm > 1e-8 && basis.len() < n {
            basis.push(v / norm);
        }
    }
    DMatrix::from_columns(&basis[1..])
}

/// `inf h^T A h / (-h^T C h)` over `h` in the complement of the anchor,
/// where `A, C` are the Hessians of `f, g` at the anchor.
fn anchor_limit(f: &Poly, g: &Poly, p: &[Rational]) -> Result<Option<(f64, Vec<f64>)>> {
    let pf: Vec<f64> = p.iter().map(to_f64).collect();
    let b = complement_basis(&pf);
    let a = b.transpose() * hessian_f64(f, p)? * &b;
    let c = b.transpose() * hessian_f64(g, p)? * &b;
    let Some(chol) = a.clone().cholesky() else {
        // f is not round here: the limit is 0 along a null direction of A
        // on which g is negative.
        let eig = SymmetricEigen::new(a.clone());
        let scale = eig.eigenvalues.amax().max(1.0);
        for (k, lam) in eig.eigenvalues.iter().enumerate() {
            let u = eig.eigenvectors.column(k);
            if lam.abs() < 1e-12 * scale && -(u.transpose() * &c * u)[(0, 0)] > 1e-12 {
                return Ok(Some((0.0, (&b * u).iter().copied().collect())));
            }
        }
        return Ok(None);
    };
    let linv = chol.l().try_inverse().expect("cholesky factor is invertible");
    let m = -(&linv * &c * linv.transpose());
    let m = (&m + m.transpose()) * 0.5;
    let eig = SymmetricEigen::new(m);
    let (k, mu) = eig
        .eigenvalues
        .iter()
        .copied()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(&b.1))
        .expect("nonempty spectrum");
    if mu <= 0.0 {
        return Ok(None);
    }
    let h = linv.transpose() * eig.eigenvectors.column(k);
    Ok(Some((1.0 / mu, normalize((&b * h).as_slice()))))
}

fn checkpoint_sizes(samples: usize, base: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut k = base.max(1);
    while k < samples {
        out.push(k);
        k *= 2;
    }
    out.push(samples);
    out
}

fn best_indices(values: &[f64], count: usize) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..values.len()).filter(|&i| values[i].is_finite()).collect();
    idx.sort_by(|&a, &b| values[a].total_cmp(&values[b]).then(a.cmp(&b)));
    idx.truncate(count);
    idx
}

/// Estimates the largest `c` with `f + c g` psd, as the infimum of
/// `f / (-g)` over sphere directions where `g < 0`.
pub fn max_perturbation(f: &Poly, g: &Poly, cfg: &SearchConfig) -> Result<Perturbation> {
    let (fh, gh) = homogenized_pair(f, g)?;
    let n = fh.nvars();
    let sampler = Sampler::new(n, cfg.region.clone(), cfg.seed)?;
    let (ff, gf) = (FloatPoly::new(&fh), FloatPoly::new(&gh));
    let eps = cfg.eps;
    let ratio = |v: &[f64]| -> f64 {
        let u = normalize(v);
        let gv = -gf.eval(&u);
        if gv > eps {
            ff.eval(&u) / gv
        } else {
            f64::INFINITY
        }
    };

    let evaluated: Vec<(f64, f64)> = (0..cfg.samples)
        .into_par_iter()
        .map(|i| {
            let u = sampler.point(i);
            let fv = ff.eval(&u);
            let gv = -gf.eval(&u);
            (fv, if gv > eps { fv / gv } else { f64::INFINITY })
        })
        .collect();
    if let Some(i) = (0..cfg.samples).find(|&i| evaluated[i].0 < -1e-9) {
        return Err(Error::Domain(format!(
            "f is negative at sampled direction {:?}",
            sampler.point(i)
        )));
    }
    let ratios: Vec<f64> = evaluated.iter().map(|e| e.1).collect();

    let mut anchor_best: Option<(f64, Vec<f64>, Vec<f64>)> = None;
    for p in &cfg.anchors {
        if p.len() != n {
            return Err(Error::Arity {
                expected: n,
                got: p.len(),
            });
        }
        if let Some((v, dir)) = anchor_limit(&fh, &gh, p)? {
            if anchor_best.as_ref().is_none_or(|b| v < b.0) {
                let pf: Vec<f64> = normalize(&p.iter().map(to_f64).collect::<Vec<_>>());
                anchor_best = Some((v, pf, dir));
            }
        }
    }

    let mut refined: BTreeMap<usize, (f64, Vec<f64>)> = BTreeMap::new();
    let mut checkpoints = Vec::new();
    let mut best = (f64::INFINITY, Vec::new(), MinimumSource::Unconstrained);
    for size in checkpoint_sizes(cfg.samples, cfg.checkpoint_base) {
        let starts = best_indices(&ratios[..size], cfg.refine_starts);
        let fresh: Vec<usize> = starts.iter().copied().filter(|i| !refined.contains_key(i)).collect();
        let results: Vec<(usize, (f64, Vec<f64>))> = fresh
            .par_iter()
            .map(|&i| (i, nelder_mead(ratio, &sampler.point(i), 0.02, 400 * n)))
            .collect();
        refined.extend(results);
        if let Some(&i) = starts.first() {
            if ratios[i] < best.0 {
                best = (ratios[i], sampler.point(i), MinimumSource::Sample);
            }
        }
        for i in &starts {
            let (v, x) = &refined[i];
            if *v < best.0 {
                best = (*v, normalize(x), MinimumSource::Refined);
            }
        }
        let mut current = best.0;
        if let Some((v, _, _)) = &anchor_best {
            current = current.min(*v);
        }
        checkpoints.push((size, current));
    }

    let mut direction = None;
    if let Some((v, p, dir)) = anchor_best {
        if v <= best.0 {
            best = (v, p, MinimumSource::AnchorLimit);
            direction = Some(dir);
        }
    }
    Ok(Perturbation {
        c_max_estimate: best.0,
        argmin: best.1,
        direction,
        source: best.2,
        checkpoints,
        samples: cfg.samples,
        seed: cfg.seed,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum AuditVerdict {
    NoNegativityFound,
    NegativeWitness {
        point: Vec<String>,
        /// Exact value at the rational snapshot of the point, when it is
        /// negative too.
        exact_value: Option<String>,
    },
}

/// Advisory result of a sampled positivity check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuditReport {
    pub samples: usize,
    pub min_value: f64,
    pub argmin: Vec<f64>,
    pub tolerance: f64,
    pub seed: u64,
    pub verdict: AuditVerdict,
    pub rigorous: bool,
}

impl AuditReport {
    pub fn found_negative(&self) -> bool {
        matches!(self.verdict, AuditVerdict::NegativeWitness { .. })
    }
}

/// Samples a form on the unit sphere, refines the smallest values and
/// reports the minimum; negative minima below `-tol` yield a witness.
pub fn psd_audit(form: &Poly, samples: usize, tol: f64, seed: u64) -> Result<AuditReport> {
    if !form.is_homogeneous() {
        return Err(Error::NotHomogeneous);
    }
    let n = form.nvars();
    let sampler = Sampler::new(n, SampleRegion::Sphere, seed)?;
    let fp = FloatPoly::new(form);
    let values: Vec<f64> = (0..samples).into_par_iter().map(|i| fp.eval(&sampler.point(i))).collect();
    let objective = |v: &[f64]| fp.eval(&normalize(v));
    let starts = best_indices(&values, 32);
    let refined: Vec<(f64, Vec<f64>)> = starts
        .par_iter()
        .map(|&i| nelder_mead(objective, &sampler.point(i), 0.02, 400 * n))
        .collect();
    let mut best = (f64::INFINITY, vec![0.0; n]);
    for &i in &starts {
        if values[i] < best.0 {
            best = (values[i], sampler.point(i));
        }
    }
    for (v, x) in refined {
        if v < best.0 {
            best = (v, normalize(&x));
        }
    }
    let verdict = if best.0 < -tol {
        let snap: Vec<Rational> = best.1.iter().map(|&c| from_f64_snapshot(c, 1_000_000)).collect();
        let exact = form.evaluate(&snap)?;
        AuditVerdict::NegativeWitness {
            point: snap.iter().map(format_rational).collect(),
            exact_value: (exact < Rational::zero()).then(|| format_rational(&exact)),
        }
    } else {
        AuditVerdict::NoNegativityFound
    };
    Ok(AuditReport {
        samples,
        min_value: best.0,
        argmin: best.1,
        tolerance: tol,
        seed,
        verdict,
        rigorous: false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn p3(s: &str) -> Poly {
        Poly::parse(s, &["x", "y", "z"]).unwrap()
    }

    #[test]
    fn nelder_mead_finds_quadratic_minimum() {
        let (v, x) = nelder_mead(|v| (v[0] - 1.0).powi(2) + (v[1] + 2.0).powi(2), &[0.0, 0.0], 0.5, 2000);
        assert!(v < 1e-10);
        assert!((x[0] - 1.0).abs() < 1e-5 && (x[1] + 2.0).abs() < 1e-5);
    }

    #[test]
    fn sampler_is_on_sphere_and_seeded() {
        let s = Sampler::new(3, SampleRegion::Sphere, 0).unwrap();
        let t = Sampler::new(3, SampleRegion::Sphere, 7).unwrap();
        for i in 0..100 {
            let p = s.point(i);
            assert!((p.iter().map(|x| x * x).sum::<f64>() - 1.0).abs() < 1e-12);
        }
        assert_ne!(s.point(3), t.point(3));
        let q = Sampler::new(4, SampleRegion::Sphere, 2).unwrap();
        assert_eq!(q.point(5), q.point(5));
    }

    #[test]
    fn sextic_power_sum_minimum() {
        let r = psd_audit(&p3("x^6 + y^6 + z^6"), 20_000, 1e-9, 0).unwrap();
        assert!((r.min_value - 1.0 / 9.0).abs() < 1e-8);
        assert!(!r.found_negative());
    }

    #[test]
    fn anchor_limit_of_quadratics() {
        // f = x^2 + y^2, g = -x^2 + y^2 at the pole (0, 0, 1) of ternary
        // quartics x^2 z^2 + y^2 z^2 and (y^2 - x^2) z^2: ratio 1 along x.
        let f = p3("x^2 z^2 + y^2 z^2");
        let g = p3("y^2 z^2 - x^2 z^2");
        let (v, dir) = anchor_limit(&f, &g, &[int(0), int(0), int(1)]).unwrap().unwrap();
        assert!((v - 1.0).abs() < 1e-12);
        assert!(dir[0].abs() > 0.999);
    }

    #[test]
    fn negative_form_is_rejected() {
        let err = max_perturbation(&p3("x^2 - y^2"), &p3("z^2"), &SearchConfig {
            samples: 1000,
            ..SearchConfig::default()
        });
        assert!(err.is_err());
    }
}
